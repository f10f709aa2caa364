#include "tripreg/bench.hpp"

#include "tripreg/error.hpp"
#include "tripreg/evaluation.hpp"
#include "tripreg/normals.hpp"
#include "tripreg/ply.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <numeric>
#include <regex>
#include <set>
#include <sstream>

namespace tripreg {
namespace {

std::string fmt(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

template <typename F>
std::vector<double> column(const std::vector<BenchRow>& rows, F get) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(get(r));
    return out;
}

void summary_line(std::ostringstream& os, const char* name, const SummaryStats& s) {
    os << name << '\t' << fmt(s.min) << '\t' << fmt(s.median) << '\t' << fmt(s.mean) << '\t' << fmt(s.max)
       << '\n';
}

}  // namespace

SummaryStats SummaryStats::of(std::vector<double> values) {
    SummaryStats s;
    if (values.empty()) return s;
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    s.min = values.front();
    s.max = values.back();
    s.median = n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
    return s;
}

SummaryStats BenchReport::rmse_summary() const {
    return SummaryStats::of(column(rows, [](const BenchRow& r) { return r.rmse; }));
}

SummaryStats BenchReport::rmse_medd_summary() const {
    return SummaryStats::of(column(rows, [](const BenchRow& r) { return r.rmse_medd; }));
}

SummaryStats BenchReport::rotation_summary() const {
    return SummaryStats::of(column(rows, [](const BenchRow& r) { return r.rotation_error_deg; }));
}

SummaryStats BenchReport::time_summary() const {
    return SummaryStats::of(column(rows, [](const BenchRow& r) { return r.seconds; }));
}

std::string BenchReport::to_tsv() const {
    std::ostringstream os;
    os << "model\tsrc_view\tdst_view\trmse\trmse_medd\trotation_error_deg\ttranslation_error\tmedD"
          "\tcorrespondences\ttriplets\tvotes\tconsensus\n";
    for (const auto& r : rows) {
        os << r.model << '\t' << r.src_view << '\t' << r.dst_view << '\t' << fmt(r.rmse) << '\t'
           << fmt(r.rmse_medd) << '\t' << fmt(r.rotation_error_deg) << '\t' << fmt(r.translation_error) << '\t'
           << fmt(r.medD) << '\t' << r.correspondences << '\t' << r.triplets << '\t' << r.votes << '\t'
           << fmt(r.consensus) << '\n';
    }
    os << "\nstatistic\tmin\tmedian\tmean\tmax\n";
    summary_line(os, "rmse", rmse_summary());
    summary_line(os, "rmse_medd", rmse_medd_summary());
    summary_line(os, "rotation_error_deg", rotation_summary());
    return os.str();
}

std::string BenchReport::timings_tsv() const {
    std::vector<std::string> stages;
    for (const auto& r : rows) {
        for (const auto& t : r.timings) {
            if (std::find(stages.begin(), stages.end(), t.stage) == stages.end()) stages.push_back(t.stage);
        }
    }
    std::ostringstream os;
    os << "model\tsrc_view\tdst_view";
    for (const auto& s : stages) os << '\t' << s;
    os << "\ttotal\n";
    for (const auto& r : rows) {
        os << r.model << '\t' << r.src_view << '\t' << r.dst_view;
        for (const auto& s : stages) {
            double sec = 0.0;
            for (const auto& t : r.timings) {
                if (t.stage == s) sec += t.seconds;
            }
            os << '\t' << fmt(sec);
        }
        os << '\t' << fmt(r.seconds) << '\n';
    }
    os << "\nstatistic\tmin\tmedian\tmean\tmax\n";
    summary_line(os, "seconds", time_summary());
    return os.str();
}

BenchReport run_bench(const RingDataset& data, const BenchOptions& options) {
    const std::size_t n = data.views.size();
    if (n < 2) throw Error(ErrorKind::InvalidInput, "a ring needs at least two views");
    if (data.ground_truth.size() != n) {
        throw Error(ErrorKind::InvalidInput, "ground truth count does not match view count");
    }
    options.config.validate();

    BenchReport report;
    report.rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        const PointCloud& x = data.views[i];
        const PointCloud& y = data.views[j];
        const TransformRecord gt(data.ground_truth[i].rigid() * data.ground_truth[j].rigid().inverse());

        BenchRow row;
        row.model = data.model_name;
        row.src_view = i;
        row.dst_view = j;
        const auto start = std::chrono::steady_clock::now();
        TransformRecord estimate = gt;
        if (options.dry_run) {
            row.medD = compute_medD(x, y);
        } else {
            const RegistrationResult result = register_clouds(x, y, options.config);
            estimate = TransformRecord(result.transform);
            const auto& d = result.diagnostics;
            row.medD = d.medD;
            row.correspondences = d.correspondences;
            row.triplets = d.triplets;
            row.votes = d.votes;
            row.consensus = d.consensus;
            row.timings = d.timings;
        }
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        row.rmse = rmse(x, y, estimate, gt);
        row.rmse_medd = row.medD > 0.0 ? row.rmse / row.medD : 0.0;
        const RigidTransform est = estimate.rigid();
        const RigidTransform ref = gt.rigid();
        row.rotation_error_deg = rad_to_deg(rotation_angle_between(est.rotation, ref.rotation));
        row.translation_error = (est.translation - ref.translation).norm();
        report.rows.push_back(std::move(row));
    }
    return report;
}

RingDataset load_ring_dataset(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw Error(ErrorKind::Io, "dataset directory not found: " + dir.string());

    const std::regex pattern(R"(view_(\d+)\.(ply|gt))");
    std::set<std::size_t> indices;
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::smatch m;
        const std::string name = entry.path().filename().string();
        if (std::regex_match(name, m, pattern)) indices.insert(std::stoul(m[1].str()));
    }
    if (indices.empty()) throw Error(ErrorKind::Io, "no view_NN.ply files in " + dir.string());

    const std::size_t count = *indices.rbegin() + 1;
    std::vector<std::string> missing;
    for (std::size_t i = 0; i < count; ++i) {
        for (const char* ext : {".ply", ".gt"}) {
            const fs::path p = dir / (view_stem(i) + ext);
            if (!fs::exists(p)) missing.push_back(p.filename().string());
        }
    }
    if (!missing.empty()) {
        std::string list;
        for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
        throw Error(ErrorKind::Io, "dataset " + dir.string() + " is missing " + list);
    }

    RingDataset data;
    fs::path canonical = fs::weakly_canonical(dir);
    data.model_name = canonical.filename().empty() ? canonical.parent_path().filename().string()
                                                   : canonical.filename().string();
    if (fs::exists(dir / "model.ply")) data.model = read_ply(dir / "model.ply");
    for (std::size_t i = 0; i < count; ++i) {
        data.views.push_back(read_ply(dir / (view_stem(i) + ".ply")));
        data.ground_truth.push_back(TransformRecord::load(dir / (view_stem(i) + ".gt")));
    }
    return data;
}

}  // namespace tripreg
