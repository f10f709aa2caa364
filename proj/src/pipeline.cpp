#include "tripreg/pipeline.hpp"

#include "tripreg/correspondence.hpp"
#include "tripreg/error.hpp"
#include "tripreg/keypoints.hpp"
#include "tripreg/normals.hpp"
#include "tripreg/parallel.hpp"
#include "tripreg/spatial_index.hpp"

#include <charconv>
#include <chrono>
#include <fstream>
#include <sstream>

namespace tripreg {
namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
    T value{};
    text = trim(text);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw Error(ErrorKind::Parse, "config key '" + std::string(key) + "': cannot parse '" + std::string(text) + "'");
    }
    return value;
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace

TripletSearchConfig RegistrationConfig::triplet_config() const {
    TripletSearchConfig t;
    t.ppf.ratio = ppf_thresholds[0];
    t.ppf.angle = deg_to_rad(ppf_thresholds[1]);
    t.ppf.normal_angle = deg_to_rad(ppf_thresholds[2]);
    t.triangle_angle = deg_to_rad(triangle_threshold);
    t.min_triplets = min_triplets;
    t.scan_fraction = scan_fraction;
    return t;
}

void RegistrationConfig::validate() const {
    auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidInput, msg); };
    if (keypoint_count == 0) fail("keypoint_count must be positive");
    if (!(fpfh_radius_factor > 0.0)) fail("fpfh_radius_factor must be positive");
    if (knn_k == 0) fail("knn_k must be positive");
    if (!(curvature_threshold > 0.0)) fail("curvature_threshold must be positive");
    if (!(reliability_range > 0.0)) fail("reliability_range must be positive");
    if (divisions == 0) fail("divisions must be positive");
    if (normal_k < 3) fail("normal_k must be >= 3");
    triplet_config().validate();
}

void RegistrationConfig::set(std::string_view key, std::string_view value) {
    if (key == "keypoint_count") keypoint_count = parse_number<std::size_t>(key, value);
    else if (key == "fpfh_radius_factor") fpfh_radius_factor = parse_number<double>(key, value);
    else if (key == "knn_k") knn_k = parse_number<std::size_t>(key, value);
    else if (key == "curvature_threshold") curvature_threshold = parse_number<double>(key, value);
    else if (key == "reliability_range") reliability_range = parse_number<double>(key, value);
    else if (key == "divisions") divisions = parse_number<std::size_t>(key, value);
    else if (key == "ppf_thresholds") {
        std::string text(value);
        for (auto& c : text) {
            if (c == ',') c = ' ';
        }
        std::istringstream in(text);
        std::array<std::string, 3> parts;
        std::string extra;
        if (!(in >> parts[0] >> parts[1] >> parts[2]) || (in >> extra)) {
            throw Error(ErrorKind::Parse, "config key 'ppf_thresholds' needs three values");
        }
        for (int i = 0; i < 3; ++i) ppf_thresholds[i] = parse_number<double>(key, parts[i]);
    }
    else if (key == "triangle_threshold") triangle_threshold = parse_number<double>(key, value);
    else if (key == "min_triplets") min_triplets = parse_number<std::size_t>(key, value);
    else if (key == "scan_fraction") scan_fraction = parse_number<double>(key, value);
    else if (key == "mode_delta") mode_delta = parse_number<std::size_t>(key, value);
    else if (key == "normal_k") normal_k = parse_number<std::size_t>(key, value);
    else if (key == "threads") threads = parse_number<std::size_t>(key, value);
    else throw Error(ErrorKind::Parse, "unknown config key '" + std::string(key) + "'");
}

RegistrationConfig RegistrationConfig::parse(std::string_view text) { return parse(text, RegistrationConfig{}); }

RegistrationConfig RegistrationConfig::parse(std::string_view text, RegistrationConfig base) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorKind::Parse, "config line " + std::to_string(line_no) + ": expected key = value");
        }
        try {
            base.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const Error& e) {
            throw Error(e.kind(), "config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return base;
}

RegistrationConfig RegistrationConfig::load(const std::filesystem::path& path) {
    return load(path, RegistrationConfig{});
}

RegistrationConfig RegistrationConfig::load(const std::filesystem::path& path, RegistrationConfig base) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), base);
}

std::string RegistrationConfig::to_text() const {
    std::ostringstream out;
    out << "keypoint_count = " << keypoint_count << '\n'
        << "fpfh_radius_factor = " << format_double(fpfh_radius_factor) << '\n'
        << "knn_k = " << knn_k << '\n'
        << "curvature_threshold = " << format_double(curvature_threshold) << '\n'
        << "reliability_range = " << format_double(reliability_range) << '\n'
        << "divisions = " << divisions << '\n'
        << "ppf_thresholds = " << format_double(ppf_thresholds[0]) << ' ' << format_double(ppf_thresholds[1]) << ' '
        << format_double(ppf_thresholds[2]) << '\n'
        << "triangle_threshold = " << format_double(triangle_threshold) << '\n'
        << "min_triplets = " << min_triplets << '\n'
        << "scan_fraction = " << format_double(scan_fraction) << '\n'
        << "mode_delta = " << mode_delta << '\n'
        << "normal_k = " << normal_k << '\n'
        << "threads = " << threads << '\n';
    return out.str();
}

namespace {

class StageClock {
public:
    explicit StageClock(std::vector<StageTiming>& sink) : sink_(sink) {}

    template <typename F>
    auto run(const char* stage, F&& body) {
        const auto start = std::chrono::steady_clock::now();
        try {
            if constexpr (std::is_void_v<decltype(body())>) {
                body();
                record(stage, start);
            } else {
                auto value = body();
                record(stage, start);
                return value;
            }
        } catch (const Error& e) {
            throw e.with_stage(stage);
        }
    }

private:
    void record(const char* stage, std::chrono::steady_clock::time_point start) {
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
        sink_.push_back({stage, dt.count()});
    }

    std::vector<StageTiming>& sink_;
};

}  // namespace

RegistrationResult register_clouds(const PointCloud& x, const PointCloud& y, const RegistrationConfig& cfg) {
    RegistrationResult result;
    auto& diag = result.diagnostics;
    StageClock clock(diag.timings);

    clock.run("config", [&] {
        cfg.validate();
        if (x.empty() || y.empty()) throw Error(ErrorKind::InvalidInput, "input clouds must be non-empty");
        if (x.size() < cfg.keypoint_count || y.size() < cfg.keypoint_count) {
            throw Error(ErrorKind::InvalidInput, "keypoint_count " + std::to_string(cfg.keypoint_count) +
                                                     " exceeds cloud size (" + std::to_string(x.size()) + ", " +
                                                     std::to_string(y.size()) + ")");
        }
    });
    if (cfg.threads != 0) set_max_threads(cfg.threads);

    PointCloud cx, cy;
    clock.run("normals", [&] {
        cx = estimate_normals(x, cfg.normal_k);
        cy = estimate_normals(y, cfg.normal_k);
        diag.degenerate_normals = cx.degenerate.size() + cy.degenerate.size();
    });
    diag.medD = clock.run("medD", [&] { return compute_medD(cx, cy); });

    std::vector<Keypoint> kx, ky;
    clock.run("keypoints", [&] {
        cx = compute_curvatures(cx);
        cy = compute_curvatures(cy);
        kx = detect_keypoints(cx, cfg.keypoint_count);
        ky = detect_keypoints(cy, cfg.keypoint_count);
    });
    diag.keypoints_x = kx.size();
    diag.keypoints_y = ky.size();

    clock.run("fpfh", [&] {
        const double radius = cfg.fpfh_radius_factor * diag.medD;
        kx = compute_fpfh(cx, std::move(kx), radius);
        ky = compute_fpfh(cy, std::move(ky), radius);
        for (const auto& k : kx) diag.isolated_keypoints += k.descriptor.isolated;
        for (const auto& k : ky) diag.isolated_keypoints += k.descriptor.isolated;
    });

    CorrespondenceSet set = clock.run("correspondences", [&] {
        auto s = build_correspondences(kx, ky, cfg.knn_k, cfg.curvature_threshold);
        s.medD = diag.medD;
        return s;
    });
    diag.correspondences = set.size();

    set = clock.run("reliability", [&] { return score_reliability(std::move(set), cfg.reliability_range, cfg.divisions); });
    diag.divisions_clamped = set.divisions_clamped;

    TripletSearchResult search = clock.run("triplets", [&] {
        auto r = generate_triplets(set, cfg.triplet_config());
        if (r.triplets.empty()) {
            throw Error(ErrorKind::EmptySet, "fewer than 3 correspondences; no triplet can be formed");
        }
        return r;
    });
    diag.triplets = search.triplets.size();
    diag.nodes_scanned = search.nodes_scanned;
    diag.graph_edges = search.edges;

    result.votes = clock.run("votes", [&] { return collect_votes(set, search.triplets); });
    diag.degenerate_triplets = result.votes.degenerate_triplets;
    diag.votes = result.votes.rotations.size();

    result.pose = clock.run("mode", [&] {
        return estimate_pose(result.votes.rotations, result.votes.translations, cfg.mode_delta);
    });
    diag.discarded_votes = result.pose.discarded;
    diag.canonicalized_votes = result.pose.canonicalized_votes;
    diag.consensus = result.pose.consensus;
    result.transform = result.pose.transform;
    return result;
}

}  // namespace tripreg
