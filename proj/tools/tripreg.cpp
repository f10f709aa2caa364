#include "tripreg/bench.hpp"
#include "tripreg/error.hpp"
#include "tripreg/evaluation.hpp"
#include "tripreg/fixtures.hpp"
#include "tripreg/pipeline.hpp"
#include "tripreg/ply.hpp"
#include "tripreg/ring.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace tripreg;

namespace {

enum Exit : int {
    kOk = 0,
    kUsage = 2,
    kIo = 3,
    kParse = 4,
    kPipeline = 5,
};

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Io: return kIo;
        case ErrorKind::Parse: return kParse;
        case ErrorKind::InvalidInput: return kUsage;
        default: return kPipeline;
    }
}

std::string fmt(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

RegistrationConfig build_config(const std::string& path, const std::vector<std::string>& sets) {
    RegistrationConfig cfg;
    if (!path.empty()) cfg = RegistrationConfig::load(path);
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw Error(ErrorKind::Parse, "--set expects key=value, got '" + s + "'");
        cfg.set(s.substr(0, eq), s.substr(eq + 1));
    }
    cfg.validate();
    return cfg;
}

std::string votes_text(const VoteSet& votes) {
    std::string out;
    for (const auto& v : votes.vectors) out += fmt(v.x()) + ' ' + fmt(v.y()) + ' ' + fmt(v.z()) + '\n';
    return out;
}

Vec3 parse_camera(const std::string& text) {
    Vec3 c;
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
        const std::size_t end = i < 2 ? text.find(',', pos) : text.size();
        if (end == std::string::npos) throw Error(ErrorKind::InvalidInput, "--camera expects x,y,z");
        const char* first = text.data() + pos;
        const char* last = text.data() + end;
        const auto res = std::from_chars(first, last, c[i]);
        if (res.ec != std::errc{} || res.ptr != last) throw Error(ErrorKind::InvalidInput, "--camera expects x,y,z");
        pos = end + 1;
    }
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Triplet-voting global registration of 3D point clouds"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> sets;

    auto* reg = app.add_subcommand("register", "Estimate the transform mapping dst onto src");
    std::string src_path, dst_path, out_path, votes_dir;
    reg->add_option("src", src_path, "Reference cloud X (PLY)")->required();
    reg->add_option("dst", dst_path, "Cloud Y to align onto X (PLY)")->required();
    reg->add_option("--config", config_path, "Config file (key = value lines)");
    reg->add_option("--set", sets, "Override a config key: key=value");
    reg->add_option("--out", out_path, "Output transform file")->required();
    reg->add_option("--dump-votes", votes_dir, "Write rotation and translation votes to this directory");

    auto* bench = app.add_subcommand("bench", "Register all adjacent pairs of a ring dataset");
    std::string bench_dir, report_path;
    bool dry_run = false;
    bench->add_option("dir", bench_dir, "Dataset directory")->required();
    bench->add_option("--config", config_path, "Config file (key = value lines)");
    bench->add_option("--set", sets, "Override a config key: key=value");
    bench->add_option("--out", report_path, "Report path (TSV); timings go to <out>.timings.tsv")->required();
    bench->add_flag("--dry-run", dry_run, "Use ground truth as the estimate");

    auto* synth = app.add_subcommand("synth", "Generate ring views of a model");
    std::string model_path, synth_out, camera_text;
    std::size_t views = 18;
    double step = 20.0;
    synth->add_option("model", model_path, "Model PLY")->required();
    synth->add_option("--views", views, "Number of views")->capture_default_str();
    synth->add_option("--step", step, "Rotation step in degrees")->capture_default_str();
    synth->add_option("--camera", camera_text, "Camera position x,y,z");
    synth->add_option("--out", synth_out, "Output directory")->required();

    auto* fixture = app.add_subcommand("fixture", "Write a synthetic model");
    std::string fixture_name, fixture_out;
    std::size_t fixture_points = 50000;
    std::uint64_t fixture_seed = 1;
    fixture->add_option("name", fixture_name, "sphere, sphere-union or cube-bumps")
        ->required()
        ->check(CLI::IsMember({"sphere", "sphere-union", "cube-bumps"}));
    fixture->add_option("--points", fixture_points, "Point count")->capture_default_str();
    fixture->add_option("--seed", fixture_seed, "Random seed")->capture_default_str();
    fixture->add_option("--out", fixture_out, "Output PLY")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage: " << e.what() << '\n';
        return kUsage;
    }

    std::string stage = app.get_subcommands().front()->get_name();
    try {
        if (*reg) {
            const RegistrationConfig cfg = build_config(config_path, sets);
            stage = "io";
            const PointCloud x = read_ply(src_path);
            const PointCloud y = read_ply(dst_path);
            stage = "register";
            const RegistrationResult result = register_clouds(x, y, cfg);
            stage = "io";
            TransformRecord(result.transform).save(out_path);
            if (!votes_dir.empty()) {
                fs::create_directories(votes_dir);
                write_text(fs::path(votes_dir) / "rotations.txt", votes_text(result.votes.rotations));
                write_text(fs::path(votes_dir) / "translations.txt", votes_text(result.votes.translations));
            }
            const auto& d = result.diagnostics;
            std::cout << "medD " << fmt(d.medD) << " correspondences " << d.correspondences << " triplets "
                      << d.triplets << " votes " << d.votes << " consensus " << fmt(d.consensus) << '\n';
        } else if (*bench) {
            BenchOptions options;
            options.config = build_config(config_path, sets);
            options.dry_run = dry_run;
            stage = "io";
            const RingDataset data = load_ring_dataset(bench_dir);
            stage = "bench";
            const BenchReport report = run_bench(data, options);
            stage = "io";
            write_text(report_path, report.to_tsv());
            write_text(report_path + ".timings.tsv", report.timings_tsv());
            const auto s = report.rmse_medd_summary();
            std::cout << report.rows.size() << " pairs, rmse/medD median " << fmt(s.median) << " max "
                      << fmt(s.max) << '\n';
        } else if (*synth) {
            stage = "io";
            const PointCloud model = read_ply(model_path);
            stage = "synth";
            RingViewOptions options;
            options.views = views;
            options.step_degrees = step;
            options.camera = camera_text.empty() ? default_camera(model) : parse_camera(camera_text);
            const RingDataset data =
                generate_ring_views(model, options, fs::path(model_path).stem().string());
            stage = "io";
            write_ring_dataset(data, synth_out);
            std::cout << data.views.size() << " views written to " << synth_out << '\n';
        } else if (*fixture) {
            stage = "fixture";
            const PointCloud model = make_fixture(fixture_name, fixture_points, fixture_seed);
            stage = "io";
            write_ply(model, fixture_out);
        }
    } catch (const Error& e) {
        const std::string& label = e.stage().empty() ? stage : e.stage();
        std::cerr << "error [" << label << "] " << to_string(e.kind()) << ": " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error [" << stage << "] io: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "error [" << stage << "] " << e.what() << '\n';
        return kPipeline;
    }
    return kOk;
}
