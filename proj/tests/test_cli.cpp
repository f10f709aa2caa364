#include "support.hpp"
#include "tripreg/evaluation.hpp"
#include "tripreg/fixtures.hpp"
#include "tripreg/ply.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace tripreg;
using namespace testing;
namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "tripreg_test_cli";

struct Run {
    int code = -1;
    std::string err;
};

Run run(const std::string& args) {
    const fs::path err = kWork / "stderr.txt";
    const std::string cmd = std::string(TRIPREG_CLI) + " " + args + " > " + (kWork / "stdout.txt").string() + " 2> " +
                            err.string();
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(err);
    std::stringstream buf;
    buf << in.rdbuf();
    r.err = buf.str();
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

struct Workspace {
    Workspace() {
        fs::remove_all(kWork);
        fs::create_directories(kWork);
    }
};

}  // namespace

TEST_CASE_FIXTURE(Workspace, "fixture and synth write the dataset layout") {
    const std::string model = (kWork / "model.ply").string();
    REQUIRE(run("fixture cube-bumps --points 8000 --out " + model).code == 0);
    CHECK(read_ply(model).size() == 8000);

    CHECK(run("synth " + model + " --out " + (kWork / "ring18").string()).code == 0);
    std::size_t plys = 0, gts = 0;
    for (const auto& e : fs::directory_iterator(kWork / "ring18")) {
        const auto name = e.path().filename().string();
        if (name.rfind("view_", 0) == 0) (e.path().extension() == ".ply" ? plys : gts)++;
    }
    CHECK(plys == 18);
    CHECK(gts == 18);

    CHECK(run("synth " + model + " --views 12 --step 30 --camera 0,0,9 --out " + (kWork / "ring12").string()).code == 0);
    CHECK(fs::exists(kWork / "ring12" / "view_11.gt"));
    CHECK_FALSE(fs::exists(kWork / "ring12" / "view_12.gt"));

    const Run bad = run("synth " + model + " --views 10 --step 30 --out " + (kWork / "bad").string());
    CHECK(bad.code == 2);
    CHECK(count_lines(bad.err) == 1);
    CHECK(bad.err.find("[synth]") != std::string::npos);
    CHECK(run("synth " + model + " --camera 0,0 --out " + (kWork / "bad").string()).code == 2);
}

TEST_CASE_FIXTURE(Workspace, "register self and a planted pair") {
    const PointCloud model = make_sphere_union(15000, 21);
    PointCloud x(model.points);
    const RigidTransform planted{rotation_about_y(deg_to_rad(20.0)), Vec3(0.1, 0.0, -0.05)};
    write_ply(x, kWork / "x.ply");
    write_ply(apply_transform(planted, x), kWork / "y.ply");

    const std::string out = (kWork / "self.txt").string();
    REQUIRE(run("register " + (kWork / "x.ply").string() + " " + (kWork / "x.ply").string() + " --out " + out).code == 0);
    const RigidTransform self = TransformRecord::load(out).rigid();
    CHECK(rad_to_deg(rotation_angle_between(self.rotation, Mat3::Identity())) < 0.1);
    CHECK(self.translation.norm() < 1e-4);

    const std::string est = (kWork / "est.txt").string();
    const std::string votes = (kWork / "votes").string();
    REQUIRE(run("register " + (kWork / "x.ply").string() + " " + (kWork / "y.ply").string() + " --out " + est +
                " --dump-votes " + votes + " --set keypoint_count=1200")
                .code == 0);
    const RigidTransform got = TransformRecord::load(est).rigid();
    CHECK(rad_to_deg(rotation_angle_between(got.rotation, planted.inverse().rotation)) < 3.0);
    const std::string rot = slurp(fs::path(votes) / "rotations.txt");
    CHECK(count_lines(rot) > 0);
    CHECK(count_lines(rot) == count_lines(slurp(fs::path(votes) / "translations.txt")));
}

TEST_CASE_FIXTURE(Workspace, "register error exit codes") {
    const Run missing = run("register /nonexistent/a.ply /nonexistent/b.ply --out " + (kWork / "t.txt").string());
    CHECK(missing.code == 3);
    CHECK(count_lines(missing.err) == 1);
    CHECK(missing.err.find("[io]") != std::string::npos);
    CHECK_FALSE(fs::exists(kWork / "t.txt"));

    write_ply(make_sphere(200, 1), kWork / "s.ply");
    const Run pipeline = run("register " + (kWork / "s.ply").string() + " " + (kWork / "s.ply").string() + " --out " +
                             (kWork / "t.txt").string());
    CHECK(pipeline.code == 2);
    CHECK(pipeline.err.find("[config]") != std::string::npos);

    std::ofstream(kWork / "bad.cfg") << "knn_k = many\n";
    const Run parse = run("register " + (kWork / "s.ply").string() + " " + (kWork / "s.ply").string() + " --config " +
                          (kWork / "bad.cfg").string() + " --out " + (kWork / "t.txt").string());
    CHECK(parse.code == 4);
    CHECK(count_lines(parse.err) == 1);

    CHECK(run("register only_one.ply").code == 2);
    CHECK(run("").code == 2);
}

TEST_CASE_FIXTURE(Workspace, "bench dry run and missing views") {
    const std::string model = (kWork / "m.ply").string();
    REQUIRE(run("fixture sphere-union --points 6000 --out " + model).code == 0);
    const std::string ring = (kWork / "ring").string();
    REQUIRE(run("synth " + model + " --out " + ring).code == 0);
    const std::string report = (kWork / "report.tsv").string();
    REQUIRE(run("bench " + ring + " --dry-run --out " + report).code == 0);
    std::istringstream in(slurp(report));
    std::string line;
    std::getline(in, line);
    std::size_t rows = 0;
    while (std::getline(in, line) && !line.empty()) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, '\t')) cells.push_back(cell);
        CHECK(cells[3] == "0");
        ++rows;
    }
    CHECK(rows == 18);
    CHECK(fs::exists(report + ".timings.tsv"));

    fs::remove(fs::path(ring) / "view_05.ply");
    const Run missing = run("bench " + ring + " --dry-run --out " + report);
    CHECK(missing.code == 3);
    CHECK(missing.err.find("view_05.ply") != std::string::npos);
}
