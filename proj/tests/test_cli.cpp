#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "../tools/cli.hpp"
#include "igahmm/nurbs_patch.hpp"
#include "igahmm/patch_io.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = igahmm::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

/// Fresh scratch directory per test case.
fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("igahmm_cli_" + std::to_string(::getpid())) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

const std::string kAnnulus = std::string(IGAHMM_DATA_DIR) + "/quarter_annulus.patch";

}  // namespace

TEST_CASE("exit codes are distinct") {
    using namespace igahmm::cli;
    CHECK(Ok == 0);
    CHECK(ConfigFailure == 2);
    CHECK(SolverFailure == 3);
    CHECK(GeometryFailure == 4);
    CHECK(IoFailure == 5);
}

TEST_CASE("solve writes a summary and a sampled solution") {
    const fs::path dir = scratch("solve") / "nested" / "out";
    const Run r = run({"solve", "--problem", "square_fast", "-p", "2", "--nmac", "8", "--strategy", "l2", "-q", "1",
                       "--out", dir.string()});
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "summary.txt"));
    CHECK(slurp(dir / "summary.txt") == r.out);
    CHECK(r.out.find("N_mac 8  N_mic 23") != std::string::npos);

    const std::size_t pos = r.out.find("errL2_alt ");
    REQUIRE(pos != std::string::npos);
    const double e = std::stod(r.out.substr(pos + 10));
    CHECK(e == doctest::Approx(1.03e-3).epsilon(0.05));

    std::istringstream csv(slurp(dir / "solution.csv"));
    std::string line;
    int rows = 0;
    while (std::getline(csv, line)) ++rows;
    CHECK(rows == 21 * 21 + 1);
}

TEST_CASE("configuration errors exit with 2") {
    const std::string out = scratch("config").string();
    CHECK(run({"solve", "--delta-mult", "0", "--out", out}).code == 2);
    CHECK(run({"solve", "--problem", "disc", "--out", out}).code == 2);
    CHECK(run({"solve", "--strategy", "h3", "--out", out}).code == 2);
    CHECK(run({"solve", "--nosuchflag"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"convergence", "--meshes", "2,0", "--out", out}).code == 2);
    const Run bad = run({"solve", "--coupling", "mixed", "--out", out});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("error [config]") != std::string::npos);
}

TEST_CASE("empty mesh list is a usage error") {
    const fs::path dir = scratch("empty");
    std::ofstream(dir / "cfg.json") << R"({"meshes": []})";
    const Run r = run({"convergence", "--config", (dir / "cfg.json").string(), "--out", dir.string()});
    CHECK(r.code == 2);
    CHECK_FALSE(fs::exists(dir / "convergence.csv"));
}

TEST_CASE("config file values are overridden by flags") {
    const fs::path dir = scratch("override");
    std::ofstream(dir / "cfg.json") << R"({"problem": "square_fast", "p": 1, "nmac": 2, "strategy": "h1"})";
    Run r = run({"solve", "--config", (dir / "cfg.json").string(), "--out", dir.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("N_mac 2 ") != std::string::npos);
    CHECK(r.out.find("strategy h1") != std::string::npos);

    r = run({"solve", "--config", (dir / "cfg.json").string(), "--nmac", "4", "--out", dir.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("N_mac 4 ") != std::string::npos);
    CHECK(r.out.find("strategy h1") != std::string::npos);

    std::ofstream(dir / "unknown.json") << R"({"mesh": [2]})";
    CHECK(run({"solve", "--config", (dir / "unknown.json").string(), "--out", dir.string()}).code == 2);
    std::ofstream(dir / "broken.json") << "{ not json";
    CHECK(run({"solve", "--config", (dir / "broken.json").string(), "--out", dir.string()}).code == 5);
    CHECK(run({"solve", "--config", (dir / "missing.json").string(), "--out", dir.string()}).code == 5);
}

TEST_CASE("convergence writes CSV, plots and slopes") {
    const fs::path dir = scratch("convergence");
    const Run r = run({"convergence", "--problem", "square_fast", "-p", "1,2", "--meshes", "2,4", "--no-timing",
                       "--out", dir.string()});
    REQUIRE(r.code == 0);
    const std::string csv = slurp(dir / "convergence.csv");
    CHECK(csv.rfind("problem,p,q,continuity,strategy,Nmac,Nmic,errH1,errL2,errL2_alt,seconds\n", 0) == 0);
    CHECK(slurp(dir / "convergence_h1.svg").find("<polyline") != std::string::npos);
    CHECK(slurp(dir / "convergence_l2.svg").find("</svg>") != std::string::npos);
    const std::string slopes = slurp(dir / "slopes.txt");
    CHECK(slopes.find("p=1") != std::string::npos);
    CHECK(slopes.find("p=2") != std::string::npos);
}

TEST_CASE("identical configs give byte-identical CSV for any thread count") {
    const fs::path a = scratch("threads1"), b = scratch("threads3");
    const std::vector<std::string> base{"convergence", "--problem", "quarter_annulus", "-p", "2", "--meshes", "2,4",
                                        "--reference-elements", "16", "--reference-degree", "3", "--no-timing"};
    auto args = [&](const fs::path& out, const std::string& threads) {
        std::vector<std::string> v = base;
        v.insert(v.end(), {"--threads", threads, "--out", out.string()});
        return v;
    };
    REQUIRE(run(args(a, "1")).code == 0);
    REQUIRE(run(args(b, "3")).code == 0);
    CHECK(slurp(a / "convergence.csv") == slurp(b / "convergence.csv"));
    REQUIRE(run(args(b, "1")).code == 0);
    CHECK(slurp(a / "convergence.csv") == slurp(b / "convergence.csv"));
}

TEST_CASE("geometry refines the annulus patch") {
    const fs::path dir = scratch("geometry");
    Run r = run({"geometry", "--patch", kAnnulus, "-p", "2", "--nmac", "4", "--out", dir.string()});
    REQUIRE(r.code == 0);
    const igahmm::NurbsPatch refined = igahmm::read_patch_file((dir / "refined.patch").string());
    CHECK(refined.count_u() == 6);
    CHECK(refined.count_v() == 6);
    CHECK(refined.knots_u().unique_knots().size() == 5);
    CHECK(slurp(dir / "mesh.svg").rfind("<svg", 0) == 0);

    // refining the refined patch with the same request rewrites the same bytes
    const std::string first = slurp(dir / "refined.patch");
    const fs::path again = scratch("geometry_again");
    r = run({"geometry", "--patch", (dir / "refined.patch").string(), "-p", "2", "--nmac", "4", "--out",
             again.string()});
    REQUIRE(r.code == 0);
    CHECK(slurp(again / "refined.patch") == first);
}

TEST_CASE("malformed and missing patch files exit with 5") {
    const fs::path dir = scratch("malformed");
    std::ofstream(dir / "bad.patch") << "nurbs_patch 1\ndegrees 2 x\n";
    const Run r = run({"geometry", "--patch", (dir / "bad.patch").string(), "--out", dir.string()});
    CHECK(r.code == 5);
    CHECK(r.err.find("line 2") != std::string::npos);
    CHECK(run({"geometry", "--patch", (dir / "none.patch").string(), "--out", dir.string()}).code == 5);
}

TEST_CASE("an inverted geometry exits with 4") {
    const fs::path dir = scratch("inverted");
    igahmm::write_patch_file((dir / "flip.patch").string(), igahmm::rectangle_patch(1.0, 0.0, 0.0, 1.0));
    const Run r = run({"solve", "--patch", (dir / "flip.patch").string(), "-p", "1", "--nmac", "2", "--out",
                       dir.string()});
    CHECK(r.code == 4);
    CHECK(r.err.find("error [geometry]") != std::string::npos);
}
