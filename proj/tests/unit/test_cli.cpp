#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sigvol/app.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = sigvol::cli::execute(args, out, err);
    return {code, out.str(), err.str()};
}

std::string last_line(const std::string& text) {
    auto end = text.find_last_not_of('\n');
    auto begin = text.rfind('\n', end);
    return text.substr(begin == std::string::npos ? 0 : begin + 1, end - (begin == std::string::npos ? 0 : begin + 1) + 1);
}

double value_after(const std::string& text, const std::string& key) {
    const auto at = text.find(key);
    REQUIRE(at != std::string::npos);
    return std::stod(text.substr(at + key.size()));
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream b;
    b << in.rdbuf();
    return b.str();
}

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("sigvol_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("selftest passes on a fresh build") {
    const auto r = run({"selftest"});
    CHECK(r.code == 0);
    CHECK(last_line(r.out) == "status=ok");
    CHECK(r.out.find(",fail") == std::string::npos);
}

TEST_CASE("black-scholes transform matches the closed form") {
    const auto r = run({"transform", "--model", "black_scholes", "--uX", "2", "--sigma", "0.2", "--T", "1"});
    REQUIRE(r.code == 0);
    CHECK(value_after(r.out, "lambda0=") == doctest::Approx(std::exp(0.04)).epsilon(1e-8));

    const auto shifted = run({"transform", "--model", "black_scholes", "--uX", "2", "--s0", "1.5"});
    CHECK(value_after(shifted.out, "lambda0=") == doctest::Approx(std::exp(2 * std::log(1.5) + 0.04)).epsilon(1e-8));
}

TEST_CASE("transform csv layout and monte carlo cross-check") {
    const auto r = run({"transform", "--model", "black_scholes", "--u", "1=0.5", "--uX", "1", "--seed", "11",
                        "--paths", "4000", "--steps", "20"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("tau,component_word,psi_value\n", 0) == 0);
    CHECK(std::abs(value_after(r.out, "mc_z=")) < 4.0);
}

TEST_CASE("explosion exits degenerate") {
    const auto r = run({"transform", "--ell", "∅=1", "--u", "1.1=3", "--T", "5"});
    CHECK(r.code == 2);
    CHECK(last_line(r.out) == "status=degenerate");
    const double t_star = value_after(r.out, "exploded_at=");
    CHECK(t_star < 1.0 / 3.0);
    CHECK(t_star > 0.98 / 3.0);
}

TEST_CASE("validation errors exit invalid") {
    for (const std::vector<std::string>& args :
         {std::vector<std::string>{}, {"nonsense"}, {"hedge"}, {"simulate", "--model", "nope", "--seed", "1"},
          {"hedge", "--seed", "1", "--payoff", "put:K=1"}, {"simulate", "--seed", "1", "--paths", "0"},
          {"transform", "--u", "2=1"}, {"simulate", "--seed", "1", "--steps", "abc"},
          {"hedge", "--seed", "1", "--depth", "2", "--trunc", "1"},
          {"simulate", "--seed", "1", "--config", "/nonexistent/run.json"}}) {
        const auto r = run(args);
        CHECK(r.code == 1);
        CHECK(last_line(r.out) == "status=invalid");
    }
}

TEST_CASE("metadata-only presets cannot simulate") {
    const auto r = run({"simulate", "--model", "heston_meta", "--seed", "1"});
    CHECK(r.code == 1);
}

TEST_CASE("hedge output is byte-identical across runs") {
    const std::vector<std::string> args{"hedge", "--model", "black_scholes", "--payoff", "call:K=1",
                                        "--paths", "2000", "--steps", "30", "--seed", "7"};
    const auto a = run(args), b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("summary,residual_norm,") != std::string::npos);
    CHECK(a.out.find("summary,kappa_bound,") != std::string::npos);
    CHECK(a.out.find("summary,gram_min_eigenvalue,") != std::string::npos);

    const auto c = run({"hedge", "--model", "black_scholes", "--paths", "2000", "--steps", "30", "--seed", "8"});
    CHECK(a.out != c.out);
}

TEST_CASE("config file with flag override") {
    const auto dir = scratch("config");
    {
        std::ofstream cfg(dir / "run.json");
        cfg << R"({"model": "first_order", "steps": 10, "paths": 3, "seed": 5, "out": ")" << dir.string()
            << R"("})";
    }
    const auto r = run({"simulate", "--config", (dir / "run.json").string(), "--paths", "2"});
    REQUIRE(r.code == 0);
    const auto csv = slurp(dir / "paths.csv");
    CHECK(csv.rfind("path_id,t,xi,B,M,qv,S\n", 0) == 0);
    // two paths of eleven grid points
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 11);
    CHECK(csv.find('\r') == std::string::npos);

    {
        std::ofstream bad(dir / "bad.json");
        bad << R"({"modle": "first_order"})";
    }
    CHECK(run({"simulate", "--config", (dir / "bad.json").string(), "--seed", "1"}).code == 1);
    fs::remove_all(dir);
}

TEST_CASE("hypotheses and depth report") {
    const auto h = run({"hypotheses", "--model", "first_order", "--seed", "3", "--paths", "500", "--steps", "20"});
    REQUIRE(h.code == 0);
    CHECK(h.out.find("H1,divergent,false") != std::string::npos);

    const auto d = run({"depth-report", "--model", "first_order", "--seed", "3", "--paths", "800", "--steps", "20"});
    REQUIRE(d.code == 0);
    CHECK(d.out.find("table,heston_meta.completeness_depth,2") != std::string::npos);
    CHECK(d.out.find("table,rough_bergomi_approx.completeness_depth,inf") != std::string::npos);
    CHECK(d.out.find("scan,depth_2.residual_norm,") != std::string::npos);
}
