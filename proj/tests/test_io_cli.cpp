#include <doctest.h>

#include <stdexcept>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "maxinc/cli.hpp"
#include "maxinc/io.hpp"

using namespace maxinc;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() / ("maxinc_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write_text(const fs::path& p, const std::string& s) {
    std::ofstream out(p);
    out << s;
}

std::string read_text(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult cli(std::vector<std::string> args) {
    args.insert(args.begin(), "maxinc");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream out, err;
    auto* old_out = std::cout.rdbuf(out.rdbuf());
    auto* old_err = std::cerr.rdbuf(err.rdbuf());
    const int code = run_cli(static_cast<int>(argv.size()), argv.data());
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
    return {code, out.str(), err.str()};
}

const char* kSimConfig = R"({"law": {"alpha": 1.5, "p": 0.5}, "scaling": {"family": "power", "gamma_prime": 0.5},
  "mode": "m_tilde", "n": 200, "reps": 100, "master_seed": 3})";

}  // namespace

TEST_CASE("json round trips") {
    const auto law = law_from_json(json::parse(
        R"({"alpha": 1.5, "p": 0.5, "dim": 1, "centering": "analytic_mean", "spectral": {"kind": "uniform"}})"));
    CHECK(law.alpha == 1.5);
    CHECK(law.centering == Centering::analytic_mean);
    const auto back = law_from_json(to_json(law));
    CHECK(back.alpha == law.alpha);
    CHECK(back.centering == law.centering);

    const auto vec = law_from_json(json::parse(
        R"({"alpha": 2, "dim": 2, "spectral": {"kind": "discrete", "atoms": [[1, 0], [0, 1]], "weights": [0.25, 0.75]}})"));
    CHECK(vec.spectral.kind == SpectralMeasure::Kind::discrete);
    CHECK(law_from_json(to_json(vec)).spectral.weights == vec.spectral.weights);
    CHECK_THROWS(law_from_json(json::parse(R"({"alpha": 0.5, "centering": "analytic_mean"})")));

    const auto f = scaling_from_json(json::parse(R"({"family": "power", "gamma_prime": 0.5})"));
    CHECK(f(4.0) == 2.0);
    const auto g = scaling_from_json(json::parse(R"({"family": "power_log", "gamma": 0.5, "beta": 1.0})"));
    CHECK(g(3.0) == doctest::Approx(2.0 * std::sqrt(3.0)));
    CHECK(scaling_from_json(to_json(g)).describe() == g.describe());
    CHECK_THROWS(scaling_from_json(json::parse(R"({"family": "exp", "gamma": 1})")));

    CHECK(limit_from_json(json::parse(R"({"kind": "frechet_power", "alpha": 1.5, "r": 2})"), 0).describe() ==
          "frechet_power(alpha=1.5, r=2)");
    CHECK(default_reference(vec, Observable::m_tilde).kind() == LimitLaw::Kind::frechet);
    auto skew = law;
    skew.p = 0.8;
    CHECK(default_reference(skew, Observable::m_lower).r() == doctest::Approx(0.25));
}

TEST_CASE("csv io") {
    TempDir dir;
    CsvTable t{{"a", "b"}, {{0.1, 1.0 / 3.0}, {1e300, -2.0}}};
    write_csv(dir.path / "t.csv", t);
    CHECK_FALSE(fs::exists(dir.path / "t.csv.tmp"));
    const auto text = read_text(dir.path / "t.csv");
    CHECK(text.substr(0, 4) == "a,b\n");
    CHECK(text.find("0.33333333333333331") != std::string::npos);
    const auto back = read_csv(dir.path / "t.csv");
    CHECK(back.header == t.header);
    CHECK(back.rows == t.rows);
    CHECK(read_csv_column(dir.path / "t.csv", "b") == std::vector<double>{1.0 / 3.0, -2.0});
    CHECK_THROWS_AS(read_csv_column(dir.path / "t.csv", "c"), ConfigError);

    write_text(dir.path / "bad.csv", "x\n1\nabc\n");
    CHECK_THROWS_AS(read_csv(dir.path / "bad.csv"), ConfigError);
    CHECK_THROWS_AS(read_csv(dir.path / "missing.csv"), ConfigError);
    CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("cli: selftest and usage") {
    CHECK(cli({"selftest"}).code == kExitOk);
    CHECK(cli({}).code == kExitConfig);
    CHECK(cli({"nonsense"}).code == kExitConfig);
    CHECK(cli({"simulate"}).code == kExitConfig);
    const auto help = cli({"--help"});
    CHECK(help.code == kExitOk);
    CHECK(help.out.find("MAXINC_SEED") != std::string::npos);
}

TEST_CASE("cli: simulate") {
    TempDir dir;
    write_text(dir.path / "sim.json", kSimConfig);
    const auto out = (dir.path / "out").string();
    const auto r = cli({"simulate", "--config", (dir.path / "sim.json").string(), "--out", out});
    CHECK(r.code == kExitOk);
    for (const char* f : {"summary.json", "ecdf.csv", "reference_cdf.csv", "manifest.json"})
        CHECK(fs::exists(fs::path(out) / f));
    const auto summary = json::parse(read_text(fs::path(out) / "summary.json"));
    CHECK(summary.at("values").size() == 100);
    CHECK(summary.at("reps") == 100);

    // Same config, other worker count: identical bytes.
    const auto out2 = (dir.path / "out2").string();
    CHECK(cli({"simulate", "--config", (dir.path / "sim.json").string(), "--out", out2, "--workers", "3"}).code == 0);
    for (const char* f : {"summary.json", "ecdf.csv", "reference_cdf.csv"})
        CHECK(read_text(fs::path(out) / f) == read_text(fs::path(out2) / f));

    write_text(dir.path / "bad.json", "{\"law\": ");
    CHECK(cli({"simulate", "--config", (dir.path / "bad.json").string(), "--out", out}).code == kExitConfig);

    write_text(dir.path / "mode.json",
               R"({"law": {"alpha": 1.5}, "mode": "m_max", "n": 200, "reps": 100})");
    const auto m = cli({"simulate", "--config", (dir.path / "mode.json").string(), "--out", out});
    CHECK(m.code == kExitConfig);
    CHECK(m.err.find("m_tilde") != std::string::npos);
    CHECK(m.err.find("m_hat") != std::string::npos);

    write_text(dir.path / "few.json", R"({"law": {"alpha": 1.5}, "n": 200, "reps": 10})");
    CHECK(cli({"simulate", "--config", (dir.path / "few.json").string(), "--out", out}).code == kExitConfig);
}

TEST_CASE("cli: seed precedence") {
    TempDir dir;
    write_text(dir.path / "sim.json", kSimConfig);
    const auto cfg = (dir.path / "sim.json").string();
    const auto out = dir.path / "o";
    auto seed_of = [&] { return json::parse(read_text(out / "manifest.json")).at("master_seed").get<std::uint64_t>(); };

    ::unsetenv("MAXINC_SEED");
    CHECK(cli({"simulate", "--config", cfg, "--out", out.string()}).code == 0);
    CHECK(seed_of() == 3);
    ::setenv("MAXINC_SEED", "11", 1);
    CHECK(cli({"simulate", "--config", cfg, "--out", out.string()}).code == 0);
    CHECK(seed_of() == 11);
    CHECK(cli({"simulate", "--config", cfg, "--out", out.string(), "--seed", "42"}).code == 0);
    CHECK(seed_of() == 42);
    ::setenv("MAXINC_SEED", "eleven", 1);
    CHECK(cli({"simulate", "--config", cfg, "--out", out.string()}).code == kExitConfig);
    ::unsetenv("MAXINC_SEED");
}

TEST_CASE("cli: convergence") {
    TempDir dir;
    write_text(dir.path / "conv.json",
               R"({"law": {"alpha": 1.5}, "mode": "t_tilde", "n_list": [50, 100, 200], "reps": 100, "master_seed": 1})");
    const auto out = dir.path / "o";
    CHECK(cli({"convergence", "--config", (dir.path / "conv.json").string(), "--out", out.string()}).code == 0);
    const auto t = read_csv(out / "convergence.csv");
    CHECK(t.rows.size() == 3);
    const auto first = read_text(out / "convergence.csv");
    CHECK(cli({"convergence", "--config", (dir.path / "conv.json").string(), "--out", out.string()}).code == 0);
    CHECK(read_text(out / "convergence.csv") == first);

    write_text(dir.path / "empty.json", R"({"law": {"alpha": 1.5}, "n_list": [], "reps": 100})");
    CHECK(cli({"convergence", "--config", (dir.path / "empty.json").string(), "--out", out.string()}).code ==
          kExitConfig);
}

TEST_CASE("cli: detect") {
    TempDir dir;
    std::string csv = "x\n";
    for (int i = 0; i < 40; ++i) csv += "2.5\n";
    write_text(dir.path / "flat.csv", csv);
    write_text(dir.path / "det.json",
               R"({"data": "flat.csv", "gamma": 0.5, "level": 0.05, "alpha_source": {"kind": "supplied", "alpha": 1.5, "p": 0.5}})");
    const auto out = dir.path / "o";
    CHECK(cli({"detect", "--config", (dir.path / "det.json").string(), "--out", out.string()}).code == 0);
    const auto rep = json::parse(read_text(out / "report.json"));
    CHECK(rep.at("statistic") == 0.0);
    CHECK(rep.at("reject") == false);

    write_text(dir.path / "hill.json", R"({"data": "flat.csv", "alpha_source": {"kind": "hill", "k": 100}})");
    CHECK(cli({"detect", "--config", (dir.path / "hill.json").string(), "--out", out.string()}).code == kExitRuntime);

    write_text(dir.path / "nodata.json", R"({"data": "none.csv", "alpha_source": {"alpha": 1.5}})");
    CHECK(cli({"detect", "--config", (dir.path / "nodata.json").string(), "--out", out.string()}).code == kExitConfig);
}

TEST_CASE("cli: power, pointprocess, boundary") {
    TempDir dir;
    const auto out = dir.path / "o";
    write_text(dir.path / "power.json",
               R"({"law": {"alpha": 1.5}, "n": 300, "gamma": 0.5, "level": 0.05,
                   "alpha_source": {"kind": "supplied", "alpha": 1.5, "p": 0.5},
                   "grid": "shift", "values": [0, 5], "duration": 30, "reps": 200, "master_seed": 2})");
    CHECK(cli({"power", "--config", (dir.path / "power.json").string(), "--out", out.string()}).code == 0);
    const auto t = read_csv(out / "power.csv");
    CHECK(t.header == std::vector<std::string>{"param", "power", "se", "reps"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0][1] < 0.12);

    write_text(dir.path / "pp.json",
               R"({"law": {"alpha": 1.0}, "n": 1000, "y_grid": [1, 2, 4], "reps": 200, "master_seed": 4,
                   "dominance": {"scaling": {"family": "power", "gamma_prime": 0.5}, "n_list": [100, 200], "reps": 50}})");
    CHECK(cli({"pointprocess", "--config", (dir.path / "pp.json").string(), "--out", out.string()}).code == 0);
    CHECK(read_csv(out / "exceedance.csv").rows.size() == 3);
    CHECK(json::parse(read_text(out / "dominance.json")).size() == 2);

    write_text(dir.path / "b.json",
               R"({"alpha": 4, "gamma": 0.1, "n_list": [50, 100], "reps": 30, "holder_grid": 1024, "holder_draws": 30})");
    CHECK(cli({"boundary", "--config", (dir.path / "b.json").string(), "--out", out.string()}).code == 0);
    CHECK(read_csv(out / "boundary.csv").rows.size() == 2);

    write_text(dir.path / "b2.json", R"({"alpha": 4, "gamma": 0.3, "n_list": [50]})");
    CHECK(cli({"boundary", "--config", (dir.path / "b2.json").string(), "--out", out.string()}).code == kExitConfig);
}
