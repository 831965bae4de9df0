#include "maxinc/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "maxinc/changepoint.hpp"
#include "maxinc/io.hpp"
#include "maxinc/montecarlo.hpp"
#include "maxinc/oracle.hpp"
#include "maxinc/scaling.hpp"

namespace maxinc {

namespace fs = std::filesystem;

namespace {

struct Common {
    std::string config;
    std::string out = "out";
    std::optional<std::uint64_t> seed;
    unsigned workers = 1;
};

struct Manifest {
    std::string subcommand;
    std::string config;
    std::string out;
    std::uint64_t master_seed = 0;
    unsigned workers = 1;
    std::string start;
    std::string end;
    double wall_time_s = 0.0;
};

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Everything that fails while reading the configuration is a config error.
template <class F>
auto config_phase(F&& f) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

json load_config(const Common& c) {
    if (c.config.empty()) throw ConfigError("--config is required");
    return read_json_file(c.config);
}

// Flag, then MAXINC_SEED, then the config field.
std::uint64_t resolve_seed(const Common& c, const json& config) {
    if (c.seed) return *c.seed;
    if (const char* env = std::getenv("MAXINC_SEED")) {
        const std::string s = env;
        std::size_t used = 0;
        std::uint64_t v = 0;
        try {
            v = std::stoull(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (s.empty() || used != s.size() || s.front() == '-')
            throw ConfigError("MAXINC_SEED is not an unsigned 64-bit integer: '" + s + "'");
        return v;
    }
    return config.value("master_seed", std::uint64_t{0});
}

fs::path prepare_out(const Common& c) {
    fs::path dir(c.out);
    fs::create_directories(dir);
    return dir;
}

void write_manifest(const fs::path& dir, const Manifest& m) {
    write_json(dir / "manifest.json", {{"subcommand", m.subcommand},
                                       {"config", m.config},
                                       {"out", m.out},
                                       {"master_seed", m.master_seed},
                                       {"workers", m.workers},
                                       {"version", kVersion},
                                       {"start", m.start},
                                       {"end", m.end},
                                       {"wall_time_s", m.wall_time_s}});
}

AlphaSource alpha_source_from_json(const json& j) {
    const auto kind = j.value("kind", std::string("supplied"));
    if (kind == "supplied") return AlphaSource::supplied(j.at("alpha").get<double>(), j.value("p", 0.5));
    if (kind == "hill") return AlphaSource::hill(j.at("k").get<std::size_t>());
    throw std::invalid_argument("unknown alpha_source kind '" + kind + "' (expected supplied or hill)");
}

DetectOptions detect_options_from_json(const json& j) {
    DetectOptions o;
    if (j.contains("gamma")) o.gamma = j.at("gamma").get<double>();
    o.level = j.value("level", 0.05);
    o.sided = sided_from_string(j.value("sided", std::string("two_sided")));
    o.alpha_source = alpha_source_from_json(j.at("alpha_source"));
    return o;
}

CsvTable ecdf_table(const std::vector<double>& sorted) {
    CsvTable t{{"value", "F_emp"}, {}};
    const double R = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
        t.rows.push_back({sorted[i], static_cast<double>(i + 1) / R});
    }
    return t;
}

CsvTable reference_table(const std::vector<double>& sorted, const LimitLaw& ref) {
    CsvTable t{{"x", "F_ref"}, {}};
    for (double x : sorted) t.rows.push_back({x, ref.cdf(x)});
    return t;
}

using Job = std::function<void(const fs::path&, Manifest&)>;

Job simulate_job(const Common& c, Manifest& m) {
    auto config = config_phase([&] {
        const json j = load_config(c);
        m.master_seed = resolve_seed(c, j);
        auto cfg = experiment_from_json(j);
        cfg.master_seed = m.master_seed;
        if (j.contains("reference")) cfg.reference = limit_from_json(j.at("reference"), m.master_seed, c.workers);
        cfg.workers = c.workers;
        cfg.validate();
        return cfg;
    });
    return [config](const fs::path& dir, Manifest&) {
        const auto s = run_experiment(config);
        write_json(dir / "summary.json", to_json(s));
        write_csv(dir / "ecdf.csv", ecdf_table(s.values));
        write_csv(dir / "reference_cdf.csv", reference_table(s.values, config.reference));
        std::cout << to_string(s.mode) << " n=" << s.n << " reps=" << s.reps << " ks=" << format_double(s.ks)
                  << " reference=" << s.reference << "\n";
    };
}

Job convergence_job(const Common& c, Manifest& m) {
    struct Plan {
        ExperimentConfig base;
        std::vector<std::size_t> n_list;
    };
    auto plan = config_phase([&] {
        const json j = load_config(c);
        m.master_seed = resolve_seed(c, j);
        Plan p{experiment_from_json(j, false), j.at("n_list").get<std::vector<std::size_t>>()};
        if (p.n_list.empty()) throw ConfigError("n_list must not be empty");
        p.base.master_seed = m.master_seed;
        if (j.contains("reference")) p.base.reference = limit_from_json(j.at("reference"), m.master_seed, c.workers);
        p.base.workers = c.workers;
        for (auto n : p.n_list) {
            auto cfg = p.base;
            cfg.n = n;
            cfg.validate();
        }
        return p;
    });
    return [plan](const fs::path& dir, Manifest&) {
        CsvTable table{{"n", "ks", "normalizer", "reps"}, {}};
        for (auto n : plan.n_list) {
            auto cfg = plan.base;
            cfg.n = n;
            const auto s = run_experiment(cfg);
            write_json(dir / ("summary_n" + std::to_string(n) + ".json"), to_json(s));
            table.rows.push_back({static_cast<double>(n), s.ks, s.normalizer, static_cast<double>(s.reps)});
            std::cout << "n=" << n << " ks=" << format_double(s.ks) << "\n";
        }
        write_csv(dir / "convergence.csv", table);
    };
}

Job pointprocess_job(const Common& c, Manifest& m) {
    struct Plan {
        HeavyTailLaw law;
        std::size_t n = 0;
        std::vector<double> y_grid;
        std::size_t reps = 0;
        std::optional<ScalingFunction> dominance_scaling;
        std::vector<std::size_t> dominance_n;
        std::size_t dominance_reps = 0;
    };
    auto plan = config_phase([&] {
        const json j = load_config(c);
        m.master_seed = resolve_seed(c, j);
        Plan p;
        p.law = law_from_json(j.at("law"));
        p.n = j.at("n").get<std::size_t>();
        p.y_grid = j.at("y_grid").get<std::vector<double>>();
        p.reps = j.at("reps").get<std::size_t>();
        if (p.y_grid.empty()) throw ConfigError("y_grid must not be empty");
        for (double y : p.y_grid)
            if (!(y > 0.0)) throw ConfigError("y_grid values must be positive");
        if (p.reps == 0 || p.n < 2) throw ConfigError("pointprocess requires n >= 2 and reps >= 1");
        if (j.contains("dominance")) {
            const auto& d = j.at("dominance");
            p.dominance_scaling = scaling_from_json(d.at("scaling"));
            p.dominance_n = d.at("n_list").get<std::vector<std::size_t>>();
            p.dominance_reps = d.at("reps").get<std::size_t>();
            const double bound = std::max(0.0, 0.5 - 1.0 / p.law.alpha);
            if (!(p.dominance_scaling->gamma() > bound))
                throw ConfigError("dominance requires gamma > max(0, 0.5 - 1/alpha)");
        }
        return p;
    });
    const unsigned workers = c.workers;
    return [plan, workers](const fs::path& dir, Manifest& m) {
        const auto rows = exceedance_experiment(plan.law, plan.n, plan.y_grid, plan.reps, m.master_seed, workers);
        CsvTable table{{"y", "poisson_mean", "exact_mean", "mean", "variance", "standard_error", "tv_poisson"}, {}};
        json detail = json::array();
        for (const auto& r : rows) {
            table.rows.push_back({r.y, r.poisson_mean, r.exact_mean, r.mean, r.variance, r.standard_error, r.tv_poisson});
            detail.push_back({{"y", r.y}, {"mean", r.mean}, {"tv_poisson", r.tv_poisson}, {"histogram", r.histogram}});
            std::cout << "y=" << format_double(r.y) << " mean=" << format_double(r.mean)
                      << " tv=" << format_double(r.tv_poisson) << "\n";
        }
        write_csv(dir / "exceedance.csv", table);
        write_json(dir / "exceedance.json", detail);
        if (plan.dominance_scaling) {
            json dom = json::array();
            for (auto n : plan.dominance_n)
                dom.push_back(
                    to_json(dominance_diagnostic(plan.law, *plan.dominance_scaling, n, plan.dominance_reps,
                                                 m.master_seed, workers)));
            write_json(dir / "dominance.json", dom);
        }
    };
}

Job boundary_job(const Common& c, Manifest& m) {
    auto plan = config_phase([&] {
        const json j = load_config(c);
        m.master_seed = resolve_seed(c, j);
        BoundaryPlan p;
        p.alpha = j.value("alpha", p.alpha);
        p.p = j.value("p", p.p);
        p.gamma = j.value("gamma", p.gamma);
        p.n_list = j.at("n_list").get<std::vector<std::size_t>>();
        p.reps = j.value("reps", p.reps);
        p.holder_grid = j.value("holder_grid", p.holder_grid);
        p.holder_draws = j.value("holder_draws", p.holder_draws);
        p.master_seed = m.master_seed;
        p.workers = c.workers;
        if (p.n_list.empty()) throw ConfigError("n_list must not be empty");
        if (!(p.alpha > 2.0)) throw ConfigError("boundary requires alpha > 2");
        if (!(p.gamma >= 0.0 && p.gamma < 0.5 - 1.0 / p.alpha))
            throw ConfigError("boundary requires 0 <= gamma < 0.5 - 1/alpha");
        if (p.holder_grid < 1024) throw ConfigError("holder_grid must be at least 1024");
        if (p.holder_draws < 1 || p.reps < 1) throw ConfigError("reps and holder_draws must be positive");
        return p;
    });
    return [plan](const fs::path& dir, Manifest&) {
        const auto r = boundary_experiment(plan);
        write_json(dir / "boundary.json", to_json(r));
        CsvTable table{{"n", "ks", "median_power_norm", "median_a_n_norm"}, {}};
        for (const auto& row : r.rows) {
            table.rows.push_back({static_cast<double>(row.n), row.ks, row.median_power_norm, row.median_a_n_norm});
            std::cout << "n=" << row.n << " ks=" << format_double(row.ks) << "\n";
        }
        write_csv(dir / "boundary.csv", table);
    };
}

Job detect_job(const Common& c, Manifest& m, const std::string& data_flag) {
    struct Plan {
        std::vector<double> data;
        DetectOptions options;
    };
    auto plan = config_phase([&] {
        const json j = load_config(c);
        m.master_seed = resolve_seed(c, j);
        Plan p;
        p.options = detect_options_from_json(j);
        fs::path data = data_flag;
        if (data.empty()) {
            data = j.at("data").get<std::string>();
            if (data.is_relative()) data = fs::path(c.config).parent_path() / data;
        }
        p.data = read_csv_column(data, j.value("column", std::string()));
        return p;
    });
    return [plan](const fs::path& dir, Manifest&) {
        const auto r = detect(plan.data, plan.options);
        write_json(dir / "report.json", to_json(r));
        std::cout << "statistic=" << format_double(r.statistic) << " critical=" << format_double(r.critical)
                  << " p_value=" << format_double(r.p_value) << " reject=" << (r.reject ? "true" : "false") << "\n";
    };
}

Job power_job(const Common& c, Manifest& m) {
    auto plan = config_phase([&] {
        const json j = load_config(c);
        m.master_seed = resolve_seed(c, j);
        PowerPlan p;
        p.law = law_from_json(j.at("law"));
        p.detect = detect_options_from_json(j);
        p.n = j.at("n").get<std::size_t>();
        p.grid = power_grid_from_string(j.value("grid", std::string("shift")));
        p.values = j.at("values").get<std::vector<double>>();
        p.duration = j.value("duration", std::size_t{0});
        p.shift = j.value("shift", 0.0);
        p.reps = j.at("reps").get<std::size_t>();
        p.master_seed = m.master_seed;
        p.workers = c.workers;
        if (p.values.empty()) throw ConfigError("values must not be empty");
        if (p.grid == PowerPlan::Grid::shift) centered_epidemic(p.n, p.duration, 0.0);
        return p;
    });
    return [plan](const fs::path& dir, Manifest&) {
        const auto rows = power_curve(plan);
        CsvTable table{{"param", "power", "se", "reps"}, {}};
        json detail = json::array();
        for (const auto& r : rows) {
            table.rows.push_back({r.param, r.power, r.se, static_cast<double>(r.reps)});
            detail.push_back({{"param", r.param}, {"power", r.power}, {"se", r.se}, {"reps", r.reps},
                              {"overlap", r.overlap}});
            std::cout << to_string(plan.grid) << "=" << format_double(r.param) << " power=" << format_double(r.power)
                      << " se=" << format_double(r.se) << "\n";
        }
        write_csv(dir / "power.csv", table);
        write_json(dir / "power.json", detail);
    };
}

int selftest(const Common& c) {
    const json empty = json::object();
    const std::uint64_t seed = config_phase([&] { return resolve_seed(c, empty); });
    bool ok = true;

    const auto oracle = oracle_equivalence_suite(500, seed);
    std::cout << (oracle.passed() ? "PASS" : "FAIL") << " oracle equivalence: " << oracle.comparisons
              << " comparisons on " << oracle.walks << " walks, max rel error " << oracle.max_rel_error << "\n";
    for (const auto& msg : oracle.messages) std::cout << "  " << msg << "\n";
    ok = ok && oracle.passed();

    const ScalingFunction members[] = {ScalingFunction::power(0.5), ScalingFunction::power(0.1),
                                       ScalingFunction::power(1.0), ScalingFunction::power(0.8, 0.3),
                                       ScalingFunction::power_log(0.3, 2.0)};
    for (const auto& f : members) {
        const auto r = check_membership(f, 100000);
        std::cout << (r.passed() ? "PASS" : "FAIL") << " membership " << f.describe() << "\n";
        for (const auto& v : r.violations) std::cout << "  " << v << "\n";
        ok = ok && r.passed();
    }
    return ok ? kExitOk : kExitSelftest;
}

void add_common(CLI::App* sub, Common& c, bool needs_config) {
    auto* opt = sub->add_option("--config", c.config, "experiment configuration (JSON)");
    if (needs_config) opt->required();
    sub->add_option("--out", c.out, "output directory")->capture_default_str();
    sub->add_option("--seed", c.seed, "master seed; overrides MAXINC_SEED and the config field");
    sub->add_option("--workers", c.workers, "worker threads (0 = all cores)")->capture_default_str();
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"Maximum-increment statistics of heavy-tailed random walks.\n"
                 "Seed precedence: --seed, then the MAXINC_SEED environment variable, then the config field\n"
                 "master_seed. Exit codes: 0 ok, 2 configuration error, 3 runtime error, 4 selftest failure."};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    Common common;
    std::string data_flag;
    struct Entry {
        const char* name;
        const char* help;
    };
    const Entry entries[] = {
        {"simulate", "run one Monte Carlo experiment; writes summary.json, ecdf.csv, reference_cdf.csv"},
        {"convergence", "one experiment per entry of n_list; writes convergence.csv"},
        {"pointprocess", "exceedance counts over y_grid; writes exceedance.csv"},
        {"boundary", "sub-critical regime against the Holder functional; writes boundary.csv"},
        {"detect", "epidemic change-point test on a CSV column; writes report.json"},
        {"power", "rejection rate over a shift or theta grid; writes power.csv"},
        {"selftest", "kernel/oracle equivalence and scaling membership checks"},
    };
    std::map<std::string, CLI::App*> subs;
    for (const auto& e : entries) {
        auto* sub = app.add_subcommand(e.name, e.help);
        add_common(sub, common, std::string(e.name) != "selftest");
        subs[e.name] = sub;
    }
    subs["detect"]->add_option("--data", data_flag, "CSV with the observations (overrides the config field)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    std::string name;
    for (const auto& [n, sub] : subs)
        if (sub->parsed()) name = n;

    try {
        if (name == "selftest") return selftest(common);

        Manifest m;
        m.subcommand = name;
        m.config = common.config;
        m.out = common.out;
        m.workers = common.workers;
        Job job;
        if (name == "simulate") job = simulate_job(common, m);
        else if (name == "convergence") job = convergence_job(common, m);
        else if (name == "pointprocess") job = pointprocess_job(common, m);
        else if (name == "boundary") job = boundary_job(common, m);
        else if (name == "detect") job = detect_job(common, m, data_flag);
        else job = power_job(common, m);

        m.start = utc_now();
        const auto t0 = std::chrono::steady_clock::now();
        const fs::path dir = prepare_out(common);
        job(dir, m);
        m.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        m.end = utc_now();
        write_manifest(dir, m);
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "maxinc: configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "maxinc: error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

}  // namespace maxinc
