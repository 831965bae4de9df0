#include "maxinc/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace maxinc {

namespace {

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    return j.contains(key) ? j.at(key).get<T>() : fallback;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

json to_json(const HeavyTailLaw& law) {
    json j{{"alpha", law.alpha}, {"p", law.p}, {"dim", law.dim}, {"centering", to_string(law.centering)}};
    if (law.dim > 1) {
        if (law.spectral.kind == SpectralMeasure::Kind::uniform)
            j["spectral"] = {{"kind", "uniform"}};
        else
            j["spectral"] = {{"kind", "discrete"}, {"atoms", law.spectral.atoms}, {"weights", law.spectral.weights}};
    }
    return j;
}

HeavyTailLaw law_from_json(const json& j) {
    HeavyTailLaw law;
    law.alpha = j.at("alpha").get<double>();
    law.p = get_or(j, "p", 0.5);
    law.dim = get_or<std::size_t>(j, "dim", 1);
    law.centering = centering_from_string(get_or<std::string>(j, "centering", "none"));
    if (j.contains("spectral")) {
        const auto& s = j.at("spectral");
        const auto kind = s.at("kind").get<std::string>();
        if (kind == "uniform")
            law.spectral = SpectralMeasure::uniform();
        else if (kind == "discrete")
            law.spectral = SpectralMeasure::discrete(s.at("atoms").get<std::vector<std::vector<double>>>(),
                                                     s.at("weights").get<std::vector<double>>());
        else
            throw std::invalid_argument("unknown spectral kind '" + kind + "' (expected uniform or discrete)");
    }
    law.validate();
    return law;
}

json to_json(const ScalingFunction& f) {
    if (f.family() == ScalingFunction::Family::power)
        return {{"family", "power"}, {"gamma", f.gamma()}, {"gamma_prime", f.gamma_prime()}};
    return {{"family", "power_log"}, {"gamma", f.gamma()}, {"beta", f.beta()}};
}

ScalingFunction scaling_from_json(const json& j) {
    const auto family = get_or<std::string>(j, "family", "power");
    if (family == "power") {
        const double gamma_prime = j.contains("gamma_prime") ? j.at("gamma_prime").get<double>() : j.at("gamma").get<double>();
        return ScalingFunction::power(gamma_prime, get_or(j, "gamma", gamma_prime));
    }
    if (family == "power_log") return ScalingFunction::power_log(j.at("gamma").get<double>(), j.at("beta").get<double>());
    throw std::invalid_argument("unknown scaling family '" + family + "' (expected power or power_log)");
}

json to_json(const LimitLaw& law) {
    json j{{"kind", to_string(law.kind())}, {"description", law.describe()}};
    switch (law.kind()) {
        case LimitLaw::Kind::frechet: j["alpha"] = law.alpha(); break;
        case LimitLaw::Kind::frechet_power:
            j["alpha"] = law.alpha();
            j["r"] = law.r();
            break;
        case LimitLaw::Kind::joint_one_sided:
        case LimitLaw::Kind::range_convolution:
            j["alpha"] = law.alpha();
            j["p"] = law.p();
            break;
        case LimitLaw::Kind::gumbel: break;
        case LimitLaw::Kind::holder_functional: j["gamma"] = law.gamma(); break;
    }
    return j;
}

LimitLaw limit_from_json(const json& j, std::uint64_t seed, unsigned workers) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "frechet") return LimitLaw::frechet(j.at("alpha").get<double>());
    if (kind == "frechet_power") return LimitLaw::frechet_power(j.at("alpha").get<double>(), j.at("r").get<double>());
    if (kind == "joint_one_sided")
        return LimitLaw::joint_one_sided(j.at("alpha").get<double>(), j.at("p").get<double>());
    if (kind == "range_convolution")
        return LimitLaw::range_convolution(j.at("alpha").get<double>(), j.at("p").get<double>());
    if (kind == "gumbel") return LimitLaw::gumbel();
    if (kind == "holder_functional") {
        const double gamma = j.at("gamma").get<double>();
        auto draws = simulate_holder_sample(gamma, get_or<std::size_t>(j, "grid", 8192),
                                            get_or<std::size_t>(j, "draws", 2000), seed, workers);
        const double scale = get_or(j, "scale", 1.0);
        for (double& d : draws) d *= scale;
        return LimitLaw::holder_functional(gamma, std::move(draws));
    }
    throw std::invalid_argument("unknown reference kind '" + kind +
                                "' (valid kinds: frechet, frechet_power, joint_one_sided, range_convolution, "
                                "gumbel, holder_functional)");
}

LimitLaw default_reference(const HeavyTailLaw& law, Observable mode) {
    switch (mode) {
        case Observable::m_lower: return LimitLaw::frechet_power(law.alpha, law.q() / law.p);
        case Observable::range: return LimitLaw::range_convolution(law.alpha, law.p);
        default: return LimitLaw::frechet(law.alpha);
    }
}

ExperimentConfig experiment_from_json(const json& j, bool require_n) {
    ExperimentConfig c;
    c.law = law_from_json(j.at("law"));
    c.scaling = j.contains("scaling") ? scaling_from_json(j.at("scaling")) : ScalingFunction::power(0.5);
    c.mode = observable_from_string(get_or<std::string>(j, "mode", "m_tilde"));
    if (require_n || j.contains("n")) c.n = j.at("n").get<std::size_t>();
    c.reps = j.at("reps").get<std::size_t>();
    c.master_seed = get_or<std::uint64_t>(j, "master_seed", 0);
    c.normalization = normalization_from_string(
        get_or<std::string>(j, "normalization", is_one_sided(c.mode) ? "p_alpha_a_n" : "a_n"));
    c.workers = get_or<unsigned>(j, "workers", 1);
    c.reference = j.contains("reference") ? limit_from_json(j.at("reference"), c.master_seed, c.workers)
                                          : default_reference(c.law, c.mode);
    return c;
}

json to_json(const McSummary& s) {
    return {{"mode", to_string(s.mode)}, {"n", s.n},           {"reps", s.reps},
            {"master_seed", s.master_seed}, {"normalizer", s.normalizer}, {"ks", s.ks},
            {"reference", s.reference},    {"values", s.values}};
}

json to_json(const DetectionReport& r) {
    json alpha{{"source", r.alpha_kind == AlphaSource::Kind::supplied ? "supplied" : "hill"},
               {"alpha", r.alpha},
               {"p", r.p}};
    if (r.alpha_kind == AlphaSource::Kind::hill) alpha["hill_k"] = r.hill_k;
    return {{"n", r.n},
            {"statistic", r.statistic},
            {"normalizer", r.normalizer},
            {"critical_value", r.critical},
            {"p_value", r.p_value},
            {"reject", r.reject},
            {"candidate_interval", {r.window_begin, r.window_end}},
            {"gamma", r.gamma},
            {"level", r.level},
            {"sided", to_string(r.sided)},
            {"alpha_source", alpha}};
}

json to_json(const DominanceSummary& s) {
    return {{"n", s.n},
            {"reps", s.reps},
            {"quantile_levels", s.quantile_levels},
            {"ratio_quantiles", s.ratio_quantiles},
            {"min_ratio", s.min_ratio},
            {"max_ratio", s.max_ratio},
            {"single_jump_fraction", s.single_jump_fraction},
            {"sandwich_checked", s.sandwich_checked},
            {"sandwich_violations", s.sandwich_violations}};
}

json to_json(const BoundaryReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"n", row.n},
                        {"ks", row.ks},
                        {"median_power_norm", row.median_power_norm},
                        {"median_a_n_norm", row.median_a_n_norm}});
    return {{"alpha", r.alpha},         {"gamma", r.gamma}, {"sigma", r.sigma}, {"holder_grid", r.holder_grid},
            {"holder_draws", r.holder_draws}, {"rows", rows}, {"a_n_growth", r.a_n_growth}};
}

json to_json(const JointReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"x", row.x},
                        {"y", row.y},
                        {"empirical", row.empirical},
                        {"theory", row.theory},
                        {"empirical_lower", row.empirical_lower},
                        {"empirical_upper", row.empirical_upper}});
    return {{"n", r.n},
            {"reps", r.reps},
            {"b_n", r.b_n},
            {"rows", rows},
            {"max_abs_error", r.max_abs_error},
            {"max_independence_gap", r.max_independence_gap}};
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    CsvTable t;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto cells = split_line(line);
        if (t.header.empty()) {
            t.header = std::move(cells);
            continue;
        }
        if (cells.size() != t.header.size())
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                              std::to_string(t.header.size()) + " fields");
        std::vector<double> row;
        for (const auto& c : cells) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(c, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != c.size())
                throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": not a number: '" + c + "'");
            row.push_back(v);
        }
        t.rows.push_back(std::move(row));
    }
    if (t.header.empty()) throw ConfigError(path.string() + ": missing header row");
    return t;
}

std::vector<double> read_csv_column(const std::filesystem::path& path, const std::string& name) {
    const auto t = read_csv(path);
    std::size_t col = 0;
    if (!name.empty()) {
        const auto it = std::find(t.header.begin(), t.header.end(), name);
        if (it == t.header.end()) throw ConfigError(path.string() + ": no column named '" + name + "'");
        col = static_cast<std::size_t>(it - t.header.begin());
    }
    std::vector<double> out;
    out.reserve(t.rows.size());
    for (const auto& r : t.rows) out.push_back(r[col]);
    return out;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_csv(const CsvTable& table) {
    std::string out;
    for (std::size_t i = 0; i < table.header.size(); ++i) out += (i ? "," : "") + table.header[i];
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_double(row[i]);
        out += '\n';
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) { write_file_atomic(path, format_csv(table)); }

void write_json(const std::filesystem::path& path, const json& j) { write_file_atomic(path, j.dump(2) + "\n"); }

}  // namespace maxinc
