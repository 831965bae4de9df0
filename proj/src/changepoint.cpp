#include "maxinc/changepoint.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "maxinc/limits.hpp"
#include "maxinc/parallel.hpp"
#include "maxinc/stats.hpp"

namespace maxinc {

namespace {

struct TailFit {
    double alpha = 0.0;
    double p = 0.0;
    double a_n = 0.0;
};

// Hill index plus a Weissman-type plug-in for a_n from the k largest
// deviations from the sample mean.
TailFit hill_fit(std::span<const double> data, std::size_t k) {
    const std::size_t n = data.size();
    if (k < 2 || k >= n) throw std::invalid_argument("hill_k must satisfy 2 <= k < n");
    double mean = 0.0;
    for (double x : data) mean += x;
    mean /= static_cast<double>(n);
    std::vector<double> centered(n);
    std::transform(data.begin(), data.end(), centered.begin(), [&](double x) { return x - mean; });

    TailFit fit;
    fit.alpha = hill_estimate(centered, k);
    std::vector<double> order = centered;
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k + 1), order.end(),
                      [](double a, double b) { return std::abs(a) > std::abs(b); });
    std::size_t positive = 0;
    for (std::size_t i = 0; i < k; ++i) positive += order[i] > 0.0;
    fit.p = static_cast<double>(positive) / static_cast<double>(k);
    fit.a_n = std::abs(order[k]) * std::pow(static_cast<double>(k), 1.0 / fit.alpha);
    return fit;
}

void check_level(double level) {
    if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("level must lie in (0, 1)");
}

}  // namespace

std::string to_string(Sided s) { return s == Sided::two_sided ? "two_sided" : "one_sided"; }

Sided sided_from_string(const std::string& s) {
    if (s == "two_sided") return Sided::two_sided;
    if (s == "one_sided") return Sided::one_sided;
    throw std::invalid_argument("unknown sidedness '" + s + "' (expected two_sided or one_sided)");
}

double critical_value(double alpha, double p, std::size_t n, double level, Sided sided, double gamma) {
    check_level(level);
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in (0, 1]");
    if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be non-negative");
    if (n < 2) throw std::invalid_argument("critical_value requires n >= 2");
    const double a_n = std::pow(static_cast<double>(n), 1.0 / alpha);
    const double scale = sided == Sided::one_sided ? std::pow(p, 1.0 / alpha) * a_n : a_n;
    return scale * frechet_quantile(alpha, 1.0 - level);
}

double default_gamma(double alpha) { return std::clamp(0.5 - 1.0 / alpha + 0.05, 0.05, 0.95); }

DetectionReport detect(std::span<const double> data, const DetectOptions& options) {
    const std::size_t n = data.size();
    if (n < 8) throw std::invalid_argument("detect requires at least 8 observations");
    check_level(options.level);
    for (double x : data)
        if (!std::isfinite(x)) throw std::invalid_argument("detect: data contain a non-finite value");

    DetectionReport rep;
    rep.n = n;
    rep.level = options.level;
    rep.sided = options.sided;
    rep.alpha_kind = options.alpha_source.kind;
    double a_n = 0.0;
    if (options.alpha_source.kind == AlphaSource::Kind::supplied) {
        rep.alpha = options.alpha_source.alpha;
        rep.p = options.alpha_source.p;
        if (!(rep.alpha > 0.0)) throw std::invalid_argument("supplied alpha must be positive");
        if (!(rep.p > 0.0 && rep.p <= 1.0)) throw std::invalid_argument("supplied p must lie in (0, 1]");
        a_n = std::pow(static_cast<double>(n), 1.0 / rep.alpha);
    } else {
        const TailFit fit = hill_fit(data, options.alpha_source.hill_k);
        rep.alpha = fit.alpha;
        rep.p = fit.p;
        rep.hill_k = options.alpha_source.hill_k;
        a_n = fit.a_n;
        if (options.sided == Sided::one_sided && !(rep.p > 0.0))
            throw std::invalid_argument("detect: no positive values among the top order statistics");
    }

    rep.gamma = options.gamma.value_or(default_gamma(rep.alpha));
    const double bound = std::max(0.0, 0.5 - 1.0 / rep.alpha);
    if (!(rep.gamma > bound) || rep.gamma > 1.0) {
        std::ostringstream msg;
        msg << "gamma = " << rep.gamma << " violates max(0, 0.5 - 1/alpha) = " << bound
            << " < gamma <= 1 (alpha = " << rep.alpha << ")";
        throw std::invalid_argument(msg.str());
    }

    // Shifting by an element of the data turns constant input into exact zeros.
    std::vector<double> shifted(data.begin(), data.end());
    std::vector<double> tmp(shifted);
    std::nth_element(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(n / 2), tmp.end());
    const double median = tmp[n / 2];
    for (double& x : shifted) x -= median;

    const auto walk = prefix_sums(shifted);
    const Mode mode = options.sided == Sided::two_sided ? Mode::t_tilde : Mode::t_upper;
    const auto stat = compute_statistic(walk, mode, ScalingFunction::power(rep.gamma));
    rep.statistic = stat.value;
    rep.window_begin = stat.arg_k + 1;
    rep.window_end = stat.arg_k + stat.arg_ell;

    rep.normalizer = options.sided == Sided::one_sided ? std::pow(rep.p, 1.0 / rep.alpha) * a_n : a_n;
    rep.critical = rep.normalizer * frechet_quantile(rep.alpha, 1.0 - options.level);
    rep.p_value = 1.0 - frechet_cdf(rep.alpha, rep.statistic / rep.normalizer);
    rep.reject = rep.statistic > rep.critical;
    return rep;
}

void EpidemicSpec::validate(std::size_t n) const {
    if (!(k_star >= 1 && k_star < m_star && m_star < n)) {
        std::ostringstream msg;
        msg << "epidemic requires 1 <= k_star < m_star < n (got k_star = " << k_star << ", m_star = " << m_star
            << ", n = " << n << ")";
        throw std::invalid_argument(msg.str());
    }
    if (!std::isfinite(shift)) throw std::invalid_argument("epidemic shift must be finite");
}

std::vector<double> inject_epidemic(std::span<const double> data, const EpidemicSpec& spec) {
    spec.validate(data.size());
    std::vector<double> out(data.begin(), data.end());
    for (std::size_t i = spec.k_star; i < spec.m_star; ++i) out[i] += spec.shift;
    return out;
}

EpidemicSpec centered_epidemic(std::size_t n, std::size_t duration, double shift) {
    if (duration < 1 || duration + 2 > n)
        throw std::invalid_argument("epidemic duration must satisfy 1 <= duration <= n - 2");
    EpidemicSpec spec;
    spec.k_star = std::max<std::size_t>(1, (n - duration) / 2);
    spec.m_star = spec.k_star + duration;
    spec.shift = shift;
    spec.validate(n);
    return spec;
}

std::string to_string(PowerPlan::Grid g) { return g == PowerPlan::Grid::shift ? "shift" : "theta"; }

PowerPlan::Grid power_grid_from_string(const std::string& s) {
    if (s == "shift") return PowerPlan::Grid::shift;
    if (s == "theta") return PowerPlan::Grid::theta;
    throw std::invalid_argument("unknown power grid '" + s + "' (expected shift or theta)");
}

std::vector<PowerRow> power_curve(const PowerPlan& plan) {
    plan.law.validate();
    if (plan.law.dim != 1) throw std::invalid_argument("power_curve requires a scalar law");
    if (plan.values.empty()) throw std::invalid_argument("power_curve needs a non-empty grid");
    if (plan.reps == 0) throw std::invalid_argument("power_curve requires reps >= 1");
    if (plan.n < 8) throw std::invalid_argument("power_curve requires n >= 8");

    std::vector<EpidemicSpec> specs;
    for (double v : plan.values) {
        if (!std::isfinite(v)) throw std::invalid_argument("power grid values must be finite");
        if (plan.grid == PowerPlan::Grid::shift) {
            specs.push_back(centered_epidemic(plan.n, plan.duration, v));
        } else {
            if (!(v > 0.0 && v < 1.0)) throw std::invalid_argument("theta grid values must lie in (0, 1)");
            const auto len = static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(plan.n), v)));
            specs.push_back(centered_epidemic(plan.n, len, plan.shift));
        }
    }

    const std::size_t points = specs.size();
    std::vector<char> rejected(points * plan.reps, 0), overlapped(points * plan.reps, 0);
    parallel_for(plan.reps, plan.workers, [&](std::size_t r) {
        const auto noise = sample_scalar(plan.law, plan.n, SeedStream{plan.master_seed, r});
        for (std::size_t i = 0; i < points; ++i) {
            const auto data = specs[i].shift == 0.0 ? noise : inject_epidemic(noise, specs[i]);
            const auto rep = detect(data, plan.detect);
            rejected[i * plan.reps + r] = rep.reject;
            overlapped[i * plan.reps + r] =
                rep.window_begin <= specs[i].m_star && rep.window_end >= specs[i].k_star + 1;
        }
    });

    std::vector<PowerRow> rows;
    const double R = static_cast<double>(plan.reps);
    for (std::size_t i = 0; i < points; ++i) {
        const auto first = rejected.begin() + static_cast<std::ptrdiff_t>(i * plan.reps);
        const auto hits = std::count(first, first + static_cast<std::ptrdiff_t>(plan.reps), 1);
        const auto ofirst = overlapped.begin() + static_cast<std::ptrdiff_t>(i * plan.reps);
        const auto over = std::count(ofirst, ofirst + static_cast<std::ptrdiff_t>(plan.reps), 1);
        PowerRow row;
        row.param = plan.values[i];
        row.reps = plan.reps;
        row.power = static_cast<double>(hits) / R;
        row.se = std::sqrt(row.power * (1.0 - row.power) / R);
        row.overlap = static_cast<double>(over) / R;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace maxinc
