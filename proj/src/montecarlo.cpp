#include "maxinc/montecarlo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "maxinc/parallel.hpp"

namespace maxinc {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double quantile_sorted(const std::vector<double>& sorted, double level) {
    // Type-7 (linear interpolation) sample quantile.
    const double h = level * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return quantile_sorted(v, 0.5);
}

}  // namespace

std::string to_string(Observable o) {
    switch (o) {
        case Observable::m_tilde: return "m_tilde";
        case Observable::t_tilde: return "t_tilde";
        case Observable::m_upper: return "m_upper";
        case Observable::m_lower: return "m_lower";
        case Observable::t_upper: return "t_upper";
        case Observable::m_hat: return "m_hat";
        case Observable::range: return "range";
    }
    return "m_tilde";
}

Observable observable_from_string(const std::string& s) {
    for (auto o : {Observable::m_tilde, Observable::t_tilde, Observable::m_upper, Observable::m_lower,
                   Observable::t_upper, Observable::m_hat, Observable::range})
        if (to_string(o) == s) return o;
    throw std::invalid_argument("unknown mode '" + s +
                                "' (valid modes: m_tilde, t_tilde, m_upper, m_lower, t_upper, m_hat, range)");
}

bool is_one_sided(Observable o) {
    return o == Observable::m_upper || o == Observable::m_lower || o == Observable::t_upper ||
           o == Observable::range;
}

std::string to_string(Normalization n) { return n == Normalization::a_n ? "a_n" : "p_alpha_a_n"; }

Normalization normalization_from_string(const std::string& s) {
    if (s == "a_n") return Normalization::a_n;
    if (s == "p_alpha_a_n") return Normalization::p_alpha_a_n;
    throw std::invalid_argument("unknown normalization '" + s + "' (expected a_n or p_alpha_a_n)");
}

std::vector<ReplicationValues> simulate_replications(const ReplicationPlan& plan) {
    plan.law.validate();
    if (plan.n < 3) throw std::invalid_argument("simulate_replications requires n >= 3");
    std::vector<ReplicationValues> out(plan.reps);
    parallel_for(plan.reps, plan.workers, [&](std::size_t r) {
        try {
            const SeedStream seed{plan.master_seed, r};
            ReplicationValues v;
            if (plan.law.dim == 1) {
                const auto jumps = sample_scalar(plan.law, plan.n, seed);
                const auto walk = prefix_sums(jumps);
                const auto profile = increment_profile(walk, plan.with_hat);
                const auto tilde = evaluate(walk, profile, Mode::m_tilde, plan.scaling);
                v.m_tilde = tilde.value;
                v.m_tilde_k = tilde.arg_k;
                v.m_tilde_ell = tilde.arg_ell;
                v.t_tilde = evaluate(walk, profile, Mode::t_tilde, plan.scaling).value;
                v.m_upper = evaluate(walk, profile, Mode::m_upper, plan.scaling).value;
                v.m_lower = evaluate(walk, profile, Mode::m_lower, plan.scaling).value;
                v.t_upper = evaluate(walk, profile, Mode::t_upper, plan.scaling).value;
                v.m_hat = plan.with_hat ? evaluate(walk, profile, Mode::m_hat, plan.scaling).value
                                        : std::numeric_limits<double>::quiet_NaN();
                for (std::size_t i = 0; i < jumps.size(); ++i) {
                    const double a = std::abs(jumps[i]);
                    v.sum_norm += a;
                    if (a > v.max_norm) v.max_norm = a, v.max_norm_index = i;
                }
            } else {
                const auto sample = sample_vector(plan.law, plan.n, seed);
                const auto walk = prefix_sums(sample);
                const auto tilde = compute_statistic(walk, Mode::m_tilde, plan.scaling);
                v.m_tilde = tilde.value;
                v.m_tilde_k = tilde.arg_k;
                v.m_tilde_ell = tilde.arg_ell;
                v.t_tilde = compute_statistic(walk, Mode::t_tilde, plan.scaling).value;
                v.m_upper = v.m_lower = v.t_upper = v.m_hat = std::numeric_limits<double>::quiet_NaN();
                const auto nv = norms(sample);
                for (std::size_t i = 0; i < nv.size(); ++i) {
                    v.sum_norm += nv[i];
                    if (nv[i] > v.max_norm) v.max_norm = nv[i], v.max_norm_index = i;
                }
            }
            out[r] = v;
        } catch (const std::exception& e) {
            throw std::runtime_error("replication " + std::to_string(r) + ": " + e.what());
        }
    });
    return out;
}

double observable_value(const ReplicationValues& v, Observable o) {
    switch (o) {
        case Observable::m_tilde: return v.m_tilde;
        case Observable::t_tilde: return v.t_tilde;
        case Observable::m_upper: return v.m_upper;
        case Observable::m_lower: return -v.m_lower;
        case Observable::t_upper: return v.t_upper;
        case Observable::m_hat: return v.m_hat;
        case Observable::range: return v.m_upper - v.m_lower;
    }
    return v.m_tilde;
}

double normalizer(const HeavyTailLaw& law, std::size_t n, Normalization norm) {
    const double a_n = norm_quantile(law.uncentered(), n);
    return norm == Normalization::a_n ? a_n : std::pow(law.p, 1.0 / law.alpha) * a_n;
}

void ExperimentConfig::validate() const {
    law.validate();
    if (reps < 100) throw std::invalid_argument("experiment requires reps >= 100");
    if (n < 10) throw std::invalid_argument("experiment requires n >= 10");
    if (normalization == Normalization::p_alpha_a_n && !is_one_sided(mode))
        throw std::invalid_argument("p_alpha_a_n normalization applies to one-sided modes only");
    if (law.dim > 1 && mode != Observable::m_tilde && mode != Observable::t_tilde)
        throw std::invalid_argument(to_string(mode) + " requires a scalar law");
    if (reference.kind() == LimitLaw::Kind::joint_one_sided)
        throw std::invalid_argument("the joint law is bivariate and cannot be a KS reference");
}

McSummary summarize(const ExperimentConfig& config, std::span<const ReplicationValues> values) {
    McSummary s;
    s.mode = config.mode;
    s.n = config.n;
    s.reps = values.size();
    s.master_seed = config.master_seed;
    s.reference = config.reference.describe();
    s.normalizer = normalizer(config.law, config.n, config.normalization);
    s.values.reserve(values.size());
    for (const auto& v : values) s.values.push_back(observable_value(v, config.mode) / s.normalizer);
    std::sort(s.values.begin(), s.values.end());
    s.ks = ks_distance(s.values, [&](double x) { return config.reference.cdf(x); });
    return s;
}

McSummary run_experiment(const ExperimentConfig& config) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    ReplicationPlan plan{config.law, config.scaling, config.n, config.reps, config.master_seed, config.workers,
                         config.mode == Observable::m_hat};
    const auto values = simulate_replications(plan);
    McSummary s = summarize(config, values);
    s.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return s;
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> sample) : sorted_(std::move(sample)) {
    if (sorted_.empty()) throw std::invalid_argument("empirical_cdf: empty sample");
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
    return static_cast<double>(std::upper_bound(sorted_.begin(), sorted_.end(), x) - sorted_.begin()) /
           static_cast<double>(sorted_.size());
}

EmpiricalCdf empirical_cdf(std::vector<double> sample) { return EmpiricalCdf(std::move(sample)); }

std::vector<ExceedanceRow> exceedance_experiment(const HeavyTailLaw& law, std::size_t n, std::span<const double> y_grid,
                                                 std::size_t reps, std::uint64_t master_seed, unsigned workers) {
    law.validate();
    if (reps == 0) throw std::invalid_argument("exceedance_experiment requires reps >= 1");
    for (double y : y_grid)
        if (!(y > 0.0)) throw std::invalid_argument("exceedance thresholds must be positive");
    const HeavyTailLaw raw = law.uncentered();
    const double a_n = norm_quantile(raw, n);
    const std::size_t ny = y_grid.size();

    std::vector<std::size_t> counts(reps * ny, 0);
    parallel_for(reps, workers, [&](std::size_t r) {
        const SeedStream seed{master_seed, r};
        const std::vector<double> nv =
            law.dim == 1 ? sample_scalar(raw, n, seed) : norms(sample_vector(raw, n, seed));
        for (std::size_t j = 0; j < ny; ++j) {
            const double threshold = y_grid[j] * a_n;
            counts[r * ny + j] = static_cast<std::size_t>(
                std::count_if(nv.begin(), nv.end(), [&](double x) { return std::abs(x) > threshold; }));
        }
    });

    std::vector<ExceedanceRow> rows;
    for (std::size_t j = 0; j < ny; ++j) {
        ExceedanceRow row;
        row.y = y_grid[j];
        row.poisson_mean = std::pow(row.y, -law.alpha);
        const double threshold = row.y * a_n;
        const double tail = threshold >= 1.0 ? std::pow(threshold, -law.alpha) : 1.0;
        row.exact_mean = static_cast<double>(n) * tail;

        double sum = 0.0, sum_sq = 0.0;
        for (std::size_t r = 0; r < reps; ++r) {
            const auto c = counts[r * ny + j];
            if (c >= row.histogram.size()) row.histogram.resize(c + 1, 0);
            ++row.histogram[c];
            sum += static_cast<double>(c);
            sum_sq += static_cast<double>(c) * static_cast<double>(c);
        }
        const double R = static_cast<double>(reps);
        row.mean = sum / R;
        row.variance = reps > 1 ? (sum_sq - R * row.mean * row.mean) / (R - 1.0) : 0.0;
        row.standard_error = std::sqrt(row.exact_mean * (1.0 - tail) / R);

        // Total variation against Poisson(y^-alpha), including the unobserved tail.
        const double lambda = row.poisson_mean;
        double pmf = std::exp(-lambda);
        double covered = 0.0, tv = 0.0;
        for (std::size_t k = 0; k < row.histogram.size(); ++k) {
            tv += std::abs(static_cast<double>(row.histogram[k]) / R - pmf);
            covered += pmf;
            pmf *= lambda / static_cast<double>(k + 1);
        }
        row.tv_poisson = 0.5 * (tv + std::max(0.0, 1.0 - covered));
        rows.push_back(std::move(row));
    }
    return rows;
}

DominanceSummary dominance_diagnostic(const HeavyTailLaw& law, const ScalingFunction& f, std::size_t n,
                                      std::size_t reps, std::uint64_t master_seed, unsigned workers) {
    const double bound = std::max(0.0, 0.5 - 1.0 / law.alpha);
    if (!(f.gamma() > bound))
        throw std::invalid_argument("dominance_diagnostic requires gamma > max(0, 0.5 - 1/alpha)");
    if (reps == 0) throw std::invalid_argument("dominance_diagnostic requires reps >= 1");
    const auto values = simulate_replications({law, f, n, reps, master_seed, workers, false});

    DominanceSummary s;
    s.n = n;
    s.reps = reps;
    // f(l) >= l for every l >= 1 exactly when the power exponent reaches 1.
    const bool sandwich =
        f.family() == ScalingFunction::Family::power ? f.gamma_prime() >= 1.0 : f.gamma() >= 1.0;
    std::vector<double> ratios;
    std::size_t single = 0;
    for (const auto& v : values) {
        const double ratio = v.m_tilde / v.max_norm;
        // Roundoff allowance of the partial-sum differences.
        const double slack = 2.0 * static_cast<double>(n + 1) * kEps * v.sum_norm;
        if (v.m_tilde < v.max_norm - slack)
            throw std::logic_error("dominance_diagnostic: statistic fell below the largest jump");
        if (sandwich) {
            ++s.sandwich_checked;
            if (v.m_tilde > v.max_norm + slack) ++s.sandwich_violations;
        }
        if (v.m_tilde_ell == 1 && v.m_tilde_k == v.max_norm_index) ++single;
        ratios.push_back(ratio);
    }
    std::sort(ratios.begin(), ratios.end());
    s.quantile_levels = {0.1, 0.25, 0.5, 0.75, 0.9};
    for (double q : s.quantile_levels) s.ratio_quantiles.push_back(quantile_sorted(ratios, q));
    s.min_ratio = ratios.front();
    s.max_ratio = ratios.back();
    s.single_jump_fraction = static_cast<double>(single) / static_cast<double>(reps);
    return s;
}

BoundaryReport boundary_experiment(const BoundaryPlan& plan) {
    if (!(plan.alpha > 2.0)) throw std::invalid_argument("boundary_experiment requires alpha > 2");
    const double critical = 0.5 - 1.0 / plan.alpha;
    if (!(plan.gamma >= 0.0 && plan.gamma < critical))
        throw std::invalid_argument("boundary_experiment requires 0 <= gamma < 0.5 - 1/alpha");
    if (plan.n_list.empty()) throw std::invalid_argument("boundary_experiment needs at least one n");

    HeavyTailLaw law;
    law.alpha = plan.alpha;
    law.p = plan.p;
    law.centering = Centering::analytic_mean;
    const auto f = ScalingFunction::power(plan.gamma);

    BoundaryReport rep;
    rep.alpha = plan.alpha;
    rep.gamma = plan.gamma;
    rep.sigma = std::sqrt(law.scalar_variance());
    rep.holder_grid = plan.holder_grid;
    rep.holder_draws = plan.holder_draws;

    auto reference =
        simulate_holder_sample(plan.gamma, plan.holder_grid, plan.holder_draws, plan.master_seed ^ 0x9e3779b97f4a7c15ull,
                               plan.workers);
    for (auto& r : reference) r *= rep.sigma;

    for (std::size_t i = 0; i < plan.n_list.size(); ++i) {
        const std::size_t n = plan.n_list[i];
        const auto values =
            simulate_replications({law, f, n, plan.reps, plan.master_seed + i, plan.workers, false});
        const double power_norm = std::pow(static_cast<double>(n), plan.gamma - 0.5);
        const double a_n = norm_quantile(law.uncentered(), n);
        std::vector<double> scaled, by_a_n;
        for (const auto& v : values) {
            scaled.push_back(v.m_tilde * power_norm);
            by_a_n.push_back(v.m_tilde / a_n);
        }
        std::sort(scaled.begin(), scaled.end());
        BoundaryRow row;
        row.n = n;
        row.ks = ks_two_sample(scaled, reference);
        row.median_power_norm = quantile_sorted(scaled, 0.5);
        row.median_a_n_norm = median_of(by_a_n);
        rep.rows.push_back(row);
    }
    rep.a_n_growth = true;
    for (std::size_t i = 1; i < rep.rows.size(); ++i)
        if (!(rep.rows[i].median_a_n_norm > rep.rows[i - 1].median_a_n_norm)) rep.a_n_growth = false;
    return rep;
}

JointReport joint_from_replications(const HeavyTailLaw& law, std::size_t n, std::span<const ReplicationValues> values,
                                    std::span<const std::pair<double, double>> grid) {
    if (law.dim != 1) throw std::invalid_argument("joint one-sided experiment requires a scalar law");
    JointReport rep;
    rep.n = n;
    rep.reps = values.size();
    rep.b_n = normalizer(law, n, Normalization::p_alpha_a_n);
    const double R = static_cast<double>(values.size());
    for (const auto& [x, y] : grid) {
        if (!(x > 0.0 && y > 0.0)) throw std::invalid_argument("joint grid points must be positive");
        std::size_t joint = 0, lower = 0, upper = 0;
        for (const auto& v : values) {
            const bool lo = v.m_lower / rep.b_n <= -x;
            const bool up = v.m_upper / rep.b_n <= y;
            joint += lo && up;
            lower += lo;
            upper += up;
        }
        JointRow row{x, y, static_cast<double>(joint) / R, joint_one_sided_cdf(law.alpha, law.p, x, y),
                     static_cast<double>(lower) / R, static_cast<double>(upper) / R};
        rep.max_abs_error = std::max(rep.max_abs_error, std::abs(row.empirical - row.theory));
        rep.max_independence_gap =
            std::max(rep.max_independence_gap, std::abs(row.empirical - row.empirical_lower * row.empirical_upper));
        rep.rows.push_back(row);
    }
    return rep;
}

JointReport joint_one_sided_experiment(const HeavyTailLaw& law, const ScalingFunction& f, std::size_t n,
                                       std::size_t reps, std::span<const std::pair<double, double>> grid,
                                       std::uint64_t master_seed, unsigned workers) {
    if (law.dim != 1) throw std::invalid_argument("joint one-sided experiment requires a scalar law");
    const auto values = simulate_replications({law, f, n, reps, master_seed, workers, false});
    return joint_from_replications(law, n, values, grid);
}

}  // namespace maxinc
