#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "maxinc/heavytail.hpp"
#include "maxinc/limits.hpp"
#include "maxinc/scaling.hpp"
#include "maxinc/stats.hpp"

namespace maxinc {

// Quantity recorded per replication. `m_lower` is recorded as -m so that its
// limit is the Frechet power law Phi^{q/p}; `range` is M - m.
enum class Observable { m_tilde, t_tilde, m_upper, m_lower, t_upper, m_hat, range };

std::string to_string(Observable o);
Observable observable_from_string(const std::string& s);
bool is_one_sided(Observable o);

// a_n, or b_n = p^(1/alpha) a_n for the one-sided observables.
enum class Normalization { a_n, p_alpha_a_n };
std::string to_string(Normalization n);
Normalization normalization_from_string(const std::string& s);

// Raw statistics of one simulated walk, all from a single kernel pass.
// Vector walks fill only m_tilde, t_tilde and the norm fields.
struct ReplicationValues {
    double m_tilde = 0.0;
    double t_tilde = 0.0;
    double m_upper = 0.0;
    double m_lower = 0.0;
    double t_upper = 0.0;
    double m_hat = 0.0;
    double max_norm = 0.0;
    double sum_norm = 0.0;
    std::size_t m_tilde_k = 0;
    std::size_t m_tilde_ell = 0;
    std::size_t max_norm_index = 0;
};

struct ReplicationPlan {
    HeavyTailLaw law;
    ScalingFunction scaling = ScalingFunction::power(0.5);
    std::size_t n = 0;
    std::size_t reps = 0;
    std::uint64_t master_seed = 0;
    unsigned workers = 1;
    bool with_hat = true;
};

// Replication r draws its jumps from SeedStream{master_seed, r}; the result
// is independent of the worker count.
std::vector<ReplicationValues> simulate_replications(const ReplicationPlan& plan);

double observable_value(const ReplicationValues& v, Observable o);
double normalizer(const HeavyTailLaw& law, std::size_t n, Normalization norm);

struct ExperimentConfig {
    HeavyTailLaw law;
    ScalingFunction scaling = ScalingFunction::power(0.5);
    Observable mode = Observable::m_tilde;
    std::size_t n = 0;
    std::size_t reps = 0;
    std::uint64_t master_seed = 0;
    Normalization normalization = Normalization::a_n;
    LimitLaw reference = LimitLaw::frechet(1.0);
    unsigned workers = 1;

    // Throws std::invalid_argument on a violated invariant.
    void validate() const;
};

struct McSummary {
    Observable mode = Observable::m_tilde;
    std::vector<double> values;  // sorted normalized statistics
    double ks = 0.0;
    double normalizer = 1.0;
    std::size_t n = 0;
    std::size_t reps = 0;
    std::uint64_t master_seed = 0;
    std::string reference;
    double wall_time_s = 0.0;
};

McSummary run_experiment(const ExperimentConfig& config);
// Summary of already simulated replications (shared runs across observables).
McSummary summarize(const ExperimentConfig& config, std::span<const ReplicationValues> values);

class EmpiricalCdf {
public:
    explicit EmpiricalCdf(std::vector<double> sample);
    // Right-continuous: fraction of the sample <= x.
    double operator()(double x) const;
    const std::vector<double>& sorted() const { return sorted_; }

private:
    std::vector<double> sorted_;
};

EmpiricalCdf empirical_cdf(std::vector<double> sample);

struct ExceedanceRow {
    double y = 0.0;
    double poisson_mean = 0.0;  // y^-alpha
    double exact_mean = 0.0;    // n P(|X| > y a_n)
    double mean = 0.0;
    double variance = 0.0;
    double standard_error = 0.0;  // binomial standard error of the mean
    double tv_poisson = 0.0;
    std::vector<std::size_t> histogram;
};

// Per replication, the number of jumps with |X_i| > y a_n.
std::vector<ExceedanceRow> exceedance_experiment(const HeavyTailLaw& law, std::size_t n, std::span<const double> y_grid,
                                                 std::size_t reps, std::uint64_t master_seed, unsigned workers = 1);

struct DominanceSummary {
    std::size_t n = 0;
    std::size_t reps = 0;
    std::vector<double> quantile_levels;
    std::vector<double> ratio_quantiles;  // of M~ / max |X_i|
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    double single_jump_fraction = 0.0;  // argmax window is the l = 1 window of the largest jump
    std::size_t sandwich_checked = 0;    // replications where f(l) >= l makes M~ <= max |X_i| apply
    std::size_t sandwich_violations = 0;
};

DominanceSummary dominance_diagnostic(const HeavyTailLaw& law, const ScalingFunction& f, std::size_t n,
                                      std::size_t reps, std::uint64_t master_seed, unsigned workers = 1);

struct BoundaryRow {
    std::size_t n = 0;
    double ks = 0.0;                // n^(gamma - 1/2) M~ against sigma R_{W,Q}
    double median_power_norm = 0.0;  // median of n^(gamma - 1/2) M~
    double median_a_n_norm = 0.0;    // median of M~ / a_n
};

struct BoundaryReport {
    double alpha = 0.0;
    double gamma = 0.0;
    double sigma = 0.0;
    std::size_t holder_grid = 0;
    std::size_t holder_draws = 0;
    std::vector<BoundaryRow> rows;
    bool a_n_growth = false;  // median of M~ / a_n increases along n_list
};

struct BoundaryPlan {
    double alpha = 4.0;
    double p = 0.5;
    double gamma = 0.1;
    std::vector<std::size_t> n_list;
    std::size_t reps = 1000;
    std::uint64_t master_seed = 0;
    std::size_t holder_grid = 8192;
    std::size_t holder_draws = 2000;
    unsigned workers = 1;
};

BoundaryReport boundary_experiment(const BoundaryPlan& plan);

struct JointRow {
    double x = 0.0;
    double y = 0.0;
    double empirical = 0.0;  // P(m / b_n <= -x, M / b_n <= y)
    double theory = 0.0;
    double empirical_lower = 0.0;  // P(m / b_n <= -x)
    double empirical_upper = 0.0;  // P(M / b_n <= y)
};

struct JointReport {
    std::size_t n = 0;
    std::size_t reps = 0;
    double b_n = 0.0;
    std::vector<JointRow> rows;
    double max_abs_error = 0.0;
    double max_independence_gap = 0.0;  // max |joint - lower * upper|
};

JointReport joint_one_sided_experiment(const HeavyTailLaw& law, const ScalingFunction& f, std::size_t n,
                                       std::size_t reps, std::span<const std::pair<double, double>> grid,
                                       std::uint64_t master_seed, unsigned workers = 1);
// Same table from replications simulated elsewhere.
JointReport joint_from_replications(const HeavyTailLaw& law, std::size_t n, std::span<const ReplicationValues> values,
                                    std::span<const std::pair<double, double>> grid);

}  // namespace maxinc
