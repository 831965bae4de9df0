#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "maxinc/heavytail.hpp"
#include "maxinc/scaling.hpp"

namespace maxinc {

// Maximum-increment statistics, all taken over windows (k, k + l] of the walk:
//   m_tilde  max_l f(l)^-1 max_k |S_{k+l} - S_k|                 1 <= l <= n
//   t_tilde  max_l f(l(1-l/n))^-1 max_k |S_{k+l} - S_k - l*mean|  1 <= l < n
//   m_upper  max_l f(l)^-1 max_k (S_{k+l} - S_k)
//   m_lower  min_l f(l)^-1 min_k (S_{k+l} - S_k)
//   t_upper  max_l f(l(1-l/n))^-1 max_k (S_{k+l} - S_k - l*mean)
//   m_hat    max_l f(l)^-1 max_{l+1 <= k <= n-l} (S_{k+l} + S_{k-l} - 2 S_k)
// Only m_tilde and t_tilde are defined for vector-valued walks.
enum class Mode { m_tilde, t_tilde, m_upper, m_lower, t_upper, m_hat };

inline constexpr Mode all_modes[] = {Mode::m_tilde, Mode::m_upper, Mode::m_lower,
                                     Mode::t_tilde, Mode::t_upper, Mode::m_hat};

std::string to_string(Mode m);
// Throws std::invalid_argument naming the valid modes.
Mode mode_from_string(const std::string& s);
bool is_one_sided(Mode m);
bool is_scalar_only(Mode m);
std::size_t min_length(Mode m);

// Jumps and partial sums S_0 = 0, ..., S_n, stored row-major with `dim`
// columns.
class WalkData {
public:
    std::size_t n() const { return n_; }
    std::size_t dim() const { return dim_; }
    std::span<const double> jumps() const { return jumps_; }
    std::span<const double> prefix() const { return prefix_; }
    std::span<const double> jump(std::size_t i) const { return {jumps_.data() + i * dim_, dim_}; }
    std::span<const double> partial_sum(std::size_t k) const { return {prefix_.data() + k * dim_, dim_}; }
    std::vector<double> sample_mean() const;

private:
    friend WalkData prefix_sums(std::span<const double>, std::size_t);
    std::size_t n_ = 0;
    std::size_t dim_ = 1;
    std::vector<double> jumps_;
    std::vector<double> prefix_;
};

// Partial sums of `jumps` read as n rows of `dim` values. For n > 2^15 the
// sums are formed blockwise (local running sums plus summed block offsets)
// to keep the roundoff growth sublinear.
WalkData prefix_sums(std::span<const double> jumps, std::size_t dim = 1);
WalkData prefix_sums(const VectorSample& sample);

struct IncrementStatistic {
    double value = 0.0;
    std::size_t arg_k = 0;
    std::size_t arg_ell = 0;
    Mode mode = Mode::m_tilde;
    ScalingFunction scaling = ScalingFunction::power(0.5);
};

// Per-window-length extremes of a scalar walk, indexed by l - 1:
// max_inc/min_inc over 0 <= k <= n - l of S_{k+l} - S_k, and max_hat over
// l + 1 <= k <= n - l of S_{k+l} + S_{k-l} - 2 S_k (l <= (n - 1) / 2).
// One O(n^2) pass yields every scalar statistic.
struct IncrementProfile {
    std::size_t n = 0;
    std::vector<double> max_inc;
    std::vector<double> min_inc;
    std::vector<double> max_hat;
};

// `workers` > 1 splits the window lengths into blocks scanned in parallel.
IncrementProfile increment_profile(const WalkData& walk, bool with_hat, unsigned workers = 1);
// Same scan over raw partial sums S_0..S_n.
IncrementProfile increment_profile(std::span<const double> partial_sums, bool with_hat, unsigned workers = 1);

// Statistic from a precomputed profile; the argmax window is recovered with
// ties broken by smallest l, then smallest k.
IncrementStatistic evaluate(const WalkData& walk, const IncrementProfile& profile, Mode mode,
                            const ScalingFunction& f);

// Direct evaluation, scalar or vector walk as the mode allows.
IncrementStatistic compute_statistic(const WalkData& walk, Mode mode, const ScalingFunction& f,
                                     unsigned workers = 1);

IncrementStatistic stat_M_tilde(const WalkData& walk, const ScalingFunction& f);
IncrementStatistic stat_T_tilde(const WalkData& walk, const ScalingFunction& f);

struct OneSidedPair {
    IncrementStatistic lower;  // m_n
    IncrementStatistic upper;  // M_n
};
OneSidedPair stat_one_sided(const WalkData& walk, const ScalingFunction& f);
IncrementStatistic stat_T_one_sided(const WalkData& walk, double gamma);
IncrementStatistic stat_T_one_sided(const WalkData& walk, const ScalingFunction& f);
IncrementStatistic stat_hat(const WalkData& walk, const ScalingFunction& f);

// The square-root normalized statistics T_n, T~_n, M_n, M~_n. M_n and M~_n
// subtract l * mu from every window sum.
enum class ClassicMode { T_n, T_tilde_n, M_n, M_tilde_n };
IncrementStatistic stat_classic(const WalkData& walk, ClassicMode mode, double mu = 0.0);

// Value of `mode` at one window, recomputed from the partial sums.
double window_value(const WalkData& walk, Mode mode, const ScalingFunction& f, std::size_t k, std::size_t ell);

}  // namespace maxinc
