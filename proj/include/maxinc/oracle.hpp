#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "maxinc/stats.hpp"

namespace maxinc {

inline constexpr std::size_t kOracleMaxLength = 5000;

// Reference evaluation of every statistic by literal loops over (l, k),
// re-summing each window from the jumps. Shares nothing with the prefix-sum
// kernels beyond the tie-break rule (smallest l, then smallest k).
IncrementStatistic brute_force_oracle(const WalkData& walk, Mode mode, const ScalingFunction& f);
IncrementStatistic brute_force_oracle(const WalkData& walk, Mode mode, double gamma);

struct OracleSuiteReport {
    std::size_t walks = 0;
    std::size_t comparisons = 0;
    std::size_t failures = 0;
    std::size_t window_mismatches = 0;  // counted only for integer-valued walks, where sums are exact
    double max_rel_error = 0.0;
    std::vector<std::string> messages;  // first few failures

    bool passed() const { return failures == 0 && window_mismatches == 0; }
};

// Kernel against oracle on `walks` random walks with n in [n_min, n_max]:
// the six scalar modes on scalar walks, m_tilde and t_tilde on 2- and
// 3-dimensional walks. Walk types rotate through Pareto laws, Gaussian
// noise and small integers (exact ties). Values must agree within
// `rel_tol` relative to max(1, |oracle|).
OracleSuiteReport oracle_equivalence_suite(std::size_t walks, std::uint64_t seed, std::size_t n_min = 5,
                                           std::size_t n_max = 200, double rel_tol = 1e-9);

}  // namespace maxinc
