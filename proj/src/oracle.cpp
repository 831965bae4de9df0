#include "maxinc/oracle.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "maxinc/heavytail.hpp"
#include "maxinc/random.hpp"

namespace maxinc {

namespace {

// Sum of jumps with indices [first, last) in coordinate j.
double window_sum(const WalkData& walk, std::size_t first, std::size_t last, std::size_t j) {
    double acc = 0.0;
    for (std::size_t i = first; i < last; ++i) acc += walk.jump(i)[j];
    return acc;
}

}  // namespace

IncrementStatistic brute_force_oracle(const WalkData& walk, Mode mode, const ScalingFunction& f) {
    const std::size_t n = walk.n();
    const std::size_t d = walk.dim();
    if (n > kOracleMaxLength) throw std::invalid_argument("brute_force_oracle: n exceeds the guard of 5000");
    if (d > 1 && is_scalar_only(mode)) throw std::invalid_argument("brute_force_oracle: mode needs a scalar walk");
    if (n < min_length(mode)) throw std::invalid_argument("brute_force_oracle: walk too short for mode");

    std::vector<double> mean(d);
    for (std::size_t j = 0; j < d; ++j) mean[j] = window_sum(walk, 0, n, j) / static_cast<double>(n);

    const bool minimize = mode == Mode::m_lower;
    const bool centered = mode == Mode::t_tilde || mode == Mode::t_upper;
    IncrementStatistic best{minimize ? std::numeric_limits<double>::infinity()
                                     : -std::numeric_limits<double>::infinity(),
                            0, 0, mode, f};

    for (std::size_t ell = 1; ell <= n; ++ell) {
        if (centered && ell == n) break;
        const double len = static_cast<double>(ell);
        const double denom = centered ? f(len * (1.0 - len / static_cast<double>(n))) : f(len);
        const std::size_t k_first = mode == Mode::m_hat ? ell + 1 : 0;
        for (std::size_t k = k_first; k + ell <= n; ++k) {
            double value = 0.0;
            if (mode == Mode::m_hat) {
                value = window_sum(walk, k, k + ell, 0) - window_sum(walk, k - ell, k, 0);
            } else if (d > 1) {
                double sq = 0.0;
                for (std::size_t j = 0; j < d; ++j) {
                    const double diff = window_sum(walk, k, k + ell, j) - (centered ? len * mean[j] : 0.0);
                    sq += diff * diff;
                }
                value = std::sqrt(sq);
            } else {
                const double inc = window_sum(walk, k, k + ell, 0);
                switch (mode) {
                    case Mode::m_tilde: value = std::abs(inc); break;
                    case Mode::t_tilde: value = std::abs(inc - len * mean[0]); break;
                    case Mode::t_upper: value = inc - len * mean[0]; break;
                    default: value = inc; break;
                }
            }
            value /= denom;
            if (minimize ? value < best.value : value > best.value) {
                best.value = value;
                best.arg_k = k;
                best.arg_ell = ell;
            }
        }
    }
    return best;
}

IncrementStatistic brute_force_oracle(const WalkData& walk, Mode mode, double gamma) {
    return brute_force_oracle(walk, mode, ScalingFunction::power(gamma));
}

OracleSuiteReport oracle_equivalence_suite(std::size_t walks, std::uint64_t seed, std::size_t n_min,
                                           std::size_t n_max, double rel_tol) {
    if (n_min < 3 || n_max < n_min || n_max > kOracleMaxLength)
        throw std::invalid_argument("oracle_equivalence_suite: need 3 <= n_min <= n_max <= 5000");
    const ScalingFunction scalings[] = {ScalingFunction::power(0.5), ScalingFunction::power(0.2),
                                        ScalingFunction::power(1.0), ScalingFunction::power(0.7, 0.3),
                                        ScalingFunction::power_log(0.4, 1.5)};
    OracleSuiteReport rep;
    for (std::size_t w = 0; w < walks; ++w) {
        Engine eng = make_engine(SeedStream{seed, w});
        const std::size_t n = n_min + static_cast<std::size_t>(eng() % (n_max - n_min + 1));
        const std::size_t kind = w % 6;
        const std::size_t dim = kind == 3 ? 2 + (w / 6) % 2 : 1;
        const bool integer = kind == 4;
        std::vector<double> jumps(n * dim);
        if (kind <= 3) {
            HeavyTailLaw law;
            law.alpha = kind == 0 ? 0.8 : kind == 2 ? 3.0 : 1.5;
            law.p = 0.2 + 0.6 * uniform_open(eng);
            law.dim = dim;
            const SeedStream stream{seed ^ 0x5bd1e995u, w};
            jumps = dim == 1 ? sample_scalar(law, n, stream) : sample_vector(law, n, stream).values;
        } else if (integer) {
            for (auto& x : jumps) x = static_cast<double>(static_cast<int>(eng() % 7) - 3);
        } else {
            for (auto& x : jumps) x = standard_normal(eng);
        }
        const auto walk = prefix_sums(jumps, dim);
        const auto& f = scalings[w % std::size(scalings)];
        ++rep.walks;

        for (Mode mode : all_modes) {
            if (dim > 1 && is_scalar_only(mode)) continue;
            if (n < min_length(mode)) continue;
            const auto fast = compute_statistic(walk, mode, f);
            const auto slow = brute_force_oracle(walk, mode, f);
            ++rep.comparisons;
            const double err = std::abs(fast.value - slow.value) / std::max(1.0, std::abs(slow.value));
            rep.max_rel_error = std::max(rep.max_rel_error, err);
            const bool bad_value = !(err <= rel_tol);
            const bool bad_window = integer && (fast.arg_k != slow.arg_k || fast.arg_ell != slow.arg_ell);
            rep.failures += bad_value;
            rep.window_mismatches += bad_window;
            if ((bad_value || bad_window) && rep.messages.size() < 10) {
                std::ostringstream msg;
                msg << "walk " << w << " n=" << n << " dim=" << dim << " " << to_string(mode) << " " << f.describe()
                    << ": kernel " << fast.value << " at (" << fast.arg_k << "," << fast.arg_ell << "), oracle "
                    << slow.value << " at (" << slow.arg_k << "," << slow.arg_ell << ")";
                rep.messages.push_back(msg.str());
            }
        }
    }
    return rep;
}

}  // namespace maxinc
