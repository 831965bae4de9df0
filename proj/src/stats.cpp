#include "maxinc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "maxinc/parallel.hpp"

namespace maxinc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kBlockedThreshold = std::size_t{1} << 15;
constexpr std::size_t kBlock = 1024;
constexpr std::size_t kEllChunk = 64;

// Centered window length l(1 - l/n) used by the T statistics.
inline double centered_length(std::size_t ell, std::size_t n) {
    const double l = static_cast<double>(ell);
    return l * (1.0 - l / static_cast<double>(n));
}

void scan_increments(const double* s, std::size_t n, std::size_t ell, double& max_out, double& min_out) {
    const double* a = s;
    const double* b = s + ell;
    const std::size_t count = n - ell + 1;
    double hi = -kInf;
    double lo = kInf;
#pragma omp simd reduction(max : hi) reduction(min : lo)
    for (std::size_t k = 0; k < count; ++k) {
        const double d = b[k] - a[k];
        hi = d > hi ? d : hi;
        lo = d < lo ? d : lo;
    }
    max_out = hi;
    min_out = lo;
}

double scan_hat(const double* s, std::size_t n, std::size_t ell) {
    double hi = -kInf;
    const std::size_t first = ell + 1;
    const std::size_t last = n - ell;
#pragma omp simd reduction(max : hi)
    for (std::size_t k = first; k <= last; ++k) {
        const double d = (s[k + ell] + s[k - ell]) - 2.0 * s[k];
        hi = d > hi ? d : hi;
    }
    return hi;
}

void require_scalar(const WalkData& walk, Mode mode) {
    if (walk.dim() != 1 && is_scalar_only(mode))
        throw std::invalid_argument(to_string(mode) + " is defined for scalar walks only");
}

void require_length(const WalkData& walk, Mode mode) {
    if (walk.n() < min_length(mode))
        throw std::invalid_argument(to_string(mode) + " requires n >= " + std::to_string(min_length(mode)));
}

IncrementStatistic vector_statistic(const WalkData& walk, Mode mode, const ScalingFunction& f) {
    const std::size_t n = walk.n();
    const std::size_t d = walk.dim();
    const double* s = walk.prefix().data();
    const bool centered = mode == Mode::t_tilde;
    const std::vector<double> mean = walk.sample_mean();
    std::vector<double> c(d, 0.0);

    IncrementStatistic best{-kInf, 0, 0, mode, f};
    const std::size_t ell_max = centered ? n - 1 : n;
    for (std::size_t ell = 1; ell <= ell_max; ++ell) {
        if (centered)
            for (std::size_t j = 0; j < d; ++j) c[j] = static_cast<double>(ell) * mean[j];
        double best_sq = -kInf;
        std::size_t best_k = 0;
        for (std::size_t k = 0; k + ell <= n; ++k) {
            const double* a = s + k * d;
            const double* b = s + (k + ell) * d;
            double sq = 0.0;
            const double* x = walk.jumps().data() + k * d;
            for (std::size_t j = 0; j < d; ++j) {
                const double diff = (ell == 1 ? x[j] : b[j] - a[j]) - c[j];
                sq += diff * diff;
            }
            if (sq > best_sq) {
                best_sq = sq;
                best_k = k;
            }
        }
        const double denom = centered ? f(centered_length(ell, n)) : f(static_cast<double>(ell));
        const double value = std::sqrt(best_sq) / denom;
        if (value > best.value) {
            best.value = value;
            best.arg_k = best_k;
            best.arg_ell = ell;
        }
    }
    return best;
}

}  // namespace

std::string to_string(Mode m) {
    switch (m) {
        case Mode::m_tilde: return "m_tilde";
        case Mode::t_tilde: return "t_tilde";
        case Mode::m_upper: return "m_upper";
        case Mode::m_lower: return "m_lower";
        case Mode::t_upper: return "t_upper";
        case Mode::m_hat: return "m_hat";
    }
    return "m_tilde";
}

Mode mode_from_string(const std::string& s) {
    for (Mode m : all_modes)
        if (to_string(m) == s) return m;
    throw std::invalid_argument("unknown mode '" + s +
                                "' (valid modes: m_tilde, t_tilde, m_upper, m_lower, t_upper, m_hat)");
}

bool is_one_sided(Mode m) { return m == Mode::m_upper || m == Mode::m_lower || m == Mode::t_upper; }

bool is_scalar_only(Mode m) { return m != Mode::m_tilde && m != Mode::t_tilde; }

std::size_t min_length(Mode m) {
    switch (m) {
        case Mode::t_tilde:
        case Mode::t_upper: return 2;
        case Mode::m_hat: return 3;
        default: return 1;
    }
}

std::vector<double> WalkData::sample_mean() const {
    std::vector<double> mean(dim_);
    for (std::size_t j = 0; j < dim_; ++j) mean[j] = prefix_[n_ * dim_ + j] / static_cast<double>(n_);
    return mean;
}

WalkData prefix_sums(std::span<const double> jumps, std::size_t dim) {
    if (dim == 0) throw std::invalid_argument("prefix_sums: dim must be positive");
    if (jumps.empty()) throw std::invalid_argument("prefix_sums: empty jump sequence");
    if (jumps.size() % dim != 0) throw std::invalid_argument("prefix_sums: length is not a multiple of dim");

    WalkData w;
    w.dim_ = dim;
    w.n_ = jumps.size() / dim;
    w.jumps_.assign(jumps.begin(), jumps.end());
    w.prefix_.assign((w.n_ + 1) * dim, 0.0);
    const std::size_t n = w.n_;

    for (std::size_t j = 0; j < dim; ++j) {
        if (n <= kBlockedThreshold) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += jumps[i * dim + j];
                w.prefix_[(i + 1) * dim + j] = acc;
            }
            continue;
        }
        double offset = 0.0;
        for (std::size_t start = 0; start < n; start += kBlock) {
            const std::size_t stop = std::min(n, start + kBlock);
            double local = 0.0;
            for (std::size_t i = start; i < stop; ++i) {
                local += jumps[i * dim + j];
                w.prefix_[(i + 1) * dim + j] = offset + local;
            }
            offset += local;
        }
    }
    return w;
}

WalkData prefix_sums(const VectorSample& sample) { return prefix_sums(sample.values, sample.dim); }

IncrementProfile increment_profile(const WalkData& walk, bool with_hat, unsigned workers) {
    if (walk.dim() != 1) throw std::invalid_argument("increment_profile requires a scalar walk");
    auto p = increment_profile(walk.prefix(), with_hat, workers);
    // Length-one windows are the jumps themselves, so M~ >= max |X_i| holds
    // without roundoff.
    const auto [lo, hi] = std::minmax_element(walk.jumps().begin(), walk.jumps().end());
    p.max_inc[0] = *hi;
    p.min_inc[0] = *lo;
    return p;
}

IncrementProfile increment_profile(std::span<const double> partial_sums, bool with_hat, unsigned workers) {
    if (partial_sums.size() < 2) throw std::invalid_argument("increment_profile requires at least one increment");
    const std::size_t n = partial_sums.size() - 1;
    const double* s = partial_sums.data();
    IncrementProfile p;
    p.n = n;
    p.max_inc.resize(n);
    p.min_inc.resize(n);
    const std::size_t hat_count = n >= 3 ? (n - 1) / 2 : 0;
    if (with_hat) p.max_hat.resize(hat_count);

    const std::size_t chunks = (n + kEllChunk - 1) / kEllChunk;
    parallel_for(chunks, workers, [&](std::size_t chunk) {
        const std::size_t first = chunk * kEllChunk + 1;
        const std::size_t last = std::min(n, first + kEllChunk - 1);
        for (std::size_t ell = first; ell <= last; ++ell) {
            scan_increments(s, n, ell, p.max_inc[ell - 1], p.min_inc[ell - 1]);
            if (with_hat && ell <= hat_count) p.max_hat[ell - 1] = scan_hat(s, n, ell);
        }
    });
    return p;
}

IncrementStatistic evaluate(const WalkData& walk, const IncrementProfile& profile, Mode mode,
                            const ScalingFunction& f) {
    require_scalar(walk, mode);
    require_length(walk, mode);
    const std::size_t n = walk.n();
    if (profile.n != n) throw std::invalid_argument("evaluate: profile does not match walk");
    if (mode == Mode::m_hat && profile.max_hat.size() != (n - 1) / 2)
        throw std::invalid_argument("evaluate: profile lacks the m_hat extremes");

    const double* s = walk.prefix().data();
    const double xbar = s[n] / static_cast<double>(n);
    const bool minimize = mode == Mode::m_lower;

    double best = minimize ? kInf : -kInf;
    std::size_t best_ell = 0;
    double best_target = 0.0;
    auto consider = [&](std::size_t ell, double inner, double denom) {
        const double v = inner / denom;
        if (minimize ? v < best : v > best) {
            best = v;
            best_ell = ell;
            best_target = inner;
        }
    };

    switch (mode) {
        case Mode::m_tilde:
            for (std::size_t ell = 1; ell <= n; ++ell)
                consider(ell, std::max(profile.max_inc[ell - 1], -profile.min_inc[ell - 1]),
                         f(static_cast<double>(ell)));
            break;
        case Mode::m_upper:
            for (std::size_t ell = 1; ell <= n; ++ell)
                consider(ell, profile.max_inc[ell - 1], f(static_cast<double>(ell)));
            break;
        case Mode::m_lower:
            for (std::size_t ell = 1; ell <= n; ++ell)
                consider(ell, profile.min_inc[ell - 1], f(static_cast<double>(ell)));
            break;
        case Mode::t_tilde:
            for (std::size_t ell = 1; ell < n; ++ell) {
                const double c = static_cast<double>(ell) * xbar;
                consider(ell, std::max(profile.max_inc[ell - 1] - c, c - profile.min_inc[ell - 1]),
                         f(centered_length(ell, n)));
            }
            break;
        case Mode::t_upper:
            for (std::size_t ell = 1; ell < n; ++ell) {
                const double c = static_cast<double>(ell) * xbar;
                consider(ell, profile.max_inc[ell - 1] - c, f(centered_length(ell, n)));
            }
            break;
        case Mode::m_hat:
            for (std::size_t ell = 1; ell <= profile.max_hat.size(); ++ell)
                consider(ell, profile.max_hat[ell - 1], f(static_cast<double>(ell)));
            break;
    }

    // Second pass over the winning length: first k reproducing the extreme.
    const std::size_t ell = best_ell;
    const double c = static_cast<double>(ell) * xbar;
    std::size_t arg_k = 0;
    bool found = false;
    if (mode == Mode::m_hat) {
        for (std::size_t k = ell + 1; k + ell <= n && !found; ++k)
            if ((s[k + ell] + s[k - ell]) - 2.0 * s[k] == best_target) arg_k = k, found = true;
    } else {
        const double* x = walk.jumps().data();
        for (std::size_t k = 0; k + ell <= n && !found; ++k) {
            const double d = ell == 1 ? x[k] : s[k + ell] - s[k];
            double v = d;
            switch (mode) {
                case Mode::m_tilde: v = std::abs(d); break;
                case Mode::t_tilde: v = std::abs(d - c); break;
                case Mode::t_upper: v = d - c; break;
                default: break;
            }
            if (v == best_target) arg_k = k, found = true;
        }
    }
    if (!found) throw std::logic_error("evaluate: extreme window not recovered");
    return IncrementStatistic{best, arg_k, ell, mode, f};
}

IncrementStatistic compute_statistic(const WalkData& walk, Mode mode, const ScalingFunction& f, unsigned workers) {
    require_scalar(walk, mode);
    require_length(walk, mode);
    if (walk.dim() > 1) return vector_statistic(walk, mode, f);
    const auto profile = increment_profile(walk, mode == Mode::m_hat, workers);
    return evaluate(walk, profile, mode, f);
}

IncrementStatistic stat_M_tilde(const WalkData& walk, const ScalingFunction& f) {
    return compute_statistic(walk, Mode::m_tilde, f);
}

IncrementStatistic stat_T_tilde(const WalkData& walk, const ScalingFunction& f) {
    return compute_statistic(walk, Mode::t_tilde, f);
}

OneSidedPair stat_one_sided(const WalkData& walk, const ScalingFunction& f) {
    require_scalar(walk, Mode::m_upper);
    const auto profile = increment_profile(walk, false);
    return {evaluate(walk, profile, Mode::m_lower, f), evaluate(walk, profile, Mode::m_upper, f)};
}

IncrementStatistic stat_T_one_sided(const WalkData& walk, const ScalingFunction& f) {
    return compute_statistic(walk, Mode::t_upper, f);
}

IncrementStatistic stat_T_one_sided(const WalkData& walk, double gamma) {
    return stat_T_one_sided(walk, ScalingFunction::power(gamma));
}

IncrementStatistic stat_hat(const WalkData& walk, const ScalingFunction& f) {
    return compute_statistic(walk, Mode::m_hat, f);
}

IncrementStatistic stat_classic(const WalkData& walk, ClassicMode mode, double mu) {
    const auto root = ScalingFunction::power(0.5);
    switch (mode) {
        case ClassicMode::T_n: return compute_statistic(walk, Mode::t_upper, root);
        case ClassicMode::T_tilde_n: return compute_statistic(walk, Mode::t_tilde, root);
        case ClassicMode::M_n:
        case ClassicMode::M_tilde_n: {
            const Mode m = mode == ClassicMode::M_n ? Mode::m_upper : Mode::m_tilde;
            if (mu == 0.0) return compute_statistic(walk, m, root);
            if (walk.dim() != 1) throw std::invalid_argument("stat_classic: known mean shift needs a scalar walk");
            std::vector<double> centered(walk.jumps().begin(), walk.jumps().end());
            for (auto& x : centered) x -= mu;
            return compute_statistic(prefix_sums(centered), m, root);
        }
    }
    throw std::invalid_argument("stat_classic: unknown mode");
}

double window_value(const WalkData& walk, Mode mode, const ScalingFunction& f, std::size_t k, std::size_t ell) {
    const std::size_t n = walk.n();
    const std::size_t d = walk.dim();
    if (ell < 1 || k + ell > n) throw std::out_of_range("window_value: window outside the walk");
    const auto mean = walk.sample_mean();
    const double* s = walk.prefix().data();
    const double len = static_cast<double>(ell);

    if (mode == Mode::m_hat) {
        if (k < ell + 1) throw std::out_of_range("window_value: m_hat window outside the walk");
        return ((s[k + ell] + s[k - ell]) - 2.0 * s[k]) / f(len);
    }
    const bool centered = mode == Mode::t_tilde || mode == Mode::t_upper;
    const double denom = centered ? f(centered_length(ell, n)) : f(len);
    if (d > 1) {
        double sq = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double inc = ell == 1 ? walk.jump(k)[j] : s[(k + ell) * d + j] - s[k * d + j];
            const double diff = inc - (centered ? len * mean[j] : 0.0);
            sq += diff * diff;
        }
        return std::sqrt(sq) / denom;
    }
    const double inc = ell == 1 ? walk.jump(k)[0] : s[k + ell] - s[k];
    switch (mode) {
        case Mode::m_tilde: return std::abs(inc) / denom;
        case Mode::t_tilde: return std::abs(inc - len * mean[0]) / denom;
        case Mode::t_upper: return (inc - len * mean[0]) / denom;
        default: return inc / denom;
    }
}

}  // namespace maxinc
