#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "maxinc/heavytail.hpp"

namespace maxinc {

enum class Sided { two_sided, one_sided };
std::string to_string(Sided s);
Sided sided_from_string(const std::string& s);

// Threshold on the raw statistic: a_n Phi_alpha^-1(1 - level), times p^(1/alpha)
// when one-sided, with a_n = n^(1/alpha).
double critical_value(double alpha, double p, std::size_t n, double level, Sided sided, double gamma);

// Tail index either known in advance or estimated from the k largest
// centered norms.
struct AlphaSource {
    enum class Kind { supplied, hill };
    Kind kind = Kind::supplied;
    double alpha = 1.5;
    double p = 0.5;
    std::size_t hill_k = 0;

    static AlphaSource supplied(double alpha, double p) { return {Kind::supplied, alpha, p, 0}; }
    static AlphaSource hill(std::size_t k) { return {Kind::hill, 0.0, 0.0, k}; }
};

// 0.5 - 1/alpha + 0.05, clamped to [0.05, 0.95].
double default_gamma(double alpha);

struct DetectOptions {
    std::optional<double> gamma;  // default_gamma(alpha) when unset
    double level = 0.05;
    Sided sided = Sided::two_sided;
    AlphaSource alpha_source = AlphaSource::supplied(1.5, 0.5);
};

struct DetectionReport {
    std::size_t n = 0;
    double statistic = 0.0;
    double normalizer = 0.0;  // a_n, or b_n when one-sided
    double critical = 0.0;
    double p_value = 1.0;
    bool reject = false;
    // Candidate epidemic interval [window_begin, window_end] (1-based, inclusive).
    std::size_t window_begin = 0;
    std::size_t window_end = 0;
    double gamma = 0.0;
    double level = 0.0;
    Sided sided = Sided::two_sided;
    AlphaSource::Kind alpha_kind = AlphaSource::Kind::supplied;
    double alpha = 0.0;
    double p = 0.0;
    std::size_t hill_k = 0;
};

// Epidemic test for a change in mean. The statistic is T~ (two-sided) or T
// (one-sided) with f = power(gamma) taken at l(1 - l/n).
DetectionReport detect(std::span<const double> data, const DetectOptions& options);

// Mean shift by `shift` on entries k_star + 1 .. m_star (1-based).
struct EpidemicSpec {
    std::size_t k_star = 0;
    std::size_t m_star = 0;
    double shift = 0.0;

    std::size_t duration() const { return m_star - k_star; }
    void validate(std::size_t n) const;
};

std::vector<double> inject_epidemic(std::span<const double> data, const EpidemicSpec& spec);
// Epidemic of the given duration placed at k_star = floor((n - duration) / 2).
EpidemicSpec centered_epidemic(std::size_t n, std::size_t duration, double shift);

struct PowerRow {
    double param = 0.0;
    double power = 0.0;
    double se = 0.0;
    std::size_t reps = 0;
    double overlap = 0.0;  // fraction of runs whose window meets the epidemic
};

struct PowerPlan {
    enum class Grid { shift, theta };
    HeavyTailLaw law;
    DetectOptions detect;
    std::size_t n = 0;
    Grid grid = Grid::shift;
    std::vector<double> values;
    // Shift grid: epidemic duration. Theta grid: duration floor(n^theta) with
    // this per-point shift.
    std::size_t duration = 0;
    double shift = 0.0;
    std::size_t reps = 0;
    std::uint64_t master_seed = 0;
    unsigned workers = 1;
};

std::string to_string(PowerPlan::Grid g);
PowerPlan::Grid power_grid_from_string(const std::string& s);

// Rejection frequency per grid point with its binomial standard error.
// Replication r draws its noise from SeedStream{master_seed, r} at every grid
// point, so the rows share their random numbers.
std::vector<PowerRow> power_curve(const PowerPlan& plan);

}  // namespace maxinc
