#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "maxinc/random.hpp"

namespace maxinc {

// Frechet law Phi_alpha(x) = exp(-x^-alpha), x > 0.
double frechet_cdf(double alpha, double x);
double frechet_quantile(double alpha, double u);
// Phi_alpha^r(x) = exp(-r x^-alpha).
double frechet_power_cdf(double alpha, double r, double x);
double frechet_power_quantile(double alpha, double r, double u);
// P(m <= -x, M <= y) for the one-sided limits: Phi_alpha(y) (1 - Phi_alpha^{q/p}(x)).
double joint_one_sided_cdf(double alpha, double p, double x, double y);
double gumbel_cdf(double x);

// Piecewise-linear CDF through tabulated points; 0 left of the table, 1
// right of it.
struct CdfTable {
    std::vector<double> x;
    std::vector<double> F;
    double operator()(double v) const;
};

// CDF of Y + Y' with Y ~ Phi_alpha and Y' ~ Phi_alpha^r independent, at one
// point. Throws std::runtime_error if the quadrature error estimate exceeds
// 1e-6.
double frechet_convolution_cdf(double alpha, double r, double z);
// Log-spaced grid from the lower 1e-8 quantile region up to the sum of the
// (1 - 1e-8) quantiles of both factors.
std::vector<double> default_range_grid(double alpha, double p, std::size_t points = 4000);
// Limit law of the normalized range M - m: the convolution with r = q/p.
CdfTable range_limit_cdf(double alpha, double p, std::span<const double> x_grid);

// Brownian motion on {i / grid_size}: grid_size + 1 values starting at 0.
std::vector<double> brownian_path(std::size_t grid_size, const SeedStream& seed);
// sup_{s != t} |W(t) - W(s)| / |t - s|^gamma over a path on a uniform grid of [0, 1].
double holder_functional(std::span<const double> path, double gamma);
// One draw of the Holder functional R_{W,Q} with Q = 1.
double simulate_holder_functional(double gamma, std::size_t grid_size, const SeedStream& seed);
std::vector<double> simulate_holder_sample(double gamma, std::size_t grid_size, std::size_t draws,
                                           std::uint64_t master_seed, unsigned workers = 1);

// sup |F_emp - F| over a sorted sample, checking both sides of each jump.
double ks_distance(std::span<const double> sorted_sample, const std::function<double(double)>& cdf);
double ks_two_sample(std::span<const double> a_sorted, std::span<const double> b_sorted);

class LimitLaw {
public:
    enum class Kind { frechet, frechet_power, joint_one_sided, range_convolution, gumbel, holder_functional };

    static LimitLaw frechet(double alpha);
    static LimitLaw frechet_power(double alpha, double r);
    static LimitLaw joint_one_sided(double alpha, double p);
    static LimitLaw range_convolution(double alpha, double p);
    static LimitLaw gumbel();
    // Empirical law of simulated draws of the functional.
    static LimitLaw holder_functional(double gamma, std::vector<double> draws);

    Kind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    double r() const { return r_; }
    double p() const { return p_; }
    double gamma() const { return gamma_; }

    // Univariate CDF; throws for the bivariate joint law.
    double cdf(double x) const;
    double joint_cdf(double x, double y) const;
    std::string describe() const;

private:
    Kind kind_ = Kind::frechet;
    double alpha_ = 1.0;
    double r_ = 1.0;
    double p_ = 0.5;
    double gamma_ = 0.0;
    std::shared_ptr<const CdfTable> table_;
    std::shared_ptr<const std::vector<double>> draws_;
};

std::string to_string(LimitLaw::Kind k);

}  // namespace maxinc
