#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "maxinc/random.hpp"

namespace maxinc {

enum class Centering { none, analytic_mean, empirical };

std::string to_string(Centering c);
Centering centering_from_string(const std::string& s);

// Angular part of a regularly varying vector: a finite set of unit atoms with
// weights, or the uniform law on the unit sphere.
struct SpectralMeasure {
    enum class Kind { uniform, discrete };
    Kind kind = Kind::uniform;
    std::vector<std::vector<double>> atoms;
    std::vector<double> weights;

    static SpectralMeasure uniform() { return {}; }
    static SpectralMeasure discrete(std::vector<std::vector<double>> atoms, std::vector<double> weights);

    // E[Theta] in R^dim.
    std::vector<double> mean(std::size_t dim) const;
};

// Two-sided unit Pareto law: P(|X| > x) = x^-alpha for x >= 1, sign + with
// probability p. For dim >= 2 the radius is the same Pareto and the
// direction is drawn from `spectral`.
struct HeavyTailLaw {
    double alpha = 1.0;
    double p = 0.5;
    std::size_t dim = 1;
    SpectralMeasure spectral;
    Centering centering = Centering::none;

    double q() const { return 1.0 - p; }

    // Throws std::invalid_argument on a violated invariant.
    void validate() const;

    HeavyTailLaw uncentered() const {
        HeavyTailLaw l = *this;
        l.centering = Centering::none;
        return l;
    }

    // Shift removed by analytic centering (componentwise for dim >= 2).
    std::vector<double> analytic_mean() const;

    // Variance of the scalar law after centering; requires alpha > 2.
    double scalar_variance() const;
};

// Row-major n x dim matrix of draws.
struct VectorSample {
    std::size_t n = 0;
    std::size_t dim = 0;
    std::vector<double> values;

    std::span<const double> row(std::size_t i) const { return {values.data() + i * dim, dim}; }
};

std::vector<double> sample_scalar(const HeavyTailLaw& law, std::size_t n, const SeedStream& seed);
VectorSample sample_vector(const HeavyTailLaw& law, std::size_t n, const SeedStream& seed);

// a_n, the (1 - 1/n)-quantile of the uncentered norm. For the unit Pareto
// radius this is n^(1/alpha).
double norm_quantile(const HeavyTailLaw& law, std::size_t n);

// a_n as a function of n for one uncentered law.
class NormalizingSequence {
public:
    explicit NormalizingSequence(HeavyTailLaw law);
    double at(std::size_t n) const { return norm_quantile(law_, n); }
    const HeavyTailLaw& law() const { return law_; }

private:
    HeavyTailLaw law_;
};

// E[X 1{|X| <= a_n}] for the scalar law. This is the truncated centering
// needed when alpha = 1 and E|X| is infinite. Diagnostic only, never applied
// by the samplers.
double truncated_mean_shift(const HeavyTailLaw& law, std::size_t n);

// Hill estimator from the k largest norms.
double hill_estimate(std::span<const double> sample, std::size_t k);
double hill_estimate(const VectorSample& sample, std::size_t k);

std::vector<double> norms(const VectorSample& sample);

struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

// x (x) x with entries x_i x_j. Its operator norm is |x|^2.
Matrix outer_square(std::span<const double> x);

}  // namespace maxinc
