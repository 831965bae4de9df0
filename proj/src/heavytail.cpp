#include "maxinc/heavytail.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace maxinc {

std::string to_string(Centering c) {
    switch (c) {
        case Centering::none: return "none";
        case Centering::analytic_mean: return "analytic_mean";
        case Centering::empirical: return "empirical";
    }
    return "none";
}

Centering centering_from_string(const std::string& s) {
    if (s == "none") return Centering::none;
    if (s == "analytic_mean") return Centering::analytic_mean;
    if (s == "empirical") return Centering::empirical;
    throw std::invalid_argument("unknown centering '" + s + "' (expected none, analytic_mean, empirical)");
}

SpectralMeasure SpectralMeasure::discrete(std::vector<std::vector<double>> atoms, std::vector<double> weights) {
    SpectralMeasure m;
    m.kind = Kind::discrete;
    m.atoms = std::move(atoms);
    m.weights = std::move(weights);
    return m;
}

std::vector<double> SpectralMeasure::mean(std::size_t dim) const {
    std::vector<double> mu(dim, 0.0);
    if (kind == Kind::uniform) return mu;
    for (std::size_t a = 0; a < atoms.size(); ++a)
        for (std::size_t j = 0; j < dim; ++j) mu[j] += weights[a] * atoms[a][j];
    return mu;
}

void HeavyTailLaw::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be positive");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must lie in (0, 1)");
    if (dim < 1) throw std::invalid_argument("dim must be at least 1");
    if (centering == Centering::analytic_mean && !(alpha > 1.0))
        throw std::invalid_argument("analytic_mean centering requires alpha > 1 (the mean is infinite otherwise)");
    if (dim >= 2 && spectral.kind == SpectralMeasure::Kind::discrete) {
        if (spectral.atoms.empty()) throw std::invalid_argument("spectral measure has no atoms");
        if (spectral.atoms.size() != spectral.weights.size())
            throw std::invalid_argument("spectral atoms and weights differ in length");
        double total = 0.0;
        for (std::size_t a = 0; a < spectral.atoms.size(); ++a) {
            const auto& atom = spectral.atoms[a];
            if (atom.size() != dim) throw std::invalid_argument("spectral atom dimension does not match dim");
            const double norm = std::sqrt(std::inner_product(atom.begin(), atom.end(), atom.begin(), 0.0));
            if (std::abs(norm - 1.0) > 1e-9) throw std::invalid_argument("spectral atoms must be unit vectors");
            if (!(spectral.weights[a] >= 0.0)) throw std::invalid_argument("spectral weights must be non-negative");
            total += spectral.weights[a];
        }
        if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("spectral weights must sum to 1");
    }
}

std::vector<double> HeavyTailLaw::analytic_mean() const {
    if (!(alpha > 1.0)) throw std::invalid_argument("analytic mean requires alpha > 1");
    const double radius_mean = alpha / (alpha - 1.0);
    if (dim == 1) return {radius_mean * (p - q())};
    auto mu = spectral.mean(dim);
    for (auto& v : mu) v *= radius_mean;
    return mu;
}

double HeavyTailLaw::scalar_variance() const {
    if (dim != 1) throw std::invalid_argument("scalar_variance requires dim = 1");
    if (!(alpha > 2.0)) throw std::invalid_argument("variance is infinite for alpha <= 2");
    const double second = alpha / (alpha - 2.0);
    const double mean = alpha / (alpha - 1.0) * (p - q());
    return second - mean * mean;
}

namespace {

inline double pareto_radius(Engine& eng, double inv_alpha) { return std::pow(uniform_open(eng), -inv_alpha); }

}  // namespace

std::vector<double> sample_scalar(const HeavyTailLaw& law, std::size_t n, const SeedStream& seed) {
    law.validate();
    if (law.dim != 1) throw std::invalid_argument("sample_scalar requires dim = 1");
    Engine eng = make_engine(seed);
    const double inv_alpha = 1.0 / law.alpha;
    std::vector<double> out(n);
    for (auto& x : out) {
        const double r = pareto_radius(eng, inv_alpha);
        x = uniform_open(eng) < law.p ? r : -r;
    }
    if (law.centering == Centering::analytic_mean) {
        const double shift = law.analytic_mean()[0];
        for (auto& x : out) x -= shift;
    } else if (law.centering == Centering::empirical && n > 0) {
        const double shift = std::accumulate(out.begin(), out.end(), 0.0) / static_cast<double>(n);
        for (auto& x : out) x -= shift;
    }
    return out;
}

VectorSample sample_vector(const HeavyTailLaw& law, std::size_t n, const SeedStream& seed) {
    law.validate();
    if (law.dim < 2) throw std::invalid_argument("sample_vector requires dim >= 2");
    const std::size_t d = law.dim;
    Engine eng = make_engine(seed);
    const double inv_alpha = 1.0 / law.alpha;

    std::vector<double> cumulative;
    if (law.spectral.kind == SpectralMeasure::Kind::discrete) {
        cumulative.resize(law.spectral.weights.size());
        std::partial_sum(law.spectral.weights.begin(), law.spectral.weights.end(), cumulative.begin());
    }

    VectorSample s{n, d, std::vector<double>(n * d)};
    std::vector<double> theta(d);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = pareto_radius(eng, inv_alpha);
        if (law.spectral.kind == SpectralMeasure::Kind::uniform) {
            double norm2 = 0.0;
            do {
                norm2 = 0.0;
                for (auto& t : theta) {
                    t = standard_normal(eng);
                    norm2 += t * t;
                }
            } while (norm2 == 0.0);
            const double inv = 1.0 / std::sqrt(norm2);
            for (auto& t : theta) t *= inv;
        } else {
            const double u = uniform_open(eng) * cumulative.back();
            auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
            std::size_t a = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                                                  cumulative.size() - 1);
            theta = law.spectral.atoms[a];
        }
        for (std::size_t j = 0; j < d; ++j) s.values[i * d + j] = r * theta[j];
    }

    std::vector<double> shift;
    if (law.centering == Centering::analytic_mean) {
        shift = law.analytic_mean();
    } else if (law.centering == Centering::empirical && n > 0) {
        shift.assign(d, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < d; ++j) shift[j] += s.values[i * d + j];
        for (auto& v : shift) v /= static_cast<double>(n);
    }
    if (!shift.empty())
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < d; ++j) s.values[i * d + j] -= shift[j];
    return s;
}

double norm_quantile(const HeavyTailLaw& law, std::size_t n) {
    law.validate();
    if (n < 2) throw std::invalid_argument("norm_quantile requires n >= 2");
    if (law.centering != Centering::none)
        throw std::invalid_argument("norm_quantile is defined from the uncentered law (use law.uncentered())");
    return std::pow(static_cast<double>(n), 1.0 / law.alpha);
}

NormalizingSequence::NormalizingSequence(HeavyTailLaw law) : law_(std::move(law)) {
    law_.validate();
    if (law_.centering != Centering::none)
        throw std::invalid_argument("normalizing sequence is defined from the uncentered law");
}

double truncated_mean_shift(const HeavyTailLaw& law, std::size_t n) {
    if (law.dim != 1) throw std::invalid_argument("truncated_mean_shift requires dim = 1");
    const double a = norm_quantile(law.uncentered(), n);
    // E[R 1{R <= a}] for the unit Pareto radius.
    const double truncated = std::abs(law.alpha - 1.0) < 1e-12
                                 ? std::log(a)
                                 : law.alpha / (law.alpha - 1.0) * (1.0 - std::pow(a, 1.0 - law.alpha));
    return (law.p - law.q()) * truncated;
}

double hill_estimate(std::span<const double> sample, std::size_t k) {
    if (k < 2 || k >= sample.size())
        throw std::invalid_argument("hill_estimate requires 2 <= k < sample size");
    std::vector<double> top(sample.size());
    std::transform(sample.begin(), sample.end(), top.begin(), [](double v) { return std::abs(v); });
    std::partial_sort(top.begin(), top.begin() + static_cast<std::ptrdiff_t>(k + 1), top.end(),
                      std::greater<>());
    const double threshold = top[k];
    if (!(threshold > 0.0)) throw std::invalid_argument("hill_estimate: the (k+1)-th largest norm is not positive");
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) sum += std::log(top[i] / threshold);
    if (!(sum > 0.0)) throw std::invalid_argument("hill_estimate: ties among the top order statistics");
    return static_cast<double>(k) / sum;
}

std::vector<double> norms(const VectorSample& sample) {
    std::vector<double> out(sample.n);
    for (std::size_t i = 0; i < sample.n; ++i) {
        auto r = sample.row(i);
        out[i] = std::sqrt(std::inner_product(r.begin(), r.end(), r.begin(), 0.0));
    }
    return out;
}

double hill_estimate(const VectorSample& sample, std::size_t k) { return hill_estimate(norms(sample), k); }

Matrix outer_square(std::span<const double> x) {
    const std::size_t d = x.size();
    Matrix m{d, d, std::vector<double>(d * d)};
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m.data[i * d + j] = x[i] * x[j];
    return m;
}

}  // namespace maxinc
