#include "maxinc/limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "maxinc/parallel.hpp"
#include "maxinc/stats.hpp"

namespace maxinc {

namespace {

void require_alpha(double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
}

constexpr double kTailMass = 1e-8;
constexpr double kQuadratureTolerance = 1e-6;

}  // namespace

double frechet_cdf(double alpha, double x) {
    require_alpha(alpha);
    if (!(x > 0.0)) return 0.0;
    return std::exp(-std::pow(x, -alpha));
}

double frechet_quantile(double alpha, double u) {
    require_alpha(alpha);
    if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("frechet_quantile requires u in (0, 1)");
    return std::pow(-std::log(u), -1.0 / alpha);
}

double frechet_power_cdf(double alpha, double r, double x) {
    require_alpha(alpha);
    if (!(r > 0.0)) throw std::invalid_argument("frechet_power_cdf requires r > 0");
    if (!(x > 0.0)) return 0.0;
    // Integer powers as products, so Phi^2 is bit-identical to Phi * Phi.
    if (r == 1.0) return frechet_cdf(alpha, x);
    if (r == 2.0) {
        const double c = frechet_cdf(alpha, x);
        return c * c;
    }
    return std::exp(-r * std::pow(x, -alpha));
}

double frechet_power_quantile(double alpha, double r, double u) {
    require_alpha(alpha);
    if (!(r > 0.0)) throw std::invalid_argument("frechet_power_quantile requires r > 0");
    if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("frechet_power_quantile requires u in (0, 1)");
    return std::pow(-std::log(u) / r, -1.0 / alpha);
}

double joint_one_sided_cdf(double alpha, double p, double x, double y) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("joint_one_sided_cdf requires p in (0, 1)");
    return frechet_cdf(alpha, y) * (1.0 - frechet_power_cdf(alpha, (1.0 - p) / p, x));
}

double gumbel_cdf(double x) { return std::exp(-std::exp(-x)); }

double CdfTable::operator()(double v) const {
    if (x.empty() || v < x.front()) return 0.0;
    if (v >= x.back()) return 1.0;
    const auto it = std::upper_bound(x.begin(), x.end(), v);
    const std::size_t i = static_cast<std::size_t>(it - x.begin());
    const double t = (v - x[i - 1]) / (x[i] - x[i - 1]);
    return F[i - 1] + t * (F[i] - F[i - 1]);
}

double frechet_convolution_cdf(double alpha, double r, double z) {
    require_alpha(alpha);
    if (!(r > 0.0)) throw std::invalid_argument("frechet_convolution_cdf requires r > 0");
    if (!(z > 0.0)) return 0.0;
    // P(Y + Y' <= z) = int_0^z Phi^r(z - y) dPhi(y), integrated in t = log y
    // where the integrand is a smooth bump vanishing at both ends.
    const double lo = std::log(std::pow(700.0, -1.0 / alpha));
    const double hi = std::log(z);
    if (!(hi > lo)) return 0.0;
    auto integrand = [&](double t) {
        const double y = std::exp(t);
        if (y >= z) return 0.0;
        const double tail = std::pow(y, -alpha);
        return alpha * tail * std::exp(-tail) * frechet_power_cdf(alpha, r, z - y);
    };
    double error = 0.0;
    const double value =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, lo, hi, 15, 1e-12, &error);
    if (error > kQuadratureTolerance) {
        std::ostringstream os;
        os << "range limit quadrature did not converge at z = " << z << " (error estimate " << error << ")";
        throw std::runtime_error(os.str());
    }
    return std::clamp(value, 0.0, 1.0);
}

std::vector<double> default_range_grid(double alpha, double p, std::size_t points) {
    require_alpha(alpha);
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("default_range_grid requires p in (0, 1)");
    if (points < 2) throw std::invalid_argument("default_range_grid needs at least two points");
    const double r = (1.0 - p) / p;
    // P(Y + Y' <= z) <= exp(-(1 + r) z^-alpha), so this point has mass below 1e-8.
    const double lo = std::pow((1.0 + r) / -std::log(kTailMass), 1.0 / alpha);
    const double hi = frechet_quantile(alpha, 1.0 - kTailMass) + frechet_power_quantile(alpha, r, 1.0 - kTailMass);
    std::vector<double> grid(points);
    const double step = std::log(hi / lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) grid[i] = lo * std::exp(step * static_cast<double>(i));
    grid.back() = hi;
    return grid;
}

CdfTable range_limit_cdf(double alpha, double p, std::span<const double> x_grid) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("range_limit_cdf requires p in (0, 1)");
    if (!std::is_sorted(x_grid.begin(), x_grid.end())) throw std::invalid_argument("range_limit_cdf: grid unsorted");
    const double r = (1.0 - p) / p;
    CdfTable t;
    t.x.assign(x_grid.begin(), x_grid.end());
    t.F.resize(t.x.size());
    double running = 0.0;
    for (std::size_t i = 0; i < t.x.size(); ++i) {
        // Quadrature noise is far below the tolerance; enforce monotonicity.
        running = std::max(running, frechet_convolution_cdf(alpha, r, t.x[i]));
        t.F[i] = running;
    }
    return t;
}

std::vector<double> brownian_path(std::size_t grid_size, const SeedStream& seed) {
    if (grid_size < 1) throw std::invalid_argument("brownian_path needs a positive grid size");
    Engine eng = make_engine(seed);
    const double scale = 1.0 / std::sqrt(static_cast<double>(grid_size));
    std::vector<double> path(grid_size + 1, 0.0);
    for (std::size_t i = 1; i <= grid_size; ++i) path[i] = path[i - 1] + scale * standard_normal(eng);
    return path;
}

double holder_functional(std::span<const double> path, double gamma) {
    if (!(gamma >= 0.0 && gamma < 0.5)) throw std::invalid_argument("holder functional requires 0 <= gamma < 1/2");
    if (path.size() < 2) throw std::invalid_argument("holder functional needs at least two grid points");
    const auto profile = increment_profile(path, false);
    const double steps = static_cast<double>(path.size() - 1);
    double best = 0.0;
    for (std::size_t h = 1; h <= profile.n; ++h) {
        const double inner = std::max(profile.max_inc[h - 1], -profile.min_inc[h - 1]);
        best = std::max(best, inner / std::pow(static_cast<double>(h) / steps, gamma));
    }
    return best;
}

double simulate_holder_functional(double gamma, std::size_t grid_size, const SeedStream& seed) {
    if (!(gamma >= 0.0 && gamma < 0.5))
        throw std::invalid_argument("simulate_holder_functional requires 0 <= gamma < 1/2 (the functional diverges otherwise)");
    if (grid_size < 1024) throw std::invalid_argument("simulate_holder_functional requires grid_size >= 1024");
    return holder_functional(brownian_path(grid_size, seed), gamma);
}

std::vector<double> simulate_holder_sample(double gamma, std::size_t grid_size, std::size_t draws,
                                           std::uint64_t master_seed, unsigned workers) {
    std::vector<double> out(draws);
    parallel_for(draws, workers, [&](std::size_t i) {
        out[i] = simulate_holder_functional(gamma, grid_size, SeedStream{master_seed, i});
    });
    std::sort(out.begin(), out.end());
    return out;
}

double ks_distance(std::span<const double> sorted_sample, const std::function<double(double)>& cdf) {
    if (sorted_sample.empty()) throw std::invalid_argument("ks_distance: empty sample");
    if (!std::is_sorted(sorted_sample.begin(), sorted_sample.end()))
        throw std::invalid_argument("ks_distance: sample must be sorted");
    const double m = static_cast<double>(sorted_sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted_sample.size(); ++i) {
        const double F = cdf(sorted_sample[i]);
        d = std::max({d, F - static_cast<double>(i) / m, static_cast<double>(i + 1) / m - F});
    }
    return std::min(d, 1.0);
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    if (!std::is_sorted(a.begin(), a.end()) || !std::is_sorted(b.begin(), b.end()))
        throw std::invalid_argument("ks_two_sample: samples must be sorted");
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

LimitLaw LimitLaw::frechet(double alpha) {
    require_alpha(alpha);
    LimitLaw l;
    l.kind_ = Kind::frechet;
    l.alpha_ = alpha;
    return l;
}

LimitLaw LimitLaw::frechet_power(double alpha, double r) {
    require_alpha(alpha);
    if (!(r > 0.0)) throw std::invalid_argument("frechet_power law requires r > 0");
    LimitLaw l;
    l.kind_ = Kind::frechet_power;
    l.alpha_ = alpha;
    l.r_ = r;
    return l;
}

LimitLaw LimitLaw::joint_one_sided(double alpha, double p) {
    require_alpha(alpha);
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("joint law requires p in (0, 1)");
    LimitLaw l;
    l.kind_ = Kind::joint_one_sided;
    l.alpha_ = alpha;
    l.p_ = p;
    l.r_ = (1.0 - p) / p;
    return l;
}

LimitLaw LimitLaw::range_convolution(double alpha, double p) {
    LimitLaw l = joint_one_sided(alpha, p);
    l.kind_ = Kind::range_convolution;
    const auto grid = default_range_grid(alpha, p);
    l.table_ = std::make_shared<const CdfTable>(range_limit_cdf(alpha, p, grid));
    return l;
}

LimitLaw LimitLaw::gumbel() {
    LimitLaw l;
    l.kind_ = Kind::gumbel;
    return l;
}

LimitLaw LimitLaw::holder_functional(double gamma, std::vector<double> draws) {
    if (!(gamma >= 0.0 && gamma < 0.5)) throw std::invalid_argument("holder law requires 0 <= gamma < 1/2");
    if (draws.empty()) throw std::invalid_argument("holder law needs simulated draws");
    std::sort(draws.begin(), draws.end());
    LimitLaw l;
    l.kind_ = Kind::holder_functional;
    l.gamma_ = gamma;
    l.draws_ = std::make_shared<const std::vector<double>>(std::move(draws));
    return l;
}

double LimitLaw::cdf(double x) const {
    switch (kind_) {
        case Kind::frechet: return frechet_cdf(alpha_, x);
        case Kind::frechet_power: return frechet_power_cdf(alpha_, r_, x);
        case Kind::range_convolution: return (*table_)(x);
        case Kind::gumbel: return gumbel_cdf(x);
        case Kind::holder_functional: {
            const auto& d = *draws_;
            return static_cast<double>(std::upper_bound(d.begin(), d.end(), x) - d.begin()) /
                   static_cast<double>(d.size());
        }
        case Kind::joint_one_sided: break;
    }
    throw std::logic_error("joint_one_sided is bivariate; use joint_cdf");
}

double LimitLaw::joint_cdf(double x, double y) const {
    if (kind_ != Kind::joint_one_sided) throw std::logic_error("joint_cdf needs the joint_one_sided law");
    return joint_one_sided_cdf(alpha_, p_, x, y);
}

std::string to_string(LimitLaw::Kind k) {
    switch (k) {
        case LimitLaw::Kind::frechet: return "frechet";
        case LimitLaw::Kind::frechet_power: return "frechet_power";
        case LimitLaw::Kind::joint_one_sided: return "joint_one_sided";
        case LimitLaw::Kind::range_convolution: return "range_convolution";
        case LimitLaw::Kind::gumbel: return "gumbel";
        case LimitLaw::Kind::holder_functional: return "holder_functional";
    }
    return "frechet";
}

std::string LimitLaw::describe() const {
    std::ostringstream os;
    os << to_string(kind_);
    switch (kind_) {
        case Kind::frechet: os << "(alpha=" << alpha_ << ")"; break;
        case Kind::frechet_power: os << "(alpha=" << alpha_ << ", r=" << r_ << ")"; break;
        case Kind::joint_one_sided:
        case Kind::range_convolution: os << "(alpha=" << alpha_ << ", p=" << p_ << ")"; break;
        case Kind::holder_functional: os << "(gamma=" << gamma_ << ", draws=" << draws_->size() << ")"; break;
        case Kind::gumbel: break;
    }
    return os.str();
}

}  // namespace maxinc
