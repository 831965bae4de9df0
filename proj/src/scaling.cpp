#include "maxinc/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace maxinc {

ScalingFunction ScalingFunction::power(double gamma_prime, double gamma) {
    if (!(gamma >= 0.0)) throw std::invalid_argument("power scaling requires gamma >= 0");
    if (!(gamma_prime >= gamma)) throw std::invalid_argument("power scaling requires gamma_prime >= gamma");
    ScalingFunction f;
    f.family_ = Family::power;
    f.gamma_ = gamma;
    f.gamma_prime_ = gamma_prime;
    return f;
}

ScalingFunction ScalingFunction::power_log(double gamma, double beta) {
    if (!(gamma > 0.0)) throw std::invalid_argument("power_log scaling requires gamma > 0");
    if (!(beta > 0.0)) throw std::invalid_argument("power_log scaling requires beta > 0");
    ScalingFunction f;
    f.family_ = Family::power_log;
    f.gamma_ = gamma;
    f.gamma_prime_ = gamma;
    f.beta_ = beta;
    f.normalizer_ = std::pow(std::log1p(1.0), beta);
    return f;
}

double ScalingFunction::operator()(double x) const {
    if (family_ == Family::power) return std::pow(x, gamma_prime_);
    return std::pow(x, gamma_) * std::pow(std::log1p(x), beta_) / normalizer_;
}

std::string to_string(ScalingFunction::Family f) {
    return f == ScalingFunction::Family::power ? "power" : "power_log";
}

std::string ScalingFunction::describe() const {
    std::ostringstream os;
    if (family_ == Family::power)
    {
        os << "power(" << gamma_prime_;
        if (gamma_ != gamma_prime_) os << ", gamma=" << gamma_;
        os << ")";
    }
    else
        os << "power_log(" << gamma_ << ", " << beta_ << ")";
    return os.str();
}

MembershipReport check_membership(const std::function<double(double)>& f, double gamma, std::size_t n_max) {
    if (n_max < 16) throw std::invalid_argument("check_membership requires n_max >= 16");
    MembershipReport rep;

    if (f(1.0) != 1.0) {
        rep.normalized = false;
        rep.violations.push_back("f(1) != 1");
    }

    // Monotonicity on a fine grid over (0, 1] and on the integers.
    double prev = f(1.0 / 64.0);
    for (int i = 2; i <= 64 && rep.monotone; ++i) {
        const double cur = f(i / 64.0);
        if (cur < prev) {
            rep.monotone = false;
            rep.violations.push_back("f decreases on (0, 1]");
        }
        prev = cur;
    }
    prev = f(1.0);
    for (std::size_t l = 1; l <= n_max; ++l) {
        const double cur = f(static_cast<double>(l));
        if (rep.monotone && cur < prev) {
            rep.monotone = false;
            rep.violations.push_back("f decreases at l = " + std::to_string(l));
        }
        if (rep.dominates_power && cur < std::pow(static_cast<double>(l), gamma)) {
            rep.dominates_power = false;
            rep.violations.push_back("f(l) < l^gamma at l = " + std::to_string(l));
        }
        prev = cur;
    }

    for (std::size_t n : {n_max / 4, n_max / 2, n_max}) {
        const double nd = static_cast<double>(n);
        const auto d_n = static_cast<std::size_t>(std::floor(std::pow(nd, 0.4)));
        double inf = 1.0;
        for (std::size_t l = 1; l <= d_n; ++l) {
            const double ld = static_cast<double>(l);
            inf = std::min(inf, f(ld * (1.0 - ld / nd)) / f(ld));
        }
        rep.ratio_n.push_back(n);
        rep.ratio_infima.push_back(inf);
    }
    if (rep.ratio_infima.back() < 0.99) {
        rep.ratio_condition = false;
        rep.violations.push_back("ratio infimum below 0.99 at n = " + std::to_string(n_max));
    }
    return rep;
}

MembershipReport check_membership(const ScalingFunction& f, std::size_t n_max) {
    return check_membership([&f](double x) { return f(x); }, f.gamma(), n_max);
}

}  // namespace maxinc
