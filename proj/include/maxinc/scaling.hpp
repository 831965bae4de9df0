#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace maxinc {

// Window-length normalizer f from the class F_gamma: positive,
// non-decreasing, f(1) = 1 and f(l) >= l^gamma for l >= 1.
class ScalingFunction {
public:
    enum class Family { power, power_log };

    // f(x) = x^gamma_prime with gamma_prime >= gamma >= 0.
    static ScalingFunction power(double gamma_prime, double gamma);
    static ScalingFunction power(double gamma_prime) { return power(gamma_prime, gamma_prime); }
    // f(x) = x^gamma log^beta(1 + x) / log^beta(2).
    static ScalingFunction power_log(double gamma, double beta);

    double operator()(double x) const;

    double gamma() const { return gamma_; }
    Family family() const { return family_; }
    double gamma_prime() const { return gamma_prime_; }
    double beta() const { return beta_; }
    double normalizer() const { return normalizer_; }
    std::string describe() const;

private:
    ScalingFunction() = default;

    Family family_ = Family::power;
    double gamma_ = 0.0;
    double gamma_prime_ = 0.0;
    double beta_ = 0.0;
    double normalizer_ = 1.0;
};

std::string to_string(ScalingFunction::Family f);

struct MembershipReport {
    bool normalized = true;     // f(1) == 1
    bool monotone = true;       // non-decreasing on the grid
    bool dominates_power = true;  // f(l) >= l^gamma on {1..n_max}
    bool ratio_condition = true;  // final infimum >= 0.99
    std::vector<std::size_t> ratio_n;       // n at which the infimum was taken
    std::vector<double> ratio_infima;       // inf_{l <= d_n} f(l(1 - l/n)) / f(l)
    std::vector<std::string> violations;

    bool passed() const { return normalized && monotone && dominates_power && ratio_condition; }
};

// Grid check of the class conditions, using d_n = floor(n^0.4) for the
// ratio condition at n in {n_max/4, n_max/2, n_max}.
MembershipReport check_membership(const ScalingFunction& f, std::size_t n_max);
MembershipReport check_membership(const std::function<double(double)>& f, double gamma, std::size_t n_max);

}  // namespace maxinc
