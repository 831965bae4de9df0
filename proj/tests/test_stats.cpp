#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <vector>

#include "maxinc/heavytail.hpp"
#include "maxinc/limits.hpp"
#include "maxinc/oracle.hpp"
#include "maxinc/stats.hpp"

using namespace maxinc;

namespace {

const std::vector<double> kExample{3.0, -1.0, 2.0};
const auto kRoot = ScalingFunction::power(0.5);

std::vector<double> pareto(double alpha, std::size_t n, std::uint64_t seed, std::uint64_t rep = 0, double p = 0.5) {
    HeavyTailLaw law;
    law.alpha = alpha;
    law.p = p;
    return sample_scalar(law, n, {seed, rep});
}

}  // namespace

TEST_CASE("prefix sums") {
    const auto w = prefix_sums(kExample);
    CHECK(std::vector<double>(w.prefix().begin(), w.prefix().end()) == std::vector<double>{0, 3, 2, 4});
    const auto z = prefix_sums(std::vector<double>{0.0, 0.0});
    CHECK(std::vector<double>(z.prefix().begin(), z.prefix().end()) == std::vector<double>{0, 0, 0});
    const auto v = prefix_sums(std::vector<double>{1, 0, 0, 1}, 2);
    CHECK(v.n() == 2);
    CHECK(std::vector<double>(v.prefix().begin(), v.prefix().end()) == std::vector<double>{0, 0, 1, 0, 1, 1});
    CHECK_THROWS_AS(prefix_sums(std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(prefix_sums(std::vector<double>{1, 2, 3}, 2), std::invalid_argument);

    // Long walks: consecutive differences reproduce the jumps up to roundoff
    // of the partial sum magnitude.
    const auto x = pareto(1.5, 100000, 5);
    const auto big = prefix_sums(x);
    double scale = 0.0;
    for (double j : x) scale += std::abs(j);
    for (std::size_t k = 1; k <= big.n(); ++k)
        REQUIRE(std::abs((big.prefix()[k] - big.prefix()[k - 1]) - x[k - 1]) <= 4e-16 * scale);
}

TEST_CASE("frozen example [3, -1, 2]") {
    const auto w = prefix_sums(kExample);

    const auto mt = stat_M_tilde(w, kRoot);
    CHECK(mt.value == 3.0);
    CHECK(mt.arg_k == 0);
    CHECK(mt.arg_ell == 1);

    // Mean 4/3; the l = 1 window at k = 1 deviates by 7/3, scaled by (2/3)^(-1/2).
    const auto tt = stat_T_tilde(w, kRoot);
    CHECK(tt.value == doctest::Approx((7.0 / 3.0) / std::sqrt(2.0 / 3.0)).epsilon(1e-14));
    CHECK(tt.value == doctest::Approx(2.8577).epsilon(1e-4));
    CHECK(tt.arg_k == 1);
    CHECK(tt.arg_ell == 1);

    const auto os = stat_one_sided(w, kRoot);
    CHECK(os.upper.value == 3.0);
    CHECK(os.upper.arg_k == 0);
    CHECK(os.upper.arg_ell == 1);
    CHECK(os.lower.value == -1.0);
    CHECK(os.lower.arg_k == 1);
    CHECK(os.lower.arg_ell == 1);

    const auto t1 = stat_T_one_sided(w, 0.5);
    CHECK(t1.value == doctest::Approx((5.0 / 3.0) / std::sqrt(2.0 / 3.0)).epsilon(1e-14));
    CHECK(t1.value == doctest::Approx(2.0412).epsilon(1e-4));
    CHECK(t1.arg_k == 0);
    CHECK(t1.arg_ell == 1);

    const auto h = stat_hat(w, kRoot);
    CHECK(h.value == 3.0);
    CHECK(h.arg_k == 2);
    CHECK(h.arg_ell == 1);

    CHECK(stat_classic(w, ClassicMode::T_tilde_n).value == tt.value);
    CHECK(stat_classic(w, ClassicMode::M_tilde_n).value == 3.0);
    CHECK(stat_classic(w, ClassicMode::T_n).value == t1.value);
    CHECK(stat_classic(w, ClassicMode::M_n).value == 3.0);
    // Known mean mu = 1: jumps become [2, -2, 1].
    CHECK(stat_classic(w, ClassicMode::M_n, 1.0).value == 2.0);
    CHECK(stat_classic(w, ClassicMode::M_tilde_n, 1.0).value == 2.0);

    for (Mode m : all_modes) {
        const auto o = brute_force_oracle(w, m, kRoot);
        const auto k = compute_statistic(w, m, kRoot);
        CHECK(o.value == doctest::Approx(k.value).epsilon(1e-12));
        CHECK(o.arg_k == k.arg_k);
        CHECK(o.arg_ell == k.arg_ell);
    }
}

TEST_CASE("degenerate walks") {
    const auto zero = prefix_sums(std::vector<double>(10, 0.0));
    for (Mode m : {Mode::m_tilde, Mode::t_tilde, Mode::m_hat}) {
        CHECK(compute_statistic(zero, m, kRoot).value == 0.0);
        CHECK(brute_force_oracle(zero, m, kRoot).value == 0.0);
    }
    const auto constant = prefix_sums(std::vector<double>(16, 0.25));
    CHECK(stat_T_tilde(constant, kRoot).value == 0.0);
    CHECK(stat_T_one_sided(constant, 0.5).value == 0.0);
    CHECK(stat_hat(constant, kRoot).value == 0.0);

    const auto single = prefix_sums(std::vector<double>{5.0});
    const auto os = stat_one_sided(single, kRoot);
    CHECK(os.upper.value == 5.0);
    CHECK(os.lower.value == 5.0);
    CHECK_THROWS_AS(stat_T_tilde(single, kRoot), std::invalid_argument);
    CHECK_THROWS_AS(stat_hat(prefix_sums(std::vector<double>{1.0, 2.0}), kRoot), std::invalid_argument);

    const auto vec = prefix_sums(std::vector<double>{1, 0, 0, 1, 1, 1}, 2);
    CHECK_THROWS_AS(stat_one_sided(vec, kRoot), std::invalid_argument);
    CHECK_THROWS_AS(stat_hat(vec, kRoot), std::invalid_argument);
    CHECK_NOTHROW(stat_M_tilde(vec, kRoot));
}

TEST_CASE("mode names") {
    for (Mode m : all_modes) CHECK(mode_from_string(to_string(m)) == m);
    try {
        mode_from_string("m_max");
        FAIL("accepted an unknown mode");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        for (Mode m : all_modes) CHECK(msg.find(to_string(m)) != std::string::npos);
    }
}

TEST_CASE("oracle equivalence on 500 random walks") {
    const auto rep = oracle_equivalence_suite(500, 2024);
    for (const auto& m : rep.messages) MESSAGE(m);
    CHECK(rep.walks == 500);
    CHECK(rep.failures == 0);
    CHECK(rep.window_mismatches == 0);
    CHECK(rep.max_rel_error <= 1e-9);
}

TEST_CASE("oracle guard") {
    const auto w = prefix_sums(std::vector<double>(kOracleMaxLength + 1, 1.0));
    CHECK_THROWS_AS(brute_force_oracle(w, Mode::m_tilde, kRoot), std::invalid_argument);
}

TEST_CASE("single spike is found by the l = 1 window") {
    std::vector<double> x(150, 0.001);
    for (std::size_t i = 0; i < x.size(); i += 2) x[i] = -0.001;
    x[73] = 1000.0;
    const auto w = prefix_sums(x);
    for (double g : {0.1, 0.5, 1.0}) {
        const auto o = brute_force_oracle(w, Mode::m_tilde, g);
        CHECK(o.arg_ell == 1);
        CHECK(o.arg_k == 73);
        const auto k = compute_statistic(w, Mode::m_tilde, ScalingFunction::power(g));
        CHECK(k.arg_k == 73);
        CHECK(k.arg_ell == 1);
    }
}

TEST_CASE("scale equivariance, shift invariance, window re-evaluation") {
    const ScalingFunction fs[] = {kRoot, ScalingFunction::power(0.2), ScalingFunction::power_log(0.4, 1.0)};
    for (std::uint64_t r = 0; r < 20; ++r) {
        const auto x = pareto(1.5, 300, 77, r, 0.6);
        const auto w = prefix_sums(x);
        for (const auto& f : fs) {
            for (Mode m : all_modes) {
                const auto base = compute_statistic(w, m, f);

                // Re-evaluation of the recorded window.
                const double again = window_value(w, m, f, base.arg_k, base.arg_ell);
                CHECK(again == doctest::Approx(base.value).epsilon(1e-9));

                // A power-of-two scale is exact in floating point.
                std::vector<double> scaled(x);
                for (auto& v : scaled) v *= 8.0;
                const auto s = compute_statistic(prefix_sums(scaled), m, f);
                CHECK(s.value == 8.0 * base.value);
                CHECK(s.arg_k == base.arg_k);
                CHECK(s.arg_ell == base.arg_ell);

                for (auto& v : scaled) v *= 0.3 / 8.0;
                CHECK(compute_statistic(prefix_sums(scaled), m, f).value ==
                      doctest::Approx(0.3 * base.value).epsilon(1e-12));

                if (m == Mode::t_tilde || m == Mode::t_upper || m == Mode::m_hat) {
                    std::vector<double> shifted(x);
                    for (auto& v : shifted) v += 2.75;
                    const auto sh = compute_statistic(prefix_sums(shifted), m, f);
                    double scale = 0.0;
                    for (double v : x) scale += std::abs(v);
                    CHECK(std::abs(sh.value - base.value) <= 1e-9 * std::max(std::abs(base.value), 1.0) + 1e-12 * scale);
                }
            }
        }
    }
}

TEST_CASE("negated jumps swap the one-sided statistics") {
    const auto x = pareto(1.2, 200, 8);
    std::vector<double> neg(x);
    for (auto& v : neg) v = -v;
    const auto a = stat_one_sided(prefix_sums(x), kRoot);
    const auto b = stat_one_sided(prefix_sums(neg), kRoot);
    CHECK(b.upper.value == -a.lower.value);
    CHECK(b.lower.value == -a.upper.value);
}

TEST_CASE("sandwich for gamma' >= 1 and monotonicity in f") {
    for (std::uint64_t r = 0; r < 50; ++r) {
        const auto x = pareto(0.9, 400, 9, r, 0.3);
        const auto w = prefix_sums(x);
        double max_jump = 0.0, total = 0.0;
        for (double v : x) {
            max_jump = std::max(max_jump, std::abs(v));
            total += std::abs(v);
        }
        const double slack = 2.0 * 401 * 2.220446049250313e-16 * total;
        for (double gp : {1.0, 1.3}) {
            const double m = stat_M_tilde(w, ScalingFunction::power(gp, 1.0)).value;
            CHECK(m >= max_jump);
            CHECK(m <= max_jump + slack);
        }
        const double small_f = stat_M_tilde(w, ScalingFunction::power(0.3)).value;
        const double large_f = stat_M_tilde(w, ScalingFunction::power(0.6)).value;
        CHECK(small_f >= large_f);
    }
}

TEST_CASE("vector walks") {
    HeavyTailLaw law;
    law.alpha = 1.5;
    law.dim = 3;
    const auto s = sample_vector(law, 120, {4, 0});
    const auto w = prefix_sums(s);
    for (Mode m : {Mode::m_tilde, Mode::t_tilde}) {
        const auto k = compute_statistic(w, m, kRoot);
        const auto o = brute_force_oracle(w, m, kRoot);
        CHECK(k.value == doctest::Approx(o.value).epsilon(1e-9));
        CHECK(window_value(w, m, kRoot, k.arg_k, k.arg_ell) == doctest::Approx(k.value).epsilon(1e-9));
    }
    // One-dimensional vector data reduces to the scalar statistic.
    const auto x = pareto(1.5, 50, 3);
    CHECK(compute_statistic(prefix_sums(x, 1), Mode::m_tilde, kRoot).value ==
          stat_M_tilde(prefix_sums(x), kRoot).value);
}

TEST_CASE("m_hat is reversal-symmetric in law") {
    std::vector<double> fwd, rev;
    for (std::uint64_t r = 0; r < 1500; ++r) {
        auto x = pareto(1.5, 100, 10, r);
        fwd.push_back(stat_hat(prefix_sums(x), kRoot).value);
        std::reverse(x.begin(), x.end());
        rev.push_back(stat_hat(prefix_sums(x), kRoot).value);
    }
    std::sort(fwd.begin(), fwd.end());
    std::sort(rev.begin(), rev.end());
    CHECK(ks_two_sample(fwd, rev) < 0.05);
}

TEST_CASE("parallel profile matches serial") {
    const auto x = pareto(1.5, 1000, 12);
    const auto w = prefix_sums(x);
    const auto a = increment_profile(w, true, 1);
    const auto b = increment_profile(w, true, 4);
    CHECK(a.max_inc == b.max_inc);
    CHECK(a.min_inc == b.min_inc);
    CHECK(a.max_hat == b.max_hat);
}
