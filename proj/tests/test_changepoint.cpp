#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <string>
#include <vector>

#include "maxinc/changepoint.hpp"
#include "maxinc/limits.hpp"

using namespace maxinc;

namespace {

HeavyTailLaw pareto_law(double alpha, double p = 0.5) {
    HeavyTailLaw law;
    law.alpha = alpha;
    law.p = p;
    return law;
}

DetectOptions supplied(double alpha, double gamma, Sided sided = Sided::two_sided) {
    DetectOptions o;
    o.gamma = gamma;
    o.sided = sided;
    o.alpha_source = AlphaSource::supplied(alpha, 0.5);
    return o;
}

}  // namespace

TEST_CASE("critical value") {
    // The quantile is 1 at level 1 - e^-1, leaving a_n = 100^(1/2).
    CHECK(critical_value(2.0, 0.5, 100, 1.0 - std::exp(-1.0), Sided::two_sided, 0.5) ==
          doctest::Approx(10.0).epsilon(1e-14));
    CHECK(critical_value(2.0, 0.5, 100, 1e-12, Sided::two_sided, 0.5) > 1e6);
    const double two = critical_value(1.5, 0.5, 1000, 0.05, Sided::two_sided, 0.5);
    const double one = critical_value(1.5, 1.0 - 1e-9, 1000, 0.05, Sided::one_sided, 0.5);
    CHECK(one == doctest::Approx(two).epsilon(1e-8));
    CHECK(critical_value(1.5, 0.5, 1000, 0.05, Sided::one_sided, 0.5) == doctest::Approx(std::pow(0.5, 1 / 1.5) * two));
    CHECK_THROWS_AS(critical_value(1.5, 0.5, 1000, 0.0, Sided::two_sided, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(critical_value(1.5, 0.5, 1000, 1.0, Sided::two_sided, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(critical_value(0.0, 0.5, 1000, 0.05, Sided::two_sided, 0.5), std::invalid_argument);
}

TEST_CASE("default gamma") {
    CHECK(default_gamma(4.0) == doctest::Approx(0.3));
    CHECK(default_gamma(1.5) == 0.05);
    CHECK(default_gamma(1e9) == doctest::Approx(0.55));
}

TEST_CASE("detect on constant data") {
    const std::vector<double> c(50, 3.7);
    const auto r = detect(c, supplied(1.5, 0.5));
    CHECK(r.statistic == 0.0);
    CHECK_FALSE(r.reject);
    CHECK(r.p_value == 1.0);
    const auto o = detect(c, supplied(1.5, 0.5, Sided::one_sided));
    CHECK(o.statistic == 0.0);
    CHECK_FALSE(o.reject);
}

TEST_CASE("detect preconditions") {
    CHECK_THROWS_AS(detect(std::vector<double>(7, 1.0), supplied(1.5, 0.5)), std::invalid_argument);
    const auto x = sample_scalar(pareto_law(4.0), 200, {1, 0});
    try {
        detect(x, supplied(4.0, 0.2));
        FAIL("accepted gamma below the bound");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find("0.25") != std::string::npos);
        CHECK(msg.find("0.5 - 1/alpha") != std::string::npos);
    }
    DetectOptions hill;
    hill.alpha_source = AlphaSource::hill(500);
    CHECK_THROWS_AS(detect(x, hill), std::invalid_argument);
    DetectOptions bad_level = supplied(1.5, 0.5);
    bad_level.level = 1.5;
    CHECK_THROWS_AS(detect(x, bad_level), std::invalid_argument);
}

TEST_CASE("detect report invariants, shift and scale") {
    for (std::uint64_t r = 0; r < 30; ++r) {
        const auto x = sample_scalar(pareto_law(1.5, 0.6), 400, {2, r});
        const auto rep = detect(x, supplied(1.5, 0.5));
        CHECK(rep.reject == (rep.statistic > rep.critical));
        CHECK(rep.p_value >= 0.0);
        CHECK(rep.p_value <= 1.0);
        CHECK(rep.p_value == doctest::Approx(1.0 - frechet_cdf(1.5, rep.statistic / rep.normalizer)));
        CHECK(rep.window_begin >= 1);
        CHECK(rep.window_end <= 400);
        CHECK(rep.window_begin <= rep.window_end);

        std::vector<double> shifted(x);
        for (auto& v : shifted) v += 12.5;
        const auto sh = detect(shifted, supplied(1.5, 0.5));
        double scale = 0.0;
        for (double v : x) scale += std::abs(v);
        CHECK(std::abs(sh.statistic - rep.statistic) <= 1e-9 * rep.statistic + 1e-13 * scale);

        std::vector<double> scaled(x);
        for (auto& v : scaled) v *= 4.0;
        const auto sc = detect(scaled, supplied(1.5, 0.5));
        CHECK(sc.statistic == 4.0 * rep.statistic);
        CHECK(sc.critical == rep.critical);
        CHECK(sc.window_begin == rep.window_begin);

        DetectOptions h;
        h.gamma = 0.5;
        h.alpha_source = AlphaSource::hill(40);
        const auto hr = detect(x, h);
        const auto hs = detect(scaled, h);
        CHECK(hs.alpha == doctest::Approx(hr.alpha).epsilon(1e-12));
        CHECK(hs.statistic / hs.normalizer == doctest::Approx(hr.statistic / hr.normalizer).epsilon(1e-12));
        CHECK(hr.hill_k == 40);
    }
}

TEST_CASE("hill plug-in normalizer") {
    const auto x = sample_scalar(pareto_law(1.5, 0.7), 100000, {3, 0});
    DetectOptions o;
    o.gamma = 0.5;
    o.alpha_source = AlphaSource::hill(1000);
    const auto r = detect(x, o);
    CHECK(r.alpha == doctest::Approx(1.5).epsilon(0.07));
    CHECK(r.p == doctest::Approx(0.7).epsilon(0.08));
    CHECK(r.normalizer == doctest::Approx(std::pow(100000.0, 1.0 / 1.5)).epsilon(0.15));
}

TEST_CASE("inject epidemic") {
    const auto x = sample_scalar(pareto_law(1.5), 100, {4, 0});
    const EpidemicSpec zero{10, 30, 0.0};
    CHECK(inject_epidemic(x, zero) == x);

    const EpidemicSpec spec{10, 30, 2.5};
    const auto y = inject_epidemic(x, spec);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(y[i] == (i >= 10 && i < 30 ? x[i] + 2.5 : x[i]));
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
    CHECK(my / 100.0 == doctest::Approx(mx / 100.0 + 2.5 * 20.0 / 100.0));

    const auto back = inject_epidemic(y, {10, 30, -2.5});
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(std::abs(back[i] - x[i]) <= 2.220446049250313e-16 * (std::abs(x[i]) + 2.5));

    CHECK_THROWS_AS(inject_epidemic(x, {0, 30, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(inject_epidemic(x, {30, 30, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(inject_epidemic(x, {10, 100, 1.0}), std::invalid_argument);
    CHECK(spec.duration() == 20);

    const auto c = centered_epidemic(1000, 100, 1.0);
    CHECK(c.k_star == 450);
    CHECK(c.m_star == 550);
}

TEST_CASE("power curve") {
    PowerPlan plan;
    plan.law = pareto_law(1.5);
    plan.detect = supplied(1.5, 0.5);
    plan.n = 600;
    plan.grid = PowerPlan::Grid::shift;
    const double a_n = std::pow(600.0, 1.0 / 1.5);
    plan.duration = 60;
    plan.values = {0.0, 0.5 * a_n / std::sqrt(60.0), 2.0 * a_n / std::sqrt(60.0), 8.0 * a_n / std::sqrt(60.0)};
    plan.reps = 300;
    plan.master_seed = 17;
    const auto rows = power_curve(plan);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].power < 0.15);
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(rows[i].power >= rows[i - 1].power - 2.0 * std::hypot(rows[i].se, rows[i - 1].se));
    CHECK(rows.back().power > 0.9);
    CHECK(rows.back().overlap > 0.8);
    for (const auto& r : rows) CHECK(r.se == doctest::Approx(std::sqrt(r.power * (1 - r.power) / 300.0)));

    plan.workers = 3;
    const auto again = power_curve(plan);
    for (std::size_t i = 0; i < rows.size(); ++i) CHECK(again[i].power == rows[i].power);

    plan.grid = PowerPlan::Grid::theta;
    plan.values = {0.3, 0.9};
    plan.shift = 20.0 * a_n / std::sqrt(600.0);
    const auto th = power_curve(plan);
    CHECK(th[1].power > th[0].power);
    plan.values = {1.2};
    CHECK_THROWS_AS(power_curve(plan), std::invalid_argument);
}

TEST_CASE("names") {
    CHECK(sided_from_string("one_sided") == Sided::one_sided);
    CHECK_THROWS_AS(sided_from_string("both"), std::invalid_argument);
    CHECK(power_grid_from_string("theta") == PowerPlan::Grid::theta);
}
