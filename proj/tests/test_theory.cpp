#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include <nklab/theory.hpp>

using namespace nklab;

namespace {
constexpr double kLn2 = 0.6931471805599453;
}

TEST_CASE("transition constants are pinned to independent evaluations") {
    CHECK(beta_c() == doctest::Approx(1.1774100225154747).epsilon(1e-15));
    CHECK(alpha_star() == doctest::Approx(0.17157287525380990).epsilon(1e-15));
    // alpha_star is the small root of x^2 - 6x + 1.
    const double a = alpha_star();
    CHECK(a * a - 6.0 * a + 1.0 == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
}

TEST_CASE("limiting free energy is quadratic then linear, with a smooth splice") {
    CHECK(limiting_free_energy(0.5) == doctest::Approx(kLn2 + 0.125).epsilon(1e-15));
    CHECK(limiting_free_energy(2.0) == doctest::Approx(2.0 * beta_c()).epsilon(1e-15));
    const double bc = beta_c();
    CHECK(limiting_free_energy(bc) == doctest::Approx(2.0 * kLn2).epsilon(1e-15));
    // Value and slope agree across the splice.
    const double h = 1e-7;
    const double below = limiting_free_energy(bc - h);
    const double above = limiting_free_energy(bc + h);
    CHECK(std::abs(above - below) < 3e-7);
    const double slope_below = (limiting_free_energy(bc - h) - limiting_free_energy(bc - 2 * h)) / h;
    const double slope_above = (limiting_free_energy(bc + 2 * h) - limiting_free_energy(bc + h)) / h;
    CHECK(slope_below == doctest::Approx(bc).epsilon(1e-6));
    CHECK(slope_above == doctest::Approx(bc).epsilon(1e-6));
    CHECK_THROWS_AS(limiting_free_energy(0.0), std::domain_error);
    CHECK_THROWS_AS(limiting_free_energy(-1.0), std::domain_error);
}

TEST_CASE("binary rate function has its known values and shape") {
    CHECK(rate_I(0.0) == 0.0);
    CHECK(rate_I(1.0) == doctest::Approx(kLn2).epsilon(1e-15));
    CHECK(rate_I(0.5) == doctest::Approx(0.13081203594113696).epsilon(1e-13));
    for (double u = 0.05; u < 1.0; u += 0.05) {
        CHECK(rate_I(u) >= 0.5 * u * u);           // quadratic floor
        CHECK(rate_I(u) > rate_I(u - 0.05));       // strictly increasing
    }
    // The series branch and the closed form meet smoothly at the switch. The
    // slope there is ~0.255, so arguments must sit far closer than the value
    // tolerance for the comparison to isolate the branch difference.
    const double eps = 1e-13;
    CHECK(rate_I(0.25 - eps) == doctest::Approx(rate_I(0.25 + eps)).epsilon(1e-10));
    CHECK_THROWS_AS(rate_I(-0.1), std::domain_error);
    CHECK_THROWS_AS(rate_I(1.1), std::domain_error);
}

TEST_CASE("entropy exponent runs from two to one and inverts cleanly") {
    CHECK(entropy_h(0.0) == 2.0);
    CHECK(entropy_h(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(entropy_h(0.5) == doctest::Approx(1.8112781244591329).epsilon(1e-13));
    for (double u = 0.1; u < 1.0; u += 0.1) CHECK(entropy_h(u) < entropy_h(u - 0.1));

    for (double u = 0.1; u <= 0.95; u += 0.05)
        CHECK(h_inverse(entropy_h(u)) == doctest::Approx(u).epsilon(1e-8));
    CHECK(std::abs(h_inverse(2.0)) < 2e-6);  // flat top limits the resolution
    CHECK(h_inverse(1.0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_THROWS_AS(h_inverse(0.99), std::domain_error);
    CHECK_THROWS_AS(h_inverse(2.01), std::domain_error);
}

TEST_CASE("closed-form entropy-energy minimum matches a dense grid search") {
    for (double alpha : {0.05, 0.2, 0.5, 0.9, 1.0}) {
        for (double s : {0.3, 0.8, 0.9, 1.1, 1.3}) {
            const MinF mf = min_f(alpha, s);
            CHECK(mf.t_min >= 0.0);
            CHECK(mf.t_min <= 1.0 - alpha + 1e-15);
            double grid_min = f_s(alpha, s, 0.0);
            const int grid = 20000;
            for (int j = 0; j <= grid; ++j) {
                const double t = (1.0 - alpha) * j / grid;
                grid_min = std::min(grid_min, f_s(alpha, s, t));
            }
            CHECK(mf.value == doctest::Approx(grid_min).epsilon(1e-7).scale(1.0));
            CHECK(mf.value <= grid_min + 1e-12);
            if (alpha < 1.0)
                CHECK(f_s(alpha, s, std::min(mf.t_min, 1.0 - alpha)) ==
                      doctest::Approx(mf.value).epsilon(1e-12).scale(1.0));
        }
    }
    CHECK(min_f(0.1, 1.15).value < 0.0);
    CHECK_THROWS_AS(f_s(0.5, 1.0, 0.6), std::domain_error);
    CHECK_THROWS_AS(min_f(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(min_f(0.5, 0.0), std::domain_error);
}

TEST_CASE("the exponent stays positive on the certified strip") {
    for (double alpha : {0.2, 0.5, 1.0}) {
        const PositivityReport rep = regime_positivity(alpha);
        CHECK(rep.all_positive);
        CHECK(rep.min_value > 0.0);
        CHECK(!rep.first_failure_s.has_value());
        CHECK(rep.s_max == doctest::Approx(beta_c()).epsilon(1e-15));
    }
    // Below the band threshold the certified strip is the narrower
    // sqrt(ln2)(1+sqrt(alpha)) < beta_c, and positivity still holds on it;
    // the exponent only dips negative beyond that endpoint.
    const PositivityReport low = regime_positivity(0.1);
    CHECK(low.s_max == doctest::Approx(std::sqrt(kLn2) * (1.0 + std::sqrt(0.1))).epsilon(1e-15));
    CHECK(low.s_max < beta_c());
    CHECK(low.all_positive);
    CHECK(!low.first_failure_s.has_value());
    CHECK(min_f(0.1, low.s_max + 0.06).value < 0.0);
}

TEST_CASE("gap thresholds at a representative point") {
    const GapBounds gb = gap_bounds(0.1, 0.5);
    CHECK(gb.rhs_q() == doctest::Approx(-0.059588327326374056).epsilon(1e-12));
    CHECK(gb.rhs_r() == doctest::Approx(-0.059588327326374056).epsilon(1e-12));
    CHECK(gb.energy_gap() == doctest::Approx(1.2072041861786618).epsilon(1e-12));
    // At delta = 0.5 the entropy branch of the minimum is not active.
    CHECK(2.0 * beta_c() * (1.0 - std::sqrt(entropy_h(0.5) / 2.0)) > gb.rhs_r());
}

TEST_CASE("low-interaction fields exist exactly below the band threshold") {
    const GapBounds gb = gap_bounds(0.1, 0.5);
    REQUIRE(gb.has_low_fields());
    CHECK(gb.discriminant() == doctest::Approx(0.6403124237432849).epsilon(1e-13));
    CHECK(gb.c1() == doctest::Approx(0.12984378812835757).epsilon(1e-13));
    CHECK(gb.c2() == doctest::Approx(0.7701562118716424).epsilon(1e-13));
    CHECK(gb.c1() * gb.c2() == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(gb.c1() + gb.c2() == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(gb.delta_star() == doctest::Approx(0.9880768629987007).epsilon(1e-10));

    // 0.5 sits between c1 and delta_star: neither low threshold is defined.
    CHECK(!gb.has_rhs_q_low());
    CHECK(!gb.has_rhs_r_low());
    CHECK_THROWS_AS(gb.rhs_q_low(), std::domain_error);
    CHECK_THROWS_AS(gb.rhs_r_low(), std::domain_error);
    CHECK_THROWS_AS(gb.energy_gap_low(), std::domain_error);

    const GapBounds narrow = gap_bounds(0.1, 0.05);
    CHECK(narrow.has_rhs_q_low());
    CHECK(narrow.rhs_q_low() == doctest::Approx(0.020407951497562453).epsilon(1e-12));
    CHECK(!narrow.has_rhs_r_low());

    const GapBounds wide = gap_bounds(0.1, 0.995);
    CHECK(!wide.has_rhs_q_low());
    CHECK(wide.has_rhs_r_low());
    CHECK(wide.rhs_r_low() == doctest::Approx(0.030872406026534853).epsilon(1e-12));
    CHECK(wide.energy_gap_low() == doctest::Approx(1.1619738195022073).epsilon(1e-12));

    // Above the threshold only the plain fields exist.
    const GapBounds high = gap_bounds(0.5, 0.5);
    CHECK(!high.has_low_fields());
    CHECK_THROWS_AS(high.c1(), std::domain_error);
    CHECK_THROWS_AS(high.delta_star(), std::domain_error);

    // The band threshold makes the discriminant vanish.
    const GapBounds edge = gap_bounds(alpha_star(), 0.5);
    CHECK(edge.has_low_fields());
    CHECK(edge.discriminant() == doctest::Approx(0.0).scale(1.0).epsilon(1e-7));
    CHECK(edge.c1() * edge.c2() == doctest::Approx(alpha_star()).epsilon(1e-9));

    CHECK_THROWS_AS(gap_bounds(0.1, 0.0), std::domain_error);
    CHECK_THROWS_AS(gap_bounds(0.1, 1.0), std::domain_error);
    CHECK_THROWS_AS(gap_bounds(1.5, 0.5), std::domain_error);
}

TEST_CASE("moment-constrained thresholds climb to the transition point") {
    CHECK(beta_p(2) == doctest::Approx(0.7071067811865475).epsilon(1e-9));
    CHECK(beta_p(4) == doctest::Approx(1.1147594468753668).epsilon(1e-8));
    CHECK(beta_p(8) == doctest::Approx(1.1740550094971711).epsilon(1e-8));
    CHECK(beta_p(16) == doctest::Approx(1.1773970619467964).epsilon(1e-8));
    CHECK(beta_p(32) == doctest::Approx(1.1774100223177264).epsilon(1e-8));
    CHECK(beta_p(64) == doctest::Approx(beta_c()).epsilon(1e-10));
    double prev = 0.0;
    for (int p : {2, 4, 8, 16, 32, 64}) {
        const double b = beta_p(p);
        CHECK(b >= prev);
        CHECK(b <= beta_c() + 1e-9);
        prev = b;
    }
    CHECK_THROWS_AS(beta_p(3), std::invalid_argument);
    CHECK_THROWS_AS(beta_p(0), std::invalid_argument);
}

TEST_CASE("gaussian helpers agree with pinned reference values") {
    CHECK(gauss_sf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(gauss_sf(5.0) == doctest::Approx(2.8665157187919392e-07).epsilon(1e-12));
    for (double x : {-2.0, -0.3, 0.0, 1.0, 4.0})
        CHECK(gauss_sf(x) + gauss_cdf(x) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(normal_quantile(0.975) == doctest::Approx(1.9599639845400536).epsilon(1e-14));
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    for (double u : {1e-10, 1e-4, 0.2, 0.5, 0.9, 1.0 - 1e-7})
        CHECK(gauss_cdf(normal_quantile(u)) == doctest::Approx(u).epsilon(1e-12));
    CHECK_THROWS_AS(normal_quantile(0.0), std::domain_error);
    CHECK_THROWS_AS(normal_quantile(1.0), std::domain_error);
}

TEST_CASE("tail floor really is a floor, and a tight one") {
    for (double s : {0.3, 0.7, 1.0, 1.3}) {
        for (int n : {4, 10, 25, 60}) {
            const double x = s * std::sqrt(double(n));
            const double lower = mills_lower(s, n);
            const double sf = gauss_sf(x);
            CHECK(lower <= sf);
            CHECK(lower >= sf * x * x / (x * x + 1.0) * (1.0 - 1e-12));
        }
    }
    CHECK_THROWS_AS(mills_lower(0.0, 10), std::domain_error);
    CHECK_THROWS_AS(mills_lower(1.0, 0), std::invalid_argument);
}

TEST_CASE("joint tail probability has its exact special values") {
    CHECK(orthant_prob(0.0, 0.0) == doctest::Approx(0.25).epsilon(1e-11));
    CHECK(orthant_prob(0.5, 0.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    for (double x : {-1.0, 0.0, 0.7, 2.0}) {
        CHECK(orthant_prob(1.0, x) == doctest::Approx(gauss_sf(x)).epsilon(1e-14));
        const double sf = gauss_sf(x);
        CHECK(orthant_prob(0.0, x) == doctest::Approx(sf * sf).epsilon(1e-10));
    }
    CHECK(orthant_prob(-1.0, 1.0) == 0.0);
    CHECK(orthant_prob(-1.0, -1.0) == doctest::Approx(0.6826894921370859).epsilon(1e-12));
    // Monotone in the correlation at fixed threshold.
    double prev = -1.0;
    for (double t = -0.9; t <= 0.95; t += 0.1) {
        const double v = orthant_prob(t, 0.8);
        CHECK(v >= prev);
        prev = v;
    }
    CHECK_THROWS_AS(orthant_prob(1.5, 0.0), std::domain_error);
}

TEST_CASE("analytic envelope dominates the joint tail on the working grid") {
    for (double t : {0.1, 0.3, 0.5, 0.7, 0.9})
        for (double s : {0.5, 0.8, 1.1})
            for (int n : {10, 20, 40}) {
                const double exact = orthant_prob(t, s * std::sqrt(double(n)));
                CHECK(orthant_upper_bound(t, s, n) >= exact * (1.0 - 1e-9));
            }
}

TEST_CASE("second moment ratio assembles the census against the joint tail") {
    const CountTable t = count_by_overlap(6, 2);
    const double s = 0.6;
    const double x = s * std::sqrt(6.0);
    double num = 0.0;
    for (int l = 0; l <= 6; ++l)
        num += t.counts[static_cast<std::size_t>(l)].convert_to<double>() *
               orthant_prob(l / 6.0, x);
    const double sf = gauss_sf(x);
    const SecondMomentResult r = second_moment_ratio(t, s);
    CHECK(r.exact_ratio == doctest::Approx(num / (64.0 * sf * sf)).epsilon(1e-12));
    CHECK(r.exact_ratio >= 1.0 - 1e-9);  // Cauchy-Schwarz floor

    // In the thin-window regime the ratio approaches 1 and sits under the
    // three-term closed form.
    const SecondMomentResult tight = second_moment_ratio(count_by_overlap(20, 17), 0.8);
    CHECK(tight.exact_ratio >= 1.0 - 1e-9);
    CHECK(tight.exact_ratio <= tight.analytic_bound + 1e-9);
    CHECK(tight.exact_ratio <= 5.0);
}

TEST_CASE("the variational identity behind the pair bound checks out") {
    const SupIdentityReport rep = sup_identity_check();
    CHECK(rep.ok);
    CHECK(rep.max_closed_form_deviation <= 1e-12);
    CHECK(rep.max_grid_deficit <= 1e-8);
}

TEST_CASE("per-site slack and tail envelopes follow their closed forms") {
    CHECK(count_entropy_slack(20) == doctest::Approx((2.0 + std::log(20.0)) / 20.0).epsilon(1e-15));
    CHECK(free_energy_tail_envelope(14, 0.5, 0.3) ==
          doctest::Approx(2.0 * std::exp(-14 * 0.09 / 1.0)).epsilon(1e-13));
    CHECK(max_tail_envelope(14, 0.3) == doctest::Approx(2.0 * std::exp(-14 * 0.09 / 4.0)).epsilon(1e-13));
    CHECK(pair_max_tail_envelope(14, 0.3) ==
          doctest::Approx(2.0 * std::exp(-14 * 0.09 / 16.0)).epsilon(1e-13));
    // Envelopes are trivial at t = 0 and decay in t and n.
    CHECK(max_tail_envelope(10, 0.0) == 2.0);
    CHECK(max_tail_envelope(10, 0.5) > max_tail_envelope(20, 0.5));
    CHECK(free_energy_tail_envelope(10, 2.0, 0.5) > free_energy_tail_envelope(10, 1.0, 0.5));
    CHECK_THROWS_AS(max_tail_envelope(0, 0.1), std::domain_error);
    CHECK_THROWS_AS(free_energy_tail_envelope(10, 0.0, 0.1), std::domain_error);
}
