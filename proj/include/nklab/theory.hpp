#pragma once

#include <optional>

#include "nklab/combinatorics.hpp"
#include "nklab/normal.hpp"

namespace nklab {

// sqrt(2 ln 2), the free-energy transition point.
double beta_c();

// 3 - 2*sqrt(2), below which the overlap support picks up a third band.
double alpha_star();

// ln2 + beta^2/2 below beta_c, beta*beta_c at and above. beta > 0 required.
double limiting_free_energy(double beta);

// h(u) = 2 - I(u)/ln2 on [0,1]: 2 at 0, 1 at 1, strictly decreasing.
double entropy_h(double u);

// Bisection inverse of entropy_h on [1,2], resolved to 1e-12.
double h_inverse(double y);

// I(u) = ((1+u)ln(1+u) + (1-u)ln(1-u))/2, the binomial rate; I(1) = ln2.
double rate_I(double u);

// f_s(t) = (alpha+t)ln2 - t s^2/(1+t) on t in [0, 1-alpha].
double f_s(double alpha, double s, double t);

struct MinF {
    double t_min = 0.0;
    double value = 0.0;
};

// Closed-form minimum of f_s over [0, 1-alpha]: the interior stationary point
// is t = s/sqrt(ln2) - 1; outside [0, 1-alpha] the active endpoint wins.
MinF min_f(double alpha, double s);

struct PositivityReport {
    double s_max = 0.0;
    int grid_points = 0;
    bool all_positive = false;
    double min_value = 0.0;
    double argmin_s = 0.0;
    std::optional<double> first_failure_s;
};

// Certifies min_f(alpha, s) > 0 on a strictly interior s grid below
// s_max(alpha) = beta_c for alpha >= alpha_star, sqrt(ln2)(1+sqrt(alpha)) else.
PositivityReport regime_positivity(double alpha, int grid_points = 10000);

// Thresholds separating twice the fittest level from the best constrained
// pair, at one (alpha, delta). The plain fields exist for every alpha in
// (0,1]; the _low family needs alpha <= alpha_star and delta on the correct
// side of c1 / delta_star, and throws when asked outside that.
class GapBounds {
public:
    double alpha() const { return alpha_; }
    double delta() const { return delta_; }
    double rhs_q() const { return rhs_q_; }
    double rhs_r() const { return rhs_r_; }
    double energy_gap() const { return energy_gap_; }

    double c1() const;
    double c2() const;
    double discriminant() const;
    double delta_star() const;
    double rhs_q_low() const;
    double rhs_r_low() const;
    double energy_gap_low() const;

    bool has_low_fields() const { return has_low_; }
    bool has_rhs_q_low() const { return rhs_q_low_.has_value(); }
    bool has_rhs_r_low() const { return rhs_r_low_.has_value(); }

private:
    friend GapBounds gap_bounds(double alpha, double delta);
    double alpha_ = 0.0, delta_ = 0.0;
    double rhs_q_ = 0.0, rhs_r_ = 0.0, energy_gap_ = 0.0;
    bool has_low_ = false;
    double c1_ = 0.0, c2_ = 0.0, discriminant_ = 0.0, delta_star_ = 0.0;
    std::optional<double> rhs_q_low_, rhs_r_low_, energy_gap_low_;
};

GapBounds gap_bounds(double alpha, double delta);

// sqrt(inf over u in (0,1) of (1+u^-p) I(u)), p even, >= 2. The infimum can
// sit at a boundary limit (p = 2) or within 1e-5 of u = 1 (large p), so the
// search seeds log-spaced candidates near both ends before refining.
double beta_p(int p);

// s sqrt(N) / (sqrt(2 pi)(s^2 N + 1)) * exp(-s^2 N / 2), a lower bound on
// gauss_sf(s sqrt(N)). s > 0.
double mills_lower(double s, int n);

// P(X1 >= x, X2 >= x) for standard normals with correlation t, by the
// conditional 1-D integral; exact branches at t = +-1. Relative accuracy
// ~1e-11 even deep in the tail.
double orthant_prob(double t, double x);

// gauss_sf(s sqrt(N))^2 + arcsin(t)/(2 pi) * exp(-s^2 N/(1+t)): analytic
// upper bound on orthant_prob(t, s sqrt(N)).
double orthant_upper_bound(double t, double s, int n);

// (2 + ln n)/n, the per-site slack appearing in log-count bounds.
double count_entropy_slack(int n);

struct SecondMomentResult {
    double exact_ratio = 0.0;
    double analytic_bound = 0.0;
};

// E L^2 / (E L)^2 for the level-set count at threshold s, assembled exactly
// from the overlap census, against the closed-form three-term bound.
SecondMomentResult second_moment_ratio(const CountTable& counts, double s);

struct SupIdentityReport {
    bool ok = false;
    double max_closed_form_deviation = 0.0;  // |f(t*) - ((3-alpha)/2)^2|
    double max_grid_deficit = 0.0;           // closed form minus dense-grid max
};

// sup over 0 < t <= 1-alpha of (1+t)(2-alpha-t) equals ((3-alpha)/2)^2 at
// t = (1-alpha)/2; checked across an alpha grid, closed form vs dense grid.
SupIdentityReport sup_identity_check();

// Tail envelopes: free energy at inverse temperature beta, the maximum, and
// the pair-constrained maximum.
double free_energy_tail_envelope(int n, double beta, double t);
double max_tail_envelope(int n, double t);
double pair_max_tail_envelope(int n, double t);

}  // namespace nklab
