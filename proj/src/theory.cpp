#include "nklab/theory.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace nklab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLn2 = 0.6931471805599453;

// K15 with embedded G7 (QUADPACK abscissae). Pairs xk[1],xk[3],xk[5] and the
// center carry the Gauss weights.
const double kXk[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                       0.741531185599394, 0.586087235467691, 0.405845151377397,
                       0.207784955007898, 0.0};
const double kWk[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                       0.140653259715525, 0.169004726639267, 0.190350578064785,
                       0.204432940075298, 0.209482141084728};
const double kWg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                       0.417959183673469};

template <class F>
std::pair<double, double> gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double f0 = f(c);
    double sk = kWk[7] * f0;
    double sg = kWg[3] * f0;
    for (int i = 0; i < 7; ++i) {
        const double fl = f(c - h * kXk[i]);
        const double fr = f(c + h * kXk[i]);
        sk += kWk[i] * (fl + fr);
        if (i % 2 == 1) sg += kWg[i / 2] * (fl + fr);
    }
    return {h * sk, std::abs(h * (sk - sg))};
}

struct Panel {
    double a, b, integral, err;
};

// Worst-panel-first bisection. The stopping rule is relative so the result
// keeps ~11 digits even when the integral itself is far below 1.
template <class F>
double adaptive_gk(const F& f, double a, double b, double rel_tol) {
    std::vector<Panel> panels;
    auto [i0, e0] = gk15(f, a, b);
    panels.push_back({a, b, i0, e0});
    for (int round = 0; round < 4000; ++round) {
        double total = 0.0, err = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            total += panels[i].integral;
            err += panels[i].err;
            if (panels[i].err > panels[worst].err) worst = i;
        }
        if (err <= std::max(1e-300, rel_tol * std::abs(total))) break;
        Panel p = panels[worst];
        const double m = 0.5 * (p.a + p.b);
        auto [il, el] = gk15(f, p.a, m);
        auto [ir, er] = gk15(f, m, p.b);
        panels[worst] = {p.a, m, il, el};
        panels.push_back({m, p.b, ir, er});
    }
    std::sort(panels.begin(), panels.end(),
              [](const Panel& x, const Panel& y) { return x.a < y.a; });
    double total = 0.0;
    for (const Panel& p : panels) total += p.integral;
    return total;
}

double golden_min(const std::function<double(double)>& f, double a, double b, int iters) {
    const double gr = 0.6180339887498949;
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        }
    }
    return std::min(f1, f2);
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0) throw std::domain_error("alpha must be in (0,1]");
}

}  // namespace

double beta_c() { return std::sqrt(2.0 * kLn2); }

double alpha_star() { return 3.0 - 2.0 * std::sqrt(2.0); }

double limiting_free_energy(double beta) {
    if (!(beta > 0.0)) throw std::domain_error("beta must be positive");
    if (beta < beta_c()) return kLn2 + 0.5 * beta * beta;
    return beta * beta_c();
}

double rate_I(double u) {
    if (!(u >= 0.0) || u > 1.0) throw std::domain_error("u must be in [0,1]");
    if (u == 1.0) return kLn2;
    if (u < 0.25) {
        // sum of u^(2m)/(2m(2m-1)); direct evaluation cancels to noise here
        double term = u * u;
        double sum = 0.0;
        for (int m = 1; m < 40; ++m) {
            const double add = term / (2.0 * m * (2.0 * m - 1.0));
            sum += add;
            if (add < sum * 1e-18) break;
            term *= u * u;
        }
        return sum;
    }
    return 0.5 * ((1.0 + u) * std::log1p(u) + (1.0 - u) * std::log1p(-u));
}

double entropy_h(double u) { return 2.0 - rate_I(u) / kLn2; }

double h_inverse(double y) {
    if (!(y >= 1.0) || y > 2.0) throw std::domain_error("y must be in [1,2]");
    double lo = 0.0, hi = 1.0;  // h(lo) = 2, h(hi) = 1, h decreasing
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (entropy_h(mid) >= y ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double f_s(double alpha, double s, double t) {
    check_alpha(alpha);
    if (!(s > 0.0)) throw std::domain_error("s must be positive");
    if (t < 0.0 || t > 1.0 - alpha) throw std::domain_error("t must be in [0, 1-alpha]");
    return (alpha + t) * kLn2 - t * s * s / (1.0 + t);
}

MinF min_f(double alpha, double s) {
    check_alpha(alpha);
    if (!(s > 0.0)) throw std::domain_error("s must be positive");
    const double rln2 = std::sqrt(kLn2);
    if (s <= rln2) return {0.0, alpha * kLn2};
    if (s < (2.0 - alpha) * rln2) {
        const double t = s / rln2 - 1.0;
        return {t, -(1.0 - alpha) * kLn2 + 2.0 * s * rln2 - s * s};
    }
    const double t = 1.0 - alpha;
    return {t, kLn2 - (1.0 - alpha) * s * s / (2.0 - alpha)};
}

PositivityReport regime_positivity(double alpha, int grid_points) {
    check_alpha(alpha);
    if (grid_points < 1) throw std::invalid_argument("grid_points must be positive");
    PositivityReport rep;
    rep.s_max = alpha >= alpha_star() ? beta_c() : std::sqrt(kLn2) * (1.0 + std::sqrt(alpha));
    rep.grid_points = grid_points;
    rep.all_positive = true;
    rep.min_value = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= grid_points; ++j) {
        const double s = rep.s_max * j / (grid_points + 1.0);
        const double v = min_f(alpha, s).value;
        if (v < rep.min_value) {
            rep.min_value = v;
            rep.argmin_s = s;
        }
        if (v <= 0.0 && !rep.first_failure_s) {
            rep.all_positive = false;
            rep.first_failure_s = s;
        }
    }
    return rep;
}

double GapBounds::c1() const {
    if (!has_low_) throw std::domain_error("c1 requires alpha <= alpha_star");
    return c1_;
}
double GapBounds::c2() const {
    if (!has_low_) throw std::domain_error("c2 requires alpha <= alpha_star");
    return c2_;
}
double GapBounds::discriminant() const {
    if (!has_low_) throw std::domain_error("discriminant requires alpha <= alpha_star");
    return discriminant_;
}
double GapBounds::delta_star() const {
    if (!has_low_) throw std::domain_error("delta_star requires alpha <= alpha_star");
    return delta_star_;
}
double GapBounds::rhs_q_low() const {
    if (!rhs_q_low_) throw std::domain_error("rhs_q_low requires alpha <= alpha_star and delta < c1");
    return *rhs_q_low_;
}
double GapBounds::rhs_r_low() const {
    if (!rhs_r_low_) throw std::domain_error("rhs_r_low requires alpha <= alpha_star and delta > delta_star");
    return *rhs_r_low_;
}
double GapBounds::energy_gap_low() const {
    if (!energy_gap_low_) throw std::domain_error("energy_gap_low requires alpha <= alpha_star and delta > delta_star");
    return *energy_gap_low_;
}

GapBounds gap_bounds(double alpha, double delta) {
    check_alpha(alpha);
    if (!(delta > 0.0) || !(delta < 1.0)) throw std::domain_error("delta must be in (0,1)");
    GapBounds gb;
    gb.alpha_ = alpha;
    gb.delta_ = delta;
    const double bc = beta_c();
    const double high_arg = 1.0 - (3.0 - alpha) / (2.0 * std::sqrt(2.0));
    gb.rhs_q_ = 2.0 * bc * high_arg;
    const double h_arg = 1.0 - std::sqrt(entropy_h(delta) / 2.0);
    gb.rhs_r_ = 2.0 * bc * std::min(h_arg, high_arg);
    gb.energy_gap_ = bc - 0.5 * gb.rhs_r_;

    if (alpha <= alpha_star()) {
        gb.has_low_ = true;
        const double disc2 = std::max(0.0, alpha * alpha - 6.0 * alpha + 1.0);
        gb.discriminant_ = std::sqrt(disc2);
        gb.c1_ = 0.5 * (1.0 - alpha - gb.discriminant_);
        gb.c2_ = 0.5 * (1.0 - alpha + gb.discriminant_);
        gb.delta_star_ = h_inverse(2.0 / (2.0 - alpha));
        if (delta < gb.c1_) {
            gb.rhs_q_low_ =
                2.0 * bc * (1.0 - std::sqrt(1.0 - 0.5 * delta * (gb.discriminant_ + delta)));
        }
        if (delta > gb.delta_star_) {
            const double v = 2.0 * bc * (1.0 - std::sqrt(0.5 * (2.0 - alpha) * entropy_h(delta)));
            gb.rhs_r_low_ = v;
            gb.energy_gap_low_ = bc - 0.5 * v;
        }
    }
    return gb;
}

double beta_p(int p) {
    if (p < 2 || p % 2 != 0) throw std::invalid_argument("p must be even and >= 2");

    // g in terms of eps = 1-u near the right end, where the large-p dip lives
    const auto g_eps = [p](double eps) {
        const double iu = 0.5 * ((2.0 - eps) * std::log(2.0 - eps) + eps * std::log(eps));
        return (1.0 + std::exp(-static_cast<double>(p) * std::log1p(-eps))) * iu;
    };
    const auto g = [p, &g_eps](double u) {
        if (u > 0.5) return g_eps(1.0 - u);
        return (1.0 + std::pow(u, -static_cast<double>(p))) * rate_I(u);
    };

    std::vector<double> cand;
    for (int j = 1; j < 4096; ++j) cand.push_back(j / 4096.0);
    for (int m = 1; m <= 14; ++m) {
        cand.push_back(std::pow(10.0, -m));
        cand.push_back(1.0 - std::pow(10.0, -m));
    }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

    std::size_t best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cand.size(); ++i) {
        const double v = g(cand[i]);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    const double lo = cand[best > 0 ? best - 1 : 0];
    const double hi = cand[std::min(best + 1, cand.size() - 1)];

    double refined;
    if (hi > 0.99) {
        // search in ln(1-u); the minimizer can sit at 1-u ~ 1e-10
        refined = golden_min([&](double w) { return g_eps(std::exp(w)); },
                             std::log(1.0 - hi), std::log(1.0 - lo), 200);
    } else if (lo < 0.01) {
        refined = golden_min([&](double w) { return g(std::exp(w)); },
                             std::log(lo), std::log(hi), 200);
    } else {
        refined = golden_min(g, lo, hi, 200);
    }

    double inf_g = std::min({refined, best_val, 2.0 * kLn2});
    if (p == 2) inf_g = std::min(inf_g, 0.5);  // boundary limit at u -> 0
    return std::sqrt(inf_g);
}

double mills_lower(double s, int n) {
    if (!(s > 0.0)) throw std::domain_error("s must be positive");
    if (n < 1) throw std::invalid_argument("n must be positive");
    const double x = s * std::sqrt(static_cast<double>(n));
    return gauss_pdf(x) * x / (x * x + 1.0);
}

double orthant_prob(double t, double x) {
    if (!(t >= -1.0) || !(t <= 1.0)) throw std::domain_error("correlation must be in [-1,1]");
    if (t == 1.0) return gauss_sf(x);
    if (t == -1.0) return std::max(0.0, 1.0 - 2.0 * gauss_cdf(x));
    const double sbar = std::sqrt((1.0 - t) * (1.0 + t));
    const auto f = [t, x, sbar](double z) {
        return gauss_pdf(z) * gauss_sf((x - t * z) / sbar);
    };
    const double hi = std::max(x, 0.0) + 42.0;  // phi underflows well before this
    return adaptive_gk(f, x, hi, 1e-11);
}

double orthant_upper_bound(double t, double s, int n) {
    if (!(t >= -1.0) || !(t <= 1.0)) throw std::domain_error("correlation must be in [-1,1]");
    if (!(s > 0.0)) throw std::domain_error("s must be positive");
    if (n < 1) throw std::invalid_argument("n must be positive");
    const double sf = gauss_sf(s * std::sqrt(static_cast<double>(n)));
    if (t == -1.0) return sf * sf;
    return sf * sf + std::asin(t) / (2.0 * kPi) * std::exp(-s * s * n / (1.0 + t));
}

double count_entropy_slack(int n) {
    if (n < 1) throw std::invalid_argument("n must be positive");
    return (2.0 + std::log(static_cast<double>(n))) / n;
}

SecondMomentResult second_moment_ratio(const CountTable& counts, double s) {
    if (!(s > 0.0)) throw std::domain_error("s must be positive");
    const int n = counts.n;
    const int k = counts.k;
    if (n < 2 || static_cast<int>(counts.counts.size()) != n + 1)
        throw std::invalid_argument("count table incomplete");

    const double x = s * std::sqrt(static_cast<double>(n));
    const double sf = gauss_sf(x);
    double num = 0.0;
    for (int l = 0; l <= n; ++l) {
        const BigInt& c = counts.counts[static_cast<std::size_t>(l)];
        if (c == 0) continue;
        num += c.convert_to<double>() * orthant_prob(static_cast<double>(l) / n, x);
    }
    SecondMomentResult out;
    out.exact_ratio = num / (std::exp2(static_cast<double>(n)) * sf * sf);

    const double s2n = s * s * n;
    const double alpha_eff = static_cast<double>(k) / (n - 1);
    const double mf = min_f(alpha_eff, s).value;
    out.analytic_bound = 2.0 +
                         std::sqrt(2.0 * kPi) * (s2n + 1.0) / x * std::exp(-n * (kLn2 - 0.5 * s * s)) +
                         4.0 * kPi * (s2n + 1.0) * (s2n + 1.0) * n / (s * s) * std::exp(-n * mf);
    return out;
}

SupIdentityReport sup_identity_check() {
    SupIdentityReport rep;
    rep.ok = true;
    rep.max_closed_form_deviation = 0.0;
    rep.max_grid_deficit = -std::numeric_limits<double>::infinity();
    for (int ai = 1; ai <= 20; ++ai) {
        const double alpha = 0.05 * ai;
        const auto f = [alpha](double t) { return (1.0 + t) * (2.0 - alpha - t); };
        const double span = 1.0 - alpha;
        const double t_star = std::clamp(0.5 * span, 0.0, span);
        const double closed = 0.25 * (3.0 - alpha) * (3.0 - alpha);
        rep.max_closed_form_deviation =
            std::max(rep.max_closed_form_deviation, std::abs(f(t_star) - closed));
        double grid_max = -std::numeric_limits<double>::infinity();
        const int grid = 100000;
        for (int j = 1; j <= grid; ++j) grid_max = std::max(grid_max, f(span * j / grid));
        rep.max_grid_deficit = std::max(rep.max_grid_deficit, closed - grid_max);
    }
    if (rep.max_closed_form_deviation > 1e-12) rep.ok = false;
    if (rep.max_grid_deficit > 1e-8 || rep.max_grid_deficit < -1e-12) rep.ok = false;
    return rep;
}

double free_energy_tail_envelope(int n, double beta, double t) {
    if (n < 1 || !(beta > 0.0) || !(t >= 0.0)) throw std::domain_error("bad envelope arguments");
    return 2.0 * std::exp(-n * t * t / (4.0 * beta * beta));
}

double max_tail_envelope(int n, double t) {
    if (n < 1 || !(t >= 0.0)) throw std::domain_error("bad envelope arguments");
    return 2.0 * std::exp(-n * t * t / 4.0);
}

double pair_max_tail_envelope(int n, double t) {
    if (n < 1 || !(t >= 0.0)) throw std::domain_error("bad envelope arguments");
    return 2.0 * std::exp(-n * t * t / 16.0);
}

}  // namespace nklab
