#include "tumordde/chareq.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tumordde::chareq {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct L0Data {
    double x0, y0;
};

L0Data l0_of(const model::ModelParams& p) {
    auto [L0, L1] = model::equilibria(p);
    (void)L1;
    return {L0.x, L0.y};
}

/// All real roots of u^3 + a u^2 + b u + c, ascending, Newton-polished.
std::vector<double> cubic_real_roots(double a, double b, double c) {
    const double p = b - a * a / 3.0;
    const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    const double disc = q * q / 4.0 + p * p * p / 27.0;
    const double disc_scale = std::max({1.0, q * q, std::abs(p * p * p)});
    std::vector<double> roots;
    if (disc > 1e-14 * disc_scale) {
        const double s = std::sqrt(disc);
        const double t = std::cbrt(-q / 2.0 + s) + std::cbrt(-q / 2.0 - s);
        roots.push_back(t - a / 3.0);
    } else if (disc >= -1e-14 * disc_scale) {
        const double t = std::cbrt(-q / 2.0);
        roots.push_back(2.0 * t - a / 3.0);
        roots.push_back(-t - a / 3.0);
    } else {
        const double m = 2.0 * std::sqrt(-p / 3.0);
        const double phi = std::acos(std::clamp(
            3.0 * q / (p * m), -1.0, 1.0));
        for (int k = 0; k < 3; ++k)
            roots.push_back(m * std::cos((phi + 2.0 * kPi * k) / 3.0) - a / 3.0);
    }
    auto f = [&](double u) { return ((u + a) * u + b) * u + c; };
    auto fp = [&](double u) { return (3.0 * u + 2.0 * a) * u + b; };
    for (double& r : roots) {
        for (int it = 0; it < 8; ++it) {
            const double d = fp(r);
            if (std::abs(d) < 1e-300) break;
            const double step = f(r) / d;
            r -= step;
            if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(r))) break;
        }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double x, double y) { return std::abs(x - y) < 1e-11; }),
                roots.end());
    return roots;
}

/// Joint Newton refinement of (omega, tau) on Re/Im of the characteristic
/// function; d_omega and d_tau are the complex partials of Delta.
template <typename F, typename Fl, typename Ft>
bool refine_crossing(const F& delta, const Fl& d_lambda, const Ft& d_tau,
                     double& omega, double& tau) {
    for (int it = 0; it < 60; ++it) {
        const cx lam(0.0, omega);
        const cx val = delta(lam, tau);
        if (std::abs(val) < 1e-15) return true;
        const cx dW = cx(0.0, 1.0) * d_lambda(lam, tau); // d Delta / d omega
        const cx dT = d_tau(lam, tau);
        const double det = dW.real() * dT.imag() - dT.real() * dW.imag();
        if (std::abs(det) < 1e-300) return false;
        const double dw = (val.real() * dT.imag() - dT.real() * val.imag()) / det;
        const double dt = (dW.real() * val.imag() - val.real() * dW.imag()) / det;
        omega -= dw;
        tau -= dt;
        if (std::abs(dw) + std::abs(dt) < 1e-16 * (1.0 + std::abs(omega) + std::abs(tau)))
            return true;
    }
    return true; // caller re-checks the residual
}

} // namespace

CharCaseDD CharCaseDD::make(const model::ModelParams& p, double tau1, double tau2) {
    if (tau1 < 0.0 || tau2 < 0.0) throw ValidationError("lags must be >= 0");
    CharCaseDD c;
    c.params = p;
    c.x0 = l0_of(p).x0;
    c.tau1 = tau1;
    c.tau2 = tau2;
    return c;
}

CharCaseDW CharCaseDW::make(const model::ModelParams& p, double tau1, double q2) {
    if (tau1 < 0.0) throw ValidationError("lag tau1 must be >= 0");
    if (!(q2 > 0.0)) throw ValidationError("weak-kernel rate q2 must be > 0");
    CharCaseDW c;
    c.params = p;
    c.x0 = l0_of(p).x0;
    c.tau1 = tau1;
    c.q2 = q2;
    c.p2 = q2 + p.b3;
    c.p1 = q2 * p.b3 - p.a2 * p.b2 * c.x0 - p.b1 * c.x0 * q2;
    c.p0 = -q2 * p.a2 * p.b2 * c.x0;
    c.r1 = p.a1 * p.b1 * c.x0;
    c.r0 = p.a1 * p.b1 * c.x0 * q2;
    return c;
}

cx delta_dd(const CharCaseDD& c, cx lambda) {
    const auto& p = c.params;
    return lambda * lambda + p.b3 * lambda - p.a2 * p.b2 * c.x0
         + p.a1 * p.b1 * c.x0 * std::exp(-lambda * c.tau1)
         - lambda * p.b1 * c.x0 * std::exp(-lambda * c.tau2);
}

cx delta_dd_dlambda(const CharCaseDD& c, cx lambda) {
    const auto& p = c.params;
    return 2.0 * lambda + p.b3
         - p.a1 * p.b1 * c.x0 * c.tau1 * std::exp(-lambda * c.tau1)
         - p.b1 * c.x0 * (1.0 - lambda * c.tau2) * std::exp(-lambda * c.tau2);
}

cx delta_dw(const CharCaseDW& c, cx lambda) {
    return ((lambda + c.p2) * lambda + c.p1) * lambda + c.p0
         + (c.r1 * lambda + c.r0) * std::exp(-lambda * c.tau1);
}

cx delta_dw_dlambda(const CharCaseDW& c, cx lambda) {
    return (3.0 * lambda + 2.0 * c.p2) * lambda + c.p1
         + (c.r1 - c.tau1 * (c.r1 * lambda + c.r0)) * std::exp(-lambda * c.tau1);
}

double stability_bound_dd(const model::ModelParams& p) {
    const double x0 = l0_of(p).x0;
    return (p.b3 + p.b1 * x0) / (p.a1 * p.b1 * x0);
}

double g_of_omega(const model::ModelParams& p, double x0, double omega) {
    if (!(omega > 0.0))
        throw ValidationError("g(omega) has a pole at omega = 0");
    const double A = p.b1 * p.b1 * x0 * x0 - p.b3 * p.b3 - 2.0 * p.a2 * p.b2 * x0;
    const double B = (p.a2 * p.a2 * p.b2 * p.b2 - p.a1 * p.a1 * p.b1 * p.b1) * x0 * x0;
    const double w2 = omega * omega;
    return (w2 * w2 - A * w2 + B) / (2.0 * p.a1 * p.b1 * p.b1 * x0 * x0 * omega);
}

std::vector<double> omega_candidates_dd(const model::ModelParams& p, double x0) {
    model::require_admissible(p);
    const double A = p.b1 * p.b1 * x0 * x0 - p.b3 * p.b3 - 2.0 * p.a2 * p.b2 * x0;
    const double C = (p.a2 * p.a2 * p.b2 * p.b2 - p.a1 * p.a1 * p.b1 * p.b1) * x0 * x0;
    // quartic in omega reads u^2 - A u + C = 0 with u = omega^2
    const double disc = A * A - 4.0 * C;
    std::vector<double> out;
    if (disc < 0.0) return out;
    const double s = std::sqrt(disc);
    const double qq = -0.5 * (-A + (A >= 0.0 ? -s : s)); // = (A + sign(A) s)/2
    double u1 = qq;
    double u2 = (qq != 0.0) ? C / qq : 0.5 * (A + s);
    for (double u : {u1, u2})
        if (u > 0.0) out.push_back(std::sqrt(u));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              out.end());
    return out;
}

namespace {

/// Residuals of the two crossing equations of the double-Dirac case.
void dd_crossing_residuals(const model::ModelParams& p, double x0, double tau2,
                           double omega, double tau1, double& ra, double& rb) {
    ra = omega * omega + p.a2 * p.b2 * x0
       - p.a1 * p.b1 * x0 * std::cos(tau1 * omega)
       + p.b1 * x0 * omega * std::sin(tau2 * omega);
    rb = p.b3 * omega - p.a1 * p.b1 * x0 * std::sin(tau1 * omega)
       - p.b1 * x0 * omega * std::cos(tau2 * omega);
}

void dw_crossing_residuals(const CharCaseDW& c, double omega, double tau1,
                           double& ra, double& rb) {
    ra = c.p0 - c.p2 * omega * omega + c.r0 * std::cos(omega * tau1)
       + c.r1 * omega * std::sin(omega * tau1);
    rb = -omega * omega * omega + c.p1 * omega
       + c.r1 * omega * std::cos(omega * tau1) - c.r0 * std::sin(omega * tau1);
}

HopfPoint finish_dd_point(const model::ModelParams& p, double tau2,
                          double omega, double tau1, int branch, bool family,
                          const Tolerances& tol) {
    CharCaseDD c = CharCaseDD::make(p, tau1, tau2);
    auto delta = [&](cx lam, double t) {
        CharCaseDD cc = c;
        cc.tau1 = t;
        return delta_dd(cc, lam);
    };
    auto dlam = [&](cx lam, double t) {
        CharCaseDD cc = c;
        cc.tau1 = t;
        return delta_dd_dlambda(cc, lam);
    };
    auto dtau = [&](cx lam, double t) {
        return -p.a1 * p.b1 * c.x0 * lam * std::exp(-lam * t);
    };
    refine_crossing(delta, dlam, dtau, omega, tau1);
    c.tau1 = tau1;

    HopfPoint hp;
    hp.kcase = KernelCase::DD;
    hp.omega = omega;
    hp.tau_crit = tau1;
    hp.branch_index = branch;
    hp.paper_family = family;
    hp.residual_delta = std::abs(delta_dd(c, cx(0.0, omega)));
    dd_crossing_residuals(p, c.x0, tau2, omega, tau1, hp.res_eq_a, hp.res_eq_b);
    const cx lp = lambda_prime_dd_l1l2(c, omega);
    hp.d_re = lp.real();
    hp.d_im = lp.imag();
    hp.degenerate = std::abs(lp) < tol.transversality_min;
    return hp;
}

} // namespace

namespace {

/// Frequencies at which the full double-Dirac crossing system admits a lag:
/// zeros of F(w) = R1^2 + R2^2 - (a1 b1 x0)^2 where
///   a1 b1 x0 cos(tau1 w) = R1 = w^2 + a2 b2 x0 + b1 x0 w sin(tau2 w)
///   a1 b1 x0 sin(tau1 w) = R2 = b3 w - b1 x0 w cos(tau2 w).
struct DDCrossingSystem {
    const model::ModelParams& p;
    double x0, tau2, abx;

    double R1(double w) const {
        return w * w + p.a2 * p.b2 * x0 + p.b1 * x0 * w * std::sin(tau2 * w);
    }
    double R2(double w) const {
        return p.b3 * w - p.b1 * x0 * w * std::cos(tau2 * w);
    }
    double F(double w) const {
        const double r1 = R1(w), r2 = R2(w);
        return r1 * r1 + r2 * r2 - abx * abx;
    }

    std::vector<double> frequencies() const {
        const double lin = p.b3 + p.b1 * x0;
        const double cst = p.a2 * p.b2 * x0 + abx;
        const double w_hi = 1.01 * 0.5 * (lin + std::sqrt(lin * lin + 4.0 * cst));
        std::vector<double> roots;
        const int n_scan = 4000;
        double prev_w = w_hi * 1e-6;
        double prev_f = F(prev_w);
        for (int i = 1; i <= n_scan; ++i) {
            const double w = w_hi * i / n_scan;
            const double fw = F(w);
            if (prev_f == 0.0) {
                roots.push_back(prev_w);
            } else if (prev_f * fw < 0.0) {
                double lo = prev_w, hi = w;
                for (int it = 0; it < 80; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if (F(lo) * F(mid) <= 0.0) hi = mid; else lo = mid;
                }
                roots.push_back(0.5 * (lo + hi));
            }
            prev_w = w;
            prev_f = fw;
        }
        return roots;
    }
};

} // namespace

HopfPoint hopf_point_dd(const model::ModelParams& p, double tau2,
                        int k_max, const Tolerances& tol) {
    if (tau2 < 0.0) throw ValidationError("tau2 must be >= 0");
    const double x0 = l0_of(p).x0;
    const auto candidates = omega_candidates_dd(p, x0);

    // Closed-form family tau1 = k pi / omega + tau2 over the quartic
    // frequencies; a member is accepted only when both crossing equations
    // hold, which fixes the parity of k.
    for (int k = 1; k <= k_max; ++k) {
        for (double w : candidates) {
            const double tau1 = k * kPi / w + tau2;
            double ra, rb;
            dd_crossing_residuals(p, x0, tau2, w, tau1, ra, rb);
            if (std::max(std::abs(ra), std::abs(rb)) < tol.residual) {
                HopfPoint hp = finish_dd_point(p, tau2, w, tau1, k, true, tol);
                if (hp.degenerate)
                    throw NumericError(NumericError::Kind::Degenerate,
                                       "transversality vanishes at the crossing");
                return hp;
            }
        }
    }

    // The closed-form family enforces only one of the two crossing
    // equations; solve the full system instead.
    const DDCrossingSystem sys{p, x0, tau2, p.a1 * p.b1 * x0};
    const auto w_roots = sys.frequencies();
    if (w_roots.empty())
        throw NumericError(NumericError::Kind::NoCrossing,
                           "no purely imaginary crossing for the given tau2");

    bool found = false;
    double best_tau = 0.0, best_w = 0.0;
    int best_branch = 1;
    for (double w : w_roots) {
        const double theta = std::atan2(sys.R2(w) / sys.abx, sys.R1(w) / sys.abx);
        for (int j = 0; j < 2 * k_max; ++j) {
            const double tau1 = (theta + 2.0 * kPi * j) / w;
            if (tau1 <= tau2) continue;
            if (!found || tau1 < best_tau) {
                found = true;
                best_tau = tau1;
                best_w = w;
                best_branch = j + 1;
            }
            break; // larger j only increases tau1
        }
    }
    if (!found)
        throw NumericError(NumericError::Kind::NoCrossing,
                           "all crossings violate tau1 > tau2");

    HopfPoint hp = finish_dd_point(p, tau2, best_w, best_tau, best_branch,
                                   false, tol);
    if (std::max(std::abs(hp.res_eq_a), std::abs(hp.res_eq_b)) > tol.residual)
        throw NumericError(NumericError::Kind::NoCrossing,
                           "crossing refinement failed the residual gate");
    if (hp.degenerate)
        throw NumericError(NumericError::Kind::Degenerate,
                           "transversality vanishes at the crossing");
    return hp;
}

std::vector<HopfPoint> hopf_points_dd(const model::ModelParams& p, double tau2,
                                      int count, int k_max, const Tolerances& tol) {
    if (tau2 < 0.0) throw ValidationError("tau2 must be >= 0");
    if (count < 1) throw ValidationError("count must be >= 1");
    const double x0 = l0_of(p).x0;
    const DDCrossingSystem sys{p, x0, tau2, p.a1 * p.b1 * x0};

    struct Candidate {
        double omega, tau1;
        int branch;
    };
    std::vector<Candidate> cands;
    for (double w : sys.frequencies()) {
        const double theta = std::atan2(sys.R2(w) / sys.abx, sys.R1(w) / sys.abx);
        int taken = 0;
        for (int j = 0; j < 2 * k_max && taken < count; ++j) {
            const double tau1 = (theta + 2.0 * kPi * j) / w;
            if (tau1 <= tau2) continue;
            cands.push_back({w, tau1, j + 1});
            ++taken;
        }
    }
    std::sort(cands.begin(), cands.end(),
              [](const Candidate& a, const Candidate& b) { return a.tau1 < b.tau1; });

    std::vector<HopfPoint> out;
    for (const auto& c : cands) {
        if (static_cast<int>(out.size()) >= count) break;
        HopfPoint hp = finish_dd_point(p, tau2, c.omega, c.tau1, c.branch,
                                       false, tol);
        if (std::max(std::abs(hp.res_eq_a), std::abs(hp.res_eq_b)) > tol.residual)
            continue;
        bool dup = false;
        for (const auto& seen : out)
            if (std::abs(seen.tau_crit - hp.tau_crit) < 1e-8
                && std::abs(seen.omega - hp.omega) < 1e-8)
                dup = true;
        if (!dup) out.push_back(hp);
    }
    if (out.empty())
        throw NumericError(NumericError::Kind::NoCrossing,
                           "no certified crossing within the branch cap");
    return out;
}

std::vector<HopfPoint> hopf_points_dw(const model::ModelParams& p, double q2,
                                      const Tolerances& tol) {
    CharCaseDW c = CharCaseDW::make(p, 0.0, q2);
    // frequency sextic as a cubic in u = omega^2
    const double c2 = c.p2 * c.p2 - 2.0 * c.p1;
    const double c1 = c.p1 * c.p1 - 2.0 * c.p0 * c.p2 - c.r1 * c.r1;
    const double c0 = c.p0 * c.p0 - c.r0 * c.r0;
    std::vector<double> omegas;
    for (double u : cubic_real_roots(c2, c1, c0))
        if (u > 1e-14) omegas.push_back(std::sqrt(u));
    if (omegas.empty())
        throw NumericError(NumericError::Kind::NoCrossing,
                           "frequency sextic has no positive root");

    std::vector<HopfPoint> points;
    for (double w : omegas) {
        // solve the crossing equations for cos(w tau), sin(w tau)
        const double rhs1 = c.p2 * w * w - c.p0;
        const double rhs2 = w * w * w - c.p1 * w;
        const double den = c.r0 * c.r0 + c.r1 * c.r1 * w * w;
        const double ct = (c.r0 * rhs1 + c.r1 * w * rhs2) / den;
        const double st = (c.r1 * w * rhs1 - c.r0 * rhs2) / den;
        const double theta = std::atan2(st, ct);
        // lift by multiples of pi/omega and keep the first that satisfies
        // both crossing equations with a positive lag
        bool placed = false;
        for (int j = 0; j < 512 && !placed; ++j) {
            double tau1 = (theta + kPi * j) / w;
            if (tau1 <= 0.0) continue;
            double ra, rb;
            dw_crossing_residuals(c, w, tau1, ra, rb);
            if (std::max(std::abs(ra), std::abs(rb)) > 1e-6 * (1.0 + den)) continue;

            CharCaseDW cc = c;
            auto delta = [&](cx lam, double t) {
                CharCaseDW tmp = cc;
                tmp.tau1 = t;
                return delta_dw(tmp, lam);
            };
            auto dlam = [&](cx lam, double t) {
                CharCaseDW tmp = cc;
                tmp.tau1 = t;
                return delta_dw_dlambda(tmp, lam);
            };
            auto dtau = [&](cx lam, double t) {
                return -lam * (cc.r1 * lam + cc.r0) * std::exp(-lam * t);
            };
            double ww = w, tt = tau1;
            refine_crossing(delta, dlam, dtau, ww, tt);
            cc.tau1 = tt;

            HopfPoint hp;
            hp.kcase = KernelCase::DW;
            hp.omega = ww;
            hp.tau_crit = tt;
            hp.branch_index = j + 1;
            hp.residual_delta = std::abs(delta_dw(cc, cx(0.0, ww)));
            dw_crossing_residuals(cc, ww, tt, hp.res_eq_a, hp.res_eq_b);
            if (std::max(std::abs(hp.res_eq_a), std::abs(hp.res_eq_b)) > tol.residual)
                continue;
            const cx lp = lambda_prime_dw_m1m2(cc, ww);
            hp.d_re = lp.real();
            hp.d_im = lp.imag();
            hp.degenerate = std::abs(lp) < tol.transversality_min;
            points.push_back(hp);
            placed = true;
        }
    }
    if (points.empty())
        throw NumericError(NumericError::Kind::NoCrossing,
                           "no certified crossing for the weak-kernel case");
    std::sort(points.begin(), points.end(),
              [](const HopfPoint& a, const HopfPoint& b) {
                  return a.tau_crit < b.tau_crit;
              });
    return points;
}

HopfPoint hopf_point_dw(const model::ModelParams& p, double q2,
                        const Tolerances& tol) {
    return hopf_points_dw(p, q2, tol).front();
}

Q2Window q2_stability_window(const model::ModelParams& p) {
    model::require_admissible(p);
    Q2Window out;
    const double lhs = 4.0 * std::pow(p.a1 * p.b1 - p.a2 * p.b2, 2);
    const double rhs = p.a2 * p.b3 * (p.b1 * p.b4 - p.a2 * p.b3);
    if (!(lhs < rhs)) {
        std::ostringstream os;
        os << "criterion fails: 4*(a1*b1 - a2*b2)^2 = " << lhs
           << " is not < a2*b3*(b1*b4 - a2*b3) = " << rhs;
        out.reason = os.str();
        return out;
    }
    const double x0 = l0_of(p).x0;
    const double lead = p.b3 - p.b1 * x0;
    if (std::abs(lead) < 1e-14) {
        out.reason = "leading coefficient b3 - b1*x0 vanishes";
        return out;
    }
    const double bq = p.b3 * lead;
    const double cq = p.b3 * (p.a1 * p.b1 - p.a2 * p.b2) * x0;
    const double disc = bq * bq - 4.0 * lead * cq;
    if (disc < 0.0) {
        out.reason = "window roots are complex";
        return out;
    }
    const double s = std::sqrt(disc);
    double q21 = (-bq - s) / (2.0 * lead);
    double q22 = (-bq + s) / (2.0 * lead);
    if (q21 > q22) std::swap(q21, q22);
    if (!(q21 > 0.0 && q22 > 0.0)) {
        std::ostringstream os;
        os << "window roots are not both positive (" << q21 << ", " << q22 << ")";
        out.reason = os.str();
        return out;
    }
    out.window = std::make_pair(q21, q22);
    return out;
}

cx lambda_prime_dd_l1l2(const CharCaseDD& c, double omega) {
    const auto& p = c.params;
    const double x0 = c.x0;
    const double C1 = std::cos(c.tau1 * omega), S1 = std::sin(c.tau1 * omega);
    const double C2 = std::cos(c.tau2 * omega), S2 = std::sin(c.tau2 * omega);
    const double abx = p.a1 * p.b1 * x0;
    const double l1 = p.b3 - abx * c.tau1 * C1 - p.b1 * x0 * C2
                    + p.b1 * x0 * c.tau2 * omega * S2;
    const double l2 = 2.0 * omega + abx * c.tau1 * S1 + p.b1 * x0 * S2
                    + p.b1 * x0 * c.tau2 * omega * C2;
    const double den = l1 * l1 + l2 * l2;
    if (den < 1e-300)
        throw NumericError(NumericError::Kind::ZeroDenominator,
                           "l1^2 + l2^2 vanishes");
    return {abx * omega * (S1 * l1 + C1 * l2) / den,
            abx * omega * (C1 * l1 - S1 * l2) / den};
}

cx lambda_prime_dw_m1m2(const CharCaseDW& c, double omega) {
    const double C = std::cos(omega * c.tau1), S = std::sin(omega * c.tau1);
    const double m1 = (c.p1 - 3.0 * omega * omega) * C - 2.0 * c.p2 * omega * S
                    + c.r1 - c.r0 * c.tau1;
    const double m2 = 2.0 * c.p2 * omega * C + (c.p1 - 3.0 * omega * omega) * S
                    - c.r1 * c.tau1 * omega;
    const double den = m1 * m1 + m2 * m2;
    if (den < 1e-300)
        throw NumericError(NumericError::Kind::ZeroDenominator,
                           "m1^2 + m2^2 vanishes");
    const double nre = -c.r1 * omega * omega;
    const double nim = c.r0 * omega;
    return {(nre * m1 + nim * m2) / den, (nim * m1 - nre * m2) / den};
}

std::optional<cx> newton_root(const std::function<cx(cx)>& f,
                              const std::function<cx(cx)>& fprime,
                              cx seed, int max_iter, double step_tol) {
    cx z = seed;
    for (int it = 0; it < max_iter; ++it) {
        const cx d = fprime(z);
        if (std::abs(d) < 1e-300) return std::nullopt;
        const cx step = f(z) / d;
        z -= step;
        if (std::abs(step) < step_tol * (1.0 + std::abs(z))) return z;
    }
    return std::nullopt;
}

RootScanResult root_scan(const std::function<cx(cx)>& f,
                         const std::function<cx(cx)>& fprime,
                         const Region& region, int nre, int nim) {
    RootScanResult out;
    if (!(region.re_max > region.re_min) || !(region.im_max > region.im_min))
        return out;
    nre = std::max(nre, 2);
    nim = std::max(nim, 2);
    const double dre = (region.re_max - region.re_min) / nre;
    const double dim = (region.im_max - region.im_min) / nim;

    std::vector<double> mag((nre + 1) * (nim + 1));
    auto at = [&](int i, int j) -> double& { return mag[i * (nim + 1) + j]; };
    for (int i = 0; i <= nre; ++i)
        for (int j = 0; j <= nim; ++j)
            at(i, j) = std::abs(f(cx(region.re_min + i * dre,
                                     region.im_min + j * dim)));

    const double margin_re = 0.05 * (region.re_max - region.re_min) + 2.0 * dre;
    const double margin_im = 0.05 * (region.im_max - region.im_min) + 2.0 * dim;
    for (int i = 0; i <= nre; ++i) {
        for (int j = 0; j <= nim; ++j) {
            bool is_min = true;
            for (int di = -1; di <= 1 && is_min; ++di)
                for (int dj = -1; dj <= 1 && is_min; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    const int ii = i + di, jj = j + dj;
                    if (ii < 0 || ii > nre || jj < 0 || jj > nim) continue;
                    if (at(ii, jj) < at(i, j)) is_min = false;
                }
            if (!is_min) continue;
            const cx seed(region.re_min + i * dre, region.im_min + j * dim);
            auto root = newton_root(f, fprime, seed);
            if (!root) {
                ++out.discarded_seeds;
                continue;
            }
            const cx z = *root;
            if (z.real() < region.re_min - margin_re || z.real() > region.re_max + margin_re
                || z.imag() < region.im_min - margin_im || z.imag() > region.im_max + margin_im)
                continue;
            if (std::abs(f(z)) > 1e-8) {
                ++out.discarded_seeds;
                continue;
            }
            bool dup = false;
            for (const cx& r : out.roots)
                if (std::abs(r - z) < 1e-7) { dup = true; break; }
            if (!dup) out.roots.push_back(z);
        }
    }
    std::sort(out.roots.begin(), out.roots.end(), [](const cx& a, const cx& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return out;
}

} // namespace tumordde::chareq
