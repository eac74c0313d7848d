#ifndef TUMORDDE_CHAREQ_HPP
#define TUMORDDE_CHAREQ_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tumordde/common.hpp"
#include "tumordde/model.hpp"

namespace tumordde::chareq {

enum class KernelCase { DD, DW };

/// Case data for the double-Dirac characteristic function
///   Delta(lambda) = lambda^2 + b3 lambda - a2 b2 x0
///                   + a1 b1 x0 e^(-lambda tau1) - lambda b1 x0 e^(-lambda tau2).
struct CharCaseDD {
    model::ModelParams params;
    double x0 = 0.0;
    double tau1 = 0.0;
    double tau2 = 0.0;

    static CharCaseDD make(const model::ModelParams& p, double tau1, double tau2);
};

/// Case data for the Dirac + weak-kernel characteristic function
///   Delta(lambda) = lambda^3 + p2 lambda^2 + p1 lambda + p0
///                   + (r1 lambda + r0) e^(-lambda tau1)
/// with coefficients fixed by the parameters, x0 and q2.
struct CharCaseDW {
    model::ModelParams params;
    double x0 = 0.0;
    double tau1 = 0.0;
    double q2 = 0.0;
    double p0 = 0.0, p1 = 0.0, p2 = 0.0, r0 = 0.0, r1 = 0.0;

    static CharCaseDW make(const model::ModelParams& p, double tau1, double q2);
};

cx delta_dd(const CharCaseDD& c, cx lambda);
cx delta_dd_dlambda(const CharCaseDD& c, cx lambda);
cx delta_dw(const CharCaseDW& c, cx lambda);
cx delta_dw_dlambda(const CharCaseDW& c, cx lambda);

/// A certified purely-imaginary characteristic root crossing.
struct HopfPoint {
    double omega = 0.0;     // crossing frequency, > 0
    double tau_crit = 0.0;  // critical value of tau1
    int branch_index = 1;   // branch lift count, >= 1
    double d_re = 0.0;      // Re d(lambda)/d(tau1) at the crossing
    double d_im = 0.0;      // Im d(lambda)/d(tau1)
    KernelCase kcase = KernelCase::DD;
    double residual_delta = 0.0; // |Delta(i omega, tau_crit)|
    double res_eq_a = 0.0;  // real-part crossing equation residual
    double res_eq_b = 0.0;  // imaginary-part crossing equation residual
    bool degenerate = false;
    bool paper_family = false; // true when tau = k*pi/omega + tau2 certified
};

/// Delay budget of the sufficient stability condition: tau1 + tau2 below
/// (b3 + b1 x0)/(a1 b1 x0) implies L0 asymptotically stable.
double stability_bound_dd(const model::ModelParams& p);

/// g(omega) whose zero set is the quartic frequency candidate set.
double g_of_omega(const model::ModelParams& p, double x0, double omega);

/// Positive roots of x^4 - (b1^2 x0^2 - b3^2 - 2 a2 b2 x0) x^2
/// + (a2^2 b2^2 - a1^2 b1^2) x0^2, ascending. Empty when none exist.
std::vector<double> omega_candidates_dd(const model::ModelParams& p, double x0);

/// First certified crossing of the double-Dirac case as tau1 grows, for fixed
/// tau2. The closed-form family tau1 = k pi/omega + tau2 over the quartic
/// frequencies is tested first (k <= k_max); when no member satisfies both
/// crossing equations, the crossing system itself is solved and refined until
/// |Delta(i omega, tau1)| is at machine scale. Throws NoCrossing / Degenerate.
HopfPoint hopf_point_dd(const model::ModelParams& p, double tau2,
                        int k_max = 64, const Tolerances& tol = {});

/// Up to `count` certified double-Dirac crossings, smallest tau1 first
/// (branch lifts of every crossing frequency). Throws NoCrossing when none
/// exists within the branch cap.
std::vector<HopfPoint> hopf_points_dd(const model::ModelParams& p, double tau2,
                                      int count = 3, int k_max = 64,
                                      const Tolerances& tol = {});

/// All certified crossings of the Dirac + weak case, smallest tau1 first
/// (one per positive root of the frequency sextic). Throws NoCrossing.
std::vector<HopfPoint> hopf_points_dw(const model::ModelParams& p, double q2,
                                      const Tolerances& tol = {});

/// Convenience: smallest-tau entry of hopf_points_dw.
HopfPoint hopf_point_dw(const model::ModelParams& p, double q2,
                        const Tolerances& tol = {});

/// q2 ranges in which L0 is claimed locally asymptotically stable at tau1 = 0.
/// `window` is set only when the printed criterion produces two positive real
/// roots; otherwise `reason` explains why not.
struct Q2Window {
    std::optional<std::pair<double, double>> window;
    std::string reason;
};
Q2Window q2_stability_window(const model::ModelParams& p);

/// d(lambda)/d(tau1) at lambda = i*omega via the real trig expansion
/// (the l1/l2 route for DD, the m1/m2 route for DW).
cx lambda_prime_dd_l1l2(const CharCaseDD& c, double omega);
cx lambda_prime_dw_m1m2(const CharCaseDW& c, double omega);

/// Complex Newton refinement of a characteristic root from a seed.
/// Returns the root, or nullopt if not converged within max_iter.
std::optional<cx> newton_root(const std::function<cx(cx)>& f,
                              const std::function<cx(cx)>& fprime,
                              cx seed, int max_iter = 100,
                              double step_tol = 1e-12);

struct Region {
    double re_min = 0.0, re_max = 0.0, im_min = 0.0, im_max = 0.0;
};

struct RootScanResult {
    std::vector<cx> roots;     // deduplicated, sorted by (Re, Im)
    int discarded_seeds = 0;   // grid minima from which Newton failed
};

/// Desk-scale root survey: |f| local minima on an (nre+1) x (nim+1) grid over
/// the rectangle, refined by complex Newton; roots that leave the (slightly
/// inflated) rectangle are dropped.
RootScanResult root_scan(const std::function<cx(cx)>& f,
                         const std::function<cx(cx)>& fprime,
                         const Region& region, int nre = 80, int nim = 80);

} // namespace tumordde::chareq

#endif
