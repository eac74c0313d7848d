#ifndef TUMORDDE_NORMALFORM_HPP
#define TUMORDDE_NORMALFORM_HPP

#include <string>
#include <vector>

#include "tumordde/chareq.hpp"
#include "tumordde/common.hpp"
#include "tumordde/model.hpp"
#include "tumordde/smallmat.hpp"

namespace tumordde::normalform {

using chareq::HopfPoint;
using chareq::KernelCase;

/// A vector-valued function of theta built from exponential pieces,
/// sum_k vec_k * e^(mu_k * theta). Exact evaluation anywhere on [-tau, 0].
struct ExpProfile {
    struct Piece {
        cx mu;
        std::vector<cx> vec;
    };
    std::vector<Piece> pieces;

    std::size_t dim() const { return pieces.empty() ? 0 : pieces[0].vec.size(); }
    std::vector<cx> eval(double theta) const;
    ExpProfile conjugated() const; // complex conjugate profile
    ExpProfile scaled(cx factor) const;
};

/// Matrix point-mass measure: mass `matrix` sitting at theta = -lag, lag >= 0.
struct EtaMeasure {
    struct Mass {
        double lag;
        std::vector<std::vector<cx>> matrix;
    };
    std::vector<Mass> masses;
    double tau_max = 0.0; // all lags must lie in [0, tau_max]
};

EtaMeasure eta_measure_dd(const model::ModelParams& p, double tau1, double tau2);
EtaMeasure eta_measure_dw(const model::ModelParams& p, double q2, double tau1);

/// The adjoint pairing <psi, phi> = conj(psi(0))^T phi(0)
///   - sum over masses of int_0^{-lag} conj(psi(xi+lag))^T M phi(xi) dxi,
/// evaluated in closed form (all integrands are exponentials).
cx bilinear(const ExpProfile& phi, const ExpProfile& psi, const EtaMeasure& eta);

/// Eigenvector of the generator at lambda1 = i*omega together with the
/// normalized adjoint eigenvector: <h*, h> = 1, <h*, conj(h)> = 0.
struct EigPair {
    std::vector<cx> h;       // phase-space eigenvector coordinates
    std::vector<cx> h_star;  // adjoint coordinates after normalization
    cx lambda1;
    KernelCase kcase = KernelCase::DD;
    double eig_residual_h = 0.0;      // || M(lambda1) h ||_inf
    double eig_residual_h_star = 0.0; // || M(lambda2)^T h* ||_inf (unnormalized scale)
    cx pairing_hh;     // <h*, h>, should be 1 after normalization
    cx pairing_hhbar;  // <h*, conj(h)>, should be 0
};

/// `phase` multiplies both h and h* by e^(i*phase); the pairing is unchanged
/// and the Hopf quantities must be invariant (used by the re-phasing test).
EigPair eig_pair_dd(const model::ModelParams& p, const HopfPoint& hp,
                    double tau2, double phase = 0.0, const Tolerances& tol = {});
EigPair eig_pair_dw(const model::ModelParams& p, const HopfPoint& hp,
                    double q2, double phase = 0.0, const Tolerances& tol = {});

/// w20 / w11 on the center manifold: two eigen-profile pieces plus the
/// E-vector piece (e^(2 lambda1 theta) for w20, constant for w11).
struct WFunction {
    ExpProfile profile;
    std::vector<cx> eval(double theta) const { return profile.eval(theta); }
};

struct GCoeffs {
    cx g20, g11, g02, g21;
    // second-order Taylor terms of the nonlinearity per component
    cx f120, f220, f111, f211, f102, f202;
    cx f121, f221; // third-order terms entering g21
    WFunction w20, w11;
    std::vector<cx> E1, E2;
    double e1_residual = 0.0; // closed form vs direct solve, inf norm
    double e2_residual = 0.0;
    double e1_system_residual = 0.0; // ||M(2*lambda1) E1 - f20||_inf
    double e2_system_residual = 0.0;
};

GCoeffs g_coeffs_dd(const model::ModelParams& p, const EigPair& pair,
                    const HopfPoint& hp, double tau2,
                    bool zero_nonlinear = false);
GCoeffs g_coeffs_dw(const model::ModelParams& p, const EigPair& pair,
                    const HopfPoint& hp, double q2,
                    bool zero_nonlinear = false);

struct NormalFormResult {
    cx C1;          // first Lyapunov-type coefficient
    cx lambda_prime;
    double mu2 = 0.0;    // bifurcation direction
    double beta2 = 0.0;  // orbital stability of the periodic solutions
    double T2 = 0.0;     // period trend
    std::string direction;  // "supercritical" | "subcritical" | "degenerate"
    std::string stability;  // "orbitally stable" | "orbitally unstable" | "degenerate"
    std::string period;     // "period increases" | "period decreases" | "degenerate"
};

/// Assembles C1(0), mu2, beta2, T2 and the qualitative verdicts from the
/// g-coefficients, the crossing speed and the crossing frequency.
NormalFormResult hopf_quantities(const GCoeffs& g, cx lambda_prime, double omega);

/// d(lambda)/d(tau1) at the crossing via the closed-form quotient
/// (numerator and denominator evaluated directly in complex arithmetic;
/// an algebraically independent route from the l1/l2 - m1/m2 expansions).
cx lambda_prime_dd(const model::ModelParams& p, const HopfPoint& hp, double tau2);
cx lambda_prime_dw(const model::ModelParams& p, const HopfPoint& hp, double q2);

} // namespace tumordde::normalform

#endif
