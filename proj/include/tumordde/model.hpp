#ifndef TUMORDDE_MODEL_HPP
#define TUMORDDE_MODEL_HPP

#include <utility>

#include "tumordde/common.hpp"
#include "tumordde/smallmat.hpp"

namespace tumordde::model {

/// The six positive rates of the tumour-immune model
///   x' = a1*x - a2*x*y
///   y' = b1*[k1*x](t)*[k2*y](t) - b2*x - b3*y + b4
/// where [k*u](t) is the delay-kernel average of u.
struct ModelParams {
    double a1; // malignant growth rate (1/time)
    double a2; // kill rate per lymphocyte (1/(cells*time))
    double b1; // recognition/interaction rate (1/(cells*time))
    double b2; // immunodepression rate (1/time)
    double b3; // lymphocyte natural death rate (1/time)
    double b4; // lymphocyte influx (cells/time)
};

/// The parameter set used throughout the reproduction suite.
inline ModelParams reference_params() { return {2.5, 1.0, 1.0, 0.4, 0.95, 2.0}; }

/// Throws ValidationError naming the first nonpositive field.
void validate_positive(const ModelParams& p);

/// True iff b2/b1 < b4/b3 < a1/a2 (both strict). Positivity is checked first.
bool check_admissible(const ModelParams& p);

/// Throws ValidationError (with the violated inequality) unless admissible.
void require_admissible(const ModelParams& p);

/// Delay kernel: Dirac mass at a fixed lag, or a normalized gamma density
/// k(s) = q^(p+1) s^p e^(-q s) / p! of integer order p >= 0 ("weak" is p = 0).
struct KernelSpec {
    enum class Kind { dirac, gamma };
    Kind kind = Kind::dirac;
    double tau = 0.0;  // dirac lag, >= 0
    int order = 0;     // gamma p
    double rate = 1.0; // gamma q, > 0

    static KernelSpec dirac(double tau);
    static KernelSpec gamma(int order, double rate);

    /// Density value for the gamma kernel; rejects Dirac (not a function).
    double density(double s) const;
    double mean_lag() const; // tau, or (p+1)/q
};

struct Equilibrium {
    double x = 0.0;
    double y = 0.0;
    enum class Label { L0, L1 } label = Label::L0;
};

/// Both equilibria of the delayed system. First is the interior point
/// L0 = ((b3 a1 - b4 a2)/(a1 b1 - a2 b2), a1/a2), second L1 = (0, b4/b3).
std::pair<Equilibrium, Equilibrium> equilibria(const ModelParams& p);

/// Right-hand side of the discrete-delay system in original coordinates:
///   dx = a1*x - a2*x*y
///   dy = b1*x(t-tau1)*y(t-tau2) - b2*x - b3*y + b4
Vec2 rhs_original(const ModelParams& p, double x, double y,
                  double x_lag, double y_lag);

/// Right-hand side of the system translated about L0 (x1 = x - x0,
/// x2 = y - y0), Dirac kernels with the lagged values supplied by the caller.
Vec2 rhs_translated(const ModelParams& p, const Equilibrium& L0,
                    double x1, double x2, double x1_lag1, double x2_lag2);

/// Right-hand side of the 3-dimensional chain system (weak kernel on y,
/// discrete lag tau1 on x), in translated coordinates:
///   dx1 = -a2*x0*x2 - a2*x1*x2
///   dx2 = -b2*x1 - b3*x2 + b1*x0*x3 + b1*y0*x1(t-tau1) + b1*x3*x1(t-tau1)
///   dx3 = q2*(x2 - x3)
/// Comparison runs that delay x2 instead feed x2(t-tau1) through the
/// x1_lag_tau1 slot; the algebraic form is unchanged.
Vec3 rhs_chain(const ModelParams& p, const Equilibrium& L0, double q2,
               double x1, double x2, double x3, double x1_lag_tau1);

/// Linear part of rhs_translated at the origin: U' = A U + B1 U(t-tau1) + B2 U(t-tau2).
struct LinearizationDD {
    Mat2 A, B1, B2;
};
LinearizationDD linearize_dd(const ModelParams& p, const Equilibrium& L0);

/// Linear part of the chain system: V' = A1 V + C1 V(t-tau1).
struct LinearizationDW {
    Mat3 A1, C1;
};
LinearizationDW linearize_dw(const ModelParams& p, const Equilibrium& L0,
                             double q2, bool as_printed = false);

} // namespace tumordde::model

#endif
