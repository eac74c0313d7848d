#include "tumordde/model.hpp"

#include <cmath>
#include <sstream>

namespace tumordde::model {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0)) {
        std::ostringstream os;
        os << "parameter " << name << " must be strictly positive, got " << v;
        throw ValidationError(os.str());
    }
}

} // namespace

void validate_positive(const ModelParams& p) {
    require_positive(p.a1, "a1");
    require_positive(p.a2, "a2");
    require_positive(p.b1, "b1");
    require_positive(p.b2, "b2");
    require_positive(p.b3, "b3");
    require_positive(p.b4, "b4");
}

bool check_admissible(const ModelParams& p) {
    validate_positive(p);
    return p.b2 / p.b1 < p.b4 / p.b3 && p.b4 / p.b3 < p.a1 / p.a2;
}

void require_admissible(const ModelParams& p) {
    validate_positive(p);
    std::ostringstream os;
    if (!(p.b2 / p.b1 < p.b4 / p.b3)) {
        os << "parameters not admissible: b2/b1 = " << p.b2 / p.b1
           << " must be < b4/b3 = " << p.b4 / p.b3;
        throw ValidationError(os.str());
    }
    if (!(p.b4 / p.b3 < p.a1 / p.a2)) {
        os << "parameters not admissible: b4/b3 = " << p.b4 / p.b3
           << " must be < a1/a2 = " << p.a1 / p.a2;
        throw ValidationError(os.str());
    }
}

KernelSpec KernelSpec::dirac(double tau) {
    if (tau < 0.0) throw ValidationError("dirac kernel lag must be >= 0");
    KernelSpec k;
    k.kind = Kind::dirac;
    k.tau = tau;
    return k;
}

KernelSpec KernelSpec::gamma(int order, double rate) {
    if (order < 0) throw ValidationError("gamma kernel order must be >= 0");
    if (!(rate > 0.0)) throw ValidationError("gamma kernel rate must be > 0");
    KernelSpec k;
    k.kind = Kind::gamma;
    k.order = order;
    k.rate = rate;
    return k;
}

double KernelSpec::density(double s) const {
    if (kind == Kind::dirac)
        throw ValidationError("dirac kernel has no pointwise density");
    if (s < 0.0) return 0.0;
    double logf = (order + 1) * std::log(rate) + order * (s > 0.0 ? std::log(s) : 0.0)
                - rate * s - std::lgamma(order + 1.0);
    if (order > 0 && s == 0.0) return 0.0;
    return std::exp(logf);
}

double KernelSpec::mean_lag() const {
    if (kind == Kind::dirac) return tau;
    return (order + 1) / rate;
}

std::pair<Equilibrium, Equilibrium> equilibria(const ModelParams& p) {
    require_admissible(p);
    const double denom = p.a1 * p.b1 - p.a2 * p.b2;
    if (denom == 0.0)
        throw ValidationError("a1*b1 = a2*b2: interior equilibrium undefined");
    Equilibrium L0{(p.b3 * p.a1 - p.b4 * p.a2) / denom, p.a1 / p.a2,
                   Equilibrium::Label::L0};
    Equilibrium L1{0.0, p.b4 / p.b3, Equilibrium::Label::L1};
    return {L0, L1};
}

Vec2 rhs_original(const ModelParams& p, double x, double y,
                  double x_lag, double y_lag) {
    return {p.a1 * x - p.a2 * x * y,
            p.b1 * x_lag * y_lag - p.b2 * x - p.b3 * y + p.b4};
}

Vec2 rhs_translated(const ModelParams& p, const Equilibrium& L0,
                    double x1, double x2, double x1_lag1, double x2_lag2) {
    const double x0 = L0.x, y0 = L0.y;
    return {-p.a2 * x0 * x2 - p.a2 * x1 * x2,
            -p.b2 * x1 - p.b3 * x2 + p.b1 * x0 * x2_lag2 + p.b1 * y0 * x1_lag1
                + p.b1 * x1_lag1 * x2_lag2};
}

Vec3 rhs_chain(const ModelParams& p, const Equilibrium& L0, double q2,
               double x1, double x2, double x3, double x1_lag_tau1) {
    if (!(q2 > 0.0)) throw ValidationError("chain rate q2 must be > 0");
    const double x0 = L0.x, y0 = L0.y;
    const double lagged = x1_lag_tau1;
    const double dx2 = -p.b2 * x1 - p.b3 * x2 + p.b1 * x0 * x3
                     + p.b1 * y0 * lagged + p.b1 * x3 * lagged;
    return {-p.a2 * x0 * x2 - p.a2 * x1 * x2, dx2, q2 * (x2 - x3)};
}

LinearizationDD linearize_dd(const ModelParams& p, const Equilibrium& L0) {
    const double x0 = L0.x, y0 = L0.y;
    LinearizationDD lin;
    lin.A = {{{0.0, -p.a2 * x0}, {-p.b2, -p.b3}}};
    lin.B1 = {{{0.0, 0.0}, {p.b1 * y0, 0.0}}};
    lin.B2 = {{{0.0, 0.0}, {0.0, p.b1 * x0}}};
    return lin;
}

LinearizationDW linearize_dw(const ModelParams& p, const Equilibrium& L0,
                             double q2, bool as_printed) {
    const double x0 = L0.x, y0 = L0.y;
    LinearizationDW lin;
    lin.A1 = {{{0.0, -p.a2 * x0, 0.0},
               {-p.b2, -p.b3, p.b1 * x0},
               {0.0, q2, -q2}}};
    lin.C1 = {{{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}}};
    if (as_printed)
        lin.C1[1][1] = p.b1 * y0; // delayed coefficient acting on x2
    else
        lin.C1[1][0] = p.b1 * y0; // delayed coefficient acting on x1
    return lin;
}

} // namespace tumordde::model
