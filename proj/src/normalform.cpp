#include "tumordde/normalform.hpp"

#include <cmath>
#include <sstream>

namespace tumordde::normalform {

namespace {

const cx kI(0.0, 1.0);

std::vector<std::vector<cx>> to_cx(const Mat2& m) {
    return {{cx(m[0][0]), cx(m[0][1])}, {cx(m[1][0]), cx(m[1][1])}};
}

std::vector<std::vector<cx>> to_cx(const Mat3& m) {
    return {{cx(m[0][0]), cx(m[0][1]), cx(m[0][2])},
            {cx(m[1][0]), cx(m[1][1]), cx(m[1][2])},
            {cx(m[2][0]), cx(m[2][1]), cx(m[2][2])}};
}

/// lambda*I - A - B1 e^(-lambda tau1) - B2 e^(-lambda tau2)
CMat2 char_matrix_dd(const model::ModelParams& p, const model::Equilibrium& L0,
                     double tau1, double tau2, cx lambda) {
    const auto lin = model::linearize_dd(p, L0);
    const cx e1 = std::exp(-lambda * tau1), e2 = std::exp(-lambda * tau2);
    CMat2 m{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            m[i][j] = (i == j ? lambda : cx(0.0))
                    - lin.A[i][j] - e1 * lin.B1[i][j] - e2 * lin.B2[i][j];
    return m;
}

/// lambda*I - A1 - C1 e^(-lambda tau1), corrected chain linearization
CMat3 char_matrix_dw(const model::ModelParams& p, const model::Equilibrium& L0,
                     double q2, double tau1, cx lambda) {
    const auto lin = model::linearize_dw(p, L0, q2);
    const cx e1 = std::exp(-lambda * tau1);
    CMat3 m{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            m[i][j] = (i == j ? lambda : cx(0.0))
                    - lin.A1[i][j] - e1 * lin.C1[i][j];
    return m;
}

template <std::size_t N>
double matvec_residual(const Mat<cx, N>& m, const std::vector<cx>& v) {
    double r = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        cx acc{};
        for (std::size_t j = 0; j < N; ++j) acc += m[i][j] * v[j];
        r = std::max(r, std::abs(acc));
    }
    return r;
}

template <std::size_t N>
Mat<cx, N> transpose(const Mat<cx, N>& m) {
    Mat<cx, N> t{};
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) t[j][i] = m[i][j];
    return t;
}

model::Equilibrium interior(const model::ModelParams& p) {
    return model::equilibria(p).first;
}

ExpProfile single_piece(cx mu, const std::vector<cx>& vec) {
    ExpProfile f;
    f.pieces.push_back({mu, vec});
    return f;
}

cx project(const std::vector<cx>& h_star, cx f1, cx f2, cx f3 = cx(0.0)) {
    cx acc = std::conj(h_star[0]) * f1 + std::conj(h_star[1]) * f2;
    if (h_star.size() > 2) acc += std::conj(h_star[2]) * f3;
    return acc;
}

} // namespace

std::vector<cx> ExpProfile::eval(double theta) const {
    std::vector<cx> out(dim(), cx(0.0));
    for (const auto& piece : pieces) {
        const cx e = std::exp(piece.mu * theta);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += e * piece.vec[i];
    }
    return out;
}

ExpProfile ExpProfile::conjugated() const {
    ExpProfile out;
    for (const auto& piece : pieces) {
        std::vector<cx> v(piece.vec.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::conj(piece.vec[i]);
        out.pieces.push_back({std::conj(piece.mu), v});
    }
    return out;
}

ExpProfile ExpProfile::scaled(cx factor) const {
    ExpProfile out = *this;
    for (auto& piece : out.pieces)
        for (auto& c : piece.vec) c *= factor;
    return out;
}

EtaMeasure eta_measure_dd(const model::ModelParams& p, double tau1, double tau2) {
    const auto lin = model::linearize_dd(p, interior(p));
    EtaMeasure eta;
    eta.masses.push_back({0.0, to_cx(lin.A)});
    eta.masses.push_back({tau1, to_cx(lin.B1)});
    eta.masses.push_back({tau2, to_cx(lin.B2)});
    eta.tau_max = std::max(tau1, tau2);
    return eta;
}

EtaMeasure eta_measure_dw(const model::ModelParams& p, double q2, double tau1) {
    const auto lin = model::linearize_dw(p, interior(p), q2);
    EtaMeasure eta;
    eta.masses.push_back({0.0, to_cx(lin.A1)});
    eta.masses.push_back({tau1, to_cx(lin.C1)});
    eta.tau_max = tau1;
    return eta;
}

cx bilinear(const ExpProfile& phi, const ExpProfile& psi, const EtaMeasure& eta) {
    const std::size_t n = phi.dim();
    if (n != psi.dim() || n == 0)
        throw ValidationError("bilinear: dimension mismatch");

    const auto phi0 = phi.eval(0.0);
    const auto psi0 = psi.eval(0.0);
    cx value{};
    for (std::size_t i = 0; i < n; ++i) value += std::conj(psi0[i]) * phi0[i];

    for (const auto& mass : eta.masses) {
        const double t = mass.lag;
        if (t < 0.0 || t > eta.tau_max + 1e-12)
            throw ValidationError("bilinear: mass lag outside [0, tau_max]");
        if (t == 0.0) continue; // inner integral over an empty interval
        for (const auto& pp : psi.pieces) {
            const cx bbar = std::conj(pp.mu);
            for (const auto& qp : phi.pieces) {
                cx coeff{};
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        coeff += std::conj(pp.vec[i]) * mass.matrix[i][j] * qp.vec[j];
                const cx s = qp.mu + bbar;
                cx integral;
                if (std::abs(s) < 1e-14)
                    integral = cx(-t);
                else
                    integral = (std::exp(-s * t) - 1.0) / s;
                value -= coeff * std::exp(bbar * t) * integral;
            }
        }
    }
    return value;
}

namespace {

EigPair finish_pair(std::vector<cx> v, std::vector<cx> u, cx lambda1,
                    KernelCase kcase, double phase, const EtaMeasure& eta,
                    double res_h, double res_hstar_raw) {
    const cx rot = std::exp(kI * phase);
    for (auto& c : v) c *= rot;

    const ExpProfile h = single_piece(lambda1, v);
    const ExpProfile psi_raw = single_piece(lambda1, u);
    const cx b0 = bilinear(h, psi_raw, eta);
    if (std::abs(b0) < 1e-12)
        throw NumericError(NumericError::Kind::SingularEigenvector,
                           "eigenvector pairing <h*,h> is numerically zero");
    const cx scale = cx(1.0) / std::conj(b0); // note: h already carries the phase
    std::vector<cx> w = u;
    for (auto& c : w) c *= scale;

    EigPair pair;
    pair.h = v;
    pair.h_star = w;
    pair.lambda1 = lambda1;
    pair.kcase = kcase;
    pair.eig_residual_h = res_h;
    pair.eig_residual_h_star = res_hstar_raw * std::abs(scale);
    const ExpProfile psi = single_piece(lambda1, w);
    pair.pairing_hh = bilinear(h, psi, eta);
    pair.pairing_hhbar = bilinear(h.conjugated(), psi, eta);
    return pair;
}

} // namespace

EigPair eig_pair_dd(const model::ModelParams& p, const HopfPoint& hp,
                    double tau2, double phase, const Tolerances& tol) {
    if (hp.kcase != KernelCase::DD)
        throw ValidationError("eig_pair_dd needs a DD-case Hopf point");
    if (hp.residual_delta > tol.residual)
        throw ValidationError("Hopf point is not certified");
    const auto L0 = interior(p);
    const double x0 = L0.x;
    const double tau1 = hp.tau_crit;
    const cx lambda1(0.0, hp.omega);
    const cx lambda2 = std::conj(lambda1);

    const cx denom = p.a2 * (p.b3 + lambda1 - p.b1 * x0 * std::exp(lambda2 * tau2));
    if (std::abs(denom) < 1e-12)
        throw NumericError(NumericError::Kind::SingularEigenvector,
                           "eigenvector denominator b3 + lambda1 - b1 x0 e^(lambda2 tau2) vanishes");
    const cx v2 = (p.a1 * p.b1 * std::exp(lambda2 * tau1) - p.a2 * p.b2) / denom;
    std::vector<cx> v = {cx(1.0), v2};

    const cx f1 = (p.a2 * p.b2 - p.a1 * p.b1 * std::exp(lambda1 * tau1))
                / (p.a2 * lambda1);
    std::vector<cx> u = {f1, cx(1.0)};

    const auto m1 = char_matrix_dd(p, L0, tau1, tau2, lambda1);
    const auto m2t = transpose(char_matrix_dd(p, L0, tau1, tau2, lambda2));
    return finish_pair(std::move(v), std::move(u), lambda1, KernelCase::DD,
                       phase, eta_measure_dd(p, tau1, tau2),
                       matvec_residual(m1, {cx(1.0), v2}),
                       matvec_residual(m2t, u));
}

EigPair eig_pair_dw(const model::ModelParams& p, const HopfPoint& hp,
                    double q2, double phase, const Tolerances& tol) {
    if (hp.kcase != KernelCase::DW)
        throw ValidationError("eig_pair_dw needs a DW-case Hopf point");
    if (hp.residual_delta > tol.residual)
        throw ValidationError("Hopf point is not certified");
    const auto L0 = interior(p);
    const double x0 = L0.x;
    const double tau1 = hp.tau_crit;
    const cx lambda1(0.0, hp.omega);
    const cx lambda2 = std::conj(lambda1);

    if (std::abs(lambda2) < 1e-12 || std::abs(lambda2 + q2) < 1e-12)
        throw NumericError(NumericError::Kind::SingularEigenvector,
                           "adjoint eigenvector denominator vanishes");

    const cx v2 = -p.b2 * (lambda1 + q2);
    const cx v3 = -p.b2 * q2;
    const cx v1 = p.a2 * p.b2 * x0 * (lambda1 + q2) / lambda1;
    std::vector<cx> v = {v1, v2, v3};

    const cx f1 = (p.a1 * p.b1 * std::exp(lambda1 * tau1) - p.a2 * p.b2)
                / (p.a2 * lambda2);
    const cx f3 = p.b1 * x0 / (lambda2 + q2);
    std::vector<cx> u = {f1, cx(1.0), f3};

    const auto m1 = char_matrix_dw(p, L0, q2, tau1, lambda1);
    const auto m2t = transpose(char_matrix_dw(p, L0, q2, tau1, lambda2));
    return finish_pair(std::move(v), std::move(u), lambda1, KernelCase::DW,
                       phase, eta_measure_dw(p, q2, tau1),
                       matvec_residual(m1, v), matvec_residual(m2t, u));
}

namespace {

struct WPieces {
    WFunction w20, w11;
};

/// w20' = 2 lambda1 w20 + g20 h + conj(g02) hbar,
/// w11' = g11 h + conj(g11) hbar, solved with the E-vector particular parts.
WPieces build_w(const std::vector<cx>& v, cx lambda1, cx g20, cx g11, cx g02,
                const std::vector<cx>& E1, const std::vector<cx>& E2) {
    const cx lambda2 = std::conj(lambda1);
    std::vector<cx> vbar(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) vbar[i] = std::conj(v[i]);

    auto scale_vec = [](const std::vector<cx>& vec, cx s) {
        std::vector<cx> out = vec;
        for (auto& c : out) c *= s;
        return out;
    };

    WPieces w;
    w.w20.profile.pieces.push_back({lambda1, scale_vec(v, -g20 / lambda1)});
    w.w20.profile.pieces.push_back(
        {lambda2, scale_vec(vbar, -std::conj(g02) / (3.0 * lambda1))});
    w.w20.profile.pieces.push_back({2.0 * lambda1, E1});

    w.w11.profile.pieces.push_back({lambda1, scale_vec(v, g11 / lambda1)});
    w.w11.profile.pieces.push_back({lambda2, scale_vec(vbar, -std::conj(g11) / lambda1)});
    w.w11.profile.pieces.push_back({cx(0.0), E2});
    return w;
}

} // namespace

GCoeffs g_coeffs_dd(const model::ModelParams& p, const EigPair& pair,
                    const HopfPoint& hp, double tau2, bool zero_nonlinear) {
    const auto L0 = interior(p);
    const double x0 = L0.x, y0 = L0.y;
    const double tau1 = hp.tau_crit;
    const cx lambda1 = pair.lambda1;
    const cx lambda2 = std::conj(lambda1);
    const cx v1 = pair.h[0], v2 = pair.h[1];

    GCoeffs g;
    if (!zero_nonlinear) {
        g.f120 = -2.0 * p.a2 * v1 * v2;
        g.f111 = cx(-2.0 * p.a2 * std::real(v1 * std::conj(v2)));
        g.f102 = std::conj(g.f120);
        g.f220 = 2.0 * p.b1 * v1 * v2 * std::exp(lambda2 * (tau1 + tau2));
        g.f211 = cx(2.0 * p.b1
                    * std::real(v1 * std::conj(v2)
                                * std::exp(lambda1 * tau2 + lambda2 * tau1)));
        g.f202 = std::conj(g.f220);
    }
    g.g20 = project(pair.h_star, g.f120, g.f220);
    g.g11 = project(pair.h_star, g.f111, g.f211);
    g.g02 = project(pair.h_star, g.f102, g.f202);

    // E1 solves M(2 lambda1) E1 = (f120, f220)^T
    const cx two = 2.0 * lambda1;
    const cx e1lag1 = std::exp(-two * tau1), e1lag2 = std::exp(-two * tau2);
    CMat2 m1{};
    m1[0][0] = two;
    m1[0][1] = cx(p.a2 * x0);
    m1[1][0] = cx(p.b2) - p.b1 * y0 * e1lag1;
    m1[1][1] = two + p.b3 - p.b1 * x0 * e1lag2;
    const cx det1 = det2(m1);
    if (std::abs(det1) < 1e-12)
        throw NumericError(NumericError::Kind::SingularE,
                           "E1 system determinant det M(2 lambda1) vanishes");
    std::vector<cx> E1 = {(g.f120 * m1[1][1] - m1[0][1] * g.f220) / det1,
                          (m1[0][0] * g.f220 - m1[1][0] * g.f120) / det1};
    {
        const CVec2 direct = solve_dense(m1, CVec2{g.f120, g.f220});
        g.e1_residual = std::max(std::abs(E1[0] - direct[0]),
                                 std::abs(E1[1] - direct[1]));
        g.e1_system_residual = residual_inf(m1, CVec2{E1[0], E1[1]},
                                            CVec2{g.f120, g.f220});
    }

    // E2 solves M(0) E2 = (f111, f211)^T
    CMat2 m0{};
    m0[0][0] = cx(0.0);
    m0[0][1] = cx(p.a2 * x0);
    m0[1][0] = cx(p.b2 - p.b1 * y0);
    m0[1][1] = cx(p.b3 - p.b1 * x0);
    if (std::abs(m0[1][0]) < 1e-12 || p.a2 * x0 < 1e-300)
        throw NumericError(NumericError::Kind::SingularE,
                           "E2 system pivot b2 - b1 y0 vanishes");
    std::vector<cx> E2(2);
    E2[1] = g.f111 / (p.a2 * x0);
    E2[0] = (g.f211 - (p.b3 - p.b1 * x0) * E2[1]) / (p.b2 - p.b1 * y0);
    {
        const CVec2 direct = solve_dense(m0, CVec2{g.f111, g.f211});
        g.e2_residual = std::max(std::abs(E2[0] - direct[0]),
                                 std::abs(E2[1] - direct[1]));
        g.e2_system_residual = residual_inf(m0, CVec2{E2[0], E2[1]},
                                            CVec2{g.f111, g.f211});
    }

    g.E1 = E1;
    g.E2 = E2;
    const auto w = build_w(pair.h, lambda1, g.g20, g.g11, g.g02, E1, E2);
    g.w20 = w.w20;
    g.w11 = w.w11;

    if (!zero_nonlinear) {
        const auto w20_0 = g.w20.eval(0.0);
        const auto w11_0 = g.w11.eval(0.0);
        const auto w20_t2 = g.w20.eval(-tau2);
        const auto w11_t2 = g.w11.eval(-tau2);
        const auto w20_t1 = g.w20.eval(-tau1);
        const auto w11_t1 = g.w11.eval(-tau1);
        g.f121 = -p.a2 * (2.0 * v1 * w11_0[1] + std::conj(v1) * w20_0[1]
                          + 2.0 * v2 * w11_0[0] + std::conj(v2) * w20_0[0]);
        g.f221 = p.b1 * (2.0 * v1 * std::exp(lambda2 * tau1) * w11_t2[1]
                         + std::conj(v1) * std::exp(lambda1 * tau1) * w20_t2[1]
                         + 2.0 * v2 * std::exp(lambda2 * tau2) * w11_t1[0]
                         + std::conj(v2) * std::exp(lambda1 * tau2) * w20_t1[0]);
    }
    g.g21 = project(pair.h_star, g.f121, g.f221);
    return g;
}

GCoeffs g_coeffs_dw(const model::ModelParams& p, const EigPair& pair,
                    const HopfPoint& hp, double q2, bool zero_nonlinear) {
    const auto L0 = interior(p);
    const double x0 = L0.x, y0 = L0.y;
    const double tau1 = hp.tau_crit;
    const cx lambda1 = pair.lambda1;
    const cx lambda2 = std::conj(lambda1);
    const cx v1 = pair.h[0], v2 = pair.h[1], v3 = pair.h[2];

    GCoeffs g;
    if (!zero_nonlinear) {
        g.f120 = -2.0 * p.a2 * v1 * v2;
        g.f111 = cx(-2.0 * p.a2 * std::real(v1 * std::conj(v2)));
        g.f102 = std::conj(g.f120);
        g.f220 = 2.0 * p.b1 * v1 * v3 * std::exp(lambda2 * tau1);
        g.f211 = cx(2.0 * p.b1
                    * std::real(v1 * std::conj(v3) * std::exp(lambda2 * tau1)));
        g.f202 = std::conj(g.f220);
    }
    g.g20 = project(pair.h_star, g.f120, g.f220);
    g.g11 = project(pair.h_star, g.f111, g.f211);
    g.g02 = project(pair.h_star, g.f102, g.f202);

    const cx two = 2.0 * lambda1;
    const cx elag = std::exp(-two * tau1);
    CMat3 m1{};
    m1[0][0] = two;
    m1[0][1] = cx(p.a2 * x0);
    m1[1][0] = cx(p.b2) - p.b1 * y0 * elag;
    m1[1][1] = two + p.b3;
    m1[1][2] = cx(-p.b1 * x0);
    m1[2][1] = cx(-q2);
    m1[2][2] = two + q2;
    const CVec3 rhs1{g.f120, g.f220, cx(0.0)};
    const cx det1 = det3(m1);
    if (std::abs(det1) < 1e-12)
        throw NumericError(NumericError::Kind::SingularE,
                           "E1 system determinant det M(2 lambda1) vanishes");
    std::vector<cx> E1(3);
    {
        // Cramer closed form: replace each column by the right-hand side
        for (int col = 0; col < 3; ++col) {
            CMat3 mm = m1;
            for (int r = 0; r < 3; ++r) mm[r][col] = rhs1[r];
            E1[col] = det3(mm) / det1;
        }
        const CVec3 direct = solve_dense(m1, rhs1);
        g.e1_residual = 0.0;
        for (int i = 0; i < 3; ++i)
            g.e1_residual = std::max(g.e1_residual, std::abs(E1[i] - direct[i]));
        g.e1_system_residual = residual_inf(m1, CVec3{E1[0], E1[1], E1[2]}, rhs1);
    }

    CMat3 m0{};
    m0[0][1] = cx(p.a2 * x0);
    m0[1][0] = cx(p.b2 - p.b1 * y0);
    m0[1][1] = cx(p.b3);
    m0[1][2] = cx(-p.b1 * x0);
    m0[2][1] = cx(-q2);
    m0[2][2] = cx(q2);
    if (std::abs(m0[1][0]) < 1e-12)
        throw NumericError(NumericError::Kind::SingularE,
                           "E2 system pivot b2 - b1 y0 vanishes");
    std::vector<cx> E2(3);
    E2[1] = g.f111 / (p.a2 * x0);
    E2[2] = E2[1]; // third chain row forces E23 = E22
    E2[0] = (g.f211 - (p.b3 - p.b1 * x0) * E2[1]) / (p.b2 - p.b1 * y0);
    {
        const CVec3 rhs0{g.f111, g.f211, cx(0.0)};
        const CVec3 direct = solve_dense(m0, rhs0);
        g.e2_residual = 0.0;
        for (int i = 0; i < 3; ++i)
            g.e2_residual = std::max(g.e2_residual, std::abs(E2[i] - direct[i]));
        g.e2_system_residual = residual_inf(m0, CVec3{E2[0], E2[1], E2[2]}, rhs0);
    }

    g.E1 = E1;
    g.E2 = E2;
    const auto w = build_w(pair.h, lambda1, g.g20, g.g11, g.g02, E1, E2);
    g.w20 = w.w20;
    g.w11 = w.w11;

    if (!zero_nonlinear) {
        const auto w20_0 = g.w20.eval(0.0);
        const auto w11_0 = g.w11.eval(0.0);
        const auto w20_t1 = g.w20.eval(-tau1);
        const auto w11_t1 = g.w11.eval(-tau1);
        g.f121 = -p.a2 * (2.0 * v1 * w11_0[1] + std::conj(v1) * w20_0[1]
                          + 2.0 * v2 * w11_0[0] + std::conj(v2) * w20_0[0]);
        g.f221 = p.b1 * (2.0 * v3 * w11_t1[0] + std::conj(v3) * w20_t1[0]
                         + 2.0 * v1 * std::exp(lambda2 * tau1) * w11_0[2]
                         + std::conj(v1) * std::exp(lambda1 * tau1) * w20_0[2]);
    }
    g.g21 = project(pair.h_star, g.f121, g.f221);
    return g;
}

NormalFormResult hopf_quantities(const GCoeffs& g, cx lambda_prime, double omega) {
    if (!(omega > 0.0)) throw ValidationError("omega must be > 0");
    NormalFormResult r;
    r.lambda_prime = lambda_prime;
    r.C1 = kI / (2.0 * omega)
             * (g.g20 * g.g11 - 2.0 * std::norm(g.g11)
                - std::norm(g.g02) / 3.0)
         + g.g21 / 2.0;
    if (lambda_prime.real() == 0.0)
        throw NumericError(NumericError::Kind::DegenerateTransversality,
                           "Re d(lambda)/d(tau1) vanishes at the crossing");
    r.mu2 = -r.C1.real() / lambda_prime.real();
    r.beta2 = 2.0 * r.C1.real();
    r.T2 = -(r.C1.imag() + r.mu2 * lambda_prime.imag()) / omega;
    r.direction = r.mu2 > 0.0 ? "supercritical"
                : r.mu2 < 0.0 ? "subcritical" : "degenerate";
    r.stability = r.beta2 < 0.0 ? "orbitally stable"
                : r.beta2 > 0.0 ? "orbitally unstable" : "degenerate";
    r.period = r.T2 > 0.0 ? "period increases"
             : r.T2 < 0.0 ? "period decreases" : "degenerate";
    return r;
}

cx lambda_prime_dd(const model::ModelParams& p, const HopfPoint& hp, double tau2) {
    const double x0 = interior(p).x;
    const cx lambda(0.0, hp.omega);
    const double tau1 = hp.tau_crit;
    const cx elag1 = std::exp(-lambda * tau1), elag2 = std::exp(-lambda * tau2);
    const cx num = p.a1 * p.b1 * x0 * lambda * elag1;
    const cx den = p.b3 + 2.0 * lambda - p.a1 * p.b1 * x0 * tau1 * elag1
                 - p.b1 * x0 * (1.0 - lambda * tau2) * elag2;
    if (std::abs(den) < 1e-12)
        throw NumericError(NumericError::Kind::ZeroDenominator,
                           "d(lambda)/d(tau1) denominator vanishes");
    return num / den;
}

cx lambda_prime_dw(const model::ModelParams& p, const HopfPoint& hp, double q2) {
    const auto c = chareq::CharCaseDW::make(p, hp.tau_crit, q2);
    const cx lambda(0.0, hp.omega);
    const cx elag = std::exp(-lambda * c.tau1);
    const cx num = lambda * (c.r1 * lambda + c.r0) * elag;
    const cx den = 3.0 * lambda * lambda + 2.0 * c.p2 * lambda + c.p1
                 + (c.r1 - c.tau1 * (c.r1 * lambda + c.r0)) * elag;
    if (std::abs(den) < 1e-12)
        throw NumericError(NumericError::Kind::ZeroDenominator,
                           "d(lambda)/d(tau1) denominator vanishes");
    return num / den;
}

} // namespace tumordde::normalform
