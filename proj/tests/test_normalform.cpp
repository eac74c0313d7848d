#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tumordde/integrate.hpp"
#include "tumordde/normalform.hpp"

using namespace tumordde;
using namespace tumordde::normalform;

namespace {

const model::ModelParams kRef = model::reference_params();

chareq::HopfPoint dd_point() { return chareq::hopf_point_dd(kRef, 0.01); }
chareq::HopfPoint dw_point() { return chareq::hopf_point_dw(kRef, 0.1); }

/// theta = 0 jump relation of the w functions, checked against the measure:
///   factor * w(0) = sum_j M_j w(-lag_j) + fvec - gz h(0) - gzbar conj(h)(0)
double w_jump_residual(const WFunction& w, const EtaMeasure& eta, cx factor,
                       const std::vector<cx>& fvec, cx gz, cx gzbar,
                       const std::vector<cx>& v) {
    const auto w0 = w.eval(0.0);
    const std::size_t n = w0.size();
    std::vector<cx> rhs(n, cx(0.0));
    for (const auto& mass : eta.masses) {
        const auto wl = w.eval(-mass.lag);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                rhs[i] += mass.matrix[i][j] * wl[j];
    }
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const cx lhs = factor * w0[i];
        const cx r = rhs[i] + fvec[i] - gz * v[i] - gzbar * std::conj(v[i]);
        res = std::max(res, std::abs(lhs - r));
    }
    return res;
}

} // namespace

TEST_CASE("DD eigenpair: closed forms, residuals, biorthogonality") {
    const auto hp = dd_point();
    const auto pair = eig_pair_dd(kRef, hp, 0.01);

    CHECK(pair.h[0] == cx(1.0)); // v1 = 1 exactly
    CHECK(pair.eig_residual_h < 1e-8);
    CHECK(pair.eig_residual_h_star < 1e-8);
    CHECK(std::abs(pair.pairing_hh - cx(1.0)) < 1e-10);
    CHECK(std::abs(pair.pairing_hhbar) < 1e-8);

    // independent matrix residual from the published linearization
    const auto L0 = model::equilibria(kRef).first;
    const auto lin = model::linearize_dd(kRef, L0);
    const cx lam = pair.lambda1;
    const cx e1 = std::exp(-lam * hp.tau_crit), e2 = std::exp(-lam * 0.01);
    for (int i = 0; i < 2; ++i) {
        cx acc(0.0);
        for (int j = 0; j < 2; ++j)
            acc += ((i == j ? lam : cx(0.0)) - lin.A[i][j] - e1 * lin.B1[i][j]
                    - e2 * lin.B2[i][j]) * pair.h[j];
        CHECK(std::abs(acc) < 1e-8);
    }
}

TEST_CASE("DW eigenpair: printed components, residuals, biorthogonality") {
    const auto hp = dw_point();
    const double q2 = 0.1;
    const auto pair = eig_pair_dw(kRef, hp, q2);

    CHECK(pair.h[2] == cx(-kRef.b2 * q2)); // v3 = -b2 q2 exactly
    CHECK(std::abs(pair.h[1] - (-kRef.b2 * (pair.lambda1 + q2))) < 1e-14);
    CHECK(pair.eig_residual_h < 1e-8);
    CHECK(pair.eig_residual_h_star < 1e-8);
    CHECK(std::abs(pair.pairing_hh - cx(1.0)) < 1e-10);
    CHECK(std::abs(pair.pairing_hhbar) < 1e-8);
}

TEST_CASE("bilinear form structure") {
    const auto hp = dd_point();
    const auto pair = eig_pair_dd(kRef, hp, 0.01);
    const auto eta = eta_measure_dd(kRef, hp.tau_crit, 0.01);

    ExpProfile h, psi;
    h.pieces.push_back({pair.lambda1, pair.h});
    psi.pieces.push_back({pair.lambda1, pair.h_star});

    // sesquilinearity: linear in phi, conjugate-linear in psi
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        const cx cscale(dist(rng), dist(rng));
        const cx lhs = bilinear(h.scaled(cscale), psi, eta);
        const cx rhs = cscale * bilinear(h, psi, eta);
        CHECK(std::abs(lhs - rhs) < 1e-12 * (1.0 + std::abs(rhs)));
        const cx lhs2 = bilinear(h, psi.scaled(cscale), eta);
        const cx rhs2 = std::conj(cscale) * bilinear(h, psi, eta);
        CHECK(std::abs(lhs2 - rhs2) < 1e-12 * (1.0 + std::abs(rhs2)));
    }

    // with both lags zero the pairing collapses to conj(psi(0))^T phi(0)
    const auto eta0 = eta_measure_dd(kRef, 0.0, 0.0);
    const cx plain = std::conj(pair.h_star[0]) * pair.h[0]
                   + std::conj(pair.h_star[1]) * pair.h[1];
    CHECK(std::abs(bilinear(h, psi, eta0) - plain) < 1e-14);
}

TEST_CASE("DD g-coefficients: structure, E-vectors, w relations") {
    const auto hp = dd_point();
    const auto pair = eig_pair_dd(kRef, hp, 0.01);
    const auto g = g_coeffs_dd(kRef, pair, hp, 0.01);

    // conjugation structure carried by the f-terms
    CHECK(g.f102 == std::conj(g.f120));
    CHECK(g.f202 == std::conj(g.f220));
    CHECK(g.g02 == std::conj(g.f120) * std::conj(pair.h_star[0])
                 + std::conj(g.f220) * std::conj(pair.h_star[1]));

    CHECK(g.e1_residual < 1e-9);
    CHECK(g.e2_residual < 1e-9);
    CHECK(g.e1_system_residual < 1e-9);
    CHECK(g.e2_system_residual < 1e-9);

    // theta = 0 jump relations for w20 and w11
    const auto eta = eta_measure_dd(kRef, hp.tau_crit, 0.01);
    const cx two_l1 = 2.0 * pair.lambda1;
    const double r20 = w_jump_residual(g.w20, eta, two_l1, {g.f120, g.f220},
                                       g.g20, std::conj(g.g02), pair.h);
    const double r11 = w_jump_residual(g.w11, eta, cx(0.0), {g.f111, g.f211},
                                       g.g11, std::conj(g.g11), pair.h);
    CHECK(r20 < 1e-9);
    CHECK(r11 < 1e-9);
}

TEST_CASE("DW g-coefficients: structure, E-vectors, w relations") {
    const auto hp = dw_point();
    const auto pair = eig_pair_dw(kRef, hp, 0.1);
    const auto g = g_coeffs_dw(kRef, pair, hp, 0.1);

    CHECK(g.f102 == std::conj(g.f120));
    CHECK(g.f202 == std::conj(g.f220));
    CHECK(g.e1_residual < 1e-9);
    CHECK(g.e2_residual < 1e-9);
    CHECK(g.E2[2] == g.E2[1]); // chain row forces E23 = E22

    const auto eta = eta_measure_dw(kRef, 0.1, hp.tau_crit);
    const double r20 = w_jump_residual(g.w20, eta, 2.0 * pair.lambda1,
                                       {g.f120, g.f220, cx(0.0)},
                                       g.g20, std::conj(g.g02), pair.h);
    const double r11 = w_jump_residual(g.w11, eta, cx(0.0),
                                       {g.f111, g.f211, cx(0.0)},
                                       g.g11, std::conj(g.g11), pair.h);
    CHECK(r20 < 1e-9);
    CHECK(r11 < 1e-9);
}

TEST_CASE("zeroed nonlinearity gives all-zero quantities") {
    const auto hp = dd_point();
    const auto pair = eig_pair_dd(kRef, hp, 0.01);
    const auto g = g_coeffs_dd(kRef, pair, hp, 0.01, true);
    CHECK(g.g20 == cx(0.0));
    CHECK(g.g11 == cx(0.0));
    CHECK(g.g02 == cx(0.0));
    CHECK(g.g21 == cx(0.0));
    const auto nf = hopf_quantities(g, cx(hp.d_re, hp.d_im), hp.omega);
    CHECK(nf.C1 == cx(0.0));
    CHECK(nf.mu2 == 0.0);
    CHECK(nf.beta2 == 0.0);
    CHECK(nf.T2 == 0.0);
}

TEST_CASE("hopf_quantities identities and verdict logic") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int i = 0; i < 50; ++i) {
        GCoeffs g;
        g.g20 = {dist(rng), dist(rng)};
        g.g11 = {dist(rng), dist(rng)};
        g.g02 = {dist(rng), dist(rng)};
        g.g21 = {dist(rng), dist(rng)};
        const cx lp(dist(rng) > 0 ? 0.7 : -0.7, dist(rng));
        const auto nf = hopf_quantities(g, lp, 0.9);
        CHECK(nf.beta2 == 2.0 * nf.C1.real());
        CHECK(nf.mu2 == -nf.C1.real() / lp.real());
        CHECK(nf.T2 == -(nf.C1.imag() + nf.mu2 * lp.imag()) / 0.9);
    }
    // the sign combination printed for the first reproduction scenario:
    // mu2 > 0, beta2 > 0, T2 > 0
    GCoeffs g;
    g.g21 = cx(1.0, -10.0);       // C1 = (0.5, -5) => beta2 > 0
    const cx lp(-1.0, 0.0);       // mu2 = 0.5 > 0, T2 = 5/omega > 0
    const auto nf = hopf_quantities(g, lp, 1.0);
    CHECK(nf.mu2 > 0.0);
    CHECK(nf.beta2 > 0.0);
    CHECK(nf.T2 > 0.0);
    CHECK(nf.direction == "supercritical");
    CHECK(nf.stability == "orbitally unstable");
    CHECK(nf.period == "period increases");
}

TEST_CASE("lambda' routes agree: closed forms and continuation") {
    const auto hp = dd_point();
    const cx quo = lambda_prime_dd(kRef, hp, 0.01);
    const cx trig(hp.d_re, hp.d_im);
    CHECK(std::abs(quo - trig) < 1e-6 * std::abs(quo));

    auto c = chareq::CharCaseDD::make(kRef, hp.tau_crit, 0.01);
    auto delta = [&](cx lam, double tau) {
        auto cc = c;
        cc.tau1 = tau;
        return chareq::delta_dd(cc, lam);
    };
    auto dlam = [&](cx lam, double tau) {
        auto cc = c;
        cc.tau1 = tau;
        return chareq::delta_dd_dlambda(cc, lam);
    };
    const cx fd = oracles::fd_lambda_prime(delta, dlam, cx(0.0, hp.omega), hp.tau_crit);
    CHECK(std::abs(fd - quo) < 1e-3 * std::abs(quo));

    // conjugate symmetry of the quotient
    const cx lam2(0.0, -hp.omega);
    const cx num2 = kRef.a1 * kRef.b1 * c.x0 * lam2 * std::exp(-lam2 * hp.tau_crit);
    const cx den2 = chareq::delta_dd_dlambda(c, lam2);
    CHECK(std::abs(num2 / den2 - std::conj(quo)) < 1e-12);

    const auto hpw = dw_point();
    const cx quow = lambda_prime_dw(kRef, hpw, 0.1);
    CHECK(std::abs(quow - cx(hpw.d_re, hpw.d_im)) < 1e-6 * std::abs(quow));
}

TEST_CASE("normal-form quantities predict the orbit quantitatively") {
    // near onset the bifurcating orbit obeys
    //   amplitude_x ~= 2 |v1| sqrt((tau - tau_c)/mu2)
    //   period      ~= (2 pi / omega) (1 + T2 (tau - tau_c)/mu2)
    // which ties mu2 and T2 to an independent simulation
    const auto L0 = model::equilibria(kRef).first;
    const Vec2 L0pt{L0.x, L0.y};

    {
        const auto hp = dd_point();
        const auto pair = eig_pair_dd(kRef, hp, 0.01);
        const auto g = g_coeffs_dd(kRef, pair, hp, 0.01);
        const auto nf = hopf_quantities(g, lambda_prime_dd(kRef, hp, 0.01), hp.omega);
        REQUIRE(nf.mu2 > 0.0);
        const double tau = 1.04 * hp.tau_crit;
        const double eps2 = (tau - hp.tau_crit) / nf.mu2;
        const auto t = integrate::simulate_dd(kRef, tau, 0.01,
                                              integrate::HistorySpec::perturbed(),
                                              700.0, 2e-3);
        const auto s = integrate::summarize(t, L0pt, 1e-4);
        REQUIRE(s.amplitude.has_value());
        const double amp_pred = 2.0 * std::sqrt(eps2) * std::abs(pair.h[0]);
        CHECK(std::abs(*s.amplitude - amp_pred) < 0.06 * amp_pred);
        REQUIRE(s.period_estimate.has_value());
        const double per_pred = 2.0 * 3.14159265358979323846 / hp.omega
                              * (1.0 + nf.T2 * eps2);
        CHECK(std::abs(*s.period_estimate - per_pred) < 0.01 * per_pred);
    }
    {
        const auto hp = dw_point();
        const auto pair = eig_pair_dw(kRef, hp, 0.1);
        const auto g = g_coeffs_dw(kRef, pair, hp, 0.1);
        const auto nf = hopf_quantities(g, lambda_prime_dw(kRef, hp, 0.1), hp.omega);
        REQUIRE(nf.mu2 > 0.0);
        const double tau = 1.04 * hp.tau_crit;
        const double eps2 = (tau - hp.tau_crit) / nf.mu2;
        const auto t = integrate::simulate_chain(kRef, tau, 0.1,
                                                 integrate::HistorySpec::perturbed(),
                                                 700.0, 2e-3);
        const auto s = integrate::summarize(t, L0pt, 1e-4);
        REQUIRE(s.amplitude.has_value());
        const double amp_pred = 2.0 * std::sqrt(eps2) * std::abs(pair.h[0]);
        CHECK(std::abs(*s.amplitude - amp_pred) < 0.06 * amp_pred);
        REQUIRE(s.period_estimate.has_value());
        const double per_pred = 2.0 * 3.14159265358979323846 / hp.omega
                              * (1.0 + nf.T2 * eps2);
        CHECK(std::abs(*s.period_estimate - per_pred) < 0.01 * per_pred);
    }
}

TEST_CASE("|C1| is invariant under simultaneous re-phasing") {
    const auto hp = dd_point();
    const auto p0 = eig_pair_dd(kRef, hp, 0.01, 0.0);
    const auto p1 = eig_pair_dd(kRef, hp, 0.01, 3.14159265358979323846 / 3.0);
    const auto g0 = g_coeffs_dd(kRef, p0, hp, 0.01);
    const auto g1 = g_coeffs_dd(kRef, p1, hp, 0.01);
    const cx lp = lambda_prime_dd(kRef, hp, 0.01);
    const auto n0 = hopf_quantities(g0, lp, hp.omega);
    const auto n1 = hopf_quantities(g1, lp, hp.omega);
    CHECK(std::abs(std::abs(n0.C1) - std::abs(n1.C1)) < 1e-10 * std::abs(n0.C1));

    const auto hpw = dw_point();
    const auto q0 = eig_pair_dw(kRef, hpw, 0.1, 0.0);
    const auto q1 = eig_pair_dw(kRef, hpw, 0.1, 3.14159265358979323846 / 3.0);
    const auto h0 = g_coeffs_dw(kRef, q0, hpw, 0.1);
    const auto h1 = g_coeffs_dw(kRef, q1, hpw, 0.1);
    const cx lpw = lambda_prime_dw(kRef, hpw, 0.1);
    const auto m0 = hopf_quantities(h0, lpw, hpw.omega);
    const auto m1 = hopf_quantities(h1, lpw, hpw.omega);
    CHECK(std::abs(std::abs(m0.C1) - std::abs(m1.C1)) < 1e-10 * std::abs(m0.C1));
}
