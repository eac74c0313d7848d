#ifndef TUMORDDE_TESTS_ORACLES_HPP
#define TUMORDDE_TESTS_ORACLES_HPP

// Test-only oracles, kept independent of the library code paths they check.

#include <cmath>
#include <functional>
#include <vector>

#include "tumordde/chareq.hpp"
#include "tumordde/model.hpp"
#include "tumordde/smallmat.hpp"

namespace oracles {

using tumordde::cx;

/// Sign-change scan for real roots of f on [lo, hi] with the given step;
/// each bracket is closed by bisection.
inline std::vector<double> grid_roots(const std::function<double(double)>& f,
                                      double lo, double hi, double step) {
    std::vector<double> roots;
    double prev_x = lo;
    double prev_f = f(lo);
    for (double x = lo + step; x <= hi + 0.5 * step; x += step) {
        const double fx = f(x);
        if (prev_f == 0.0) {
            roots.push_back(prev_x);
        } else if (prev_f * fx < 0.0) {
            double a = prev_x, b = x;
            for (int it = 0; it < 100; ++it) {
                const double m = 0.5 * (a + b);
                if (f(a) * f(m) <= 0.0) b = m; else a = m;
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_x = x;
        prev_f = fx;
    }
    return roots;
}

/// det(lambda I - A1 - C1 e^(-lambda tau1)) assembled directly from the
/// chain linearization matrices; independent of the p/r coefficient route.
inline cx chain_determinant(const tumordde::model::ModelParams& p, double q2,
                            double tau1, cx lambda) {
    const auto L0 = tumordde::model::equilibria(p).first;
    const auto lin = tumordde::model::linearize_dw(p, L0, q2);
    const cx e = std::exp(-lambda * tau1);
    tumordde::CMat3 m{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            m[i][j] = (i == j ? lambda : cx(0.0)) - lin.A1[i][j] - e * lin.C1[i][j];
    return tumordde::det3(m);
}

/// d(lambda)/d(tau1) by central differences of the tracked characteristic
/// root: Newton-refine the root at tau1 +/- h from the crossing seed.
template <typename CharFn, typename CharFnPrime>
cx fd_lambda_prime(const CharFn& delta_of_tau, const CharFnPrime& dlambda_of_tau,
                   cx seed, double tau1, double h = 1e-5) {
    auto track = [&](double tau) {
        cx z = seed;
        for (int it = 0; it < 100; ++it) {
            const cx d = dlambda_of_tau(z, tau);
            const cx step = delta_of_tau(z, tau) / d;
            z -= step;
            if (std::abs(step) < 1e-14 * (1.0 + std::abs(z))) break;
        }
        return z;
    };
    const cx lp = track(tau1 + h);
    const cx lm = track(tau1 - h);
    return (lp - lm) / (2.0 * h);
}

} // namespace oracles

#endif
