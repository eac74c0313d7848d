#ifndef TUMORDDE_INTEGRATE_HPP
#define TUMORDDE_INTEGRATE_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "tumordde/common.hpp"
#include "tumordde/model.hpp"
#include "tumordde/smallmat.hpp"

namespace tumordde::integrate {

/// Initial data on (-inf, 0] in original (x, y) coordinates.
/// - constant: a fixed point
/// - perturbed_equilibrium: L0 + (delta, delta); delta <= 0 selects the
///   default 0.01 * max(x0, y0)
/// - tabulated: strictly increasing samples, linear interpolation, clamped
///   beyond the sampled span
struct HistorySpec {
    enum class Kind { constant, perturbed_equilibrium, tabulated };
    Kind kind = Kind::perturbed_equilibrium;
    Vec2 point{0.0, 0.0};
    double delta = -1.0;
    std::vector<double> times;
    std::vector<Vec2> values;

    static HistorySpec constant(Vec2 pt);
    static HistorySpec perturbed(double delta = -1.0);
    static HistorySpec tabulated(std::vector<double> times, std::vector<Vec2> values);

    double resolved_delta(const Vec2& L0) const;
    Vec2 eval(double t, const Vec2& L0) const; // t <= 0
    /// Throws unless tabulated samples span [-span, 0].
    void require_span(double span) const;
    std::string describe(const Vec2& L0) const;
};

/// Uniform-grid solution record. For the chain case the states already carry
/// the equilibrium offset back in, so all trajectories read in original
/// coordinates; the third component of a chain run is the kernel-averaged
/// lymphocyte count.
struct Trajectory {
    std::vector<double> times;                 // i * dt
    std::vector<std::array<double, 3>> states; // [x, y, z]; z = 0 when dim == 2
    int dim = 2;
    double dt = 0.0;
    bool blown_up = false;
    double blowup_time = 0.0;
    model::ModelParams params{};
    std::string kernel_desc;
    double tau1 = 0.0, tau2 = 0.0, q2 = 0.0;
    std::string history_desc;
    std::vector<std::string> warnings;
};

/// Discrete lags on both populations: classical RK4 by the method of steps,
/// lagged values read from the stored solution via cubic Hermite interpolation.
Trajectory simulate_dd(const model::ModelParams& p, double tau1, double tau2,
                       const HistorySpec& history, double t_end, double dt);

/// Linear-chain integration of the Dirac(tau1) + gamma(order, q2) case.
/// order = 0 is the weak kernel analyzed elsewhere; order >= 1 runs a longer
/// cascade for simulation only. `delay_x2` feeds the lagged x2 instead of x1
/// (the uncorrected published form) for comparison runs.
Trajectory simulate_chain(const model::ModelParams& p, double tau1, double q2,
                          const HistorySpec& history, double t_end, double dt,
                          int order = 0, bool delay_x2 = false);

/// Independent weak-kernel integrator: works in original coordinates and
/// advances the distributed term by the exact one-step update of the
/// exponentially weighted moving integral (predictor/corrector against the
/// step's cubic Hermite model of y).
Trajectory simulate_quadrature_weak(const model::ModelParams& p, double tau1,
                                    double q2, const HistorySpec& history,
                                    double t_end, double dt);

struct OscillationSummary {
    bool converged = false;               // sup distance to L0 < tol on final 20%
    std::optional<double> period_estimate;
    std::optional<double> amplitude;
    double final_max_distance = 0.0;
    bool went_negative = false;
};

/// Classifies the tail of a run. Throws NumericError(InsufficientData) for
/// short or blown-up trajectories.
OscillationSummary summarize(const Trajectory& traj, Vec2 L0, double tol);

} // namespace tumordde::integrate

#endif
