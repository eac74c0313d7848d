#include "tumordde/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tumordde::integrate {

namespace {

constexpr double kBlowUp = 1e12;

/// Dense uniform-grid record of a running integration, with cubic Hermite
/// evaluation between nodes. State dimension is fixed at construction.
class DenseRecord {
public:
    DenseRecord(int dim, double dt) : dim_(dim), dt_(dt) {}

    void push(const std::vector<double>& y, const std::vector<double>& f) {
        ys_.insert(ys_.end(), y.begin(), y.end());
        fs_.insert(fs_.end(), f.begin(), f.end());
        ++count_;
    }

    int count() const { return count_; }
    double y_at(int node, int comp) const { return ys_[node * dim_ + comp]; }
    double f_at(int node, int comp) const { return fs_[node * dim_ + comp]; }

    /// Value of component `comp` at time s in [0, count*dt); extrapolates
    /// from the last completed segment when s runs ahead of the record.
    double eval(double s, int comp) const {
        int i = static_cast<int>(std::floor(s / dt_));
        if (i < 0) i = 0;
        if (i >= count_ - 1) i = count_ - 2;
        if (i < 0) { // single node so far: linear extrapolation
            return y_at(0, comp) + s * f_at(0, comp);
        }
        const double theta = (s - i * dt_) / dt_;
        const double y0 = y_at(i, comp), y1 = y_at(i + 1, comp);
        const double d0 = dt_ * f_at(i, comp), d1 = dt_ * f_at(i + 1, comp);
        const double t2 = theta * theta, t3 = t2 * theta;
        return (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + theta) * d0
             + (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * d1;
    }

private:
    int dim_;
    double dt_;
    int count_ = 0;
    std::vector<double> ys_, fs_;
};

int step_count(double t_end, double dt) {
    if (!(dt > 0.0)) throw ValidationError("dt must be > 0");
    if (!(t_end > 0.0)) throw ValidationError("t_end must be > 0");
    return static_cast<int>(std::llround(t_end / dt));
}

bool finite_all(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x) || std::abs(x) > kBlowUp) return false;
    return true;
}

/// Kernel-weighted moments w_k(T) = q * int_0^T s^k e^(-q (T-s)) ds for a
/// cubic polynomial model; series branch avoids cancellation at small q*T.
std::array<double, 4> poly_kernel_weights(double q, double T) {
    std::array<double, 4> w{};
    const double qT = q * T;
    if (qT < 0.1) {
        // w_k = k! * qT * T^k * sum_m (-qT)^m / (k+m+1)!
        double factk = 1.0;
        double tpow = 1.0;
        for (int k = 0; k < 4; ++k) {
            if (k > 0) { factk *= k; tpow *= T; }
            double term = factk;
            for (int i = 2; i <= k + 1; ++i) term /= i; // k!/(k+1)!
            double sum = term;
            for (int m = 1; m <= 14; ++m) {
                term *= -qT / (k + m + 1);
                sum += term;
            }
            w[k] = qT * tpow * sum;
        }
        return w;
    }
    double m_prev = -std::expm1(-qT) / q; // M_0
    w[0] = q * m_prev;
    double tpow = 1.0;
    for (int k = 1; k < 4; ++k) {
        tpow *= T;
        const double mk = (tpow - k * m_prev) / q;
        w[k] = q * mk;
        m_prev = mk;
    }
    return w;
}

/// J(t+T) from J(t) and the cubic model y(t+s) = c0 + c1 s + c2 s^2 + c3 s^3:
/// exact solution of J' = q (y - J).
double exp_update(double J, double q, double T, const std::array<double, 4>& c) {
    const auto w = poly_kernel_weights(q, T);
    double acc = J * std::exp(-q * T);
    for (int k = 0; k < 4; ++k) acc += c[k] * w[k];
    return acc;
}

std::array<double, 4> hermite_coeffs(double y0, double d0, double y1, double d1,
                                     double h) {
    const double dy = y1 - y0;
    return {y0, d0, 3.0 * dy / (h * h) - (2.0 * d0 + d1) / h,
            -2.0 * dy / (h * h * h) + (d0 + d1) / (h * h)};
}

/// q * integral of e^(-q s) f(-s) over [0, inf) for a history component;
/// exact for constant histories, composite Simpson plus constant-tail
/// correction otherwise.
double kernel_average_history(const HistorySpec& hist, const Vec2& L0, double q,
                              int comp) {
    if (hist.kind != HistorySpec::Kind::tabulated) {
        const Vec2 v = hist.eval(0.0, L0);
        return comp == 0 ? v[0] : v[1];
    }
    const double S = 40.0 / q;
    const int n = 4000; // even
    const double h = S / n;
    auto f = [&](double s) {
        const Vec2 v = hist.eval(-s, L0);
        return q * std::exp(-q * s) * (comp == 0 ? v[0] : v[1]);
    };
    double acc = f(0.0) + f(S);
    for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(i * h);
    acc *= h / 3.0;
    const Vec2 tail_v = hist.eval(-S, L0);
    acc += std::exp(-q * S) * (comp == 0 ? tail_v[0] : tail_v[1]);
    return acc;
}

} // namespace

HistorySpec HistorySpec::constant(Vec2 pt) {
    HistorySpec h;
    h.kind = Kind::constant;
    h.point = pt;
    return h;
}

HistorySpec HistorySpec::perturbed(double delta) {
    HistorySpec h;
    h.kind = Kind::perturbed_equilibrium;
    h.delta = delta;
    return h;
}

HistorySpec HistorySpec::tabulated(std::vector<double> times,
                                   std::vector<Vec2> values) {
    if (times.size() != values.size() || times.size() < 2)
        throw ValidationError("tabulated history needs >= 2 matching samples");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw ValidationError("tabulated history times must be strictly increasing");
    HistorySpec h;
    h.kind = Kind::tabulated;
    h.times = std::move(times);
    h.values = std::move(values);
    return h;
}

double HistorySpec::resolved_delta(const Vec2& L0) const {
    if (delta > 0.0) return delta;
    return 0.01 * std::max(L0[0], L0[1]);
}

Vec2 HistorySpec::eval(double t, const Vec2& L0) const {
    switch (kind) {
    case Kind::constant:
        return point;
    case Kind::perturbed_equilibrium: {
        const double d = resolved_delta(L0);
        return {L0[0] + d, L0[1] + d};
    }
    case Kind::tabulated: {
        if (t <= times.front()) return values.front();
        if (t >= times.back()) return values.back();
        const auto it = std::upper_bound(times.begin(), times.end(), t);
        const std::size_t i = static_cast<std::size_t>(it - times.begin()) - 1;
        const double w = (t - times[i]) / (times[i + 1] - times[i]);
        return {values[i][0] + w * (values[i + 1][0] - values[i][0]),
                values[i][1] + w * (values[i + 1][1] - values[i][1])};
    }
    }
    return {0.0, 0.0};
}

void HistorySpec::require_span(double span) const {
    if (kind != Kind::tabulated) return;
    if (times.front() > -span + 1e-12 && span > 0.0)
        throw ValidationError("tabulated history does not cover [-max lag, 0]");
    if (times.back() < -1e-12)
        throw ValidationError("tabulated history must reach t = 0");
}

std::string HistorySpec::describe(const Vec2& L0) const {
    std::ostringstream os;
    os.precision(15);
    switch (kind) {
    case Kind::constant:
        os << "constant (" << point[0] << ", " << point[1] << ")";
        break;
    case Kind::perturbed_equilibrium:
        os << "L0 + (delta, delta), delta = " << resolved_delta(L0);
        break;
    case Kind::tabulated:
        os << "tabulated, " << times.size() << " samples on ["
           << times.front() << ", " << times.back() << "]";
        break;
    }
    return os.str();
}

Trajectory simulate_dd(const model::ModelParams& p, double tau1, double tau2,
                       const HistorySpec& history, double t_end, double dt) {
    if (tau1 < 0.0 || tau2 < 0.0) throw ValidationError("lags must be >= 0");
    const auto L0 = model::equilibria(p).first;
    const Vec2 L0pt{L0.x, L0.y};
    history.require_span(std::max(tau1, tau2));

    Trajectory traj;
    traj.dim = 2;
    traj.dt = dt;
    traj.params = p;
    traj.kernel_desc = "dirac+dirac";
    traj.tau1 = tau1;
    traj.tau2 = tau2;
    traj.history_desc = history.describe(L0pt);
    if (tau1 > 0.0 && tau2 > 0.0 && dt > std::min(tau1, tau2) / 4.0)
        traj.warnings.push_back("dt exceeds min(tau1, tau2)/4; lag interpolation accuracy degrades");

    const int n = step_count(t_end, dt);
    DenseRecord rec(2, dt);

    auto lagged = [&](const DenseRecord& r, double s, int comp) {
        if (s <= 0.0) {
            const Vec2 v = history.eval(s, L0pt);
            return comp == 0 ? v[0] : v[1];
        }
        return r.eval(s, comp);
    };
    auto rhs = [&](double t, const std::vector<double>& u) {
        const double xl = tau1 > 0.0 ? lagged(rec, t - tau1, 0) : u[0];
        const double yl = tau2 > 0.0 ? lagged(rec, t - tau2, 1) : u[1];
        const Vec2 d = model::rhs_original(p, u[0], u[1], xl, yl);
        return std::vector<double>{d[0], d[1]};
    };

    const Vec2 u0v = history.eval(0.0, L0pt);
    std::vector<double> u{u0v[0], u0v[1]};
    std::vector<double> f = rhs(0.0, u);
    rec.push(u, f);
    traj.times.push_back(0.0);
    traj.states.push_back({u[0], u[1], 0.0});

    for (int i = 0; i < n; ++i) {
        const double t = i * dt;
        const std::vector<double> k1 = rhs(t, u);
        std::vector<double> tmp(2);
        for (int c = 0; c < 2; ++c) tmp[c] = u[c] + 0.5 * dt * k1[c];
        const std::vector<double> k2 = rhs(t + 0.5 * dt, tmp);
        for (int c = 0; c < 2; ++c) tmp[c] = u[c] + 0.5 * dt * k2[c];
        const std::vector<double> k3 = rhs(t + 0.5 * dt, tmp);
        for (int c = 0; c < 2; ++c) tmp[c] = u[c] + dt * k3[c];
        const std::vector<double> k4 = rhs(t + dt, tmp);
        for (int c = 0; c < 2; ++c)
            u[c] += dt / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        if (!finite_all(u)) {
            traj.blown_up = true;
            traj.blowup_time = t + dt;
            break;
        }
        f = rhs((i + 1) * dt, u);
        rec.push(u, f);
        traj.times.push_back((i + 1) * dt);
        traj.states.push_back({u[0], u[1], 0.0});
    }
    return traj;
}

Trajectory simulate_chain(const model::ModelParams& p, double tau1, double q2,
                          const HistorySpec& history, double t_end, double dt,
                          int order, bool delay_x2) {
    if (tau1 < 0.0) throw ValidationError("tau1 must be >= 0");
    if (!(q2 > 0.0)) throw ValidationError("q2 must be > 0");
    if (order < 0) throw ValidationError("kernel order must be >= 0");
    const auto L0 = model::equilibria(p).first;
    const Vec2 L0pt{L0.x, L0.y};
    history.require_span(std::max(tau1, 40.0 / q2));

    const int stages = order + 1;
    const int dim = 2 + stages;
    Trajectory traj;
    traj.dim = 3;
    traj.dt = dt;
    traj.params = p;
    {
        std::ostringstream os;
        os << "dirac+gamma(p=" << order << ")";
        traj.kernel_desc = os.str();
    }
    traj.tau1 = tau1;
    traj.q2 = q2;
    traj.history_desc = history.describe(L0pt);
    if (tau1 > 0.0 && dt > tau1 / 4.0)
        traj.warnings.push_back("dt exceeds tau1/4; lag interpolation accuracy degrades");

    const int n = step_count(t_end, dt);
    DenseRecord rec(dim, dt);

    // translated history for the lagged x1 lookups
    auto hist_x1 = [&](double s) { return history.eval(s, L0pt)[0] - L0.x; };
    auto hist_x2 = [&](double s) { return history.eval(s, L0pt)[1] - L0.y; };
    const int lag_comp = delay_x2 ? 1 : 0;
    auto lagged = [&](double s) {
        if (s <= 0.0) return lag_comp == 0 ? hist_x1(s) : hist_x2(s);
        return rec.eval(s, lag_comp);
    };

    auto rhs = [&](double t, const std::vector<double>& u) {
        std::vector<double> d(dim);
        const double xl = tau1 > 0.0 ? lagged(t - tau1) : u[lag_comp];
        const Vec3 core = model::rhs_chain(p, L0, q2, u[0], u[1], u[2], xl);
        d[0] = core[0];
        d[1] = core[1];
        // cascade: u[2] is driven by x2 for order 0, otherwise the last
        // stage drives the equation and earlier stages filter x2
        if (stages == 1) {
            d[2] = core[2];
        } else {
            // stage layout: u[2] = z_p (drives dx2), u[3..] = z_1..z_{p-1}?
            // Keep it simple: u[2+i] = z_{i+1}, z_1 filters x2, the last
            // stage z_stages enters dx2; therefore recompute dx2 with the
            // last stage.
            const double z_last = u[2 + stages - 1];
            const Vec3 c2 = model::rhs_chain(p, L0, q2, u[0], u[1], z_last, xl);
            d[1] = c2[1];
            d[2] = q2 * (u[1] - u[2]);
            for (int s = 1; s < stages; ++s)
                d[2 + s] = q2 * (u[2 + s - 1] - u[2 + s]);
        }
        return d;
    };

    std::vector<double> u(dim);
    const Vec2 u0v = history.eval(0.0, L0pt);
    u[0] = u0v[0] - L0.x;
    u[1] = u0v[1] - L0.y;
    if (history.kind == HistorySpec::Kind::tabulated) {
        // z_{s+1}(0) is the order-s gamma average of the x2 history;
        // Simpson quadrature, truncation tail at 40(s+1)/q2 is below
        // machine scale
        for (int s = 0; s < stages; ++s) {
            const double S = 40.0 * (s + 1) / q2;
            const int m = 4000;
            const double h = S / m;
            double logfact = 0.0;
            for (int i = 2; i <= s; ++i) logfact += std::log(double(i));
            auto f = [&](double sx) {
                if (sx == 0.0 && s > 0) return 0.0;
                const double logk = (s + 1) * std::log(q2)
                                  + (s > 0 ? s * std::log(sx) : 0.0)
                                  - q2 * sx - logfact;
                return std::exp(logk) * hist_x2(-sx);
            };
            double acc = f(0.0) + f(S);
            for (int i = 1; i < m; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(i * h);
            u[2 + s] = acc * h / 3.0;
        }
    } else {
        const double c2v = u0v[1] - L0.y; // constant translated x2 history
        for (int s = 0; s < stages; ++s) u[2 + s] = c2v;
    }

    std::vector<double> f = rhs(0.0, u);
    rec.push(u, f);
    traj.times.push_back(0.0);
    const int zi = 2 + stages - 1;
    traj.states.push_back({u[0] + L0.x, u[1] + L0.y, u[zi] + L0.y});

    std::vector<double> tmp(dim);
    for (int i = 0; i < n; ++i) {
        const double t = i * dt;
        const std::vector<double> k1 = rhs(t, u);
        for (int c = 0; c < dim; ++c) tmp[c] = u[c] + 0.5 * dt * k1[c];
        const std::vector<double> k2 = rhs(t + 0.5 * dt, tmp);
        for (int c = 0; c < dim; ++c) tmp[c] = u[c] + 0.5 * dt * k2[c];
        const std::vector<double> k3 = rhs(t + 0.5 * dt, tmp);
        for (int c = 0; c < dim; ++c) tmp[c] = u[c] + dt * k3[c];
        const std::vector<double> k4 = rhs(t + dt, tmp);
        for (int c = 0; c < dim; ++c)
            u[c] += dt / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        if (!finite_all(u)) {
            traj.blown_up = true;
            traj.blowup_time = t + dt;
            break;
        }
        f = rhs((i + 1) * dt, u);
        rec.push(u, f);
        traj.times.push_back((i + 1) * dt);
        traj.states.push_back({u[0] + L0.x, u[1] + L0.y, u[zi] + L0.y});
    }
    return traj;
}

Trajectory simulate_quadrature_weak(const model::ModelParams& p, double tau1,
                                    double q2, const HistorySpec& history,
                                    double t_end, double dt) {
    if (tau1 < 0.0) throw ValidationError("tau1 must be >= 0");
    if (!(q2 > 0.0)) throw ValidationError("q2 must be > 0");
    const auto L0 = model::equilibria(p).first;
    const Vec2 L0pt{L0.x, L0.y};
    history.require_span(std::max(tau1, 40.0 / q2));

    Trajectory traj;
    traj.dim = 3;
    traj.dt = dt;
    traj.params = p;
    traj.kernel_desc = "dirac+weak (direct quadrature)";
    traj.tau1 = tau1;
    traj.q2 = q2;
    traj.history_desc = history.describe(L0pt);
    if (tau1 > 0.0 && dt > tau1 / 4.0)
        traj.warnings.push_back("dt exceeds tau1/4; lag interpolation accuracy degrades");

    const int n = step_count(t_end, dt);
    DenseRecord rec(2, dt);

    auto lagged_x = [&](double s) {
        if (s <= 0.0) return history.eval(s, L0pt)[0];
        return rec.eval(s, 0);
    };
    // J carries the distributed term int_0^inf q2 e^(-q2 s) y(t-s) ds
    auto rhs = [&](double t, const std::vector<double>& u, double J) {
        const double xl = tau1 > 0.0 ? lagged_x(t - tau1) : u[0];
        return std::vector<double>{
            p.a1 * u[0] - p.a2 * u[0] * u[1],
            p.b1 * xl * J - p.b2 * u[0] - p.b3 * u[1] + p.b4};
    };

    double J = kernel_average_history(history, L0pt, q2, 1);
    const Vec2 u0v = history.eval(0.0, L0pt);
    std::vector<double> u{u0v[0], u0v[1]};
    std::vector<double> f = rhs(0.0, u, J);
    rec.push(u, f);
    traj.times.push_back(0.0);
    traj.states.push_back({u[0], u[1], J});

    auto rk4_with = [&](double t, const std::vector<double>& u0,
                        double Jh, double Jf, std::vector<double>& out) {
        const std::vector<double> k1 = rhs(t, u0, J);
        std::vector<double> tmp(2);
        for (int c = 0; c < 2; ++c) tmp[c] = u0[c] + 0.5 * dt * k1[c];
        const std::vector<double> k2 = rhs(t + 0.5 * dt, tmp, Jh);
        for (int c = 0; c < 2; ++c) tmp[c] = u0[c] + 0.5 * dt * k2[c];
        const std::vector<double> k3 = rhs(t + 0.5 * dt, tmp, Jh);
        for (int c = 0; c < 2; ++c) tmp[c] = u0[c] + dt * k3[c];
        const std::vector<double> k4 = rhs(t + dt, tmp, Jf);
        out.resize(2);
        for (int c = 0; c < 2; ++c)
            out[c] = u0[c] + dt / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
    };

    std::vector<double> u_next(2);
    for (int i = 0; i < n; ++i) {
        const double t = i * dt;
        const double y0 = u[1];
        const double dy0 = f[1];

        // predictor: linear y-model across the step
        std::array<double, 4> cl{y0, dy0, 0.0, 0.0};
        double Jh = exp_update(J, q2, 0.5 * dt, cl);
        double Jf = exp_update(J, q2, dt, cl);
        rk4_with(t, u, Jh, Jf, u_next);

        // corrector: cubic Hermite y-model from the predicted endpoint
        std::vector<double> f_end = rhs(t + dt, u_next, Jf);
        std::array<double, 4> cc = hermite_coeffs(y0, dy0, u_next[1], f_end[1], dt);
        Jh = exp_update(J, q2, 0.5 * dt, cc);
        Jf = exp_update(J, q2, dt, cc);
        rk4_with(t, u, Jh, Jf, u_next);

        f_end = rhs(t + dt, u_next, Jf);
        cc = hermite_coeffs(y0, dy0, u_next[1], f_end[1], dt);
        J = exp_update(J, q2, dt, cc);

        u = u_next;
        if (!finite_all(u) || !std::isfinite(J) || std::abs(J) > kBlowUp) {
            traj.blown_up = true;
            traj.blowup_time = t + dt;
            break;
        }
        f = rhs((i + 1) * dt, u, J);
        rec.push(u, f);
        traj.times.push_back((i + 1) * dt);
        traj.states.push_back({u[0], u[1], J});
    }
    return traj;
}

OscillationSummary summarize(const Trajectory& traj, Vec2 L0, double tol) {
    if (traj.blown_up)
        throw NumericError(NumericError::Kind::InsufficientData,
                           "trajectory blew up; tail statistics undefined");
    const std::size_t n = traj.states.size();
    if (n < 100)
        throw NumericError(NumericError::Kind::InsufficientData,
                           "trajectory too short to summarize");

    OscillationSummary s;
    for (const auto& st : traj.states)
        if (st[0] < 0.0 || st[1] < 0.0) { s.went_negative = true; break; }

    const std::size_t tail20 = n - n / 5;
    double dist = 0.0;
    for (std::size_t i = tail20; i < n; ++i) {
        dist = std::max(dist, std::abs(traj.states[i][0] - L0[0]));
        dist = std::max(dist, std::abs(traj.states[i][1] - L0[1]));
    }
    s.final_max_distance = dist;
    s.converged = dist < tol;
    if (s.converged) return s;

    // oscillation statistics on the final 40%: upward crossings of the mean
    const std::size_t start = n - 2 * (n / 5);
    double mean = 0.0;
    for (std::size_t i = start; i < n; ++i) mean += traj.states[i][0];
    mean /= static_cast<double>(n - start);

    std::vector<double> crossings;
    for (std::size_t i = start + 1; i < n; ++i) {
        const double prev = traj.states[i - 1][0], cur = traj.states[i][0];
        if (prev < mean && cur >= mean) {
            const double w = (mean - prev) / (cur - prev);
            crossings.push_back(traj.times[i - 1] + w * traj.dt);
        }
    }
    if (crossings.size() >= 2) {
        const std::size_t use = std::min<std::size_t>(crossings.size() - 1, 10);
        const double span = crossings.back() - crossings[crossings.size() - 1 - use];
        s.period_estimate = span / static_cast<double>(use);

        // amplitude over the cycles actually used
        const double t_from = crossings[crossings.size() - 1 - use];
        double lo = traj.states.back()[0], hi = lo;
        for (std::size_t i = start; i < n; ++i) {
            if (traj.times[i] < t_from) continue;
            lo = std::min(lo, traj.states[i][0]);
            hi = std::max(hi, traj.states[i][0]);
        }
        s.amplitude = 0.5 * (hi - lo);
    }
    return s;
}

} // namespace tumordde::integrate
