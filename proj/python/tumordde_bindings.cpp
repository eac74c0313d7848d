#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tumordde/chareq.hpp"
#include "tumordde/integrate.hpp"
#include "tumordde/model.hpp"
#include "tumordde/normalform.hpp"

namespace py = pybind11;
using namespace tumordde;

namespace {

py::dict summary_dict(const integrate::OscillationSummary& s) {
    py::dict d;
    d["converged"] = s.converged;
    d["final_max_distance"] = s.final_max_distance;
    d["went_negative"] = s.went_negative;
    if (s.period_estimate) d["period_estimate"] = *s.period_estimate;
    if (s.amplitude) d["amplitude"] = *s.amplitude;
    return d;
}

py::dict normal_form_dict(const chareq::HopfPoint& hp,
                          const normalform::EigPair& pair,
                          const normalform::GCoeffs& g, cx lambda_prime) {
    const auto nf = normalform::hopf_quantities(g, lambda_prime, hp.omega);
    py::dict d;
    d["omega"] = hp.omega;
    d["tau_crit"] = hp.tau_crit;
    d["residual_delta"] = hp.residual_delta;
    d["g20"] = std::complex<double>(g.g20);
    d["g11"] = std::complex<double>(g.g11);
    d["g02"] = std::complex<double>(g.g02);
    d["g21"] = std::complex<double>(g.g21);
    d["C1"] = std::complex<double>(nf.C1);
    d["lambda_prime"] = std::complex<double>(lambda_prime);
    d["mu2"] = nf.mu2;
    d["beta2"] = nf.beta2;
    d["T2"] = nf.T2;
    d["direction"] = nf.direction;
    d["stability"] = nf.stability;
    d["period"] = nf.period;
    d["biorthogonality_residual"] = std::abs(pair.pairing_hh - cx(1.0));
    d["eigen_residual"] = std::max(pair.eig_residual_h, pair.eig_residual_h_star);
    return d;
}

} // namespace

PYBIND11_MODULE(_tumordde, m) {
    m.doc() = "delayed tumour-immune interaction model: Hopf analysis, "
              "normal forms and delay-system integration";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_RuntimeError);

    py::class_<model::ModelParams>(m, "ModelParams")
        .def(py::init([](double a1, double a2, double b1, double b2, double b3,
                         double b4) {
                 return model::ModelParams{a1, a2, b1, b2, b3, b4};
             }),
             py::arg("a1"), py::arg("a2"), py::arg("b1"), py::arg("b2"),
             py::arg("b3"), py::arg("b4"))
        .def_readwrite("a1", &model::ModelParams::a1)
        .def_readwrite("a2", &model::ModelParams::a2)
        .def_readwrite("b1", &model::ModelParams::b1)
        .def_readwrite("b2", &model::ModelParams::b2)
        .def_readwrite("b3", &model::ModelParams::b3)
        .def_readwrite("b4", &model::ModelParams::b4);

    m.def("reference_params", &model::reference_params,
          "parameter set used by the reproduction suite");
    m.def("check_admissible", &model::check_admissible, py::arg("params"));
    m.def(
        "equilibria",
        [](const model::ModelParams& p) {
            const auto [L0, L1] = model::equilibria(p);
            return py::make_tuple(py::make_tuple(L0.x, L0.y),
                                  py::make_tuple(L1.x, L1.y));
        },
        py::arg("params"), "returns ((x0, y0), (0, b4/b3))");

    py::class_<chareq::HopfPoint>(m, "HopfPoint")
        .def_readonly("omega", &chareq::HopfPoint::omega)
        .def_readonly("tau_crit", &chareq::HopfPoint::tau_crit)
        .def_readonly("branch_index", &chareq::HopfPoint::branch_index)
        .def_readonly("d_re", &chareq::HopfPoint::d_re)
        .def_readonly("d_im", &chareq::HopfPoint::d_im)
        .def_readonly("residual_delta", &chareq::HopfPoint::residual_delta)
        .def_readonly("res_eq_a", &chareq::HopfPoint::res_eq_a)
        .def_readonly("res_eq_b", &chareq::HopfPoint::res_eq_b)
        .def_readonly("degenerate", &chareq::HopfPoint::degenerate)
        .def("__repr__", [](const chareq::HopfPoint& hp) {
            return "<HopfPoint omega=" + std::to_string(hp.omega)
                 + " tau_crit=" + std::to_string(hp.tau_crit) + ">";
        });

    m.def(
        "hopf_point_dd",
        [](const model::ModelParams& p, double tau2, int k_max) {
            return chareq::hopf_point_dd(p, tau2, k_max);
        },
        py::arg("params"), py::arg("tau2"), py::arg("k_max") = 64);
    m.def(
        "hopf_points_dd",
        [](const model::ModelParams& p, double tau2, int count, int k_max) {
            return chareq::hopf_points_dd(p, tau2, count, k_max);
        },
        py::arg("params"), py::arg("tau2"), py::arg("count") = 3,
        py::arg("k_max") = 64);
    m.def(
        "hopf_points_dw",
        [](const model::ModelParams& p, double q2) {
            return chareq::hopf_points_dw(p, q2);
        },
        py::arg("params"), py::arg("q2"));
    m.def("stability_bound_dd", &chareq::stability_bound_dd, py::arg("params"));
    m.def(
        "omega_candidates_dd",
        [](const model::ModelParams& p) {
            return chareq::omega_candidates_dd(p, model::equilibria(p).first.x);
        },
        py::arg("params"), "positive roots of the crossing-frequency quartic");
    m.def(
        "q2_stability_window",
        [](const model::ModelParams& p) {
            const auto w = chareq::q2_stability_window(p);
            py::dict d;
            d["available"] = w.window.has_value();
            if (w.window) {
                d["q21"] = w.window->first;
                d["q22"] = w.window->second;
            } else {
                d["reason"] = w.reason;
            }
            return d;
        },
        py::arg("params"));
    m.def(
        "delta_dd",
        [](const model::ModelParams& p, double tau1, double tau2, cx lam) {
            return chareq::delta_dd(chareq::CharCaseDD::make(p, tau1, tau2), lam);
        },
        py::arg("params"), py::arg("tau1"), py::arg("tau2"), py::arg("lam"),
        "double-Dirac characteristic function at lam");
    m.def(
        "delta_dw",
        [](const model::ModelParams& p, double tau1, double q2, cx lam) {
            return chareq::delta_dw(chareq::CharCaseDW::make(p, tau1, q2), lam);
        },
        py::arg("params"), py::arg("tau1"), py::arg("q2"), py::arg("lam"),
        "Dirac + weak-kernel characteristic function at lam");

    m.def(
        "normal_form_dd",
        [](const model::ModelParams& p, double tau2) {
            const auto hp = chareq::hopf_point_dd(p, tau2);
            const auto pair = normalform::eig_pair_dd(p, hp, tau2);
            const auto g = normalform::g_coeffs_dd(p, pair, hp, tau2);
            return normal_form_dict(hp, pair, g,
                                    normalform::lambda_prime_dd(p, hp, tau2));
        },
        py::arg("params"), py::arg("tau2"));
    m.def(
        "normal_form_dw",
        [](const model::ModelParams& p, double q2) {
            const auto hp = chareq::hopf_point_dw(p, q2);
            const auto pair = normalform::eig_pair_dw(p, hp, q2);
            const auto g = normalform::g_coeffs_dw(p, pair, hp, q2);
            return normal_form_dict(hp, pair, g,
                                    normalform::lambda_prime_dw(p, hp, q2));
        },
        py::arg("params"), py::arg("q2"));

    py::class_<integrate::HistorySpec>(m, "History")
        .def_static(
            "constant",
            [](double x, double y) {
                return integrate::HistorySpec::constant({x, y});
            },
            py::arg("x"), py::arg("y"))
        .def_static("perturbed", &integrate::HistorySpec::perturbed,
                    py::arg("delta") = -1.0);

    py::class_<integrate::Trajectory>(m, "Trajectory")
        .def_readonly("times", &integrate::Trajectory::times)
        .def_readonly("dim", &integrate::Trajectory::dim)
        .def_readonly("blown_up", &integrate::Trajectory::blown_up)
        .def_readonly("blowup_time", &integrate::Trajectory::blowup_time)
        .def_property_readonly("x",
            [](const integrate::Trajectory& t) {
                std::vector<double> v(t.states.size());
                for (std::size_t i = 0; i < v.size(); ++i) v[i] = t.states[i][0];
                return v;
            })
        .def_property_readonly("y",
            [](const integrate::Trajectory& t) {
                std::vector<double> v(t.states.size());
                for (std::size_t i = 0; i < v.size(); ++i) v[i] = t.states[i][1];
                return v;
            })
        .def_property_readonly("z",
            [](const integrate::Trajectory& t) {
                std::vector<double> v(t.states.size());
                for (std::size_t i = 0; i < v.size(); ++i) v[i] = t.states[i][2];
                return v;
            });

    m.def("simulate_dd", &integrate::simulate_dd, py::arg("params"),
          py::arg("tau1"), py::arg("tau2"), py::arg("history"), py::arg("t_end"),
          py::arg("dt"));
    m.def("simulate_chain", &integrate::simulate_chain, py::arg("params"),
          py::arg("tau1"), py::arg("q2"), py::arg("history"), py::arg("t_end"),
          py::arg("dt"), py::arg("order") = 0, py::arg("delay_x2") = false);
    m.def("simulate_quadrature_weak", &integrate::simulate_quadrature_weak,
          py::arg("params"), py::arg("tau1"), py::arg("q2"), py::arg("history"),
          py::arg("t_end"), py::arg("dt"));
    m.def(
        "summarize",
        [](const integrate::Trajectory& t, std::pair<double, double> L0, double tol) {
            return summary_dict(integrate::summarize(t, {L0.first, L0.second}, tol));
        },
        py::arg("trajectory"), py::arg("L0"), py::arg("tol") = 1e-4);

    m.attr("__version__") = "1.0.0";
}
