#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tumordde/commands.hpp"
#include "tumordde/output.hpp"

namespace {

using tumordde::cli::RunConfig;

struct FlagSet {
    std::optional<std::string> config_file;
    std::optional<double> a1, a2, b1, b2, b3, b4;
    std::optional<double> tau1, tau2, q2;
    std::optional<int> gamma_order;
    std::optional<double> dt, t_end;
    std::optional<std::string> history;
    std::optional<std::string> out_dir;
    std::optional<int> k_max;
    std::optional<int> branches;
    std::optional<double> residual_tol;
    std::optional<std::string> method;
    std::optional<double> omega, tau_crit;
    bool json_output = false;
    bool zero_nonlinear = false;
    bool delay_x2 = false;
};

void add_common_options(CLI::App* cmd, FlagSet& f) {
    cmd->add_option("--config", f.config_file, "config file ([model]/[kernels]/[run] sections, or JSON)");
    cmd->add_option("--a1", f.a1, "malignant growth rate");
    cmd->add_option("--a2", f.a2, "kill rate per lymphocyte");
    cmd->add_option("--b1", f.b1, "recognition rate");
    cmd->add_option("--b2", f.b2, "immunodepression rate");
    cmd->add_option("--b3", f.b3, "lymphocyte death rate");
    cmd->add_option("--b4", f.b4, "lymphocyte influx");
    cmd->add_option("--tau1", f.tau1, "lag on the malignant population (kernel1 dirac)");
    cmd->add_option("--tau2", f.tau2, "lag on the lymphocytes (kernel2 dirac)");
    cmd->add_option("--q2", f.q2, "weak-kernel rate (kernel2 gamma, order 0 unless --gamma-order)");
    cmd->add_option("--gamma-order", f.gamma_order, "gamma kernel order for kernel2 (with --q2)");
    cmd->add_option("--dt", f.dt, "integration step");
    cmd->add_option("--t-end", f.t_end, "integration horizon");
    cmd->add_option("--history", f.history,
                    "initial history: 'perturbed [delta]' or 'constant <x> <y>'");
    cmd->add_option("--out", f.out_dir, "output directory");
    cmd->add_option("--k-max", f.k_max, "branch search cap for the Dirac case");
    cmd->add_option("--branches", f.branches, "number of crossings listed by hopf");
    cmd->add_option("--residual-tol", f.residual_tol, "crossing certification tolerance");
    cmd->add_flag("--json", f.json_output, "emit a JSON object instead of text");
}

RunConfig build_config(const FlagSet& f) {
    RunConfig cfg;
    if (f.config_file) cfg = tumordde::cli::load_config_file(*f.config_file);
    if (f.a1) cfg.params.a1 = *f.a1;
    if (f.a2) cfg.params.a2 = *f.a2;
    if (f.b1) cfg.params.b1 = *f.b1;
    if (f.b2) cfg.params.b2 = *f.b2;
    if (f.b3) cfg.params.b3 = *f.b3;
    if (f.b4) cfg.params.b4 = *f.b4;
    if (f.tau1) cfg.kernel1 = tumordde::model::KernelSpec::dirac(*f.tau1);
    if (f.q2)
        cfg.kernel2 = tumordde::model::KernelSpec::gamma(f.gamma_order.value_or(0), *f.q2);
    else if (f.tau2)
        cfg.kernel2 = tumordde::model::KernelSpec::dirac(*f.tau2);
    if (f.dt) cfg.dt = *f.dt;
    if (f.t_end) cfg.t_end = *f.t_end;
    if (f.history) {
        std::istringstream hs(*f.history);
        std::string kind;
        hs >> kind;
        if (kind == "perturbed") {
            double d = -1.0;
            hs >> d;
            cfg.history = tumordde::integrate::HistorySpec::perturbed(d);
        } else if (kind == "constant") {
            double x, y;
            if (!(hs >> x >> y))
                throw tumordde::ValidationError("--history constant needs x and y");
            cfg.history = tumordde::integrate::HistorySpec::constant({x, y});
        } else {
            throw tumordde::ValidationError("--history must be 'perturbed [delta]' or 'constant <x> <y>'");
        }
    }
    if (f.out_dir) cfg.out_dir = *f.out_dir;
    if (f.k_max) cfg.k_max = *f.k_max;
    if (f.branches) cfg.branches = *f.branches;
    if (f.residual_tol) cfg.tol.residual = *f.residual_tol;
    if (f.method) cfg.method = *f.method;
    if (f.omega) cfg.omega_override = *f.omega;
    if (f.tau_crit) cfg.tau_crit_override = *f.tau_crit;
    if (f.json_output) cfg.json_output = true;
    if (f.zero_nonlinear) cfg.zero_nonlinear = true;
    if (f.delay_x2) cfg.delay_x2 = true;
    return cfg;
}

int emit(const tumordde::cli::CommandResult& res, bool json_mode) {
    if (json_mode)
        std::cout << res.json.dump(2) << "\n";
    else
        std::cout << res.text;
    return res.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"delayed tumour-immune model: Hopf analysis, normal forms and simulation"};
    app.require_subcommand(1);

    FlagSet f_analyze, f_hopf, f_nf, f_sim, f_rep;

    auto* analyze = app.add_subcommand("analyze", "equilibria, stability criteria, root survey");
    add_common_options(analyze, f_analyze);

    auto* hopf = app.add_subcommand("hopf", "locate certified Hopf crossings");
    add_common_options(hopf, f_hopf);

    auto* nf = app.add_subcommand("normalform", "center-manifold quantities at a crossing");
    add_common_options(nf, f_nf);
    nf->add_option("--omega", f_nf.omega, "use a supplied crossing frequency");
    nf->add_option("--tau-crit", f_nf.tau_crit, "use a supplied critical lag");
    nf->add_flag("--zero-nonlinear", f_nf.zero_nonlinear,
                 "debug: drop the quadratic/cubic terms");

    auto* sim = app.add_subcommand("simulate", "integrate and write CSV/SVG artifacts");
    add_common_options(sim, f_sim);
    sim->add_option("--method", f_sim.method, "auto | chain | quadrature");
    sim->add_flag("--as-printed", f_sim.delay_x2,
                  "chain comparison run with the literal published delayed factor");

    auto* rep = app.add_subcommand("reproduce-paper",
                                   "run the three reported scenarios and emit the discrepancy report");
    add_common_options(rep, f_rep);

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) {
            const RunConfig cfg = build_config(f_analyze);
            return emit(tumordde::cli::cmd_analyze(cfg), cfg.json_output);
        }
        if (hopf->parsed()) {
            const RunConfig cfg = build_config(f_hopf);
            return emit(tumordde::cli::cmd_hopf(cfg), cfg.json_output);
        }
        if (nf->parsed()) {
            const RunConfig cfg = build_config(f_nf);
            return emit(tumordde::cli::cmd_normalform(cfg), cfg.json_output);
        }
        if (sim->parsed()) {
            const RunConfig cfg = build_config(f_sim);
            return emit(tumordde::cli::cmd_simulate(cfg), cfg.json_output);
        }
        const RunConfig cfg = build_config(f_rep);
        return emit(tumordde::cli::cmd_reproduce_paper(cfg), cfg.json_output);
    } catch (const tumordde::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const tumordde::cli::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const tumordde::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    }
}
