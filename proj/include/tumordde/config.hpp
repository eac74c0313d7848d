#ifndef TUMORDDE_CONFIG_HPP
#define TUMORDDE_CONFIG_HPP

#include <optional>
#include <string>

#include <json.hpp>

#include "tumordde/common.hpp"
#include "tumordde/integrate.hpp"
#include "tumordde/model.hpp"

namespace tumordde::cli {

/// Effective configuration of one command invocation. Every output artifact
/// echoes it (JSON form) so that a run can be re-ingested and repeated.
struct RunConfig {
    model::ModelParams params = model::reference_params();
    model::KernelSpec kernel1 = model::KernelSpec::dirac(1.0);
    model::KernelSpec kernel2 = model::KernelSpec::dirac(0.01);
    double dt = 1e-3;
    double t_end = 500.0;
    integrate::HistorySpec history = integrate::HistorySpec::perturbed();
    std::string out_dir = "out";
    bool json_output = false;
    int k_max = 64;
    int branches = 3; // crossings listed by the hopf command
    Tolerances tol;
    std::string method = "auto"; // simulate: auto | chain | quadrature
    bool zero_nonlinear = false;
    bool delay_x2 = false;       // chain comparison runs: literal published form
    std::optional<double> omega_override;
    std::optional<double> tau_crit_override;

    double tau1() const { return kernel1.tau; }
    double tau2() const { return kernel2.tau; }
    double q2() const { return kernel2.rate; }
    bool weak_case() const { return kernel2.kind == model::KernelSpec::Kind::gamma; }

    /// Structural checks shared by all commands; throws ValidationError.
    void validate() const;
};

nlohmann::json config_to_json(const RunConfig& c);
RunConfig config_from_json(const nlohmann::json& j);

/// Loads a sectioned key-value file ([model] / [kernels] / [run]) or, when
/// the file starts with '{', a JSON document. A JSON command output is
/// accepted directly: its "config" member is used.
RunConfig load_config_file(const std::string& path);

/// Parses the sectioned text format from a string (exposed for tests).
RunConfig parse_config_text(const std::string& text);

} // namespace tumordde::cli

#endif
