#include "tumordde/config.hpp"

#include <fstream>
#include <sstream>

namespace tumordde::cli {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ValidationError("config value for '" + key + "' is not a number: " + s);
    }
}

model::KernelSpec parse_kernel(const std::string& value, const std::string& key) {
    std::istringstream is(value);
    std::string kind;
    is >> kind;
    if (kind == "dirac") {
        double tau;
        if (!(is >> tau)) throw ValidationError(key + ": dirac needs a lag");
        return model::KernelSpec::dirac(tau);
    }
    if (kind == "weak") {
        double q;
        if (!(is >> q)) throw ValidationError(key + ": weak needs a rate");
        return model::KernelSpec::gamma(0, q);
    }
    if (kind == "gamma") {
        int order;
        double q;
        if (!(is >> order >> q)) throw ValidationError(key + ": gamma needs order and rate");
        return model::KernelSpec::gamma(order, q);
    }
    throw ValidationError(key + ": unknown kernel kind '" + kind + "'");
}

json kernel_to_json(const model::KernelSpec& k) {
    if (k.kind == model::KernelSpec::Kind::dirac)
        return {{"kind", "dirac"}, {"tau", k.tau}};
    return {{"kind", "gamma"}, {"order", k.order}, {"rate", k.rate}};
}

model::KernelSpec kernel_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "dirac") return model::KernelSpec::dirac(j.at("tau").get<double>());
    if (kind == "gamma")
        return model::KernelSpec::gamma(j.at("order").get<int>(),
                                        j.at("rate").get<double>());
    throw ValidationError("config: unknown kernel kind '" + kind + "'");
}

json history_to_json(const integrate::HistorySpec& h) {
    using K = integrate::HistorySpec::Kind;
    switch (h.kind) {
    case K::constant:
        return {{"kind", "constant"}, {"x", h.point[0]}, {"y", h.point[1]}};
    case K::perturbed_equilibrium:
        return {{"kind", "perturbed"}, {"delta", h.delta}};
    case K::tabulated: {
        json t = json::array(), x = json::array(), y = json::array();
        for (std::size_t i = 0; i < h.times.size(); ++i) {
            t.push_back(h.times[i]);
            x.push_back(h.values[i][0]);
            y.push_back(h.values[i][1]);
        }
        return {{"kind", "tabulated"}, {"t", t}, {"x", x}, {"y", y}};
    }
    }
    return {};
}

integrate::HistorySpec history_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant")
        return integrate::HistorySpec::constant(
            {j.at("x").get<double>(), j.at("y").get<double>()});
    if (kind == "perturbed")
        return integrate::HistorySpec::perturbed(j.at("delta").get<double>());
    if (kind == "tabulated") {
        std::vector<double> t = j.at("t").get<std::vector<double>>();
        std::vector<double> x = j.at("x").get<std::vector<double>>();
        std::vector<double> y = j.at("y").get<std::vector<double>>();
        std::vector<Vec2> v(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) v[i] = {x[i], y[i]};
        return integrate::HistorySpec::tabulated(std::move(t), std::move(v));
    }
    throw ValidationError("config: unknown history kind '" + kind + "'");
}

} // namespace

void RunConfig::validate() const {
    model::validate_positive(params);
    if (kernel1.kind != model::KernelSpec::Kind::dirac)
        throw ValidationError("kernel1 must be a dirac kernel (the analysis fixes the x-lag discrete)");
    if (kernel1.tau < 0.0) throw ValidationError("tau1 must be >= 0");
    if (!(dt > 0.0)) throw ValidationError("dt must be > 0");
    if (!(t_end > 0.0)) throw ValidationError("t_end must be > 0");
    if (k_max < 1) throw ValidationError("k_max must be >= 1");
    if (branches < 1) throw ValidationError("branches must be >= 1");
    if (method != "auto" && method != "chain" && method != "quadrature")
        throw ValidationError("method must be auto, chain or quadrature");
}

nlohmann::json config_to_json(const RunConfig& c) {
    json j;
    j["model"] = {{"a1", c.params.a1}, {"a2", c.params.a2}, {"b1", c.params.b1},
                  {"b2", c.params.b2}, {"b3", c.params.b3}, {"b4", c.params.b4}};
    j["kernels"] = {{"kernel1", kernel_to_json(c.kernel1)},
                    {"kernel2", kernel_to_json(c.kernel2)}};
    json run;
    run["dt"] = c.dt;
    run["t_end"] = c.t_end;
    run["history"] = history_to_json(c.history);
    run["out"] = c.out_dir;
    run["json"] = c.json_output;
    run["k_max"] = c.k_max;
    run["branches"] = c.branches;
    run["residual_tol"] = c.tol.residual;
    run["method"] = c.method;
    run["zero_nonlinear"] = c.zero_nonlinear;
    run["delay_x2"] = c.delay_x2;
    if (c.omega_override) run["omega"] = *c.omega_override;
    if (c.tau_crit_override) run["tau_crit"] = *c.tau_crit_override;
    j["run"] = run;
    return j;
}

RunConfig config_from_json(const nlohmann::json& jin) {
    const json& j = jin.contains("config") ? jin.at("config") : jin;
    RunConfig c;
    if (j.contains("model")) {
        const json& m = j.at("model");
        c.params = {m.at("a1").get<double>(), m.at("a2").get<double>(),
                    m.at("b1").get<double>(), m.at("b2").get<double>(),
                    m.at("b3").get<double>(), m.at("b4").get<double>()};
    }
    if (j.contains("kernels")) {
        const json& k = j.at("kernels");
        if (k.contains("kernel1")) c.kernel1 = kernel_from_json(k.at("kernel1"));
        if (k.contains("kernel2")) c.kernel2 = kernel_from_json(k.at("kernel2"));
    }
    if (j.contains("run")) {
        const json& r = j.at("run");
        if (r.contains("dt")) c.dt = r.at("dt").get<double>();
        if (r.contains("t_end")) c.t_end = r.at("t_end").get<double>();
        if (r.contains("history")) c.history = history_from_json(r.at("history"));
        if (r.contains("out")) c.out_dir = r.at("out").get<std::string>();
        if (r.contains("json")) c.json_output = r.at("json").get<bool>();
        if (r.contains("k_max")) c.k_max = r.at("k_max").get<int>();
        if (r.contains("branches")) c.branches = r.at("branches").get<int>();
        if (r.contains("residual_tol")) c.tol.residual = r.at("residual_tol").get<double>();
        if (r.contains("method")) c.method = r.at("method").get<std::string>();
        if (r.contains("zero_nonlinear")) c.zero_nonlinear = r.at("zero_nonlinear").get<bool>();
        if (r.contains("delay_x2")) c.delay_x2 = r.at("delay_x2").get<bool>();
        if (r.contains("omega")) c.omega_override = r.at("omega").get<double>();
        if (r.contains("tau_crit")) c.tau_crit_override = r.at("tau_crit").get<double>();
    }
    return c;
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig c;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            if (section != "model" && section != "kernels" && section != "run")
                throw ValidationError("config: unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(lineno)
                                  + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section == "model") {
            double* slot = key == "a1" ? &c.params.a1
                         : key == "a2" ? &c.params.a2
                         : key == "b1" ? &c.params.b1
                         : key == "b2" ? &c.params.b2
                         : key == "b3" ? &c.params.b3
                         : key == "b4" ? &c.params.b4 : nullptr;
            if (!slot) throw ValidationError("config: unknown model key '" + key + "'");
            *slot = to_double(value, key);
        } else if (section == "kernels") {
            if (key == "kernel1") c.kernel1 = parse_kernel(value, key);
            else if (key == "kernel2") c.kernel2 = parse_kernel(value, key);
            else throw ValidationError("config: unknown kernels key '" + key + "'");
        } else if (section == "run") {
            if (key == "dt") c.dt = to_double(value, key);
            else if (key == "t_end") c.t_end = to_double(value, key);
            else if (key == "tau1") c.kernel1 = model::KernelSpec::dirac(to_double(value, key));
            else if (key == "tau2") c.kernel2 = model::KernelSpec::dirac(to_double(value, key));
            else if (key == "q2") c.kernel2 = model::KernelSpec::gamma(0, to_double(value, key));
            else if (key == "out") c.out_dir = value;
            else if (key == "json") c.json_output = (value == "true" || value == "1");
            else if (key == "k_max") c.k_max = static_cast<int>(to_double(value, key));
            else if (key == "branches") c.branches = static_cast<int>(to_double(value, key));
            else if (key == "residual_tol") c.tol.residual = to_double(value, key);
            else if (key == "method") c.method = value;
            else if (key == "zero_nonlinear") c.zero_nonlinear = (value == "true" || value == "1");
            else if (key == "delay_x2") c.delay_x2 = (value == "true" || value == "1");
            else if (key == "omega") c.omega_override = to_double(value, key);
            else if (key == "tau_crit") c.tau_crit_override = to_double(value, key);
            else if (key == "history") {
                std::istringstream hs(value);
                std::string kind;
                hs >> kind;
                if (kind == "perturbed") {
                    double d = -1.0;
                    hs >> d;
                    c.history = integrate::HistorySpec::perturbed(d);
                } else if (kind == "constant") {
                    double x, y;
                    if (!(hs >> x >> y))
                        throw ValidationError("config: constant history needs x and y");
                    c.history = integrate::HistorySpec::constant({x, y});
                } else {
                    throw ValidationError("config: unknown history kind '" + kind + "'");
                }
            } else {
                throw ValidationError("config: unknown run key '" + key + "'");
            }
        } else {
            throw ValidationError("config line " + std::to_string(lineno)
                                  + ": key outside of any section");
        }
    }
    return c;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ValidationError(std::string("config JSON parse error: ") + e.what());
        }
        return config_from_json(j);
    }
    return parse_config_text(text);
}

} // namespace tumordde::cli
