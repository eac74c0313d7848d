#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "tumordde/chareq.hpp"
#include "tumordde/commands.hpp"
#include "tumordde/output.hpp"

using namespace tumordde;
using namespace tumordde::cli;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string tmpdir(const std::string& tag) {
    const auto d = std::filesystem::temp_directory_path() / ("tumordde_test_" + tag);
    std::filesystem::remove_all(d);
    std::filesystem::create_directories(d);
    return d.string();
}

} // namespace

TEST_CASE("config JSON round-trip is lossless for all numeric fields") {
    RunConfig c;
    c.params = {2.5000000000000004, 1.0 / 3.0, 0.1, 0.4, 0.95, 2.0};
    c.kernel1 = model::KernelSpec::dirac(1.9855842279774202);
    c.kernel2 = model::KernelSpec::gamma(0, 0.1);
    c.dt = 1e-3;
    c.t_end = 123.456789012345678;
    c.history = integrate::HistorySpec::constant({0.17857142857142858, 2.5});
    c.k_max = 17;
    c.tol.residual = 3.333e-10;
    c.omega_override = 0.45342803326914803;

    const auto j = config_to_json(c);
    const auto text = j.dump();
    const auto back = config_from_json(nlohmann::json::parse(text));
    CHECK(back.params.a1 == c.params.a1);
    CHECK(back.params.a2 == c.params.a2);
    CHECK(back.params.b1 == c.params.b1);
    CHECK(back.kernel1.tau == c.kernel1.tau);
    CHECK(back.kernel2.rate == c.kernel2.rate);
    CHECK(back.dt == c.dt);
    CHECK(back.t_end == c.t_end);
    CHECK(back.history.point[0] == c.history.point[0]);
    CHECK(back.k_max == c.k_max);
    CHECK(back.tol.residual == c.tol.residual);
    REQUIRE(back.omega_override.has_value());
    CHECK(*back.omega_override == *c.omega_override);
}

TEST_CASE("sectioned config text parses") {
    const std::string text = R"(# run configuration
[model]
a1 = 2.5
a2 = 1
b1 = 1
b2 = 0.4
b3 = 0.95
b4 = 2

[kernels]
kernel1 = dirac 1.5
kernel2 = weak 0.1

[run]
dt = 0.002
t_end = 200
history = constant 0.2 2.6
out = somewhere
k_max = 32
)";
    const RunConfig c = parse_config_text(text);
    CHECK(c.params.a1 == 2.5);
    CHECK(c.params.b3 == 0.95);
    CHECK(c.kernel1.tau == 1.5);
    CHECK(c.weak_case());
    CHECK(c.q2() == 0.1);
    CHECK(c.dt == 0.002);
    CHECK(c.history.kind == integrate::HistorySpec::Kind::constant);
    CHECK(c.history.point[1] == 2.6);
    CHECK(c.out_dir == "somewhere");
    CHECK(c.k_max == 32);

    CHECK_THROWS_AS(parse_config_text("[bogus]\nx = 1\n"), ValidationError);
    CHECK_THROWS_AS(parse_config_text("[model]\nzz = 1\n"), ValidationError);
}

TEST_CASE("command JSON output re-ingests as the same config") {
    RunConfig cfg;
    cfg.kernel1 = model::KernelSpec::dirac(0.3);
    cfg.kernel2 = model::KernelSpec::dirac(0.07);
    const auto res = cmd_analyze(cfg);
    const RunConfig back = config_from_json(res.json);
    CHECK(back.params.a1 == cfg.params.a1);
    CHECK(back.kernel1.tau == cfg.kernel1.tau);
    CHECK(back.kernel2.tau == cfg.kernel2.tau);
    CHECK(back.dt == cfg.dt);
    CHECK(back.t_end == cfg.t_end);
}

TEST_CASE("simulate writes deterministic CSV and SVG artifacts") {
    RunConfig cfg;
    cfg.kernel1 = model::KernelSpec::dirac(1.0);
    cfg.kernel2 = model::KernelSpec::dirac(0.25);
    cfg.t_end = 5.0;
    cfg.dt = 0.01;
    cfg.out_dir = tmpdir("sim_a");
    const auto r1 = cmd_simulate(cfg);
    RunConfig cfg2 = cfg;
    cfg2.out_dir = tmpdir("sim_b");
    const auto r2 = cmd_simulate(cfg2);

    const std::string csv1 = slurp(cfg.out_dir + "/trajectory.csv");
    std::string csv2 = slurp(cfg2.out_dir + "/trajectory.csv");
    // the only permitted difference is the echoed out directory
    size_t pos;
    while ((pos = csv2.find("sim_b")) != std::string::npos)
        csv2.replace(pos, 5, "sim_a");
    CHECK(csv1 == csv2);

    // header contract
    std::istringstream is(csv1);
    std::string line;
    bool saw_header = false;
    while (std::getline(is, line)) {
        if (line.rfind("#", 0) == 0) continue;
        CHECK(line == "t,x,y");
        saw_header = true;
        break;
    }
    CHECK(saw_header);
    // first column of the first row is t = 0
    std::getline(is, line);
    CHECK(line.rfind("0,", 0) == 0);

    const std::string svg1 = slurp(cfg.out_dir + "/phase.svg");
    CHECK(svg1.find("<svg") != std::string::npos);
    CHECK(svg1.find("<metadata>") != std::string::npos);
    CHECK(svg1.find("polyline") != std::string::npos);

    // chain runs add the z column
    RunConfig cfg3 = cfg;
    cfg3.kernel2 = model::KernelSpec::gamma(0, 0.5);
    cfg3.out_dir = tmpdir("sim_c");
    cmd_simulate(cfg3);
    const std::string csv3 = slurp(cfg3.out_dir + "/trajectory.csv");
    CHECK(csv3.find("\nt,x,y,z\n") != std::string::npos);
}

TEST_CASE("identical configs give byte-identical JSON") {
    RunConfig cfg;
    cfg.kernel2 = model::KernelSpec::gamma(0, 0.1);
    const auto a = cmd_hopf(cfg);
    const auto b = cmd_hopf(cfg);
    CHECK(a.json.dump() == b.json.dump());
    CHECK(a.text == b.text);
}

TEST_CASE("inadmissible parameters are rejected with the violated inequality") {
    RunConfig cfg;
    cfg.params.b2 = 5.0; // b2/b1 = 5 >= b4/b3
    CHECK_THROWS_WITH_AS(cmd_analyze(cfg),
                         doctest::Contains("b2/b1"), ValidationError);
}

TEST_CASE("hopf reports a structured no-crossing record") {
    RunConfig cfg;
    cfg.kernel2 = model::KernelSpec::dirac(1000.0); // crossings capped away by k_max
    cfg.k_max = 4;
    const auto res = cmd_hopf(cfg);
    CHECK(res.exit_code == 3);
    CHECK(res.json.at("found") == false);
    CHECK(res.json.contains("reason"));
}

TEST_CASE("normalform accepts a certified supplied point and rejects others") {
    RunConfig cfg;
    cfg.kernel2 = model::KernelSpec::gamma(0, 0.1);
    const auto hp = chareq::hopf_point_dw(cfg.params, 0.1);
    cfg.omega_override = hp.omega;
    cfg.tau_crit_override = hp.tau_crit;
    const auto res = cmd_normalform(cfg);
    CHECK(res.exit_code == 0);
    CHECK(res.json.at("mu2").get<double>() == doctest::Approx(0.1691969910).epsilon(1e-8));

    cfg.omega_override = hp.omega * 1.1; // not a crossing
    CHECK_THROWS_AS(cmd_normalform(cfg), ValidationError);
}

TEST_CASE("zero-nonlinearity debug mode zeroes the quantities") {
    RunConfig cfg;
    cfg.kernel2 = model::KernelSpec::dirac(0.01);
    cfg.zero_nonlinear = true;
    const auto res = cmd_normalform(cfg);
    CHECK(res.json.at("mu2").get<double>() == 0.0);
    CHECK(res.json.at("beta2").get<double>() == 0.0);
    CHECK(res.json.at("T2").get<double>() == 0.0);
    CHECK(res.json.at("C1").at("re").get<double>() == 0.0);
}

TEST_CASE("normalform verdicts come from the allowed vocabulary") {
    RunConfig cfg;
    cfg.kernel2 = model::KernelSpec::dirac(0.01);
    const auto res = cmd_normalform(cfg);
    const auto v = res.json.at("verdicts");
    const std::string dir = v.at("direction").get<std::string>();
    const std::string st = v.at("stability").get<std::string>();
    const std::string pe = v.at("period").get<std::string>();
    CHECK((dir == "supercritical" || dir == "subcritical"));
    CHECK((st == "orbitally stable" || st == "orbitally unstable"));
    CHECK((pe == "period increases" || pe == "period decreases"));
}

TEST_CASE("reproduction report covers the printed quantity set") {
    RunConfig cfg;
    cfg.out_dir = tmpdir("rep");
    cfg.t_end = 60.0; // keep the scenario plots quick
    cfg.dt = 0.01;
    const auto res = cmd_reproduce_paper(cfg);
    CHECK(res.exit_code == 0);

    std::set<std::string> names;
    int rows = 0;
    for (const auto& sc : res.json.at("scenarios")) {
        for (const auto& row : sc.at("rows")) {
            ++rows;
            names.insert(row.at("quantity").get<std::string>());
            CHECK(row.contains("printed"));
            CHECK(row.contains("artifact"));
            CHECK(row.contains("classification"));
            // every artifact value is residual-certified
            CHECK(row.at("certification").at("value").get<double>() < 1e-8);
        }
    }
    CHECK(rows == 17);
    const std::set<std::string> want = {
        "x0", "y0", "omega0", "mu2", "beta2", "T2", "tau10",
        "omega01", "mu21", "beta21", "T21", "tau11_star", "tau11"};
    CHECK(names == want);

    // the x0 contradiction must be flagged
    bool x0_flagged = false;
    for (const auto& row : res.json.at("scenarios")[0].at("rows"))
        if (row.at("quantity") == "x0") {
            CHECK(row.at("printed").get<double>() == 0.1524390244);
            CHECK(row.at("artifact").get<double>()
                  == doctest::Approx(0.375 / 2.1).epsilon(1e-12));
            CHECK(row.at("classification") == "mismatch");
            x0_flagged = true;
        }
    CHECK(x0_flagged);

    CHECK(std::filesystem::exists(cfg.out_dir + "/reproduction_report.json"));
    CHECK(res.json.at("q2_scan").contains("best_q2"));
}

TEST_CASE("svg plot output is well-formed and annotated on blow-up") {
    SvgSeries s;
    for (int i = 0; i < 500; ++i) {
        s.x.push_back(0.01 * i);
        s.y.push_back(std::sin(0.1 * i));
    }
    const auto svg = svg_plot(s, "title", "t", "x", nlohmann::json{{"k", 1}},
                              "integration truncated at t = 3");
    CHECK(svg.find("integration truncated") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK_THROWS_AS(svg_plot(SvgSeries{}, "t", "x", "y", {}, ""), ValidationError);
}
