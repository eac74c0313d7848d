#include "tumordde/output.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace tumordde::cli {

std::string fmt15(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

std::string trajectory_csv(const integrate::Trajectory& traj,
                           const nlohmann::json& config_echo) {
    std::ostringstream os;
    os << "# " << kToolVersion << "\n";
    os << "# config: " << config_echo.dump() << "\n";
    os << "# kernel: " << traj.kernel_desc << "\n";
    os << "# tau1 = " << fmt15(traj.tau1);
    if (traj.kernel_desc.find("gamma") != std::string::npos
        || traj.kernel_desc.find("weak") != std::string::npos)
        os << ", q2 = " << fmt15(traj.q2);
    else
        os << ", tau2 = " << fmt15(traj.tau2);
    os << ", dt = " << fmt15(traj.dt) << "\n";
    os << "# history: " << traj.history_desc << "\n";
    if (traj.blown_up)
        os << "# blow_up: t = " << fmt15(traj.blowup_time) << "\n";
    for (const auto& w : traj.warnings) os << "# warning: " << w << "\n";
    os << (traj.dim == 2 ? "t,x,y" : "t,x,y,z") << "\n";
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        os << fmt15(traj.times[i]) << ',' << fmt15(traj.states[i][0]) << ','
           << fmt15(traj.states[i][1]);
        if (traj.dim == 3) os << ',' << fmt15(traj.states[i][2]);
        os << "\n";
    }
    return os.str();
}

void write_file(const std::string& path, const std::string& contents) {
    const std::filesystem::path p(path);
    std::error_code ec;
    if (p.has_parent_path())
        std::filesystem::create_directories(p.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << contents;
    if (!out) throw IoError("write failed: " + path);
}

namespace {

/// Round a span to a pleasant tick step (1/2/5 times a power of ten).
double nice_step(double span, int target_ticks) {
    const double raw = span / std::max(1, target_ticks);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double r = raw / mag;
    const double m = r < 1.5 ? 1.0 : r < 3.5 ? 2.0 : r < 7.5 ? 5.0 : 10.0;
    return m * mag;
}

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v == 0.0 ? 0.0 : v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

std::string svg_plot(const SvgSeries& series, const std::string& title,
                     const std::string& xlabel, const std::string& ylabel,
                     const nlohmann::json& config_echo,
                     const std::string& annotation) {
    if (series.x.size() != series.y.size() || series.x.empty())
        throw ValidationError("svg_plot: series must be nonempty and aligned");

    const int W = 800, H = 500;
    const int ml = 70, mr = 20, mt = 40, mb = 55;
    double xmin = series.x[0], xmax = series.x[0];
    double ymin = series.y[0], ymax = series.y[0];
    for (std::size_t i = 1; i < series.x.size(); ++i) {
        xmin = std::min(xmin, series.x[i]);
        xmax = std::max(xmax, series.x[i]);
        ymin = std::min(ymin, series.y[i]);
        ymax = std::max(ymax, series.y[i]);
    }
    if (xmax == xmin) { xmax += 1.0; xmin -= 1.0; }
    if (ymax == ymin) { ymax += 1.0; ymin -= 1.0; }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
       << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
    os << "<metadata>" << xml_escape(std::string(kToolVersion) + " "
                                     + config_echo.dump()) << "</metadata>\n";
    os << "<rect width=\"" << W << "\" height=\"" << H
       << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"16\">"
       << xml_escape(title) << "</text>\n";

    // axes
    os << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr
       << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
       << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";

    const double xstep = nice_step(xmax - xmin, 6);
    for (double t = std::ceil(xmin / xstep) * xstep; t <= xmax + 1e-12 * xstep; t += xstep) {
        const double X = px(t);
        os << "<line x1=\"" << X << "\" y1=\"" << H - mb << "\" x2=\"" << X
           << "\" y2=\"" << H - mb + 5 << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << X << "\" y=\"" << H - mb + 20
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
           << fmt_tick(t) << "</text>\n";
    }
    const double ystep = nice_step(ymax - ymin, 6);
    for (double t = std::ceil(ymin / ystep) * ystep; t <= ymax + 1e-12 * ystep; t += ystep) {
        const double Y = py(t);
        os << "<line x1=\"" << ml - 5 << "\" y1=\"" << Y << "\" x2=\"" << ml
           << "\" y2=\"" << Y << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << ml - 8 << "\" y=\"" << Y + 4
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
           << fmt_tick(t) << "</text>\n";
    }
    os << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 12
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
       << xml_escape(xlabel) << "</text>\n";
    os << "<text x=\"18\" y=\"" << (mt + H - mb) / 2
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
          "transform=\"rotate(-90 18 " << (mt + H - mb) / 2 << ")\">"
       << xml_escape(ylabel) << "</text>\n";

    // decimate long series deterministically
    const std::size_t max_pts = 4000;
    const std::size_t stride = std::max<std::size_t>(1, series.x.size() / max_pts);
    os << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < series.x.size(); i += stride) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(series.x[i]), py(series.y[i]));
        os << buf;
    }
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.2f,%.2f",
                      px(series.x.back()), py(series.y.back()));
        os << buf;
    }
    os << "\"/>\n";

    if (!annotation.empty())
        os << "<text x=\"" << W - mr << "\" y=\"" << mt - 6
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" "
              "fill=\"#a0261f\">" << xml_escape(annotation) << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

} // namespace tumordde::cli
