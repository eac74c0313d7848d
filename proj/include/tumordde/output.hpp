#ifndef TUMORDDE_OUTPUT_HPP
#define TUMORDDE_OUTPUT_HPP

#include <string>

#include <json.hpp>

#include "tumordde/common.hpp"
#include "tumordde/integrate.hpp"

namespace tumordde::cli {

/// Filesystem failure (unwritable path, ...). CLI exit code 4.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// 15-significant-digit fixed formatting used by all CSV rows.
std::string fmt15(double v);

/// Trajectory CSV: '#'-prefixed metadata (tool version, effective config,
/// run descriptors), header t,x,y[,z], rows with 15 significant digits and
/// '\n' line endings. Returns the file contents.
std::string trajectory_csv(const integrate::Trajectory& traj,
                           const nlohmann::json& config_echo);

void write_file(const std::string& path, const std::string& contents);

struct SvgSeries {
    std::vector<double> x, y;
};

/// Self-contained polyline plot with axes, ticks and labels; embeds the
/// effective configuration in a <metadata> element. Deterministic output.
std::string svg_plot(const SvgSeries& series, const std::string& title,
                     const std::string& xlabel, const std::string& ylabel,
                     const nlohmann::json& config_echo,
                     const std::string& annotation = "");

} // namespace tumordde::cli

#endif
