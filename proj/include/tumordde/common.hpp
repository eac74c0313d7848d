#ifndef TUMORDDE_COMMON_HPP
#define TUMORDDE_COMMON_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace tumordde {

using cx = std::complex<double>;

inline constexpr const char* kToolVersion = "tumordde 1.0.0";

/// Invalid user input (bad parameter value, malformed config). CLI exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A numeric procedure could not produce a certified result. CLI exit code 3.
class NumericError : public std::runtime_error {
public:
    enum class Kind {
        NoCrossing,
        Degenerate,
        SingularEigenvector,
        SingularE,
        ZeroDenominator,
        DegenerateTransversality,
        InsufficientData,
    };

    NumericError(Kind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Residual/agreement thresholds. Defaults follow the library contract;
/// individual entries can be overridden per run.
struct Tolerances {
    double residual = 1e-9;          // |Delta(i*omega, tau)| certification
    double eigen_residual = 1e-8;    // eigenvector equation residual
    double biorth = 1e-10;           // |<h*,h> - 1|
    double transversality_min = 1e-12;  // below this, a crossing is degenerate
    double transversality_agree = 1e-3; // closed form vs finite differences
    double linear_solve = 1e-9;      // E-vector closed form vs direct solve
};

} // namespace tumordde

#endif
