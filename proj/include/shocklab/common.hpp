#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace shocklab {

// v^beta with fast paths for the common exponents 0 and 1.
inline double pow_beta(double v, double beta) {
    if (beta == 1.0) return v;
    if (beta == 0.0) return 1.0;
    return std::pow(v, beta);
}

// Configuration / input validation failure. CLI exit code 2.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Numerical failure (blow-up, lost positivity, non-monotone profile, ...).
// CLI exit code 3.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem failure. CLI exit code 4.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Trapezoid quadrature of nodal samples on a uniform grid.
inline double trapezoid(const std::vector<double>& f, double dx) {
    if (f.size() < 2) return 0.0;
    double s = 0.5 * (f.front() + f.back());
    for (std::size_t j = 1; j + 1 < f.size(); ++j) s += f[j];
    return s * dx;
}

}  // namespace shocklab
