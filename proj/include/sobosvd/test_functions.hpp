#pragma once
//
// Named reference functions on [-pi, pi]^d used by the experiments.
//

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "error.hpp"

namespace sobosvd {

using Function2D = std::function<double(double, double)>;
using Function3D = std::function<double(double, double, double)>;

namespace functions {

inline double r06(double x, double y) { return std::pow(x * x + y * y, 0.3); }
inline double absdiag(double x, double y) { return std::pow(std::abs(x + y), 0.6); }
inline double expcos(double x, double y) { return std::exp(std::cos(x) * std::cos(y)); }
inline double ring(double x, double y) { return std::pow(std::abs(1.0 - (x * x + y * y)), 0.95); }
inline double coscos(double x, double y) { return std::cos(x) * std::cos(y); }
inline double r06_3d(double x, double y, double z) { return std::pow(x * x + y * y + z * z, 0.3); }

/// -Laplace(exp(cos x cos y)).
inline double expcos_neg_laplacian(double x, double y) {
    const double g = std::cos(x) * std::cos(y);
    const double gx = -std::sin(x) * std::cos(y), gy = -std::cos(x) * std::sin(y);
    return -std::exp(g) * (gx * gx + gy * gy - 2.0 * g);
}

} // namespace functions

inline const std::vector<std::string>& function_tags() {
    static const std::vector<std::string> tags{"r06", "absdiag", "expcos", "ring", "coscos"};
    return tags;
}

inline Function2D function_by_tag(const std::string& tag) {
    if (tag == "r06") return functions::r06;
    if (tag == "absdiag") return functions::absdiag;
    if (tag == "expcos") return functions::expcos;
    if (tag == "ring") return functions::ring;
    if (tag == "coscos") return functions::coscos;
    throw InvalidArgument("unknown function tag '" + tag + "'");
}

inline Function3D function3d_by_tag(const std::string& tag) {
    if (tag == "r06") return functions::r06_3d;
    throw InvalidArgument("unknown 3-D function tag '" + tag + "'");
}

} // namespace sobosvd
