#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace gridcode {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using IMat = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IVec = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;
using cplx = std::complex<double>;

// All quadratures are ordered (q1, p1, q2, p2, ...). Translation lengths are in
// units of l = sqrt(2*pi), so l^2 = 2*pi throughout.
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kL2 = 2.0 * kPi;     // l^2
inline const double kL = std::sqrt(kL2);     // l

// Base error. `exit_code` maps onto the CLI contract: 2 = validation failure
// (bad input / non-code), 3 = numerical failure (lost integrality, no
// convergence), 64 = usage.
struct error : std::runtime_error {
    int exit_code;
    explicit error(const std::string& msg, int code = 2)
        : std::runtime_error(msg), exit_code(code) {}
};

struct validation_error : error {
    explicit validation_error(const std::string& msg) : error(msg, 2) {}
};

struct numerical_error : error {
    explicit numerical_error(const std::string& msg) : error(msg, 3) {}
};

}  // namespace gridcode
