#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace xyz {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RowVec = Eigen::RowVectorXcd;
using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;
using Row2 = Eigen::RowVector2cd;
using Mat4 = Eigen::Matrix4cd;

constexpr double kPi = 3.14159265358979323846;
inline const cplx I1{0.0, 1.0};

// Invalid inputs (index out of range, bad nome, malformed configuration).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A denominator vanished at the requested argument.
class PoleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Rank loss or coincident nodes: genericity hypotheses failed.
class DegeneracyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Iterative solver did not converge.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Relative Frobenius distance, guarded against zero norms.
inline double rel_diff(const Mat& a, const Mat& b) {
    double s = std::max({a.norm(), b.norm(), 1e-300});
    return (a - b).norm() / s;
}

inline double rel_diff(cplx a, cplx b) {
    double s = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / s;
}

}  // namespace xyz
