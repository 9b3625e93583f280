#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace bgc {

using cplx = std::complex<double>;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using CVec2 = Eigen::Vector2cd;
using CMat2 = Eigen::Matrix2cd;

inline constexpr double kPi = 3.14159265358979323846;

/// Raised when an input violates a documented precondition.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure cannot reach its target accuracy.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& msg)
{
    if (!ok) throw DomainError(msg);
}

/// Physical parameters of the channel: H = p^2/2, L1 = sigma q, L2 = gamma H.
struct ChannelSpec {
    double sigma = 0.0;
    double gamma = 0.0;
    double hbar = 1.0;
};

void validate(const ChannelSpec& spec);

} // namespace bgc
