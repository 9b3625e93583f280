#pragma once

#include "bgc/phase_space.hpp"

namespace bgc {

/// -ln rho = x.Q x/2 + ln Z in Weyl form.
struct GaussianLog {
    Mat2 q_mat = Mat2::Zero();
    double log_z = 0.0;
};

double symplectic_eigenvalue(const CovarianceMatrix& G);

/// 0.5 ln((z+1)/(z-1)); throws for z <= 1 + 1e-12.
double arccoth(double z);

double entropy_f(double z);
/// z arccoth(z) + ln(sqrt(z^2-1)/2)
double entropy_f_dual(double z);

struct SymbolTrace {
    double symbol = 1.0;
    double trace = 0.0;
};

/// Weyl symbol of exp(-beta H) for H = x.Q x/2 at x, and its trace.
SymbolTrace exp_quadratic_symbol(const Mat2& q_mat, double beta, double hbar, const Vec2& x);

GaussianLog log_gaussian(const CovarianceMatrix& G);

/// f(z) with z = sqrt(det G); the Weyl-trace route is evaluated too and must agree.
double entropy_gaussian(const CovarianceMatrix& G);

double entropy_cov(const ChannelSpec& spec, const GaussianTerm& term, double t);
double entropy_perturbative(const ChannelSpec& spec, const GaussianTerm& term, double t);
double entropy_semiclassical(const ChannelSpec& spec, const GaussianTerm& term, double t);

} // namespace bgc
