#include "bgc/entropy.hpp"

#include <cmath>

#include "bgc/approximations.hpp"
#include "bgc/observables.hpp"

namespace bgc {

double symplectic_eigenvalue(const CovarianceMatrix& G)
{
    const Mat2& g = G.g;
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    require(std::abs(g(0, 1) - g(1, 0)) <= 1e-12 * scale, "covariance matrix is not symmetric");
    require(g(0, 0) > 0.0 && g.determinant() > 0.0, "covariance matrix is not positive definite");
    return std::sqrt(g.determinant());
}

double arccoth(double z)
{
    if (!(z > 1.0 + 1e-12)) throw DomainError("pure-state singularity: arccoth needs z > 1");
    return 0.5 * std::log((z + 1.0) / (z - 1.0));
}

double entropy_f(double z)
{
    require(std::isfinite(z) && z >= 1.0 - 1e-12, "entropy_f needs z >= 1");
    if (z <= 1.0) return 0.0;
    const double a = 0.5 * (z + 1.0), b = 0.5 * (z - 1.0);
    return a * std::log(a) - b * std::log(b);
}

double entropy_f_dual(double z)
{
    require(std::isfinite(z) && z >= 1.0 - 1e-12, "entropy_f needs z >= 1");
    if (z <= 1.0) return 0.0;
    return z * arccoth(z) + std::log(0.5 * std::sqrt((z - 1.0) * (z + 1.0)));
}

SymbolTrace exp_quadratic_symbol(const Mat2& q_mat, double beta, double hbar, const Vec2& x)
{
    require(beta > 0.0, "beta must be > 0");
    require(hbar > 0.0, "hbar must be > 0");
    require(q_mat(0, 0) > 0.0 && q_mat.determinant() > 0.0, "Q must be positive definite");
    const double omega = std::sqrt(q_mat.determinant());
    const double arg = 0.5 * omega * hbar * beta;
    const double h = 0.5 * x.dot(q_mat * x);
    SymbolTrace r;
    r.symbol = std::exp(-2.0 * std::tanh(arg) / (omega * hbar) * h) / std::cosh(arg);
    r.trace = 1.0 / (2.0 * std::sinh(arg));
    return r;
}

GaussianLog log_gaussian(const CovarianceMatrix& G)
{
    const double z = symplectic_eigenvalue(G);
    GaussianLog l;
    l.q_mat = 2.0 * (z / G.hbar) * arccoth(z) * G.g.inverse();
    l.log_z = std::log(0.5 * std::sqrt((z - 1.0) * (z + 1.0)));
    return l;
}

double entropy_gaussian(const CovarianceMatrix& G)
{
    const double z = symplectic_eigenvalue(G);
    require(z >= 1.0 - 1e-12, "covariance violates the uncertainty relation");
    const double s = entropy_f(z);
    if (z > 1.0 + 1e-12) {
        // S = <x.Q x/2> + ln Z with <x x^T> = (hbar/2) G
        const GaussianLog l = log_gaussian(G);
        const double s2 = 0.5 * (l.q_mat * (0.5 * G.hbar * G.g)).trace() + l.log_z;
        if (std::abs(s2 - s) > 1e-9 * std::max(1.0, s))
            throw NumericalError("entropy routes disagree");
    }
    return s;
}

double entropy_cov(const ChannelSpec& spec, const GaussianTerm& term, double t)
{
    const MomentTable mt = moments_closed(spec, term, t);
    const double z = 2.0 * std::sqrt(mt.cov.determinant()) / spec.hbar;
    return entropy_f(std::max(z, 1.0));
}

double entropy_perturbative(const ChannelSpec& spec, const GaussianTerm& term, double t)
{
    ChannelSpec s0 = spec;
    s0.gamma = 0.0;
    const MomentTable base = moments_closed(s0, term, t);
    const double hb = spec.hbar;
    const double z0 = 2.0 * std::sqrt(base.cov.determinant()) / hb;
    const double slope = arccoth(z0);  // f'(z)
    const double s2 = spec.sigma * spec.sigma, p0 = term.p0();
    // gamma^2 coefficient of the q-variance
    const double dvq = hb * p0 * p0 * t + 0.5 * hb * hb * (term.g * t + s2 * t * t);
    const double dz = 2.0 * spec.gamma * spec.gamma * dvq * base.cov(0, 0) / (hb * hb * z0);
    return entropy_f(z0) + slope * dz;
}

double entropy_semiclassical(const ChannelSpec& spec, const GaussianTerm& term, double t)
{
    const CovarianceMatrix G = sc_gaussian_covariance(spec, term, t);
    return entropy_f(std::max(symplectic_eigenvalue(G), 1.0));
}

} // namespace bgc
