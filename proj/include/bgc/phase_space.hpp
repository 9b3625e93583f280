#pragma once

#include <string>
#include <vector>

#include "bgc/common.hpp"

namespace bgc {

/// Standard symplectic form in (p,q) ordering: [[0,-1],[1,0]].
Mat2 symplectic_form();

/// Dimensionless covariance G; the physical covariance is (hbar/2) G.
struct CovarianceMatrix {
    Mat2 g = Mat2::Identity();
    double hbar = 1.0;
};

/**
 * @brief One Gaussian Wigner component
 *
 * W(p,q) = weight (1/pi hbar) exp((i/hbar)(q dp - p dq))
 *          exp(-[g (q-q0)^2 + (p-p0)^2/g] / hbar)
 * with z0 = (p0,q0) and dz = (dp,dq).
 */
struct GaussianTerm {
    Vec2 z0 = Vec2::Zero();
    Vec2 dz = Vec2::Zero();
    double g = 1.0;
    cplx weight = 1.0;

    double p0() const { return z0(0); }
    double q0() const { return z0(1); }
    double dp() const { return dz(0); }
    double dq() const { return dz(1); }
    bool oscillatory() const { return dz(0) != 0.0 || dz(1) != 0.0; }
};

struct StateSum {
    std::vector<GaussianTerm> terms;
    double hbar = 1.0;
};

void validate(const GaussianTerm& term);
void validate(const StateSum& state);

StateSum coherent_state(const Vec2& z0, double g, double hbar);

/// Normalization constant of the superposition of coherent states at z1, z2.
double cat_normalization(const Vec2& z1, const Vec2& z2, double g, double hbar);

/// Four-term state: the two coherent bumps plus the two interference terms at
/// the midpoint with offsets +-(z2 - z1); all weights 1/N.
StateSum cat_state(const Vec2& z1, const Vec2& z2, double g, double hbar);

cplx wigner_term(const GaussianTerm& term, double hbar, const Vec2& x);
cplx wigner_eval(const StateSum& state, const Vec2& x);

/// chi(xi) = \int exp((i/hbar) xi.x) W(x) dx, closed form per term.
cplx char_term(const GaussianTerm& term, double hbar, const Vec2& xi);
cplx char_eval(const StateSum& state, const Vec2& xi);

bool uncertainty_check(const CovarianceMatrix& G);

} // namespace bgc
