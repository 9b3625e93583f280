#pragma once

#include "bgc/phase_space.hpp"

namespace bgc {

/// Semiclassical G_t (dimensionless, (p,q) ordering) for a dz = 0 term.
CovarianceMatrix sc_gaussian_covariance(const ChannelSpec& spec, const GaussianTerm& term, double t);

/// Gamma = (hbar/2) G_t + (hbar^2/2) gamma^2 (g t + sigma^2 t^2) E_qq
Mat2 exact_covariance_from_sc(const ChannelSpec& spec, const GaussianTerm& term, double t);

/**
 * @brief Gaussian wave packet on doubled phase space
 *
 * The state is exp((i/hbar)[d + x.Y + (x-X).B(x-X)/2]) with B = 2i G^{-1},
 * amplitude c, all in (p,q) ordering.
 */
struct SemiclassicalState {
    Vec2 x_cap = Vec2::Zero();
    Vec2 y_cap = Vec2::Zero();
    CMat2 g_mat = CMat2::Identity();
    cplx c_amp = 1.0;
    cplx d_phase = 0.0;
};

/// X = z0, Y = Omega dz, G = diag(g, 1/g).
SemiclassicalState sc_initial(const GaussianTerm& term);

/// K(x,y) = p y_q - (i/2)[sigma^2 y_p^2 + gamma^2 p^2 y_q^2]
cplx sc_symbol(const ChannelSpec& spec, const Vec2& x, const Vec2& y);

/// Decoherence rate -Im K(x,y) >= 0.
double sc_rate(const ChannelSpec& spec, const Vec2& x, const Vec2& y);

/// RK4 with step dt, accepted only if a run with dt/2 agrees to 1e-8.
SemiclassicalState sc_nonhermitian_evolve(const ChannelSpec& spec, const SemiclassicalState& s0,
                                          double t, double dt = 1e-3);

/// c/(pi hbar sqrt(det G)) exp((i/hbar)[d + x.Y + (x-X).B(x-X)/2]) at x.
cplx sc_wigner(const SemiclassicalState& s, double hbar, const Vec2& x);
/// Leading-order Im d(t): t rate(X0,Y0), or sigma^2 t^3 (Y0_q)^2/6 when the rate vanishes.
double decoherence_onset(const ChannelSpec& spec, const Vec2& x0, const Vec2& y0, double t);

/// First-order (in gamma^2) correction R1(t) applied to the gamma = 0 evolved
/// Gaussian, evaluated at x. Only dz = 0 terms.
double perturb_correction(const ChannelSpec& spec, const GaussianTerm& term, double t,
                          const Vec2& x);

/// Gamma = 0 Wigner function plus gamma^2 times perturb_correction.
double perturbed_wigner(const ChannelSpec& spec, const GaussianTerm& term, double t, const Vec2& x);

/// Gamma = 0 evolved Wigner function of a dz = 0 term.
double gaussian_channel_wigner(const ChannelSpec& spec, const GaussianTerm& term, double t,
                               const Vec2& x);

} // namespace bgc
