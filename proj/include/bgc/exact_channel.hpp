#pragma once

#include "bgc/grid.hpp"
#include "bgc/phase_space.hpp"

namespace bgc {

/// u, v, ch = (cosh(wt)-1)/w^2, sh = sinh(wt)/w with w = sigma gamma eta and
/// beta = 2 sigma^2/g.
struct AuxFunctions {
    double u = 1.0, v = 1.0, ch = 0.0, sh = 0.0;
    double omega = 0.0, beta = 0.0;
    /// (t v - sh - 2 beta ch) / omega^2, finite at omega = 0
    double dnum = 0.0;
};

struct EvolutionParameters {
    double a = 1.0;
    double c = 1.0;
    double p_cap = 0.0;
    double q_cap = 0.0;
    double d_damp = 0.0;
    double phi = 0.0;
};

AuxFunctions aux_functions(const ChannelSpec& spec, double g, double eta, double t);

EvolutionParameters evolve_params(const ChannelSpec& spec, const GaussianTerm& term, double eta,
                                  double t);

/// gamma = 0 damping exponent in closed form.
double d_gamma_zero(const ChannelSpec& spec, const GaussianTerm& term, double eta, double t);

/// chi(t, xi, eta) of one term, weight included.
cplx char_evolved(const ChannelSpec& spec, const GaussianTerm& term, double xi, double eta,
                  double t);
cplx char_evolved(const ChannelSpec& spec, const StateSum& state, double xi, double eta,
                  double t);

/// Same value written with the ansatz amplitude c sqrt(a/g) instead of 1/sqrt(u).
cplx char_evolved_ansatz(const ChannelSpec& spec, const GaussianTerm& term, double xi,
                         double eta, double t);

/// Partial transform w(t,p,eta) = \int exp(i q eta/hbar) W(t,p,q) dq, weight included.
cplx partial_wigner(const ChannelSpec& spec, const GaussianTerm& term, double p, double eta,
                    double t);
cplx partial_wigner(const ChannelSpec& spec, const StateSum& state, double p, double eta,
                    double t);

struct InverseTransformOptions {
    /// eta half-width in units of sqrt(hbar g) around each term's center
    double half_width = 13.0;
    /// 0 selects a step from the q extent of the target grid
    double d_eta = 0.0;
};

/// W(t,p,q) on the grid by trapezoidal inversion of the partial transform.
PhaseSpaceGrid wigner_evolved_grid(const ChannelSpec& spec, const StateSum& state, double t,
                                   PhaseSpaceGrid grid, const InverseTransformOptions& opt = {});

} // namespace bgc
