#pragma once

#include "bgc/phase_space.hpp"

namespace bgc {

/// Means (<p>,<q>) and physical covariance Gamma.
struct MomentTable {
    Vec2 mean = Vec2::Zero();
    Mat2 cov = Mat2::Zero();
};

/// <p^n q^m> = (-i hbar)^{n+m} d_xi^n d_eta^m chi(t,0,0), order-6 central differences.
double moment_fd(const ChannelSpec& spec, const GaussianTerm& term, int n, int m, double t);

MomentTable moments_closed(const ChannelSpec& spec, const GaussianTerm& term, double t);

/// tr[rho(t)^2] / tr[rho(0)^2] for the (possibly oscillatory) state.
double purity_ratio(const ChannelSpec& spec, const StateSum& state, double t);

/**
 * @brief Split of the purity ratio into spreading and damping parts
 *
 * ratio = spreading * exp(-exponent), where spreading is the ratio obtained
 * with the damping exponent D(t,eta) switched off.
 */
struct PurityDecomposition {
    double ratio = 1.0;
    double spreading = 1.0;
    double exponent = 0.0;
};

PurityDecomposition purity_decomposition(const ChannelSpec& spec, const StateSum& state, double t);

/// Leading-order short-time law for one oscillatory term.
double purity_short_time(const ChannelSpec& spec, const GaussianTerm& term, double t);
/// Uses the first oscillatory term of the state (1 if there is none).
double purity_short_time(const ChannelSpec& spec, const StateSum& state, double t);

} // namespace bgc
