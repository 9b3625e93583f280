#pragma once

#include <vector>

#include "bgc/common.hpp"

namespace bgc {

/// H(xi,p) = -(i/2)(sigma^2 xi^2 + gamma^2 eta^2 p^2) - eta p
cplx complex_hamiltonian(const ChannelSpec& spec, double eta, double xi, double p);

/// Weyl symbol A(t,xi,p) of the propagator of the partial-transform equation at fixed eta.
cplx weyl_symbol(const ChannelSpec& spec, double t, double eta, double xi, double p);

/// K(t,p,p') with the xi-integral done in closed form. Throws NumericalError
/// ("distributional kernel") when the Gaussian width in p - p' degenerates.
cplx kernel(const ChannelSpec& spec, double t, double eta, double p, double p_prime);

struct SampledFunction {
    double p_min = 0.0;
    double dp = 1.0;
    std::vector<cplx> values;

    double p(std::size_t i) const { return p_min + dp * static_cast<double>(i); }
};

struct KernelApplication {
    SampledFunction w;
    /// |w| mass in the outer five nodes on each side relative to the total
    double tail_mass = 0.0;
    bool tail_warning = false;
};

KernelApplication apply_kernel(const ChannelSpec& spec, double t, double eta,
                               const SampledFunction& w0);

} // namespace bgc
