#include "bgc/propagator.hpp"

#include <cmath>

namespace bgc {

namespace {

/// tau = tanh(omega t/2)/omega, the damping exponent (t - 2 tau)/(2 gamma^2 hbar)
/// and sech(omega t/2), with the omega -> 0 limits taken by series.
struct SymbolParts {
    double tau;
    double damping;
    double sech;
};

SymbolParts symbol_parts(const ChannelSpec& spec, double t, double eta)
{
    require(std::isfinite(t) && t >= 0.0, "time must be >= 0");
    const double omega = spec.sigma * spec.gamma * eta;
    const double x = omega * t;
    SymbolParts s;
    s.sech = 1.0 / std::cosh(0.5 * x);
    if (std::abs(x) < 1e-3) {
        const double x2 = x * x;
        s.tau = 0.5 * t * (1.0 - x2 / 12.0 + x2 * x2 / 120.0 - 17.0 * x2 * x2 * x2 / 20160.0);
        const double s2e2 = spec.sigma * spec.sigma * eta * eta;
        s.damping = s2e2 * t * t * t * (1.0 / 12.0 - x2 / 120.0 + 17.0 * x2 * x2 / 20160.0) /
                    (2.0 * spec.hbar);
        return s;
    }
    s.tau = std::tanh(0.5 * x) / omega;
    s.damping = (t - 2.0 * s.tau) / (2.0 * spec.gamma * spec.gamma * spec.hbar);
    return s;
}

} // namespace

cplx complex_hamiltonian(const ChannelSpec& spec, double eta, double xi, double p)
{
    const double s2 = spec.sigma * spec.sigma, gm2 = spec.gamma * spec.gamma;
    return cplx(-eta * p, -0.5 * (s2 * xi * xi + gm2 * eta * eta * p * p));
}

cplx weyl_symbol(const ChannelSpec& spec, double t, double eta, double xi, double p)
{
    validate(spec);
    const SymbolParts s = symbol_parts(spec, t, eta);
    const cplx h = complex_hamiltonian(spec, eta, xi, p);
    const cplx e = cplx(0.0, -2.0 / spec.hbar) * s.tau * h;
    return s.sech * std::exp(e - s.damping);
}

cplx kernel(const ChannelSpec& spec, double t, double eta, double p, double p_prime)
{
    validate(spec);
    const SymbolParts s = symbol_parts(spec, t, eta);
    const double hb = spec.hbar;
    const double width = s.tau * spec.sigma * spec.sigma;
    if (!(t > 0.0) || !(width > 1e-300)) throw NumericalError("distributional kernel: tau sigma^2 = 0");
    const double m = 0.5 * (p + p_prime);
    const double d = p - p_prime;
    const double gm2 = spec.gamma * spec.gamma;
    const double re = -s.damping - s.tau * gm2 * eta * eta * m * m / hb - d * d / (4.0 * hb * width);
    const double im = 2.0 * s.tau * eta * m / hb;
    const double pre = s.sech * std::sqrt(kPi * hb / width) / (2.0 * kPi * hb);
    return pre * std::exp(cplx(re, im));
}

KernelApplication apply_kernel(const ChannelSpec& spec, double t, double eta, const SampledFunction& w0)
{
    validate(spec);
    require(w0.values.size() >= 2 && w0.dp > 0.0, "sampled function needs >= 2 nodes and dp > 0");
    const std::size_t n = w0.values.size();
    KernelApplication out;
    out.w.p_min = w0.p_min;
    out.w.dp = w0.dp;
    out.w.values.assign(n, cplx(0.0));
    for (std::size_t i = 0; i < n; ++i) {
        cplx s = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double wt = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
            s += wt * kernel(spec, t, eta, w0.p(i), w0.p(k)) * w0.values[k];
        }
        out.w.values[i] = s * w0.dp;
    }
    double total = 0.0, tail = 0.0;
    const std::size_t edge = std::min<std::size_t>(5, n / 2);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = std::abs(out.w.values[i]);
        total += a;
        if (i < edge || i + edge >= n) tail += a;
    }
    out.tail_mass = total > 0.0 ? tail / total : 0.0;
    out.tail_warning = out.tail_mass > 1e-10;
    return out;
}

} // namespace bgc
