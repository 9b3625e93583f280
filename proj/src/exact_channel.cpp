#include "bgc/exact_channel.hpp"

#include <algorithm>
#include <cmath>

namespace bgc {

namespace {

void check_hbar(const ChannelSpec& spec, const StateSum& state)
{
    require(std::abs(spec.hbar - state.hbar) <= 1e-14 * spec.hbar,
            "state hbar differs from channel hbar");
}

/// t^3 sum 2k x^{2k-2}/(2k+1)! + beta t^4 sum 2k x^{2k-2}/(2k+2)!, free of the
/// cancellation in (t v - sh - 2 beta ch)/omega^2 for |x| < 1.
double dnum_series(double x, double t, double beta)
{
    const double x2 = x * x;
    double a = 0.0, b = 0.0, pw = 1.0, fa = 6.0, fb = 24.0;  // (2k+1)!, (2k+2)! at k = 1
    for (int k = 1; k <= 12; ++k) {
        a += 2.0 * k * pw / fa;
        b += 2.0 * k * pw / fb;
        pw *= x2;
        fa *= (2.0 * k + 2.0) * (2.0 * k + 3.0);
        fb *= (2.0 * k + 3.0) * (2.0 * k + 4.0);
    }
    return t * t * t * a + beta * t * t * t * t * b;
}

} // namespace

AuxFunctions aux_functions(const ChannelSpec& spec, double g, double eta, double t)
{
    require(std::isfinite(g) && g > 0.0, "g must be > 0");
    require(std::isfinite(t) && t >= 0.0, "time must be >= 0");
    AuxFunctions f;
    f.omega = spec.sigma * spec.gamma * eta;
    f.beta = 2.0 * spec.sigma * spec.sigma / g;
    // omega^2 / beta, written so that it stays finite for sigma = 0
    const double kappa = 0.5 * g * spec.gamma * spec.gamma * eta * eta;
    const double x = f.omega * t;
    double cosh_x;
    if (std::abs(x) < 1e-3) {
        const double x2 = x * x;
        cosh_x = 1.0 + x2 / 2.0 + x2 * x2 / 24.0 + x2 * x2 * x2 / 720.0;
        f.sh = t * (1.0 + x2 / 6.0 + x2 * x2 / 120.0 + x2 * x2 * x2 / 5040.0);
        f.ch = t * t * (0.5 + x2 / 24.0 + x2 * x2 / 720.0 + x2 * x2 * x2 / 40320.0);
        f.dnum = t * t * t * (1.0 / 3.0 + x2 / 30.0 + x2 * x2 / 840.0) +
                 f.beta * t * t * t * t * (1.0 / 12.0 + x2 / 180.0 + x2 * x2 / 6720.0);
        f.u = cosh_x + kappa * f.sh;
        f.v = cosh_x + f.beta * f.sh;
        return f;
    }
    const double w2 = f.omega * f.omega;
    cosh_x = std::cosh(x);
    const double sh_half = std::sinh(0.5 * x);
    f.sh = std::sinh(x) / f.omega;
    f.ch = 2.0 * sh_half * sh_half / w2;
    f.u = cosh_x + kappa * f.sh;
    f.v = cosh_x + f.beta * f.sh;
    f.dnum = std::abs(x) < 1.0 ? dnum_series(x, t, f.beta) : (t * f.v - f.sh - 2.0 * f.beta * f.ch) / w2;
    return f;
}

EvolutionParameters evolve_params(const ChannelSpec& spec, const GaussianTerm& term, double eta,
                                  double t)
{
    const AuxFunctions f = aux_functions(spec, term.g, eta, t);
    const double s2 = spec.sigma * spec.sigma;
    const double gm2 = spec.gamma * spec.gamma;
    const double p0 = term.p0(), dq = term.dq();
    EvolutionParameters e;
    e.a = term.g * f.v / f.u;
    e.c = 1.0 / std::sqrt(f.v);
    e.p_cap = p0 / f.u;
    e.q_cap = (dq - eta * (f.beta * f.ch + f.sh)) / f.v;
    e.phi = f.beta * p0 * (eta * f.ch - dq * f.sh) / f.v;
    e.d_damp = 0.5 * s2 * eta * eta * f.dnum / f.v - s2 * eta * dq * f.ch / f.v +
               0.5 * s2 * dq * dq * f.sh / f.v + 0.5 * gm2 * eta * eta * p0 * p0 * f.sh / f.u;
    return e;
}

double d_gamma_zero(const ChannelSpec& spec, const GaussianTerm& term, double eta, double t)
{
    require(std::isfinite(t) && t >= 0.0, "time must be >= 0");
    const double s2 = spec.sigma * spec.sigma;
    const double beta = 2.0 * s2 / term.g;
    const double den = 1.0 + beta * t;
    const double q0 = term.dq();
    return s2 / den * (t * t * t / 6.0 + s2 * t * t * t * t / (12.0 * term.g)) * eta * eta -
           0.5 * q0 * s2 * t * t / den * eta + 0.5 * q0 * q0 * s2 * t / den;
}

cplx char_evolved(const ChannelSpec& spec, const GaussianTerm& term, double xi, double eta,
                  double t)
{
    const double hb = spec.hbar;
    const AuxFunctions f = aux_functions(spec, term.g, eta, t);
    const EvolutionParameters e = evolve_params(spec, term, eta, t);
    const double s = xi - e.q_cap;
    const double b = eta + term.dp();
    const double re = -e.d_damp / hb - b * b / (4.0 * hb * term.g) - e.a * s * s / (4.0 * hb);
    const double im = (e.phi + term.q0() * b + e.p_cap * s) / hb;
    return term.weight * std::exp(cplx(re, im)) / std::sqrt(f.u);
}

cplx char_evolved(const ChannelSpec& spec, const StateSum& state, double xi, double eta, double t)
{
    check_hbar(spec, state);
    cplx s = 0.0;
    for (const auto& term : state.terms) s += char_evolved(spec, term, xi, eta, t);
    return s;
}

cplx char_evolved_ansatz(const ChannelSpec& spec, const GaussianTerm& term, double xi,
                         double eta, double t)
{
    const double hb = spec.hbar;
    const EvolutionParameters e = evolve_params(spec, term, eta, t);
    const double s = xi - e.q_cap;
    const double b = eta + term.dp();
    const double re = -e.d_damp / hb - b * b / (4.0 * hb * term.g) - e.a * s * s / (4.0 * hb);
    const double im = (e.phi + term.q0() * b + e.p_cap * s) / hb;
    return term.weight * e.c * std::sqrt(e.a / term.g) * std::exp(cplx(re, im));
}

namespace {

/// p-independent factor of w(t,p,eta) plus the parameters needed for the p-dependence.
struct PartialFactor {
    cplx pre;
    double a, p_cap, q_cap;
};

PartialFactor partial_factor(const ChannelSpec& spec, const GaussianTerm& term, double eta, double t)
{
    const double hb = spec.hbar;
    const AuxFunctions f = aux_functions(spec, term.g, eta, t);
    const EvolutionParameters e = evolve_params(spec, term, eta, t);
    const double b = eta + term.dp();
    const double re = -e.d_damp / hb - b * b / (4.0 * hb * term.g);
    const double im = (e.phi + term.q0() * b) / hb;
    const cplx pre = term.weight * std::exp(cplx(re, im)) / std::sqrt(f.u * kPi * hb * e.a);
    return {pre, e.a, e.p_cap, e.q_cap};
}

cplx partial_eval(const PartialFactor& pf, double p, double hb)
{
    const double d = p - pf.p_cap;
    return pf.pre * std::exp(cplx(-d * d / (hb * pf.a), -p * pf.q_cap / hb));
}

} // namespace

cplx partial_wigner(const ChannelSpec& spec, const GaussianTerm& term, double p, double eta,
                    double t)
{
    return partial_eval(partial_factor(spec, term, eta, t), p, spec.hbar);
}

cplx partial_wigner(const ChannelSpec& spec, const StateSum& state, double p, double eta, double t)
{
    check_hbar(spec, state);
    cplx s = 0.0;
    for (const auto& term : state.terms) s += partial_wigner(spec, term, p, eta, t);
    return s;
}

PhaseSpaceGrid wigner_evolved_grid(const ChannelSpec& spec, const StateSum& state, double t,
                                   PhaseSpaceGrid grid, const InverseTransformOptions& opt)
{
    validate(spec);
    validate(state);
    validate(grid);
    check_hbar(spec, state);
    const double hb = spec.hbar;
    double lo = 1e300, hi = -1e300, gmin = 1e300;
    for (const auto& term : state.terms) {
        const double w = opt.half_width * std::sqrt(hb * term.g);
        lo = std::min(lo, -term.dp() - w);
        hi = std::max(hi, -term.dp() + w);
        gmin = std::min(gmin, term.g);
    }
    double h = opt.d_eta;
    if (h <= 0.0) {
        h = kPi * hb / (grid.q_max - grid.q_min);
        h = std::min(h, 0.25 * std::sqrt(hb * gmin));
    }
    const auto n_eta = static_cast<std::size_t>(std::ceil((hi - lo) / h)) + 1;
    std::vector<double> etas(n_eta);
    for (std::size_t k = 0; k < n_eta; ++k) etas[k] = lo + h * static_cast<double>(k);

    Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(grid.n_p),
                                                static_cast<Eigen::Index>(n_eta));
    for (std::size_t k = 0; k < n_eta; ++k) {
        for (const auto& term : state.terms) {
            const PartialFactor pf = partial_factor(spec, term, etas[k], t);
            if (std::abs(pf.pre) < 1e-300) continue;
            for (std::size_t i = 0; i < grid.n_p; ++i)
                w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) +=
                    partial_eval(pf, grid.p(i), hb);
        }
    }
    Eigen::MatrixXcd e(static_cast<Eigen::Index>(n_eta), static_cast<Eigen::Index>(grid.n_q));
    const double scale = h / (2.0 * kPi * hb);
    for (std::size_t k = 0; k < n_eta; ++k) {
        const double wk = (k == 0 || k + 1 == n_eta) ? 0.5 * scale : scale;
        for (std::size_t j = 0; j < grid.n_q; ++j)
            e(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) =
                std::polar(wk, -grid.q(j) * etas[k] / hb);
    }
    const Eigen::MatrixXcd out = w * e;
    grid.allocate();
    for (std::size_t i = 0; i < grid.n_p; ++i)
        for (std::size_t j = 0; j < grid.n_q; ++j)
            grid.at(i, j) = out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return grid;
}

} // namespace bgc
