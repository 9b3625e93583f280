#include "bgc/observables.hpp"

#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bgc/exact_channel.hpp"

namespace bgc {

namespace {

// Order-6 central difference weights on offsets -4..4 for derivative orders 0..4.
constexpr double kFd[5][9] = {
    {0, 0, 0, 0, 1, 0, 0, 0, 0},
    {0, -1.0 / 60, 3.0 / 20, -3.0 / 4, 0, 3.0 / 4, -3.0 / 20, 1.0 / 60, 0},
    {0, 1.0 / 90, -3.0 / 20, 3.0 / 2, -49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90, 0},
    {-7.0 / 240, 3.0 / 10, -169.0 / 120, 61.0 / 30, 0, -61.0 / 30, 169.0 / 120, -3.0 / 10, 7.0 / 240},
    {7.0 / 240, -2.0 / 5, 169.0 / 60, -122.0 / 15, 91.0 / 8, -122.0 / 15, 169.0 / 60, -2.0 / 5, 7.0 / 240},
};

} // namespace

double moment_fd(const ChannelSpec& spec, const GaussianTerm& term, int n, int m, double t)
{
    validate(spec);
    validate(term);
    require(!term.oscillatory(), "moments are defined for dz = 0 terms only");
    require(n >= 0 && m >= 0 && n + m <= 4, "moment order must satisfy n + m <= 4");
    require(std::isfinite(t) && t >= 0.0, "time must be >= 0");
    const double h = 1e-2 * std::sqrt(spec.hbar);
    cplx acc = 0.0;
    for (int a = 0; a < 9; ++a) {
        if (kFd[n][a] == 0.0) continue;
        for (int b = 0; b < 9; ++b) {
            if (kFd[m][b] == 0.0) continue;
            acc += kFd[n][a] * kFd[m][b] * char_evolved(spec, term, (a - 4) * h, (b - 4) * h, t);
        }
    }
    acc /= std::pow(h, n + m);
    const cplx fac = std::pow(cplx(0.0, -spec.hbar), n + m);
    return (fac * acc).real();
}

MomentTable moments_closed(const ChannelSpec& spec, const GaussianTerm& term, double t)
{
    validate(spec);
    validate(term);
    require(!term.oscillatory(), "moments are defined for dz = 0 terms only");
    require(std::isfinite(t) && t >= 0.0, "time must be >= 0");
    const double hb = spec.hbar, g = term.g;
    const double s2 = spec.sigma * spec.sigma, gm2 = spec.gamma * spec.gamma;
    const double p0 = term.p0();
    MomentTable mt;
    mt.mean = Vec2(p0, term.q0() + t * p0);
    const double vp = hb * (g / 2.0 + s2 * t);
    const double cpq = hb * (g * t / 2.0 + s2 * t * t / 2.0);
    const double vq = hb * (1.0 / (2.0 * g) + gm2 * p0 * p0 * t + g * t * t / 2.0 + s2 * t * t * t / 3.0) +
                      hb * hb * 0.5 * gm2 * (g * t + s2 * t * t);
    mt.cov << vp, cpq, cpq, vq;
    return mt;
}

namespace {

struct TermSlice {
    cplx log_amp;
    double a, p_cap, q_cap;
};

/// \int |chi(t, xi, eta)|^2 dxi summed over all term pairs, at fixed eta.
double xi_integrated(const ChannelSpec& spec, const StateSum& state, double eta, double t,
                     bool damping, std::vector<TermSlice>& buf)
{
    const double hb = spec.hbar;
    buf.clear();
    for (const auto& term : state.terms) {
        const AuxFunctions f = aux_functions(spec, term.g, eta, t);
        const EvolutionParameters e = evolve_params(spec, term, eta, t);
        const double b = eta + term.dp();
        const double d = damping ? e.d_damp : 0.0;
        const double re = -0.5 * std::log(f.u) - d / hb - b * b / (4.0 * hb * term.g);
        const double im = (e.phi + term.q0() * b) / hb;
        buf.push_back({std::log(term.weight) + cplx(re, im), e.a, e.p_cap, e.q_cap});
    }
    double total = 0.0;
    for (std::size_t j = 0; j < buf.size(); ++j) {
        for (std::size_t k = j; k < buf.size(); ++k) {
            const TermSlice& x = buf[j];
            const TermSlice& y = buf[k];
            const double A = (x.a + y.a) / (4.0 * hb);
            const cplx B((x.a * x.q_cap + y.a * y.q_cap) / (2.0 * hb), (x.p_cap - y.p_cap) / hb);
            const cplx C(-(x.a * x.q_cap * x.q_cap + y.a * y.q_cap * y.q_cap) / (4.0 * hb),
                         -(x.p_cap * x.q_cap - y.p_cap * y.q_cap) / hb);
            const cplx lg = x.log_amp + std::conj(y.log_amp) + B * B / (4.0 * A) + C;
            const double v = (std::sqrt(kPi / A) * std::exp(lg)).real();
            total += (j == k) ? v : 2.0 * v;
        }
    }
    return total;
}

double purity_integral(const ChannelSpec& spec, const StateSum& state, double t, bool damping)
{
    double lo = 1e300, hi = -1e300;
    for (const auto& term : state.terms) {
        const double w = 12.0 * std::sqrt(spec.hbar * term.g);
        lo = std::min(lo, -term.dp() - w);
        hi = std::max(hi, -term.dp() + w);
    }
    std::vector<TermSlice> buf;
    auto f = [&](double eta) { return xi_integrated(spec, state, eta, t, damping, buf); };
    double err = 0.0, l1 = 0.0;
    const double val = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, lo, hi, 20, 1e-13, &err, &l1);
    if (!(err <= 1e-10 * l1 + 1e-300)) {
        std::ostringstream os;
        os << "purity quadrature did not converge: achieved error " << err << " for L1 norm " << l1;
        throw NumericalError(os.str());
    }
    return val;
}

void check_purity_args(const ChannelSpec& spec, const StateSum& state, double t)
{
    validate(spec);
    validate(state);
    require(std::abs(spec.hbar - state.hbar) <= 1e-14 * spec.hbar, "state hbar differs from channel hbar");
    require(std::isfinite(t) && t >= 0.0, "time must be >= 0");
}

} // namespace

double purity_ratio(const ChannelSpec& spec, const StateSum& state, double t)
{
    check_purity_args(spec, state, t);
    if (t == 0.0) return 1.0;
    return purity_integral(spec, state, t, true) / purity_integral(spec, state, 0.0, true);
}

PurityDecomposition purity_decomposition(const ChannelSpec& spec, const StateSum& state, double t)
{
    check_purity_args(spec, state, t);
    PurityDecomposition d;
    if (t == 0.0) return d;
    const double i0 = purity_integral(spec, state, 0.0, true);
    d.ratio = purity_integral(spec, state, t, true) / i0;
    d.spreading = purity_integral(spec, state, t, false) / i0;
    d.exponent = -std::log(d.ratio / d.spreading);
    return d;
}

double purity_short_time(const ChannelSpec& spec, const GaussianTerm& term, double t)
{
    validate(spec);
    require(std::isfinite(t) && t >= 0.0, "time must be >= 0");
    const double s2 = spec.sigma * spec.sigma, gm2 = spec.gamma * spec.gamma;
    const double rate = s2 * term.dq() * term.dq() + gm2 * term.p0() * term.p0() * term.dp() * term.dp();
    if (rate > 0.0) return std::exp(-t * rate / spec.hbar);
    return std::exp(-t * t * t * s2 * term.dp() * term.dp() / (3.0 * spec.hbar));
}

double purity_short_time(const ChannelSpec& spec, const StateSum& state, double t)
{
    for (const auto& term : state.terms)
        if (term.oscillatory()) return purity_short_time(spec, term, t);
    validate(spec);
    require(std::isfinite(t) && t >= 0.0, "time must be >= 0");
    return 1.0;
}

} // namespace bgc
