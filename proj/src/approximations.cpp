#include "bgc/approximations.hpp"

#include <array>
#include <cmath>

#include "bgc/observables.hpp"

namespace bgc {

CovarianceMatrix sc_gaussian_covariance(const ChannelSpec& spec, const GaussianTerm& term, double t)
{
    validate(spec);
    validate(term);
    require(!term.oscillatory(), "semiclassical covariance needs a dz = 0 term");
    require(std::isfinite(t) && t >= 0.0, "time must be >= 0");
    const double g = term.g, s2 = spec.sigma * spec.sigma, gm2 = spec.gamma * spec.gamma;
    const double p0 = term.p0();
    CovarianceMatrix G;
    G.hbar = spec.hbar;
    const double gpp = g + 2.0 * s2 * t;
    const double gpq = g * t + s2 * t * t;
    const double gqq = 1.0 / g + 2.0 * t * gm2 * p0 * p0 + g * t * t + 2.0 / 3.0 * s2 * t * t * t;
    G.g << gpp, gpq, gpq, gqq;
    return G;
}

Mat2 exact_covariance_from_sc(const ChannelSpec& spec, const GaussianTerm& term, double t)
{
    const CovarianceMatrix G = sc_gaussian_covariance(spec, term, t);
    Mat2 cov = 0.5 * spec.hbar * G.g;
    cov(1, 1) += 0.5 * spec.hbar * spec.hbar * spec.gamma * spec.gamma *
                 (term.g * t + spec.sigma * spec.sigma * t * t);
    return cov;
}

SemiclassicalState sc_initial(const GaussianTerm& term)
{
    validate(term);
    SemiclassicalState s;
    s.x_cap = term.z0;
    s.y_cap = symplectic_form() * term.dz;
    s.g_mat = CMat2::Zero();
    s.g_mat(0, 0) = term.g;
    s.g_mat(1, 1) = 1.0 / term.g;
    return s;
}

cplx sc_symbol(const ChannelSpec& spec, const Vec2& x, const Vec2& y)
{
    const double p = x(0);
    return cplx(p * y(1), -0.5 * (spec.sigma * spec.sigma * y(0) * y(0) +
                                  spec.gamma * spec.gamma * p * p * y(1) * y(1)));
}

double sc_rate(const ChannelSpec& spec, const Vec2& x, const Vec2& y)
{
    return -sc_symbol(spec, x, y).imag();
}

namespace {

struct ScDeriv {
    Vec2 dx, dy;
    CMat2 dg;
    cplx dc, dd;
};

ScDeriv sc_rhs(const ChannelSpec& spec, const SemiclassicalState& s)
{
    const cplx i(0.0, 1.0);
    const double s2 = spec.sigma * spec.sigma, gm2 = spec.gamma * spec.gamma;
    const double p = s.x_cap(0);
    const double yp = s.y_cap(0), yq = s.y_cap(1);

    const CVec2 kx(cplx(yq, -gm2 * p * yq * yq), 0.0);
    const CVec2 ky(cplx(0.0, -s2 * yp), cplx(p, -gm2 * p * p * yq));
    CMat2 kxx = CMat2::Zero();
    kxx(0, 0) = cplx(0.0, -gm2 * yq * yq);
    CMat2 kxy = CMat2::Zero();
    kxy(0, 1) = cplx(1.0, -2.0 * gm2 * p * yq);
    const CMat2 kyx = kxy.transpose();
    CMat2 kyy = CMat2::Zero();
    kyy(0, 0) = cplx(0.0, -s2);
    kyy(1, 1) = cplx(0.0, -gm2 * p * p);

    const CMat2 b = 2.0 * i * s.g_mat.inverse();
    const Mat2 br = b.real(), bi = b.imag();
    const CVec2 bky = b * ky;

    ScDeriv d;
    d.dx = bi.inverse() * (kx.imag() + bky.imag());
    d.dy = br * d.dx - kx.real() - bky.real();
    d.dg = 2.0 * i * kyy + kyx * s.g_mat + s.g_mat * kxy - 0.5 * i * s.g_mat * kxx * s.g_mat;
    d.dg = 0.5 * (d.dg + d.dg.transpose()).eval();
    d.dd = -sc_symbol(spec, s.x_cap, s.y_cap) - s.x_cap.dot(d.dy);
    d.dc = s.c_amp * (0.5 * kxy.trace() - 0.25 * i * (kxx * s.g_mat).trace());
    return d;
}

SemiclassicalState axpy(const SemiclassicalState& s, const ScDeriv& k, double h)
{
    SemiclassicalState r = s;
    r.x_cap += h * k.dx;
    r.y_cap += h * k.dy;
    r.g_mat += h * k.dg;
    r.c_amp += h * k.dc;
    r.d_phase += h * k.dd;
    return r;
}

void check_state(const SemiclassicalState& s)
{
    const Mat2 gr = s.g_mat.real();
    if (!(gr(0, 0) > 0.0) || !(gr.determinant() > 0.0) || !s.g_mat.allFinite())
        throw NumericalError("semiclassical trajectory lost positive definite Re(G)");
}

SemiclassicalState rk4_run(const ChannelSpec& spec, SemiclassicalState s, double t, std::size_t n)
{
    const double h = t / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        const ScDeriv k1 = sc_rhs(spec, s);
        const ScDeriv k2 = sc_rhs(spec, axpy(s, k1, 0.5 * h));
        const ScDeriv k3 = sc_rhs(spec, axpy(s, k2, 0.5 * h));
        const ScDeriv k4 = sc_rhs(spec, axpy(s, k3, h));
        s.x_cap += h / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
        s.y_cap += h / 6.0 * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy);
        s.g_mat += h / 6.0 * (k1.dg + 2.0 * k2.dg + 2.0 * k3.dg + k4.dg);
        s.c_amp += h / 6.0 * (k1.dc + 2.0 * k2.dc + 2.0 * k3.dc + k4.dc);
        s.d_phase += h / 6.0 * (k1.dd + 2.0 * k2.dd + 2.0 * k3.dd + k4.dd);
        check_state(s);
    }
    return s;
}

double state_diff(const SemiclassicalState& a, const SemiclassicalState& b)
{
    double m = (a.x_cap - b.x_cap).cwiseAbs().maxCoeff();
    m = std::max(m, (a.y_cap - b.y_cap).cwiseAbs().maxCoeff());
    m = std::max(m, (a.g_mat - b.g_mat).cwiseAbs().maxCoeff());
    m = std::max(m, std::abs(a.d_phase - b.d_phase));
    m = std::max(m, std::abs(a.c_amp - b.c_amp) / std::max(1.0, std::abs(a.c_amp)));
    return m;
}

} // namespace

SemiclassicalState sc_nonhermitian_evolve(const ChannelSpec& spec, const SemiclassicalState& s0,
                                          double t, double dt)
{
    validate(spec);
    require(std::isfinite(t) && t >= 0.0, "time must be >= 0");
    require(std::isfinite(dt) && dt > 0.0, "dt must be > 0");
    check_state(s0);
    if (t == 0.0) return s0;
    std::size_t n = static_cast<std::size_t>(std::ceil(t / dt));
    SemiclassicalState coarse = rk4_run(spec, s0, t, n);
    for (int attempt = 0; attempt < 12; ++attempt) {
        SemiclassicalState fine = rk4_run(spec, s0, t, 2 * n);
        if (state_diff(coarse, fine) < 1e-8) return fine;
        coarse = fine;
        n *= 2;
    }
    throw NumericalError("semiclassical RK4 did not converge under step halving");
}

cplx sc_wigner(const SemiclassicalState& s, double hbar, const Vec2& x)
{
    require(hbar > 0.0, "hbar must be > 0");
    const cplx i(0.0, 1.0);
    const CVec2 d = (x - s.x_cap).cast<cplx>();
    const CMat2 b = 2.0 * i * s.g_mat.inverse();
    const cplx quad = 0.5 * (d.transpose() * b * d)(0, 0);
    const cplx arg = s.d_phase + x.dot(s.y_cap) + quad;
    return s.c_amp / (kPi * hbar * std::sqrt(s.g_mat.determinant())) * std::exp(i * arg / hbar);
}

double decoherence_onset(const ChannelSpec& spec, const Vec2& x0, const Vec2& y0, double t)
{
    validate(spec);
    require(std::isfinite(t) && t >= 0.0, "time must be >= 0");
    const double rate = sc_rate(spec, x0, y0);
    if (rate > 0.0) return t * rate;
    return spec.sigma * spec.sigma * t * t * t * y0(1) * y0(1) / 6.0;
}

namespace {

/// Gamma = 0 evolved Gaussian: mean, inverse covariance and density at x.
struct BaseGaussian {
    Vec2 mean;
    Mat2 inv;
    double norm;
};

BaseGaussian base_gaussian(const ChannelSpec& spec, const GaussianTerm& term, double t)
{
    require(!term.oscillatory(), "perturbative correction needs a dz = 0 term");
    ChannelSpec s0 = spec;
    s0.gamma = 0.0;
    const MomentTable mt = moments_closed(s0, term, t);
    BaseGaussian b;
    b.mean = mt.mean;
    b.inv = mt.cov.inverse();
    b.norm = term.weight.real() / (2.0 * kPi * std::sqrt(mt.cov.determinant()));
    return b;
}

} // namespace

double gaussian_channel_wigner(const ChannelSpec& spec, const GaussianTerm& term, double t,
                               const Vec2& x)
{
    validate(spec);
    validate(term);
    const BaseGaussian b = base_gaussian(spec, term, t);
    const Vec2 d = x - b.mean;
    return b.norm * std::exp(-0.5 * d.dot(b.inv * d));
}

double perturb_correction(const ChannelSpec& spec, const GaussianTerm& term, double t, const Vec2& x)
{
    validate(spec);
    validate(term);
    require(std::isfinite(t) && t >= 0.0, "time must be >= 0");
    const BaseGaussian b = base_gaussian(spec, term, t);
    const Vec2 dx = x - b.mean;
    const Vec2 s = b.inv * dx;
    const Mat2& A = b.inv;
    const double w = b.norm * std::exp(-0.5 * dx.dot(s));

    // W-relative Gaussian derivatives, index 0 = p, 1 = q
    auto d2 = [&](int i, int j) { return s(i) * s(j) - A(i, j); };
    auto d3 = [&](int i, int j, int k) {
        return -s(i) * s(j) * s(k) + A(i, j) * s(k) + A(i, k) * s(j) + A(j, k) * s(i);
    };
    auto d4 = [&](int i, int j, int k, int l) {
        return s(i) * s(j) * s(k) * s(l) -
               (A(i, j) * s(k) * s(l) + A(i, k) * s(j) * s(l) + A(i, l) * s(j) * s(k) +
                A(j, k) * s(i) * s(l) + A(j, l) * s(i) * s(k) + A(k, l) * s(i) * s(j)) +
               A(i, j) * A(k, l) + A(i, k) * A(j, l) + A(i, l) * A(j, k);
    };
    constexpr int P = 0, Q = 1;
    const double hb = spec.hbar, s2 = spec.sigma * spec.sigma;
    const double p = x(0);
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;

    double r = t * 0.5 * hb * p * p * d2(Q, Q);
    r += t2 / 2.0 * (0.5 * hb * hb * s2) * (2.0 * p * d3(P, Q, Q) + d2(Q, Q));
    r += t3 / 6.0 * hb * hb * s2 * (p * d3(Q, Q, Q) + hb * s2 * d4(P, P, Q, Q));
    r += t4 / 24.0 * 3.0 * hb * hb * hb * s2 * s2 * d4(P, Q, Q, Q);
    r += t5 / 120.0 * 3.0 * hb * hb * hb * s2 * s2 * d4(Q, Q, Q, Q);
    return r * w;
}

double perturbed_wigner(const ChannelSpec& spec, const GaussianTerm& term, double t, const Vec2& x)
{
    return gaussian_channel_wigner(spec, term, t, x) +
           spec.gamma * spec.gamma * perturb_correction(spec, term, t, x);
}

} // namespace bgc
