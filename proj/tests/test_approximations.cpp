#include <doctest.h>

#include <cmath>

#include "bgc/approximations.hpp"
#include "bgc/exact_channel.hpp"
#include "bgc/observables.hpp"

using namespace bgc;

namespace {

ChannelSpec channel(double sigma, double gamma, double hbar = 1.0)
{
    ChannelSpec s;
    s.sigma = sigma;
    s.gamma = gamma;
    s.hbar = hbar;
    return s;
}

PhaseSpaceGrid make_grid(double p_half, double q_half, std::size_t n_p, std::size_t n_q)
{
    PhaseSpaceGrid g;
    g.p_min = -p_half;
    g.p_max = p_half;
    g.q_min = -q_half;
    g.q_max = q_half;
    g.n_p = n_p;
    g.n_q = n_q;
    return g;
}

} // namespace

TEST_CASE("semiclassical covariance plus the hbar^2 term equals the exact covariance")
{
    const ChannelSpec spec = channel(0.8, 1.3, 0.6);
    GaussianTerm term;
    term.z0 = Vec2(0.7, -0.2);
    term.g = 1.4;
    for (double t : {0.0, 0.4, 1.3}) {
        const Mat2 a = exact_covariance_from_sc(spec, term, t);
        const Mat2 b = moments_closed(spec, term, t).cov;
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-14 * std::max(1.0, b.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("gamma = 0: the evolved wave packet reproduces the exact oscillatory term")
{
    const ChannelSpec spec = channel(0.9, 0.0);
    GaussianTerm term;
    term.z0 = Vec2(0.3, -0.5);
    term.dz = Vec2(0.8, 1.2);
    term.g = 1.1;
    StateSum st;
    st.terms = {term};
    const double t = 0.6;
    const SemiclassicalState sc = sc_nonhermitian_evolve(spec, sc_initial(term), t);
    const PhaseSpaceGrid g = wigner_evolved_grid(spec, st, t, make_grid(5.0, 8.0, 21, 33));
    double worst = 0.0;
    for (std::size_t i = 0; i < g.n_p; ++i)
        for (std::size_t j = 0; j < g.n_q; ++j)
            worst = std::max(worst, std::abs(g.at(i, j) - term.weight * sc_wigner(sc, 1.0, Vec2(g.p(i), g.q(j)))));
    CHECK(worst < 1e-7);
}

TEST_CASE("initial wave packet is the initial Wigner term")
{
    GaussianTerm term;
    term.z0 = Vec2(0.4, 0.1);
    term.dz = Vec2(-0.6, 0.9);
    term.g = 0.8;
    const SemiclassicalState s = sc_initial(term);
    for (const Vec2& x : {Vec2(0.0, 0.0), Vec2(0.5, -0.7), Vec2(-1.0, 0.4)})
        CHECK(std::abs(sc_wigner(s, 0.9, x) - wigner_term(term, 0.9, x)) < 1e-14);
}

TEST_CASE("decoherence onset matches Im d(t) for small t")
{
    const ChannelSpec spec = channel(1.0, 0.7);
    GaussianTerm term;
    term.z0 = Vec2(0.8, 0.0);
    term.dz = Vec2(0.5, 1.5);
    const SemiclassicalState s0 = sc_initial(term);
    CHECK(sc_rate(spec, s0.x_cap, s0.y_cap) > 0.0);
    for (double t : {0.01, 0.005}) {
        const SemiclassicalState s = sc_nonhermitian_evolve(spec, s0, t, 1e-4);
        const double onset = decoherence_onset(spec, s0.x_cap, s0.y_cap, t);
        CHECK(std::abs(s.d_phase.imag() - onset) < 0.05 * onset);
    }
    // zero rate: the cubic law takes over
    GaussianTerm cubic;
    cubic.dz = Vec2(1.0, 0.0);
    const SemiclassicalState c0 = sc_initial(cubic);
    CHECK(sc_rate(spec, c0.x_cap, c0.y_cap) == 0.0);
    const double t = 0.02;
    const double onset = decoherence_onset(spec, c0.x_cap, c0.y_cap, t);
    const SemiclassicalState c = sc_nonhermitian_evolve(spec, c0, t, 1e-4);
    CHECK(std::abs(c.d_phase.imag() - onset) < 0.05 * onset);
}

TEST_CASE("first-order correction: zero mass and the gamma^2 part of Var q")
{
    const ChannelSpec spec = channel(0.8, 1.0, 0.7);
    GaussianTerm term;
    term.z0 = Vec2(0.6, -0.3);
    term.g = 1.2;
    const double t = 0.5;
    const PhaseSpaceGrid g = make_grid(7.0, 9.0, 281, 361);
    const Vec2 mean = moments_closed(spec, term, t).mean;
    double mass = 0.0, q2 = 0.0;
    for (std::size_t i = 0; i < g.n_p; ++i)
        for (std::size_t j = 0; j < g.n_q; ++j) {
            const double r = perturb_correction(spec, term, t, Vec2(g.p(i), g.q(j)));
            const double dq = g.q(j) - mean(1);
            mass += r;
            q2 += r * dq * dq;
        }
    mass *= g.dp() * g.dq();
    q2 *= g.dp() * g.dq();
    const double hb = spec.hbar, p0 = term.p0(), s2 = spec.sigma * spec.sigma;
    const double dvq = hb * p0 * p0 * t + 0.5 * hb * hb * (term.g * t + s2 * t * t);
    CHECK(std::abs(mass) < 1e-10);
    CHECK(std::abs(q2 - dvq) < 1e-8);
}

TEST_CASE("first-order correction predicts the exact small-gamma change")
{
    GaussianTerm term;
    term.z0 = Vec2(0.5, 0.3);
    StateSum st;
    st.terms = {term};
    const double t = 0.5;
    const PhaseSpaceGrid grid = make_grid(5.0, 7.0, 41, 57);
    double prev = 0.0;
    for (double gamma : {0.1, 0.05}) {
        const ChannelSpec spec = channel(1.0, gamma);
        const PhaseSpaceGrid ex = wigner_evolved_grid(spec, st, t, grid);
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.n_p; ++i)
            for (std::size_t j = 0; j < grid.n_q; ++j)
                worst = std::max(worst, std::abs(ex.at(i, j).real() -
                                                 perturbed_wigner(spec, term, t, Vec2(grid.p(i), grid.q(j)))));
        if (prev > 0.0) CHECK(prev / worst > 12.0);
        prev = worst;
    }
}
