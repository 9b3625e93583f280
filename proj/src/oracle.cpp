#include "bgc/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <Eigen/Eigenvalues>

#include "bgc/entropy.hpp"
#include "bgc/gaussian_channel.hpp"
#include "bgc/observables.hpp"
#include "bgc/propagator.hpp"

namespace bgc {

// ---- ODE oracle -----------------------------------------------------------

namespace {

using OdeState = std::array<double, 6>;  // a, c, P, Q, D, phi

OdeState ode_rhs(const ChannelSpec& spec, double eta, const OdeState& y)
{
    const double s2 = spec.sigma * spec.sigma;
    const double k = 0.5 * spec.gamma * spec.gamma * eta * eta;
    const double a = y[0], c = y[1], P = y[2], Q = y[3];
    OdeState d;
    d[0] = 2.0 * s2 - k * a * a;
    d[1] = -s2 * c / a;
    d[2] = -k * a * P;
    d[3] = -2.0 * s2 * Q / a - eta;
    d[4] = 0.5 * s2 * Q * Q + k * P * P;
    d[5] = (d[3] + eta) * P;
    return d;
}

OdeState ode_run(const ChannelSpec& spec, double eta, OdeState y, double t, std::size_t n)
{
    const double h = t / static_cast<double>(n);
    auto axpy = [](const OdeState& a, const OdeState& b, double s) {
        OdeState r;
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] + s * b[i];
        return r;
    };
    for (std::size_t s = 0; s < n; ++s) {
        const OdeState k1 = ode_rhs(spec, eta, y);
        const OdeState k2 = ode_rhs(spec, eta, axpy(y, k1, 0.5 * h));
        const OdeState k3 = ode_rhs(spec, eta, axpy(y, k2, 0.5 * h));
        const OdeState k4 = ode_rhs(spec, eta, axpy(y, k3, h));
        for (std::size_t i = 0; i < y.size(); ++i)
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (!(y[0] > 0.0)) throw NumericalError("ODE trajectory lost a > 0");
    }
    return y;
}

double ode_diff(const OdeState& a, const OdeState& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

EvolutionParameters ode_params(const ChannelSpec& spec, const GaussianTerm& term, double eta,
                               double t, double dt, double tol)
{
    validate(spec);
    validate(term);
    require(std::isfinite(eta), "eta must be finite");
    require(std::isfinite(t) && t >= 0.0, "time must be >= 0");
    require(std::isfinite(dt) && dt > 0.0, "dt must be > 0");
    const OdeState y0 = {term.g, 1.0, term.p0(), term.dq(), 0.0, 0.0};
    OdeState y = y0;
    if (t > 0.0) {
        std::size_t n = static_cast<std::size_t>(std::ceil(t / dt));
        OdeState coarse = ode_run(spec, eta, y0, t, n);
        bool ok = false;
        for (int attempt = 0; attempt < 10 && !ok; ++attempt) {
            y = ode_run(spec, eta, y0, t, 2 * n);
            ok = ode_diff(coarse, y) < tol;
            coarse = y;
            n *= 2;
        }
        if (!ok) throw NumericalError("ODE step halving did not converge");
    }
    EvolutionParameters e;
    e.a = y[0];
    e.c = y[1];
    e.p_cap = y[2];
    e.q_cap = y[3];
    e.d_damp = y[4];
    e.phi = y[5];
    return e;
}

// ---- Density matrix and entropy ---------------------------------------------

DensityMatrixGrid density_matrix_from_wigner(const PhaseSpaceGrid& w, double hbar)
{
    validate(w);
    require(hbar > 0.0, "hbar must be > 0");
    require(w.values.size() == w.n_p * w.n_q, "grid has no values");
    require(w.n_q % 2 == 1 && w.n_q >= 3, "density matrix needs an odd q node count");
    const std::size_t n = (w.n_q + 1) / 2;
    const double dq2 = 2.0 * w.dq(), dp = w.dp();

    DensityMatrixGrid dm;
    dm.weight = dq2;
    dm.q_nodes.resize(n);
    for (std::size_t a = 0; a < n; ++a) dm.q_nodes[a] = w.q(2 * a);

    // phase[m][k] = exp(i p_k m dq2 / hbar) times the trapezoid weight, m = a - b
    const std::size_t nm = 2 * n - 1;
    Eigen::MatrixXcd phase(static_cast<Eigen::Index>(w.n_p), static_cast<Eigen::Index>(nm));
    for (std::size_t k = 0; k < w.n_p; ++k) {
        const double wk = (k == 0 || k + 1 == w.n_p) ? 0.5 * dp : dp;
        for (std::size_t m = 0; m < nm; ++m) {
            const double shift = (static_cast<double>(m) - static_cast<double>(n - 1)) * dq2;
            phase(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(m)) =
                wk * std::exp(cplx(0.0, w.p(k) * shift / hbar));
        }
    }
    // column-major copy of W so that each q column is contiguous over p
    Eigen::MatrixXcd wq(static_cast<Eigen::Index>(w.n_q), static_cast<Eigen::Index>(w.n_p));
    for (std::size_t k = 0; k < w.n_p; ++k)
        for (std::size_t j = 0; j < w.n_q; ++j)
            wq(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = w.at(k, j);
    // table(j, m) = sum_k W(p_k, q_j) phase(k, m)
    const Eigen::MatrixXcd table = wq * phase;

    const auto ni = static_cast<Eigen::Index>(n);
    dm.rho.resize(ni, ni);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            dm.rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                table(static_cast<Eigen::Index>(a + b), static_cast<Eigen::Index>(a + n - 1 - b));
    dm.rho = (0.5 * (dm.rho + dm.rho.adjoint())).eval();
    return dm;
}

EntropyResult entropy_from_density(const DensityMatrixGrid& dm)
{
    require(dm.rho.rows() == dm.rho.cols() && dm.rho.rows() > 0, "density matrix must be square");
    require(dm.weight > 0.0, "density matrix weight must be > 0");
    const Eigen::MatrixXcd m = dm.weight * dm.rho;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed");
    EntropyResult r;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double l = es.eigenvalues()(i);
        r.trace += l;
        if (l < 0.0) r.negative_mass += -l;
        if (l > 1e-12) r.entropy -= l * std::log(l);
    }
    return r;
}

EntropyResult entropy_from_wigner(const PhaseSpaceGrid& w, double hbar)
{
    return entropy_from_density(density_matrix_from_wigner(w, hbar));
}

EntropyResult entropy_numerical(const ChannelSpec& spec, const StateSum& state, double t,
                                const EntropyGridOptions& opt)
{
    validate(spec);
    validate(state);
    require(opt.n_rho >= 2 && opt.q_half > 0.0 && opt.p_half > 0.0 && opt.dp > 0.0,
            "invalid entropy grid options");
    require(opt.eta_half > 0.0 && opt.d_eta > 0.0, "invalid eta options");
    PhaseSpaceGrid grid;
    grid.q_min = -opt.q_half;
    grid.q_max = opt.q_half;
    grid.n_q = 2 * opt.n_rho - 1;
    grid.p_min = -opt.p_half;
    grid.p_max = opt.p_half;
    grid.n_p = static_cast<std::size_t>(std::llround(2.0 * opt.p_half / opt.dp)) + 1;
    double g_min = state.terms.front().g;
    for (const auto& term : state.terms) g_min = std::min(g_min, term.g);
    InverseTransformOptions it;
    it.half_width = opt.eta_half / std::sqrt(spec.hbar * g_min);
    it.d_eta = opt.d_eta;
    const PhaseSpaceGrid w = wigner_evolved_grid(spec, state, t, grid, it);
    const EntropyResult r = entropy_from_wigner(w, spec.hbar);
    if (r.negative_mass > 1e-6)
        throw NumericalError("negative eigenvalue mass " + std::to_string(r.negative_mass) +
                             " exceeds 1e-6 (grid too coarse)");
    return r;
}

// ---- Integral identities ------------------------------------------------

namespace {

double quad(const std::function<double(double)>& f, double t)
{
    if (t == 0.0) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, t, 12, 1e-12);
}

/// Auxiliary functions for given (omega, beta): sigma = 1, gamma = |omega|, eta = 1, g = 2/beta.
AuxFunctions aux_wb(double omega, double beta, double s)
{
    ChannelSpec spec;
    spec.sigma = 1.0;
    spec.gamma = std::abs(omega);
    return aux_functions(spec, 2.0 / beta, 1.0, s);
}

} // namespace

LemmaReport integral_lemma_suite(double omega, double beta, double t, const LemmaExtras& ex)
{
    require(std::isfinite(omega), "omega must be finite");
    require(std::isfinite(beta) && beta > 0.0, "beta must be > 0");
    require(std::isfinite(t) && t >= 0.0, "time must be >= 0");
    require(ex.g > 0.0, "g must be > 0");
    const AuxFunctions f = aux_wb(omega, beta, t);
    const double k = omega * omega / beta;
    const double eta = ex.eta, q0 = ex.q0, p0 = ex.p0, g = ex.g;

    auto aux = [&](double s) { return aux_wb(omega, beta, s); };
    auto q_of = [&](const AuxFunctions& a) { return (q0 - eta * (beta * a.ch + a.sh)) / a.v; };

    LemmaReport rep;
    auto add = [&](const char* name, double lhs, double rhs) {
        LemmaItem it{name, lhs, rhs, std::abs(lhs - rhs)};
        rep.max_discrepancy = std::max(rep.max_discrepancy, it.discrepancy);
        rep.items.push_back(it);
    };
    add("int u/v^2", quad([&](double s) { const auto a = aux(s); return a.u / (a.v * a.v); }, t),
        (f.v - 1.0) / (beta * f.v));
    add("int 1/v^2", quad([&](double s) { const auto a = aux(s); return 1.0 / (a.v * a.v); }, t),
        f.sh / f.v);
    add("int 1/u^2", quad([&](double s) { const auto a = aux(s); return 1.0 / (a.u * a.u); }, t),
        f.sh / f.u);
    add("int u^2/v^2",
        quad([&](double s) { const auto a = aux(s); return a.u * a.u / (a.v * a.v); }, t),
        k / beta * t + (1.0 - k / beta) * f.sh / f.v);
    add("int Q^2", quad([&](double s) { const double q = q_of(aux(s)); return q * q; }, t),
        eta * eta * f.dnum / f.v - 2.0 * eta * q0 * f.ch / f.v + q0 * q0 * f.sh / f.v);
    add("int P^2", quad([&](double s) { const double p = p0 / aux(s).u; return p * p; }, t),
        p0 * p0 * f.sh / f.u);
    add("int QP/a",
        quad([&](double s) {
            const auto a = aux(s);
            return q_of(a) * (p0 / a.u) / (g * a.v / a.u);
        }, t),
        p0 * q0 / g * f.sh / f.v - p0 * eta / g * f.ch / f.v);
    return rep;
}

double wronskian_drift(double omega, double beta, double t_max, int n)
{
    require(std::isfinite(beta) && beta > 0.0, "beta must be > 0");
    require(std::isfinite(t_max) && t_max >= 0.0, "t_max must be >= 0");
    require(n >= 2, "need at least two time nodes");
    const double k = omega * omega / beta;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = t_max * i / (n - 1);
        const AuxFunctions f = aux_wb(omega, beta, t);
        const double a = beta * f.u * f.u, b = k * f.v * f.v, c = beta - k;
        const double scale = std::max({1.0, std::abs(a), std::abs(b), std::abs(c)});
        worst = std::max(worst, std::abs(a - b - c) / scale);
    }
    return worst;
}

// ---- Reports --------------------------------------------------------------

nlohmann::json to_json(const OracleRecord& r)
{
    return {{"test", r.test},
            {"params", r.params},
            {"discrepancy", r.discrepancy},
            {"tolerance", r.tolerance},
            {"pass", r.pass}};
}

namespace {

OracleRecord record(std::string test, nlohmann::json params, double disc, double tol)
{
    return {std::move(test), std::move(params), disc, tol, std::isfinite(disc) && disc <= tol};
}

double rel_err(double a, double b)
{
    return std::abs(a - b) / std::max(1e-12, std::abs(b));
}

} // namespace

std::vector<OracleRecord> run_oracle_suite(const ChannelSpec& spec, bool include_pde)
{
    validate(spec);
    const double hb = spec.hbar;
    const nlohmann::json sp = {{"sigma", spec.sigma}, {"gamma", spec.gamma}, {"hbar", hb}};
    std::vector<OracleRecord> out;

    GaussianTerm osc;
    osc.z0 = Vec2(0.4, -0.3);
    osc.dz = Vec2(0.7, 1.1);
    osc.g = 1.3;
    GaussianTerm bump;
    bump.z0 = Vec2(0.8, 0.5);
    bump.g = 0.9;

    {
        double worst = 0.0;
        for (double eta : {-1.5, 0.0, 0.9})
            for (double t : {0.3, 1.0}) {
                const EvolutionParameters e = evolve_params(spec, osc, eta, t);
                const EvolutionParameters o = ode_params(spec, osc, eta, t, 1e-3);
                for (double d : {e.a - o.a, e.c - o.c, e.p_cap - o.p_cap, e.q_cap - o.q_cap,
                                 e.d_damp - o.d_damp, e.phi - o.phi})
                    worst = std::max(worst, std::abs(d));
            }
        out.push_back(record("ode_params_vs_closed_form", sp, worst, 1e-8));
    }
    {
        ChannelSpec s0 = spec;
        s0.gamma = 0.0;
        const double t = 0.7;
        const GaussianChannelMatrices m = semigroup_matrices(free_particle_spec(spec.sigma), t);
        const CharFunction chi0 = [&](const Vec2& xi) { return char_term(osc, hb, xi); };
        double worst = 0.0;
        for (int i = 0; i < 16; ++i)
            for (int j = 0; j < 16; ++j) {
                const double xi = -3.0 + 6.0 * i / 15.0, eta = -3.0 + 6.0 * j / 15.0;
                const cplx a = char_evolved(s0, osc, xi, eta, t);
                const cplx b = apply_gaussian_channel(chi0, m, Vec2(xi, eta), hb);
                worst = std::max(worst, std::abs(a - b));
            }
        out.push_back(record("gaussian_limit", sp, worst, 1e-10));
    }
    {
        const double t = 0.8;
        const MomentTable mt = moments_closed(spec, bump, t);
        double worst = rel_err(moment_fd(spec, bump, 1, 0, t), mt.mean(0));
        worst = std::max(worst, rel_err(moment_fd(spec, bump, 0, 1, t), mt.mean(1)));
        const double pp = moment_fd(spec, bump, 2, 0, t) - mt.mean(0) * mt.mean(0);
        const double pq = moment_fd(spec, bump, 1, 1, t) - mt.mean(0) * mt.mean(1);
        const double qq = moment_fd(spec, bump, 0, 2, t) - mt.mean(1) * mt.mean(1);
        worst = std::max({worst, rel_err(pp, mt.cov(0, 0)), rel_err(pq, mt.cov(0, 1)),
                          rel_err(qq, mt.cov(1, 1))});
        out.push_back(record("moments_fd_vs_closed_form", sp, worst, 1e-6));
    }
    {
        double worst = 0.0, wr = 0.0;
        const double g = 1.0;
        for (double eta : {0.5, 2.0}) {
            const double omega = spec.sigma * spec.gamma * eta;
            const double beta = std::max(2.0 * spec.sigma * spec.sigma / g, 0.1);
            worst = std::max(worst, integral_lemma_suite(omega, beta, 1.0).max_discrepancy);
            wr = std::max(wr, wronskian_drift(omega, beta, 1.0));
        }
        out.push_back(record("integral_lemmas", sp, worst, 1e-10));
        out.push_back(record("wronskian", sp, wr, 1e-12));
    }
    {
        double worst = 0.0;
        for (double z = 1.01; z < 100.0; z *= 1.37)
            worst = std::max(worst, std::abs(entropy_f(z) - entropy_f_dual(z)));
        out.push_back(record("entropy_dual_form", sp, worst, 1e-12));
    }
    if (spec.sigma > 0.0) {
        const double t = 0.6, eta = 0.7;
        SampledFunction w0;
        w0.p_min = -12.0;
        w0.dp = 0.02;
        const std::size_t n = 1201;
        for (std::size_t i = 0; i < n; ++i)
            w0.values.push_back(partial_wigner(spec, bump, w0.p(i), eta, 0.0));
        const KernelApplication ka = apply_kernel(spec, t, eta, w0);
        double worst = 0.0;
        for (std::size_t i = 0; i < n; i += 10)
            worst = std::max(worst,
                             std::abs(ka.w.values[i] - partial_wigner(spec, bump, w0.p(i), eta, t)));
        out.push_back(record("propagator_vs_closed_form", sp, worst, 1e-6));
    }
    if (include_pde) {
        const double t = 0.5;
        PhaseSpaceGrid grid;
        grid.p_min = -6.0;
        grid.p_max = 6.0;
        grid.q_min = -12.0;
        grid.q_max = 12.0;
        grid.n_p = 256;
        grid.n_q = 256;
        StateSum st = coherent_state(Vec2::Zero(), 1.0, hb);
        const PhaseSpaceGrid w0 = sample_wigner(st, grid);
        const PhaseSpaceGrid pde = pde_evolve(spec, w0, t);
        const PhaseSpaceGrid exact = wigner_evolved_grid(spec, st, t, grid);
        nlohmann::json p = sp;
        p["grid"] = {grid.n_p, grid.n_q};
        p["t"] = t;
        out.push_back(record("pde_vs_exact_channel", p, max_abs_diff(pde, exact), 1e-3));
    }
    return out;
}

} // namespace bgc
