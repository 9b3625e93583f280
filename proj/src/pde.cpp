#include <algorithm>
#include <cmath>
#include <limits>

#include "bgc/oracle.hpp"
#include "bgc/pde_kernels.hpp"

namespace bgc {

namespace {

constexpr std::size_t kGhost = 2;

/// Real field with two zero ghost cells on every side.
struct PaddedField {
    std::size_t n_p = 0, n_q = 0, stride = 0;
    std::vector<double> data;

    PaddedField(std::size_t np, std::size_t nq)
        : n_p(np), n_q(nq), stride(nq + 2 * kGhost), data((np + 2 * kGhost) * (nq + 2 * kGhost), 0.0)
    {
    }
    double* row(std::ptrdiff_t i) { return data.data() + (i + kGhost) * stride + kGhost; }
    const double* row(std::ptrdiff_t i) const { return data.data() + (i + kGhost) * stride + kGhost; }
};

struct Rates {
    double transport = 0.0, p_diff = 0.0, q_diff = 0.0;
};

Rates rates(const ChannelSpec& spec, const PhaseSpaceGrid& grid)
{
    const double pmax = std::max(std::abs(grid.p_min), std::abs(grid.p_max));
    const double dp = grid.dp(), dq = grid.dq();
    Rates r;
    r.transport = pmax / dq;
    r.p_diff = spec.hbar * spec.sigma * spec.sigma / (dp * dp);
    r.q_diff = spec.hbar * spec.gamma * spec.gamma * pmax * pmax / (dq * dq);
    return r;
}

std::vector<RowStencil> build_stencils(const ChannelSpec& spec, const PhaseSpaceGrid& grid)
{
    const double dp = grid.dp(), dq = grid.dq();
    const double kp = spec.hbar * spec.sigma * spec.sigma / (24.0 * dp * dp);
    std::vector<RowStencil> st(grid.n_p);
    for (std::size_t i = 0; i < grid.n_p; ++i) {
        const double p = grid.p(i);
        RowStencil& s = st[i];
        const double nu = spec.hbar * spec.gamma * spec.gamma * p * p / (24.0 * dq * dq);
        const double c[5] = {-1.0, 16.0, -30.0, 16.0, -1.0};
        for (int k = 0; k < 5; ++k) s.w[k] = nu * c[k];
        // -p d_q, upwind-biased third order
        const double v = -p / (6.0 * dq);
        if (p > 0.0) {
            s.w[0] += v * 1.0;
            s.w[1] += v * -6.0;
            s.w[2] += v * 3.0;
            s.w[3] += v * 2.0;
        } else if (p < 0.0) {
            s.w[1] += v * -2.0;
            s.w[2] += v * -3.0;
            s.w[3] += v * 6.0;
            s.w[4] += v * -1.0;
        }
        s.w[2] += -30.0 * kp;
        s.kp = kp;
    }
    return st;
}

void apply_stage(RowKernel kern, const std::vector<RowStencil>& st, const PaddedField& in,
                 const PaddedField& y0, PaddedField& acc, PaddedField* next, const StageCoeffs& sc)
{
    const auto np = static_cast<std::ptrdiff_t>(in.n_p);
    for (std::ptrdiff_t i = 0; i < np; ++i) {
        const double* rows[5] = {in.row(i - 2), in.row(i - 1), in.row(i), in.row(i + 1), in.row(i + 2)};
        kern(rows, y0.row(i), acc.row(i), next ? next->row(i) : nullptr, in.n_q,
             st[static_cast<std::size_t>(i)], sc);
    }
}

/// Advances y by n RK4 steps of size h.
void rk4_advance(RowKernel kern, const std::vector<RowStencil>& st, PaddedField& y, PaddedField& acc,
                 PaddedField& b1, PaddedField& b2, std::size_t n, double h)
{
    for (std::size_t s = 0; s < n; ++s) {
        apply_stage(kern, st, y, y, acc, &b1, {0.5 * h, h / 6.0, true});
        apply_stage(kern, st, b1, y, acc, &b2, {0.5 * h, h / 3.0, false});
        apply_stage(kern, st, b2, y, acc, &b1, {h, h / 3.0, false});
        apply_stage(kern, st, b1, y, acc, nullptr, {0.0, h / 6.0, false});
        std::swap(y.data, acc.data);
    }
}

} // namespace

double pde_stability_bound(const ChannelSpec& spec, const PhaseSpaceGrid& grid)
{
    validate(spec);
    validate(grid);
    const Rates r = rates(spec, grid);
    double m = std::numeric_limits<double>::infinity();
    for (double x : {r.transport, r.p_diff, r.q_diff})
        if (x > 0.0) m = std::min(m, 0.4 / x);
    return m;
}

double pde_default_dt(const ChannelSpec& spec, const PhaseSpaceGrid& grid)
{
    const Rates r = rates(spec, grid);
    const double sum = r.transport + r.p_diff + r.q_diff;
    double dt = pde_stability_bound(spec, grid);
    if (sum > 0.0) dt = std::min(dt, 0.8 / sum);
    return dt;
}

PdeResult pde_evolve_snapshots(const ChannelSpec& spec, const PhaseSpaceGrid& w0,
                               const std::vector<double>& times, double dt)
{
    validate(spec);
    validate(w0);
    require(w0.values.size() == w0.n_p * w0.n_q, "initial grid has no values");
    require(w0.n_q >= 4 && w0.n_p >= 4, "grid needs at least 4 nodes per axis");
    double prev = 0.0;
    for (double t : times) {
        require(std::isfinite(t) && t >= prev, "snapshot times must be nondecreasing and >= 0");
        prev = t;
    }
    const double bound = pde_stability_bound(spec, w0);
    if (dt == 0.0) dt = pde_default_dt(spec, w0);
    require(std::isfinite(dt) || times.empty() || times.back() == 0.0 || bound == std::numeric_limits<double>::infinity(),
            "dt must be finite");
    require(dt > 0.0, "dt must be > 0");
    if (dt > bound * (1.0 + 1e-12)) throw DomainError("dt violates the stability bound");
    if (!std::isfinite(dt)) dt = times.empty() ? 1.0 : std::max(times.back(), 1.0);

    const std::size_t np = w0.n_p, nq = w0.n_q;
    PaddedField re(np, nq), im(np, nq);
    bool has_re = false, has_im = false;
    for (std::size_t i = 0; i < np; ++i)
        for (std::size_t j = 0; j < nq; ++j) {
            const cplx v = w0.at(i, j);
            re.row(static_cast<std::ptrdiff_t>(i))[j] = v.real();
            im.row(static_cast<std::ptrdiff_t>(i))[j] = v.imag();
            has_re = has_re || v.real() != 0.0;
            has_im = has_im || v.imag() != 0.0;
        }

    const std::vector<RowStencil> st = build_stencils(spec, w0);
    const RowKernel kern = row_kernel(active_backend());
    PaddedField acc(np, nq), b1(np, nq), b2(np, nq);

    PdeResult res;
    res.dt = dt;
    res.mass_initial = w0.mass().real();
    double t_now = 0.0;
    for (double t : times) {
        const double seg = t - t_now;
        if (seg > 0.0) {
            const auto n = static_cast<std::size_t>(std::ceil(seg / dt * (1.0 - 1e-12)));
            const double h = seg / static_cast<double>(n);
            if (has_re) rk4_advance(kern, st, re, acc, b1, b2, n, h);
            if (has_im) rk4_advance(kern, st, im, acc, b1, b2, n, h);
            res.steps += n;
            t_now = t;
        }
        PhaseSpaceGrid snap = w0;
        for (std::size_t i = 0; i < np; ++i)
            for (std::size_t j = 0; j < nq; ++j)
                snap.at(i, j) = cplx(re.row(static_cast<std::ptrdiff_t>(i))[j],
                                     im.row(static_cast<std::ptrdiff_t>(i))[j]);
        res.mass_final = snap.mass().real();
        res.snapshots.push_back(std::move(snap));
    }
    if (times.empty()) res.mass_final = res.mass_initial;
    return res;
}

PhaseSpaceGrid pde_evolve(const ChannelSpec& spec, const PhaseSpaceGrid& w0, double t, double dt)
{
    PdeResult r = pde_evolve_snapshots(spec, w0, {t}, dt);
    return std::move(r.snapshots.front());
}

std::vector<double> pde_rhs(const ChannelSpec& spec, const PhaseSpaceGrid& grid,
                            const std::vector<double>& field)
{
    validate(spec);
    validate(grid);
    require(field.size() == grid.n_p * grid.n_q, "field size does not match grid");
    PaddedField in(grid.n_p, grid.n_q), zero(grid.n_p, grid.n_q), out(grid.n_p, grid.n_q);
    for (std::size_t i = 0; i < grid.n_p; ++i)
        std::copy_n(field.data() + i * grid.n_q, grid.n_q, in.row(static_cast<std::ptrdiff_t>(i)));
    const std::vector<RowStencil> st = build_stencils(spec, grid);
    apply_stage(row_kernel(active_backend()), st, in, zero, out, nullptr, {0.0, 1.0, true});
    std::vector<double> k(field.size());
    for (std::size_t i = 0; i < grid.n_p; ++i)
        std::copy_n(out.row(static_cast<std::ptrdiff_t>(i)), grid.n_q, k.data() + i * grid.n_q);
    return k;
}

} // namespace bgc
