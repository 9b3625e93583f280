#include "bgc/phase_space.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "bgc/csv.hpp"
#include "bgc/grid.hpp"

namespace bgc {

void validate(const ChannelSpec& spec)
{
    require(std::isfinite(spec.sigma) && spec.sigma >= 0.0, "sigma must be >= 0");
    require(std::isfinite(spec.gamma) && spec.gamma >= 0.0, "gamma must be >= 0");
    require(std::isfinite(spec.hbar) && spec.hbar > 0.0, "hbar must be > 0");
}

Mat2 symplectic_form()
{
    Mat2 w;
    w << 0.0, -1.0, 1.0, 0.0;
    return w;
}

void validate(const GaussianTerm& term)
{
    require(std::isfinite(term.g) && term.g > 0.0, "g must be > 0");
    require(term.z0.allFinite() && term.dz.allFinite(), "term coordinates must be finite");
    require(std::isfinite(term.weight.real()) && std::isfinite(term.weight.imag()),
            "term weight must be finite");
}

void validate(const StateSum& state)
{
    require(std::isfinite(state.hbar) && state.hbar > 0.0, "hbar must be > 0");
    require(!state.terms.empty(), "state has no terms");
    for (const auto& t : state.terms) validate(t);
}

StateSum coherent_state(const Vec2& z0, double g, double hbar)
{
    require(g > 0.0, "g must be > 0");
    require(hbar > 0.0, "hbar must be > 0");
    GaussianTerm term;
    term.z0 = z0;
    term.g = g;
    return StateSum{{term}, hbar};
}

double cat_normalization(const Vec2& z1, const Vec2& z2, double g, double hbar)
{
    require(g > 0.0, "g must be > 0");
    require(hbar > 0.0, "hbar must be > 0");
    const Vec2 z0 = 0.5 * (z1 + z2);
    const Vec2 dz = z2 - z1;
    const double phase = (z0(1) * dz(0) - z0(0) * dz(1)) / hbar;
    const double damp = std::exp(-(g * dz(1) * dz(1) + dz(0) * dz(0) / g) / (4.0 * hbar));
    return 2.0 + 2.0 * std::cos(phase) * damp;
}

StateSum cat_state(const Vec2& z1, const Vec2& z2, double g, double hbar)
{
    require(g > 0.0, "g must be > 0");
    require(hbar > 0.0, "hbar must be > 0");
    const double n = cat_normalization(z1, z2, g, hbar);
    require(n > 0.0, "degenerate superposition (zero norm)");
    const cplx w = 1.0 / n;
    StateSum s;
    s.hbar = hbar;
    const Vec2 z0 = 0.5 * (z1 + z2);
    const Vec2 dz = z2 - z1;
    s.terms.push_back({z1, Vec2::Zero(), g, w});
    s.terms.push_back({z2, Vec2::Zero(), g, w});
    s.terms.push_back({z0, dz, g, w});
    s.terms.push_back({z0, -dz, g, w});
    return s;
}

cplx wigner_term(const GaussianTerm& term, double hbar, const Vec2& x)
{
    const double p = x(0), q = x(1);
    const double dp = term.dp(), dq = term.dq();
    const double e = (term.g * (q - term.q0()) * (q - term.q0()) +
                      (p - term.p0()) * (p - term.p0()) / term.g) / hbar;
    const double ph = (q * dp - p * dq) / hbar;
    return term.weight * std::exp(cplx(-e, ph)) / (kPi * hbar);
}

cplx wigner_eval(const StateSum& state, const Vec2& x)
{
    cplx s = 0.0;
    for (const auto& t : state.terms) s += wigner_term(t, state.hbar, x);
    return s;
}

cplx char_term(const GaussianTerm& term, double hbar, const Vec2& xi)
{
    const double a = xi(0) - term.dq();
    const double b = xi(1) + term.dp();
    const double e = (term.g * a * a + b * b / term.g) / (4.0 * hbar);
    const double ph = (term.p0() * a + term.q0() * b) / hbar;
    return term.weight * std::exp(cplx(-e, ph));
}

cplx char_eval(const StateSum& state, const Vec2& xi)
{
    cplx s = 0.0;
    for (const auto& t : state.terms) s += char_term(t, state.hbar, xi);
    return s;
}

bool uncertainty_check(const CovarianceMatrix& G)
{
    const Mat2& g = G.g;
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    if (std::abs(g(0, 1) - g(1, 0)) > 1e-12 * scale) throw DomainError("covariance matrix is not symmetric");
    if (!(g(0, 0) > 0.0) || !(g.determinant() > 0.0)) return false;
    return g.determinant() >= 1.0 - 1e-12;
}

// ---- grid ----------------------------------------------------------------

cplx PhaseSpaceGrid::mass() const
{
    cplx s = 0.0;
    for (const auto& v : values) s += v;
    return s * dp() * dq();
}

void validate(const PhaseSpaceGrid& grid)
{
    require(grid.n_p >= 2 && grid.n_q >= 2, "grid needs at least 2 nodes per axis");
    require(grid.p_max > grid.p_min && grid.q_max > grid.q_min, "grid bounds must be increasing");
    require(grid.values.empty() || grid.values.size() == grid.n_p * grid.n_q,
            "grid value count does not match n_p * n_q");
}

PhaseSpaceGrid sample_wigner(const StateSum& state, PhaseSpaceGrid grid)
{
    validate(grid);
    grid.allocate();
    for (std::size_t i = 0; i < grid.n_p; ++i)
        for (std::size_t j = 0; j < grid.n_q; ++j)
            grid.at(i, j) = wigner_eval(state, Vec2(grid.p(i), grid.q(j)));
    return grid;
}

double max_abs_diff(const PhaseSpaceGrid& a, const PhaseSpaceGrid& b)
{
    require(a.values.size() == b.values.size(), "grid shapes differ");
    double m = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k) m = std::max(m, std::abs(a.values[k] - b.values[k]));
    return m;
}

void write_grid_csv(const PhaseSpaceGrid& grid, const std::string& path)
{
    Table t;
    t.header = {"p", "q", "re_w", "im_w"};
    t.rows.reserve(grid.n_p * grid.n_q);
    for (std::size_t j = 0; j < grid.n_q; ++j)
        for (std::size_t i = 0; i < grid.n_p; ++i) {
            const cplx v = grid.at(i, j);
            t.rows.push_back({grid.p(i), grid.q(j), v.real(), v.imag()});
        }
    export_table(t, path);
}

} // namespace bgc
