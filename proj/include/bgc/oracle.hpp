#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "bgc/exact_channel.hpp"
#include "bgc/grid.hpp"

namespace bgc {

// ---- PDE solver for the Wigner equation --------------------------------

/// 0.4 min(dq/|p|max, dp^2/(hbar sigma^2), dq^2/(hbar gamma^2 p^2max)); infinity if no term is active.
double pde_stability_bound(const ChannelSpec& spec, const PhaseSpaceGrid& grid);
/// Default step: min(stability bound, 0.8 / sum of the three rates).
double pde_default_dt(const ChannelSpec& spec, const PhaseSpaceGrid& grid);

struct PdeResult {
    std::vector<PhaseSpaceGrid> snapshots;
    double dt = 0.0;
    std::size_t steps = 0;
    double mass_initial = 0.0;
    double mass_final = 0.0;
};

/// Method of lines: upwind-biased 3rd order transport, 4th order central
/// diffusion, RK4 in time. Zero values outside the grid. dt = 0 picks the
/// default; steps are shrunk so each snapshot time is hit exactly.
PdeResult pde_evolve_snapshots(const ChannelSpec& spec, const PhaseSpaceGrid& w0,
                               const std::vector<double>& times, double dt = 0.0);

PhaseSpaceGrid pde_evolve(const ChannelSpec& spec, const PhaseSpaceGrid& w0, double t,
                          double dt = 0.0);

/// Discrete right-hand side on a real field (testing aid).
std::vector<double> pde_rhs(const ChannelSpec& spec, const PhaseSpaceGrid& grid,
                            const std::vector<double>& field);

// ---- ODE integration of the wave-packet parameters ----------------------

/// RK4 of (a, c, P, Q, D, phi); the result is compared with a dt/2 run and
/// rejected (NumericalError) if they differ by more than tol.
EvolutionParameters ode_params(const ChannelSpec& spec, const GaussianTerm& term, double eta,
                               double t, double dt, double tol = 1e-9);

// ---- Density matrix reconstruction and entropy --------------------------

struct DensityMatrixGrid {
    std::vector<double> q_nodes;
    Eigen::MatrixXcd rho;
    double weight = 0.0;
};

/// rho(q,q') = \int W(p,(q+q')/2) exp(i p (q-q')/hbar) dp on every second q
/// node of the grid (which needs an odd q count).
DensityMatrixGrid density_matrix_from_wigner(const PhaseSpaceGrid& w, double hbar);

struct EntropyResult {
    double entropy = 0.0;
    double trace = 0.0;
    double negative_mass = 0.0;
};

EntropyResult entropy_from_density(const DensityMatrixGrid& dm);
EntropyResult entropy_from_wigner(const PhaseSpaceGrid& w, double hbar);

struct EntropyGridOptions {
    double q_half = 18.0;
    std::size_t n_rho = 361;
    double p_half = 10.0;
    double dp = 0.05;
    double eta_half = 20.0;
    double d_eta = 0.1;
};

/// Von Neumann entropy of the exact evolved state; throws NumericalError when
/// the negative-eigenvalue mass exceeds 1e-6.
EntropyResult entropy_numerical(const ChannelSpec& spec, const StateSum& state, double t,
                                const EntropyGridOptions& opt = {});

// ---- Integral identities of the wave-packet solution --------------------

struct LemmaExtras {
    double eta = 0.8;
    double q0 = 0.6;
    double p0 = -0.7;
    double g = 1.3;
};

struct LemmaItem {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double discrepancy = 0.0;
};

struct LemmaReport {
    std::vector<LemmaItem> items;
    double max_discrepancy = 0.0;
};

LemmaReport integral_lemma_suite(double omega, double beta, double t, const LemmaExtras& ex = {});

/// Max over a t-grid of |beta u^2 - (omega^2/beta) v^2 - (beta - omega^2/beta)| / scale.
double wronskian_drift(double omega, double beta, double t_max, int n = 101);

// ---- Reports ------------------------------------------------------------

struct OracleRecord {
    std::string test;
    nlohmann::json params;
    double discrepancy = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

nlohmann::json to_json(const OracleRecord& r);

/// Quick versions of every oracle comparison (used by the oracle-check command).
std::vector<OracleRecord> run_oracle_suite(const ChannelSpec& spec, bool include_pde);

} // namespace bgc
