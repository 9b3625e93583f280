#include "bgc/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bgc/approximations.hpp"
#include "bgc/csv.hpp"
#include "bgc/entropy.hpp"
#include "bgc/exact_channel.hpp"
#include "bgc/observables.hpp"
#include "bgc/oracle.hpp"
#include "bgc/propagator.hpp"

namespace bgc {

namespace fs = std::filesystem;

namespace {

std::string out_path(const CommandOptions& opt, const std::string& name)
{
    return (fs::path(opt.out_dir) / name).string();
}

std::string indexed(const char* stem, int k)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%04d.csv", stem, k);
    return buf;
}

/// Single dz = 0 term required by the Gaussian-based approximations.
const GaussianTerm& single_gaussian(const StateSum& state, const char* what)
{
    if (state.terms.size() != 1 || state.terms.front().oscillatory())
        throw DomainError(std::string(what) + " needs a state with a single dz = 0 term");
    return state.terms.front();
}

std::string gamma_label(double g)
{
    std::string s = format_number(g);
    return s;
}

SampledFunction read_general_input(const std::string& path)
{
    std::ifstream is(path);
    if (!is) throw DomainError(path + ": cannot open general input");
    std::string line;
    if (!std::getline(is, line)) throw DomainError(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "p,re_w0,im_w0") throw DomainError(path + ": line 1: expected header p,re_w0,im_w0");
    std::vector<double> ps;
    SampledFunction f;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string a, b, c;
        double v[3];
        if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') || !std::getline(ls, c))
            throw DomainError(path + ": line " + std::to_string(lineno) + ": expected 3 columns");
        const std::string cols[3] = {a, b, c};
        for (int k = 0; k < 3; ++k) {
            char* end = nullptr;
            v[k] = std::strtod(cols[k].c_str(), &end);
            if (end == cols[k].c_str() || !std::isfinite(v[k]))
                throw DomainError(path + ": line " + std::to_string(lineno) + ": bad number");
        }
        ps.push_back(v[0]);
        f.values.emplace_back(v[1], v[2]);
    }
    if (ps.size() < 2) throw DomainError(path + ": need at least two samples");
    f.p_min = ps.front();
    f.dp = (ps.back() - ps.front()) / static_cast<double>(ps.size() - 1);
    if (!(f.dp > 0.0)) throw DomainError(path + ": p must increase");
    for (std::size_t i = 0; i < ps.size(); ++i)
        if (std::abs(ps[i] - f.p(i)) > 1e-9 * std::max(1.0, std::abs(ps[i])))
            throw DomainError(path + ": p samples must be uniformly spaced");
    return f;
}

int cmd_evolve(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log)
{
    const ChannelSpec& spec = cfg.channel;
    if (opt.general) {
        if (cfg.evolve.general_input.empty())
            throw DomainError("evolve.general_input: required with --general");
        const SampledFunction w0 = read_general_input(cfg.evolve.general_input);
        const KernelApplication ka = apply_kernel(spec, cfg.time.t_max, cfg.evolve.eta, w0);
        Table t{{"p", "re_w0", "im_w0"}, {}};
        for (std::size_t i = 0; i < ka.w.values.size(); ++i)
            t.rows.push_back({ka.w.p(i), ka.w.values[i].real(), ka.w.values[i].imag()});
        export_table(t, out_path(opt, "general.csv"));
        if (ka.tail_warning) log << "warning: boundary tail mass " << ka.tail_mass << "\n";
        log << "wrote general.csv\n";
        return kExitOk;
    }
    const StateSum state = cfg.build_state();
    Table times{{"k", "t"}, {}};
    const int n = cfg.evolve.chi_n;
    const double h = cfg.evolve.chi_half;
    for (int k = 0; k <= cfg.time.n_steps; ++k) {
        if (k % cfg.evolve.stride != 0 && k != cfg.time.n_steps) continue;
        const double t = cfg.time.t(k);
        times.rows.push_back({static_cast<double>(k), t});
        write_grid_csv(wigner_evolved_grid(spec, state, t, cfg.grid), out_path(opt, indexed("wigner", k)));
        Table chi{{"xi", "eta", "re_chi", "im_chi"}, {}};
        for (int b = 0; b < n; ++b)
            for (int a = 0; a < n; ++a) {
                const double xi = -h + 2.0 * h * a / (n - 1), eta = -h + 2.0 * h * b / (n - 1);
                const cplx c = char_evolved(spec, state, xi, eta, t);
                chi.rows.push_back({xi, eta, c.real(), c.imag()});
            }
        export_table(chi, out_path(opt, indexed("chi", k)));
    }
    export_table(times, out_path(opt, "times.csv"));
    log << "wrote " << times.rows.size() << " snapshots\n";
    return kExitOk;
}

int cmd_moments(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log)
{
    const StateSum state = cfg.build_state();
    const GaussianTerm& term = single_gaussian(state, "moments");
    Table t{{"t", "mean_p", "mean_q", "var_p", "cov_pq", "var_q", "var_q_fd"}, {}};
    for (int k = 0; k <= cfg.time.n_steps; ++k) {
        const double tk = cfg.time.t(k);
        const MomentTable m = moments_closed(cfg.channel, term, tk);
        const double mq = moment_fd(cfg.channel, term, 0, 1, tk);
        const double vq = moment_fd(cfg.channel, term, 0, 2, tk) - mq * mq;
        t.rows.push_back({tk, m.mean(0), m.mean(1), m.cov(0, 0), m.cov(0, 1), m.cov(1, 1), vq});
    }
    export_table(t, out_path(opt, "moments.csv"));
    log << "wrote moments.csv\n";
    return kExitOk;
}

int cmd_purity(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log)
{
    const StateSum state = cfg.build_state();
    Table t;
    t.header.push_back("t");
    for (double g : cfg.purity.gammas) t.header.push_back("ratio_gamma_" + gamma_label(g));
    for (double g : cfg.purity.gammas) t.header.push_back("short_time_gamma_" + gamma_label(g));
    for (int k = 0; k <= cfg.time.n_steps; ++k) {
        const double tk = cfg.time.t(k);
        std::vector<double> row{tk};
        std::vector<double> st;
        for (double g : cfg.purity.gammas) {
            ChannelSpec s = cfg.channel;
            s.gamma = g;
            row.push_back(purity_ratio(s, state, tk));
            st.push_back(purity_short_time(s, state, tk));
        }
        row.insert(row.end(), st.begin(), st.end());
        t.rows.push_back(row);
    }
    export_table(t, out_path(opt, "purity.csv"));
    log << "wrote purity.csv\n";
    return kExitOk;
}

int cmd_entropy(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log)
{
    const StateSum state = cfg.build_state();
    const GaussianTerm& term = single_gaussian(state, "entropy");
    const ChannelSpec& spec = cfg.channel;
    EntropyGridOptions eo;
    eo.q_half = cfg.entropy.q_half;
    eo.n_rho = static_cast<std::size_t>(cfg.entropy.n_rho);
    eo.p_half = cfg.entropy.p_half;
    eo.dp = cfg.entropy.dp;
    eo.eta_half = cfg.entropy.eta_half;
    eo.d_eta = cfg.entropy.d_eta;
    Table t{{"t", "S_numerical", "S_cov", "S_perturbative", "S_semiclassical"}, {}};
    for (int k = 0; k <= cfg.time.n_steps; ++k) {
        if (k % cfg.entropy.stride != 0 && k != cfg.time.n_steps) continue;
        const double tk = cfg.time.t(k);
        const double s_num = entropy_numerical(spec, state, tk, eo).entropy;
        // the first-order formula expands around a mixed gamma = 0 state; at t = 0 the state is pure
        const double s_pert = tk > 0.0 ? entropy_perturbative(spec, term, tk) : 0.0;
        t.rows.push_back({tk, s_num, entropy_cov(spec, term, tk), s_pert,
                          entropy_semiclassical(spec, term, tk)});
    }
    export_table(t, out_path(opt, "entropy.csv"));
    log << "wrote entropy.csv\n";
    return kExitOk;
}

int cmd_compare(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log)
{
    const StateSum state = cfg.build_state();
    const GaussianTerm& term = single_gaussian(state, "compare");
    const ChannelSpec& spec = cfg.channel;
    const Vec2 x = cfg.compare.point;
    ChannelSpec s0 = spec;
    s0.gamma = 0.0;
    const SemiclassicalState sc0 = sc_initial(term);
    Table t{{"t", "var_q_exact", "var_q_semiclassical", "var_q_perturbative", "w_exact",
             "w_semiclassical", "w_perturbative"},
            {}};
    for (int k = 0; k <= cfg.time.n_steps; ++k) {
        const double tk = cfg.time.t(k);
        const double vq_exact = moments_closed(spec, term, tk).cov(1, 1);
        const double vq_sc = 0.5 * spec.hbar * sc_gaussian_covariance(spec, term, tk).g(1, 1);
        // Var q is linear in gamma^2, so first order reproduces it
        const double dvq = spec.hbar * term.p0() * term.p0() * tk +
                           0.5 * spec.hbar * spec.hbar * (term.g * tk + spec.sigma * spec.sigma * tk * tk);
        const double vq_pert = moments_closed(s0, term, tk).cov(1, 1) + spec.gamma * spec.gamma * dvq;
        const double w_exact = wigner_point(spec, state, tk, x).real();
        const SemiclassicalState sc = sc_nonhermitian_evolve(spec, sc0, tk);
        const double w_sc = (term.weight * sc_wigner(sc, spec.hbar, x)).real();
        const double w_pert = perturbed_wigner(spec, term, tk, x);
        t.rows.push_back({tk, vq_exact, vq_sc, vq_pert, w_exact, w_sc, w_pert});
    }
    export_table(t, out_path(opt, "compare.csv"));
    log << "wrote compare.csv\n";
    return kExitOk;
}

int cmd_oracle(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log)
{
    const std::vector<OracleRecord> recs = run_oracle_suite(cfg.channel, cfg.oracle.include_pde);
    nlohmann::json arr = nlohmann::json::array();
    bool ok = true;
    for (const auto& r : recs) {
        arr.push_back(to_json(r));
        ok = ok && r.pass;
        log << (r.pass ? "PASS " : "FAIL ") << r.test << " discrepancy=" << format_number(r.discrepancy)
            << " tolerance=" << format_number(r.tolerance) << "\n";
    }
    const nlohmann::json report = {{"pass", ok}, {"records", arr}};
    const std::string path = out_path(opt, "oracle_report.json");
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error(path + ": cannot write");
    os << report.dump(2) << "\n";
    return ok ? kExitOk : kExitOracleFailure;
}

} // namespace

cplx wigner_point(const ChannelSpec& spec, const StateSum& state, double t, const Vec2& x)
{
    validate(spec);
    validate(state);
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (const auto& term : state.terms) {
        const double c = -term.dp(), w = 14.0 * std::sqrt(spec.hbar * term.g);
        lo = first ? c - w : std::min(lo, c - w);
        hi = first ? c + w : std::max(hi, c + w);
        first = false;
    }
    const double hb = spec.hbar;
    auto integrand = [&](double eta, bool imag) {
        const cplx v = std::exp(cplx(0.0, -x(1) * eta / hb)) * partial_wigner(spec, state, x(0), eta, t);
        return imag ? v.imag() : v.real();
    };
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double re = GK::integrate([&](double e) { return integrand(e, false); }, lo, hi, 20, 1e-13);
    const double im = GK::integrate([&](double e) { return integrand(e, true); }, lo, hi, 20, 1e-13);
    return cplx(re, im) / (2.0 * kPi * hb);
}

int run_command(const std::string& cmd, const RunConfig& cfg, const CommandOptions& opt,
                std::ostream& log)
{
    fs::create_directories(opt.out_dir);
    if (cmd == "evolve") return cmd_evolve(cfg, opt, log);
    if (opt.general) throw DomainError("--general applies to evolve only");
    if (cmd == "moments") return cmd_moments(cfg, opt, log);
    if (cmd == "purity") return cmd_purity(cfg, opt, log);
    if (cmd == "entropy") return cmd_entropy(cfg, opt, log);
    if (cmd == "compare") return cmd_compare(cfg, opt, log);
    if (cmd == "oracle-check") return cmd_oracle(cfg, opt, log);
    throw DomainError("unknown command '" + cmd + "'");
}

std::string error_report(const std::string& kind, const std::string& message)
{
    return nlohmann::json{{"error", kind}, {"message", message}}.dump();
}

int run_command_checked(const std::string& cmd, const RunConfig& cfg, const CommandOptions& opt,
                        std::ostream& log, std::ostream& err)
{
    try {
        return run_command(cmd, cfg, opt, log);
    } catch (const DomainError& e) {
        err << error_report("validation", e.what()) << "\n";
    } catch (const NumericalError& e) {
        err << error_report("numerical", e.what()) << "\n";
    } catch (const std::exception& e) {
        err << error_report("runtime", e.what()) << "\n";
    }
    return kExitInvalid;
}

} // namespace bgc
