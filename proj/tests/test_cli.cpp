#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <json.hpp>

#include "bgc/approximations.hpp"
#include "bgc/exact_channel.hpp"
#include "bgc/observables.hpp"
#include "bgc/propagator.hpp"

using namespace bgc;
namespace fs = std::filesystem;

namespace {

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t col(const std::string& name) const
    {
        for (std::size_t k = 0; k < header.size(); ++k)
            if (header[k] == name) return k;
        FAIL("missing column " << name);
        return 0;
    }
};

std::string slurp(const fs::path& p)
{
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

Csv read_csv(const fs::path& p)
{
    std::ifstream is(p);
    REQUIRE(is);
    Csv c;
    std::string line;
    std::getline(is, line);
    std::stringstream hs(line);
    for (std::string cell; std::getline(hs, cell, ',');) c.header.push_back(cell);
    while (std::getline(is, line)) {
        std::stringstream ls(line);
        std::vector<double> row;
        for (std::string cell; std::getline(ls, cell, ',');) row.push_back(std::stod(cell));
        c.rows.push_back(row);
    }
    return c;
}

/// Fresh scratch directory holding config.json.
fs::path scratch(const std::string& name, const std::string& config)
{
    const fs::path dir = fs::path(BGC_TEST_TMP) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ofstream(dir / "config.json") << config;
    return dir;
}

int run(const fs::path& dir, const std::string& cmd, const std::string& extra = "")
{
    const std::string line = std::string("\"") + BGC_CLI_PATH + "\" " + cmd + " --config \"" +
                             (dir / "config.json").string() + "\" --out \"" + dir.string() + "\" " + extra +
                             " > \"" + (dir / "stdout.txt").string() + "\" 2> \"" + (dir / "stderr.txt").string() +
                             "\"";
    const int rc = std::system(line.c_str());
    return WEXITSTATUS(rc);
}

ChannelSpec channel(double sigma, double gamma)
{
    ChannelSpec s;
    s.sigma = sigma;
    s.gamma = gamma;
    return s;
}

const char* kPacket = R"({
  "channel": {"sigma": 1.0, "gamma": 0.5},
  "state": {"terms": [{"p0": 0.5, "q0": 0.2}]},
  "time": {"t_max": 1.0, "n_steps": 10},
  "grid": {"p_min": -5, "p_max": 5, "q_min": -8, "q_max": 8, "n_p": 21, "n_q": 33},
  "evolve": {"stride": 5, "chi_n": 8, "chi_half": 3},
  "entropy": {"stride": 5, "q_half": 14, "n_rho": 141, "p_half": 8, "dp": 0.1, "eta_half": 14, "d_eta": 0.2},
  "compare": {"point": [0.5, 0.7]}
})";

} // namespace

TEST_CASE("moments: closed form and finite differences agree with the library")
{
    const fs::path dir = scratch("moments", kPacket);
    REQUIRE(run(dir, "moments") == 0);
    const Csv c = read_csv(dir / "moments.csv");
    CHECK(c.header == std::vector<std::string>{"t", "mean_p", "mean_q", "var_p", "cov_pq", "var_q", "var_q_fd"});
    REQUIRE(c.rows.size() == 11);
    GaussianTerm term;
    term.z0 = Vec2(0.5, 0.2);
    for (const auto& r : c.rows) {
        const MomentTable m = moments_closed(channel(1.0, 0.5), term, r[0]);
        CHECK(r[c.col("var_q")] == m.cov(1, 1));
        CHECK(std::abs(r[c.col("var_q_fd")] - m.cov(1, 1)) < 1e-6);
    }
}

TEST_CASE("evolve writes the snapshot grids and characteristic functions")
{
    const fs::path dir = scratch("evolve", kPacket);
    REQUIRE(run(dir, "evolve") == 0);
    const Csv times = read_csv(dir / "times.csv");
    REQUIRE(times.rows.size() == 3);
    CHECK(times.rows[2][1] == 1.0);
    const Csv w = read_csv(dir / "wigner_0010.csv");
    CHECK(w.header == std::vector<std::string>{"p", "q", "re_w", "im_w"});
    CHECK(w.rows.size() == 21 * 33);
    const Csv chi = read_csv(dir / "chi_0005.csv");
    CHECK(chi.header == std::vector<std::string>{"xi", "eta", "re_chi", "im_chi"});
    StateSum st;
    GaussianTerm term;
    term.z0 = Vec2(0.5, 0.2);
    st.terms = {term};
    for (const auto& r : chi.rows) {
        const cplx ref = char_evolved(channel(1.0, 0.5), st, r[0], r[1], 0.5);
        CHECK(std::abs(cplx(r[2], r[3]) - ref) < 1e-15);
    }
    // reruns are byte identical
    const std::string first = slurp(dir / "wigner_0010.csv");
    REQUIRE(run(dir, "evolve") == 0);
    CHECK(slurp(dir / "wigner_0010.csv") == first);
}

TEST_CASE("evolve --general propagates a sampled partial transform")
{
    const fs::path dir = scratch("general", kPacket);
    GaussianTerm term;
    term.z0 = Vec2(0.5, 0.2);
    const ChannelSpec spec = channel(1.0, 0.5);
    {
        std::ofstream os(dir / "w0.csv");
        os << "p,re_w0,im_w0\n";
        char buf[128];
        for (int i = 0; i <= 400; ++i) {
            const double p = -10.0 + 0.05 * i;
            const cplx w = partial_wigner(spec, term, p, 0.4, 0.0);
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p, w.real(), w.imag());
            os << buf;
        }
    }
    const std::string extra = "--general --evolve.general_input=" + (dir / "w0.csv").string() + " --evolve.eta 0.4";
    REQUIRE(run(dir, "evolve", extra) == 0);
    const Csv c = read_csv(dir / "general.csv");
    CHECK(c.header == std::vector<std::string>{"p", "re_w0", "im_w0"});
    for (std::size_t i = 100; i < 300; i += 10) {
        const auto& r = c.rows[i];
        CHECK(std::abs(cplx(r[1], r[2]) - partial_wigner(spec, term, r[0], 0.4, 1.0)) < 1e-8);
    }
}

TEST_CASE("purity, entropy and compare tables")
{
    const fs::path dir = scratch("tables", kPacket);
    REQUIRE(run(dir, "purity") == 0);
    const Csv p = read_csv(dir / "purity.csv");
    CHECK(p.header == std::vector<std::string>{"t", "ratio_gamma_0", "ratio_gamma_0.5", "ratio_gamma_1",
                                               "short_time_gamma_0", "short_time_gamma_0.5",
                                               "short_time_gamma_1"});
    StateSum st;
    GaussianTerm term;
    term.z0 = Vec2(0.5, 0.2);
    st.terms = {term};
    CHECK(p.rows.back()[2] == purity_ratio(channel(1.0, 0.5), st, 1.0));

    REQUIRE(run(dir, "entropy") == 0);
    const Csv e = read_csv(dir / "entropy.csv");
    CHECK(e.header == std::vector<std::string>{"t", "S_numerical", "S_cov", "S_perturbative", "S_semiclassical"});
    REQUIRE(e.rows.size() == 3);
    CHECK(std::abs(e.rows[0][1]) < 1e-6);
    CHECK(e.rows[2][1] <= e.rows[2][2] + 1e-6);

    REQUIRE(run(dir, "compare") == 0);
    const Csv c = read_csv(dir / "compare.csv");
    CHECK(c.header.size() == 7);
    const auto& last = c.rows.back();
    CHECK(std::abs(last[c.col("var_q_perturbative")] - last[c.col("var_q_exact")]) < 1e-12);
    CHECK(std::abs(last[c.col("w_exact")] - wigner_evolved_grid(channel(1.0, 0.5), st, 1.0, [] {
                       PhaseSpaceGrid g;
                       g.p_min = 0.5;
                       g.p_max = 1.5;
                       g.q_min = 0.7;
                       g.q_max = 1.7;
                       g.n_p = 2;
                       g.n_q = 2;
                       return g;
                   }()).at(0, 0).real()) < 1e-8);
}

TEST_CASE("oracle-check writes a passing report")
{
    const fs::path dir = scratch("oracle", kPacket);
    REQUIRE(run(dir, "oracle-check", "--oracle.include_pde=false") == 0);
    const nlohmann::json j = nlohmann::json::parse(slurp(dir / "oracle_report.json"));
    CHECK(j["pass"] == true);
    CHECK(j["records"].size() >= 7);
}

TEST_CASE("invalid input gives exit status 1 and a JSON error")
{
    const fs::path dir = scratch("invalid", kPacket);
    CHECK(run(dir, "moments", "--channel.gamma=-1") == 1);
    const nlohmann::json j = nlohmann::json::parse(slurp(dir / "stderr.txt"));
    CHECK(j["error"] == "validation");
    CHECK(j["message"] == "channel.gamma: gamma must be >= 0");
    CHECK(run(dir, "frobnicate") == 1);
    const fs::path cat = scratch("cat_moments", R"({"channel": {"sigma": 1, "gamma": 1},
        "state": {"cat": {"z1": [0, -1], "z2": [0, 1]}}})");
    CHECK(run(cat, "moments") == 1);
    std::ofstream(dir / "config.json") << "{\"channel\": ";
    CHECK(run(dir, "moments") == 1);
    CHECK(slurp(dir / "stderr.txt").find("line 1, column") != std::string::npos);
}
