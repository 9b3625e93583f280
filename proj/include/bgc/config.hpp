#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "bgc/grid.hpp"
#include "bgc/phase_space.hpp"

namespace bgc {

/// Invalid configuration; the message starts with the offending dotted path
/// or with "line L, column C" for syntax errors.
class ConfigError : public DomainError {
public:
    using DomainError::DomainError;
};

struct TimeConfig {
    double t_max = 1.0;
    int n_steps = 100;
    double t(int k) const { return t_max * k / n_steps; }
};

struct CatConfig {
    Vec2 z1 = Vec2::Zero();
    Vec2 z2 = Vec2::Zero();
    double g = 1.0;
};

struct StateConfig {
    /// either an explicit term list or a cat state
    std::vector<GaussianTerm> terms;
    bool is_cat = false;
    CatConfig cat;
};

struct EvolveOptions {
    /// write a grid every `stride` time steps
    int stride = 50;
    /// characteristic-function grid: n x n over [-half, half]^2
    int chi_n = 64;
    double chi_half = 5.0;
    /// --general mode: CSV with columns p, re_w0, im_w0 at fixed eta
    std::string general_input;
    double eta = 0.0;
};

struct PurityOptions {
    std::vector<double> gammas = {0.0, 0.5, 1.0};
};

struct EntropyOptions {
    int stride = 10;
    double q_half = 18.0;
    int n_rho = 361;
    double p_half = 10.0;
    double dp = 0.05;
    double eta_half = 20.0;
    double d_eta = 0.1;
};

struct CompareOptions {
    Vec2 point = Vec2::Zero();
};

struct OracleOptions {
    bool include_pde = true;
};

struct RunConfig {
    ChannelSpec channel;
    StateConfig state;
    TimeConfig time;
    PhaseSpaceGrid grid;
    EvolveOptions evolve;
    PurityOptions purity;
    EntropyOptions entropy;
    CompareOptions compare;
    OracleOptions oracle;

    /// Builds the StateSum with the channel hbar.
    StateSum build_state() const;
};

/// Parses and validates a JSON document; missing fields take defaults.
RunConfig parse_config(const std::string& source);

/// Applies dotted-path overrides ("channel.gamma=0.5") to the JSON text
/// before parsing. Values are read as JSON, falling back to a string.
RunConfig parse_config(const std::string& source, const std::vector<std::string>& overrides);

nlohmann::json to_json(const RunConfig& cfg);
std::string serialize_config(const RunConfig& cfg);

} // namespace bgc
