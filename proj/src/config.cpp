#include "bgc/config.hpp"

#include <cmath>
#include <set>

namespace bgc {

using nlohmann::json;

namespace {

std::string join(const std::string& prefix, const std::string& key)
{
    return prefix.empty() ? key : prefix + "." + key;
}

[[noreturn]] void fail(const std::string& path, const std::string& msg)
{
    throw ConfigError(path + ": " + msg);
}

/// Reads fields from one JSON object and rejects whatever is left over.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object()) fail(path_.empty() ? "<root>" : path_, "expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const json* get(const std::string& key)
    {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    void number(const std::string& key, double& out, bool required = false)
    {
        const json* v = get(key);
        if (!v) {
            if (required) fail(join(path_, key), "required field missing");
            return;
        }
        if (!v->is_number()) fail(join(path_, key), "expected a number");
        out = v->get<double>();
        if (!std::isfinite(out)) fail(join(path_, key), "must be finite");
    }

    void integer(const std::string& key, int& out)
    {
        const json* v = get(key);
        if (!v) return;
        if (!v->is_number_integer()) fail(join(path_, key), "expected an integer");
        out = v->get<int>();
    }

    void size(const std::string& key, std::size_t& out)
    {
        int n = static_cast<int>(out);
        integer(key, n);
        if (n < 0) fail(join(path_, key), "must be >= 0");
        out = static_cast<std::size_t>(n);
    }

    void boolean(const std::string& key, bool& out)
    {
        const json* v = get(key);
        if (!v) return;
        if (!v->is_boolean()) fail(join(path_, key), "expected true or false");
        out = v->get<bool>();
    }

    void string(const std::string& key, std::string& out)
    {
        const json* v = get(key);
        if (!v) return;
        if (!v->is_string()) fail(join(path_, key), "expected a string");
        out = v->get<std::string>();
    }

    void vec2(const std::string& key, Vec2& out)
    {
        const json* v = get(key);
        if (!v) return;
        if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number())
            fail(join(path_, key), "expected [p, q]");
        out = Vec2((*v)[0].get<double>(), (*v)[1].get<double>());
    }

    std::string path(const std::string& key) const { return join(path_, key); }

    void finish() const
    {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) fail(join(path_, it.key()), "unknown key");
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

void check(bool ok, const std::string& path, const std::string& msg)
{
    if (!ok) fail(path, msg);
}

GaussianTerm read_term(const json& j, const std::string& path)
{
    ObjectReader r(j, path);
    double p0 = 0.0, q0 = 0.0, dp = 0.0, dq = 0.0;
    GaussianTerm term;
    r.number("p0", p0);
    r.number("q0", q0);
    r.number("dp", dp);
    r.number("dq", dq);
    r.number("g", term.g);
    if (const json* w = r.get("weight")) {
        if (w->is_number()) {
            term.weight = w->get<double>();
        } else if (w->is_array() && w->size() == 2 && (*w)[0].is_number() && (*w)[1].is_number()) {
            term.weight = cplx((*w)[0].get<double>(), (*w)[1].get<double>());
        } else {
            fail(r.path("weight"), "expected a number or [re, im]");
        }
    }
    r.finish();
    check(term.g > 0.0, r.path("g"), "g must be > 0");
    term.z0 = Vec2(p0, q0);
    term.dz = Vec2(dp, dq);
    return term;
}

void read_channel(const json& j, ChannelSpec& c)
{
    ObjectReader r(j, "channel");
    r.number("sigma", c.sigma, true);
    r.number("gamma", c.gamma, true);
    r.number("hbar", c.hbar);
    r.finish();
    check(c.sigma >= 0.0, "channel.sigma", "sigma must be >= 0");
    check(c.gamma >= 0.0, "channel.gamma", "gamma must be >= 0");
    check(c.hbar > 0.0, "channel.hbar", "hbar must be > 0");
}

void read_state(const json& j, StateConfig& s)
{
    ObjectReader r(j, "state");
    const json* terms = r.get("terms");
    const json* cat = r.get("cat");
    r.finish();
    check(!(terms && cat), "state", "give either terms or cat, not both");
    if (terms) {
        check(terms->is_array() && !terms->empty(), "state.terms", "expected a nonempty array");
        s.terms.clear();
        for (std::size_t i = 0; i < terms->size(); ++i)
            s.terms.push_back(read_term((*terms)[i], "state.terms." + std::to_string(i)));
    }
    if (cat) {
        ObjectReader c(*cat, "state.cat");
        c.vec2("z1", s.cat.z1);
        c.vec2("z2", s.cat.z2);
        c.number("g", s.cat.g);
        c.finish();
        check(s.cat.g > 0.0, "state.cat.g", "g must be > 0");
        check(s.cat.z1 != s.cat.z2, "state.cat", "z1 and z2 must differ");
        s.is_cat = true;
        s.terms.clear();
    }
}

void read_time(const json& j, TimeConfig& t)
{
    ObjectReader r(j, "time");
    r.number("t_max", t.t_max);
    r.integer("n_steps", t.n_steps);
    r.finish();
    check(t.t_max >= 0.0, "time.t_max", "t_max must be >= 0");
    check(t.n_steps >= 1, "time.n_steps", "n_steps must be >= 1");
}

void read_grid(const json& j, PhaseSpaceGrid& g)
{
    ObjectReader r(j, "grid");
    r.number("p_min", g.p_min);
    r.number("p_max", g.p_max);
    r.number("q_min", g.q_min);
    r.number("q_max", g.q_max);
    r.size("n_p", g.n_p);
    r.size("n_q", g.n_q);
    r.finish();
    check(g.p_max > g.p_min, "grid.p_max", "p_max must exceed p_min");
    check(g.q_max > g.q_min, "grid.q_max", "q_max must exceed q_min");
    check(g.n_p >= 4, "grid.n_p", "n_p must be >= 4");
    check(g.n_q >= 4, "grid.n_q", "n_q must be >= 4");
}

void read_evolve(const json& j, EvolveOptions& e)
{
    ObjectReader r(j, "evolve");
    r.integer("stride", e.stride);
    r.integer("chi_n", e.chi_n);
    r.number("chi_half", e.chi_half);
    r.string("general_input", e.general_input);
    r.number("eta", e.eta);
    r.finish();
    check(e.stride >= 1, "evolve.stride", "stride must be >= 1");
    check(e.chi_n >= 2, "evolve.chi_n", "chi_n must be >= 2");
    check(e.chi_half > 0.0, "evolve.chi_half", "chi_half must be > 0");
}

void read_purity(const json& j, PurityOptions& p)
{
    ObjectReader r(j, "purity");
    if (const json* g = r.get("gammas")) {
        check(g->is_array() && !g->empty(), "purity.gammas", "expected a nonempty array");
        p.gammas.clear();
        for (const auto& x : *g) {
            check(x.is_number(), "purity.gammas", "expected numbers");
            check(x.get<double>() >= 0.0, "purity.gammas", "gamma must be >= 0");
            p.gammas.push_back(x.get<double>());
        }
    }
    r.finish();
}

void read_entropy(const json& j, EntropyOptions& e)
{
    ObjectReader r(j, "entropy");
    r.integer("stride", e.stride);
    r.number("q_half", e.q_half);
    r.integer("n_rho", e.n_rho);
    r.number("p_half", e.p_half);
    r.number("dp", e.dp);
    r.number("eta_half", e.eta_half);
    r.number("d_eta", e.d_eta);
    r.finish();
    check(e.stride >= 1, "entropy.stride", "stride must be >= 1");
    check(e.n_rho >= 2, "entropy.n_rho", "n_rho must be >= 2");
    for (auto [v, k] : {std::pair{e.q_half, "q_half"}, {e.p_half, "p_half"}, {e.dp, "dp"},
                        {e.eta_half, "eta_half"}, {e.d_eta, "d_eta"}})
        check(v > 0.0, std::string("entropy.") + k, std::string(k) + " must be > 0");
}

void read_compare(const json& j, CompareOptions& c)
{
    ObjectReader r(j, "compare");
    r.vec2("point", c.point);
    r.finish();
}

void read_oracle(const json& j, OracleOptions& o)
{
    ObjectReader r(j, "oracle");
    r.boolean("include_pde", o.include_pde);
    r.finish();
}

RunConfig from_json(const json& doc)
{
    RunConfig cfg;
    ObjectReader r(doc, "");
    const json* ch = r.get("channel");
    if (!ch) fail("channel", "required field missing");
    read_channel(*ch, cfg.channel);
    if (const json* v = r.get("state")) read_state(*v, cfg.state);
    if (const json* v = r.get("time")) read_time(*v, cfg.time);
    if (const json* v = r.get("grid")) read_grid(*v, cfg.grid);
    if (const json* v = r.get("evolve")) read_evolve(*v, cfg.evolve);
    if (const json* v = r.get("purity")) read_purity(*v, cfg.purity);
    if (const json* v = r.get("entropy")) read_entropy(*v, cfg.entropy);
    if (const json* v = r.get("compare")) read_compare(*v, cfg.compare);
    if (const json* v = r.get("oracle")) read_oracle(*v, cfg.oracle);
    r.finish();
    if (!cfg.state.is_cat && cfg.state.terms.empty()) cfg.state.terms.push_back(GaussianTerm{});
    try {
        validate(cfg.build_state());
    } catch (const DomainError& e) {
        fail("state", e.what());
    }
    return cfg;
}

json parse_text(const std::string& source)
{
    try {
        return json::parse(source);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, source.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (source[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::string what = e.what();
        throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(col) +
                          ": malformed JSON (" + what + ")");
    }
}

void apply_override(json& doc, const std::string& text)
{
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) fail(text, "override must look like path=value");
    const std::string path = text.substr(0, eq), raw = text.substr(eq + 1);
    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw;
    }
    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty()) fail(path, "empty path component");
        json* child = nullptr;
        if (node->is_array()) {
            std::size_t idx = 0;
            try {
                idx = std::stoul(key);
            } catch (const std::exception&) {
                fail(path, "array index expected at '" + key + "'");
            }
            if (idx >= node->size()) fail(path, "array index out of range");
            child = &(*node)[idx];
        } else {
            if (node->is_null()) *node = json::object();
            if (!node->is_object()) fail(path, "cannot descend into a scalar");
            child = &(*node)[key];
        }
        if (dot == std::string::npos) {
            *child = value;
            return;
        }
        node = child;
        start = dot + 1;
    }
}

} // namespace

StateSum RunConfig::build_state() const
{
    if (state.is_cat) return cat_state(state.cat.z1, state.cat.z2, state.cat.g, channel.hbar);
    StateSum s;
    s.hbar = channel.hbar;
    s.terms = state.terms;
    return s;
}

RunConfig parse_config(const std::string& source)
{
    return from_json(parse_text(source));
}

RunConfig parse_config(const std::string& source, const std::vector<std::string>& overrides)
{
    json doc = parse_text(source);
    for (const auto& o : overrides) apply_override(doc, o);
    return from_json(doc);
}

json to_json(const RunConfig& cfg)
{
    json j;
    j["channel"] = {{"sigma", cfg.channel.sigma}, {"gamma", cfg.channel.gamma}, {"hbar", cfg.channel.hbar}};
    if (cfg.state.is_cat) {
        j["state"]["cat"] = {{"z1", {cfg.state.cat.z1(0), cfg.state.cat.z1(1)}},
                             {"z2", {cfg.state.cat.z2(0), cfg.state.cat.z2(1)}},
                             {"g", cfg.state.cat.g}};
    } else {
        json terms = json::array();
        for (const auto& t : cfg.state.terms) {
            json w = t.weight.imag() == 0.0 ? json(t.weight.real())
                                            : json::array({t.weight.real(), t.weight.imag()});
            terms.push_back({{"p0", t.p0()}, {"q0", t.q0()}, {"dp", t.dp()}, {"dq", t.dq()},
                             {"g", t.g}, {"weight", w}});
        }
        j["state"]["terms"] = terms;
    }
    j["time"] = {{"t_max", cfg.time.t_max}, {"n_steps", cfg.time.n_steps}};
    const auto& g = cfg.grid;
    j["grid"] = {{"p_min", g.p_min}, {"p_max", g.p_max}, {"q_min", g.q_min},
                 {"q_max", g.q_max}, {"n_p", g.n_p},     {"n_q", g.n_q}};
    const auto& e = cfg.evolve;
    j["evolve"] = {{"stride", e.stride}, {"chi_n", e.chi_n}, {"chi_half", e.chi_half},
                   {"general_input", e.general_input}, {"eta", e.eta}};
    j["purity"] = {{"gammas", cfg.purity.gammas}};
    const auto& s = cfg.entropy;
    j["entropy"] = {{"stride", s.stride}, {"q_half", s.q_half},     {"n_rho", s.n_rho},
                    {"p_half", s.p_half}, {"dp", s.dp},             {"eta_half", s.eta_half},
                    {"d_eta", s.d_eta}};
    j["compare"] = {{"point", {cfg.compare.point(0), cfg.compare.point(1)}}};
    j["oracle"] = {{"include_pde", cfg.oracle.include_pde}};
    return j;
}

std::string serialize_config(const RunConfig& cfg)
{
    return to_json(cfg).dump(2) + "\n";
}

} // namespace bgc
