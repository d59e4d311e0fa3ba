#include "slick/config.hpp"

#include <fstream>
#include <set>

#include "json.hpp"
#include "slick/errors.hpp"

namespace slick {

using nlohmann::json;

TensionModel TensionConfig::build() const {
    switch (kind) {
        case TensionKind::linear:
            return TensionModel::linear(sigma_s, beta);
        case TensionKind::exponential:
            return TensionModel::exponential(sigma_s, beta);
        case TensionKind::tabulated:
            return TensionModel::tabulated(x, sigma);
    }
    throw ConfigError("tension: unknown kind");
}

namespace {

void require_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

double positive(const json& j, const std::string& name) {
    const double v = j.at(name).get<double>();
    if (!(v > 0)) throw ConfigError(name + " must be positive");
    return v;
}

std::vector<ModeAmp> parse_modes(const json& arr, const std::string& where) {
    std::vector<ModeAmp> out;
    for (const auto& m : arr) {
        require_keys(m, where, {"k1", "k2", "amp", "phase"});
        ModeAmp a;
        a.k1 = m.at("k1").get<int>();
        a.k2 = m.at("k2").get<int>();
        a.amp = m.at("amp").get<double>();
        a.phase = m.value("phase", 0.0);
        out.push_back(a);
    }
    return out;
}

}  // namespace

namespace {
RunConfig parse_config_impl(const json& j);
}

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    try {
        return parse_config_impl(j);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

namespace {
RunConfig parse_config_impl(const json& j) {
    require_keys(j, "config",
                 {"schema", "grid", "physics", "initial", "stepping", "output", "seed"});
    if (j.at("schema").get<int>() != 1) throw ConfigError("config: unsupported schema version");

    RunConfig c;
    {
        const auto& g = j.at("grid");
        require_keys(g, "grid", {"L1", "L2", "b", "N1", "N2", "Nz", "dealias_rule"});
        c.L1 = positive(g, "L1");
        c.L2 = positive(g, "L2");
        c.b = positive(g, "b");
        c.N1 = g.at("N1").get<int>();
        c.N2 = g.at("N2").get<int>();
        c.Nz = g.at("Nz").get<int>();
        const std::string rule = g.value("dealias_rule", "two_thirds");
        if (rule == "two_thirds") c.dealias = DealiasRule::two_thirds;
        else if (rule == "three_halves") c.dealias = DealiasRule::three_halves;
        else throw ConfigError("grid: dealias_rule must be two_thirds or three_halves");
    }
    {
        const auto& p = j.at("physics");
        require_keys(p, "physics", {"gamma", "tension"});
        c.gamma = positive(p, "gamma");
        const auto& t = p.at("tension");
        require_keys(t, "tension", {"kind", "sigma_s", "beta", "x", "sigma"});
        const std::string kind = t.at("kind").get<std::string>();
        if (kind == "linear") c.tension.kind = TensionKind::linear;
        else if (kind == "exponential") c.tension.kind = TensionKind::exponential;
        else if (kind == "tabulated") c.tension.kind = TensionKind::tabulated;
        else throw ConfigError("tension: kind must be linear, exponential or tabulated");
        if (c.tension.kind == TensionKind::tabulated) {
            c.tension.x = t.at("x").get<std::vector<double>>();
            c.tension.sigma = t.at("sigma").get<std::vector<double>>();
        } else {
            c.tension.sigma_s = positive(t, "sigma_s");
            c.tension.beta = positive(t, "beta");
        }
    }
    {
        const auto& i = j.at("initial");
        require_keys(i, "initial", {"eta_modes", "ctilde", "u0"});
        c.initial.eta_modes = parse_modes(i.at("eta_modes"), "eta_modes");
        const auto& ct = i.at("ctilde");
        require_keys(ct, "ctilde", {"base", "modes"});
        c.initial.ctilde_base = positive(ct, "base");
        if (ct.contains("modes")) c.initial.ctilde_modes = parse_modes(ct.at("modes"), "ctilde");
        const std::string u0 = i.value("u0", "zero");
        if (u0 == "zero") c.initial.u0 = U0Mode::zero;
        else if (u0 == "stokes-compatible") c.initial.u0 = U0Mode::stokes_compatible;
        else throw ConfigError("initial: u0 must be zero or stokes-compatible");
    }
    {
        const auto& s = j.at("stepping");
        require_keys(s, "stepping", {"dt", "t_end", "scheme", "output_stride", "corrector"});
        c.dt = positive(s, "dt");
        c.t_end = positive(s, "t_end");
        const std::string scheme = s.value("scheme", "imex1");
        if (scheme == "imex1") c.scheme = Scheme::imex1;
        else if (scheme == "imex-bdf2") c.scheme = Scheme::imex_bdf2;
        else throw ConfigError("stepping: scheme must be imex1 or imex-bdf2");
        c.output_stride = s.value("output_stride", 1);
        if (c.output_stride < 1) throw ConfigError("stepping: output_stride must be >= 1");
        c.corrector = s.value("corrector", false);
    }
    {
        const auto& o = j.at("output");
        require_keys(o, "output", {"directory", "formats"});
        c.directory = o.at("directory").get<std::string>();
        c.write_csv = c.write_json = false;
        for (const auto& f : o.value("formats", std::vector<std::string>{"csv", "json"})) {
            if (f == "csv") c.write_csv = true;
            else if (f == "json") c.write_json = true;
            else throw ConfigError("output: formats entries must be csv or json");
        }
    }
    c.seed = j.value("seed", 0ULL);
    return c;
}
}  // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config(text);
}

}  // namespace slick
