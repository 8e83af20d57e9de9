#include "decoh/harness/config.hpp"

#include "decoh/errors.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace decoh::harness {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

// Object view that remembers which keys were consumed; finish() rejects the rest.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    bool has(const std::string& k) const { return j_.contains(k); }
    std::string path(const std::string& k) const { return join(path_, k); }

    const json& get(const std::string& k) {
        used_.insert(k);
        if (!j_.contains(k)) throw ConfigError(path(k), "missing required key");
        return j_.at(k);
    }

    double number(const std::string& k, double def) { return has(k) ? number(k) : def; }
    double number(const std::string& k) {
        const json& v = get(k);
        if (!v.is_number()) throw ConfigError(path(k), "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw ConfigError(path(k), "must be finite");
        return d;
    }
    double positive(const std::string& k, double def) {
        const double d = number(k, def);
        if (!(d > 0.0)) throw ConfigError(path(k), "must be positive");
        return d;
    }
    double nonnegative(const std::string& k, double def) {
        const double d = number(k, def);
        if (d < 0.0) throw ConfigError(path(k), "must be nonnegative");
        return d;
    }
    std::size_t count(const std::string& k, std::size_t def) {
        if (!has(k)) return def;
        const json& v = get(k);
        if (!v.is_number_integer() || v.get<long long>() <= 0) throw ConfigError(path(k), "expected a positive integer");
        return v.get<std::size_t>();
    }
    std::string string(const std::string& k, const std::string& def) {
        if (!has(k)) return def;
        const json& v = get(k);
        if (!v.is_string()) throw ConfigError(path(k), "expected a string");
        return v.get<std::string>();
    }
    bool boolean(const std::string& k, bool def) {
        if (!has(k)) return def;
        const json& v = get(k);
        if (!v.is_boolean()) throw ConfigError(path(k), "expected true or false");
        return v.get<bool>();
    }
    std::vector<double> numbers(const std::string& k, std::vector<double> def) {
        if (!has(k)) return def;
        const json& v = get(k);
        if (!v.is_array() || v.empty()) throw ConfigError(path(k), "expected a nonempty array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) throw ConfigError(path(k) + "[" + std::to_string(i) + "]", "expected a number");
            out.push_back(v[i].get<double>());
        }
        return out;
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!used_.count(it.key())) throw ConfigError(path(it.key()), "unknown key");
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

Envelope parse_envelope(const json& j, const std::string& path) {
    Reader r(j, path);
    const std::string kind = r.string("kind", "gaussian");
    Envelope e;
    if (kind == "gaussian") {
        e = Envelope::gaussian(r.positive("half_width", 8.0));
    } else if (kind == "bump") {
        e = Envelope::bump();
    } else if (kind == "tabulated") {
        const double L = r.positive("half_width", 1.0);
        auto s = r.numbers("samples", {});
        if (s.size() < 5) throw ConfigError(r.path("samples"), "tabulated envelope needs at least 5 samples");
        e = Envelope::tabulated(std::move(s), L);
    } else {
        throw ConfigError(r.path("kind"), "unknown envelope kind '" + kind + "' (gaussian, bump, tabulated)");
    }
    r.finish();
    return e;
}

Scenario parse_scenario(const json& physics, const json& state, const std::string& ppath, const std::string& spath) {
    Scenario sc;
    {
        Reader r(physics, ppath);
        const double M = r.positive("M", 1.0);
        const double hbar = r.positive("hbar", 1.0);
        if (r.has("epsilon") == r.has("m")) throw ConfigError(ppath, "give exactly one of 'epsilon' and 'm'");
        const double eps = r.has("epsilon") ? r.positive("epsilon", 0.0) : r.positive("m", 0.0) / M;
        if (r.has("alpha") == r.has("alpha0")) throw ConfigError(ppath, "give exactly one of 'alpha' and 'alpha0'");
        sc.alpha = r.has("alpha") ? r.nonnegative("alpha", 0.0) : r.nonnegative("alpha0", 0.0) * eps * M / (hbar * hbar);
        r.finish();
        sc.params = PhysicalParams::from_ratio(M, eps, hbar, sc.alpha);
    }
    {
        Reader r(state, spath);
        InitialStateSpec& s = sc.spec;
        if (r.has("f")) s.f = parse_envelope(r.get("f"), r.path("f"));
        if (r.has("g")) s.g = parse_envelope(r.get("g"), r.path("g"));
        s.sigma = r.positive("sigma", s.sigma);
        s.delta = r.positive("delta", s.delta);
        s.R0 = r.nonnegative("R0", s.R0);
        s.P0 = r.nonnegative("P0", s.P0);
        s.r0 = r.number("r0", s.r0);
        s.q0 = r.nonnegative("q0", s.q0);
        r.finish();
    }
    try {
        sc.params.validate();
        sc.spec.validate(false);
    } catch (const ConfigError&) {
        throw;
    } catch (const ValidationError& e) {
        throw ConfigError(spath, e.what());
    }
    return sc;
}

// Scenario given as {"physics": {...}, "state": {...}} overrides merged onto the base blocks.
Scenario parse_override(const json& base_physics, const json& base_state, const json& j,
                        const std::string& path) {
    Reader r(j, path);
    json physics = base_physics, state = base_state;
    if (r.has("physics")) {
        const json& p = r.get("physics");
        if (!p.is_object()) throw ConfigError(r.path("physics"), "expected an object");
        // one of a mutually exclusive pair replaces the other
        if (p.contains("epsilon")) physics.erase("m");
        if (p.contains("m")) physics.erase("epsilon");
        if (p.contains("alpha")) physics.erase("alpha0");
        if (p.contains("alpha0")) physics.erase("alpha");
        physics.merge_patch(p);
    }
    if (r.has("state")) {
        const json& s = r.get("state");
        if (!s.is_object()) throw ConfigError(r.path("state"), "expected an object");
        state.merge_patch(s);
    }
    r.finish();
    return parse_scenario(physics, state, r.path("physics"), r.path("state"));
}

Tolerances parse_tolerances(const json& j, const std::string& path) {
    Reader r(j, path);
    Tolerances t;
    auto p = [&](const char* k, double& v) { v = r.positive(k, v); };
    p("norm_drift", t.norm_drift);
    p("wrap", t.wrap);
    p("kernel_relative", t.kernel_relative);
    p("patch_relative", t.patch_relative);
    p("slope", t.slope);
    p("psi1_headroom", t.psi1_headroom);
    p("lambda_high_k0", t.lambda_high_k0);
    p("lambda_low_k0", t.lambda_low_k0);
    p("lambda_paths", t.lambda_paths);
    p("visibility", t.visibility);
    p("phase", t.phase);
    p("visibility_free", t.visibility_free);
    p("hermiticity", t.hermiticity);
    p("trace", t.trace);
    p("psd", t.psd);
    p("purity", t.purity);
    p("offdiag_ratio", t.offdiag_ratio);
    p("momentum", t.momentum);
    p("evolve_seconds", t.evolve_seconds);
    p("oracle_seconds", t.oracle_seconds);
    p("sweep_seconds", t.sweep_seconds);
    r.finish();
    return t;
}

GridConfig parse_grids(const json& j, const std::string& path) {
    GridConfig g;
    if (j.is_string()) {
        if (j.get<std::string>() != "auto") throw ConfigError(path, "expected \"auto\" or an object");
        return g;
    }
    Reader r(j, path);
    const std::string mode = r.string("mode", "auto");
    if (mode == "auto") {
        g.plan.oversample = r.positive("oversample", g.plan.oversample);
        g.plan.pad = r.positive("pad", g.plan.pad);
        g.plan.tail = r.positive("tail", g.plan.tail);
        if (g.plan.oversample < 1.0) throw ConfigError(r.path("oversample"), "must be at least 1");
    } else if (mode == "fixed") {
        g.automatic = false;
        auto axis = [&](const char* k, std::size_t& n, double& half) {
            Reader a(r.get(k), r.path(k));
            n = a.count("n", 0);
            if (n == 0) throw ConfigError(a.path("n"), "missing required key");
            if (n % 2) throw ConfigError(a.path("n"), "must be even so that 0 is a node");
            half = a.positive("half_width", 0.0);
            if (half == 0.0) throw ConfigError(a.path("half_width"), "missing required key");
            a.finish();
        };
        axis("r", g.nr, g.half_r);
        axis("R", g.nR, g.half_R);
    } else {
        throw ConfigError(r.path("mode"), "expected 'auto' or 'fixed'");
    }
    r.finish();
    return g;
}

TimeConfig parse_times(const json& j, const std::string& path) {
    TimeConfig t;
    Reader r(j, path);
    if (r.has("values") == r.has("crossing_fractions"))
        throw ConfigError(path, "give exactly one of 'values' and 'crossing_fractions'");
    auto& v = r.has("values") ? (t.values = r.numbers("values", {})) : (t.crossing_fractions = r.numbers("crossing_fractions", {}));
    for (double x : v)
        if (!(x > 0.0)) throw ConfigError(path, "times must be positive");
    r.finish();
    return t;
}

}  // namespace

PhysicalParams Scenario::with_epsilon(double eps) const {
    return PhysicalParams::from_ratio(params.M, eps, params.hbar, alpha);
}

double Scenario::crossing_time() const {
    if (!(spec.R0 > 0.0 && spec.P0 > 0.0)) throw ValidationError("crossing time R0 M / P0 needs R0 > 0 and P0 > 0");
    return spec.R0 * params.M / spec.P0;
}

GridPair GridConfig::resolve(const Scenario& sc, const PhysicalParams& params, double t) const {
    if (automatic) return plan_grids(sc.spec, params, t, plan);
    return {Grid1D::symmetric(nr, half_r), Grid1D::symmetric(nR, half_R)};
}

std::vector<double> TimeConfig::resolve(const Scenario& sc) const {
    if (!values.empty()) return values;
    const double tau = sc.crossing_time();
    std::vector<double> out;
    for (double f : crossing_fractions) out.push_back(f * tau);
    return out;
}

EvolveOptions SimulationConfig::evolve_options() const {
    EvolveOptions o;
    o.norm_tol = tol.norm_drift;
    o.wrap_tol = tol.wrap;
    o.method = kernel_method;
    return o;
}

SimulationConfig parse_config(const json& doc, const std::string& source) {
    SimulationConfig c;
    c.source = source;
    c.raw = doc;
    Reader r(doc, "");
    const json& physics = r.get("physics");
    const json& state = r.get("state");
    if (!physics.is_object()) throw ConfigError("physics", "expected an object");
    if (!state.is_object()) throw ConfigError("state", "expected an object");
    c.base = parse_scenario(physics, state, "physics", "state");
    c.grids = parse_grids(r.get("grids"), "grids");

    if (r.has("times")) {
        c.times = parse_times(r.get("times"), "times");
    } else {
        c.times.crossing_fractions = {0.5, 1.0};
    }
    if (r.has("methods")) {
        Reader m(r.get("methods"), "methods");
        const std::string k = m.string("delta_kernel", "faddeeva");
        if (k == "faddeeva") c.kernel_method = DeltaPropagatorSpec::Method::faddeeva;
        else if (k == "laguerre") c.kernel_method = DeltaPropagatorSpec::Method::laguerre;
        else throw ConfigError(m.path("delta_kernel"), "expected 'faddeeva' or 'laguerre'");
        const std::string l = m.string("lambda", lambda_method_name(c.lambda_method));
        try {
            c.lambda_method = parse_lambda_method(l);
        } catch (const ValidationError& e) {
            throw ConfigError(m.path("lambda"), e.what());
        }
        m.finish();
    }
    if (r.has("tolerances")) c.tol = parse_tolerances(r.get("tolerances"), "tolerances");
    if (r.has("sweep")) {
        Reader s(r.get("sweep"), "sweep");
        c.sweep.epsilons = s.numbers("epsilons", c.sweep.epsilons);
        for (double e : c.sweep.epsilons)
            if (!(e > 0.0)) throw ConfigError(s.path("epsilons"), "mass ratios must be positive");
        c.sweep.stages = s.boolean("stages", c.sweep.stages);
        s.finish();
    }
    if (r.has("lambda_map")) {
        Reader s(r.get("lambda_map"), "lambda_map");
        c.lambda_map.alpha_delta = s.numbers("alpha_delta", c.lambda_map.alpha_delta);
        c.lambda_map.k0_over_alpha = s.numbers("k0_over_alpha", c.lambda_map.k0_over_alpha);
        for (double v : c.lambda_map.alpha_delta)
            if (v < 0.0) throw ConfigError(s.path("alpha_delta"), "must be nonnegative");
        for (double v : c.lambda_map.k0_over_alpha)
            if (v < 0.0) throw ConfigError(s.path("k0_over_alpha"), "must be nonnegative");
        s.finish();
    }

    c.fringes.scenario = c.base;
    if (r.has("fringes")) {
        json j = r.get("fringes");
        if (!j.is_object()) throw ConfigError("fringes", "expected an object");
        Reader f(j, "fringes");
        c.fringes.min_points_per_period = f.positive("min_points_per_period", c.fringes.min_points_per_period);
        c.fringes.asymptotic = f.boolean("asymptotic", c.fringes.asymptotic);
        if (f.has("grid")) {
            Reader g(f.get("grid"), "fringes.grid");
            const std::size_t n = g.count("n", 0);
            if (n == 0) throw ConfigError(g.path("n"), "missing required key");
            const double half = g.positive("half_width", 0.0);
            if (half == 0.0) throw ConfigError(g.path("half_width"), "missing required key");
            g.finish();
            c.fringes.grid = Grid1D::symmetric(n, half);
        }
        json scen = json::object();
        if (f.has("physics")) scen["physics"] = f.get("physics");
        if (f.has("state")) scen["state"] = f.get("state");
        f.finish();
        c.fringes.scenario = parse_override(physics, state, scen, "fringes");
    }

    c.validation.decoherence = c.fringes.scenario;
    if (r.has("validation")) {
        Reader v(r.get("validation"), "validation");
        auto& V = c.validation;
        V.kernel_samples = v.count("kernel_samples", V.kernel_samples);
        V.patch_size = v.count("patch_size", V.patch_size);
        V.patch_stride = v.count("patch_stride", V.patch_stride);
        V.low_k0_alpha_delta = v.positive("low_k0_alpha_delta", V.low_k0_alpha_delta);
        V.low_k0_ratio = v.positive("low_k0_ratio", V.low_k0_ratio);
        V.high_k0_ratio = v.positive("high_k0_ratio", V.high_k0_ratio);
        V.overlap_samples = v.count("overlap_samples", V.overlap_samples);
        if (v.has("decoherence")) V.decoherence = parse_override(physics, state, v.get("decoherence"), "validation.decoherence");
        const json momentum = v.has("momentum") ? v.get("momentum") : json::object();
        v.finish();
        c.validation.momentum = parse_override(physics, state, momentum, "validation.momentum");
    } else {
        c.validation.momentum = c.base;
    }

    c.output_dir = r.string("output_dir", c.output_dir);
    if (r.has("seed")) {
        const json& s = r.get("seed");
        if (!s.is_number_unsigned()) throw ConfigError("seed", "expected a nonnegative integer");
        c.seed = s.get<std::uint64_t>();
    }
    r.finish();
    return c;
}

SimulationConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("<root>", std::string("not valid JSON: ") + e.what());
    }
    return parse_config(doc, path);
}

}  // namespace decoh::harness
