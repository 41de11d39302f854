#include "ricdyn/app/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>
#include <toml.hpp>

namespace ricdyn::app {
namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorKind::Validation, msg); }

json from_toml(const toml::node& node) {
    if (const auto* t = node.as_table()) {
        json out = json::object();
        for (auto&& [k, v] : *t) out[std::string(k.str())] = from_toml(v);
        return out;
    }
    if (const auto* a = node.as_array()) {
        json out = json::array();
        for (auto&& v : *a) out.push_back(from_toml(v));
        return out;
    }
    if (const auto* v = node.as_floating_point()) return v->get();
    if (const auto* v = node.as_integer()) return v->get();
    if (const auto* v = node.as_boolean()) return v->get();
    if (const auto* v = node.as_string()) return v->get();
    invalid("unsupported TOML value (dates and times are not scenario data)");
}

// Key lookups that reject unknown entries, so typos do not silently fall back to defaults.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) invalid(path_ + " must be a table");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    double number(const std::string& key) {
        const json& v = get(key);
        if (!v.is_number()) invalid(where(key) + " must be a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) invalid(where(key) + " must be finite");
        return d;
    }
    double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

    std::size_t count(const std::string& key, std::size_t fallback) {
        if (!has(key)) return fallback;
        const json& v = get(key);
        if (!v.is_number_integer() || v.get<long long>() <= 0) invalid(where(key) + " must be a positive integer");
        return static_cast<std::size_t>(v.get<long long>());
    }

    std::string text(const std::string& key, const std::string& fallback) {
        if (!has(key)) return fallback;
        const json& v = get(key);
        if (!v.is_string()) invalid(where(key) + " must be a string");
        return v.get<std::string>();
    }

    std::vector<double> numbers(const std::string& key) {
        const json& v = get(key);
        if (!v.is_array()) invalid(where(key) + " must be an array of numbers");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) invalid(where(key) + " must be an array of numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }

    Section sub(const std::string& key) { return {get(key), where(key)}; }
    const json& raw(const std::string& key) { return get(key); }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!used_.count(it.key())) invalid("unknown key " + where(it.key()));
        }
    }

private:
    const json& get(const std::string& key) {
        if (!j_.contains(key)) invalid("missing " + where(key));
        used_.insert(key);
        return j_.at(key);
    }
    std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

FrequencyProfile parse_omega(Section& sys) {
    const json& raw = sys.raw("omega");
    if (raw.is_number()) {
        const double w = raw.get<double>();
        if (!(w >= 0.0) || !std::isfinite(w)) invalid("system.omega must be >= 0");
        return FrequencyProfile::constant(w);
    }
    Section om(raw, "system.omega");
    const std::string kind = om.text("kind", "");
    const auto times = om.numbers("times");
    const auto values = om.numbers("values");
    om.finish();
    if (times.size() != values.size() || times.empty()) {
        invalid("system.omega.times and system.omega.values must be non-empty and of equal length");
    }
    try {
        if (kind == "piecewise") {
            std::vector<FrequencyProfile::Segment> segs;
            for (std::size_t i = 0; i < times.size(); ++i) segs.push_back({times[i], values[i]});
            return FrequencyProfile::piecewise_constant(std::move(segs));
        }
        if (kind == "sampled") return FrequencyProfile::sampled(times, values);
    } catch (const Error& e) {
        invalid(std::string("system.omega: ") + e.what());
    }
    invalid("system.omega.kind must be \"piecewise\" or \"sampled\"");
}

IntegratorConfig parse_integrator(Section& sec) {
    IntegratorConfig cfg;
    const std::string method = sec.text("method", "dopri5");
    if (method == "dopri5") {
        cfg.method = IntegrationMethod::DormandPrince54;
    } else if (method == "rk4") {
        cfg.method = IntegrationMethod::RungeKutta4;
    } else {
        invalid("integrator.method must be \"dopri5\" or \"rk4\"");
    }
    cfg.abs_tol = sec.number("abs_tol", cfg.abs_tol);
    cfg.rel_tol = sec.number("rel_tol", cfg.rel_tol);
    cfg.max_step = sec.number("max_step", cfg.max_step);
    cfg.fixed_step = sec.number("fixed_step", cfg.fixed_step);
    sec.finish();
    try {
        cfg.validate();
    } catch (const Error& e) {
        invalid(std::string("integrator: ") + e.what());
    }
    return cfg;
}

Scenario build(const json& doc, const std::string& fallback_name) {
    Section root(doc, "");
    Scenario sc;
    sc.name = root.text("name", fallback_name);
    sc.description = root.text("description", "");

    Section sys = root.sub("system");
    sc.system.mass = sys.number("mass", 1.0);
    sc.system.hbar = sys.number("hbar", 1.0);
    sc.system.omega = parse_omega(sys);
    sys.finish();
    if (!(sc.system.mass > 0.0) || !(sc.system.hbar > 0.0)) invalid("system.mass and system.hbar must be > 0");

    Section init = root.sub("initial");
    const double x0 = init.number("x", 0.0);
    const double p0 = init.number("p", 0.0);
    sc.centroid = Centroid::from_observables(x0, p0, sc.system.mass);
    const int given = int(init.has("moments")) + int(init.has("ermakov")) + int(init.has("riccati"));
    if (given != 1) invalid("initial must contain exactly one of moments, ermakov, riccati");
    try {
        if (init.has("moments")) {
            Section m = init.sub("moments");
            sc.initial_kind = InitialKind::Moments;
            sc.moments = {m.number("sigma_xx"), m.number("sigma_pp"), m.number("sigma_xp", 0.0)};
            m.finish();
            require_minimum_uncertainty(sc.moments, sc.system.hbar);
            sc.ermakov = ermakov_from_uncertainties(sc.system, sc.moments);
            sc.riccati = riccati_from_ermakov(sc.ermakov);
        } else if (init.has("ermakov")) {
            Section e = init.sub("ermakov");
            sc.initial_kind = InitialKind::Ermakov;
            sc.ermakov = {e.number("alpha"), e.number("alpha_dot", 0.0)};
            e.finish();
            if (!(sc.ermakov.alpha > 0.0)) invalid("initial.ermakov.alpha must be > 0");
            sc.riccati = riccati_from_ermakov(sc.ermakov);
            sc.moments = uncertainties_from_ermakov(sc.system, sc.ermakov);
        } else {
            Section r = init.sub("riccati");
            sc.initial_kind = InitialKind::Riccati;
            sc.riccati = {r.number("c_r", 0.0), r.number("c_i")};
            r.finish();
            if (!(sc.riccati.c_i > 0.0)) invalid("initial.riccati.c_i must be > 0");
            sc.ermakov = ermakov_from_riccati(sc.riccati);
            sc.moments = uncertainties_from_riccati(sc.system, sc.riccati);
        }
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Validation) throw;
        invalid(std::string("initial: ") + e.what());
    }
    init.finish();

    Section time = root.sub("time");
    sc.t_end = time.number("t_end");
    sc.n_steps = time.count("n_steps", 1000);
    time.finish();
    if (!(sc.t_end > 0.0)) invalid("time.t_end must be > 0");

    if (root.has("integrator")) {
        Section integ = root.sub("integrator");
        sc.integrator = parse_integrator(integ);
    }
    if (root.has("wigner")) {
        Section w = root.sub("wigner");
        if (w.has("times")) sc.wigner.times = w.numbers("times");
        sc.wigner.n_sigma = w.number("n_sigma", sc.wigner.n_sigma);
        sc.wigner.n = w.count("n", sc.wigner.n);
        w.finish();
        if (!(sc.wigner.n_sigma > 0.0) || sc.wigner.n < 2) invalid("wigner.n_sigma must be > 0 and wigner.n >= 2");
        for (double t : sc.wigner.times) {
            if (!(t >= 0.0)) invalid("wigner.times must be >= 0");
        }
    }
    if (root.has("check")) {
        Section c = root.sub("check");
        auto& th = sc.check;
        th.sr_drift = c.number("sr_drift", th.sr_drift);
        th.invariant_drift = c.number("invariant_drift", th.invariant_drift);
        th.wronskian_drift = c.number("wronskian_drift", th.wronskian_drift);
        th.route_agreement = c.number("route_agreement", th.route_agreement);
        th.kernel_agreement = c.number("kernel_agreement", th.kernel_agreement);
        th.kernel_tdse = c.number("kernel_tdse", th.kernel_tdse);
        th.wigner_identity = c.number("wigner_identity", th.wigner_identity);
        th.wigner_normalization = c.number("wigner_normalization", th.wigner_normalization);
        th.energy_drift = c.number("energy_drift", th.energy_drift);
        c.finish();
    }
    root.finish();
    return sc;
}

}  // namespace

Scenario parse_scenario_toml(std::string_view text, const std::string& fallback_name) {
    toml::table tbl;
    try {
        tbl = toml::parse(text);
    } catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << "TOML line " << e.source().begin.line << ": " << e.description();
        throw Error(ErrorKind::Parse, msg.str());
    }
    return build(from_toml(tbl), fallback_name);
}

Scenario parse_scenario_json(std::string_view text, const std::string& fallback_name) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Parse, std::string("JSON: ") + e.what());
    }
    return build(doc, fallback_name);
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Parse, "cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string ext = path.extension().string();
    const std::string stem = path.stem().string();
    if (ext == ".toml") return parse_scenario_toml(buf.str(), stem);
    if (ext == ".json") return parse_scenario_json(buf.str(), stem);
    throw Error(ErrorKind::Parse, "scenario must be a .toml or .json file: " + path.string());
}

std::vector<double> parse_time_list(std::string_view text) {
    std::vector<double> out;
    auto parse_number = [&](std::string_view s, double fallback) {
        if (s.empty()) return fallback;
        double v = 0.0;
        const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || end != s.data() + s.size()) {
            throw Error(ErrorKind::Parse, "bad time value '" + std::string(s) + "'");
        }
        return v;
    };
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = std::min(text.find(',', start), text.size());
        std::string tok;
        for (char ch : text.substr(start, comma - start)) {
            if (ch != ' ') tok.push_back(ch);
        }
        if (tok.empty()) throw Error(ErrorKind::Parse, "empty entry in time list");
        const std::size_t pi = tok.find("pi");
        if (pi == std::string::npos) {
            out.push_back(parse_number(tok, 0.0));
        } else {
            std::string_view head(tok.data(), pi);
            std::string_view tail(tok.data() + pi + 2, tok.size() - pi - 2);
            double factor = head == "-" ? -1.0 : parse_number(head, 1.0);
            if (!tail.empty()) {
                if (tail.front() != '/') throw Error(ErrorKind::Parse, "bad time value '" + tok + "'");
                const double d = parse_number(tail.substr(1), 0.0);
                if (d == 0.0) throw Error(ErrorKind::Parse, "bad time value '" + tok + "'");
                factor /= d;
            }
            out.push_back(factor * std::numbers::pi);
        }
        start = comma + 1;
    }
    return out;
}

}  // namespace ricdyn::app
