#include "mlnheat/config.hpp"

#include <cmath>

#include <json.hpp>

namespace mlnheat {
namespace {

using nlohmann::json;

// Field accessors that record type problems instead of throwing, so a bad
// file yields one complete list of issues.
struct Reader {
    std::vector<ValidationIssue>& issues;

    bool want_object(const json& j, const std::string& path) {
        if (j.is_object()) return true;
        issues.push_back({path, "expected an object"});
        return false;
    }

    template <typename T>
    T get(const json& obj, const char* key, const std::string& path, T fallback) {
        if (!obj.is_object() || !obj.contains(key)) return fallback;
        try {
            return obj.at(key).get<T>();
        } catch (const json::exception&) {
            issues.push_back({path + "." + key, "has the wrong type"});
            return fallback;
        }
    }
};

DistributionSpec parse_distribution(Reader& r, const json& j, const std::string& path) {
    DistributionSpec spec;
    if (j.is_null()) return spec;
    if (!r.want_object(j, path)) return spec;
    spec.nonnegative = r.get<bool>(j, "nonnegative", path, false);
    if (!j.contains("terms")) return spec;
    const json& terms = j.at("terms");
    if (!terms.is_array()) {
        r.issues.push_back({path + ".terms", "expected an array"});
        return spec;
    }
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string tp = path + ".terms[" + std::to_string(i) + "]";
        const json& t = terms[i];
        if (!r.want_object(t, tp)) continue;
        const std::string kind = r.get<std::string>(t, "kind", tp, "");
        DistributionTerm term;
        if (kind == "smooth") {
            const std::string expr = r.get<std::string>(t, "expr", tp, "");
            try {
                term = DistributionTerm::smooth_term(SmoothExpr::parse(expr));
            } catch (const ParseError& e) {
                r.issues.push_back({tp + ".expr", e.what()});
                continue;
            }
        } else if (kind == "dirac" || kind == "dirac_derivative") {
            term.kind = kind == "dirac" ? TermKind::dirac : TermKind::dirac_derivative;
            term.weight = r.get<double>(t, "weight", tp, 1.0);
            term.order = r.get<int>(t, "order", tp, 1);
            if (t.contains("location") && t.at("location").is_array()) {
                const json& loc = t.at("location");
                for (std::size_t a = 0; a < loc.size() && a < 2; ++a) {
                    try {
                        term.location[a] = loc[a].get<double>();
                    } catch (const json::exception&) {
                        r.issues.push_back({tp + ".location", "entries must be numbers"});
                    }
                }
            } else {
                r.issues.push_back({tp + ".location", "required (array of coordinates)"});
            }
        } else {
            r.issues.push_back({tp + ".kind", "must be smooth|dirac|dirac_derivative"});
            continue;
        }
        spec.terms.push_back(std::move(term));
    }
    return spec;
}

CoefficientSpec parse_coefficient(Reader& r, const json& j, const std::string& path) {
    CoefficientSpec c;
    if (j.is_null()) return c;
    if (!r.want_object(j, path)) return c;
    c.floor = r.get<double>(j, "floor", path, 1.0);
    if (j.contains("singular")) c.singular = parse_distribution(r, j.at("singular"), path + ".singular");
    if (!c.singular.empty() && !c.singular.nonnegative)
        r.issues.push_back({path + ".singular.nonnegative",
                            "coefficient singular parts must be declared nonnegative"});
    return c;
}

json emit_distribution(const DistributionSpec& d, int dim) {
    json out = json::object();
    out["nonnegative"] = d.nonnegative;
    json terms = json::array();
    for (const auto& t : d.terms) {
        json jt = json::object();
        switch (t.kind) {
            case TermKind::smooth:
                jt["kind"] = "smooth";
                jt["expr"] = t.expr->text();
                break;
            case TermKind::dirac:
            case TermKind::dirac_derivative:
                jt["kind"] = t.kind == TermKind::dirac ? "dirac" : "dirac_derivative";
                if (dim == 1)
                    jt["location"] = json::array({t.location[0]});
                else
                    jt["location"] = json::array({t.location[0], t.location[1]});
                jt["weight"] = t.weight;
                if (t.kind == TermKind::dirac_derivative) jt["order"] = t.order;
                break;
        }
        terms.push_back(std::move(jt));
    }
    out["terms"] = std::move(terms);
    return out;
}

json emit_coefficient(const CoefficientSpec& c, int dim) {
    json out = json::object();
    out["floor"] = c.floor;
    out["singular"] = emit_distribution(c.singular, dim);
    return out;
}

std::string profile_name(MollifierProfile p) {
    switch (p) {
        case MollifierProfile::bump: return "bump";
        case MollifierProfile::hat: return "hat";
        case MollifierProfile::truncated_gaussian: return "truncated_gaussian";
    }
    return "bump";
}

} // namespace

Command command_from_name(const std::string& name) {
    if (name == "solve") return Command::solve;
    if (name == "net") return Command::net;
    if (name == "uniqueness") return Command::uniqueness;
    if (name == "consistency") return Command::consistency;
    if (name == "check") return Command::check;
    throw ValidationError("command", "must be solve|net|uniqueness|consistency|check");
}

std::string command_name(Command c) {
    switch (c) {
        case Command::solve: return "solve";
        case Command::net: return "net";
        case Command::uniqueness: return "uniqueness";
        case Command::consistency: return "consistency";
        case Command::check: return "check";
    }
    return "check";
}

NetConfig ExperimentConfig::net_config() const {
    NetConfig net;
    net.epsilons = epsilons;
    net.mollifier = mollifier;
    net.coeff_a = coeff_a;
    net.coeff_b = coeff_b;
    net.coeff_c = coeff_c;
    net.u0_spec = u0_spec;
    net.s = s;
    net.grid = grid;
    net.run = run;
    net.threads = threads;
    return net;
}

ParseOutcome parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    }

    ParseOutcome out;
    Reader r{out.issues};
    if (!r.want_object(j, "config")) {
        return out;
    }

    ExperimentConfig cfg;

    const json grid = j.value("grid", json::object());
    const int dim = r.get<int>(grid, "dimension", "grid", 1);
    const int n = r.get<int>(grid, "points_per_axis", "grid", 64);
    const double box = r.get<double>(grid, "box_length", "grid", 6.283185307179586);
    try {
        cfg.grid = GridSpec(dim, n, box);
    } catch (const ValidationError& e) {
        for (const auto& i : e.issues) out.issues.push_back(i);
    }

    cfg.s = r.get<double>(j, "s", "config", 0.5);
    if (!(cfg.s > 0.0 && cfg.s < 1.0)) out.issues.push_back({"s", "must lie in (0, 1)"});

    const json coeffs = j.value("coefficients", json::object());
    cfg.coeff_a = parse_coefficient(r, coeffs.value("a", json()), "coefficients.a");
    cfg.coeff_b = parse_coefficient(r, coeffs.value("b", json()), "coefficients.b");
    cfg.coeff_c = parse_coefficient(r, coeffs.value("c", json()), "coefficients.c");
    const std::pair<const char*, const CoefficientSpec*> named_coeffs[] = {
        {"a", &cfg.coeff_a}, {"b", &cfg.coeff_b}, {"c", &cfg.coeff_c}};
    for (const auto& [name, c] : named_coeffs) {
        if (!(c->floor > 0.0))
            out.issues.push_back({std::string("coefficients.") + name + ".floor",
                                  "must be strictly positive"});
    }

    cfg.u0_spec = parse_distribution(r, j.value("initial", json()), "initial");

    const json moll = j.value("mollifier", json::object());
    const std::string prof = r.get<std::string>(moll, "profile", "mollifier", "bump");
    if (prof == "bump") cfg.mollifier.profile = MollifierProfile::bump;
    else if (prof == "hat") cfg.mollifier.profile = MollifierProfile::hat;
    else if (prof == "truncated_gaussian")
        cfg.mollifier.profile = MollifierProfile::truncated_gaussian;
    else out.issues.push_back({"mollifier.profile", "must be bump|hat|truncated_gaussian"});
    cfg.mollifier.scale_power = r.get<double>(moll, "scale_power", "mollifier", 1.0);
    if (!(cfg.mollifier.scale_power > 0.0))
        out.issues.push_back({"mollifier.scale_power", "must be positive"});

    const json run = j.value("run", json::object());
    cfg.run.final_time = r.get<double>(run, "final_time", "run", 1.0);
    cfg.run.dt = r.get<double>(run, "dt", "run", 1e-2);
    const std::string scheme = r.get<std::string>(run, "scheme", "run", "backward_euler");
    if (scheme == "backward_euler") cfg.run.scheme = Scheme::backward_euler;
    else if (scheme == "crank_nicolson") cfg.run.scheme = Scheme::crank_nicolson;
    else out.issues.push_back({"run.scheme", "must be backward_euler|crank_nicolson"});
    cfg.run.cg_rel_tol = r.get<double>(run, "cg_rel_tol", "run", 1e-10);
    cfg.run.cg_max_iter = r.get<int>(run, "cg_max_iter", "run", 500);
    cfg.run.snapshot_stride = r.get<int>(run, "snapshot_stride", "run", 1);
    cfg.run.validate("run", out.issues);

    if (j.contains("epsilons")) {
        const json& eps = j.at("epsilons");
        if (!eps.is_array()) {
            out.issues.push_back({"epsilons", "expected an array"});
        } else {
            for (const auto& e : eps) {
                try {
                    cfg.epsilons.push_back(e.get<double>());
                } catch (const json::exception&) {
                    out.issues.push_back({"epsilons", "entries must be numbers"});
                    break;
                }
            }
        }
    } else if (out.issues.empty()) {
        // Default net: the geometric grid 2^-3 .. 2^-8, clamped to the
        // scales this grid can resolve.
        for (int k = 3; k <= 8; ++k) {
            const double e = std::pow(2.0, -k);
            try {
                check_mollifier_resolution(cfg.mollifier, e, cfg.grid);
                cfg.epsilons.push_back(e);
            } catch (const Error&) {
                ++cfg.clamped_default_epsilons;
            }
        }
    }
    if (j.contains("epsilon")) cfg.epsilon = r.get<double>(j, "epsilon", "config", 0.25);

    const json uniq = j.value("uniqueness", json::object());
    const std::string pert = r.get<std::string>(uniq, "perturbation", "uniqueness", "exp_small");
    try {
        cfg.perturbation = perturbation_from_name(pert);
    } catch (const ValidationError& e) {
        for (const auto& i : e.issues) out.issues.push_back(i);
    }

    cfg.output_dir = r.get<std::string>(j, "output_dir", "config", ".");
    if (cfg.output_dir.empty()) out.issues.push_back({"output_dir", "must not be empty"});
    cfg.seed = r.get<std::uint64_t>(j, "seed", "config", 0);
    cfg.threads = r.get<int>(j, "threads", "config", 1);
    if (cfg.threads < 1) out.issues.push_back({"threads", "must be at least 1"});

    // Cross-field checks the downstream modules would reject at run time.
    const bool grid_ok =
        out.issues.empty() || (cfg.grid.dim == dim && cfg.grid.n == n && cfg.grid.box == box);
    if (grid_ok) {
        validate_distribution(cfg.coeff_a.singular, cfg.grid, "coefficients.a.singular",
                              out.issues);
        validate_distribution(cfg.coeff_b.singular, cfg.grid, "coefficients.b.singular",
                              out.issues);
        validate_distribution(cfg.coeff_c.singular, cfg.grid, "coefficients.c.singular",
                              out.issues);
        validate_distribution(cfg.u0_spec, cfg.grid, "initial", out.issues);
        for (std::size_t i = 0; i + 1 < cfg.epsilons.size(); ++i)
            if (!(cfg.epsilons[i] > cfg.epsilons[i + 1])) {
                out.issues.push_back({"epsilons", "must be strictly decreasing"});
                break;
            }
        if (cfg.mollifier.scale_power > 0.0) {
            std::vector<double> check_eps = cfg.epsilons;
            if (cfg.epsilon.has_value()) check_eps.push_back(*cfg.epsilon);
            for (double e : check_eps) {
                try {
                    check_mollifier_resolution(cfg.mollifier, e, cfg.grid);
                } catch (const Error& err) {
                    out.issues.push_back({"epsilons", err.what()});
                    break;
                }
            }
        }
    }

    if (out.issues.empty()) out.config = std::move(cfg);
    return out;
}

std::string emit_config(const ExperimentConfig& cfg) {
    json j;
    j["grid"] = {{"dimension", cfg.grid.dim},
                 {"points_per_axis", cfg.grid.n},
                 {"box_length", cfg.grid.box}};
    j["s"] = cfg.s;
    j["coefficients"] = {{"a", emit_coefficient(cfg.coeff_a, cfg.grid.dim)},
                         {"b", emit_coefficient(cfg.coeff_b, cfg.grid.dim)},
                         {"c", emit_coefficient(cfg.coeff_c, cfg.grid.dim)}};
    j["initial"] = emit_distribution(cfg.u0_spec, cfg.grid.dim);
    j["mollifier"] = {{"profile", profile_name(cfg.mollifier.profile)},
                      {"scale_power", cfg.mollifier.scale_power}};
    j["run"] = {{"final_time", cfg.run.final_time},
                {"dt", cfg.run.dt},
                {"scheme", scheme_name(cfg.run.scheme)},
                {"cg_rel_tol", cfg.run.cg_rel_tol},
                {"cg_max_iter", cfg.run.cg_max_iter},
                {"snapshot_stride", cfg.run.snapshot_stride}};
    j["epsilons"] = cfg.epsilons;
    if (cfg.epsilon.has_value()) j["epsilon"] = *cfg.epsilon;
    j["uniqueness"] = {{"perturbation", perturbation_name(cfg.perturbation)}};
    j["output_dir"] = cfg.output_dir;
    j["seed"] = cfg.seed;
    j["threads"] = cfg.threads;
    return j.dump(2) + "\n";
}

std::string config_hash(const ExperimentConfig& cfg) {
    // Thread count and output directory do not change the numbers a run
    // produces, so they stay out of the identity.
    ExperimentConfig canon = cfg;
    canon.threads = 1;
    canon.output_dir = ".";
    const std::string text = command_name(cfg.command) + "\n" + emit_config(canon);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = hex[h & 0xF];
        h >>= 4;
    }
    return out;
}

} // namespace mlnheat
