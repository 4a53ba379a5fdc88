#include "obl/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace obl {

using nlohmann::json;

double deadcore_coefficient(double p, double gamma) {
    const double k = p / (p - gamma);
    // c^{p-gamma} k^{p-1} (k-1)(p-1) = gamma
    const double rhs = gamma / (std::pow(k, p - 1.0) * (k - 1.0) * (p - 1.0));
    return std::pow(rhs, 1.0 / (p - gamma));
}

double FuncSpec::eval(const Vec& x, double p, double gamma) const {
    const double r = x.norm();
    if (kind == "zero") return 0.0;
    if (kind == "constant") return value;
    if (kind == "cone") return A * r;
    if (kind == "power") return -A * std::pow(r, 1.0 + beta);
    if (kind == "tilted") return q * x.x - A * std::pow(r, 1.0 + beta);
    if (kind == "affine") return a0 + ax * x.x + ay * x.y;
    if (kind == "deadcore")
        return scale * deadcore_coefficient(p, gamma) *
               std::pow(std::max(x.x, 0.0), p / (p - gamma));
    throw ConfigError("unknown function kind: " + kind);
}

EnergyDensity DensityConfig::build() const {
    Vec av = dim == 1 ? Vec::d1(a.empty() ? 0.0 : a[0])
                      : Vec::d2(a.size() > 0 ? a[0] : 0.0, a.size() > 1 ? a[1] : 0.0);
    if (kind == "p_power") return EnergyDensity::p_power(p, dim);
    if (kind == "quadratic") return EnergyDensity::quadratic(dim);
    if (kind == "appendix_a") return EnergyDensity::appendix_a(p, eps, av, kappa0, nu);
    if (kind == "tilted") return EnergyDensity::tilted(p, eps, av);
    throw ConfigError("unknown density kind: " + kind);
}

namespace {

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) throw ConfigError(where + ": unknown key \"" + key + "\"");
}

double num(const json& obj, const std::string& key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) throw ConfigError(key + ": expected a number");
    return obj[key].get<double>();
}

FuncSpec parse_func(const json& obj, const std::string& where) {
    require_keys(obj, where, {"kind", "value", "A", "beta", "q", "a0", "ax", "ay", "scale"});
    FuncSpec f;
    if (obj.contains("kind")) f.kind = obj["kind"].get<std::string>();
    f.value = num(obj, "value", f.value);
    f.A = num(obj, "A", f.A);
    f.beta = num(obj, "beta", f.beta);
    f.q = num(obj, "q", f.q);
    f.a0 = num(obj, "a0", f.a0);
    f.ax = num(obj, "ax", f.ax);
    f.ay = num(obj, "ay", f.ay);
    f.scale = num(obj, "scale", f.scale);
    return f;
}

json func_to_json(const FuncSpec& f) {
    json o;
    o["kind"] = f.kind;
    if (f.kind == "constant") o["value"] = f.value;
    if (f.kind == "cone" || f.kind == "power" || f.kind == "tilted") {
        o["A"] = f.A;
        o["beta"] = f.beta;
    }
    if (f.kind == "tilted") o["q"] = f.q;
    if (f.kind == "affine") {
        o["a0"] = f.a0;
        o["ax"] = f.ax;
        o["ay"] = f.ay;
    }
    if (f.kind == "deadcore") o["scale"] = f.scale;
    return o;
}

Domain parse_domain(const json& obj) {
    require_keys(obj, "problem.domain", {"shape", "a", "b", "a2", "b2", "radius"});
    const std::string shape = obj.value("shape", "interval");
    if (shape == "interval") return Domain::interval(num(obj, "a", -1.0), num(obj, "b", 1.0));
    if (shape == "rectangle")
        return Domain::rectangle(num(obj, "a", 0.0), num(obj, "b", 1.0), num(obj, "a2", 0.0),
                                 num(obj, "b2", 1.0));
    if (shape == "disc") return Domain::disc(num(obj, "radius", 1.0));
    throw ConfigError("problem.domain: unknown shape \"" + shape + "\"");
}

json domain_to_json(const Domain& d) {
    json o;
    switch (d.shape) {
        case Domain::Shape::Interval:
            o["shape"] = "interval";
            o["a"] = d.a[0];
            o["b"] = d.b[0];
            break;
        case Domain::Shape::Rectangle:
            o["shape"] = "rectangle";
            o["a"] = d.a[0];
            o["b"] = d.b[0];
            o["a2"] = d.a[1];
            o["b2"] = d.b[1];
            break;
        case Domain::Shape::Disc:
            o["shape"] = "disc";
            o["radius"] = d.radius;
            break;
    }
    return o;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    require_keys(root, "config", {"problem", "solver", "analysis", "density", "sweep", "output"});

    ExperimentConfig cfg;
    if (root.contains("problem")) {
        const json& p = root["problem"];
        require_keys(p, "problem",
                     {"domain", "h", "p", "gamma", "beta", "delta", "obstacle", "boundary"});
        if (p.contains("domain")) cfg.problem.domain = parse_domain(p["domain"]);
        cfg.problem.h = num(p, "h", cfg.problem.h);
        cfg.problem.p = num(p, "p", cfg.problem.p);
        cfg.problem.gamma = num(p, "gamma", cfg.problem.gamma);
        cfg.problem.beta = num(p, "beta", cfg.problem.beta);
        cfg.problem.delta = num(p, "delta", cfg.problem.delta);
        if (p.contains("obstacle")) cfg.problem.obstacle = parse_func(p["obstacle"], "obstacle");
        if (p.contains("boundary")) cfg.problem.boundary = parse_func(p["boundary"], "boundary");
    }
    if (root.contains("solver")) {
        const json& s = root["solver"];
        require_keys(s, "solver",
                     {"eps_schedule", "delta_steps", "tol_contact", "tol_kkt_rel",
                      "stage_tol_rel", "max_iter", "armijo_c", "backtrack"});
        if (s.contains("eps_schedule")) {
            cfg.solver.eps_schedule = s["eps_schedule"].get<std::vector<double>>();
            if (cfg.solver.eps_schedule.empty())
                throw ConfigError("solver.eps_schedule: must be nonempty");
            for (size_t k = 1; k < cfg.solver.eps_schedule.size(); ++k)
                if (cfg.solver.eps_schedule[k] >= cfg.solver.eps_schedule[k - 1])
                    throw ConfigError("solver.eps_schedule: must be strictly decreasing");
        }
        cfg.solver.delta_steps = static_cast<int>(num(s, "delta_steps", cfg.solver.delta_steps));
        cfg.solver.tol_contact = num(s, "tol_contact", cfg.solver.tol_contact);
        cfg.solver.tol_kkt_rel = num(s, "tol_kkt_rel", cfg.solver.tol_kkt_rel);
        cfg.solver.stage_tol_rel = num(s, "stage_tol_rel", cfg.solver.stage_tol_rel);
        cfg.solver.max_iter = static_cast<int>(num(s, "max_iter", cfg.solver.max_iter));
        cfg.solver.armijo_c = num(s, "armijo_c", cfg.solver.armijo_c);
        cfg.solver.backtrack = num(s, "backtrack", cfg.solver.backtrack);
        if (cfg.solver.tol_contact <= 0.0 || cfg.solver.tol_kkt_rel <= 0.0)
            throw ConfigError("solver: tolerances must be positive");
    }
    if (root.contains("analysis")) {
        const json& a = root["analysis"];
        require_keys(a, "analysis",
                     {"rho_max", "levels", "q", "dyadic_k_max", "fit_center", "tolerance"});
        cfg.analysis.rho_max = num(a, "rho_max", cfg.analysis.rho_max);
        cfg.analysis.levels = static_cast<int>(num(a, "levels", cfg.analysis.levels));
        cfg.analysis.q = num(a, "q", cfg.analysis.q);
        cfg.analysis.dyadic_k_max =
            static_cast<int>(num(a, "dyadic_k_max", cfg.analysis.dyadic_k_max));
        if (a.contains("fit_center"))
            cfg.analysis.fit_center = a["fit_center"].get<std::vector<double>>();
        cfg.analysis.tolerance = num(a, "tolerance", cfg.analysis.tolerance);
    }
    if (root.contains("density")) {
        const json& d = root["density"];
        require_keys(d, "density", {"kind", "p", "dim", "eps", "a", "kappa0", "nu"});
        DensityConfig dc;
        if (d.contains("kind")) dc.kind = d["kind"].get<std::string>();
        dc.p = num(d, "p", dc.p);
        dc.dim = static_cast<int>(num(d, "dim", dc.dim));
        dc.eps = num(d, "eps", dc.eps);
        if (d.contains("a")) dc.a = d["a"].get<std::vector<double>>();
        dc.kappa0 = num(d, "kappa0", dc.kappa0);
        dc.nu = num(d, "nu", dc.nu);
        cfg.density = dc;
    }
    if (root.contains("sweep")) {
        const json& s = root["sweep"];
        require_keys(s, "sweep", {"cells"});
        if (s.contains("cells"))
            for (const json& c : s["cells"]) {
                require_keys(c, "sweep.cells[]", {"p", "gamma", "beta", "h"});
                SweepCell cell;
                cell.p = num(c, "p", cell.p);
                cell.gamma = num(c, "gamma", cell.gamma);
                cell.beta = num(c, "beta", cell.beta);
                cell.h = num(c, "h", cell.h);
                cfg.sweep.push_back(cell);
            }
    }
    if (root.contains("output")) {
        require_keys(root["output"], "output", {"dir"});
        if (root["output"].contains("dir"))
            cfg.output_dir = root["output"]["dir"].get<std::string>();
    }

    // fail fast on module preconditions
    if (!(cfg.problem.gamma > 0.0 && cfg.problem.gamma < 1.0))
        throw ConfigError("problem.gamma: must lie strictly in (0,1)");
    if (cfg.problem.p < 2.0) throw ConfigError("problem.p: must be >= 2");
    if (!(cfg.problem.beta > 0.0 && cfg.problem.beta <= 1.0))
        throw ConfigError("problem.beta: must lie in (0,1]");
    if (cfg.problem.delta < 0.0 || cfg.problem.delta > 1.0)
        throw ConfigError("problem.delta: must lie in [0,1]");
    if (cfg.problem.h <= 0.0) throw ConfigError("problem.h: must be positive");
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string ExperimentConfig::serialize() const {
    json root;
    root["problem"]["domain"] = domain_to_json(problem.domain);
    root["problem"]["h"] = problem.h;
    root["problem"]["p"] = problem.p;
    root["problem"]["gamma"] = problem.gamma;
    root["problem"]["beta"] = problem.beta;
    root["problem"]["delta"] = problem.delta;
    root["problem"]["obstacle"] = func_to_json(problem.obstacle);
    root["problem"]["boundary"] = func_to_json(problem.boundary);
    root["solver"]["eps_schedule"] = solver.eps_schedule;
    root["solver"]["delta_steps"] = solver.delta_steps;
    root["solver"]["tol_contact"] = solver.tol_contact;
    root["solver"]["tol_kkt_rel"] = solver.tol_kkt_rel;
    root["solver"]["stage_tol_rel"] = solver.stage_tol_rel;
    root["solver"]["max_iter"] = solver.max_iter;
    root["solver"]["armijo_c"] = solver.armijo_c;
    root["solver"]["backtrack"] = solver.backtrack;
    root["analysis"]["rho_max"] = analysis.rho_max;
    root["analysis"]["levels"] = analysis.levels;
    root["analysis"]["q"] = analysis.q;
    root["analysis"]["dyadic_k_max"] = analysis.dyadic_k_max;
    root["analysis"]["fit_center"] = analysis.fit_center;
    root["analysis"]["tolerance"] = analysis.tolerance;
    if (density) {
        root["density"]["kind"] = density->kind;
        root["density"]["p"] = density->p;
        root["density"]["dim"] = density->dim;
        root["density"]["eps"] = density->eps;
        root["density"]["a"] = density->a;
        root["density"]["kappa0"] = density->kappa0;
        root["density"]["nu"] = density->nu;
    }
    if (!sweep.empty()) {
        json cells = json::array();
        for (const SweepCell& c : sweep)
            cells.push_back({{"p", c.p}, {"gamma", c.gamma}, {"beta", c.beta}, {"h", c.h}});
        root["sweep"]["cells"] = cells;
    }
    root["output"]["dir"] = output_dir;
    return root.dump(2);
}

ProblemSpec ExperimentConfig::build_problem() const {
    ProblemSpec spec;
    spec.grid = make_grid(problem.domain, problem.h);
    spec.p = problem.p;
    spec.gamma = problem.gamma;
    spec.beta = problem.beta;
    spec.delta = problem.delta;
    spec.density = EnergyDensity::p_power(problem.p, problem.domain.dim);
    const double p = problem.p, gamma = problem.gamma;
    spec.phi = GridField::from_function(
        spec.grid, [&](const Vec& x) { return problem.obstacle.eval(x, p, gamma); });
    spec.g = GridField::from_function(
        spec.grid, [&](const Vec& x) { return problem.boundary.eval(x, p, gamma); });
    return spec;
}

std::vector<double> ExperimentConfig::fit_radii(double h) const {
    std::vector<double> out;
    for (int k = 0; k < analysis.levels; ++k) {
        const double rho = analysis.rho_max * std::pow(2.0, -k);
        const double snapped = std::round(rho / h) * h;  // align with node rings
        if (snapped < 4.0 * h) break;
        out.push_back(snapped);
    }
    return out;
}

Vec ExperimentConfig::fit_center_vec() const {
    if (problem.domain.dim == 1) return Vec::d1(analysis.fit_center.empty() ? 0.0 : analysis.fit_center[0]);
    return Vec::d2(analysis.fit_center.size() > 0 ? analysis.fit_center[0] : 0.0,
                   analysis.fit_center.size() > 1 ? analysis.fit_center[1] : 0.0);
}

}  // namespace obl
