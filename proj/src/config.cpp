#include "fptf/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fptf {

using nlohmann::json;

namespace {

Complex complex_from(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError(where + ": expected [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

template <typename T>
T get_or(const json& j, const std::string& key, T def) {
    if (!j.contains(key)) return def;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("field '" + key + "': wrong type");
    }
}

}  // namespace

LayeredStructure Config::structure() const {
    LayeredStructure s;
    s.map = map;
    s.radii = layer_radii;
    s.sigmas.push_back(sigma0);
    for (double v : layer_sigmas) s.sigmas.push_back(v);
    s.validate();
    return s;
}

Loading Config::loading() const {
    if (loading_type == "uniform-x2") return loading_uniform_x2(map);
    if (loading_type == "hyperbolic-x1x2") return loading_hyperbolic_x1x2(map);
    if (loading_type == "faber") {
        Loading l;
        l.alpha = loading_alpha;
        l.beta = loading_beta;
        l.validate();
        return l;
    }
    throw ConfigError("loading.type: unknown value '" + loading_type + "'");
}

DesignProblem Config::design_problem() const {
    DesignProblem p;
    p.base = structure();
    p.target_order = design.target_order;
    if (design.mode == "vanish")
        p.mode = DesignMode::Vanish;
    else if (design.mode == "minimize")
        p.mode = DesignMode::Minimize;
    else
        throw ConfigError("design.mode: expected 'vanish' or 'minimize'");
    p.k_trunc = truncation;
    p.damping = design.damping;
    p.max_iterations = design.max_iterations;
    p.grid_lo = design.grid_lo;
    p.grid_hi = design.grid_hi;
    p.grid_resolution = design.grid_resolution;
    p.polish = design.polish;
    p.validate();
    return p;
}

Config parse_config(const std::string& json_text, const std::string& origin) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": " + e.what());
    }

    Config c;
    if (!j.contains("map") || !j["map"].is_object())
        throw ConfigError(origin + ": missing 'map' object");
    const json& jm = j["map"];
    c.map.r0 = get_or<double>(jm, "r0", 1.0);
    if (!(c.map.r0 > 0.0)) throw ConfigError("map.r0: must be positive");
    if (jm.contains("a0")) c.map.a0 = complex_from(jm["a0"], "map.a0");
    if (jm.contains("a")) {
        if (!jm["a"].is_array()) throw ConfigError("map.a: expected array of [re, im]");
        int i = 0;
        for (const auto& e : jm["a"]) {
            c.map.a.push_back(complex_from(e, "map.a[" + std::to_string(i) + "]"));
            ++i;
        }
    }

    c.sigma0 = get_or<double>(j, "sigma0", 1.0);
    if (!(c.sigma0 > 0.0)) throw ConfigError("sigma0: must be positive");

    if (j.contains("layers")) {
        if (!j["layers"].is_array()) throw ConfigError("layers: expected array");
        int i = 0;
        for (const auto& e : j["layers"]) {
            const std::string where = "layers[" + std::to_string(i) + "]";
            if (!e.is_object() || !e.contains("r") || !e.contains("sigma"))
                throw ConfigError(where + ": expected {r, sigma}");
            c.layer_radii.push_back(e["r"].get<double>());
            c.layer_sigmas.push_back(e["sigma"].get<double>());
            ++i;
        }
    }

    c.truncation = get_or<int>(j, "truncation", 50);
    if (c.truncation < 1 || c.truncation > 512)
        throw ConfigError("truncation: must be in [1, 512]");

    if (j.contains("loading")) {
        const json& jl = j["loading"];
        c.loading_type = get_or<std::string>(jl, "type", "uniform-x2");
        if (jl.contains("alpha"))
            for (const auto& e : jl["alpha"]) c.loading_alpha.push_back(complex_from(e, "loading.alpha"));
        if (jl.contains("beta"))
            for (const auto& e : jl["beta"]) c.loading_beta.push_back(complex_from(e, "loading.beta"));
    }

    if (j.contains("field")) {
        const json& jf = j["field"];
        c.field.rho_min = get_or<double>(jf, "rho_min", std::log(c.map.r0));
        c.field.rho_max = get_or<double>(jf, "rho_max", std::log(c.map.r0) + 1.0);
        c.field.rho_count = get_or<int>(jf, "rho_count", 40);
        c.field.theta_count = get_or<int>(jf, "theta_count", 128);
        c.field.core = get_or<bool>(jf, "core", false);
        c.field.core_nx = get_or<int>(jf, "core_nx", 64);
        c.field.core_ny = get_or<int>(jf, "core_ny", 64);
    } else {
        c.field.rho_min = std::log(c.map.r0);
        c.field.rho_max = std::log(c.map.r0) + 1.0;
    }

    if (j.contains("design")) {
        const json& jd = j["design"];
        c.design.target_order = get_or<int>(jd, "M", 1);
        c.design.mode = get_or<std::string>(jd, "mode", "minimize");
        c.design.solver = get_or<std::string>(jd, "solver", "auto");
        c.design.damping = get_or<double>(jd, "alpha", 0.5);
        c.design.max_iterations = get_or<int>(jd, "max_iter", 200);
        c.design.polish = get_or<bool>(jd, "polish", true);
        if (jd.contains("grid")) {
            const json& jg = jd["grid"];
            c.design.grid_lo = get_or<double>(jg, "lo", 0.01);
            c.design.grid_hi = get_or<double>(jg, "hi", 10.0);
            c.design.grid_resolution = get_or<int>(jg, "n", 40);
            if (!(c.design.grid_lo > 0.0 && c.design.grid_lo < c.design.grid_hi))
                throw ConfigError("design.grid: need 0 < lo < hi");
        }
        if (jd.contains("init"))
            for (const auto& e : jd["init"]) c.design.init.push_back(e.get<double>());
    }

    if (j.contains("output")) {
        const json& jo = j["output"];
        c.output.format = get_or<std::string>(jo, "format", "csv");
        c.output.path = get_or<std::string>(jo, "path", "");
        if (c.output.format != "csv" && c.output.format != "json")
            throw ConfigError("output.format: expected 'csv' or 'json'");
    }
    return c;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace fptf
