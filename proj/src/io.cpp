#include "metrise/io.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "metrise/errors.hpp"
#include "metrise/parse.hpp"

namespace metrise {

namespace {

using nlohmann::json;

int index1(const json& j, const std::string& origin) {
    if (!j.is_number_integer()) throw input_error(origin + ": index must be an integer");
    int v = j.get<int>();
    if (v < 1 || v > 3) throw input_error(origin + ": index out of range 1..3");
    return v - 1;
}

Poly value_poly(const json& entry, const VarsPtr& vars, const std::string& origin) {
    if (!entry.contains("value") || !entry["value"].is_string())
        throw input_error(origin + ": entry needs a string \"value\"");
    return parse_poly(entry["value"].get<std::string>(), vars);
}

} // namespace

StructureFile parse_structure(const json& j, const std::string& origin) {
    StructureFile sf;
    if (!j.is_object()) throw input_error(origin + ": top level must be an object");
    if (!j.contains("kind") || !j["kind"].is_string())
        throw input_error(origin + ": missing \"kind\"");
    sf.kind = j["kind"].get<std::string>();

    if (j.contains("coordinates")) {
        const auto& c = j["coordinates"];
        if (!c.is_array() || c.size() != 3)
            throw input_error(origin + ": \"coordinates\" must list three names");
        for (std::size_t i = 0; i < 3; ++i) sf.coords[i] = c[i].get<std::string>();
    }
    VarList names{sf.coords[0], sf.coords[1], sf.coords[2]};
    if (j.contains("parameters")) {
        for (const auto& p : j["parameters"]) {
            sf.parameters.push_back(p.get<std::string>());
            names.push_back(p.get<std::string>());
        }
    }
    sf.vars = make_vars(std::move(names));

    auto load_symmetric2 = [&](const json& arr, Variance var, const char* what) {
        Tensor t({var, var}, Rat(0), sf.vars);
        for (const auto& e : arr) {
            const char* key = var == Variance::Down ? "low" : "up";
            if (!e.contains(key) || !e[key].is_array() || e[key].size() != 2)
                throw input_error(origin + ": " + what + " entry needs \"" + key + "\": [i,j]");
            int a = index1(e[key][0], origin), b = index1(e[key][1], origin);
            Poly v = value_poly(e, sf.vars, origin);
            t({a, b}) = v;
            t({b, a}) = std::move(v);
        }
        return t;
    };

    if (sf.kind == "projective_structure") {
        if (!j.contains("christoffel"))
            throw input_error(origin + ": projective_structure needs \"christoffel\"");
        Tensor gamma({Variance::Down, Variance::Down, Variance::Up}, Rat(0), sf.vars);
        for (const auto& e : j["christoffel"]) {
            if (!e.contains("up") || !e.contains("low") || !e["low"].is_array() || e["low"].size() != 2)
                throw input_error(origin + ": christoffel entry needs \"up\" and \"low\": [b,c]");
            int a = index1(e["up"], origin);
            int b = index1(e["low"][0], origin), c = index1(e["low"][1], origin);
            Poly v = value_poly(e, sf.vars, origin);
            gamma({b, c, a}) = v;
            gamma({c, b, a}) = std::move(v);
        }
        sf.projective = make_projective_structure(sf.coords, std::move(gamma));
    } else if (sf.kind == "metric") {
        if (!j.contains("metric")) throw input_error(origin + ": metric kind needs \"metric\"");
        sf.metric = load_symmetric2(j["metric"], Variance::Down, "metric");
    } else if (sf.kind == "weyl_structure") {
        if (!j.contains("metric") || !j.contains("one_form"))
            throw input_error(origin + ": weyl_structure needs \"metric\" and \"one_form\"");
        Tensor g = load_symmetric2(j["metric"], Variance::Down, "metric");
        Tensor om({Variance::Down}, Rat(0), sf.vars);
        for (const auto& e : j["one_form"]) {
            if (!e.contains("low")) throw input_error(origin + ": one_form entry needs \"low\"");
            int a = e["low"].is_array() ? index1(e["low"][0], origin) : index1(e["low"], origin);
            om({a}) = value_poly(e, sf.vars, origin);
        }
        sf.weyl = WeylStructure{sf.coords, std::move(g), std::move(om)};
    } else if (sf.kind == "ode_system") {
        if (!j.contains("F2") || !j.contains("F3"))
            throw input_error(origin + ": ode_system needs \"F2\" and \"F3\"");
        VarList onames{"x", "y", "z", "p2", "p3"};
        for (const auto& p : sf.parameters) onames.push_back(p);
        VarsPtr ovars = make_vars(std::move(onames));
        sf.ode = make_ode_system(parse_poly(j["F2"].get<std::string>(), ovars),
                                 parse_poly(j["F3"].get<std::string>(), ovars));
    } else if (sf.kind == "weyl_tensor_v") {
        if (!j.contains("v")) throw input_error(origin + ": weyl_tensor_v needs \"v\"");
        Tensor t({Variance::Up, Variance::Up, Variance::Down}, Rat(-4), sf.vars);
        for (const auto& e : j["v"]) {
            if (!e.contains("up") || !e["up"].is_array() || e["up"].size() != 2 || !e.contains("low"))
                throw input_error(origin + ": v entry needs \"up\": [a,b] and \"low\": c");
            int a = index1(e["up"][0], origin), b = index1(e["up"][1], origin);
            int c = e["low"].is_array() ? index1(e["low"][0], origin) : index1(e["low"], origin);
            Poly v = value_poly(e, sf.vars, origin);
            t({a, b, c}) = v;
            t({b, a, c}) = std::move(v);
        }
        sf.v = make_weyl_v(std::move(t));
    } else if (sf.kind == "sigma_candidate") {
        if (!j.contains("sigma")) throw input_error(origin + ": sigma_candidate needs \"sigma\"");
        Tensor t = load_symmetric2(j["sigma"], Variance::Up, "sigma");
        t.set_weight(Rat(-2));
        sf.sigma = std::move(t);
    } else {
        throw input_error(origin + ": unknown kind '" + sf.kind + "'");
    }
    return sf;
}

StructureFile load_structure(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw input_error(path + ": invalid JSON: " + e.what());
    }
    return parse_structure(j, path);
}

ProjectiveStructure structure_connection(const StructureFile& sf) {
    if (sf.projective) return *sf.projective;
    if (sf.metric) return levi_civita(sf.coords, *sf.metric);
    if (sf.weyl) return weyl_connection(*sf.weyl);
    if (sf.ode) return connection_from_system(*sf.ode);
    throw input_error("kind '" + sf.kind + "' does not define a connection");
}

WeylV structure_weyl_v(const StructureFile& sf) {
    if (sf.v) return *sf.v;
    return weyl_v_of(structure_connection(sf));
}

} // namespace metrise
