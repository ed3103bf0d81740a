#ifndef STARJAC_CONFIG_HPP
#define STARJAC_CONFIG_HPP

#include <json.hpp>

#include "starjac/stieltjes_proc.hpp"

namespace starjac {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Graph + coefficient configs: a key-value tree with sections graph.compact,
// graph.edges, graph.b and halflines.<root> carrying b, a, tail. Generator
// tails are referenced by registry name so that configs round-trip losslessly.
// ---------------------------------------------------------------------------

inline GeneratorTail generator_by_name(const std::string& name, long depth_limit) {
    GeneratorTail g;
    g.name = name;
    g.depth_limit = depth_limit;
    if (name == "free") {
        g.b = [](long) { return 0.0; };
        g.a = [](long) { return 1.0; };
    } else if (name == "sqrt-density") {
        // half-line-indexed: b at sites >= 1, a at edges >= 0
        g.b = [](long i) { return sqrt_density_b(i + 1); };
        g.a = [](long i) { return sqrt_density_a(i + 1); };
    } else if (name == "legendre") {
        g.b = [](long) { return 0.0; };
        g.a = [](long i) { return legendre_a(i + 1); };
    } else {
        throw std::invalid_argument("unknown generator tail: " + name);
    }
    return g;
}

inline json tail_to_json(const TailRule& t) {
    json j;
    if (std::holds_alternative<ConstantTail>(t)) {
        const auto& ct = std::get<ConstantTail>(t);
        j["kind"] = "constant";
        j["b"] = ct.b;
        j["a"] = ct.a;
    } else if (std::holds_alternative<PeriodicTail>(t)) {
        const auto& pt = std::get<PeriodicTail>(t);
        j["kind"] = "periodic";
        j["b"] = pt.b;
        j["a"] = pt.a;
    } else {
        const auto& gt = std::get<GeneratorTail>(t);
        j["kind"] = "generator";
        j["name"] = gt.name;
        j["depth_limit"] = gt.depth_limit;
    }
    return j;
}

inline TailRule tail_from_json(const json& j) {
    std::string kind = j.at("kind");
    if (kind == "constant") return ConstantTail{j.at("b"), j.at("a")};
    if (kind == "periodic")
        return PeriodicTail{j.at("b").get<std::vector<real>>(), j.at("a").get<std::vector<real>>()};
    if (kind == "generator")
        return generator_by_name(j.at("name"), j.value("depth_limit", 1'000'000L));
    throw std::invalid_argument("unknown tail kind: " + kind);
}

inline json graph_to_json(const StarLikeGraph& g, const JacobiCoefficients& c) {
    json j;
    j["graph"]["compact"] = g.compact_vertices;
    json edges = json::array();
    for (const auto& [u, v] : g.compact_edges)
        edges.push_back({{"u", u}, {"v", v}, {"a", c.a_edge(u, v)}});
    j["graph"]["edges"] = edges;
    json bmap;
    for (const auto& v : g.compact_vertices) bmap[v] = c.b_vertex(v);
    j["graph"]["b"] = bmap;
    for (const auto& r : g.halfline_roots) {
        const auto& h = c.halflines.at(r);
        json hl;
        hl["b"] = h.b_prefix;
        hl["a"] = h.a_prefix;
        hl["tail"] = tail_to_json(h.tail);
        j["halflines"][r] = hl;
    }
    return j;
}

inline std::pair<StarLikeGraph, JacobiCoefficients> graph_from_json(const json& j) {
    StarLikeGraph g;
    JacobiCoefficients c;
    const json& jg = j.at("graph");
    g.compact_vertices = jg.at("compact").get<std::vector<std::string>>();
    for (const auto& e : jg.value("edges", json::array())) {
        g.compact_edges.emplace_back(e.at("u"), e.at("v"));
        c.a_compact[EdgeKey(e.at("u"), e.at("v"))] = e.at("a");
    }
    for (auto& [k, v] : jg.at("b").items()) c.b_compact[k] = v;
    if (j.contains("halflines")) {
        for (auto& [root, hl] : j.at("halflines").items()) {
            g.halfline_roots.push_back(root);
            HalfLineCoefficients h;
            h.b_prefix = hl.value("b", std::vector<real>{});
            h.a_prefix = hl.value("a", std::vector<real>{});
            h.tail = hl.contains("tail") ? tail_from_json(hl.at("tail")) : TailRule{ConstantTail{}};
            c.halflines[root] = std::move(h);
        }
    }
    return {g, c};
}

// ---------------------------------------------------------------------------
// Measure specs share the config format (named density kinds plus atom lists).
// ---------------------------------------------------------------------------

inline json measure_to_json(const MeasureSpec& s) {
    json j;
    json atoms = json::array();
    for (auto& a : s.atoms) atoms.push_back({{"x", a.location}, {"w", a.weight}});
    j["atoms"] = atoms;
    json ds = json::array();
    for (auto& d : s.densities) {
        json dj;
        switch (d.kind) {
            case DensityComponent::Kind::uniform:
                dj["kind"] = "uniform";
                dj["lo"] = d.lo;
                dj["hi"] = d.hi;
                break;
            case DensityComponent::Kind::power_law:
                dj["kind"] = "power";
                dj["p"] = d.p;
                break;
            case DensityComponent::Kind::semicircle:
                dj["kind"] = "semicircle";
                dj["radius"] = d.radius;
                break;
            case DensityComponent::Kind::table:
                dj["kind"] = "table";
                dj["xs"] = d.xs;
                dj["ys"] = d.ys;
                break;
        }
        dj["weight"] = d.weight;
        ds.push_back(dj);
    }
    j["densities"] = ds;
    return j;
}

inline MeasureSpec measure_from_json(const json& j) {
    MeasureSpec s;
    for (const auto& a : j.value("atoms", json::array()))
        s.atoms.push_back({a.at("x"), a.at("w")});
    for (const auto& dj : j.value("densities", json::array())) {
        DensityComponent d;
        std::string kind = dj.at("kind");
        if (kind == "uniform") {
            d.kind = DensityComponent::Kind::uniform;
            d.lo = dj.at("lo");
            d.hi = dj.at("hi");
        } else if (kind == "power") {
            d.kind = DensityComponent::Kind::power_law;
            d.p = dj.at("p");
        } else if (kind == "semicircle") {
            d.kind = DensityComponent::Kind::semicircle;
            d.radius = dj.at("radius");
        } else if (kind == "table") {
            d.kind = DensityComponent::Kind::table;
            d.xs = dj.at("xs").get<std::vector<real>>();
            d.ys = dj.at("ys").get<std::vector<real>>();
        } else {
            throw std::invalid_argument("unknown density kind: " + kind);
        }
        d.weight = dj.value("weight", 1.0);
        s.densities.push_back(d);
    }
    return s;
}

}  // namespace starjac

#endif
