#ifndef STARJAC_GRAPH_HPP
#define STARJAC_GRAPH_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "starjac/core.hpp"

namespace starjac {

// ---------------------------------------------------------------------------
// Star-like graph: a finite connected compact component, with at most one
// half-line (a copy of N) attached per designated root vertex.
// ---------------------------------------------------------------------------

struct StarLikeGraph {
    std::vector<std::string> compact_vertices;                    // ordered: v_1, ..., v_n
    std::vector<std::pair<std::string, std::string>> compact_edges;
    std::vector<std::string> halfline_roots;                      // subset of compact_vertices

    int n_compact() const { return static_cast<int>(compact_vertices.size()); }
    int n_halflines() const { return static_cast<int>(halfline_roots.size()); }

    std::optional<int> index_of(const std::string& name) const {
        auto it = std::find(compact_vertices.begin(), compact_vertices.end(), name);
        if (it == compact_vertices.end()) return std::nullopt;
        return static_cast<int>(it - compact_vertices.begin());
    }
    bool has_halfline(const std::string& name) const {
        return std::find(halfline_roots.begin(), halfline_roots.end(), name) != halfline_roots.end();
    }
    std::vector<std::string> compact_neighbors(const std::string& name) const {
        std::vector<std::string> out;
        for (const auto& [u, v] : compact_edges) {
            if (u == name) out.push_back(v);
            if (v == name) out.push_back(u);
        }
        return out;
    }
    bool connected() const {
        if (compact_vertices.empty()) return false;
        std::set<std::string> seen{compact_vertices.front()};
        std::vector<std::string> stack{compact_vertices.front()};
        while (!stack.empty()) {
            auto u = stack.back();
            stack.pop_back();
            for (const auto& w : compact_neighbors(u))
                if (seen.insert(w).second) stack.push_back(w);
        }
        return seen.size() == compact_vertices.size();
    }
};

// ---------------------------------------------------------------------------
// Half-line coefficient sequences: explicit prefix + tail rule.
// b(i) is the diagonal at site i >= 1 of the half-line; a(i) for i >= 0 is the
// edge weight between site i and i+1, where site 0 means the root vertex.
// ---------------------------------------------------------------------------

struct ConstantTail {
    real b = 0.0, a = 1.0;
};
struct PeriodicTail {
    std::vector<real> b, a;  // same positive length
};
struct GeneratorTail {
    std::string name;  // registry key, serialized by name
    std::function<real(long)> b;  // site index >= 1
    std::function<real(long)> a;  // edge index >= 0
    long depth_limit = 1'000'000;
};

using TailRule = std::variant<ConstantTail, PeriodicTail, GeneratorTail>;

struct HalfLineCoefficients {
    std::vector<real> b_prefix;  // b(1), b(2), ...
    std::vector<real> a_prefix;  // a(0), a(1), ...
    TailRule tail = ConstantTail{};

    real b(long i) const {  // i >= 1
        if (i < 1) throw std::invalid_argument("HalfLineCoefficients::b: site index must be >= 1");
        if (i <= static_cast<long>(b_prefix.size())) return b_prefix[i - 1];
        long k = i - static_cast<long>(b_prefix.size());  // 1-based offset into the tail
        if (std::holds_alternative<ConstantTail>(tail)) return std::get<ConstantTail>(tail).b;
        if (std::holds_alternative<PeriodicTail>(tail)) {
            const auto& p = std::get<PeriodicTail>(tail);
            return p.b[(k - 1) % p.b.size()];
        }
        const auto& g = std::get<GeneratorTail>(tail);
        if (i > g.depth_limit) throw std::out_of_range("generator tail depth limit exceeded");
        return g.b(i);
    }
    real a(long i) const {  // i >= 0
        if (i < 0) throw std::invalid_argument("HalfLineCoefficients::a: edge index must be >= 0");
        if (i < static_cast<long>(a_prefix.size())) return a_prefix[i];
        long k = i - static_cast<long>(a_prefix.size());
        if (std::holds_alternative<ConstantTail>(tail)) return std::get<ConstantTail>(tail).a;
        if (std::holds_alternative<PeriodicTail>(tail)) {
            const auto& p = std::get<PeriodicTail>(tail);
            return p.a[k % p.a.size()];
        }
        const auto& g = std::get<GeneratorTail>(tail);
        if (i > g.depth_limit) throw std::out_of_range("generator tail depth limit exceeded");
        return g.a(i);
    }

    // first tail site index when the sequence is eventually constant, else 0
    long constant_from() const {
        if (!std::holds_alternative<ConstantTail>(tail)) return 0;
        return static_cast<long>(std::max(b_prefix.size(), a_prefix.size())) + 1;
    }
};

struct EdgeKey {
    std::string u, v;  // stored sorted
    EdgeKey(std::string a_, std::string b_) {
        u = std::min(a_, b_);
        v = std::max(a_, b_);
    }
    bool operator<(const EdgeKey& o) const { return u != o.u ? u < o.u : v < o.v; }
    bool operator==(const EdgeKey&) const = default;
};

struct JacobiCoefficients {
    std::map<std::string, real> b_compact;
    std::map<EdgeKey, real> a_compact;
    std::map<std::string, HalfLineCoefficients> halflines;

    real a_edge(const std::string& u, const std::string& v) const {
        auto it = a_compact.find(EdgeKey(u, v));
        if (it == a_compact.end()) throw std::out_of_range("no weight for edge " + u + "-" + v);
        return it->second;
    }
    real b_vertex(const std::string& u) const {
        auto it = b_compact.find(u);
        if (it == b_compact.end()) throw std::out_of_range("no diagonal for vertex " + u);
        return it->second;
    }

    // crude sup bound over everything reachable without unrolling generators too far
    real coefficient_bound(long sample_depth = 4096) const {
        real m = 0;
        for (auto& [k, v] : b_compact) m = std::max(m, std::abs(v));
        for (auto& [k, v] : a_compact) m = std::max(m, std::abs(v));
        for (auto& [r, h] : halflines) {
            long lim = sample_depth;
            if (std::holds_alternative<GeneratorTail>(h.tail))
                lim = std::min<long>(lim, std::get<GeneratorTail>(h.tail).depth_limit);
            for (long i = 1; i <= lim; ++i) m = std::max(m, std::abs(h.b(i)));
            for (long i = 0; i < lim; ++i) m = std::max(m, std::abs(h.a(i)));
        }
        return m;
    }
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct ValidationIssue {
    std::string code;
    std::string where;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
};

inline ValidationReport validate(const StarLikeGraph& g, const JacobiCoefficients& c,
                                 long tail_sample_depth = 1024) {
    ValidationReport rep;
    auto add = [&](std::string code, std::string where, std::string msg) {
        rep.issues.push_back({std::move(code), std::move(where), std::move(msg)});
    };

    if (g.compact_vertices.empty()) add("empty-compact", "", "compact component has no vertices");
    std::set<std::string> names(g.compact_vertices.begin(), g.compact_vertices.end());
    if (names.size() != g.compact_vertices.size())
        add("duplicate-vertex", "", "compact vertex names are not unique");

    std::set<EdgeKey> seen_edges;
    for (const auto& [u, v] : g.compact_edges) {
        std::string where = u + "-" + v;
        if (u == v) add("self-loop", where, "self-loops are not allowed");
        if (!names.count(u) || !names.count(v))
            add("unknown-endpoint", where, "edge endpoint is not a compact vertex");
        if (!seen_edges.insert(EdgeKey(u, v)).second)
            add("duplicate-edge", where, "edge listed twice");
    }
    if (!g.compact_vertices.empty() && !g.connected())
        add("disconnected", "", "compact component is not connected");

    if (g.halfline_roots.empty())
        add("no-halfline", "", "at least one half-line is required (k >= 1)");
    std::set<std::string> roots;
    for (const auto& r : g.halfline_roots) {
        if (!names.count(r)) add("unknown-root", r, "half-line root is not a compact vertex");
        if (!roots.insert(r).second)
            add("duplicate-root", r, "a vertex may carry at most one half-line");
    }

    for (const auto& v : g.compact_vertices)
        if (!c.b_compact.count(v)) add("missing-b", v, "no diagonal value for compact vertex");
    for (const auto& [u, v] : g.compact_edges) {
        EdgeKey k(u, v);
        auto it = c.a_compact.find(k);
        if (it == c.a_compact.end())
            add("missing-a", u + "-" + v, "no weight for compact edge");
        else if (it->second == 0.0)
            add("zero-weight", u + "-" + v, "edge weight must be nonzero");
    }
    for (const auto& r : g.halfline_roots) {
        auto it = c.halflines.find(r);
        if (it == c.halflines.end()) {
            add("missing-halfline", r, "no coefficient sequences for half-line");
            continue;
        }
        const auto& h = it->second;
        long lim = tail_sample_depth;
        if (std::holds_alternative<GeneratorTail>(h.tail))
            lim = std::min<long>(lim, std::get<GeneratorTail>(h.tail).depth_limit);
        for (long i = 0; i < lim; ++i) {
            if (h.a(i) == 0.0) {
                add("zero-weight", r + "[" + std::to_string(i) + "]",
                    "half-line edge weight must be nonzero");
                break;
            }
        }
        if (std::holds_alternative<PeriodicTail>(h.tail)) {
            const auto& p = std::get<PeriodicTail>(h.tail);
            if (p.b.empty() || p.a.empty())
                add("empty-period", r, "periodic tail must have positive period");
        }
    }
    return rep;
}

}  // namespace starjac

#endif
