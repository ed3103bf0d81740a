#ifndef STARJAC_CORE_HPP
#define STARJAC_CORE_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace starjac {

using real = double;
using cplx = std::complex<double>;

inline constexpr real kPi = 3.14159265358979323846;

// A nonnegative quantity kept as its natural logarithm so that norms of
// exponentially growing solutions stay representable.
struct LogValue {
    real ln = -std::numeric_limits<real>::infinity();  // log of the magnitude

    static LogValue from_value(real v) {
        if (v < 0) throw std::invalid_argument("LogValue: negative magnitude");
        return {v == 0 ? -std::numeric_limits<real>::infinity() : std::log(v)};
    }
    real value() const { return std::exp(ln); }  // may overflow to inf
    bool is_zero() const { return std::isinf(ln) && ln < 0; }
};

// ratio a/b of two log-magnitudes, as a plain double (0 and inf allowed)
inline real log_ratio(const LogValue& a, const LogValue& b) { return std::exp(a.ln - b.ln); }

// Vertex of a star-like graph. Compact vertices are user-named strings;
// half-line sites are addressed by (root name, index >= 1).
struct VertexId {
    std::string root;
    int index = 0;  // 0 = the compact vertex itself

    bool is_compact() const { return index == 0; }
    bool operator==(const VertexId&) const = default;
    bool operator<(const VertexId& o) const {
        return root != o.root ? root < o.root : index < o.index;
    }
    std::string str() const {
        return index == 0 ? root : root + "[" + std::to_string(index) + "]";
    }
};

inline VertexId compact_vertex(std::string name) { return {std::move(name), 0}; }
inline VertexId halfline_site(std::string root, int i) { return {std::move(root), i}; }

}  // namespace starjac

template <>
struct std::hash<starjac::VertexId> {
    size_t operator()(const starjac::VertexId& v) const {
        return std::hash<std::string>()(v.root) ^ (std::hash<int>()(v.index) * 0x9e3779b97f4a7c15ull);
    }
};

#endif
