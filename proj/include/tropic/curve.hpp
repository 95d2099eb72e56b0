#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tropic/exact_linalg.hpp"
#include "tropic/rational.hpp"

namespace tropic {

enum class CurveErrc {
    Unbalanced,
    Disconnected,
    ContractedUnbounded,
    NonRationalSlope,
    DanglingReference,
    InvalidWeight,
    AssumptionA,
    NotTrivalent,
    NotAPath,
    Scope,
};

class CurveError : public std::runtime_error {
  public:
    CurveError(CurveErrc k, std::string msg, std::string witness = {})
        : std::runtime_error(std::move(msg)), kind(k),
          witness(std::move(witness)) {}
    CurveErrc kind;
    std::string witness;
};

// Raw (unvalidated) description, mirroring the curve document.
struct RawEdge {
    std::string id;
    Int weight = 1;
    bool bounded = true;
    std::string v1, v2;  // bounded: both ends; unbounded: v1 only
    IntVec direction;    // unbounded only
};

struct RawCurve {
    size_t ambient_rank = 0;
    std::vector<std::pair<std::string, RatVec>> vertices;
    std::vector<RawEdge> edges;
    std::vector<std::string> markings;
};

struct Edge {
    std::string id;
    bool bounded = true;
    std::string tail, head;  // head empty for rays
    Int weight = 1;
    bool contracted = false;
    IntVec primitive_dir;  // tail -> head; ray direction for unbounded
    Rat integral_length;   // bounded, non-contracted (displacement = l * u)
};

struct Flag {
    std::string vertex;
    size_t edge = 0;       // index into edges
    bool contracted = false;
    IntVec direction;      // primitive, emanating from the vertex
};

class TropicalCurve {
  public:
    size_t ambient_rank = 0;
    std::vector<std::string> vertex_ids;  // sorted
    std::map<std::string, RatVec> position;
    std::vector<Edge> edges;  // sorted by id
    std::map<std::string, size_t> edge_index;
    std::vector<std::string> markings;
    std::map<std::string, std::vector<size_t>> incident;  // edge indices

    const RatVec& pos(const std::string& v) const { return position.at(v); }
    const Edge& edge(const std::string& id) const {
        return edges[edge_index.at(id)];
    }

    // All flags at a vertex, contracted included. Deterministic order.
    std::vector<Flag> flags_at(const std::string& v) const;
    size_t valence(const std::string& v) const {
        auto it = incident.find(v);
        return it == incident.end() ? 0 : it->second.size();
    }
    bool trivalent() const;

    size_t genus() const;
    size_t unbounded_count() const;
};

// Parses + validates: connectivity, balancing, weight positivity, rational
// slopes, reference integrity. Throws CurveError.
TropicalCurve validate_curve(const RawCurve& raw);

// Degree map: weighted ray direction -> count.
std::map<IntVec, Int> degree_map(const TropicalCurve& curve);

struct Bouquet {
    std::vector<size_t> edges;          // indices into curve.edges
    std::set<std::string> vertices;
    size_t betti = 0;
};

struct ComplementComponent {
    std::vector<size_t> edges;           // non-loop edges (rays included)
    std::set<std::string> vertices;      // all touched vertices
    std::vector<std::string> attachments;  // vertices shared with the loops
};

struct BouquetDecomposition {
    std::set<size_t> loop_edges;
    std::set<std::string> loop_vertices;
    std::vector<Bouquet> bouquets;
    std::vector<ComplementComponent> complement;
};

BouquetDecomposition bouquet_decomposition(const TropicalCurve& curve);

// Connected components of the curve minus one bouquet's edges (used by the
// per-bouquet Kuranishi analysis; other bouquets land inside components).
std::vector<ComplementComponent> complement_of_bouquet(
    const TropicalCurve& curve, const BouquetDecomposition& dec,
    size_t bouquet_index);

}  // namespace tropic
