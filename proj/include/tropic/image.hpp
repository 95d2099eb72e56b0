#pragma once

#include "tropic/curve.hpp"

namespace tropic {

enum class VertexClass { TRIVALENT, EXAMPLE1, EXAMPLE2, OTHER };

std::string to_string(VertexClass c);

struct ImageVertex {
    std::string id;  // lexicographically smallest member vertex id
    RatVec position;
    std::vector<std::string> members;  // curve vertices mapping here
    size_t valence = 0;                // non-contracted flags over it
    std::vector<size_t> image_edges;   // incident, with multiplicity
    VertexClass cls = VertexClass::TRIVALENT;
};

struct ImageEdge {
    std::string id;  // smallest member edge id
    bool bounded = true;
    std::string tail, head;  // image vertex ids; head empty for rays
    IntVec primitive_dir;    // tail -> head, or ray direction
    Rat integral_length;     // bounded only
    std::vector<Int> weights;          // sorted member weights
    std::vector<std::string> members;  // member curve edge ids
    Int additive_weight = 0;           // w_s
    Int multiplicative_weight = 1;     // w_m
};

struct ImageCurve {
    std::vector<ImageVertex> vertices;  // sorted by id
    std::vector<ImageEdge> edges;       // sorted by id
    std::map<std::string, size_t> vertex_of;  // curve vertex -> image vertex
    std::map<std::string, size_t> edge_of;    // curve edge -> image edge
    std::map<std::string, size_t> vertex_index;

    const ImageVertex& iv(const std::string& curve_vertex) const {
        return vertices[vertex_of.at(curve_vertex)];
    }
};

struct AssumptionWitness {
    char clause = ' ';  // 'i', '2' (ii), '3' (iii), '4' (iv)
    std::string detail;
};

struct AssumptionProfile {
    bool trivalent_domain = false;  // Assumption A (i) literally
    bool a_ok = false;              // operative check (see below)
    bool c_ok = false;
    std::vector<AssumptionWitness> witnesses;
    std::map<std::string, VertexClass> vertex_classes;  // >= 4-valent only
};

// Operative Assumption A: clauses (ii)-(iv) geometrically, plus trivalence of
// every vertex on the loops. Off-loop vertices of valence four are admitted
// (the merged-edge viewpoint for four-valent image vertices); the strict
// domain trivalence of clause (i) is reported in the profile.
AssumptionProfile assumption_profile(const TropicalCurve& curve,
                                     const BouquetDecomposition& dec);

// Merges edges with identical images, computes image valences and weight
// multisets. Throws CurveError{AssumptionA} when the operative check fails.
ImageCurve image_curve(const TropicalCurve& curve,
                       const BouquetDecomposition& dec);

struct WeightsSummary {
    Int total_inner_weight = 1;
    Int total_marked_weight = 1;
};

WeightsSummary weights_summary(const TropicalCurve& curve,
                               const ImageCurve& image);

// Shared analysis bundle: validated curve plus derived structures.
struct CurveAnalysis {
    TropicalCurve curve;
    BouquetDecomposition bouquets;
    AssumptionProfile profile;
    std::optional<ImageCurve> image;  // present when profile.a_ok

    static CurveAnalysis of(TropicalCurve curve);
};

}  // namespace tropic
