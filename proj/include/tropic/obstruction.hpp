#pragma once

#include "tropic/image.hpp"

namespace tropic {

// A maximal piece of a bouquet cut at its trivalent-in-loop vertices.
struct Segment {
    size_t bouquet = 0;
    std::vector<size_t> edges;          // curve edge indices, in path order
    std::vector<std::string> vertices;  // v0 .. vk along the path
    bool closed = false;                // single whole-cycle segment
    std::vector<IntVec> span;           // directions of the edges
    std::vector<IntVec> perp;           // annihilator basis of the span
};

struct SegmentDecomposition {
    std::vector<Segment> segments;
    std::map<size_t, size_t> segment_of_edge;  // curve edge -> segment
};

SegmentDecomposition segment_decomposition(const TropicalCurve& curve,
                                           const BouquetDecomposition& dec);

// One dual obstruction vector: a covector per segment (forward flags carry
// +covector, backward flags -covector along the stored orientation).
struct ObstructionVector {
    std::vector<IntVec> covectors;        // indexed like segments
    std::optional<IntVec> global;         // set when all nonzero agree
};

struct ObstructionBasis {
    SegmentDecomposition segments;
    std::vector<ObstructionVector> basis;
    size_t dimension = 0;
};

// Combinatorial dual obstruction space H: segment covectors in the span
// annihilators, with sum-to-zero at the trivalent loop vertices.
ObstructionBasis dual_obstruction_basis(const CurveAnalysis& analysis);

// Abstract trivalent graph with unbounded stubs, for the scalar
// compatible-numbering count.
struct TrivalentGraph {
    size_t n_vertices = 0;
    std::vector<std::pair<size_t, size_t>> bounded_edges;
    std::vector<size_t> stubs;  // unbounded flags per vertex
};

TrivalentGraph abstract_graph(const TropicalCurve& curve);

// Dimension of compatible scalar flag numberings (vertex sums and bounded
// edge sums zero; unbounded flags zero). Equals the first Betti number.
size_t compatible_numbering_dim(const TrivalentGraph& graph);

struct SupportSet {
    std::vector<size_t> segments;   // indices with nonzero covector
    bool closure_ok = false;        // every support vertex has >= 2 edges
};

// Support of a rational combination of the computed basis.
SupportSet support_of(const ObstructionBasis& basis,
                      const std::vector<Rat>& coefficients,
                      const TropicalCurve& curve);

// Covectors of sum(coefficients[i] * basis[i]) per segment.
std::vector<RatVec> combine(const ObstructionBasis& basis,
                            const std::vector<Rat>& coefficients);

}  // namespace tropic
