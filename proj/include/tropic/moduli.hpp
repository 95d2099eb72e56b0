#pragma once

#include "tropic/image.hpp"

namespace tropic {

struct DeformationSpace {
    std::vector<std::string> vertex_order;  // sorted curve vertex ids
    std::vector<IntVec> basis;  // each of length n * |vertices|
    size_t dimension = 0;
};

// Kernel of the direction-preserving constraint system: unknown vertex
// displacements, one parallelism constraint block per bounded edge
// (contracted edges pin their endpoints together).
DeformationSpace deformation_space(const TropicalCurve& curve);

// e + (n-3)(1-g)
long expected_dimension(const TropicalCurve& curve);

struct SuperabundanceReport {
    long expected_dim = 0;
    long actual_dim = 0;
    std::optional<long> obstruction_dim;  // dim H when computable
    bool superabundant = false;
    bool identity_checked = false;  // trivalent Assumption-A cross-check ran
    bool identity_ok = true;        // actual - dim H == expected
};

SuperabundanceReport superabundance_report(const CurveAnalysis& analysis);

}  // namespace tropic
