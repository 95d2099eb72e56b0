#pragma once

#include "tropic/wellspaced.hpp"

namespace tropic {

class EnumerationError : public std::runtime_error {
  public:
    enum class Kind {
        DegenerateDirection,
        RankMismatch,
        NotGeneric,
        BadConstraints,
    };
    EnumerationError(Kind k, const std::string& msg)
        : std::runtime_error(msg), kind(k) {}
    Kind kind;
};

struct AffineConstraint {
    RatVec base;                 // a point of A
    std::vector<IntVec> span;    // direction lattice L(A), integral basis
    long codimension = 0;        // n - rank(span) - 1, checked
};

struct ConstraintSet {
    std::vector<AffineConstraint> constraints;  // aligned with markings
};

struct MatchWitness {
    bool met = false;
    RatVec point;  // an intersection point when met
};

// Exact incidence of each marked edge's image with its constraint.
std::vector<MatchWitness> match_constraints(const TropicalCurve& curve,
                                            const ConstraintSet& cs);

bool matches(const TropicalCurve& curve, const ConstraintSet& cs);

// delta_i = w(E_i) * [sat(Qu + L(A_i)) : Zu + sat(L(A_i))]
Int delta_factor(const TropicalCurve& curve, const ConstraintSet& cs,
                 size_t marking_index);

struct MultiplicityReport {
    Int lattice_index_D = 0;     // product of Smith invariants
    std::vector<Int> deltas;
    Int D_tilde = 0;             // D * prod(deltas)
    Int marked_weight = 1;       // w(Gamma, E, h)
    Int total = 0;               // marked_weight * D_tilde
    size_t obstruction_rank = 0;  // number of tie functionals used
    std::vector<std::pair<std::string, std::string>> tied_pairs;
};

// Assembles the constraint/direction/tie-functional lattice map (divalent
// vertices inserted at the constraint intersections) and returns the index
// of its image inside the saturation, via Smith invariants.
MultiplicityReport lattice_multiplicity(const CurveAnalysis& analysis,
                                        const ConstraintSet& cs,
                                        unsigned seed);

// Direct assembly of the unextended index map (no vertex insertion,
// quotients by sat(Qu + L(A_i)) at the marked endpoints). Meaningful for
// non-superabundant curves; kept as the second assembly path.
Int eq_index_direct(const TropicalCurve& curve, const ConstraintSet& cs);

struct CountEntry {
    std::string label;
    Verdict verdict = Verdict::UNDETERMINED;
    bool matched = false;
    Int contribution = 0;
    std::string note;
};

struct CountReport {
    Int total = 0;
    std::vector<CountEntry> entries;
};

// Desk-scale weighted count over a supplied candidate list; curves failing
// well-spacedness (or the constraints) contribute zero and are reported.
CountReport tropical_count(
    const std::vector<std::pair<std::string, CurveAnalysis>>& candidates,
    const ConstraintSet& cs, unsigned seed);

}  // namespace tropic
