#pragma once

#include "tropic/obstruction.hpp"

namespace tropic {

struct PathStep {
    std::string edge_id;
    Rat integral_length;
    Int weight;
    Rat normalized;  // integral_length / weight
    bool integral = false;
};

struct PathLengthResult {
    Rat total = 0;
    bool integral = true;
    std::vector<PathStep> steps;
};

// Weight-normalized length of a path given as consecutive image vertices.
PathLengthResult path_length(const ImageCurve& image,
                             const std::vector<std::string>& vertex_path);

struct GammaPrime {
    RatVec base;                 // a point of the loop
    std::vector<IntVec> span;    // saturated direction lattice of A
    std::set<size_t> edges;      // image edges of the component
    std::set<std::string> vertices;
    std::vector<std::string> one_valent;
};

// Component of h(curve) inside the affine span of the loop, for curves with
// a unique bouquet. Throws CurveError{Scope} otherwise.
GammaPrime gamma_prime(const CurveAnalysis& analysis);

struct Hyperplane {
    IntVec normal;  // primitive integral covector
    Rat offset;     // { x : normal . x = offset }
    std::vector<size_t> edges_in;          // image edge indices contained
    std::vector<std::string> vertices_in;  // image vertex ids contained
};

// Finite stratification of the affine hyperplanes containing h(Gamma');
// one representative per cut-subgraph stratum. Empty when the loop already
// spans the ambient space.
std::vector<Hyperplane> candidate_hyperplanes(const CurveAnalysis& analysis);

enum class WitnessBranch { TWO_MINIMA, FOUR_VALENT_EXCEPTION, FAIL };

std::string to_string(WitnessBranch b);

struct WellSpacedCandidate {
    std::string vertex;  // image vertex id
    ExtRat distance;
};

struct WellSpacedWitness {
    std::string context;  // hyperplane / stratum description
    std::vector<WellSpacedCandidate> candidates;
    ExtRat minimum = ExtRat::inf();
    size_t minimum_count = 0;
    WitnessBranch branch = WitnessBranch::TWO_MINIMA;
    std::string exception_class;  // EXAMPLE1 or EXAMPLE2B when taken
    bool vacuous = false;
};

struct WellSpacedResult {
    bool well_spaced = true;
    std::vector<WellSpacedWitness> witnesses;
};

// Genus one: hyperplane-stratified test per Definitions of well-spacedness.
// Higher genus with a unique bouquet: the per-support-stratum extension.
WellSpacedResult well_spaced_check(const CurveAnalysis& analysis,
                                   unsigned seed);

// True iff every complement component's direction span sits inside the span
// of the segment it attaches to, for every bouquet.
bool kuranishi_zero_check(const CurveAnalysis& analysis);

enum class Verdict { SMOOTHABLE, NOT_SMOOTHABLE, UNDETERMINED };
enum class TheoremTag {
    NONE,
    NON_SUPERABUNDANT,
    K_ZERO,
    THM_IMMERSIVE,
    THM_GENERAL,
    EXT_UNIQUE_BOUQUET,
};

std::string to_string(Verdict v);
std::string to_string(TheoremTag t);

struct SmoothabilityVerdict {
    Verdict verdict = Verdict::UNDETERMINED;
    TheoremTag tag = TheoremTag::NONE;
    std::string reason;  // failed hypothesis for UNDETERMINED
    std::optional<WellSpacedResult> wellspaced;
};

SmoothabilityVerdict smoothability_verdict(const CurveAnalysis& analysis,
                                           unsigned seed);

bool immersive(const CurveAnalysis& analysis);

// TROPIC_SEED environment override, default 1.
unsigned default_seed();

// Unique image-vertex path from `image_vertex` to the loops (inclusive), and
// its weight-normalized length.
std::vector<std::string> image_path_to_loops(const CurveAnalysis& analysis,
                                             const std::string& image_vertex);
Rat image_distance_to_loops(const CurveAnalysis& analysis,
                            const std::string& image_vertex);

}  // namespace tropic
