#pragma once

#include "tropic/wellspaced.hpp"

namespace tropic {

class KuranishiError : public std::runtime_error {
  public:
    enum class Kind {
        NonIntegralOrder,
        NotWellSpaced,
        DirectionsDoNotSpan,
        NonPositiveModulus,
        BadConfig,
    };
    KuranishiError(Kind k, const std::string& msg)
        : std::runtime_error(msg), kind(k) {}
    Kind kind;
};

enum class NodeType { TRIVALENT, EXAMPLE1 };

struct PathNode {
    NodeType type = NodeType::TRIVALENT;
    Rat k, l, m;  // trivalent coefficients, all nonzero
    Rat a, b;     // Example-1 pair; b nonzero, a may vanish
};

struct PathEdgeData {
    Rat integral_length;
    Int weight = 1;
};

// Exact coefficient data along the tree path from a one-valent vertex of
// Gamma' to its loop attachment. nodes.size() == edges.size() + 1.
struct PreLogPathConfig {
    std::string label;            // source vertex, free-form
    std::vector<PathNode> nodes;  // v0 .. vN (vN on the loop)
    std::vector<PathEdgeData> edges;
    IntVec direction;             // off-span direction carried at v0
    std::optional<size_t> segment;  // pairing segment when not genus one
};

struct LeadingContribution {
    Int order = 0;  // exponent of t; equals the path length
    Rat coefficient;
    IntVec direction;
    std::optional<size_t> segment;
    std::string label;
};

// Product of coefficient ratios with order = sum of length/weight.
// The overall sign follows the single worked derivation of the source
// computation; cancellation semantics do not depend on it.
LeadingContribution leading_contribution(const PreLogPathConfig& config);

// Rescales across edge `edge_index` (0-based, joining nodes i and i+1):
// outgoing numerator at node i scales by lambda, incoming numerator at node
// i+1 by 1/lambda. Leaves the leading contribution unchanged.
PreLogPathConfig zeta_twist(PreLogPathConfig config, size_t edge_index,
                            const Rat& lambda);

struct PairingReport {
    struct OrderSums {
        Int order;
        std::vector<Rat> sums;  // per basis vector
    };
    std::vector<OrderSums> by_order;  // ascending
    bool leading_vanishes = true;     // all minimal-order sums are zero
};

PairingReport pair_with_H(const std::vector<LeadingContribution>& contribs,
                          const ObstructionBasis& H);

struct LinearForm {
    std::map<std::string, Rat> coeffs;  // slot id -> coefficient
};

struct LeadingFormSystem {
    std::vector<IntVec> adapted_basis;  // the chosen dual vectors
    std::vector<LinearForm> forms;      // h_1 .. h_a
    std::vector<std::string> slots;     // deterministic column order
    size_t rank = 0;
    size_t codimension = 0;
};

// Leading linear forms of the Kuranishi map at a well-spaced genus-one
// curve: the adapted dual basis is built by the nested-span procedure and
// each form differentiates the minimal-order coefficient products.
LeadingFormSystem leading_form_system(
    const CurveAnalysis& analysis,
    const std::map<std::string, PreLogPathConfig>& configs, unsigned seed);

// Per bounded edge between consecutive nodes:
// (log|k_{i-1}/m_{i-1}| + log|l_i/m_i|) / log(tau). Binary64 arithmetic,
// quarantined here; never feeds verdict logic.
std::vector<double> tropicalization_lengths(
    const std::vector<PathNode>& nodes, double tau);

// |dP - dP' - log(c)/log(tau)|
double matching_residual(double d_p, double d_p_prime, double c, double tau);

}  // namespace tropic
