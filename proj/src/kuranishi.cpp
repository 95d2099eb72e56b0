#include "tropic/kuranishi.hpp"

#include <algorithm>
#include <cmath>

namespace tropic {

namespace {

void validate_config(const PreLogPathConfig& c) {
    if (c.nodes.size() < 2 || c.nodes.size() != c.edges.size() + 1)
        throw KuranishiError(KuranishiError::Kind::BadConfig,
                             "config needs N+1 nodes over N >= 1 edges");
    for (size_t i = 0; i < c.nodes.size(); ++i) {
        const PathNode& nd = c.nodes[i];
        if (nd.type == NodeType::EXAMPLE1) {
            if (i != 0)
                throw KuranishiError(
                    KuranishiError::Kind::BadConfig,
                    "Example-1 data only enters at the path start");
            if (nd.b == 0)
                throw KuranishiError(KuranishiError::Kind::BadConfig,
                                     "Example-1 coefficient b must be "
                                     "nonzero");
        } else {
            bool need_k = i + 1 < c.nodes.size();  // last node uses l, m
            if (nd.m == 0 || nd.l == 0 || (need_k && nd.k == 0))
                throw KuranishiError(KuranishiError::Kind::BadConfig,
                                     "trivalent coefficients must be "
                                     "nonzero");
        }
    }
    for (const PathEdgeData& e : c.edges) {
        if (e.weight < 1 || e.integral_length <= 0)
            throw KuranishiError(KuranishiError::Kind::BadConfig,
                                 "edges need positive length and weight");
    }
}

// Multiplicative factor contributed by node i of an N-edge path.
Rat node_factor(const PreLogPathConfig& c, size_t i) {
    const PathNode& nd = c.nodes[i];
    const size_t last = c.nodes.size() - 1;
    if (i == 0) {
        if (nd.type == NodeType::EXAMPLE1) return nd.a / nd.b;
        return nd.k / nd.m;
    }
    if (i == last) return nd.l / nd.m;
    return (nd.l * nd.k) / (nd.m * nd.m);
}

}  // namespace

LeadingContribution leading_contribution(const PreLogPathConfig& config) {
    validate_config(config);
    LeadingContribution out;
    out.label = config.label;
    out.direction = config.direction;
    out.segment = config.segment;

    Rat order = 0;
    for (const PathEdgeData& e : config.edges)
        order += e.integral_length / Rat(e.weight);
    if (order.get_den() != 1)
        throw KuranishiError(KuranishiError::Kind::NonIntegralOrder,
                             "path length " + to_string(order) +
                                 " is not an integer");
    out.order = order.get_num();

    out.coefficient = 1;
    for (size_t i = 0; i < config.nodes.size(); ++i)
        out.coefficient *= node_factor(config, i);
    return out;
}

PreLogPathConfig zeta_twist(PreLogPathConfig config, size_t edge_index,
                            const Rat& lambda) {
    validate_config(config);
    if (lambda == 0)
        throw KuranishiError(KuranishiError::Kind::BadConfig,
                             "twist factor must be nonzero");
    if (edge_index >= config.edges.size())
        throw KuranishiError(KuranishiError::Kind::BadConfig,
                             "twist edge out of range");
    PathNode& out_node = config.nodes[edge_index];
    PathNode& in_node = config.nodes[edge_index + 1];
    if (out_node.type == NodeType::EXAMPLE1)
        out_node.a *= lambda;
    else
        out_node.k *= lambda;
    in_node.l /= lambda;
    return config;
}

PairingReport pair_with_H(const std::vector<LeadingContribution>& contribs,
                          const ObstructionBasis& H) {
    PairingReport rep;
    std::map<Int, std::vector<const LeadingContribution*>> grouped;
    for (const LeadingContribution& c : contribs) grouped[c.order].push_back(&c);

    for (const auto& [order, group] : grouped) {
        PairingReport::OrderSums sums;
        sums.order = order;
        for (const ObstructionVector& a : H.basis) {
            Rat total = 0;
            for (const LeadingContribution* c : group) {
                const IntVec* covector = nullptr;
                if (c->segment && *c->segment < a.covectors.size())
                    covector = &a.covectors[*c->segment];
                else if (a.global)
                    covector = &*a.global;
                else
                    throw KuranishiError(
                        KuranishiError::Kind::BadConfig,
                        "contribution needs a segment to pair with a "
                        "non-constant dual vector");
                total += dot(*covector, to_rat_vec(c->direction)) *
                         c->coefficient;
            }
            sums.sums.push_back(total);
        }
        rep.by_order.push_back(std::move(sums));
    }
    if (!rep.by_order.empty())
        for (const Rat& s : rep.by_order.front().sums)
            if (s != 0) rep.leading_vanishes = false;
    return rep;
}

namespace {

std::string slot_name(const std::string& label, size_t node, char coeff) {
    return label + ":" + std::to_string(node) + ":" + coeff;
}

// d(product)/d(slot) at the base values, as a map slot -> rational.
void add_derivative_terms(const PreLogPathConfig& c, const Rat& pair_factor,
                          LinearForm& form) {
    const size_t last = c.nodes.size() - 1;
    std::vector<Rat> factors(c.nodes.size());
    for (size_t i = 0; i <= last; ++i) factors[i] = node_factor(c, i);

    auto rest = [&](size_t skip) {
        Rat p = 1;
        for (size_t i = 0; i <= last; ++i)
            if (i != skip) p *= factors[i];
        return p;
    };

    for (size_t i = 0; i <= last; ++i) {
        const PathNode& nd = c.nodes[i];
        Rat r = rest(i) * pair_factor;
        if (i == 0 && nd.type == NodeType::EXAMPLE1) {
            form.coeffs[slot_name(c.label, i, 'a')] += r / nd.b;
            form.coeffs[slot_name(c.label, i, 'b')] +=
                r * (-nd.a / (nd.b * nd.b));
            continue;
        }
        if (i == 0) {
            form.coeffs[slot_name(c.label, i, 'k')] += r / nd.m;
            form.coeffs[slot_name(c.label, i, 'm')] +=
                r * (-nd.k / (nd.m * nd.m));
        } else if (i == last) {
            form.coeffs[slot_name(c.label, i, 'l')] += r / nd.m;
            form.coeffs[slot_name(c.label, i, 'm')] +=
                r * (-nd.l / (nd.m * nd.m));
        } else {
            form.coeffs[slot_name(c.label, i, 'l')] += r * nd.k / (nd.m * nd.m);
            form.coeffs[slot_name(c.label, i, 'k')] += r * nd.l / (nd.m * nd.m);
            form.coeffs[slot_name(c.label, i, 'm')] +=
                r * (Rat(-2) * nd.l * nd.k / (nd.m * nd.m * nd.m));
        }
    }
}

// Deterministic covector annihilating `span` and pairing nontrivially with
// every direction outside it (reuses the stratification search pattern).
IntVec generic_perp(const std::vector<IntVec>& span,
                    const std::vector<IntVec>& directions, size_t n) {
    std::vector<IntVec> ann = annihilator_basis(span, n);
    if (ann.empty())
        throw KuranishiError(KuranishiError::Kind::BadConfig,
                             "exhausted dual space");
    std::vector<IntVec> avoid;
    for (const IntVec& d : directions)
        if (!in_span(d, span)) avoid.push_back(d);
    for (long radius = 1; radius <= 64; ++radius) {
        std::vector<long> coef(ann.size(), -radius);
        while (true) {
            bool boundary = false;
            for (long c : coef)
                if (c == radius || c == -radius) boundary = true;
            if (boundary) {
                IntVec phi(n, Int(0));
                for (size_t i = 0; i < ann.size(); ++i)
                    phi = add(phi, scaled(ann[i], Int(coef[i])));
                if (!is_zero(phi)) {
                    bool ok = true;
                    for (const IntVec& p : avoid)
                        if (dot(phi, p) == 0) ok = false;
                    if (ok) return primitive_vector(phi);
                }
            }
            size_t i = 0;
            while (i < coef.size() && coef[i] == radius) coef[i++] = -radius;
            if (i == coef.size()) break;
            ++coef[i];
        }
    }
    throw KuranishiError(KuranishiError::Kind::BadConfig,
                         "no generic dual vector found");
}

}  // namespace

LeadingFormSystem leading_form_system(
    const CurveAnalysis& analysis,
    const std::map<std::string, PreLogPathConfig>& configs, unsigned seed) {
    const TropicalCurve& curve = analysis.curve;
    const size_t n = curve.ambient_rank;
    if (curve.genus() != 1 || !analysis.profile.c_ok)
        throw KuranishiError(KuranishiError::Kind::BadConfig,
                             "leading forms require a genus-one Assumption-C "
                             "curve");
    std::vector<IntVec> all_dirs;
    for (const Edge& e : curve.edges)
        if (!e.contracted) all_dirs.push_back(e.primitive_dir);
    if (rank_of_int_vectors(all_dirs, n) != n)
        throw KuranishiError(KuranishiError::Kind::DirectionsDoNotSpan,
                             "edge directions do not span the ambient space");
    WellSpacedResult ws = well_spaced_check(analysis, seed);
    if (!ws.well_spaced)
        throw KuranishiError(KuranishiError::Kind::NotWellSpaced,
                             "curve is not well-spaced");

    ObstructionBasis H = dual_obstruction_basis(analysis);
    const size_t a = H.dimension;
    LeadingFormSystem sys;
    if (a == 0) return sys;

    std::vector<LeadingContribution> contribs;
    for (const auto& [vertex, config] : configs) {
        LeadingContribution c = leading_contribution(config);
        c.label = vertex;
        contribs.push_back(std::move(c));
    }
    if (contribs.empty())
        throw KuranishiError(KuranishiError::Kind::BadConfig,
                             "no coefficient configurations supplied");

    // Nested-span adapted basis.
    std::vector<IntVec> direction_pool;
    for (const LeadingContribution& c : contribs)
        direction_pool.push_back(c.direction);

    GammaPrime gp = gamma_prime(analysis);
    std::vector<IntVec> current = gp.span;
    size_t guard = 0;
    while (sys.adapted_basis.size() < a) {
        sys.adapted_basis.push_back(
            generic_perp(current, direction_pool, n));
        if (sys.adapted_basis.size() == a) break;
        // Extend the span by the cheapest contribution escaping it.
        const LeadingContribution* best = nullptr;
        for (const LeadingContribution& c : contribs) {
            if (in_span(c.direction, current)) continue;
            if (!best || c.order < best->order ||
                (c.order == best->order && c.label < best->label))
                best = &c;
        }
        if (!best)
            throw KuranishiError(KuranishiError::Kind::BadConfig,
                                 "configs do not span the dual space");
        std::vector<IntVec> gens = current;
        gens.push_back(best->direction);
        current = saturation(gens, n);
        if (++guard > a + direction_pool.size())
            throw KuranishiError(KuranishiError::Kind::BadConfig,
                                 "adapted basis construction did not "
                                 "terminate");
    }

    // One linear form per dual vector: derivative of the minimal-order
    // pairing sum with respect to first-order coefficient perturbations.
    std::set<std::string> slot_set;
    for (const IntVec& ai : sys.adapted_basis) {
        std::optional<Int> min_order;
        for (const LeadingContribution& c : contribs) {
            if (dot(ai, to_rat_vec(c.direction)) == 0) continue;
            if (!min_order || c.order < *min_order) min_order = c.order;
        }
        LinearForm form;
        if (min_order) {
            for (const auto& [vertex, config] : configs) {
                LeadingContribution c = leading_contribution(config);
                Rat pairing = dot(ai, to_rat_vec(config.direction));
                if (pairing == 0 || c.order != *min_order) continue;
                add_derivative_terms(config, pairing, form);
            }
        }
        for (const auto& [slot, coeff] : form.coeffs) slot_set.insert(slot);
        sys.forms.push_back(std::move(form));
    }
    sys.slots.assign(slot_set.begin(), slot_set.end());

    RatMat M(sys.forms.size(), sys.slots.size());
    for (size_t i = 0; i < sys.forms.size(); ++i)
        for (size_t j = 0; j < sys.slots.size(); ++j) {
            auto it = sys.forms[i].coeffs.find(sys.slots[j]);
            if (it != sys.forms[i].coeffs.end()) M.at(i, j) = it->second;
        }
    sys.rank = sys.slots.empty() ? 0 : rank(M);
    sys.codimension = sys.rank;
    return sys;
}

std::vector<double> tropicalization_lengths(const std::vector<PathNode>& nodes,
                                            double tau) {
    if (!(tau > 1.0))
        throw KuranishiError(KuranishiError::Kind::NonPositiveModulus,
                             "modulus must exceed 1");
    std::vector<double> out;
    for (size_t i = 1; i < nodes.size(); ++i) {
        const PathNode& prev = nodes[i - 1];
        const PathNode& cur = nodes[i];
        if (prev.m == 0 || cur.m == 0 || prev.k == 0 || cur.l == 0)
            throw KuranishiError(KuranishiError::Kind::BadConfig,
                                 "tropicalization needs nonzero ratios");
        double km = std::fabs(Rat(prev.k / prev.m).get_d());
        double lm = std::fabs(Rat(cur.l / cur.m).get_d());
        out.push_back((std::log(km) + std::log(lm)) / std::log(tau));
    }
    return out;
}

double matching_residual(double d_p, double d_p_prime, double c, double tau) {
    if (!(tau > 1.0))
        throw KuranishiError(KuranishiError::Kind::NonPositiveModulus,
                             "modulus must exceed 1");
    return std::fabs(d_p - d_p_prime - std::log(c) / std::log(tau));
}

}  // namespace tropic
