#include "tropic/enumeration.hpp"

#include <algorithm>

#include "tropic/moduli.hpp"

namespace tropic {

namespace {

void check_constraint_shape(const TropicalCurve& curve,
                            const ConstraintSet& cs) {
    const size_t n = curve.ambient_rank;
    if (cs.constraints.size() != curve.markings.size())
        throw EnumerationError(EnumerationError::Kind::BadConstraints,
                               "constraint count differs from marking count");
    for (const AffineConstraint& a : cs.constraints) {
        if (a.base.size() != n)
            throw EnumerationError(EnumerationError::Kind::BadConstraints,
                                   "constraint base has wrong rank");
        size_t r = rank_of_int_vectors(a.span, n);
        if (r != a.span.size())
            throw EnumerationError(EnumerationError::Kind::BadConstraints,
                                   "constraint span is not a basis");
        if (static_cast<long>(n) - static_cast<long>(r) - 1 != a.codimension)
            throw EnumerationError(EnumerationError::Kind::BadConstraints,
                                   "constraint codimension mismatch");
    }
}

// Exact intersection of a marked edge's image with an affine constraint.
MatchWitness edge_meets(const TropicalCurve& curve, const Edge& e,
                        const AffineConstraint& a) {
    MatchWitness w;
    if (e.contracted) {
        // A contracted edge sits at a point; incidence is point membership.
        RatVec p = curve.pos(e.tail);
        for (const IntVec& phi :
             annihilator_basis(a.span, curve.ambient_rank))
            if (dot(phi, p) != dot(phi, a.base)) return w;
        w.met = true;
        w.point = p;
        return w;
    }
    RatVec base = curve.pos(e.tail);
    std::optional<Rat> smin, smax;  // allowed parameter range intersection
    bool empty = false;
    smin = Rat(0);
    if (e.bounded) smax = e.integral_length;

    for (const IntVec& phi : annihilator_basis(a.span, curve.ambient_rank)) {
        Rat lhs = dot(phi, base) - dot(phi, a.base);
        Rat slope = dot(phi, to_rat_vec(e.primitive_dir));
        if (slope == 0) {
            if (lhs != 0) {
                empty = true;
                break;
            }
            continue;  // hyperplane contains the whole edge line
        }
        Rat s = -lhs / slope;
        // This covector pins the parameter exactly.
        if ((smin && s < *smin) || (smax && s > *smax)) {
            empty = true;
            break;
        }
        smin = s;
        smax = s;
    }
    if (empty) return w;
    w.met = true;
    Rat s = smin.value_or(Rat(0));
    w.point = add(base, scaled(to_rat_vec(e.primitive_dir), s));
    return w;
}

}  // namespace

std::vector<MatchWitness> match_constraints(const TropicalCurve& curve,
                                            const ConstraintSet& cs) {
    check_constraint_shape(curve, cs);
    std::vector<MatchWitness> out;
    for (size_t i = 0; i < curve.markings.size(); ++i)
        out.push_back(edge_meets(curve, curve.edge(curve.markings[i]),
                                 cs.constraints[i]));
    return out;
}

bool matches(const TropicalCurve& curve, const ConstraintSet& cs) {
    for (const MatchWitness& w : match_constraints(curve, cs))
        if (!w.met) return false;
    return true;
}

Int delta_factor(const TropicalCurve& curve, const ConstraintSet& cs,
                 size_t marking_index) {
    check_constraint_shape(curve, cs);
    const Edge& e = curve.edge(curve.markings.at(marking_index));
    const AffineConstraint& a = cs.constraints.at(marking_index);
    const size_t n = curve.ambient_rank;
    if (e.contracted)
        throw EnumerationError(EnumerationError::Kind::DegenerateDirection,
                               "marked edge " + e.id + " is contracted");
    if (in_span(e.primitive_dir, a.span))
        throw EnumerationError(EnumerationError::Kind::DegenerateDirection,
                               "marked edge " + e.id +
                                   " is parallel to its constraint");
    std::vector<IntVec> sub{e.primitive_dir};
    std::vector<IntVec> span_sat = saturation(a.span, n);
    sub.insert(sub.end(), span_sat.begin(), span_sat.end());
    std::vector<IntVec> ambient_gens{e.primitive_dir};
    ambient_gens.insert(ambient_gens.end(), a.span.begin(), a.span.end());
    LatticeIndex idx = lattice_index(sub, saturation(ambient_gens, n));
    if (!idx.finite)
        throw EnumerationError(EnumerationError::Kind::RankMismatch,
                               "delta factor degenerated");
    return e.weight * idx.index;
}

namespace {

struct WorkingCurve {
    RawCurve raw;
    // marking index -> vertex id carrying the constraint rows
    std::vector<std::string> constraint_vertex;
    // pairs (twin, primary) pinned together
    std::vector<std::pair<std::string, std::string>> pins;
};

std::string fresh_id(const RawCurve& raw, const std::string& want) {
    std::string id = want;
    auto taken = [&](const std::string& s) {
        for (const auto& [v, p] : raw.vertices)
            if (v == s) return true;
        return false;
    };
    while (taken(id)) id += "'";
    return id;
}

// Inserts a divalent vertex on edge `edge_id` at `point`; returns its id (or
// the existing endpoint when the point is an endpoint).
std::string insert_on_edge(RawCurve& raw, const TropicalCurve& curve,
                           const std::string& edge_id, const RatVec& point,
                           size_t tag) {
    const Edge& e = curve.edge(edge_id);
    if (point == curve.pos(e.tail)) return e.tail;
    if (e.bounded && point == curve.pos(e.head)) return e.head;

    std::string x = fresh_id(raw, "x" + std::to_string(tag) + "@" + edge_id);
    raw.vertices.emplace_back(x, point);
    auto it = std::find_if(raw.edges.begin(), raw.edges.end(),
                           [&](const RawEdge& re) { return re.id == edge_id; });
    RawEdge original = *it;
    raw.edges.erase(it);

    RawEdge first;
    first.id = edge_id + "#a";
    first.weight = original.weight;
    first.bounded = true;
    first.v1 = original.v1;
    first.v2 = x;
    raw.edges.push_back(first);

    RawEdge second;
    second.id = edge_id + "#b";
    second.weight = original.weight;
    second.bounded = original.bounded;
    second.v1 = x;
    if (original.bounded)
        second.v2 = original.v2;
    else
        second.direction = original.direction;
    raw.edges.push_back(second);
    return x;
}

RawCurve to_raw(const TropicalCurve& curve) {
    RawCurve raw;
    raw.ambient_rank = curve.ambient_rank;
    for (const auto& v : curve.vertex_ids)
        raw.vertices.emplace_back(v, curve.pos(v));
    for (const Edge& e : curve.edges) {
        RawEdge re;
        re.id = e.id;
        re.weight = e.weight;
        re.bounded = e.bounded;
        re.v1 = e.tail;
        if (e.bounded)
            re.v2 = e.head;
        else
            re.direction = e.primitive_dir;
        raw.edges.push_back(re);
    }
    raw.markings = curve.markings;
    return raw;
}

WorkingCurve build_working_curve(const CurveAnalysis& analysis,
                                 const ConstraintSet& cs,
                                 const std::vector<MatchWitness>& hits) {
    const TropicalCurve& curve = analysis.curve;
    WorkingCurve wc;
    wc.raw = to_raw(curve);
    // Markings are consumed by the constraint rows; the working curve keeps
    // only the subdivided geometry.
    wc.raw.markings.clear();

    for (size_t i = 0; i < curve.markings.size(); ++i) {
        const Edge& marked = curve.edge(curve.markings[i]);
        const ImageEdge& img_edge =
            analysis.image->edges[analysis.image->edge_of.at(marked.id)];
        // Re-resolve ids: earlier insertions may have split this edge. The
        // constraints are generic, so repeated hits on one edge stay inside
        // one of its pieces; locate the piece containing the point.
        auto locate = [&](const std::string& member) -> std::string {
            // find current raw edge whose segment contains the hit point
            TropicalCurve cur = validate_curve(wc.raw);
            for (const Edge& e : cur.edges) {
                std::string root = e.id.substr(0, e.id.find('#'));
                if (root != member && e.id != member) continue;
                if (e.contracted) continue;
                RatVec diff = sub(hits[i].point, cur.pos(e.tail));
                // parameter of the point on this piece
                std::optional<Rat> s;
                bool on = true;
                for (size_t k = 0; k < diff.size(); ++k) {
                    Rat d = Rat(e.primitive_dir[k]);
                    if (d == 0) {
                        if (diff[k] != 0) on = false;
                    } else if (!s) {
                        s = diff[k] / d;
                    } else if (*s != diff[k] / d) {
                        on = false;
                    }
                }
                if (!on || !s) continue;
                if (*s < 0) continue;
                if (e.bounded && *s > e.integral_length) continue;
                return insert_on_edge(wc.raw, cur, e.id, hits[i].point, i);
            }
            throw EnumerationError(EnumerationError::Kind::BadConstraints,
                                   "intersection point escaped the marked "
                                   "edge");
        };
        std::string primary = locate(marked.id);
        wc.constraint_vertex.push_back(primary);
        // Both-preimages rule for merged edges: every other member of the
        // image edge is subdivided at the same image point and pinned.
        for (const std::string& member : img_edge.members) {
            if (member == marked.id) continue;
            std::string twin = locate(member);
            wc.pins.emplace_back(twin, primary);
        }
    }
    return wc;
}

struct AssembledMap {
    IntMat matrix;
    std::vector<std::string> vertex_order;
    size_t rows = 0;
};

void append_row(std::vector<IntVec>& rows, IntVec row) {
    rows.push_back(std::move(row));
}

}  // namespace

Int eq_index_direct(const TropicalCurve& curve, const ConstraintSet& cs) {
    check_constraint_shape(curve, cs);
    const size_t n = curve.ambient_rank;
    std::map<std::string, size_t> slot;
    for (size_t i = 0; i < curve.vertex_ids.size(); ++i)
        slot[curve.vertex_ids[i]] = i * n;
    const size_t width = n * curve.vertex_ids.size();

    std::vector<IntVec> rows;
    for (const Edge& e : curve.edges) {
        if (!e.bounded) continue;
        std::vector<IntVec> quot =
            e.contracted
                ? annihilator_basis({}, n)
                : annihilator_basis({e.primitive_dir}, n);
        for (const IntVec& phi : quot) {
            IntVec row(width, Int(0));
            for (size_t k = 0; k < n; ++k) {
                row[slot[e.head] + k] += phi[k];
                row[slot[e.tail] + k] -= phi[k];
            }
            append_row(rows, std::move(row));
        }
    }
    for (size_t i = 0; i < curve.markings.size(); ++i) {
        const Edge& e = curve.edge(curve.markings[i]);
        if (e.contracted)
            throw EnumerationError(
                EnumerationError::Kind::DegenerateDirection,
                "marked edge " + e.id + " is contracted");
        std::vector<IntVec> gens{e.primitive_dir};
        gens.insert(gens.end(), cs.constraints[i].span.begin(),
                    cs.constraints[i].span.end());
        for (const IntVec& phi : annihilator_basis(gens, n)) {
            IntVec row(width, Int(0));
            for (size_t k = 0; k < n; ++k) row[slot[e.tail] + k] += phi[k];
            append_row(rows, std::move(row));
        }
    }
    IntMat M = IntMat::from_rows(rows, width);
    RatMat MR(M.rows, M.cols);
    for (size_t i = 0; i < M.rows; ++i)
        for (size_t j = 0; j < M.cols; ++j) MR.at(i, j) = Rat(M.at(i, j));
    if (rank(MR) < width)
        throw EnumerationError(EnumerationError::Kind::RankMismatch,
                               "constraints do not rigidify the curve");
    return smith_index(M);
}

MultiplicityReport lattice_multiplicity(const CurveAnalysis& analysis,
                                        const ConstraintSet& cs,
                                        unsigned seed) {
    (void)seed;
    const TropicalCurve& curve = analysis.curve;
    const size_t n = curve.ambient_rank;
    if (!analysis.image)
        throw EnumerationError(EnumerationError::Kind::BadConstraints,
                               "multiplicity needs Assumption A");
    check_constraint_shape(curve, cs);

    std::vector<MatchWitness> hits = match_constraints(curve, cs);
    for (size_t i = 0; i < hits.size(); ++i)
        if (!hits[i].met)
            throw EnumerationError(EnumerationError::Kind::BadConstraints,
                                   "marked edge " + curve.markings[i] +
                                       " misses its constraint");

    ObstructionBasis H = dual_obstruction_basis(analysis);
    const size_t genus = curve.genus();
    if (H.dimension > 0 && genus != 1)
        throw EnumerationError(EnumerationError::Kind::BadConstraints,
                               "obstructed multiplicities are computed for "
                               "genus one");

    // Declared codimension total against the rigidifying budget.
    long total_codim = 0;
    for (const AffineConstraint& a : cs.constraints)
        total_codim += a.codimension;
    long budget = (genus == 1)
                      ? static_cast<long>(curve.unbounded_count())
                      : expected_dimension(curve);

    // Tie functionals: adapted to the four-valent vertices per the merged
    // viewpoint (contributing four-valent vertices absorb dual directions).
    struct TieRow {
        std::string far1, far2;  // tied minimal image vertices
    };
    std::vector<TieRow> ties;
    std::vector<std::pair<std::string, std::string>> tied_pairs;
    if (H.dimension > 0) {
        const ImageCurve& img = *analysis.image;
        std::vector<IntVec> big_span;
        {
            const Bouquet& b = analysis.bouquets.bouquets.front();
            for (size_t ei : b.edges)
                big_span.push_back(curve.edges[ei].primitive_dir);
        }
        for (const ImageVertex& iv : img.vertices) {
            if (iv.valence != 4) continue;
            std::vector<size_t> distinct(iv.image_edges);
            std::sort(distinct.begin(), distinct.end());
            distinct.erase(std::unique(distinct.begin(), distinct.end()),
                           distinct.end());
            for (size_t j : distinct)
                big_span.push_back(img.edges[j].primitive_dir);
        }
        std::vector<IntVec> perp = annihilator_basis(big_span, n);
        for (const IntVec& phi : perp) {
            // Candidate vertices: image vertices whose incident directions
            // pair nontrivially with phi.
            std::vector<std::pair<Rat, std::string>> cands;
            for (const ImageVertex& iv : img.vertices) {
                bool pairs = false;
                for (size_t j : iv.image_edges)
                    if (dot(phi, img.edges[j].primitive_dir) != 0) {
                        pairs = true;
                        break;
                    }
                if (!pairs) continue;
                cands.emplace_back(
                    image_distance_to_loops(analysis, iv.id), iv.id);
            }
            if (cands.empty()) continue;  // no condition from this direction
            std::sort(cands.begin(), cands.end());
            size_t min_count = 1;
            while (min_count < cands.size() &&
                   cands[min_count].first == cands[0].first)
                ++min_count;
            if (min_count != 2)
                throw EnumerationError(
                    EnumerationError::Kind::NotGeneric,
                    "expected exactly two minimal tied vertices, found " +
                        std::to_string(min_count));
            ties.push_back({cands[0].second, cands[1].second});
            tied_pairs.emplace_back(cands[0].second, cands[1].second);
        }
        budget = static_cast<long>(
                     deformation_space(curve).dimension) -
                 static_cast<long>(ties.size());
    }
    if (total_codim != budget)
        throw EnumerationError(EnumerationError::Kind::BadConstraints,
                               "constraint codimension total " +
                                   std::to_string(total_codim) +
                                   " != required " + std::to_string(budget));

    WorkingCurve wc = build_working_curve(analysis, cs, hits);
    TropicalCurve W = validate_curve(wc.raw);

    std::map<std::string, size_t> slot;
    for (size_t i = 0; i < W.vertex_ids.size(); ++i)
        slot[W.vertex_ids[i]] = i * n;
    const size_t width = n * W.vertex_ids.size();

    std::vector<RatVec> rat_rows;
    auto int_row_to_rat = [&](const IntVec& r) {
        RatVec out;
        out.reserve(r.size());
        for (const Int& e : r) out.emplace_back(e);
        return out;
    };

    // Edge block.
    for (const Edge& e : W.edges) {
        if (!e.bounded) continue;
        std::vector<IntVec> quot = e.contracted
                                       ? annihilator_basis({}, n)
                                       : annihilator_basis({e.primitive_dir},
                                                           n);
        for (const IntVec& phi : quot) {
            IntVec row(width, Int(0));
            for (size_t k = 0; k < n; ++k) {
                row[slot[e.head] + k] += phi[k];
                row[slot[e.tail] + k] -= phi[k];
            }
            rat_rows.push_back(int_row_to_rat(row));
        }
    }
    // Constraint block: the divalent vertex is pinned modulo the saturated
    // constraint direction lattice.
    for (size_t i = 0; i < wc.constraint_vertex.size(); ++i) {
        for (const IntVec& phi :
             annihilator_basis(cs.constraints[i].span, n)) {
            IntVec row(width, Int(0));
            for (size_t k = 0; k < n; ++k)
                row[slot[wc.constraint_vertex[i]] + k] += phi[k];
            rat_rows.push_back(int_row_to_rat(row));
        }
    }
    // Twin pins.
    for (const auto& [twin, primary] : wc.pins) {
        for (size_t k = 0; k < n; ++k) {
            IntVec row(width, Int(0));
            row[slot[twin] + k] += 1;
            row[slot[primary] + k] -= 1;
            rat_rows.push_back(int_row_to_rat(row));
        }
    }
    // Tie-difference functionals.
    for (const TieRow& tie : ties) {
        RatVec row(width, Rat(0));
        for (int sign : {+1, -1}) {
            const std::string& start = sign > 0 ? tie.far1 : tie.far2;
            auto path = image_path_to_loops(analysis, start);
            for (size_t s = 0; s + 1 < path.size(); ++s) {
                const ImageCurve& img = *analysis.image;
                const ImageVertex& far =
                    img.vertices[img.vertex_index.at(path[s])];
                const ImageVertex& near =
                    img.vertices[img.vertex_index.at(path[s + 1])];
                RatVec disp = sub(far.position, near.position);
                IntVec u = primitive_part(disp);
                IntVec psi = unimodular_covector(u);
                // weight of the step: the image edge joining them
                Int wgt = 1;
                for (const ImageEdge& e : img.edges) {
                    if (!e.bounded) continue;
                    if ((e.tail == far.id && e.head == near.id) ||
                        (e.tail == near.id && e.head == far.id)) {
                        wgt = e.weights.front();
                        break;
                    }
                }
                for (size_t k = 0; k < n; ++k) {
                    Rat c = Rat(sign) * Rat(psi[k]) / Rat(wgt);
                    row[slot[far.members.front()] + k] += c;
                    row[slot[near.members.front()] + k] -= c;
                }
            }
        }
        rat_rows.push_back(std::move(row));
    }

    // Integrality of the assembled map.
    IntMat M(rat_rows.size(), width);
    for (size_t i = 0; i < rat_rows.size(); ++i)
        for (size_t j = 0; j < width; ++j) {
            if (rat_rows[i][j].get_den() != 1)
                throw EnumerationError(
                    EnumerationError::Kind::NotGeneric,
                    "tie functional is not integral; normalize edge lengths "
                    "to weight multiples");
            M.at(i, j) = rat_rows[i][j].get_num();
        }

    if (rank(RatMat::from_rows(rat_rows, width)) < width) {
        std::vector<IntVec> kernel =
            kernel_basis(RatMat::from_rows(rat_rows, width));
        throw EnumerationError(EnumerationError::Kind::RankMismatch,
                               "constraints do not rigidify: kernel has "
                               "dimension " +
                                   std::to_string(kernel.size()));
    }

    MultiplicityReport rep;
    rep.lattice_index_D = smith_index(M);
    rep.D_tilde = rep.lattice_index_D;
    for (size_t i = 0; i < curve.markings.size(); ++i) {
        rep.deltas.push_back(delta_factor(curve, cs, i));
        rep.D_tilde *= rep.deltas.back();
    }
    rep.marked_weight =
        weights_summary(curve, *analysis.image).total_marked_weight;
    rep.total = rep.marked_weight * rep.D_tilde;
    rep.obstruction_rank = ties.size();
    rep.tied_pairs = std::move(tied_pairs);
    return rep;
}

CountReport tropical_count(
    const std::vector<std::pair<std::string, CurveAnalysis>>& candidates,
    const ConstraintSet& cs, unsigned seed) {
    CountReport rep;
    for (const auto& [label, analysis] : candidates) {
        CountEntry entry;
        entry.label = label;
        try {
            entry.matched = matches(analysis.curve, cs);
            SmoothabilityVerdict v = smoothability_verdict(analysis, seed);
            entry.verdict = v.verdict;
            if (!entry.matched) {
                entry.note = "does not match the constraints";
            } else if (v.verdict != Verdict::SMOOTHABLE) {
                entry.note = "not smoothable; contributes zero";
            } else {
                MultiplicityReport m =
                    lattice_multiplicity(analysis, cs, seed);
                entry.contribution = m.total;
            }
        } catch (const EnumerationError& err) {
            entry.note = err.what();
        }
        rep.total += entry.contribution;
        rep.entries.push_back(std::move(entry));
    }
    return rep;
}

}  // namespace tropic
