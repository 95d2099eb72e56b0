#include "tropic/image.hpp"

#include <algorithm>
#include <functional>

namespace tropic {

std::string to_string(VertexClass c) {
    switch (c) {
        case VertexClass::TRIVALENT: return "TRIVALENT";
        case VertexClass::EXAMPLE1: return "EXAMPLE1";
        case VertexClass::EXAMPLE2: return "EXAMPLE2";
        case VertexClass::OTHER: return "OTHER";
    }
    return "OTHER";
}

namespace {

struct Geometric {
    // p + s*d for s in [0, len] (bounded) or [0, inf) (ray)
    RatVec base;
    IntVec dir;  // primitive
    Rat len;     // bounded only
    bool bounded = true;
};

Geometric geometry_of(const TropicalCurve& c, const Edge& e) {
    Geometric g;
    g.base = c.pos(e.tail);
    g.dir = e.primitive_dir;
    g.bounded = e.bounded;
    if (e.bounded) g.len = e.integral_length;
    return g;
}

bool parallel(const IntVec& a, const IntVec& b) {
    return a == b || a == negated(b);
}

// Parameter of point q on the line base + s*dir, or nullopt if off-line.
std::optional<Rat> line_param(const Geometric& g, const RatVec& q) {
    RatVec diff = sub(q, g.base);
    size_t k = 0;
    while (k < g.dir.size() && g.dir[k] == 0) {
        if (diff[k] != 0) return std::nullopt;
        ++k;
    }
    if (k == g.dir.size()) return std::nullopt;
    Rat s = diff[k] / Rat(g.dir[k]);
    for (size_t i = 0; i < g.dir.size(); ++i)
        if (diff[i] != s * Rat(g.dir[i])) return std::nullopt;
    return s;
}

bool param_in_closed(const Geometric& g, const Rat& s) {
    if (s < 0) return false;
    return g.bounded ? s <= g.len : true;
}

bool param_in_interior(const Geometric& g, const Rat& s) {
    if (s <= 0) return false;
    return g.bounded ? s < g.len : true;
}

// True when the interiors overlap illegally; identical merged rays allowed.
bool overlap_violation(const Geometric& a, const Geometric& b) {
    if (parallel(a.dir, b.dir)) {
        auto t0 = line_param(a, b.base);
        if (!t0) return false;  // parallel, different lines
        if (!a.bounded && !b.bounded && a.dir == b.dir && *t0 == 0)
            return false;  // identical rays: merged edge, legal
        // Interval of b on a's parameter line.
        bool same_orientation = (a.dir == b.dir);
        Rat lo = *t0;
        std::optional<Rat> hi;
        if (b.bounded) {
            Rat other = same_orientation ? Rat(*t0 + b.len)
                                         : Rat(*t0 - b.len);
            lo = std::min(lo, other);
            hi = std::max(*t0, other);
        } else if (same_orientation) {
            hi = std::nullopt;  // [t0, inf)
        } else {
            hi = lo;            // (-inf, t0]
            lo = Rat(0);        // placeholder, handled below
        }
        // Compute open intersection of a's [0, len_a] with b's interval.
        Rat a_lo = 0;
        std::optional<Rat> a_hi =
            a.bounded ? std::optional<Rat>(a.len) : std::nullopt;
        std::optional<Rat> b_lo, b_hi;
        if (b.bounded) {
            b_lo = lo;
            b_hi = hi;
        } else if (same_orientation) {
            b_lo = *t0;
            b_hi = std::nullopt;
        } else {
            b_lo = std::nullopt;
            b_hi = *t0;
        }
        Rat max_lo = a_lo;
        if (b_lo && *b_lo > max_lo) max_lo = *b_lo;
        std::optional<Rat> min_hi = a_hi;
        if (b_hi && (!min_hi || *b_hi < *min_hi)) min_hi = b_hi;
        if (!min_hi) return true;  // unbounded overlap
        return max_lo < *min_hi;   // positive-length overlap
    }
    // Skew case: solve a.base + s a.dir = b.base + t b.dir.
    RatVec rhs = sub(b.base, a.base);
    size_t n = a.dir.size();
    RatMat M(n, 2);
    for (size_t i = 0; i < n; ++i) {
        M.at(i, 0) = Rat(a.dir[i]);
        M.at(i, 1) = Rat(-b.dir[i]);
    }
    auto sol = solve(M, rhs);
    if (!sol) return false;
    const Rat& s = (*sol)[0];
    const Rat& t = (*sol)[1];
    if (!param_in_closed(a, s) || !param_in_closed(b, t)) return false;
    return param_in_interior(a, s) || param_in_interior(b, t);
}

// Components of the contracted-edge subgraph; singleton for plain vertices.
std::map<std::string, std::string> contracted_components(
    const TropicalCurve& c) {
    std::map<std::string, std::string> rep;
    std::function<const std::string&(const std::string&)> find =
        [&](const std::string& v) -> const std::string& {
        auto it = rep.find(v);
        if (it == rep.end()) {
            rep[v] = v;
            return rep.find(v)->second;
        }
        if (it->second == v) return it->second;
        const std::string& r = find(it->second);
        rep[v] = r;
        return rep.find(v)->second;
    };
    auto unite = [&](const std::string& a, const std::string& b) {
        std::string ra = find(a), rb = find(b);
        if (ra == rb) return;
        if (rb < ra) std::swap(ra, rb);
        rep[rb] = ra;
    };
    for (const auto& v : c.vertex_ids) find(v);
    for (const Edge& e : c.edges)
        if (e.bounded && e.contracted) unite(e.tail, e.head);
    std::map<std::string, std::string> out;
    for (const auto& v : c.vertex_ids) out[v] = find(v);
    return out;
}

std::vector<AssumptionWitness> check_assumption_a(
    const TropicalCurve& c, const BouquetDecomposition& dec) {
    std::vector<AssumptionWitness> bad;

    // Loop-local trivalence; every vertex at least trivalent.
    for (const auto& v : c.vertex_ids) {
        size_t val = c.flags_at(v).size();
        if (val < 3)
            bad.push_back({'i', "vertex " + v + " has valence " +
                                    std::to_string(val)});
        else if (val > 3 && dec.loop_vertices.count(v))
            bad.push_back({'i', "loop vertex " + v + " is not trivalent"});
    }

    // (ii) contracted edges keep away from the loops.
    for (size_t ei = 0; ei < c.edges.size(); ++ei) {
        const Edge& e = c.edges[ei];
        if (!e.bounded || !e.contracted) continue;
        if (dec.loop_edges.count(ei) || dec.loop_vertices.count(e.tail) ||
            dec.loop_vertices.count(e.head))
            bad.push_back({'2', "contracted edge " + e.id +
                                    " touches the loops"});
    }

    // (iii) equal-image vertices are joined by contracted paths.
    auto comp = contracted_components(c);
    std::map<RatVec, std::string> first_rep;
    for (const auto& v : c.vertex_ids) {
        auto [it, fresh] = first_rep.emplace(c.pos(v), comp.at(v));
        if (!fresh && it->second != comp.at(v))
            bad.push_back({'3', "vertices " + v +
                                    " and another share an image without a "
                                    "contracted path"});
    }

    // (iv) for n >= 3: no edge-interior overlaps.
    if (c.ambient_rank >= 3) {
        std::vector<size_t> real_edges;
        for (size_t ei = 0; ei < c.edges.size(); ++ei)
            if (!c.edges[ei].contracted) real_edges.push_back(ei);
        for (size_t a = 0; a < real_edges.size(); ++a) {
            Geometric ga = geometry_of(c, c.edges[real_edges[a]]);
            for (size_t b = a + 1; b < real_edges.size(); ++b) {
                Geometric gb = geometry_of(c, c.edges[real_edges[b]]);
                if (overlap_violation(ga, gb))
                    bad.push_back({'4', "edges " + c.edges[real_edges[a]].id +
                                            " and " +
                                            c.edges[real_edges[b]].id +
                                            " overlap"});
            }
            // No vertex may sit in an open edge interior.
            for (const auto& v : c.vertex_ids) {
                auto s = line_param(ga, c.pos(v));
                if (s && param_in_interior(ga, *s))
                    bad.push_back({'4', "vertex " + v + " lies inside edge " +
                                            c.edges[real_edges[a]].id});
            }
        }
    }
    return bad;
}

}  // namespace

ImageCurve image_curve(const TropicalCurve& curve,
                       const BouquetDecomposition& dec) {
    auto witnesses = check_assumption_a(curve, dec);
    if (!witnesses.empty())
        throw CurveError(CurveErrc::AssumptionA,
                         "Assumption A violated (clause " +
                             std::string(1, witnesses.front().clause) +
                             "): " + witnesses.front().detail);

    ImageCurve img;
    auto comp = contracted_components(curve);

    // Image vertices = contracted components.
    std::map<std::string, std::vector<std::string>> groups;
    for (const auto& v : curve.vertex_ids) groups[comp.at(v)].push_back(v);
    for (auto& [repv, members] : groups) {
        ImageVertex iv;
        iv.id = repv;
        iv.position = curve.pos(repv);
        std::sort(members.begin(), members.end());
        iv.members = members;
        img.vertex_index[iv.id] = img.vertices.size();
        for (const auto& m : members) img.vertex_of[m] = img.vertices.size();
        img.vertices.push_back(std::move(iv));
    }

    // Image edges grouped by geometric image.
    struct Key {
        bool bounded;
        RatVec a;  // smaller endpoint (bounded) or base (ray)
        RatVec b;  // larger endpoint; empty for rays
        IntVec dir;

        bool operator<(const Key& o) const {
            if (bounded != o.bounded) return bounded < o.bounded;
            if (a != o.a) return a < o.a;
            if (b != o.b) return b < o.b;
            return dir < o.dir;
        }
    };
    std::map<Key, std::vector<size_t>> edge_groups;
    for (size_t ei = 0; ei < curve.edges.size(); ++ei) {
        const Edge& e = curve.edges[ei];
        if (e.contracted) continue;
        Key k;
        k.bounded = e.bounded;
        if (e.bounded) {
            RatVec p = curve.pos(e.tail), q = curve.pos(e.head);
            if (q < p) std::swap(p, q);
            k.a = p;
            k.b = q;
            RatVec disp = sub(k.b, k.a);
            k.dir = primitive_part(disp);
        } else {
            k.a = curve.pos(e.tail);
            k.dir = e.primitive_dir;
        }
        edge_groups[k].push_back(ei);
    }

    for (const auto& [key, members] : edge_groups) {
        ImageEdge ie;
        ie.bounded = key.bounded;
        ie.primitive_dir = key.dir;
        std::vector<std::string> ids;
        for (size_t ei : members) {
            const Edge& e = curve.edges[ei];
            ids.push_back(e.id);
            ie.weights.push_back(e.weight);
        }
        std::sort(ids.begin(), ids.end());
        std::sort(ie.weights.begin(), ie.weights.end());
        ie.id = ids.front();
        ie.members = ids;
        for (const Int& w : ie.weights) {
            ie.additive_weight += w;
            ie.multiplicative_weight *= w;
        }
        const Edge& first = curve.edge(ie.members.front());
        if (key.bounded) {
            // Canonical orientation: from the lexicographically smaller
            // image-vertex position (key.a side).
            const std::string& t = (curve.pos(first.tail) == key.a)
                                       ? first.tail
                                       : first.head;
            const std::string& h = (t == first.tail) ? first.head : first.tail;
            ie.tail = img.vertices[img.vertex_of.at(t)].id;
            ie.head = img.vertices[img.vertex_of.at(h)].id;
            ie.integral_length = first.integral_length;
        } else {
            ie.tail = img.vertices[img.vertex_of.at(first.tail)].id;
        }
        img.edges.push_back(std::move(ie));
    }
    std::sort(img.edges.begin(), img.edges.end(),
              [](const ImageEdge& a, const ImageEdge& b) {
                  return a.id < b.id;
              });
    for (size_t j = 0; j < img.edges.size(); ++j)
        for (const auto& m : img.edges[j].members) img.edge_of[m] = j;

    // Valences and incidences: count non-contracted flags per image vertex.
    for (auto& iv : img.vertices) {
        for (const auto& m : iv.members) {
            for (const Flag& f : curve.flags_at(m)) {
                if (f.contracted) continue;
                ++iv.valence;
                iv.image_edges.push_back(
                    img.edge_of.at(curve.edges[f.edge].id));
            }
        }
        std::sort(iv.image_edges.begin(), iv.image_edges.end());
        std::vector<size_t> uniq(iv.image_edges);
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        size_t distinct = uniq.size();

        if (iv.valence == 3)
            iv.cls = VertexClass::TRIVALENT;
        else if (iv.valence == 4 && distinct == 3)
            iv.cls = VertexClass::EXAMPLE1;
        else if (iv.valence == 4 && distinct == 4)
            iv.cls = VertexClass::EXAMPLE2;
        else
            iv.cls = VertexClass::OTHER;
    }
    return img;
}

AssumptionProfile assumption_profile(const TropicalCurve& curve,
                                     const BouquetDecomposition& dec) {
    AssumptionProfile p;
    p.trivalent_domain = curve.trivalent();
    p.witnesses = check_assumption_a(curve, dec);
    p.a_ok = p.witnesses.empty();
    if (!p.a_ok) {
        p.c_ok = false;
        return p;
    }
    ImageCurve img = image_curve(curve, dec);
    p.c_ok = true;
    for (const auto& iv : img.vertices) {
        if (iv.valence >= 4) p.vertex_classes[iv.id] = iv.cls;
        if (iv.valence > 4 || iv.cls == VertexClass::OTHER) p.c_ok = false;
    }
    return p;
}

WeightsSummary weights_summary(const TropicalCurve& curve,
                               const ImageCurve& image) {
    WeightsSummary w;
    for (const ImageEdge& e : image.edges)
        if (e.bounded) w.total_inner_weight *= e.multiplicative_weight;
    w.total_marked_weight = w.total_inner_weight;
    for (const std::string& m : curve.markings)
        w.total_marked_weight *= curve.edge(m).weight;
    return w;
}

CurveAnalysis CurveAnalysis::of(TropicalCurve curve) {
    CurveAnalysis a{std::move(curve), {}, {}, std::nullopt};
    a.bouquets = bouquet_decomposition(a.curve);
    a.profile = assumption_profile(a.curve, a.bouquets);
    if (a.profile.a_ok) a.image = image_curve(a.curve, a.bouquets);
    return a;
}

}  // namespace tropic
