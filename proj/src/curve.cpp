#include "tropic/curve.hpp"

#include <algorithm>
#include <functional>

namespace tropic {

std::vector<Flag> TropicalCurve::flags_at(const std::string& v) const {
    std::vector<Flag> out;
    auto it = incident.find(v);
    if (it == incident.end()) return out;
    std::vector<size_t> unique_edges(it->second);
    std::sort(unique_edges.begin(), unique_edges.end());
    unique_edges.erase(
        std::unique(unique_edges.begin(), unique_edges.end()),
        unique_edges.end());
    for (size_t ei : unique_edges) {
        const Edge& e = edges[ei];
        auto emit = [&](bool forward) {
            Flag f;
            f.vertex = v;
            f.edge = ei;
            f.contracted = e.contracted;
            if (!e.contracted)
                f.direction = forward ? e.primitive_dir
                                      : negated(e.primitive_dir);
            out.push_back(std::move(f));
        };
        if (!e.bounded) {
            emit(true);
        } else {
            if (e.tail == v) emit(true);
            if (e.head == v) emit(false);
        }
    }
    return out;
}

bool TropicalCurve::trivalent() const {
    for (const auto& v : vertex_ids)
        if (flags_at(v).size() != 3) return false;
    return true;
}

size_t TropicalCurve::genus() const {
    size_t bounded = 0;
    for (const Edge& e : edges)
        if (e.bounded) ++bounded;
    return bounded + 1 - vertex_ids.size();
}

size_t TropicalCurve::unbounded_count() const {
    size_t n = 0;
    for (const Edge& e : edges)
        if (!e.bounded) ++n;
    return n;
}

TropicalCurve validate_curve(const RawCurve& raw) {
    TropicalCurve c;
    c.ambient_rank = raw.ambient_rank;
    if (raw.ambient_rank < 2)
        throw CurveError(CurveErrc::DanglingReference,
                         "ambient rank must be at least 2");

    for (const auto& [id, p] : raw.vertices) {
        if (c.position.count(id))
            throw CurveError(CurveErrc::DanglingReference,
                             "duplicate vertex id: " + id, id);
        if (p.size() != raw.ambient_rank)
            throw CurveError(CurveErrc::DanglingReference,
                             "vertex " + id + " has wrong position length",
                             id);
        c.position[id] = p;
        c.vertex_ids.push_back(id);
        c.incident[id];  // ensure an entry even for isolated vertices
    }
    std::sort(c.vertex_ids.begin(), c.vertex_ids.end());
    if (c.vertex_ids.empty())
        throw CurveError(CurveErrc::DanglingReference, "curve has no vertices");

    std::vector<RawEdge> sorted_edges = raw.edges;
    std::sort(sorted_edges.begin(), sorted_edges.end(),
              [](const RawEdge& a, const RawEdge& b) { return a.id < b.id; });

    for (const RawEdge& re : sorted_edges) {
        if (c.edge_index.count(re.id))
            throw CurveError(CurveErrc::DanglingReference,
                             "duplicate edge id: " + re.id, re.id);
        if (re.weight < 1)
            throw CurveError(CurveErrc::InvalidWeight,
                             "edge " + re.id + " has weight < 1", re.id);
        if (!c.position.count(re.v1) ||
            (re.bounded && !c.position.count(re.v2)))
            throw CurveError(CurveErrc::DanglingReference,
                             "edge " + re.id + " references unknown vertex",
                             re.id);

        Edge e;
        e.id = re.id;
        e.bounded = re.bounded;
        e.weight = re.weight;
        e.tail = re.v1;
        if (re.bounded) {
            e.head = re.v2;
            RatVec disp = sub(c.pos(re.v2), c.pos(re.v1));
            if (is_zero(disp)) {
                e.contracted = true;
            } else {
                e.primitive_dir = primitive_part(disp);
                // length along the primitive direction
                for (size_t i = 0; i < disp.size(); ++i) {
                    if (e.primitive_dir[i] != 0) {
                        e.integral_length =
                            disp[i] / Rat(e.primitive_dir[i]);
                        break;
                    }
                }
            }
        } else {
            if (re.direction.size() != raw.ambient_rank)
                throw CurveError(CurveErrc::DanglingReference,
                                 "edge " + re.id + " direction length", re.id);
            if (is_zero(re.direction))
                throw CurveError(CurveErrc::ContractedUnbounded,
                                 "unbounded edge " + re.id +
                                     " has zero direction",
                                 re.id);
            e.primitive_dir = primitive_vector(re.direction);
        }
        c.edge_index[e.id] = c.edges.size();
        c.incident[e.tail].push_back(c.edges.size());
        if (e.bounded && e.head != e.tail)
            c.incident[e.head].push_back(c.edges.size());
        else if (e.bounded && e.head == e.tail)
            c.incident[e.tail].push_back(c.edges.size());
        c.edges.push_back(std::move(e));
    }

    for (const std::string& m : raw.markings) {
        if (!c.edge_index.count(m))
            throw CurveError(CurveErrc::DanglingReference,
                             "marking references unknown edge " + m, m);
        c.markings.push_back(m);
    }

    // Connectivity of (vertices, bounded edges).
    std::map<std::string, int> comp;
    std::function<void(const std::string&)> dfs = [&](const std::string& v) {
        comp[v] = 1;
        for (size_t ei : c.incident.at(v)) {
            const Edge& e = c.edges[ei];
            if (!e.bounded) continue;
            const std::string& other = (e.tail == v) ? e.head : e.tail;
            if (!comp.count(other)) dfs(other);
        }
    };
    dfs(c.vertex_ids.front());
    for (const auto& v : c.vertex_ids)
        if (!comp.count(v))
            throw CurveError(CurveErrc::Disconnected,
                             "curve is disconnected at vertex " + v, v);

    // Balancing at every vertex over non-contracted flags.
    for (const auto& v : c.vertex_ids) {
        IntVec residual(c.ambient_rank, Int(0));
        for (const Flag& f : c.flags_at(v)) {
            if (f.contracted) continue;
            residual = add(residual, scaled(f.direction,
                                            c.edges[f.edge].weight));
        }
        if (!is_zero(residual)) {
            std::string rs = "(";
            for (size_t i = 0; i < residual.size(); ++i) {
                if (i) rs += ",";
                rs += residual[i].get_str();
            }
            rs += ")";
            throw CurveError(CurveErrc::Unbalanced,
                             "vertex " + v + " unbalanced, residual " + rs,
                             v + " " + rs);
        }
    }
    return c;
}

std::map<IntVec, Int> degree_map(const TropicalCurve& curve) {
    std::map<IntVec, Int> deg;
    for (const Edge& e : curve.edges) {
        if (e.bounded) continue;
        deg[scaled(e.primitive_dir, e.weight)] += 1;
    }
    return deg;
}

namespace {

// Non-bridge bounded edges via DFS lowlink on the bounded multigraph.
std::set<size_t> non_bridge_edges(const TropicalCurve& c) {
    std::map<std::string, int> num;
    std::map<std::string, int> low;
    std::set<size_t> bridges;
    int counter = 0;

    std::function<void(const std::string&, long)> dfs =
        [&](const std::string& v, long via_edge) {
            num[v] = low[v] = counter++;
            for (size_t ei : c.incident.at(v)) {
                const Edge& e = c.edges[ei];
                if (!e.bounded) continue;
                if (e.tail == e.head) continue;  // self-loop: never a bridge
                if (static_cast<long>(ei) == via_edge) {
                    via_edge = -1;  // skip the tree edge once (multi-edges)
                    continue;
                }
                const std::string& w = (e.tail == v) ? e.head : e.tail;
                if (!num.count(w)) {
                    dfs(w, static_cast<long>(ei));
                    low[v] = std::min(low[v], low[w]);
                    if (low[w] > num[v]) bridges.insert(ei);
                } else {
                    low[v] = std::min(low[v], num[w]);
                }
            }
        };
    for (const auto& v : c.vertex_ids)
        if (!num.count(v)) dfs(v, -1);

    std::set<size_t> loops;
    for (size_t ei = 0; ei < c.edges.size(); ++ei) {
        const Edge& e = c.edges[ei];
        if (!e.bounded) continue;
        if (e.tail == e.head || !bridges.count(ei)) loops.insert(ei);
    }
    return loops;
}

std::vector<ComplementComponent> components_avoiding(
    const TropicalCurve& c, const std::set<size_t>& excluded,
    const std::set<std::string>& excluded_vertex_anchor) {
    std::vector<ComplementComponent> out;
    std::set<size_t> seen_edges;
    for (size_t start = 0; start < c.edges.size(); ++start) {
        if (excluded.count(start) || seen_edges.count(start)) continue;
        ComplementComponent comp;
        std::vector<size_t> stack{start};
        seen_edges.insert(start);
        while (!stack.empty()) {
            size_t ei = stack.back();
            stack.pop_back();
            comp.edges.push_back(ei);
            const Edge& e = c.edges[ei];
            std::vector<std::string> ends{e.tail};
            if (e.bounded) ends.push_back(e.head);
            for (const std::string& v : ends) {
                comp.vertices.insert(v);
                // Loop vertices are walls: the component does not continue
                // through them.
                if (excluded_vertex_anchor.count(v)) continue;
                for (size_t nj : c.incident.at(v)) {
                    if (excluded.count(nj) || seen_edges.count(nj)) continue;
                    seen_edges.insert(nj);
                    stack.push_back(nj);
                }
            }
        }
        std::sort(comp.edges.begin(), comp.edges.end());
        for (const std::string& v : comp.vertices)
            if (excluded_vertex_anchor.count(v))
                comp.attachments.push_back(v);
        out.push_back(std::move(comp));
    }
    return out;
}

}  // namespace

BouquetDecomposition bouquet_decomposition(const TropicalCurve& curve) {
    BouquetDecomposition dec;
    dec.loop_edges = non_bridge_edges(curve);
    for (size_t ei : dec.loop_edges) {
        dec.loop_vertices.insert(curve.edges[ei].tail);
        dec.loop_vertices.insert(curve.edges[ei].head);
    }

    // Bouquets: components of the loop-edge subgraph.
    std::set<size_t> seen;
    for (size_t start : dec.loop_edges) {
        if (seen.count(start)) continue;
        Bouquet b;
        std::vector<size_t> stack{start};
        seen.insert(start);
        while (!stack.empty()) {
            size_t ei = stack.back();
            stack.pop_back();
            b.edges.push_back(ei);
            const Edge& e = curve.edges[ei];
            for (const std::string& v : {e.tail, e.head}) {
                b.vertices.insert(v);
                for (size_t nj : curve.incident.at(v)) {
                    if (!dec.loop_edges.count(nj) || seen.count(nj)) continue;
                    seen.insert(nj);
                    stack.push_back(nj);
                }
            }
        }
        std::sort(b.edges.begin(), b.edges.end());
        b.betti = b.edges.size() + 1 - b.vertices.size();
        dec.bouquets.push_back(std::move(b));
    }
    std::sort(dec.bouquets.begin(), dec.bouquets.end(),
              [](const Bouquet& a, const Bouquet& b) {
                  return a.edges.front() < b.edges.front();
              });

    dec.complement =
        components_avoiding(curve, dec.loop_edges, dec.loop_vertices);
    return dec;
}

std::vector<ComplementComponent> complement_of_bouquet(
    const TropicalCurve& curve, const BouquetDecomposition& dec,
    size_t bouquet_index) {
    const Bouquet& b = dec.bouquets[bouquet_index];
    std::set<size_t> excluded(b.edges.begin(), b.edges.end());
    std::set<std::string> anchors(b.vertices.begin(), b.vertices.end());
    return components_avoiding(curve, excluded, anchors);
}

}  // namespace tropic
