#include "tropic/obstruction.hpp"

#include <algorithm>
#include <functional>

namespace tropic {

SegmentDecomposition segment_decomposition(const TropicalCurve& curve,
                                           const BouquetDecomposition& dec) {
    SegmentDecomposition out;
    for (size_t bi = 0; bi < dec.bouquets.size(); ++bi) {
        const Bouquet& b = dec.bouquets[bi];
        std::map<std::string, std::vector<size_t>> adj;
        for (size_t ei : b.edges) {
            const Edge& e = curve.edges[ei];
            adj[e.tail].push_back(ei);
            adj[e.head].push_back(ei);
        }
        for (auto& [v, lst] : adj) std::sort(lst.begin(), lst.end());
        std::set<std::string> cuts;
        for (const auto& [v, lst] : adj)
            if (lst.size() >= 3) cuts.insert(v);

        std::set<size_t> used;
        auto walk = [&](const std::string& start, size_t first_edge) {
            Segment s;
            s.bouquet = bi;
            s.vertices.push_back(start);
            std::string cur = start;
            size_t e = first_edge;
            while (true) {
                used.insert(e);
                s.edges.push_back(e);
                const Edge& E = curve.edges[e];
                cur = (E.tail == cur) ? E.head : E.tail;
                s.vertices.push_back(cur);
                if (cuts.count(cur)) break;
                size_t other = SIZE_MAX;
                for (size_t ej : adj[cur])
                    if (ej != e && !used.count(ej)) {
                        other = ej;
                        break;
                    }
                if (other == SIZE_MAX) break;
                e = other;
            }
            s.closed = s.vertices.front() == s.vertices.back();
            for (size_t ei : s.edges)
                s.span.push_back(curve.edges[ei].primitive_dir);
            s.perp = annihilator_basis(s.span, curve.ambient_rank);
            return s;
        };

        for (const std::string& v : cuts)
            for (size_t ei : adj[v])
                if (!used.count(ei)) out.segments.push_back(walk(v, ei));
        // Remaining pieces are full cycles of divalent vertices.
        for (const auto& [v, lst] : adj)
            for (size_t ei : lst)
                if (!used.count(ei)) out.segments.push_back(walk(v, ei));
    }
    for (size_t si = 0; si < out.segments.size(); ++si)
        for (size_t ei : out.segments[si].edges) out.segment_of_edge[ei] = si;
    return out;
}

ObstructionBasis dual_obstruction_basis(const CurveAnalysis& analysis) {
    const TropicalCurve& curve = analysis.curve;
    if (!analysis.profile.a_ok)
        throw CurveError(CurveErrc::AssumptionA,
                         "dual obstruction space requires Assumption A");

    ObstructionBasis out;
    out.segments = segment_decomposition(curve, analysis.bouquets);
    const size_t n = curve.ambient_rank;
    const auto& segs = out.segments.segments;

    std::vector<size_t> offset(segs.size() + 1, 0);
    for (size_t m = 0; m < segs.size(); ++m)
        offset[m + 1] = offset[m] + segs[m].perp.size();
    const size_t width = offset.back();
    if (width == 0) {
        out.dimension = 0;
        return out;
    }

    // Constraint rows: at every trivalent-in-loop vertex, the incident
    // segment-end covectors sum to zero (n scalar rows per vertex).
    std::map<std::string, size_t> row_of_vertex;
    std::vector<std::string> constraint_vertices;
    {
        std::map<std::string, size_t> ldeg;
        for (size_t ei : analysis.bouquets.loop_edges) {
            ldeg[curve.edges[ei].tail]++;
            ldeg[curve.edges[ei].head]++;
        }
        for (const auto& [v, d] : ldeg)
            if (d >= 3) {
                row_of_vertex[v] = constraint_vertices.size();
                constraint_vertices.push_back(v);
            }
    }

    std::vector<RatVec> rows(constraint_vertices.size() * n,
                             RatVec(width, Rat(0)));
    auto add_end = [&](size_t m, const std::string& v, int sign) {
        auto it = row_of_vertex.find(v);
        if (it == row_of_vertex.end()) return;
        for (size_t j = 0; j < segs[m].perp.size(); ++j)
            for (size_t k = 0; k < n; ++k)
                rows[it->second * n + k][offset[m] + j] +=
                    Rat(sign) * Rat(segs[m].perp[j][k]);
    };
    for (size_t m = 0; m < segs.size(); ++m) {
        add_end(m, segs[m].vertices.front(), +1);
        add_end(m, segs[m].vertices.back(), -1);
    }

    std::vector<IntVec> coeffs =
        kernel_basis(RatMat::from_rows(rows, width));
    for (const IntVec& c : coeffs) {
        ObstructionVector vec;
        vec.covectors.assign(segs.size(), IntVec(n, Int(0)));
        for (size_t m = 0; m < segs.size(); ++m)
            for (size_t j = 0; j < segs[m].perp.size(); ++j)
                vec.covectors[m] =
                    add(vec.covectors[m],
                        scaled(segs[m].perp[j], c[offset[m] + j]));
        bool constant = true;
        std::optional<IntVec> global;
        for (const IntVec& u : vec.covectors) {
            if (is_zero(u)) continue;
            if (!global)
                global = u;
            else if (*global != u)
                constant = false;
        }
        if (constant && global) vec.global = global;
        out.basis.push_back(std::move(vec));
    }
    out.dimension = out.basis.size();
    return out;
}

TrivalentGraph abstract_graph(const TropicalCurve& curve) {
    TrivalentGraph g;
    std::map<std::string, size_t> index;
    for (const auto& v : curve.vertex_ids) {
        index[v] = g.n_vertices++;
        g.stubs.push_back(0);
    }
    for (const Edge& e : curve.edges) {
        if (e.bounded)
            g.bounded_edges.emplace_back(index[e.tail], index[e.head]);
        else
            g.stubs[index[e.tail]]++;
    }
    return g;
}

size_t compatible_numbering_dim(const TrivalentGraph& graph) {
    std::vector<size_t> degree(graph.n_vertices, 0);
    for (const auto& [a, b] : graph.bounded_edges) {
        degree[a]++;
        degree[b]++;
    }
    for (size_t v = 0; v < graph.n_vertices; ++v)
        if (degree[v] + graph.stubs[v] != 3)
            throw CurveError(CurveErrc::NotTrivalent,
                             "graph vertex " + std::to_string(v) +
                                 " is not trivalent");

    // Connectivity over bounded edges.
    if (graph.n_vertices > 0) {
        std::vector<char> seen(graph.n_vertices, 0);
        std::vector<size_t> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            size_t v = stack.back();
            stack.pop_back();
            for (const auto& [a, b] : graph.bounded_edges) {
                if (a == v && !seen[b]) {
                    seen[b] = 1;
                    stack.push_back(b);
                }
                if (b == v && !seen[a]) {
                    seen[a] = 1;
                    stack.push_back(a);
                }
            }
        }
        for (char s : seen)
            if (!s)
                throw CurveError(CurveErrc::Disconnected,
                                 "graph is disconnected");
    }

    // Unknowns: one value per bounded-edge flag.
    const size_t width = 2 * graph.bounded_edges.size();
    if (width == 0) return 0;
    std::vector<RatVec> rows;
    for (size_t e = 0; e < graph.bounded_edges.size(); ++e) {
        RatVec row(width, Rat(0));
        row[2 * e] = 1;
        row[2 * e + 1] = 1;
        rows.push_back(std::move(row));
    }
    for (size_t v = 0; v < graph.n_vertices; ++v) {
        RatVec row(width, Rat(0));
        for (size_t e = 0; e < graph.bounded_edges.size(); ++e) {
            if (graph.bounded_edges[e].first == v) row[2 * e] += 1;
            if (graph.bounded_edges[e].second == v) row[2 * e + 1] += 1;
        }
        rows.push_back(std::move(row));
    }
    return kernel_basis(RatMat::from_rows(rows, width)).size();
}

std::vector<RatVec> combine(const ObstructionBasis& basis,
                            const std::vector<Rat>& coefficients) {
    const size_t nseg = basis.segments.segments.size();
    size_t n = 0;
    for (const auto& s : basis.segments.segments)
        if (!s.span.empty()) n = s.span.front().size();
    std::vector<RatVec> out(nseg, RatVec(n, Rat(0)));
    for (size_t i = 0; i < basis.basis.size(); ++i)
        for (size_t m = 0; m < nseg; ++m)
            out[m] = add(out[m], scaled(to_rat_vec(basis.basis[i].covectors[m]),
                                        coefficients[i]));
    return out;
}

SupportSet support_of(const ObstructionBasis& basis,
                      const std::vector<Rat>& coefficients,
                      const TropicalCurve& curve) {
    SupportSet out;
    std::vector<RatVec> cov = combine(basis, coefficients);
    std::map<std::string, size_t> incident_count;
    for (size_t m = 0; m < cov.size(); ++m) {
        if (is_zero(cov[m])) continue;
        out.segments.push_back(m);
        for (size_t ei : basis.segments.segments[m].edges) {
            incident_count[curve.edges[ei].tail]++;
            incident_count[curve.edges[ei].head]++;
        }
    }
    out.closure_ok = true;
    for (const auto& [v, c] : incident_count)
        if (c < 2) out.closure_ok = false;
    return out;
}

}  // namespace tropic
