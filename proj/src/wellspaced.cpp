#include "tropic/wellspaced.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>

namespace tropic {

std::string to_string(WitnessBranch b) {
    switch (b) {
        case WitnessBranch::TWO_MINIMA: return "TWO_MINIMA";
        case WitnessBranch::FOUR_VALENT_EXCEPTION:
            return "FOUR_VALENT_EXCEPTION";
        case WitnessBranch::FAIL: return "FAIL";
    }
    return "FAIL";
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::SMOOTHABLE: return "SMOOTHABLE";
        case Verdict::NOT_SMOOTHABLE: return "NOT_SMOOTHABLE";
        case Verdict::UNDETERMINED: return "UNDETERMINED";
    }
    return "UNDETERMINED";
}

std::string to_string(TheoremTag t) {
    switch (t) {
        case TheoremTag::NONE: return "NONE";
        case TheoremTag::NON_SUPERABUNDANT: return "NON_SUPERABUNDANT";
        case TheoremTag::K_ZERO: return "K_ZERO";
        case TheoremTag::THM_IMMERSIVE: return "THM_IMMERSIVE";
        case TheoremTag::THM_GENERAL: return "THM_GENERAL";
        case TheoremTag::EXT_UNIQUE_BOUQUET: return "EXT_UNIQUE_BOUQUET";
    }
    return "NONE";
}

unsigned default_seed() {
    if (const char* env = std::getenv("TROPIC_SEED")) {
        char* end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (end && *end == '\0') return static_cast<unsigned>(v);
    }
    return 1;
}

namespace {

// Bounded image edges incident to each image vertex.
std::map<std::string, std::vector<size_t>> bounded_adjacency(
    const ImageCurve& img) {
    std::map<std::string, std::vector<size_t>> adj;
    for (size_t j = 0; j < img.edges.size(); ++j) {
        const ImageEdge& e = img.edges[j];
        if (!e.bounded) continue;
        adj[e.tail].push_back(j);
        adj[e.head].push_back(j);
    }
    return adj;
}

Rat normalized_length(const ImageEdge& e) {
    return e.integral_length / Rat(e.weights.front());
}

}  // namespace

PathLengthResult path_length(const ImageCurve& image,
                             const std::vector<std::string>& vertex_path) {
    PathLengthResult out;
    if (vertex_path.size() < 2)
        return out;
    for (size_t i = 0; i + 1 < vertex_path.size(); ++i) {
        const std::string& a = vertex_path[i];
        const std::string& b = vertex_path[i + 1];
        const ImageEdge* found = nullptr;
        for (const ImageEdge& e : image.edges) {
            if (!e.bounded) continue;
            if ((e.tail == a && e.head == b) ||
                (e.tail == b && e.head == a)) {
                found = &e;
                break;
            }
        }
        if (!found)
            throw CurveError(CurveErrc::NotAPath,
                             "no image edge joins " + a + " and " + b);
        PathStep step;
        step.edge_id = found->id;
        step.integral_length = found->integral_length;
        step.weight = found->weights.front();
        step.normalized = normalized_length(*found);
        step.integral = step.normalized.get_den() == 1;
        out.total += step.normalized;
        out.integral = out.integral && step.integral;
        out.steps.push_back(std::move(step));
    }
    return out;
}

namespace {

struct SpanTester {
    RatVec base;
    std::vector<IntVec> basis;  // saturated lattice basis

    bool contains_dir(const IntVec& d) const { return in_span(d, basis); }
    bool contains_point(const RatVec& p) const {
        return in_span(sub(p, base), basis);
    }
    size_t dim() const { return basis.size(); }
};

SpanTester loop_span(const CurveAnalysis& analysis, const Bouquet& b) {
    SpanTester t;
    const TropicalCurve& c = analysis.curve;
    t.base = c.pos(*b.vertices.begin());
    std::vector<IntVec> dirs;
    for (size_t ei : b.edges) dirs.push_back(c.edges[ei].primitive_dir);
    t.basis = saturation(dirs, c.ambient_rank);
    return t;
}

// Image vertices of the loops.
std::set<std::string> loop_image_vertices(const CurveAnalysis& analysis) {
    std::set<std::string> out;
    for (const std::string& v : analysis.bouquets.loop_vertices)
        out.insert(analysis.image->vertices[analysis.image->vertex_of.at(v)]
                       .id);
    return out;
}

// Unique path (as image vertices) from an image vertex to the loops; the
// image minus loop edges is a forest so a BFS parent chain suffices.
std::vector<std::string> path_to_loops(const CurveAnalysis& analysis,
                                       const std::string& start_iv) {
    const ImageCurve& img = *analysis.image;
    std::set<std::string> targets = loop_image_vertices(analysis);
    if (targets.count(start_iv)) return {start_iv};

    std::set<size_t> loop_image_edges;
    for (size_t ei : analysis.bouquets.loop_edges)
        loop_image_edges.insert(
            img.edge_of.at(analysis.curve.edges[ei].id));

    auto adj = bounded_adjacency(img);
    std::map<std::string, std::pair<std::string, size_t>> parent;
    std::vector<std::string> queue{start_iv};
    parent[start_iv] = {start_iv, SIZE_MAX};
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        std::string v = queue[qi];
        if (targets.count(v)) {
            std::vector<std::string> path{v};
            while (v != start_iv) {
                v = parent[v].first;
                path.push_back(v);
            }
            std::reverse(path.begin(), path.end());
            return path;
        }
        auto it = adj.find(v);
        if (it == adj.end()) continue;
        for (size_t j : it->second) {
            if (loop_image_edges.count(j)) continue;
            const ImageEdge& e = img.edges[j];
            const std::string& w = (e.tail == v) ? e.head : e.tail;
            if (parent.count(w)) continue;
            parent[w] = {v, j};
            queue.push_back(w);
        }
    }
    throw CurveError(CurveErrc::NotAPath,
                     "no path from " + start_iv + " to the loops");
}

Rat distance_to_loops(const CurveAnalysis& analysis,
                      const std::string& start_iv) {
    auto path = path_to_loops(analysis, start_iv);
    if (path.size() < 2) return Rat(0);
    return path_length(*analysis.image, path).total;
}

}  // namespace

std::vector<std::string> image_path_to_loops(const CurveAnalysis& analysis,
                                             const std::string& image_vertex) {
    return path_to_loops(analysis, image_vertex);
}

Rat image_distance_to_loops(const CurveAnalysis& analysis,
                            const std::string& image_vertex) {
    return distance_to_loops(analysis, image_vertex);
}

namespace {

// Normalize a covector line representative: primitive with the first
// nonzero entry positive.
IntVec line_representative(const IntVec& v) {
    IntVec p = primitive_vector(v);
    for (const Int& e : p) {
        if (e > 0) break;
        if (e < 0) return negated(p);
    }
    return p;
}

// Deterministic search for an integral covector vanishing on `span_basis`
// and nonvanishing on every pool vector outside the span.
IntVec separating_covector(const std::vector<IntVec>& span_basis,
                           const std::vector<IntVec>& avoid, size_t n) {
    std::vector<IntVec> ann = annihilator_basis(span_basis, n);
    if (ann.empty())
        throw CurveError(CurveErrc::Scope,
                         "no hyperplane contains the requested span");
    const size_t k = ann.size();
    // Enumerate small integer combinations in a deterministic order.
    for (long radius = 1; radius <= 64; ++radius) {
        std::vector<long> coef(k, -radius);
        while (true) {
            bool boundary = false;
            for (long c : coef)
                if (c == radius || c == -radius) boundary = true;
            if (boundary) {
                IntVec phi(n, Int(0));
                for (size_t i = 0; i < k; ++i)
                    phi = add(phi, scaled(ann[i], Int(coef[i])));
                if (!is_zero(phi)) {
                    bool ok = true;
                    for (const IntVec& p : avoid)
                        if (dot(phi, p) == 0) {
                            ok = false;
                            break;
                        }
                    if (ok) return line_representative(phi);
                }
            }
            size_t i = 0;
            while (i < k && coef[i] == radius) coef[i++] = -radius;
            if (i == k) break;
            ++coef[i];
        }
    }
    throw CurveError(CurveErrc::Scope,
                     "could not separate hyperplane stratum");
}

}  // namespace

GammaPrime gamma_prime(const CurveAnalysis& analysis) {
    if (!analysis.image)
        throw CurveError(CurveErrc::AssumptionA,
                         "gamma_prime requires Assumption A");
    if (analysis.bouquets.bouquets.size() != 1)
        throw CurveError(CurveErrc::Scope,
                         "gamma_prime requires a unique bouquet");
    const ImageCurve& img = *analysis.image;
    SpanTester A = loop_span(analysis, analysis.bouquets.bouquets.front());

    GammaPrime gp;
    gp.base = A.base;
    gp.span = A.basis;

    std::set<std::string> frontier = loop_image_vertices(analysis);
    std::vector<std::string> queue(frontier.begin(), frontier.end());
    gp.vertices.insert(frontier.begin(), frontier.end());
    std::map<std::string, std::vector<size_t>> adj;
    for (size_t j = 0; j < img.edges.size(); ++j) {
        adj[img.edges[j].tail].push_back(j);
        if (img.edges[j].bounded) adj[img.edges[j].head].push_back(j);
    }
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        std::string v = queue[qi];
        for (size_t j : adj[v]) {
            const ImageEdge& e = img.edges[j];
            if (!A.contains_dir(e.primitive_dir)) continue;
            gp.edges.insert(j);
            if (e.bounded) {
                const std::string& w = (e.tail == v) ? e.head : e.tail;
                if (!gp.vertices.count(w)) {
                    gp.vertices.insert(w);
                    queue.push_back(w);
                }
            }
        }
    }
    for (const std::string& v : gp.vertices) {
        size_t count = 0;
        for (size_t j : adj[v])
            if (gp.edges.count(j)) ++count;
        if (count == 1) gp.one_valent.push_back(v);
    }
    std::sort(gp.one_valent.begin(), gp.one_valent.end());
    return gp;
}

std::vector<Hyperplane> candidate_hyperplanes(const CurveAnalysis& analysis) {
    const TropicalCurve& curve = analysis.curve;
    const ImageCurve& img = *analysis.image;
    const size_t n = curve.ambient_rank;
    GammaPrime gp = gamma_prime(analysis);
    if (gp.span.size() == n) return {};

    // Pool: image edge direction lines plus vertex offsets from the base.
    std::vector<IntVec> pool;
    auto push_pool = [&](const IntVec& v) {
        if (is_zero(v)) return;
        IntVec r = line_representative(v);
        if (std::find(pool.begin(), pool.end(), r) == pool.end())
            pool.push_back(r);
    };
    for (const ImageEdge& e : img.edges) push_pool(e.primitive_dir);
    for (const ImageVertex& iv : img.vertices) {
        RatVec off = sub(iv.position, gp.base);
        if (!is_zero(off)) push_pool(primitive_part(off));
    }

    // Breadth-first closure over saturated spans containing the loop span.
    struct SpanNode {
        std::vector<IntVec> basis;
    };
    auto key_of = [&](const std::vector<IntVec>& basis) {
        std::string k;
        for (const IntVec& v : basis)
            for (const Int& e : v) k += e.get_str() + ",";
        return k;
    };
    std::vector<SpanNode> nodes{{lattice_canonical_basis(gp.span, n)}};
    std::set<std::string> seen{key_of(nodes.front().basis)};
    for (size_t qi = 0; qi < nodes.size(); ++qi) {
        std::vector<IntVec> cur = nodes[qi].basis;  // copy: nodes grows
        if (cur.size() >= n - 1) continue;
        for (const IntVec& p : pool) {
            if (in_span(p, cur)) continue;
            std::vector<IntVec> gens = cur;
            gens.push_back(p);
            std::vector<IntVec> bigger = saturation(gens, n);
            if (bigger.size() > n - 1) continue;
            std::string k = key_of(bigger);
            if (seen.insert(k).second) nodes.push_back({bigger});
        }
    }

    std::vector<Hyperplane> out;
    std::set<std::string> strata_seen;
    for (const SpanNode& node : nodes) {
        std::vector<IntVec> inside, avoid;
        for (const IntVec& p : pool)
            (in_span(p, node.basis) ? inside : avoid).push_back(p);
        Hyperplane h;
        h.normal = separating_covector(node.basis, avoid, n);
        h.offset = dot(h.normal, gp.base);
        for (size_t j = 0; j < img.edges.size(); ++j) {
            const ImageEdge& e = img.edges[j];
            const RatVec& basepos =
                img.vertices[img.vertex_index.at(e.tail)].position;
            if (dot(h.normal, basepos) == h.offset &&
                dot(h.normal, e.primitive_dir) == 0)
                h.edges_in.push_back(j);
        }
        for (const ImageVertex& iv : img.vertices)
            if (dot(h.normal, iv.position) == h.offset)
                h.vertices_in.push_back(iv.id);
        std::string stratum_key;
        for (size_t j : h.edges_in) stratum_key += std::to_string(j) + ",";
        stratum_key += "|";
        for (const auto& v : h.vertices_in) stratum_key += v + ",";
        if (strata_seen.insert(stratum_key).second)
            out.push_back(std::move(h));
    }
    std::sort(out.begin(), out.end(),
              [](const Hyperplane& a, const Hyperplane& b) {
                  if (a.edges_in != b.edges_in) return a.edges_in < b.edges_in;
                  return a.vertices_in < b.vertices_in;
              });
    return out;
}

namespace {

// Example 1 / Example 2(b) test at a four-valent image vertex, relative to
// the loop span A.
std::pair<bool, std::string> four_valent_exception(
    const CurveAnalysis& analysis, const SpanTester& A,
    const std::string& image_vertex_id) {
    const ImageCurve& img = *analysis.image;
    const ImageVertex& iv = img.vertices[img.vertex_index.at(image_vertex_id)];
    if (iv.cls == VertexClass::EXAMPLE1) return {true, "EXAMPLE1"};
    if (iv.cls != VertexClass::EXAMPLE2) return {false, ""};
    if (!A.contains_point(iv.position)) return {false, ""};

    std::vector<size_t> distinct(iv.image_edges);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()),
                   distinct.end());
    std::vector<IntVec> off_dirs;
    size_t in_a = 0;
    for (size_t j : distinct) {
        if (A.contains_dir(img.edges[j].primitive_dir))
            ++in_a;
        else
            off_dirs.push_back(img.edges[j].primitive_dir);
    }
    if (in_a != 1) return {false, ""};  // cases (a) and detached
    std::vector<IntVec> gens = A.basis;
    gens.insert(gens.end(), off_dirs.begin(), off_dirs.end());
    size_t extended = rank_of_int_vectors(gens, analysis.curve.ambient_rank);
    if (extended == A.dim() + 1) return {true, "EXAMPLE2B"};  // case (b)
    return {false, ""};                                        // case (c)
}

WellSpacedWitness judge(const CurveAnalysis& analysis, const SpanTester& A,
                        std::string context,
                        std::vector<WellSpacedCandidate> candidates) {
    WellSpacedWitness w;
    w.context = std::move(context);
    w.candidates = std::move(candidates);
    std::sort(w.candidates.begin(), w.candidates.end(),
              [](const WellSpacedCandidate& a, const WellSpacedCandidate& b) {
                  return a.vertex < b.vertex;
              });

    size_t finite = 0;
    for (const auto& c : w.candidates) {
        if (c.distance.infinite) continue;
        ++finite;
        if (c.distance < w.minimum) {
            w.minimum = c.distance;
            w.minimum_count = 1;
        } else if (c.distance == w.minimum) {
            ++w.minimum_count;
        }
    }
    if (finite == 0) {
        w.vacuous = true;
        w.branch = WitnessBranch::TWO_MINIMA;
        return w;
    }
    if (w.minimum_count >= 2) {
        w.branch = WitnessBranch::TWO_MINIMA;
        return w;
    }
    // Unique minimum: locate it and consult the four-valent exception.
    std::string argmin;
    for (const auto& c : w.candidates)
        if (!c.distance.infinite && c.distance == w.minimum) argmin = c.vertex;
    auto [ok, cls] = four_valent_exception(analysis, A, argmin);
    if (ok) {
        w.branch = WitnessBranch::FOUR_VALENT_EXCEPTION;
        w.exception_class = cls;
    } else {
        w.branch = WitnessBranch::FAIL;
    }
    return w;
}

WellSpacedResult genus_one_check(const CurveAnalysis& analysis) {
    const ImageCurve& img = *analysis.image;
    WellSpacedResult res;
    SpanTester A =
        loop_span(analysis, analysis.bouquets.bouquets.front());

    for (const Hyperplane& h : candidate_hyperplanes(analysis)) {
        // Valence of image vertices inside the cut subgraph.
        std::map<std::string, size_t> val;
        for (size_t j : h.edges_in) {
            const ImageEdge& e = img.edges[j];
            val[e.tail]++;
            if (e.bounded) val[e.head]++;
        }
        std::vector<WellSpacedCandidate> cands;
        for (const std::string& v : h.vertices_in) {
            auto it = val.find(v);
            if (it == val.end() || it->second != 1) continue;
            cands.push_back(
                {v, ExtRat::of(distance_to_loops(analysis, v))});
        }
        std::string ctx = "H{normal=(";
        for (size_t i = 0; i < h.normal.size(); ++i) {
            if (i) ctx += ",";
            ctx += h.normal[i].get_str();
        }
        ctx += "), offset=" + to_string(h.offset) + "}";
        WellSpacedWitness w = judge(analysis, A, ctx, std::move(cands));
        if (w.branch == WitnessBranch::FAIL) res.well_spaced = false;
        res.witnesses.push_back(std::move(w));
    }
    return res;
}

// Deterministic pseudo-generic rational combination used for support-stratum
// representatives.
std::vector<Rat> draw_coefficients(size_t count, unsigned seed,
                                   unsigned attempt) {
    std::vector<Rat> out;
    unsigned long long state =
        6364136223846793005ULL * (seed + 1) + 1442695040888963407ULL * (attempt + 1);
    for (size_t i = 0; i < count; ++i) {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        long v = static_cast<long>((state >> 33) % 19) - 9;
        if (v == 0) v = 7;
        out.emplace_back(v);
    }
    return out;
}

WellSpacedResult unique_bouquet_check(const CurveAnalysis& analysis,
                                      unsigned seed) {
    const TropicalCurve& curve = analysis.curve;
    const ImageCurve& img = *analysis.image;
    WellSpacedResult res;

    ObstructionBasis H = dual_obstruction_basis(analysis);
    if (H.dimension == 0) return res;  // vacuous
    const auto& segs = H.segments.segments;
    const size_t nseg = segs.size();
    if (nseg > 20)
        throw CurveError(CurveErrc::Scope,
                         "too many segments for stratum enumeration");
    SpanTester A =
        loop_span(analysis, analysis.bouquets.bouquets.front());

    // Attachment segment of each complement component.
    struct Attached {
        size_t component;
        std::string nu;       // attachment curve vertex
        size_t segment;
    };
    std::vector<Attached> attachments;
    for (size_t ci = 0; ci < analysis.bouquets.complement.size(); ++ci) {
        const ComplementComponent& B = analysis.bouquets.complement[ci];
        for (const std::string& nu : B.attachments) {
            // Segment owning nu: any loop edge at nu belongs to it.
            for (size_t ei : curve.incident.at(nu)) {
                if (!analysis.bouquets.loop_edges.count(ei)) continue;
                attachments.push_back(
                    {ci, nu, H.segments.segment_of_edge.at(ei)});
                break;
            }
        }
    }

    // Support strata of H.
    for (unsigned long mask = 1; mask < (1UL << nseg); ++mask) {
        std::vector<size_t> S;
        for (size_t m = 0; m < nseg; ++m)
            if (mask & (1UL << m)) S.push_back(m);

        // H_S: coefficient vectors vanishing on segments outside S.
        std::vector<RatVec> rows;
        const size_t a = H.dimension;
        for (size_t m = 0; m < nseg; ++m) {
            if (mask & (1UL << m)) continue;
            for (size_t k = 0; k < curve.ambient_rank; ++k) {
                RatVec row(a, Rat(0));
                for (size_t i = 0; i < a; ++i)
                    row[i] = Rat(H.basis[i].covectors[m][k]);
                rows.push_back(std::move(row));
            }
        }
        std::vector<IntVec> hs = kernel_basis(RatMat::from_rows(rows, a));
        if (hs.empty()) continue;
        // Achievability: every m in S must be reachable by some element.
        bool achievable = true;
        for (size_t m : S) {
            bool hit = false;
            for (const IntVec& l : hs) {
                RatVec lam = to_rat_vec(l);
                std::vector<RatVec> cov = combine(H, lam);
                if (!is_zero(cov[m])) {
                    hit = true;
                    break;
                }
            }
            if (!hit) {
                achievable = false;
                break;
            }
        }
        if (!achievable) continue;

        // Deterministic generic representative with support exactly S.
        std::vector<RatVec> cov;
        bool found = false;
        for (unsigned attempt = 0; attempt < 64 && !found; ++attempt) {
            std::vector<Rat> t = draw_coefficients(hs.size(), seed, attempt);
            std::vector<Rat> lam(a, Rat(0));
            for (size_t i = 0; i < hs.size(); ++i)
                for (size_t j = 0; j < a; ++j)
                    lam[j] += t[i] * Rat(hs[i][j]);
            cov = combine(H, lam);
            found = true;
            for (size_t m = 0; m < nseg; ++m) {
                bool nz = !is_zero(cov[m]);
                bool want = (mask & (1UL << m)) != 0;
                if (nz != want) {
                    found = false;
                    break;
                }
            }
        }
        if (!found)
            throw CurveError(CurveErrc::Scope,
                             "could not draw a generic stratum "
                             "representative");

        // Distances d_{a,i;k} over the supported segments.
        std::vector<WellSpacedCandidate> cands;
        for (size_t m : S) {
            IntVec normal = line_representative(primitive_part(cov[m]));
            const std::string& seg_vertex = segs[m].vertices.front();
            Rat offset = dot(normal, curve.pos(seg_vertex));

            for (const Attached& at : attachments) {
                if (at.segment != m) continue;
                const ComplementComponent& B =
                    analysis.bouquets.complement[at.component];
                // Walk B's image edges inside the hyperplane from nu.
                std::string nu_iv = img.vertices[img.vertex_of.at(at.nu)].id;
                std::map<std::string, Rat> dist{{nu_iv, Rat(0)}};
                std::map<std::string, size_t> val;
                std::vector<std::string> queue{nu_iv};
                std::set<size_t> b_image_edges;
                for (size_t ei : B.edges) {
                    const Edge& e = curve.edges[ei];
                    if (e.contracted) continue;
                    b_image_edges.insert(img.edge_of.at(e.id));
                }
                std::map<std::string, std::vector<size_t>> adj;
                for (size_t j : b_image_edges) {
                    const ImageEdge& e = img.edges[j];
                    adj[e.tail].push_back(j);
                    if (e.bounded) adj[e.head].push_back(j);
                }
                for (size_t qi = 0; qi < queue.size(); ++qi) {
                    std::string v = queue[qi];
                    const RatVec& pos =
                        img.vertices[img.vertex_index.at(v)].position;
                    for (size_t j : adj[v]) {
                        const ImageEdge& e = img.edges[j];
                        if (dot(normal, e.primitive_dir) != 0) continue;
                        if (dot(normal, pos) != offset) continue;
                        val[v]++;
                        if (!e.bounded) continue;
                        const std::string& w =
                            (e.tail == v) ? e.head : e.tail;
                        if (!dist.count(w)) {
                            dist[w] = dist[v] + normalized_length(e);
                            queue.push_back(w);
                        }
                    }
                }
                // One-valent escape vertices of the contained subtree.
                ExtRat d = ExtRat::inf();
                std::string escape;
                for (const auto& [v, count] : val) {
                    if (v == nu_iv || count != 1) continue;
                    if (ExtRat::of(dist[v]) < d) {
                        d = ExtRat::of(dist[v]);
                        escape = v;
                    }
                }
                // A component whose bridge leaves the hyperplane escapes
                // immediately at nu; balancing prevents this, but guard.
                cands.push_back({escape.empty() ? nu_iv + "(component " +
                                                      std::to_string(
                                                          at.component) + ")"
                                                : escape,
                                 d});
            }
        }
        std::string ctx = "a-stratum{segments=";
        for (size_t m : S) ctx += std::to_string(m) + ",";
        ctx += "}";
        WellSpacedWitness w = judge(analysis, A, ctx, std::move(cands));
        if (w.branch == WitnessBranch::FAIL) res.well_spaced = false;
        res.witnesses.push_back(std::move(w));
    }
    return res;
}

}  // namespace

WellSpacedResult well_spaced_check(const CurveAnalysis& analysis,
                                   unsigned seed) {
    if (!analysis.profile.c_ok)
        throw CurveError(CurveErrc::Scope,
                         "well-spacedness requires Assumption C");
    size_t genus = analysis.curve.genus();
    if (genus == 1) return genus_one_check(analysis);
    if (analysis.bouquets.bouquets.size() == 1)
        return unique_bouquet_check(analysis, seed);
    throw CurveError(CurveErrc::Scope,
                     "well-spacedness beyond genus one needs a unique "
                     "bouquet");
}

bool kuranishi_zero_check(const CurveAnalysis& analysis) {
    if (!analysis.image)
        throw CurveError(CurveErrc::AssumptionA,
                         "Kuranishi check requires Assumption A");
    const TropicalCurve& curve = analysis.curve;
    SegmentDecomposition segdec =
        segment_decomposition(curve, analysis.bouquets);

    for (size_t bi = 0; bi < analysis.bouquets.bouquets.size(); ++bi) {
        auto components = complement_of_bouquet(curve, analysis.bouquets, bi);
        for (const ComplementComponent& B : components) {
            std::vector<IntVec> vb;
            for (size_t ei : B.edges)
                if (!curve.edges[ei].contracted)
                    vb.push_back(curve.edges[ei].primitive_dir);
            for (const std::string& nu : B.attachments) {
                size_t seg = SIZE_MAX;
                for (size_t ei : curve.incident.at(nu)) {
                    const Edge& e = curve.edges[ei];
                    if (e.contracted || !e.bounded) continue;
                    auto it = segdec.segment_of_edge.find(ei);
                    if (it != segdec.segment_of_edge.end() &&
                        segdec.segments[it->second].bouquet == bi) {
                        seg = it->second;
                        break;
                    }
                }
                if (seg == SIZE_MAX) return false;
                for (const IntVec& d : vb)
                    if (!in_span(d, lattice_canonical_basis(
                                        segdec.segments[seg].span,
                                        curve.ambient_rank)))
                        return false;
            }
        }
    }
    return true;
}

bool immersive(const CurveAnalysis& analysis) {
    for (const Edge& e : analysis.curve.edges)
        if (e.contracted) return false;
    if (!analysis.image) return false;
    for (const ImageVertex& iv : analysis.image->vertices)
        if (iv.members.size() != 1) return false;
    for (const ImageEdge& ie : analysis.image->edges)
        if (ie.members.size() != 1) return false;
    return true;
}

SmoothabilityVerdict smoothability_verdict(const CurveAnalysis& analysis,
                                           unsigned seed) {
    SmoothabilityVerdict out;
    if (!analysis.profile.a_ok) {
        out.verdict = Verdict::UNDETERMINED;
        out.reason = "Assumption A fails";
        return out;
    }
    ObstructionBasis H = dual_obstruction_basis(analysis);
    if (H.dimension == 0) {
        out.verdict = Verdict::SMOOTHABLE;
        out.tag = TheoremTag::NON_SUPERABUNDANT;
        return out;
    }
    if (kuranishi_zero_check(analysis)) {
        out.verdict = Verdict::SMOOTHABLE;
        out.tag = TheoremTag::K_ZERO;
        return out;
    }
    if (!analysis.profile.c_ok) {
        out.verdict = Verdict::UNDETERMINED;
        out.reason = "Assumption C fails";
        return out;
    }
    size_t genus = analysis.curve.genus();
    if (genus == 1) {
        WellSpacedResult ws = well_spaced_check(analysis, seed);
        out.verdict = ws.well_spaced ? Verdict::SMOOTHABLE
                                     : Verdict::NOT_SMOOTHABLE;
        out.tag = immersive(analysis) ? TheoremTag::THM_IMMERSIVE
                                      : TheoremTag::THM_GENERAL;
        out.wellspaced = std::move(ws);
        return out;
    }
    if (analysis.bouquets.bouquets.size() == 1) {
        WellSpacedResult ws = well_spaced_check(analysis, seed);
        out.verdict = ws.well_spaced ? Verdict::SMOOTHABLE
                                     : Verdict::NOT_SMOOTHABLE;
        out.tag = TheoremTag::EXT_UNIQUE_BOUQUET;
        out.wellspaced = std::move(ws);
        return out;
    }
    out.verdict = Verdict::UNDETERMINED;
    out.reason = "multiple bouquets beyond the unique-bouquet extension";
    return out;
}

}  // namespace tropic
