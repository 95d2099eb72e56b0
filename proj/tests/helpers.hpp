#pragma once

#include <random>
#include <string>

#include "tropic/image.hpp"
#include "tropic/io.hpp"

namespace tropic::testing {

inline std::string fixture_path(const std::string& name) {
    return std::string(TROPIC_FIXTURE_DIR) + "/" + name;
}

inline TropicalCurve fixture(const std::string& name) {
    return load_curve(fixture_path(name));
}

inline CurveAnalysis fixture_analysis(const std::string& name) {
    return CurveAnalysis::of(fixture(name));
}

// Applies x -> T x + t to a raw curve; weights pick up the content of the
// transformed directions so the result stays balanced.
inline RawCurve transformed(const RawCurve& raw,
                            const std::vector<IntVec>& T_columns,
                            const RatVec& shift) {
    const size_t n = raw.ambient_rank;
    auto apply_rat = [&](const RatVec& p) {
        RatVec out(n, Rat(0));
        for (size_t j = 0; j < n; ++j)
            for (size_t i = 0; i < n; ++i)
                out[i] += Rat(T_columns[j][i]) * p[j];
        return add(out, shift);
    };
    auto apply_int = [&](const IntVec& v) {
        IntVec out(n, Int(0));
        for (size_t j = 0; j < n; ++j)
            for (size_t i = 0; i < n; ++i) out[i] += T_columns[j][i] * v[j];
        return out;
    };
    RawCurve out = raw;
    for (auto& [id, p] : out.vertices) p = apply_rat(p);
    for (RawEdge& e : out.edges) {
        if (e.bounded) continue;
        IntVec d = apply_int(e.direction);
        Int c = content(d);
        e.weight *= c;
        e.direction = primitive_vector(d);
    }
    return out;
}

inline RawCurve to_raw(const TropicalCurve& curve) {
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
            re.direction = scaled(e.primitive_dir, Int(1));
        raw.edges.push_back(std::move(re));
    }
    raw.markings = curve.markings;
    return raw;
}

// Random GL_n(Z) element as a product of elementary shears and swaps.
inline std::vector<IntVec> random_unimodular(size_t n, std::mt19937& rng) {
    std::vector<IntVec> cols(n, IntVec(n, Int(0)));
    for (size_t i = 0; i < n; ++i) cols[i][i] = 1;
    std::uniform_int_distribution<long> shear(-2, 2);
    for (int step = 0; step < 12; ++step) {
        size_t a = rng() % n, b = rng() % n;
        if (a == b) continue;
        long f = shear(rng);
        // column op: col_a += f * col_b keeps the determinant
        for (size_t i = 0; i < n; ++i) cols[a][i] += f * cols[b][i];
        if (step % 5 == 2) std::swap(cols[a], cols[b]);
    }
    return cols;
}

inline RatVec random_shift(size_t n, std::mt19937& rng) {
    std::uniform_int_distribution<long> num(-6, 6);
    std::uniform_int_distribution<long> den(1, 3);
    RatVec t(n);
    for (size_t i = 0; i < n; ++i) {
        t[i] = Rat(num(rng), den(rng));
        t[i].canonicalize();
    }
    return t;
}

inline void apply_transform(const TropicalCurve& curve, std::mt19937& rng,
                            TropicalCurve& out) {
    auto T = random_unimodular(curve.ambient_rank, rng);
    auto t = random_shift(curve.ambient_rank, rng);
    out = validate_curve(transformed(to_raw(curve), T, t));
}

// Random connected trivalent abstract graph of genus `g`: grow a tree of
// stub-splits, then join stub pairs to add cycles.
inline TrivalentGraph random_trivalent_graph(size_t genus, size_t max_extra,
                                             std::mt19937& rng) {
    TrivalentGraph g;
    g.n_vertices = 1;
    g.stubs = {3};
    std::vector<std::pair<size_t, size_t>>& edges = g.bounded_edges;

    size_t grow = rng() % (max_extra + 1);
    for (size_t step = 0; step < grow + 2 * genus; ++step) {
        // split a stub: new vertex with one edge back and two fresh stubs
        std::vector<size_t> stubbed;
        for (size_t v = 0; v < g.n_vertices; ++v)
            if (g.stubs[v] > 0) stubbed.push_back(v);
        size_t v = stubbed[rng() % stubbed.size()];
        g.stubs[v]--;
        g.stubs.push_back(2);
        edges.emplace_back(v, g.n_vertices);
        g.n_vertices++;
    }
    for (size_t j = 0; j < genus; ++j) {
        std::vector<size_t> stubbed;
        for (size_t v = 0; v < g.n_vertices; ++v)
            for (size_t s = 0; s < g.stubs[v]; ++s) stubbed.push_back(v);
        if (stubbed.size() < 2) break;
        size_t a = stubbed[rng() % stubbed.size()];
        g.stubs[a]--;
        stubbed.clear();
        for (size_t v = 0; v < g.n_vertices; ++v)
            for (size_t s = 0; s < g.stubs[v]; ++s) stubbed.push_back(v);
        size_t b = stubbed[rng() % stubbed.size()];
        g.stubs[b]--;
        edges.emplace_back(a, b);
    }
    return g;
}

// Random immersive genus-one curve in R^n: a closed polygon of primitive
// directions inside a chosen subspace, a balancing ray at each corner.
// Returns nullopt when the sampled polygon fails validation (overlaps).
inline std::optional<TropicalCurve> random_genus_one(size_t n,
                                                     std::mt19937& rng) {
    std::uniform_int_distribution<long> entry(-2, 2);
    size_t k = 3 + rng() % 3;  // polygon corners
    size_t dim = 2 + rng() % (n - 1);

    // subspace basis
    std::vector<IntVec> basis;
    for (size_t tries = 0; tries < 40 && basis.size() < dim; ++tries) {
        IntVec v(n);
        for (size_t i = 0; i < n; ++i) v[i] = entry(rng);
        if (is_zero(v)) continue;
        std::vector<IntVec> ext = basis;
        ext.push_back(v);
        if (rank_of_int_vectors(ext, n) > basis.size())
            basis.push_back(primitive_vector(v));
    }
    if (basis.size() < 2) return std::nullopt;
    dim = basis.size();

    std::vector<IntVec> dirs;
    IntVec total(n, Int(0));
    for (size_t i = 0; i + 1 < k; ++i) {
        IntVec d(n, Int(0));
        bool nz = false;
        for (size_t b = 0; b < dim; ++b) {
            long c = entry(rng);
            if (c != 0) nz = true;
            d = add(d, scaled(basis[b], Int(c)));
        }
        if (!nz) return std::nullopt;
        dirs.push_back(d);
        total = add(total, d);
    }
    if (is_zero(total)) return std::nullopt;
    dirs.push_back(negated(total));

    RawCurve raw;
    raw.ambient_rank = n;
    RatVec pos(n, Rat(0));
    for (size_t i = 0; i < k; ++i) {
        raw.vertices.emplace_back("p" + std::to_string(i), pos);
        pos = add(pos, to_rat_vec(dirs[i]));
    }
    for (size_t i = 0; i < k; ++i) {
        RawEdge e;
        e.id = "c" + std::to_string(i);
        e.bounded = true;
        e.v1 = "p" + std::to_string(i);
        e.v2 = "p" + std::to_string((i + 1) % k);
        raw.edges.push_back(e);
        // corner balancing ray
        IntVec in = dirs[(i + k - 1) % k];
        IntVec out = dirs[i];
        IntVec rdir = sub(primitive_vector(in), primitive_vector(out));
        if (is_zero(rdir)) return std::nullopt;
        RawEdge r;
        r.id = "r" + std::to_string(i);
        r.bounded = false;
        r.v1 = "p" + std::to_string(i);
        r.weight = content(rdir);
        r.direction = primitive_vector(rdir);
        raw.edges.push_back(r);
    }
    try {
        return validate_curve(raw);
    } catch (const CurveError&) {
        return std::nullopt;
    }
}

}  // namespace tropic::testing
