#include "tropic/moduli.hpp"

#include "tropic/obstruction.hpp"

namespace tropic {

DeformationSpace deformation_space(const TropicalCurve& curve) {
    const size_t n = curve.ambient_rank;
    DeformationSpace out;
    out.vertex_order = curve.vertex_ids;
    std::map<std::string, size_t> slot;
    for (size_t i = 0; i < out.vertex_order.size(); ++i)
        slot[out.vertex_order[i]] = i * n;

    std::vector<RatVec> rows;
    const size_t width = n * out.vertex_order.size();
    for (const Edge& e : curve.edges) {
        if (!e.bounded) continue;
        if (e.contracted) {
            for (size_t k = 0; k < n; ++k) {
                RatVec row(width, Rat(0));
                row[slot[e.head] + k] += 1;
                row[slot[e.tail] + k] -= 1;
                rows.push_back(std::move(row));
            }
            continue;
        }
        for (const IntVec& phi : annihilator_basis({e.primitive_dir}, n)) {
            RatVec row(width, Rat(0));
            for (size_t k = 0; k < n; ++k) {
                row[slot[e.head] + k] += Rat(phi[k]);
                row[slot[e.tail] + k] -= Rat(phi[k]);
            }
            rows.push_back(std::move(row));
        }
    }

    if (rows.empty()) {
        // No bounded edges: every displacement works.
        for (size_t j = 0; j < width; ++j) {
            IntVec v(width, Int(0));
            v[j] = 1;
            out.basis.push_back(std::move(v));
        }
        out.dimension = width;
        return out;
    }
    out.basis = kernel_basis(RatMat::from_rows(rows, width));
    out.dimension = out.basis.size();
    return out;
}

long expected_dimension(const TropicalCurve& curve) {
    long e = static_cast<long>(curve.unbounded_count());
    long n = static_cast<long>(curve.ambient_rank);
    long g = static_cast<long>(curve.genus());
    return e + (n - 3) * (1 - g);
}

SuperabundanceReport superabundance_report(const CurveAnalysis& analysis) {
    SuperabundanceReport rep;
    rep.expected_dim = expected_dimension(analysis.curve);
    rep.actual_dim =
        static_cast<long>(deformation_space(analysis.curve).dimension);
    rep.superabundant = rep.actual_dim > rep.expected_dim;
    if (analysis.profile.a_ok) {
        ObstructionBasis H = dual_obstruction_basis(analysis);
        rep.obstruction_dim = static_cast<long>(H.dimension);
        if (analysis.curve.trivalent()) {
            rep.identity_checked = true;
            rep.identity_ok =
                rep.actual_dim - *rep.obstruction_dim == rep.expected_dim;
        }
    }
    return rep;
}

}  // namespace tropic
