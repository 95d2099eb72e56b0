#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "tropic/enumeration.hpp"

using namespace tropic;
using namespace tropic::testing;

namespace {

ConstraintSet fixture_constraints(const std::string& name, size_t rank) {
    return load_constraints(fixture_path(name), rank);
}

AffineConstraint point_at(const RatVec& p) {
    AffineConstraint a;
    a.base = p;
    a.codimension = static_cast<long>(p.size()) - 1;
    return a;
}

AffineConstraint line_through(const RatVec& p, const IntVec& dir) {
    AffineConstraint a;
    a.base = p;
    a.span = {dir};
    a.codimension = static_cast<long>(p.size()) - 2;
    return a;
}

RatVec rv(std::vector<long> entries) {
    RatVec out;
    for (long e : entries) out.emplace_back(e);
    return out;
}

}  // namespace

TEST_CASE("match constraints: point on an edge, parallel misses") {
    TropicalCurve line = fixture("line2d.json");
    ConstraintSet cs = fixture_constraints("line_constraints.json", 2);
    auto hits = match_constraints(line, cs);
    REQUIRE(hits.size() == 2);
    CHECK(hits[0].met);
    CHECK(hits[0].point == rv({-2, 0}));
    CHECK(hits[1].met);

    // a line parallel to the marked ray but disjoint from it
    ConstraintSet miss;
    miss.constraints = {line_through(rv({0, 5}), to_int_vec({-1, 0})),
                        point_at(rv({0, -3}))};
    auto h2 = match_constraints(line, miss);
    CHECK_FALSE(h2[0].met);
    CHECK_FALSE(matches(line, miss));
}

TEST_CASE("delta factors") {
    // u = (1,0) against L(A) = Z(0,1): unimodular => delta = weight
    RawCurve raw = to_raw(fixture("line2d.json"));
    TropicalCurve line = validate_curve(raw);

    ConstraintSet cs;
    cs.constraints = {line_through(rv({-2, 0}), to_int_vec({0, 1})),
                      point_at(rv({0, -3}))};
    CHECK(delta_factor(line, cs, 0) == 1);

    // u = (1,1) with L(A) = Z(1,-1): index two
    TropicalCurve det2 = fixture("det2.json");
    ConstraintSet cs2;
    cs2.constraints = {line_through(rv({2, 2}), to_int_vec({1, -1})),
                       point_at(rv({3, -3}))};
    CHECK(delta_factor(det2, cs2, 0) == 2);

    // weight multiplies
    RawCurve heavy = to_raw(det2);
    for (RawEdge& e : heavy.edges)
        if (e.id == "m1") e.weight = 3;
    for (RawEdge& e : heavy.edges)
        if (e.id == "r3") {
            // rebalance: 3(1,1) + (1,-1) + w(-1,0) = 0 => w = 4, y: 3 - 1 = 2
            // does not vanish; use a fourth ray instead
        }
    // simpler: scaled sublattice via a direct helper curve
    RawCurve raw3;
    raw3.ambient_rank = 2;
    raw3.vertices.emplace_back("v", rv({0, 0}));
    auto ray = [&](const std::string& id, std::vector<long> d, long w) {
        RawEdge e;
        e.id = id;
        e.bounded = false;
        e.v1 = "v";
        e.direction = to_int_vec(d);
        e.weight = w;
        raw3.edges.push_back(e);
    };
    ray("m1", {1, 1}, 3);
    ray("m2", {1, -1}, 3);
    ray("r3", {-1, 0}, 6);
    raw3.markings = {"m1", "m2"};
    TropicalCurve scaled = validate_curve(raw3);
    ConstraintSet cs3;
    cs3.constraints = {line_through(rv({2, 2}), to_int_vec({1, -1})),
                       point_at(rv({3, -3}))};
    CHECK(delta_factor(scaled, cs3, 0) == 6);

    // degenerate: marked edge parallel to its constraint
    ConstraintSet bad;
    bad.constraints = {line_through(rv({2, 2}), to_int_vec({1, 1})),
                       point_at(rv({3, -3}))};
    CHECK_THROWS_AS(delta_factor(det2, bad, 0), EnumerationError);
}

TEST_CASE("multiplicity of the standard line configuration is one") {
    CurveAnalysis line = fixture_analysis("line2d.json");
    ConstraintSet cs = fixture_constraints("line_constraints.json", 2);
    MultiplicityReport rep = lattice_multiplicity(line, cs, 1);
    CHECK(rep.lattice_index_D == 1);
    CHECK(rep.D_tilde == 1);
    CHECK(rep.marked_weight == 1);
    CHECK(rep.total == 1);
    CHECK(rep.obstruction_rank == 0);
}

TEST_CASE("determinant-two configuration") {
    CurveAnalysis det2 = fixture_analysis("det2.json");
    ConstraintSet cs = fixture_constraints("det2_constraints.json", 2);
    MultiplicityReport rep = lattice_multiplicity(det2, cs, 1);
    CHECK(rep.lattice_index_D == 2);
}

TEST_CASE("direct assembly agrees on non-superabundant fixtures") {
    CurveAnalysis line = fixture_analysis("line2d.json");
    ConstraintSet cs = fixture_constraints("line_constraints.json", 2);
    CHECK(eq_index_direct(line.curve, cs) ==
          lattice_multiplicity(line, cs, 1).lattice_index_D);

    CurveAnalysis det2 = fixture_analysis("det2.json");
    ConstraintSet cs2 = fixture_constraints("det2_constraints.json", 2);
    CHECK(eq_index_direct(det2.curve, cs2) ==
          lattice_multiplicity(det2, cs2, 1).lattice_index_D);
}

TEST_CASE("underconstrained configurations report a kernel") {
    // both point constraints on the same ray: the vertex still slides
    RawCurve raw = to_raw(fixture("line2d.json"));
    raw.markings = {"r1", "r1"};
    CurveAnalysis line = CurveAnalysis::of(validate_curve(raw));
    ConstraintSet cs = fixture_constraints("line_underconstrained.json", 2);
    try {
        lattice_multiplicity(line, cs, 1);
        FAIL("expected RankMismatch");
    } catch (const EnumerationError& e) {
        CHECK(e.kind == EnumerationError::Kind::RankMismatch);
        CHECK(std::string(e.what()).find("kernel") != std::string::npos);
    }
}

namespace {

// Generic line constraints for the twelve marked rays of the cubic: each
// constraint line passes through a point of the marked ray.
ConstraintSet cubic_constraints(const CurveAnalysis& a) {
    ConstraintSet cs;
    const std::vector<std::pair<std::vector<long>, std::vector<long>>> data{
        {{-1, 0, 0}, {0, 1, 2}},    // q2 at H2 + (0,-1,0): point (1,-1,0)
        {{-2, 1, 0}, {1, 0, 3}},    // q6
        {{-3, -1, 0}, {0, 1, 5}},   // qc1
        {{-1, -3, 0}, {1, 0, 2}},   // qc2
        {{3, -1, 0}, {1, 1, 3}},    // qx
        {{-1, 3, 0}, {1, 2, 1}},    // qy
        {{5, 3, 1}, {0, 1, 1}},     // ux at Wx + (1,1,1)
        {{4, 2, -2}, {1, 0, 1}},    // dx
        {{3, 5, 1}, {0, 1, 3}},     // uy
        {{2, 4, -1}, {1, 1, 1}},    // dy
        {{6, 6, 1}, {0, 1, 2}},     // uz
        {{5, 5, -3}, {1, 2, 0}},    // dz
    };
    // base points on the rays:
    const std::vector<std::vector<long>> points{
        {1, -1, 0}, {-2, 1, 0}, {-3, -1, 0}, {-1, -3, 0},
        {3, -1, 0}, {-1, 3, 0}, {5, 3, 1},   {4, 2, -2},
        {3, 5, 1},  {2, 4, -1}, {6, 6, 1},   {5, 5, -3},
    };
    for (size_t i = 0; i < data.size(); ++i)
        cs.constraints.push_back(
            line_through(rv(points[i]), to_int_vec(data[i].second)));
    (void)a;
    return cs;
}

}  // namespace

TEST_CASE("obstructed genus-one multiplicity is finite") {
    CurveAnalysis a = fixture_analysis("cubic.json");
    ConstraintSet cs = cubic_constraints(a);
    REQUIRE(matches(a.curve, cs));
    MultiplicityReport rep = lattice_multiplicity(a, cs, 1);
    CHECK(rep.obstruction_rank == 1);
    REQUIRE(rep.tied_pairs.size() == 1);
    CHECK(rep.tied_pairs[0].first == "Wx");
    CHECK(rep.tied_pairs[0].second == "Wy");
    CHECK(rep.lattice_index_D >= 1);
}

TEST_CASE("multiplicities are invariant under unimodular transforms") {
    std::mt19937 rng(987);
    CurveAnalysis det2 = fixture_analysis("det2.json");
    ConstraintSet cs = fixture_constraints("det2_constraints.json", 2);
    Int expected = lattice_multiplicity(det2, cs, 1).lattice_index_D;
    Int expected_delta = delta_factor(det2.curve, cs, 0);

    for (int trial = 0; trial < 8; ++trial) {
        auto T = random_unimodular(2, rng);
        auto t = random_shift(2, rng);
        TropicalCurve moved =
            validate_curve(transformed(to_raw(det2.curve), T, t));
        ConstraintSet moved_cs;
        for (const AffineConstraint& c : cs.constraints) {
            AffineConstraint m;
            RatVec base(2, Rat(0));
            for (size_t j = 0; j < 2; ++j)
                for (size_t i = 0; i < 2; ++i)
                    base[i] += Rat(T[j][i]) * c.base[j];
            m.base = add(base, t);
            for (const IntVec& s : c.span) {
                IntVec v(2, Int(0));
                for (size_t j = 0; j < 2; ++j)
                    for (size_t i = 0; i < 2; ++i) v[i] += T[j][i] * s[j];
                m.span.push_back(v);
            }
            m.codimension = c.codimension;
            moved_cs.constraints.push_back(std::move(m));
        }
        CurveAnalysis ma = CurveAnalysis::of(std::move(moved));
        CHECK(lattice_multiplicity(ma, moved_cs, 1).lattice_index_D ==
              expected);
        CHECK(delta_factor(ma.curve, moved_cs, 0) == expected_delta);
    }
}

TEST_CASE("tropical count aggregates and reports") {
    ConstraintSet cs = fixture_constraints("line_constraints.json", 2);

    // empty list
    CountReport empty = tropical_count({}, cs, 1);
    CHECK(empty.total == 0);

    // single multiplicity-one weight-one curve
    std::vector<std::pair<std::string, CurveAnalysis>> one;
    one.emplace_back("line", fixture_analysis("line2d.json"));
    CountReport single = tropical_count(one, cs, 1);
    CHECK(single.total == 1);
    REQUIRE(single.entries.size() == 1);
    CHECK(single.entries[0].matched);
    CHECK(single.entries[0].verdict == Verdict::SMOOTHABLE);

    // recomputation oracle: two copies sum their contributions
    std::vector<std::pair<std::string, CurveAnalysis>> two;
    two.emplace_back("a", fixture_analysis("line2d.json"));
    two.emplace_back("b", fixture_analysis("line2d.json"));
    CountReport pair = tropical_count(two, cs, 1);
    Int by_hand = 0;
    for (const auto& [label, a] : two)
        by_hand += lattice_multiplicity(a, cs, 1).total;
    CHECK(pair.total == by_hand);
}
