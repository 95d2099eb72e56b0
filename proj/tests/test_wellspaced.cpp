#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "tropic/moduli.hpp"

using namespace tropic;
using namespace tropic::testing;

TEST_CASE("path lengths on the image graph") {
    CurveAnalysis a = fixture_analysis("cubic.json");
    REQUIRE(a.image);

    // single edge of integral length 3 and weight 1
    PathLengthResult r3 = path_length(*a.image, {"H4", "Wz"});
    CHECK(r3.total == 3);
    CHECK(r3.integral);

    PathLengthResult two = path_length(*a.image, {"Wx", "Tx", "H3"});
    CHECK(two.total == 2);
    REQUIRE(two.steps.size() == 2);
    CHECK(two.steps[0].normalized == 1);

    CHECK_THROWS_AS(path_length(*a.image, {"H1", "H4"}), CurveError);

    // integral length 2, weight 2: normalized length 1
    RawCurve raw;
    raw.ambient_rank = 3;
    raw.vertices.emplace_back("u", RatVec{Rat(0), Rat(0), Rat(0)});
    raw.vertices.emplace_back("v", RatVec{Rat(2), Rat(2), Rat(0)});
    RawEdge heavy;
    heavy.id = "m";
    heavy.bounded = true;
    heavy.v1 = "u";
    heavy.v2 = "v";
    heavy.weight = 2;
    raw.edges.push_back(heavy);
    auto add_ray = [&](const std::string& id, const std::string& at,
                       std::vector<long> d) {
        RawEdge r;
        r.id = id;
        r.bounded = false;
        r.v1 = at;
        r.direction = to_int_vec(d);
        raw.edges.push_back(r);
    };
    add_ray("r1", "u", {-1, 0, 0});
    add_ray("r2", "u", {-1, -2, 0});
    add_ray("r3", "v", {1, 0, 0});
    add_ray("r4", "v", {1, 2, 0});
    CurveAnalysis halved = CurveAnalysis::of(validate_curve(raw));
    REQUIRE(halved.image);
    PathLengthResult r = path_length(*halved.image, {"u", "v"});
    CHECK(r.total == 1);
    CHECK(r.integral);
    // concatenation is additive: reuse steps from the cubic
    CHECK(r3.total + r.total == 4);
}

TEST_CASE("gamma prime of the cubic: three one-valent vertices") {
    CurveAnalysis a = fixture_analysis("cubic.json");
    GammaPrime gp = gamma_prime(a);
    CHECK(gp.span.size() == 2);
    CHECK(gp.one_valent == std::vector<std::string>{"Wx", "Wy", "Wz"});
}

TEST_CASE("planar genus-one curve: gamma prime is everything") {
    // square loop with in-plane rays, ambient R^2
    RawCurve raw;
    raw.ambient_rank = 2;
    auto vertex = [&](const std::string& id, long x, long y) {
        raw.vertices.emplace_back(id, RatVec{Rat(x), Rat(y)});
    };
    auto bedge = [&](const std::string& id, const std::string& u,
                     const std::string& v) {
        RawEdge e;
        e.id = id;
        e.bounded = true;
        e.v1 = u;
        e.v2 = v;
        raw.edges.push_back(e);
    };
    auto redge = [&](const std::string& id, const std::string& v,
                     std::vector<long> d) {
        RawEdge e;
        e.id = id;
        e.bounded = false;
        e.v1 = v;
        e.direction = to_int_vec(d);
        raw.edges.push_back(e);
    };
    vertex("q1", 0, 0);
    vertex("q2", 1, 0);
    vertex("q3", 1, 1);
    vertex("q4", 0, 1);
    bedge("s1", "q1", "q2");
    bedge("s2", "q2", "q3");
    bedge("s3", "q3", "q4");
    bedge("s4", "q4", "q1");
    redge("r1", "q1", {-1, -1});
    redge("r2", "q2", {1, -1});
    redge("r3", "q3", {1, 1});
    redge("r4", "q4", {-1, 1});
    CurveAnalysis a = CurveAnalysis::of(validate_curve(raw));
    GammaPrime gp = gamma_prime(a);
    CHECK(gp.one_valent.empty());
    CHECK(gp.edges.size() == a.image->edges.size());
    // loop spans the ambient space: no candidate hyperplanes
    CHECK(candidate_hyperplanes(a).empty());
    // and the curve is non-superabundant
    CHECK(dual_obstruction_basis(a).dimension == 0);
    SmoothabilityVerdict v = smoothability_verdict(a, 1);
    CHECK(v.verdict == Verdict::SMOOTHABLE);
    CHECK(v.tag == TheoremTag::NON_SUPERABUNDANT);
}

TEST_CASE("codimension-one loop span gives exactly one hyperplane stratum") {
    CurveAnalysis a = fixture_analysis("cubic.json");
    auto planes = candidate_hyperplanes(a);
    REQUIRE(planes.size() == 1);
    CHECK(same_lattice({planes[0].normal}, {to_int_vec({0, 0, 1})}));
    CHECK(planes[0].offset == 0);
}

TEST_CASE("example-2 fixtures stratify hyperplanes beyond the base") {
    CurveAnalysis b = fixture_analysis("example2b_n4.json");
    auto planes = candidate_hyperplanes(b);
    CHECK(planes.size() >= 2);  // generic stratum plus at least one special
}

TEST_CASE("cubic verdicts") {
    unsigned seed = 1;

    SmoothabilityVerdict ok =
        smoothability_verdict(fixture_analysis("cubic.json"), seed);
    CHECK(ok.verdict == Verdict::SMOOTHABLE);
    CHECK(ok.tag == TheoremTag::THM_IMMERSIVE);
    REQUIRE(ok.wellspaced);
    REQUIRE(ok.wellspaced->witnesses.size() == 1);
    CHECK(ok.wellspaced->witnesses[0].branch == WitnessBranch::TWO_MINIMA);
    CHECK(ok.wellspaced->witnesses[0].minimum == ExtRat::of(Rat(2)));
    CHECK(ok.wellspaced->witnesses[0].minimum_count == 2);

    SmoothabilityVerdict bad_a =
        smoothability_verdict(fixture_analysis("cubic_non_a.json"), seed);
    CHECK(bad_a.verdict == Verdict::NOT_SMOOTHABLE);

    SmoothabilityVerdict bad_b =
        smoothability_verdict(fixture_analysis("cubic_non_b.json"), seed);
    CHECK(bad_b.verdict == Verdict::NOT_SMOOTHABLE);

    SmoothabilityVerdict ex1 =
        smoothability_verdict(fixture_analysis("cubic_weight2.json"), seed);
    CHECK(ex1.verdict == Verdict::SMOOTHABLE);
    CHECK(ex1.tag == TheoremTag::THM_GENERAL);
    REQUIRE(ex1.wellspaced);
    bool exception_taken = false;
    for (const auto& w : ex1.wellspaced->witnesses)
        if (w.branch == WitnessBranch::FOUR_VALENT_EXCEPTION &&
            w.exception_class == "EXAMPLE1")
            exception_taken = true;
    CHECK(exception_taken);

    SmoothabilityVerdict move_b2 =
        smoothability_verdict(fixture_analysis("cubic_move_b2.json"), seed);
    CHECK(move_b2.verdict == Verdict::NOT_SMOOTHABLE);
}

TEST_CASE("example 2 case split: (b) passes, (c) fails") {
    unsigned seed = 1;
    SmoothabilityVerdict b =
        smoothability_verdict(fixture_analysis("example2b_n4.json"), seed);
    CHECK(b.verdict == Verdict::SMOOTHABLE);
    REQUIRE(b.wellspaced);
    bool b_exception = false;
    for (const auto& w : b.wellspaced->witnesses)
        if (w.exception_class == "EXAMPLE2B") b_exception = true;
    CHECK(b_exception);

    SmoothabilityVerdict c =
        smoothability_verdict(fixture_analysis("example2c_n4.json"), seed);
    CHECK(c.verdict == Verdict::NOT_SMOOTHABLE);
}

TEST_CASE("kuranishi zero check") {
    CHECK(kuranishi_zero_check(fixture_analysis("ex_superabundant.json")));
    CHECK(kuranishi_zero_check(fixture_analysis("gamma1.json")));
    CHECK_FALSE(kuranishi_zero_check(fixture_analysis("cubic.json")));
    CHECK_FALSE(kuranishi_zero_check(fixture_analysis("genus2_eq.json")));
    CHECK_FALSE(kuranishi_zero_check(fixture_analysis("ex_high.json")));
}

TEST_CASE("K = 0 implies smoothable") {
    for (const char* name :
         {"ex_superabundant.json", "gamma1.json", "gamma2.json"}) {
        CurveAnalysis a = fixture_analysis(name);
        SmoothabilityVerdict v = smoothability_verdict(a, 1);
        if (kuranishi_zero_check(a))
            CHECK(v.verdict == Verdict::SMOOTHABLE);
    }
    SmoothabilityVerdict sup = smoothability_verdict(
        fixture_analysis("ex_superabundant.json"), 1);
    CHECK(sup.verdict == Verdict::SMOOTHABLE);
    CHECK(sup.tag == TheoremTag::K_ZERO);
}

TEST_CASE("genus-two family: smoothable exactly on the equal-length locus") {
    unsigned seed = 1;
    SmoothabilityVerdict eq =
        smoothability_verdict(fixture_analysis("genus2_eq.json"), seed);
    CHECK(eq.verdict == Verdict::SMOOTHABLE);
    CHECK(eq.tag == TheoremTag::EXT_UNIQUE_BOUQUET);

    SmoothabilityVerdict neq =
        smoothability_verdict(fixture_analysis("genus2_neq.json"), seed);
    CHECK(neq.verdict == Verdict::NOT_SMOOTHABLE);
}

TEST_CASE("the second dual vector couples trivially in the genus-two family") {
    CurveAnalysis a = fixture_analysis("genus2_eq.json");
    WellSpacedResult ws = well_spaced_check(a, 1);
    CHECK(ws.well_spaced);
    // some stratum must be entirely infinite-distance (the b-side loop)
    bool vacuous_stratum = false;
    for (const auto& w : ws.witnesses)
        if (w.vacuous && !w.candidates.empty()) vacuous_stratum = true;
    CHECK(vacuous_stratum);
}

TEST_CASE("multi-bouquet higher genus is undetermined") {
    SmoothabilityVerdict v =
        smoothability_verdict(fixture_analysis("ex_high.json"), 1);
    CHECK(v.verdict == Verdict::UNDETERMINED);
    CHECK(v.reason.find("bouquet") != std::string::npos);
}

TEST_CASE("verdicts are invariant under unimodular transforms") {
    std::mt19937 rng(515151);
    for (const char* name :
         {"cubic.json", "cubic_non_a.json", "cubic_weight2.json",
          "genus2_eq.json", "genus2_neq.json", "ex_superabundant.json"}) {
        CurveAnalysis a = fixture_analysis(name);
        Verdict expected = smoothability_verdict(a, 1).verdict;
        for (int trial = 0; trial < 4; ++trial) {
            TropicalCurve moved;
            apply_transform(a.curve, rng, moved);
            CurveAnalysis b = CurveAnalysis::of(std::move(moved));
            CHECK(smoothability_verdict(b, 1).verdict == expected);
        }
    }
}

TEST_CASE("non-superabundant genus-one curves are vacuously well spaced") {
    std::mt19937 rng(246);
    int done = 0;
    while (done < 8) {
        auto curve = random_genus_one(3, rng);
        if (!curve) continue;
        CurveAnalysis a = CurveAnalysis::of(*curve);
        if (!a.profile.a_ok || !a.profile.c_ok) continue;
        if (dual_obstruction_basis(a).dimension != 0) continue;
        WellSpacedResult ws = well_spaced_check(a, 1);
        CHECK(ws.well_spaced);
        ++done;
    }
}
