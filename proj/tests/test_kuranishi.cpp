#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "tropic/kuranishi.hpp"

using namespace tropic;
using namespace tropic::testing;

namespace {

PathNode tri(long k, long l, long m) {
    PathNode n;
    n.type = NodeType::TRIVALENT;
    n.k = k;
    n.l = l;
    n.m = m;
    return n;
}

PathNode tri(Rat k, Rat l, Rat m) {
    PathNode n;
    n.type = NodeType::TRIVALENT;
    n.k = k;
    n.l = l;
    n.m = m;
    return n;
}

PathNode ex1(Rat a, Rat b) {
    PathNode n;
    n.type = NodeType::EXAMPLE1;
    n.a = a;
    n.b = b;
    return n;
}

PathEdgeData edge(long len, long w = 1) {
    PathEdgeData e;
    e.integral_length = len;
    e.weight = w;
    return e;
}

PreLogPathConfig ones(size_t edges_count) {
    PreLogPathConfig c;
    c.label = "p";
    for (size_t i = 0; i + 1 <= edges_count; ++i) c.edges.push_back(edge(1));
    for (size_t i = 0; i <= edges_count; ++i) c.nodes.push_back(tri(1, 1, 1));
    c.direction = to_int_vec({0, 0, 1});
    return c;
}

// Independent oracle: evaluate the ratio product directly.
Rat naive_product(const PreLogPathConfig& c) {
    Rat p = 1;
    const size_t last = c.nodes.size() - 1;
    for (size_t i = 0; i <= last; ++i) {
        const PathNode& nd = c.nodes[i];
        if (i == 0) {
            p *= (nd.type == NodeType::EXAMPLE1) ? Rat(nd.a / nd.b)
                                                 : Rat(nd.k / nd.m);
        } else if (i == last) {
            p *= nd.l / nd.m;
        } else {
            p *= (nd.l / nd.m) * (nd.k / nd.m);
        }
    }
    return p;
}

std::mt19937 rng_global(112233);

Rat random_nonzero() {
    std::uniform_int_distribution<long> num(-9, 9);
    std::uniform_int_distribution<long> den(1, 7);
    long n = num(rng_global);
    if (n == 0) n = 3;
    Rat q(n, den(rng_global));
    q.canonicalize();
    return q;
}

PreLogPathConfig random_config(bool example1_start) {
    std::uniform_int_distribution<long> rlen(1, 4);
    size_t edges_count = 1 + rng_global() % 4;
    PreLogPathConfig c;
    c.label = "p";
    c.direction = to_int_vec({0, 0, 1});
    for (size_t i = 0; i < edges_count; ++i) {
        long w = 1 + rng_global() % 3;
        c.edges.push_back(edge(rlen(rng_global) * w, w));
    }
    for (size_t i = 0; i <= edges_count; ++i) {
        if (i == 0 && example1_start)
            c.nodes.push_back(ex1(random_nonzero(), random_nonzero()));
        else
            c.nodes.push_back(
                tri(random_nonzero(), random_nonzero(), random_nonzero()));
    }
    return c;
}

}  // namespace

TEST_CASE("leading contribution of an all-ones path") {
    for (size_t edges_count : {1, 2, 3, 5}) {
        LeadingContribution c = leading_contribution(ones(edges_count));
        CHECK(c.order == Int(edges_count));
        CHECK((c.coefficient == 1 || c.coefficient == -1));
        CHECK(c.coefficient == 1);  // positive product convention
    }
}

TEST_CASE("example-1 start with a = 0 kills the leading coefficient") {
    PreLogPathConfig c = ones(2);
    c.nodes[0] = ex1(Rat(0), Rat(5));
    LeadingContribution lc = leading_contribution(c);
    CHECK(lc.coefficient == 0);
    CHECK(lc.order == 2);
}

TEST_CASE("order adds normalized lengths and must be an integer") {
    PreLogPathConfig c = ones(2);
    c.edges[0] = edge(6, 2);  // 3
    c.edges[1] = edge(4, 4);  // 1
    CHECK(leading_contribution(c).order == 4);

    c.edges[1] = edge(3, 2);  // 3/2: non-integral total
    CHECK_THROWS_AS(leading_contribution(c), KuranishiError);
}

TEST_CASE("coefficient equals the naive product oracle, randomized") {
    for (int trial = 0; trial < 100; ++trial) {
        PreLogPathConfig c = random_config(trial % 3 == 0);
        LeadingContribution lc = leading_contribution(c);
        CHECK(lc.coefficient == naive_product(c));
        Rat order = 0;
        for (const auto& e : c.edges)
            order += e.integral_length / Rat(e.weight);
        CHECK(Rat(lc.order) == order);
    }
}

TEST_CASE("coefficient invariance under per-node rescaling") {
    for (int trial = 0; trial < 50; ++trial) {
        PreLogPathConfig c = random_config(false);
        Rat before = leading_contribution(c).coefficient;
        size_t node = rng_global() % c.nodes.size();
        Rat lambda = random_nonzero();
        c.nodes[node].k *= lambda;
        c.nodes[node].l *= lambda;
        c.nodes[node].m *= lambda;
        CHECK(leading_contribution(c).coefficient == before);
    }
}

TEST_CASE("zeta twist never changes the contribution") {
    PreLogPathConfig base = ones(3);
    LeadingContribution ref = leading_contribution(base);

    CHECK(leading_contribution(zeta_twist(base, 1, Rat(1))).coefficient ==
          ref.coefficient);
    CHECK(leading_contribution(zeta_twist(base, 1, Rat(-1))).coefficient ==
          ref.coefficient);

    for (int trial = 0; trial < 60; ++trial) {
        PreLogPathConfig c = random_config(trial % 4 == 0);
        LeadingContribution before = leading_contribution(c);
        size_t e = rng_global() % c.edges.size();
        PreLogPathConfig twisted = zeta_twist(c, e, random_nonzero());
        LeadingContribution after = leading_contribution(twisted);
        CHECK(after.coefficient == before.coefficient);
        CHECK(after.order == before.order);
    }
    CHECK_THROWS_AS(zeta_twist(base, 0, Rat(0)), KuranishiError);
}

TEST_CASE("pairing with H detects cancellation") {
    CurveAnalysis a = fixture_analysis("cubic.json");
    ObstructionBasis H = dual_obstruction_basis(a);
    REQUIRE(H.dimension == 1);
    const IntVec& g = *H.basis[0].global;  // (0,0,1) up to sign

    // two contributions at equal order engineered to cancel
    PreLogPathConfig p1 = ones(2);
    p1.direction = to_int_vec({1, 1, 1});
    PreLogPathConfig p2 = ones(2);
    p2.nodes[0].k = -1;  // coefficient -1
    p2.direction = to_int_vec({0, 0, 1});
    // <g, d1> * 1 + <g, d2> * (-1) = 0 when both pair to the same value
    std::vector<LeadingContribution> contribs{leading_contribution(p1),
                                              leading_contribution(p2)};
    PairingReport rep = pair_with_H(contribs, H);
    REQUIRE(rep.by_order.size() == 1);
    CHECK(rep.leading_vanishes);

    // a single contribution with nonzero pairing survives
    PairingReport solo = pair_with_H({leading_contribution(p1)}, H);
    CHECK_FALSE(solo.leading_vanishes);
    CHECK(solo.by_order[0].sums[0] == dot(g, to_rat_vec(p1.direction)));

    // directions inside the loop plane pair to zero
    PreLogPathConfig flat = ones(2);
    flat.direction = to_int_vec({3, -2, 0});
    PairingReport zero = pair_with_H({leading_contribution(flat)}, H);
    CHECK(zero.leading_vanishes);
}

TEST_CASE("mixed orders group ascending; lower order dominates") {
    CurveAnalysis a = fixture_analysis("cubic.json");
    ObstructionBasis H = dual_obstruction_basis(a);
    PreLogPathConfig fast = ones(1);
    fast.direction = to_int_vec({0, 0, 1});
    PreLogPathConfig slow = ones(3);
    slow.direction = to_int_vec({0, 0, 1});
    PairingReport rep = pair_with_H(
        {leading_contribution(slow), leading_contribution(fast)}, H);
    REQUIRE(rep.by_order.size() == 2);
    CHECK(rep.by_order[0].order == 1);
    CHECK(rep.by_order[1].order == 3);
    CHECK_FALSE(rep.leading_vanishes);
}

TEST_CASE("leading form system on the two-tied-vertex cubic") {
    CurveAnalysis a = fixture_analysis("cubic.json");
    std::map<std::string, PreLogPathConfig> configs;

    PreLogPathConfig wx = ones(2);
    wx.label = "Wx";
    wx.direction = to_int_vec({0, 0, -1});
    configs["Wx"] = wx;

    PreLogPathConfig wy = ones(2);
    wy.label = "Wy";
    wy.nodes[1].k = 2;  // different interior data
    wy.direction = to_int_vec({0, 0, -1});
    configs["Wy"] = wy;

    PreLogPathConfig wz = ones(3);
    wz.label = "Wz";
    wz.direction = to_int_vec({0, 0, -1});
    configs["Wz"] = wz;

    LeadingFormSystem sys = leading_form_system(a, configs, 1);
    CHECK(sys.adapted_basis.size() == 1);
    CHECK(sys.forms.size() == 1);
    CHECK(sys.rank == 1);
    CHECK(sys.codimension == 1);
    // only the minimal-order vertices contribute to the form
    bool has_wx = false, has_wz = false;
    for (const auto& [slot, coeff] : sys.forms[0].coeffs) {
        if (slot.rfind("Wx:", 0) == 0) has_wx = true;
        if (slot.rfind("Wz:", 0) == 0) has_wz = true;
    }
    CHECK(has_wx);
    CHECK_FALSE(has_wz);
}

TEST_CASE("leading form system is empty for unobstructed curves") {
    CurveAnalysis a = fixture_analysis("gamma2.json");
    // genus-two fixture: out of scope for the genus-one form system
    CHECK_THROWS_AS(
        leading_form_system(a, {}, 1), KuranishiError);
}

TEST_CASE("leading form system refuses non-well-spaced input") {
    CurveAnalysis a = fixture_analysis("cubic_non_a.json");
    std::map<std::string, PreLogPathConfig> configs;
    PreLogPathConfig wz = ones(1);
    wz.label = "Wz";
    wz.direction = to_int_vec({0, 0, -1});
    configs["Wz"] = wz;
    try {
        leading_form_system(a, configs, 1);
        FAIL("expected NotWellSpaced");
    } catch (const KuranishiError& e) {
        CHECK(e.kind == KuranishiError::Kind::NotWellSpaced);
    }
}

TEST_CASE("tropicalization lengths") {
    // |k/m| = tau^2, |l/m| = tau^3 gives length 5 at every modulus
    for (double tau : {10.0, 1000.0}) {
        long t = std::lround(tau);
        std::vector<PathNode> nodes{tri(Rat(t) * Rat(t), Rat(1), Rat(1)),
                                    tri(Rat(1), Rat(t) * Rat(t) * Rat(t),
                                        Rat(1))};
        auto lengths = tropicalization_lengths(nodes, tau);
        REQUIRE(lengths.size() == 1);
        CHECK(std::fabs(lengths[0] - 5.0) < 1e-12);
    }

    // all ratios of absolute value one: length zero
    std::vector<PathNode> unit{tri(1, 2, 2), tri(3, 5, 5)};
    unit[0].k = Rat(1);
    unit[0].m = Rat(1);
    unit[1].l = Rat(-1);
    unit[1].m = Rat(1);
    auto zero = tropicalization_lengths(unit, 50.0);
    REQUIRE(zero.size() == 1);
    CHECK(std::fabs(zero[0]) < 1e-12);

    CHECK_THROWS_AS(tropicalization_lengths(unit, 1.0), KuranishiError);
    CHECK_THROWS_AS(tropicalization_lengths(unit, 0.5), KuranishiError);
}

TEST_CASE("matching condition at the cancellation fixture") {
    // paths with coefficient ratio c = 8
    std::vector<PathNode> p{tri(8, 1, 1), tri(1, 4, 1)};
    std::vector<PathNode> q{tri(2, 1, 1), tri(1, 2, 1)};
    for (double tau : {1e3, 1e6}) {
        double dp = tropicalization_lengths(p, tau)[0];
        double dq = tropicalization_lengths(q, tau)[0];
        CHECK(matching_residual(dp, dq, 8.0, tau) < 1e-9);
        // the gap to the equal-length locus decays like 1/log(tau)
        double gap = std::fabs(dp - dq);
        CHECK(std::fabs(gap - std::log(8.0) / std::log(tau)) < 1e-12);
    }
    double gap3 = std::fabs(tropicalization_lengths(p, 1e3)[0] -
                            tropicalization_lengths(q, 1e3)[0]);
    double gap6 = std::fabs(tropicalization_lengths(p, 1e6)[0] -
                            tropicalization_lengths(q, 1e6)[0]);
    CHECK(std::fabs(gap6 / gap3 - 0.5) < 1e-6);
}
