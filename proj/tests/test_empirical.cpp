#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "horolab/empirical.hpp"
#include "horolab/errors.hpp"

using namespace horolab;

namespace {

ProbeSet probes_of(std::vector<SeqVector> pts) {
    ProbeSet ps;
    ps.points = std::move(pts);
    return ps;
}

}  // namespace

TEST_CASE("orbit prefixes") {
    const MapExpr T = MapExpr::prepend_shift(1.0);
    const auto pts = orbit(T, SeqVector::zero(), 3);
    REQUIRE(pts.size() == 4);
    CHECK(pts[0] == SeqVector::zero());
    CHECK(pts[1] == SeqVector({1.0}));
    CHECK(pts[2] == SeqVector({1.0, 1.0}));
    CHECK(pts[3] == SeqVector({1.0, 1.0, 1.0}));

    const auto ident = orbit(MapExpr::identity(), SeqVector({2.0}), 5);
    for (const SeqVector& p : ident) CHECK(p == SeqVector({2.0}));

    // idempotent after one step
    const SeqVector b({1.0, -1.0});
    const auto aff = orbit(MapExpr::affine(MapExpr::diagonal(SeqVector::zero()), b),
                           SeqVector::zero(), 3);
    CHECK(aff[0] == SeqVector::zero());
    CHECK(aff[1] == b);
    CHECK(aff[2] == b);
    CHECK(aff[3] == b);

    CHECK_THROWS_AS(orbit(T, SeqVector::zero(), 0), std::invalid_argument);
}

TEST_CASE("probe set validation") {
    CHECK_THROWS_AS(probes_of({}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(probes_of({SeqVector({1.0})}).validate(), std::invalid_argument);
    CHECK_NOTHROW(probes_of({SeqVector({1.0}), SeqVector::zero()}).validate());
}

TEST_CASE("shift orbit limits in l1") {
    const MapExpr T = MapExpr::prepend_shift(1.0);
    const SpaceSpec l1 = SpaceSpec::lp(1.0);
    const ProbeSet probes =
        probes_of({SeqVector::zero(), SeqVector::unit(1), SeqVector::unit(1, 2.0)});

    const auto pts = orbit(T, SeqVector::zero(), 64);
    const EmpiricalFunctional e = empirical_limit(pts, probes, l1, 1e-12);
    CHECK(e.all_converged());
    // finite-sum oracle: h(x) = sum (|x_k - 1| - 1) gives {0, -1, 0}
    CHECK(e.values[0] == 0.0);
    CHECK(e.values[1] == -1.0);
    CHECK(e.values[2] == 0.0);

    const MatchReport m = match_hypothesis(e, Functional::shift_l1(), 1e-12);
    CHECK(m.pass);
    CHECK(m.max_discrepancy == 0.0);

    const ZfpScan scan = zfp_scan(e, 1e-9);
    CHECK(!scan.zero_on_probes);
    CHECK(scan.witness == 1);  // first nonzero probe is e1
    CHECK(scan.witness_value == -1.0);
}

TEST_CASE("shift orbit limit in l2 decays like 1/sqrt(n)") {
    const MapExpr T = MapExpr::prepend_shift(1.0);
    const SpaceSpec l2 = SpaceSpec::lp(2.0);
    const long n = 10000;
    const ProbeSet probes = probes_of({SeqVector::zero(), SeqVector::unit(1)});
    const EmpiricalFunctional e =
        empirical_limit_orbit(T, SeqVector::zero(), n, probes, l2, 1e-3);
    // closed-form oracle: h_n(e1) = sqrt(n-1) - sqrt(n)
    const double oracle = std::sqrt(static_cast<double>(n - 1)) - std::sqrt(static_cast<double>(n));
    CHECK(e.values[1] == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(std::abs(e.values[1]) < 1e-2);
}

TEST_CASE("constant sequences reproduce internal functionals exactly") {
    const SpaceSpec l2 = SpaceSpec::lp(2.0);
    const SeqVector w({1.0, -2.0, 3.0});
    const std::vector<SeqVector> pts(6, w);
    const ProbeSet probes = ProbeSet::defaults(std::nullopt, 10, 99, true);
    const EmpiricalFunctional e = empirical_limit(pts, probes, l2, 0.0);
    CHECK(e.all_converged());
    CHECK(match_hypothesis(e, internal(w, l2), 0.0).pass);
}

TEST_CASE("streaming orbit driver agrees with the materialized list") {
    const MapExpr T = MapExpr::prepend_shift(1.0);
    const SpaceSpec l1 = SpaceSpec::lp(1.0);
    const ProbeSet probes = probes_of({SeqVector::zero(), SeqVector::unit(2), SeqVector({0.5})});
    const long n = 500;

    auto pts = orbit(T, SeqVector::zero(), n);
    pts.erase(pts.begin());  // the streaming driver starts at T x0
    const EmpiricalFunctional a = empirical_limit(pts, probes, l1, 1e-12);
    const EmpiricalFunctional b = empirical_limit_orbit(T, SeqVector::zero(), n, probes, l1, 1e-12);
    REQUIRE(a.values.size() == b.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        CHECK(a.values[i] == b.values[i]);
        CHECK(a.spreads[i] == b.spreads[i]);
    }
}

TEST_CASE("accepted tables are 1-Lipschitz and scale correctly") {
    const MapExpr T = MapExpr::prepend_shift(1.0);
    const SpaceSpec l2 = SpaceSpec::lp(2.0);
    const ProbeSet probes = ProbeSet::defaults(T, 20, 7);
    const auto pts = orbit(T, SeqVector::zero(), 2000);

    const EmpiricalFunctional e = empirical_limit(pts, probes, l2, 1e-2);
    CHECK(lipschitz_violation(e, l2) <= 2e-2);

    // ball-scaling construction: each rescaled table m h(v/m) stays 1-Lipschitz
    for (double m : {1.0, 2.0, 4.0}) {
        const EmpiricalFunctional em = scaled_empirical_limit(pts, probes, l2, m, 1e-2);
        CHECK(lipschitz_violation(em, l2) <= 2e-2 * m);
    }

    // exact identity on an internal table: m h_w(v/m) = ||v - m w|| - ||m w||
    const SeqVector w({2.0, 1.0});
    const std::vector<SeqVector> cpts(5, w);
    const EmpiricalFunctional scaled = scaled_empirical_limit(cpts, probes, l2, 2.0, 0.0);
    for (std::size_t i = 0; i < scaled.probes.size(); ++i) {
        const double want = distance(scaled.probes[i], 2.0 * w, l2) - norm(2.0 * w, l2);
        CHECK(scaled.values[i] == doctest::Approx(want).epsilon(1e-13));
    }
}

TEST_CASE("non-convergent probes are flagged, not thrown") {
    // alternating sequence: h_n oscillates at probes away from the midpoint
    std::vector<SeqVector> pts;
    for (int i = 0; i < 40; ++i)
        pts.push_back(i % 2 ? SeqVector({4.0}) : SeqVector({-4.0}));
    const ProbeSet probes = probes_of({SeqVector::zero(), SeqVector::unit(1)});
    const EmpiricalFunctional e = empirical_limit(pts, probes, SpaceSpec::lp(2.0), 1e-9);
    CHECK(!e.all_converged());
    CHECK(e.converged[0]);   // h_n(0) = 0 always
    CHECK(!e.converged[1]);  // |e1 -+ 4| alternates
}

TEST_CASE("asymptotic center of escaping bumps is the weak limit") {
    const SpaceSpec l2 = SpaceSpec::lp(2.0);
    const SeqVector a({1.0, -0.5, 2.0, 0.0, 0.25});
    std::vector<SeqVector> pts;
    for (std::size_t j = 1; j <= 30; ++j) pts.push_back(a + SeqVector::unit(5 + j));

    // oracle: ||x - a_n||^2 = ||x - a||^2 + 1 for x supported on 1..5
    const CenterReport r = asymptotic_center(pts, l2, 5, 20);
    CHECK(distance(r.center, a, l2) <= 1e-9);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.margin > 0.0);
    CHECK(!r.non_unique);
}

TEST_CASE("asymptotic center of a constant sequence is the point") {
    const SeqVector w({3.0, -1.0});
    const std::vector<SeqVector> pts(8, w);
    const CenterReport r = asymptotic_center(pts, SpaceSpec::lp(2.0), 2, 20);
    CHECK(r.center == w);
    CHECK(r.value == 0.0);
}

TEST_CASE("asymptotic center of two alternating points is the midpoint") {
    const SeqVector u({2.0, 0.0, 1.0});
    const SeqVector v({0.0, 4.0, 1.0});
    std::vector<SeqVector> pts;
    for (int i = 0; i < 24; ++i) pts.push_back(i % 2 ? u : v);
    const CenterReport r = asymptotic_center(pts, SpaceSpec::lp(2.0), 3, 20);
    CHECK(distance(r.center, 0.5 * (u + v), SpaceSpec::lp(2.0)) <= 1e-9);
}

TEST_CASE("opial checks") {
    std::vector<SeqVector> pts;
    for (std::size_t i = 1; i <= 40; ++i) pts.push_back(SeqVector::unit(i));

    const OpialReport l2r = opial_check(pts, SeqVector::zero(),
                                        {SeqVector::unit(1), SeqVector::zero()}, SpaceSpec::lp(2.0));
    CHECK(l2r.pass);
    CHECK(l2r.liminf_limit == 1.0);
    CHECK(l2r.liminf_challengers[0] == std::sqrt(2.0));
    CHECK(l2r.skipped[1] == 1);  // the weak limit itself is excluded
    CHECK(l2r.margin == std::sqrt(2.0) - 1.0);

    const OpialReport l1r =
        opial_check(pts, SeqVector::zero(), {SeqVector::unit(1)}, SpaceSpec::lp(1.0));
    CHECK(l1r.pass);
    CHECK(l1r.liminf_challengers[0] == 2.0);
    CHECK(l1r.margin == 1.0);
}

TEST_CASE("direct-sum empirical limits reach the projection functional") {
    const SpaceSpec A = SpaceSpec::lp(1.0);
    const SpaceSpec B = SpaceSpec::lp(2.0);
    const SpaceSpec Xinf = SpaceSpec::direct_sum(A, B, std::numeric_limits<double>::infinity());

    const SeqVector a0({1.0, 2.0});
    std::vector<DirectSumPoint> pts;
    for (int k = 1; k <= 40; ++k)
        pts.push_back({a0, SeqVector::unit(1, 250.0 * k)});  // ||b_n|| -> 1e4

    std::vector<DirectSumPoint> probes = {{SeqVector::zero(), SeqVector::zero()},
                                          {SeqVector({1.0}), SeqVector({1.0, 1.0})},
                                          {SeqVector::zero(), SeqVector::unit(1, -2.0)}};
    const EmpiricalPair e = empirical_limit_pairs(pts, probes, Xinf, 1e-3);
    CHECK(e.all_converged());
    const MatchReport m = match_hypothesis_pairs(
        e, [](const DirectSumPoint& x) { return -x.right.coord(1); }, 1e-3);
    CHECK(m.pass);
}

TEST_CASE("empirical input validation") {
    const ProbeSet probes = probes_of({SeqVector::zero()});
    CHECK_THROWS_AS(empirical_limit({SeqVector::zero()}, probes, SpaceSpec::lp(2.0), 1e-9),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        empirical_limit_orbit(MapExpr::identity(), SeqVector::zero(), 2, probes,
                              SpaceSpec::lp(2.0), 1e-9),
        std::invalid_argument);
}
