#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "horolab/engine.hpp"
#include "horolab/errors.hpp"
#include "horolab/invariance.hpp"

using namespace horolab;

TEST_CASE("cesaro averages") {
    const SeqVector seed({3.0, -1.0});
    CHECK(cesaro_average(MapExpr::identity(), seed, 7) == seed);

    // orbit of x -> b from 0 is 0, b, b, ...; the mean of n terms is (n-1)/n b
    const SeqVector b({4.0, -8.0});
    const MapExpr to_b = MapExpr::affine(MapExpr::diagonal(SeqVector::zero()), b);
    CHECK(cesaro_average(to_b, SeqVector::zero(), 4) == SeqVector({3.0, -6.0}));

    // shift from 0, n = 4: mean of (), (1), (1,1), (1,1,1)
    CHECK(cesaro_average(MapExpr::prepend_shift(1.0), SeqVector::zero(), 4) ==
          SeqVector({0.75, 0.5, 0.25}));

    CHECK_THROWS_AS(cesaro_average(MapExpr::identity(), seed, 0), std::invalid_argument);
}

TEST_CASE("nested averaging reduces to cesaro for a singleton family") {
    const MapExpr T = build_tmu(MapExpr::diagonal(SeqVector({0.5, -0.5})), SeqVector({1.0}), 0.5);
    FamilySpec F;
    F.members = {{"T", T}};
    const SeqVector w({2.0, 2.0});
    const AveragingTrace trace = nested_average(F, w, 64, SpaceSpec::lp(2.0));
    CHECK(trace.schedule.back() == 64);
    CHECK(trace.iterates.back() == cesaro_average(T, w, 64));
}

TEST_CASE("nested averaging respects the proof bound") {
    std::mt19937_64 rng(50);
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    std::uniform_real_distribution<double> ub(-2.0, 2.0);
    std::vector<double> d(8), bb(8), ww(8);
    for (double& v : d) v = ud(rng);
    for (double& v : bb) v = ub(rng);
    for (double& v : ww) v = ub(rng);
    const MapExpr A = MapExpr::diagonal(SeqVector(std::move(d)));
    const SeqVector b(std::move(bb));
    FamilySpec F;
    F.members = {{"Tmu", build_tmu(A, b, 0.25)}, {"Tnu", build_tmu(A, b, 0.75)}};
    const SeqVector w(std::move(ww));

    const AveragingTrace trace = nested_average(F, w, 1024, SpaceSpec::lp(2.0));
    for (std::size_t i = 0; i < trace.schedule.size(); ++i)
        for (std::size_t m = 0; m < 2; ++m)
            CHECK(trace.defects[i][m] <= trace.bound_refs[i][m] + 1e-12);
    // affine nonexpansive members with vanishing minimal displacement:
    // the defect curves head to zero
    CHECK(trace.defects.back()[0] < trace.defects.front()[0]);
    CHECK(trace.defects.back()[0] < 1e-2);
    CHECK(trace.defect_decreasing[0]);
    CHECK(trace.defect_decreasing[1]);
}

TEST_CASE("nested averaging of the bare shift shows the 1/sqrt(n) rate") {
    FamilySpec F;
    F.members = {{"shift", MapExpr::prepend_shift(1.0)}};
    const SpaceSpec l2 = SpaceSpec::lp(2.0);
    const AveragingTrace trace = nested_average(F, SeqVector::zero(), 256, l2);
    for (std::size_t i = 0; i < trace.schedule.size(); ++i) {
        const double n = static_cast<double>(trace.schedule[i]);
        // ||a_n - T a_n|| = ||T^n 0|| / n = sqrt(n)/n for the affine shift
        CHECK(trace.defects[i][0] == doctest::Approx(std::sqrt(n) / n).epsilon(1e-12));
    }
}

TEST_CASE("translation numbers of the shift") {
    const MapExpr T = MapExpr::prepend_shift(1.0);
    const SeqVector y = SeqVector::zero();

    const TranslationEstimate l1 = translation_number(T, y, SpaceSpec::lp(1.0), 256);
    CHECK(l1.estimate == 1.0);  // ||T^n 0||_1 / n = 1 for every n
    CHECK(l1.subadditive);

    const TranslationEstimate l2 = translation_number(T, y, SpaceSpec::lp(2.0), 256);
    CHECK(l2.estimate == std::sqrt(256.0) / 256.0);  // direct computation: 1/16
    CHECK(l2.estimate == 0.0625);
    CHECK(l2.subadditive);

    const TranslationEstimate li = translation_number(T, y, SpaceSpec::linfty(), 128);
    CHECK(li.estimate == 1.0 / 128.0);

    const TranslationEstimate id =
        translation_number(MapExpr::identity(), SeqVector({5.0}), SpaceSpec::lp(2.0), 16);
    CHECK(id.estimate == 0.0);

    CHECK_THROWS_AS(translation_number(T, y, SpaceSpec::lp(1.0), 4), std::invalid_argument);

    // the estimate agrees with the strict-decrease gap of the l1 certificate
    const DefectReport cert = subinvariance(Functional::shift_l1(), T,
                                            ProbeSet::defaults(T, 20, 51, true), 0.0);
    CHECK(cert.gap == l1.estimate);
}

TEST_CASE("product orbits") {
    FamilySpec ident;
    ident.members = {{"id", MapExpr::identity()}};
    const ProductOrbit pid = product_orbit(ident, SeqVector({1.0}), 8, SpaceSpec::lp(2.0));
    for (const SeqVector& p : pid.points) CHECK(p == SeqVector({1.0}));

    // the shift alone: displacement stays 1 in l2 (the decay condition fails)
    FamilySpec shift;
    shift.members = {{"T", MapExpr::prepend_shift(1.0)}};
    const ProductOrbit ps = product_orbit(shift, SeqVector::zero(), 16, SpaceSpec::lp(2.0));
    CHECK(ps.bound_respected);
    for (std::size_t n = 0; n < ps.defects.size(); ++n) {
        CHECK(ps.defects[n][0] == 1.0);
        CHECK(ps.bounds[n][0] == 1.0);
    }

    // a contraction decays geometrically, matching the bound exactly
    FamilySpec half;
    half.members = {{"half", MapExpr::diagonal(SeqVector::constant(0.5))}};
    const SeqVector x0({8.0});
    const ProductOrbit ph = product_orbit(half, x0, 10, SpaceSpec::lp(2.0));
    CHECK(ph.bound_respected);
    for (std::size_t n = 0; n < ph.defects.size(); ++n) {
        const double want = std::pow(0.5, static_cast<double>(n)) * 4.0;  // 2^-n ||x0 - Tx0||
        CHECK(ph.defects[n][0] == want);
        CHECK(ph.bounds[n][0] == want);
    }

    // two commuting members (diagonal maps commute): audited against both bounds
    FamilySpec two;
    two.members = {{"half", MapExpr::diagonal(SeqVector::constant(0.5))},
                   {"tmu", build_tmu(MapExpr::diagonal(SeqVector({0.5, -0.25})),
                                     SeqVector::zero(), 0.5)}};
    const ProductOrbit pt = product_orbit(two, SeqVector({4.0, 2.0}), 12, SpaceSpec::lp(2.0));
    CHECK(pt.bound_respected);
}

TEST_CASE("common fixed point of a single contraction") {
    // x -> x/2 + b has fixed point 2b
    const SeqVector b({1.0, -0.5, 0.25});
    FamilySpec F;
    F.members = {{"T", MapExpr::affine(MapExpr::diagonal(SeqVector::constant(0.5)), b)}};
    const CommonFixedPointResult r =
        common_fixed_point(F, SeqVector::zero(), SpaceSpec::lp(2.0), 1e-10, 1 << 12);
    CHECK(r.found);
    CHECK(r.residual <= 1e-10);
    CHECK(distance(r.z, 2.0 * b, SpaceSpec::lp(2.0)) <= 1e-9);
}

TEST_CASE("common fixed point of the relaxation family") {
    std::mt19937_64 rng(52);
    std::uniform_real_distribution<double> ud(-0.9, 0.9);
    std::uniform_real_distribution<double> ub(-2.0, 2.0);
    std::vector<double> d(16), bb(16);
    for (double& v : d) v = ud(rng);
    for (double& v : bb) v = ub(rng);
    const MapExpr A = MapExpr::diagonal(SeqVector(std::vector<double>(d)));
    const SeqVector b{std::vector<double>(bb)};
    FamilySpec F;
    for (double mu : {0.25, 0.5, 0.75}) F.members.push_back({"T", build_tmu(A, b, mu)});

    const SpaceSpec l2 = SpaceSpec::lp(2.0);
    const CommonFixedPointResult r = common_fixed_point(F, SeqVector::zero(), l2, 1e-10, 1 << 14);
    CHECK(r.found);
    CHECK(r.residual <= 1e-10);

    // oracle: z = A z + b solves coordinatewise to z_i = b_i / (1 - d_i)
    std::vector<double> want(16);
    for (int i = 0; i < 16; ++i) want[i] = bb[static_cast<std::size_t>(i)] / (1.0 - d[static_cast<std::size_t>(i)]);
    CHECK(distance(r.z, SeqVector(std::move(want)), l2) <= 1e-8);

    // Prop 1.4 round trip: the internal functional at z is subinvariant
    const Functional hz = internal(r.z, l2);
    const ProbeSet probes = ProbeSet::defaults(std::nullopt, 30, 53);
    for (const FamilyMember& m : F.members) {
        const DefectReport sub = subinvariance(hz, m.map, probes, 1e-9);
        CHECK(sub.verdict != DefectReport::Verdict::Violated);
    }
}

TEST_CASE("identity family returns the seed") {
    FamilySpec F;
    F.members = {{"id", MapExpr::identity()}};
    const SeqVector seed({1.0, 2.0});
    const CommonFixedPointResult r =
        common_fixed_point(F, seed, SpaceSpec::lp(2.0), 1e-12, 64);
    CHECK(r.found);
    CHECK(r.z == seed);
    CHECK(r.residual == 0.0);
}

TEST_CASE("escaping iterates raise UnboundedOrbit") {
    FamilySpec F;
    F.members = {{"far", MapExpr::translate(SeqVector({50.0}))}};
    CHECK_THROWS_AS(
        common_fixed_point(F, SeqVector::zero(), SpaceSpec::lp(2.0), 1e-8, 1 << 17),
        UnboundedOrbit);
}

TEST_CASE("a fixed-point-free translation ends Unresolved") {
    FamilySpec F;
    F.members = {{"t", MapExpr::translate(SeqVector({1.0}))}};
    const CommonFixedPointResult r =
        common_fixed_point(F, SeqVector::zero(), SpaceSpec::lp(2.0), 1e-8, 256);
    CHECK(!r.found);
    CHECK(r.residual == doctest::Approx(1.0));  // translations keep their displacement
}

TEST_CASE("ump pipeline on maps with unique fixed points") {
    const SpaceSpec l2 = SpaceSpec::lp(2.0);

    Matrix rot(2);
    const double c = std::cos(1.0), s = std::sin(1.0);
    rot(0, 0) = c;
    rot(0, 1) = -s;
    rot(1, 0) = s;
    rot(1, 1) = c;
    const UmpResult rr =
        ump_fixed_point(MapExpr::dense_block(rot), SeqVector({1.0, 0.3}), 64, l2, 1e-6);
    CHECK(rr.found);
    CHECK(norm(rr.center, l2) <= 1e-7);
    CHECK(rr.residual <= 1e-6);

    const UmpResult rc = ump_fixed_point(MapExpr::diagonal(SeqVector::constant(0.5)),
                                         SeqVector({2.0, -1.0}), 80, l2, 1e-9);
    CHECK(rc.found);
    CHECK(norm(rc.center, l2) <= 1e-9);

    const UmpResult rs =
        ump_fixed_point(MapExpr::prepend_shift(1.0), SeqVector::zero(), 64, l2, 1e-6);
    CHECK(!rs.found);
    CHECK(!rs.diagnostic.empty());

    CHECK_THROWS_AS(
        ump_fixed_point(MapExpr::identity(), SeqVector::zero(), 64, SpaceSpec::lp(1.0), 1e-6),
        std::invalid_argument);
}
