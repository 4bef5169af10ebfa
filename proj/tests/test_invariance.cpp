#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "horolab/invariance.hpp"

using namespace horolab;

namespace {

ProbeSet integer_probes(std::uint64_t seed) {
    return ProbeSet::defaults(MapExpr::prepend_shift(1.0), 50, seed, /*integer_entries=*/true);
}

}  // namespace

TEST_CASE("shift strictly decreases the l1 shift functional") {
    const DefectReport r = subinvariance(Functional::shift_l1(), MapExpr::prepend_shift(1.0),
                                         integer_probes(31), 0.0);
    for (double d : r.defects) CHECK(d == -1.0);
    CHECK(r.max_defect == -1.0);
    CHECK(r.min_defect == -1.0);
    CHECK(r.verdict == DefectReport::Verdict::StrictDecrease);
    CHECK(r.gap == 1.0);
}

TEST_CASE("the norm-like lp functional is invariant under the forward shift") {
    for (double c : {0.0, 1.0, 10.0}) {
        const DefectReport r = subinvariance(Functional::lp_form(2.0, SeqVector::zero(), c),
                                             MapExpr::forward_shift(), integer_probes(32), 0.0);
        CHECK(r.max_defect == 0.0);
        CHECK(r.min_defect == 0.0);
        CHECK(r.verdict == DefectReport::Verdict::Subinvariant);
    }
}

TEST_CASE("internal functional under the identity map") {
    const Functional h = internal(SeqVector({1.0, 2.0}), SpaceSpec::lp(2.0));
    const DefectReport r = subinvariance(h, MapExpr::identity(), integer_probes(33), 0.0);
    CHECK(r.max_defect == 0.0);
    CHECK(r.verdict == DefectReport::Verdict::Subinvariant);
}

TEST_CASE("expanding maps are reported as violations") {
    const Functional h = internal(SeqVector::zero(), SpaceSpec::lp(2.0));  // h = ||x||
    const DefectReport r =
        subinvariance(h, MapExpr::diagonal(SeqVector::constant(2.0)), integer_probes(34), 1e-12);
    CHECK(r.verdict == DefectReport::Verdict::Violated);
    CHECK(r.max_defect > 0.0);
}

TEST_CASE("h^(N) defect identity") {
    std::mt19937_64 rng(35);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const MapExpr T = MapExpr::prepend_shift(1.0);
    for (int N : {1, 2, 5, 17, 50}) {
        const Functional h = Functional::hn(N);
        for (int k = 0; k < 200; ++k) {
            std::vector<double> c(60);
            for (double& v : c) v = u(rng);
            const SeqVector x(std::move(c));
            const double xn = x.coord(static_cast<std::size_t>(N));
            const double want = std::abs(xn - 1.0) + xn;  // h(x) - h(Tx)
            const double got = h.evaluate(x) - h.evaluate(T.apply(x));
            CHECK(std::abs(got - want) <= 1e-12);
            CHECK(got >= 1.0 - 1e-12);
        }
    }
}

TEST_CASE("fixed points from internal functionals") {
    const SeqVector w({2.0, -1.0});
    const FixedPointCheck id =
        fixed_point_from_internal(internal(w, SpaceSpec::lp(2.0)), MapExpr::identity(), 0.0);
    CHECK(id.fixed);
    CHECK(id.w == w);
    CHECK(id.residual == 0.0);

    // the all-ones point is the unique fixed point of the shift in l-infinity
    const SeqVector ones = SeqVector::constant(1.0);
    const FixedPointCheck li = fixed_point_from_internal(internal(ones, SpaceSpec::linfty()),
                                                         MapExpr::prepend_shift(1.0), 0.0);
    CHECK(li.fixed);
    CHECK(li.residual == 0.0);

    const FixedPointCheck l2 = fixed_point_from_internal(
        internal(SeqVector::zero(), SpaceSpec::lp(2.0)), MapExpr::prepend_shift(1.0), 1e-9);
    CHECK(!l2.fixed);
    CHECK(l2.residual == 1.0);  // d(T0, 0) = ||e1||

    CHECK_THROWS_AS(fixed_point_from_internal(Functional::shift_l1(), MapExpr::identity(), 0.0),
                    std::invalid_argument);
}

TEST_CASE("l2 linear counterexample, proof branches") {
    // z = e1: t = 0, x = 0, Tx = e1, inner = -1
    const L2Counterexample a = l2_linear_counterexample(SeqVector::unit(1));
    CHECK(a.branch == 1);
    CHECK(a.x == SeqVector::zero());
    CHECK(a.inner == -1.0);

    // z = e2: first nonzero index 2, x = e1, inner = -1 exactly
    const L2Counterexample b = l2_linear_counterexample(SeqVector::unit(2));
    CHECK(b.branch == 2);
    CHECK(b.x == SeqVector::unit(1));
    CHECK(b.inner == -1.0);

    // z = (0.6, 0.8): t = -2/3, threshold 3/7, so n = 3 and x = (t, t)
    const SeqVector z({0.6, 0.8});
    const L2Counterexample c = l2_linear_counterexample(z);
    CHECK(c.branch == 1);
    CHECK(c.x.block_size() == 2);
    const double t = (0.6 - 1.0) / 0.6;
    CHECK(c.x.coord(1) == t);
    CHECK(c.x.coord(2) == t);
    // dot-product oracle
    const SeqVector diff = c.x - MapExpr::prepend_shift(1.0).apply(c.x);
    double inner = 0.0;
    for (std::size_t i = 1; i <= 3; ++i) inner += diff.coord(i) * z.coord(i);
    CHECK(c.inner == inner);
    CHECK(c.inner <= -0.5 + 1e-12);

    CHECK_THROWS_AS(l2_linear_counterexample(SeqVector::zero()), std::invalid_argument);
    CHECK_THROWS_AS(l2_linear_counterexample(SeqVector::constant(1.0)), std::invalid_argument);
}

TEST_CASE("counterexample inner product below -1/2 across the ball") {
    std::mt19937_64 rng(36);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> radius(1e-3, 1.0);
    std::uniform_int_distribution<std::size_t> len(1, 8);
    const SpaceSpec l2 = SpaceSpec::lp(2.0);
    int done = 0;
    while (done < 500) {
        std::vector<double> c(len(rng));
        for (double& v : c) v = u(rng);
        SeqVector z(std::move(c));
        const double nz = norm(z, l2);
        if (nz == 0.0) continue;
        z *= radius(rng) / nz;
        const L2Counterexample ce = l2_linear_counterexample(z);
        CHECK(ce.inner <= -0.5 + 1e-12);
        ++done;
    }
}

TEST_CASE("round trip: known fixed point -> subinvariant internal functional") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> ud(-0.9, 0.9);
    std::uniform_real_distribution<double> uz(-2.0, 2.0);
    const SpaceSpec l2 = SpaceSpec::lp(2.0);
    const ProbeSet probes = ProbeSet::defaults(std::nullopt, 40, 38);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> d(6), zc(6);
        for (double& v : d) v = ud(rng);
        for (double& v : zc) v = uz(rng);
        const SeqVector z(std::move(zc));
        const MapExpr A = MapExpr::diagonal(SeqVector(std::move(d)));
        const SeqVector b = z - A.apply(z);  // T z = z by construction
        const MapExpr T = MapExpr::affine(A, b);

        const Functional hz = internal(z, l2);
        const FixedPointCheck fp = fixed_point_from_internal(hz, T, 1e-12);
        CHECK(fp.fixed);
        const DefectReport sub = subinvariance(hz, T, probes, 1e-12);
        CHECK(sub.verdict != DefectReport::Verdict::Violated);
    }
}
