#include "horolab/invariance.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace horolab {

const char* DefectReport::verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Subinvariant: return "Subinvariant";
        case Verdict::StrictDecrease: return "StrictDecrease";
        case Verdict::Violated: return "Violated";
    }
    return "?";
}

DefectReport subinvariance(const Functional& h, const MapExpr& T, const ProbeSet& probes,
                           double tol) {
    probes.validate();
    DefectReport r;
    r.tol = tol;
    r.max_defect = -std::numeric_limits<double>::infinity();
    r.min_defect = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < probes.points.size(); ++i) {
        const SeqVector& x = probes.points[i];
        const double d = h.evaluate(T.apply(x)) - h.evaluate(x);
        r.defects.push_back(d);
        if (d > r.max_defect) {
            r.max_defect = d;
            r.witness = i;
        }
        r.min_defect = std::min(r.min_defect, d);
    }
    if (r.max_defect > tol) {
        r.verdict = DefectReport::Verdict::Violated;
    } else if (r.max_defect < -tol) {
        r.verdict = DefectReport::Verdict::StrictDecrease;
        r.gap = -r.max_defect;
    } else {
        r.verdict = DefectReport::Verdict::Subinvariant;
    }
    return r;
}

FixedPointCheck fixed_point_from_internal(const Functional& h, const MapExpr& T, double tol) {
    const auto* in = std::get_if<InternalFn>(&h.variant());
    if (!in) throw std::invalid_argument("fixed_point_from_internal: h must be internal");
    FixedPointCheck r;
    r.w = in->w;
    r.residual = distance(T.apply(in->w), in->w, in->space);
    r.fixed = r.residual <= tol;
    return r;
}

L2Counterexample l2_linear_counterexample(const SeqVector& z) {
    if (z.is_zero())
        throw std::invalid_argument(
            "l2_linear_counterexample: z = 0 (the zero functional is the subinvariant one)");
    if (!z.tail_is_zero())
        throw std::invalid_argument("l2_linear_counterexample: z must lie in l2");

    const MapExpr T = MapExpr::prepend_shift(1.0);
    L2Counterexample r;
    const double z1 = z.coord(1);
    if (z1 != 0.0) {
        r.branch = 1;
        const double t = (z1 - 1.0) / z1;
        const double threshold = 1.0 / (2.0 * std::abs(t) + 1.0);
        std::size_t n = 2;
        while (std::abs(z.coord(n)) > threshold) ++n;  // exists: z in l2
        std::vector<double> coords(n - 1, t);
        r.x = SeqVector(std::move(coords));
    } else {
        r.branch = 2;
        std::size_t m = 2;
        while (z.coord(m) == 0.0) ++m;  // first nonzero index; z != 0
        r.x = SeqVector::unit(m - 1, 1.0 / z.coord(m));
    }
    r.inner = dot(r.x - T.apply(r.x), z);
    return r;
}

}  // namespace horolab
