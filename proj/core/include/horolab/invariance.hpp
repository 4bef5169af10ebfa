#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "horolab/empirical.hpp"
#include "horolab/functional.hpp"
#include "horolab/map_expr.hpp"
#include "horolab/seq_vector.hpp"

namespace horolab {

/// Certificate of (sub)invariance of h under T on a finite probe set.
/// Verdicts: Subinvariant when max defect <= tol; StrictDecrease(gap) when
/// every defect is <= -gap < 0 (a no-fixed-point certificate); Violated
/// otherwise.
struct DefectReport {
    enum class Verdict { Subinvariant, StrictDecrease, Violated };

    std::vector<double> defects;  // h(Tx) - h(x), per probe
    double max_defect = 0.0;
    double min_defect = 0.0;
    std::size_t witness = 0;  // probe attaining the max defect
    Verdict verdict = Verdict::Subinvariant;
    double gap = 0.0;  // positive for StrictDecrease
    double tol = 0.0;

    static const char* verdict_name(Verdict v);
};

DefectReport subinvariance(const Functional& h, const MapExpr& T, const ProbeSet& probes,
                           double tol);

/// If h is internal at w and d(Tw, w) <= tol, returns w (w is then a fixed
/// point of T up to tol); otherwise reports the residual.
struct FixedPointCheck {
    bool fixed = false;
    SeqVector w;
    double residual = 0.0;
};

FixedPointCheck fixed_point_from_internal(const Functional& h, const MapExpr& T, double tol);

/// The explicit construction showing that no nonzero linear functional
/// <., z> on l2 is subinvariant for the shift x -> (1, x1, x2, ...): a
/// vector x with <x - Tx, z> <= -1/2 (and exactly -1 when z_1 = 0).
struct L2Counterexample {
    SeqVector x;
    double inner = 0.0;  // <x - Tx, z>
    int branch = 0;      // 1: z_1 != 0, t = (z_1-1)/z_1; 2: z_1 = 0, x = e_{m-1}/z_m
};

L2Counterexample l2_linear_counterexample(const SeqVector& z);

}  // namespace horolab
