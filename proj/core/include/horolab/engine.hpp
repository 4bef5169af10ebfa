#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "horolab/empirical.hpp"
#include "horolab/map_expr.hpp"
#include "horolab/seq_vector.hpp"
#include "horolab/space.hpp"

namespace horolab {

/// (1/n) (w + Tw + ... + T^{n-1} w); compensated summation per coordinate.
SeqVector cesaro_average(const MapExpr& T, const SeqVector& seed, long n);

/// Trace of the nested averaging construction: fold cesaro_average over the
/// family members in declared order at each scheduled n, and record every
/// member's displacement at the final level next to the proof bound
/// ||w - M^n w|| / n.
struct AveragingTrace {
    std::vector<long> schedule;
    std::vector<std::string> member_labels;
    std::vector<SeqVector> iterates;                 // final-level b_n per scheduled n
    std::vector<std::vector<SeqVector>> levels;      // per scheduled n: a_n, b_n, ...
    std::vector<std::vector<double>> defects;        // [n][member] = d(b_n, M b_n)
    std::vector<std::vector<double>> bound_refs;     // [n][member] = ||w - M^n w|| / n
    std::vector<char> defect_decreasing;             // per member, audited over the schedule tail

    void write_csv(std::ostream& os) const;  // n, defect per member
};

/// Folds over members in order at each n of a doubling schedule up to n_max
/// (plus n_max itself).
AveragingTrace nested_average(const FamilySpec& F, const SeqVector& seed, long n_max,
                              const SpaceSpec& s);

/// Samples ||T^n y - y||/n and ||T^n y||/n for n = 1..n_max; the Fekete
/// envelope is the running minimum of the displacement curve and the final
/// estimate its value at n_max (subadditivity makes it converge to the
/// minimal displacement).
struct TranslationEstimate {
    std::vector<double> displacement_over_n;  // ||T^n y - y|| / n
    std::vector<double> norm_over_n;          // ||T^n y|| / n
    std::vector<double> fekete_envelope;      // running min of displacement_over_n
    double estimate = 0.0;
    bool subadditive = true;   // c_{m+n} <= c_m + c_n + 1e-12 on sampled pairs
    double max_violation = 0.0;
};

TranslationEstimate translation_number(const MapExpr& T, const SeqVector& y, const SpaceSpec& s,
                                       long n_max);

/// x_n = (composition over members M of M^n) x0 for n = 0..n_max, advanced by
/// one application of each member per step (valid for commuting families).
/// Each member's displacement d(x_n, M x_n) is recorded next to the proof
/// bound d(M^n x0, M^{n+1} x0).
struct ProductOrbit {
    std::vector<SeqVector> points;                // x_0 .. x_n
    std::vector<std::vector<double>> defects;     // [n][member] = d(x_n, M x_n)
    std::vector<std::vector<double>> bounds;      // [n][member] = d(M^n x0, M^{n+1} x0)
    std::vector<std::string> member_labels;
    bool bound_respected = true;                  // defects <= bounds + 1e-12 throughout
};

ProductOrbit product_orbit(const FamilySpec& F, const SeqVector& x0, long n_max,
                           const SpaceSpec& s);

/// Common-fixed-point extraction for commuting affine families on lp:
/// nested averaging with a doubling budget, then Krasnoselskii polishing
/// z <- (z + Mz)/2 sweeps. Throws UnboundedOrbit when iterates escape
/// 1e6 * (1 + ||seed||).
struct CommonFixedPointResult {
    bool found = false;
    SeqVector z;
    double residual = 0.0;  // max over members of d(Mz, z)
    long polish_sweeps = 0;
    AveragingTrace trace;
};

CommonFixedPointResult common_fixed_point(const FamilySpec& F, const SeqVector& seed,
                                          const SpaceSpec& s, double tol, long n_max);

/// Fixed point via the unique-minimizer route: asymptotic center of the
/// orbit tail, accepted when d(T a, a) <= tol. Reports the orbit-derived
/// empirical functional alongside as evidence.
struct UmpResult {
    bool found = false;
    SeqVector center;
    double residual = 0.0;
    std::string diagnostic;  // set when not found
    CenterReport center_report;
    EmpiricalFunctional functional;
};

UmpResult ump_fixed_point(const MapExpr& T, const SeqVector& x0, long n_max, const SpaceSpec& s,
                          double tol, std::size_t last_k = 20);

}  // namespace horolab
