#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "horolab/functional.hpp"
#include "horolab/map_expr.hpp"
#include "horolab/seq_vector.hpp"
#include "horolab/space.hpp"

namespace horolab {

/// Finite set of evaluation points standing in for the topology of pointwise
/// convergence. Must contain the origin (the base point of every h_n).
struct ProbeSet {
    std::vector<SeqVector> points;

    /// Throws std::invalid_argument unless nonempty and containing 0.
    void validate() const;

    /// 0, +-e_i (i <= 8), the orbit prefix of `around` (when given), and
    /// `random_count` vectors with entries in [-2,2] drawn from rng_seed.
    /// integer_entries restricts the random entries to {-2,-1,0,1,2}.
    static ProbeSet defaults(const std::optional<MapExpr>& around, std::size_t random_count,
                             std::uint64_t rng_seed, bool integer_entries = false,
                             std::size_t max_support = 8);
};

/// A metric functional known only through probe values, produced as the
/// pointwise limit of h_n(x) = d(x, a_n) - d(0, a_n) along a sequence (a_n).
struct EmpiricalFunctional {
    struct Checkpoint {
        long n;                      // 1-based index into the sequence
        std::vector<double> values;  // one per probe
    };

    std::vector<SeqVector> probes;
    std::vector<double> values;       // h at the final sequence index
    std::vector<double> spreads;      // max-min of h over the last K indices
    std::vector<char> converged;      // spread <= tol, per probe
    std::vector<Checkpoint> checkpoints;
    std::string source;
    double tol = 0.0;
    long n_final = 0;

    bool all_converged() const;
    /// Probe-table lookup; throws std::invalid_argument for non-probes.
    double eval(const SeqVector& x) const;
    Functional to_functional() const;
    /// Rows "probe_id,n,value".
    void write_csv(std::ostream& os) const;
};

/// Max over probe pairs of |h(x)-h(y)| - d(x,y); <= 0 for a 1-Lipschitz table.
double lipschitz_violation(const EmpiricalFunctional& e, const SpaceSpec& s);

/// [x0, T x0, ..., T^n x0], exact. n >= 1.
std::vector<SeqVector> orbit(const MapExpr& T, const SeqVector& x0, long n);

/// Tabulates h_n over the given points (n = 1..points.size(), at least 3) and
/// accepts each probe whose last-K (K=5) spread is <= tol. Never throws on
/// non-convergence; the per-probe flags record it.
EmpiricalFunctional empirical_limit(const std::vector<SeqVector>& points, const ProbeSet& probes,
                                    const SpaceSpec& s, double tol);

/// Streaming variant along the orbit a_n = T^n x0, n = 1..n_max. Evaluates
/// h_n at doubling checkpoints plus the last K indices, so long orbits
/// (n ~ 10^6) stay affordable: the orbit advances in place and h is never
/// computed at skipped indices.
EmpiricalFunctional empirical_limit_orbit(const MapExpr& T, const SeqVector& x0, long n_max,
                                          const ProbeSet& probes, const SpaceSpec& s, double tol);

/// Ball-scaling construction: the table of m * h(v / m) over the same
/// generating points. 1-Lipschitz whenever the original table is.
EmpiricalFunctional scaled_empirical_limit(const std::vector<SeqVector>& points,
                                           const ProbeSet& probes, const SpaceSpec& s,
                                           double scale, double tol);

struct MatchReport {
    double max_discrepancy = 0.0;
    std::size_t witness = 0;  // probe index attaining the max
    double tol = 0.0;
    bool pass = true;
};

/// Max over probes of |e(x) - h(x)|.
MatchReport match_hypothesis(const EmpiricalFunctional& e, const Functional& h, double tol);

/// Direct-sum counterpart of the empirical machinery (used for the
/// projection functional (a,b) -> h^B(b) on X_p, p > 1).
struct EmpiricalPair {
    std::vector<DirectSumPoint> probes;
    std::vector<double> values;
    std::vector<double> spreads;
    std::vector<char> converged;
    std::string source;
    double tol = 0.0;

    bool all_converged() const;
};

EmpiricalPair empirical_limit_pairs(const std::vector<DirectSumPoint>& points,
                                    const std::vector<DirectSumPoint>& probes,
                                    const SpaceSpec& dsum, double tol);

MatchReport match_hypothesis_pairs(const EmpiricalPair& e,
                                   const std::function<double(const DirectSumPoint&)>& h,
                                   double tol);

/// Minimizer of x -> max over the last last_k points of d(x, a_n), searched
/// over the first `dim` coordinates by cyclic coordinate descent with
/// golden-section line search (the objective is convex).
struct CenterReport {
    SeqVector center;
    double value = 0.0;        // objective at the center
    double margin = 0.0;       // min over +-delta e_i probes of the objective increase
    bool non_unique = false;   // two restarts disagreed by more than restart_tol
    double restart_gap = 0.0;  // distance between the two restart results
};

struct CenterOptions {
    int max_sweeps = 50;
    double rel_improvement_stop = 1e-10;
    double margin_delta = 1e-3;
    double restart_tol = 1e-6;
};

CenterReport asymptotic_center(const std::vector<SeqVector>& points, const SpaceSpec& s,
                               std::size_t dim, std::size_t last_k,
                               const CenterOptions& opts = {});

/// liminf surrogates use the minimum over the last K terms.
struct OpialReport {
    double liminf_limit = 0.0;                // liminf ||a_n - a||
    std::vector<double> liminf_challengers;   // per challenger (kept order)
    std::vector<char> skipped;                // challenger == a
    double margin = 0.0;                      // min over checked challengers
    bool pass = false;
    double tol = 0.0;
};

OpialReport opial_check(const std::vector<SeqVector>& points, const SeqVector& weak_limit,
                        const std::vector<SeqVector>& challengers, const SpaceSpec& s,
                        std::size_t last_k = 20, double tol = 1e-9);

/// First probe where the table is nonzero beyond tol, if any.
struct ZfpScan {
    bool zero_on_probes = true;
    std::size_t witness = 0;
    double witness_value = 0.0;
};

ZfpScan zfp_scan(const EmpiricalFunctional& e, double tol);

}  // namespace horolab
