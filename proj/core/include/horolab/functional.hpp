#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "horolab/seq_vector.hpp"
#include "horolab/space.hpp"

namespace horolab {

class Functional;

/// h_w(x) = d(x, w) - d(o, w) for an actual point w of the space.
struct InternalFn {
    SeqVector w;
    SeqVector base;
    SpaceSpec space;
    double base_distance;  // d(base, w), finite by construction
};

/// h(x) = (||x - z||_p^p + c^p - ||z||_p^p)^(1/p) - c with c >= ||z||_p;
/// the non-linear metric functionals of lp, 1 < p < infinity.
struct LpFormFn {
    double p;
    SeqVector z;
    double c;
    double z_norm;  // ||z||_p, cached
};

/// One coordinate of the l1 functional: either i in I with a sign, or i
/// outside I with a shift z_i.
struct L1Entry {
    bool in_I;
    double value;  // eps_i in {-1,+1} when in_I, else z_i
};

/// Tail rule for coordinates past the explicit entries.
enum class L1Tail {
    InPlus,       // all in I with eps = +1
    InMinus,      // all in I with eps = -1
    OutZero,      // all outside I with z_i = 0
};

/// h(x) = sum_{i in I} eps_i x_i + sum_{i not in I} (|x_i - z_i| - |z_i|);
/// the metric functionals of l1.
struct L1FormFn {
    std::vector<L1Entry> entries;
    L1Tail tail;
};

/// h(x) = <x, z>.
struct LinearFn {
    SeqVector z;
    SpaceSpec space;
};

/// h(x) = -x_1 + alpha |x_2| on the plane with the 1-norm (alpha = 1) or a
/// perturbed 1-norm ball (0 < alpha < 1).
struct BusemannL1PlaneFn {
    double alpha;
};

/// h(x) = sum_k (|x_k - 1| - 1); the shift-orbit limit in l1.
struct ShiftL1Fn {};

/// h(x) = sup_k |x_k - 1| - 1; the shift-orbit limit in c0.
struct ShiftC0Fn {};

/// h^(N)(x) = sum_{j>N} (-x_j) + sum_{j<=N} (|x_j - 1| - 1).
struct HNFn {
    int N;
};

/// h(a, b) = h_left(a) + h_right(b) on a direct sum. A metric functional of
/// the sum space only for p = 1; the flag records that caveat.
struct SumFn {
    std::shared_ptr<const Functional> left;
    std::shared_ptr<const Functional> right;
    bool valid_as_metric_functional;  // true iff intended for a p=1 sum
};

/// Finite probe table produced by the orbit-limit machinery.
struct EmpiricalFn {
    std::vector<SeqVector> probes;
    std::vector<double> values;
    std::string source;
};

/// A metric-functional value with closed-form evaluation. Immutable; pure
/// evaluation; normalized so that h(base point) = 0.
class Functional {
public:
    using Variant = std::variant<InternalFn, LpFormFn, L1FormFn, LinearFn, BusemannL1PlaneFn,
                                 ShiftL1Fn, ShiftC0Fn, HNFn, SumFn, EmpiricalFn>;

    static Functional lp_form(double p, SeqVector z, double c);
    static Functional l1_form(std::vector<L1Entry> entries, L1Tail tail);
    static Functional linear(SeqVector z, SpaceSpec space);
    static Functional busemann_l1_plane(double alpha);
    static Functional shift_l1();
    static Functional shift_c0();
    static Functional hn(int N);
    static Functional empirical(std::vector<SeqVector> probes, std::vector<double> values,
                                std::string source);

    /// Closed-form value at x. Throws DivergentSeries when the defining
    /// series has non-vanishing tail terms (e.g. ShiftL1 on a Const(3) tail).
    double evaluate(const SeqVector& x) const;
    /// Evaluation on a direct-sum point (Sum variant only).
    double evaluate(const DirectSumPoint& x) const;

    const Variant& variant() const { return *v_; }
    std::string describe() const;

    /// The space the variant naturally lives on, when there is one.
    std::optional<SpaceSpec> natural_space() const;

    friend Functional internal(const SeqVector& w, const SpaceSpec& space, const SeqVector& base);
    friend Functional sum_functional(const Functional& hA, const Functional& hB, double sum_p);

private:
    explicit Functional(Variant v) : v_(std::make_shared<const Variant>(std::move(v))) {}
    std::shared_ptr<const Variant> v_;
};

/// The internal metric functional h_w(x) = d(x,w) - d(base,w). Throws
/// std::invalid_argument when d(base, w) is infinite.
Functional internal(const SeqVector& w, const SpaceSpec& space,
                    const SeqVector& base = SeqVector::zero());

/// Componentwise sum h(a,b) = hA(a) + hB(b) for points of a direct sum with
/// exponent sum_p. Flagged as a genuine metric functional only when sum_p == 1.
Functional sum_functional(const Functional& hA, const Functional& hB, double sum_p = 1.0);

/// The internal metric functional of a direct-sum point, evaluated directly
/// from the sum metric (used as the second route when checking the p=1
/// decomposition h = h^A + h^B).
double pair_internal_value(const DirectSumPoint& w, const SpaceSpec& dsum,
                           const DirectSumPoint& base, const DirectSumPoint& x);

struct BusemannResult {
    double value = 0.0;           // ||x - t u|| - t at the last schedule point
    std::vector<double> samples;  // one per schedule entry
    bool monotone = true;         // samples never increase (tolerance 1e-12)
    double max_increase = 0.0;
};

/// Follows t -> ||x - t u|| - t along an increasing schedule (>= 3 points,
/// ||u|| = 1) and audits that the samples never increase.
BusemannResult busemann_limit(const SeqVector& u, const SeqVector& x, const SpaceSpec& s,
                              const std::vector<double>& t_schedule);

}  // namespace horolab
