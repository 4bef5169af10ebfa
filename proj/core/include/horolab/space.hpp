#pragma once

#include <iosfwd>
#include <memory>
#include <string>

#include "horolab/seq_vector.hpp"

namespace horolab {

/// Which Banach sequence space a computation lives in. Leaf kinds are
/// lp (1 <= p < infinity), c0 and l_infinity; a direct sum combines two leaf
/// spaces with the metric (d_A^p + d_B^p)^(1/p), or max{d_A, d_B} for p = inf.
class SpaceSpec {
public:
    enum class Kind { Lp, C0, LInfty, DirectSum };

    static SpaceSpec lp(double p);
    static SpaceSpec c0();
    static SpaceSpec linfty();
    /// p in [1, inf]; pass std::numeric_limits<double>::infinity() for the max metric.
    static SpaceSpec direct_sum(SpaceSpec left, SpaceSpec right, double p);

    Kind kind() const { return kind_; }
    double p() const { return p_; }
    const SpaceSpec& left() const { return *left_; }
    const SpaceSpec& right() const { return *right_; }
    bool is_direct_sum() const { return kind_ == Kind::DirectSum; }

    std::string describe() const;

    friend bool operator==(const SpaceSpec& a, const SpaceSpec& b);

private:
    SpaceSpec(Kind k, double p) : kind_(k), p_(p) {}

    Kind kind_;
    double p_;  // exponent for Lp and DirectSum; unused otherwise
    std::shared_ptr<const SpaceSpec> left_, right_;
};

std::ostream& operator<<(std::ostream& os, const SpaceSpec& s);

/// A point of a two-component direct sum X = A (+) B.
struct DirectSumPoint {
    SeqVector left;
    SeqVector right;

    friend bool operator==(const DirectSumPoint& a, const DirectSumPoint& b) {
        return a.left == b.left && a.right == b.right;
    }
};

/// Whether x is a point of the space: lp (p < inf) and c0 require a zero
/// tail; l_infinity admits any constant tail.
bool member_of(const SeqVector& x, const SpaceSpec& s);
bool member_of(const DirectSumPoint& x, const SpaceSpec& s);

/// Norm of x in s. Returns +infinity when a nonzero constant tail is
/// evaluated in lp or c0 (the point is outside the space); infinity is a
/// value here, not an error.
double norm(const SeqVector& x, const SpaceSpec& s);

/// Metric induced by the norm: norm(x - y, s).
double distance(const SeqVector& x, const SeqVector& y, const SpaceSpec& s);

/// Direct-sum metric; s must be a DirectSum spec. Infinite component
/// distances propagate.
double dsum_distance(const DirectSumPoint& x, const DirectSumPoint& y, const SpaceSpec& s);

}  // namespace horolab
