#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "horolab/seq_vector.hpp"
#include "horolab/space.hpp"

namespace horolab {

/// Small square matrix, row-major. Used by the dense-block map node.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}
    static Matrix identity(std::size_t n);
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }

    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Matrix operator+(Matrix a, const Matrix& b);
    Matrix& operator*=(double s);

private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

struct MapNode;

/// A mapping E -> E as a closed algebra of constructors. All constructors
/// produce affine maps; immutable and cheap to copy (shared tree).
class MapExpr {
public:
    /// x -> (value, x1, x2, ...)
    static MapExpr prepend_shift(double value);
    /// x -> (0, x1, x2, ...)
    static MapExpr forward_shift();
    /// x -> (x2, x3, ...)
    static MapExpr backward_shift();
    /// coordinate-wise multiply by weights (tail of weights acts past its block)
    static MapExpr diagonal(SeqVector weights);
    /// matrix on the first m coordinates, identity beyond
    static MapExpr dense_block(Matrix m);
    /// x -> L x + offset; L must be a linear node
    static MapExpr affine(MapExpr linear, SeqVector offset);
    /// x -> (1-t) f(x) + t g(x), t in [0,1]
    static MapExpr convex(double t, MapExpr f, MapExpr g);
    /// x -> f(g(x))
    static MapExpr compose(MapExpr f, MapExpr g);
    /// x -> x + offset
    static MapExpr translate(SeqVector offset);
    /// identity map (dense block of size zero)
    static MapExpr identity();

    /// Exact structural action. Pass by value; move in to reuse storage
    /// (shift nodes then run in O(1)).
    SeqVector apply(SeqVector x) const;
    SeqVector operator()(SeqVector x) const { return apply(std::move(x)); }

    /// Derived linearity flag (e.g. prepend_shift(v) is linear iff v == 0).
    bool is_linear() const;

    const MapNode& node() const { return *node_; }

private:
    explicit MapExpr(std::shared_ptr<const MapNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const MapNode> node_;
};

struct PrependShiftNode {
    double value;
};
struct ForwardShiftNode {};
struct BackwardShiftNode {};
struct DiagonalNode {
    SeqVector weights;
};
struct DenseBlockNode {
    Matrix matrix;
};
struct AffineNode {
    MapExpr linear;
    SeqVector offset;
};
struct ConvexNode {
    double t;
    MapExpr f, g;
};
struct ComposeNode {
    MapExpr f, g;  // applies g first
};
struct TranslateNode {
    SeqVector offset;
};

struct MapNode
    : std::variant<PrependShiftNode, ForwardShiftNode, BackwardShiftNode, DiagonalNode,
                   DenseBlockNode, AffineNode, ConvexNode, ComposeNode, TranslateNode> {
    using variant::variant;
};

/// Pointer to the concrete node of a map expression, or nullptr.
template <class T>
const T* node_as(const MapExpr& e) {
    return std::get_if<T>(static_cast<const MapNode::variant*>(&e.node()));
}

/// Upper bound on the Lipschitz constant of T in the given space, assembled
/// from per-constructor sufficient conditions. `certified` is false when the
/// l2 dense-block operator norm enters (power-iteration estimate).
struct LipschitzBound {
    double value = 1.0;
    bool certified = true;
};
LipschitzBound lipschitz_bound(const MapExpr& T, const SpaceSpec& s);

struct FamilyMember {
    std::string label;
    MapExpr map;
};

/// A finite labelled family of maps. Pairwise commutation is a contract of
/// the family; verify it with check_commuting or set commuting_waived.
struct FamilySpec {
    std::vector<FamilyMember> members;
    bool commuting_waived = false;
};

/// T_mu x = (1 - mu) x + mu (A x + b); A must be linear, mu in [0,1].
MapExpr build_tmu(const MapExpr& A, const SeqVector& b, double mu);

/// The commuting affine family T_s x = p_s(A) x + q_s(A) b with
/// p_s(lambda) = 1 - (1 - lambda) q_s(lambda). Each inner list holds the
/// coefficients of q_s in increasing degree; A must be a diagonal or
/// dense-block node (polynomials of A are evaluated by Horner's rule).
FamilySpec build_polynomial_family(const MapExpr& A, const SeqVector& b,
                                   const std::vector<std::vector<double>>& q_coeffs);

struct PairDefect {
    std::size_t i = 0, j = 0;       // member indices
    double max_defect = 0.0;        // max over probes of d(TUx, UTx)
    SeqVector witness;              // probe attaining it
};

struct CommutationReport {
    std::vector<PairDefect> pairs;
    double max_defect = 0.0;
    double tol = 0.0;
    bool pass = true;
};

/// Records d(TUx, UTx) for every member pair and probe; passes iff all
/// defects are <= tol. Failures are reported, not thrown.
CommutationReport check_commuting(const FamilySpec& F, const std::vector<SeqVector>& probes,
                                  const SpaceSpec& s, double tol);

struct NonexpansiveReport {
    double max_defect = 0.0;  // max over pairs of d(Tx,Ty) - d(x,y)
    std::size_t witness = 0;  // index of the attaining pair
    LipschitzBound structural;
    double tol = 0.0;
    bool pass = true;
};

/// Samples d(Tx,Ty) - d(x,y) over the given pairs and reports the structural
/// per-constructor bound alongside.
NonexpansiveReport check_nonexpansive(const MapExpr& T, const SpaceSpec& s,
                                      const std::vector<std::pair<SeqVector, SeqVector>>& pairs,
                                      double tol);

}  // namespace horolab
