#include "horolab/map_expr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace horolab {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size())
            throw std::invalid_argument("dense block matrix must be square");
        for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix c(a.n_);
    for (std::size_t i = 0; i < a.n_; ++i)
        for (std::size_t k = 0; k < a.n_; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < a.n_; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Matrix operator+(Matrix a, const Matrix& b) {
    for (std::size_t i = 0; i < a.a_.size(); ++i) a.a_[i] += b.a_[i];
    return a;
}

Matrix& Matrix::operator*=(double s) {
    for (double& v : a_) v *= s;
    return *this;
}

namespace {

std::shared_ptr<const MapNode> make_node(MapNode n) {
    return std::make_shared<const MapNode>(std::move(n));
}

SeqVector apply_node(const MapNode& n, SeqVector x);

struct ApplyVisitor {
    SeqVector x;

    SeqVector operator()(const PrependShiftNode& n) && {
        x.push_front(n.value);
        return std::move(x);
    }
    SeqVector operator()(const ForwardShiftNode&) && {
        x.push_front(0.0);
        return std::move(x);
    }
    SeqVector operator()(const BackwardShiftNode&) && {
        x.pop_front();
        return std::move(x);
    }
    SeqVector operator()(const DiagonalNode& n) && {
        const std::size_t m = std::max(x.block_size(), n.weights.block_size());
        std::deque<double> out(m);
        for (std::size_t i = 1; i <= m; ++i) out[i - 1] = n.weights.coord(i) * x.coord(i);
        return SeqVector(std::move(out), n.weights.tail() * x.tail());
    }
    SeqVector operator()(const DenseBlockNode& n) && {
        const std::size_t m = n.matrix.size();
        const std::size_t len = std::max(m, x.block_size());
        std::deque<double> out(len);
        for (std::size_t i = 0; i < m; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < m; ++j) s += n.matrix(i, j) * x.coord(j + 1);
            out[i] = s;
        }
        for (std::size_t i = m; i < len; ++i) out[i] = x.coord(i + 1);
        return SeqVector(std::move(out), x.tail());
    }
    SeqVector operator()(const AffineNode& n) && {
        SeqVector y = n.linear.apply(std::move(x));
        y += n.offset;
        return y;
    }
    SeqVector operator()(const ConvexNode& n) && {
        SeqVector a = n.f.apply(x);
        a *= (1.0 - n.t);
        SeqVector b = n.g.apply(std::move(x));
        b *= n.t;
        a += b;
        return a;
    }
    SeqVector operator()(const ComposeNode& n) && {
        return n.f.apply(n.g.apply(std::move(x)));
    }
    SeqVector operator()(const TranslateNode& n) && {
        x += n.offset;
        return x;
    }
};

SeqVector apply_node(const MapNode& n, SeqVector x) {
    return std::visit(ApplyVisitor{std::move(x)}, static_cast<const MapNode::variant&>(n));
}

}  // namespace

MapExpr MapExpr::prepend_shift(double value) { return MapExpr(make_node(PrependShiftNode{value})); }
MapExpr MapExpr::forward_shift() { return MapExpr(make_node(ForwardShiftNode{})); }
MapExpr MapExpr::backward_shift() { return MapExpr(make_node(BackwardShiftNode{})); }
MapExpr MapExpr::diagonal(SeqVector weights) {
    return MapExpr(make_node(DiagonalNode{std::move(weights)}));
}
MapExpr MapExpr::dense_block(Matrix m) { return MapExpr(make_node(DenseBlockNode{std::move(m)})); }

MapExpr MapExpr::affine(MapExpr linear, SeqVector offset) {
    if (!linear.is_linear())
        throw std::invalid_argument("affine node requires a linear map for its linear part");
    return MapExpr(make_node(AffineNode{std::move(linear), std::move(offset)}));
}

MapExpr MapExpr::convex(double t, MapExpr f, MapExpr g) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("convex weight t must be in [0,1]");
    return MapExpr(make_node(ConvexNode{t, std::move(f), std::move(g)}));
}

MapExpr MapExpr::compose(MapExpr f, MapExpr g) {
    return MapExpr(make_node(ComposeNode{std::move(f), std::move(g)}));
}

MapExpr MapExpr::translate(SeqVector offset) {
    return MapExpr(make_node(TranslateNode{std::move(offset)}));
}

MapExpr MapExpr::identity() { return dense_block(Matrix()); }

SeqVector MapExpr::apply(SeqVector x) const { return apply_node(*node_, std::move(x)); }

bool MapExpr::is_linear() const {
    struct V {
        bool operator()(const PrependShiftNode& n) const { return n.value == 0.0; }
        bool operator()(const ForwardShiftNode&) const { return true; }
        bool operator()(const BackwardShiftNode&) const { return true; }
        bool operator()(const DiagonalNode&) const { return true; }
        bool operator()(const DenseBlockNode&) const { return true; }
        bool operator()(const AffineNode& n) const {
            return n.offset.is_zero() && n.linear.is_linear();
        }
        bool operator()(const ConvexNode& n) const { return n.f.is_linear() && n.g.is_linear(); }
        bool operator()(const ComposeNode& n) const { return n.f.is_linear() && n.g.is_linear(); }
        bool operator()(const TranslateNode& n) const { return n.offset.is_zero(); }
    };
    return std::visit(V{}, static_cast<const MapNode::variant&>(*node_));
}

namespace {

double max_abs_col_sum(const Matrix& m) {
    double best = 0.0;
    for (std::size_t j = 0; j < m.size(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m.size(); ++i) s += std::abs(m(i, j));
        best = std::max(best, s);
    }
    return best;
}

double max_abs_row_sum(const Matrix& m) {
    double best = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.size(); ++j) s += std::abs(m(i, j));
        best = std::max(best, s);
    }
    return best;
}

// Spectral norm estimate via power iteration on M^T M. 200 iterations with a
// relative-change stop of 1e-10; reported as an estimate, not a proof.
double spectral_norm_estimate(const Matrix& m) {
    const std::size_t n = m.size();
    if (n == 0) return 0.0;
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(n), mv(n), w(n);
    for (double& c : v) c = u(rng);
    double lambda = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += m(i, j) * v[j];
            mv[i] = s;
        }
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += m(i, j) * mv[i];
            w[j] = s;
        }
        double nw = 0.0;
        for (double c : w) nw += c * c;
        nw = std::sqrt(nw);
        if (nw == 0.0) return 0.0;
        const double prev = lambda;
        lambda = nw;  // Rayleigh growth factor ~ ||M||^2
        for (std::size_t j = 0; j < n; ++j) v[j] = w[j] / nw;
        if (iter > 0 && std::abs(lambda - prev) <= 1e-10 * lambda) break;
    }
    return std::sqrt(lambda);
}

LipschitzBound block_bound(const Matrix& m, const SpaceSpec& s) {
    if (m.size() == 0) return {1.0, true};
    double nrm = 0.0;
    bool certified = true;
    switch (s.kind()) {
        case SpaceSpec::Kind::Lp: {
            const double p = s.p();
            if (p == 1.0) {
                nrm = max_abs_col_sum(m);
            } else if (p == 2.0) {
                nrm = spectral_norm_estimate(m);
                certified = false;
            } else {
                // Riesz-Thorin interpolation upper bound between p=1 and p=inf
                nrm = std::pow(max_abs_col_sum(m), 1.0 / p) *
                      std::pow(max_abs_row_sum(m), 1.0 - 1.0 / p);
            }
            break;
        }
        case SpaceSpec::Kind::C0:
        case SpaceSpec::Kind::LInfty:
            nrm = max_abs_row_sum(m);
            break;
        case SpaceSpec::Kind::DirectSum:
            throw std::invalid_argument("lipschitz_bound: maps act on sequence spaces only");
    }
    // identity action past the block
    return {std::max(nrm, 1.0), certified};
}

}  // namespace

LipschitzBound lipschitz_bound(const MapExpr& T, const SpaceSpec& s) {
    struct V {
        const SpaceSpec& s;
        LipschitzBound operator()(const PrependShiftNode&) const { return {1.0, true}; }
        LipschitzBound operator()(const ForwardShiftNode&) const { return {1.0, true}; }
        LipschitzBound operator()(const BackwardShiftNode&) const { return {1.0, true}; }
        LipschitzBound operator()(const DiagonalNode& n) const {
            double m = std::abs(n.weights.tail());
            for (double w : n.weights.coeffs()) m = std::max(m, std::abs(w));
            return {m, true};
        }
        LipschitzBound operator()(const DenseBlockNode& n) const {
            return block_bound(n.matrix, s);
        }
        LipschitzBound operator()(const AffineNode& n) const {
            return lipschitz_bound(n.linear, s);
        }
        LipschitzBound operator()(const ConvexNode& n) const {
            const auto a = lipschitz_bound(n.f, s);
            const auto b = lipschitz_bound(n.g, s);
            return {(1.0 - n.t) * a.value + n.t * b.value, a.certified && b.certified};
        }
        LipschitzBound operator()(const ComposeNode& n) const {
            const auto a = lipschitz_bound(n.f, s);
            const auto b = lipschitz_bound(n.g, s);
            return {a.value * b.value, a.certified && b.certified};
        }
        LipschitzBound operator()(const TranslateNode&) const { return {1.0, true}; }
    };
    return std::visit(V{s}, static_cast<const MapNode::variant&>(T.node()));
}

MapExpr build_tmu(const MapExpr& A, const SeqVector& b, double mu) {
    if (!A.is_linear()) throw std::invalid_argument("build_tmu: A must be linear");
    if (!(mu >= 0.0 && mu <= 1.0)) throw std::invalid_argument("build_tmu: mu must be in [0,1]");
    if (mu == 0.0) return MapExpr::identity();
    if (mu == 1.0) return MapExpr::affine(A, b);
    return MapExpr::convex(mu, MapExpr::identity(), MapExpr::affine(A, b));
}

namespace {

// p(lambda) = 1 - (1 - lambda) q(lambda), coefficients in increasing degree.
std::vector<double> p_from_q(const std::vector<double>& q) {
    std::vector<double> p(q.size() + 1, 0.0);
    p[0] = 1.0 - q[0];
    for (std::size_t k = 1; k < q.size(); ++k) p[k] = q[k - 1] - q[k];
    p[q.size()] = q.back();
    return p;
}

double horner(const std::vector<double>& coeffs, double x) {
    double v = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 0;) v = v * x + coeffs[k];
    return v;
}

Matrix horner_matrix(const std::vector<double>& coeffs, const Matrix& m) {
    Matrix v(m.size());
    for (std::size_t k = coeffs.size(); k-- > 0;) {
        Matrix t = v * m;
        for (std::size_t i = 0; i < m.size(); ++i) t(i, i) += coeffs[k];
        v = std::move(t);
    }
    return v;
}

}  // namespace

FamilySpec build_polynomial_family(const MapExpr& A, const SeqVector& b,
                                   const std::vector<std::vector<double>>& q_coeffs) {
    if (q_coeffs.empty())
        throw std::invalid_argument("build_polynomial_family: empty polynomial list");
    for (const auto& q : q_coeffs)
        if (q.empty())
            throw std::invalid_argument("build_polynomial_family: empty coefficient list");

    FamilySpec family;
    const auto* diag = node_as<DiagonalNode>(A);
    const auto* block = node_as<DenseBlockNode>(A);
    if (!diag && !block)
        throw std::invalid_argument(
            "build_polynomial_family: A must be a diagonal or dense-block node");

    int idx = 0;
    for (const auto& q : q_coeffs) {
        const std::vector<double> p = p_from_q(q);
        MapExpr linear_part = MapExpr::identity();
        SeqVector offset;
        if (diag) {
            const SeqVector& d = diag->weights;
            const std::size_t m = std::max(d.block_size(), b.block_size());
            std::deque<double> w(m), off(m);
            for (std::size_t i = 1; i <= m; ++i) {
                w[i - 1] = horner(p, d.coord(i));
                off[i - 1] = horner(q, d.coord(i)) * b.coord(i);
            }
            linear_part = MapExpr::diagonal(SeqVector(std::move(w), horner(p, d.tail())));
            offset = SeqVector(std::move(off), horner(q, d.tail()) * b.tail());
        } else {
            const Matrix& M = block->matrix;
            const std::size_t m = M.size();
            linear_part = MapExpr::dense_block(horner_matrix(p, M));
            const Matrix qm = horner_matrix(q, M);
            const double q1 = horner(q, 1.0);  // A acts as identity past the block
            const std::size_t len = std::max(m, b.block_size());
            std::deque<double> off(len);
            for (std::size_t i = 0; i < m; ++i) {
                double s = 0.0;
                for (std::size_t j = 0; j < m; ++j) s += qm(i, j) * b.coord(j + 1);
                off[i] = s;
            }
            for (std::size_t i = m; i < len; ++i) off[i] = q1 * b.coord(i + 1);
            offset = SeqVector(std::move(off), q1 * b.tail());
        }
        MapExpr T = offset.is_zero() ? linear_part : MapExpr::affine(linear_part, offset);
        family.members.push_back({"T" + std::to_string(idx++), std::move(T)});
    }
    return family;
}

CommutationReport check_commuting(const FamilySpec& F, const std::vector<SeqVector>& probes,
                                  const SpaceSpec& s, double tol) {
    if (F.members.empty()) throw std::invalid_argument("check_commuting: empty family");
    if (probes.empty()) throw std::invalid_argument("check_commuting: empty probe set");
    CommutationReport report;
    report.tol = tol;
    for (std::size_t i = 0; i < F.members.size(); ++i) {
        for (std::size_t j = i + 1; j < F.members.size(); ++j) {
            const MapExpr& T = F.members[i].map;
            const MapExpr& U = F.members[j].map;
            PairDefect pd{i, j, 0.0, SeqVector::zero()};
            for (const SeqVector& x : probes) {
                const double d = distance(T.apply(U.apply(x)), U.apply(T.apply(x)), s);
                if (d >= pd.max_defect) {
                    pd.max_defect = d;
                    pd.witness = x;
                }
            }
            report.max_defect = std::max(report.max_defect, pd.max_defect);
            report.pairs.push_back(std::move(pd));
        }
    }
    report.pass = report.max_defect <= tol;
    return report;
}

NonexpansiveReport check_nonexpansive(const MapExpr& T, const SpaceSpec& s,
                                      const std::vector<std::pair<SeqVector, SeqVector>>& pairs,
                                      double tol) {
    NonexpansiveReport report;
    report.tol = tol;
    report.structural = lipschitz_bound(T, s);
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto& [x, y] = pairs[k];
        const double defect = distance(T.apply(x), T.apply(y), s) - distance(x, y, s);
        if (defect > worst) {
            worst = defect;
            report.witness = k;
        }
    }
    report.max_defect = pairs.empty() ? 0.0 : worst;
    report.pass = report.max_defect <= tol;
    return report;
}

}  // namespace horolab
