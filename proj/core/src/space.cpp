#include "horolab/space.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace horolab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

SpaceSpec SpaceSpec::lp(double p) {
    if (!(p >= 1.0) || std::isinf(p))
        throw std::invalid_argument("SpaceSpec::lp requires 1 <= p < infinity");
    return SpaceSpec(Kind::Lp, p);
}

SpaceSpec SpaceSpec::c0() { return SpaceSpec(Kind::C0, 0.0); }

SpaceSpec SpaceSpec::linfty() { return SpaceSpec(Kind::LInfty, 0.0); }

SpaceSpec SpaceSpec::direct_sum(SpaceSpec left, SpaceSpec right, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("direct sum requires p in [1, inf]");
    if (left.is_direct_sum() || right.is_direct_sum())
        throw std::invalid_argument("nested direct sums are not supported");
    SpaceSpec s(Kind::DirectSum, p);
    s.left_ = std::make_shared<SpaceSpec>(std::move(left));
    s.right_ = std::make_shared<SpaceSpec>(std::move(right));
    return s;
}

std::string SpaceSpec::describe() const {
    std::ostringstream os;
    os << *this;
    return os.str();
}

bool operator==(const SpaceSpec& a, const SpaceSpec& b) {
    if (a.kind_ != b.kind_) return false;
    switch (a.kind_) {
        case SpaceSpec::Kind::Lp:
            return a.p_ == b.p_;
        case SpaceSpec::Kind::DirectSum:
            return a.p_ == b.p_ && *a.left_ == *b.left_ && *a.right_ == *b.right_;
        default:
            return true;
    }
}

std::ostream& operator<<(std::ostream& os, const SpaceSpec& s) {
    switch (s.kind()) {
        case SpaceSpec::Kind::Lp:
            return os << "l" << s.p();
        case SpaceSpec::Kind::C0:
            return os << "c0";
        case SpaceSpec::Kind::LInfty:
            return os << "linfty";
        case SpaceSpec::Kind::DirectSum:
            return os << "(" << s.left() << " (+) " << s.right() << ", p=" << s.p() << ")";
    }
    return os;
}

bool member_of(const SeqVector& x, const SpaceSpec& s) {
    switch (s.kind()) {
        case SpaceSpec::Kind::Lp:
        case SpaceSpec::Kind::C0:
            return x.tail_is_zero();
        case SpaceSpec::Kind::LInfty:
            return true;
        case SpaceSpec::Kind::DirectSum:
            return false;  // a direct-sum point is a DirectSumPoint
    }
    return false;
}

bool member_of(const DirectSumPoint& x, const SpaceSpec& s) {
    return s.is_direct_sum() && member_of(x.left, s.left()) && member_of(x.right, s.right());
}

double norm(const SeqVector& x, const SpaceSpec& s) {
    switch (s.kind()) {
        case SpaceSpec::Kind::Lp: {
            if (!x.tail_is_zero()) return kInf;
            const double p = s.p();
            double sum = 0.0;
            if (p == 1.0) {
                for (double c : x.coeffs()) sum += std::abs(c);
                return sum;
            }
            if (p == 2.0) {
                for (double c : x.coeffs()) sum += c * c;
                return std::sqrt(sum);
            }
            for (double c : x.coeffs()) sum += std::pow(std::abs(c), p);
            return std::pow(sum, 1.0 / p);
        }
        case SpaceSpec::Kind::C0: {
            if (!x.tail_is_zero()) return kInf;
            double m = 0.0;
            for (double c : x.coeffs()) m = std::max(m, std::abs(c));
            return m;
        }
        case SpaceSpec::Kind::LInfty: {
            double m = std::abs(x.tail());
            for (double c : x.coeffs()) m = std::max(m, std::abs(c));
            return m;
        }
        case SpaceSpec::Kind::DirectSum:
            throw std::invalid_argument("norm of a SeqVector in a direct-sum space");
    }
    return 0.0;
}

// Same value as norm(x - y, s) but without materializing the difference;
// orbit points can hold ~10^6 coordinates.
double distance(const SeqVector& x, const SeqVector& y, const SpaceSpec& s) {
    const double dtail = x.tail() - y.tail();
    const auto& xc = x.coeffs();
    const auto& yc = y.coeffs();
    const std::size_t m = std::max(xc.size(), yc.size());
    auto diff_at = [&](std::size_t i) {
        const double xi = i < xc.size() ? xc[i] : x.tail();
        const double yi = i < yc.size() ? yc[i] : y.tail();
        return xi - yi;
    };
    switch (s.kind()) {
        case SpaceSpec::Kind::Lp: {
            if (dtail != 0.0) return kInf;
            const double p = s.p();
            double sum = 0.0;
            if (p == 1.0) {
                for (std::size_t i = 0; i < m; ++i) sum += std::abs(diff_at(i));
                return sum;
            }
            if (p == 2.0) {
                for (std::size_t i = 0; i < m; ++i) {
                    const double d = diff_at(i);
                    sum += d * d;
                }
                return std::sqrt(sum);
            }
            for (std::size_t i = 0; i < m; ++i) sum += std::pow(std::abs(diff_at(i)), p);
            return std::pow(sum, 1.0 / p);
        }
        case SpaceSpec::Kind::C0: {
            if (dtail != 0.0) return kInf;
            double mx = 0.0;
            for (std::size_t i = 0; i < m; ++i) mx = std::max(mx, std::abs(diff_at(i)));
            return mx;
        }
        case SpaceSpec::Kind::LInfty: {
            double mx = std::abs(dtail);
            for (std::size_t i = 0; i < m; ++i) mx = std::max(mx, std::abs(diff_at(i)));
            return mx;
        }
        case SpaceSpec::Kind::DirectSum:
            throw std::invalid_argument("distance of SeqVectors in a direct-sum space");
    }
    return 0.0;
}

double dsum_distance(const DirectSumPoint& x, const DirectSumPoint& y, const SpaceSpec& s) {
    if (!s.is_direct_sum()) throw std::invalid_argument("dsum_distance needs a DirectSum spec");
    const double da = distance(x.left, y.left, s.left());
    const double db = distance(x.right, y.right, s.right());
    const double p = s.p();
    if (std::isinf(p)) return std::max(da, db);
    if (p == 1.0) return da + db;
    if (p == 2.0) return std::hypot(da, db);
    return std::pow(std::pow(da, p) + std::pow(db, p), 1.0 / p);
}

}  // namespace horolab
