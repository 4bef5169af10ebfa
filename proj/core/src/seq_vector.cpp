#include "horolab/seq_vector.hpp"

#include <algorithm>
#include <ostream>

#include "horolab/errors.hpp"

namespace horolab {

SeqVector::SeqVector(std::initializer_list<double> coeffs) : coeffs_(coeffs) { normalize(); }

SeqVector::SeqVector(std::vector<double> coeffs, double tail)
    : coeffs_(coeffs.begin(), coeffs.end()), tail_(tail) {
    normalize();
}

SeqVector::SeqVector(std::deque<double> coeffs, double tail)
    : coeffs_(std::move(coeffs)), tail_(tail) {
    normalize();
}

SeqVector SeqVector::unit(std::size_t k, double v) {
    if (k == 0) throw std::invalid_argument("SeqVector::unit: coordinates are 1-based");
    std::deque<double> c(k, 0.0);
    c[k - 1] = v;
    return SeqVector(std::move(c));
}

SeqVector SeqVector::constant(double c) {
    SeqVector v;
    v.tail_ = c;
    return v;
}

void SeqVector::normalize() {
    while (!coeffs_.empty() && coeffs_.back() == tail_) coeffs_.pop_back();
}

SeqVector& SeqVector::operator+=(const SeqVector& rhs) {
    const std::size_t m = std::max(coeffs_.size(), rhs.coeffs_.size());
    coeffs_.resize(m, tail_);
    for (std::size_t i = 0; i < m; ++i) coeffs_[i] += rhs.coord(i + 1);
    tail_ += rhs.tail_;
    normalize();
    return *this;
}

SeqVector& SeqVector::operator-=(const SeqVector& rhs) {
    const std::size_t m = std::max(coeffs_.size(), rhs.coeffs_.size());
    coeffs_.resize(m, tail_);
    for (std::size_t i = 0; i < m; ++i) coeffs_[i] -= rhs.coord(i + 1);
    tail_ -= rhs.tail_;
    normalize();
    return *this;
}

SeqVector& SeqVector::operator*=(double s) {
    for (double& c : coeffs_) c *= s;
    tail_ *= s;
    normalize();
    return *this;
}

bool operator==(const SeqVector& a, const SeqVector& b) {
    if (a.tail_ != b.tail_) return false;
    const std::size_t m = std::max(a.coeffs_.size(), b.coeffs_.size());
    for (std::size_t i = 1; i <= m; ++i)
        if (a.coord(i) != b.coord(i)) return false;
    return true;
}

std::ostream& operator<<(std::ostream& os, const SeqVector& v) {
    os << '(';
    for (std::size_t i = 0; i < v.coeffs_.size(); ++i) {
        if (i) os << ", ";
        os << v.coeffs_[i];
    }
    if (v.tail_ == 0.0) {
        os << (v.coeffs_.empty() ? "0, 0, ..." : ", 0, ...");
    } else {
        if (!v.coeffs_.empty()) os << ", ";
        os << v.tail_ << ", " << v.tail_ << ", ...";
    }
    return os << ')';
}

double dot(const SeqVector& x, const SeqVector& y) {
    if (x.tail() != 0.0 && y.tail() != 0.0)
        throw DivergentSeries("dot product diverges: both vectors have nonzero tails");
    const std::size_t m = std::max(x.block_size(), y.block_size());
    double s = 0.0;
    for (std::size_t i = 1; i <= m; ++i) s += x.coord(i) * y.coord(i);
    return s;
}

}  // namespace horolab
