#pragma once

#include <cassert>
#include <cstddef>
#include <deque>
#include <initializer_list>
#include <iosfwd>
#include <vector>

namespace horolab {

/// A point of a real sequence space: a finite coefficient block (coordinates
/// 1..m) followed by a constant tail. A tail value of 0 means the sequence is
/// eventually zero; any other value c means the sequence is eventually the
/// constant c (needed to represent points like (1,1,1,...)).
///
/// Values are immutable in spirit: every operation returns a new vector.
/// Vectors are kept normalized — trailing block entries equal to the tail
/// value are trimmed — so equality is independent of block length.
class SeqVector {
public:
    SeqVector() = default;
    SeqVector(std::initializer_list<double> coeffs);
    explicit SeqVector(std::vector<double> coeffs, double tail = 0.0);
    explicit SeqVector(std::deque<double> coeffs, double tail = 0.0);

    static SeqVector zero() { return SeqVector(); }
    /// e_k scaled by v (k is 1-based).
    static SeqVector unit(std::size_t k, double v = 1.0);
    /// The constant sequence (c, c, c, ...).
    static SeqVector constant(double c);

    /// Coordinate x_k, 1-based; coordinates past the block equal the tail.
    double coord(std::size_t k) const {
        assert(k >= 1);
        return k <= coeffs_.size() ? coeffs_[k - 1] : tail_;
    }
    std::size_t block_size() const { return coeffs_.size(); }
    double tail() const { return tail_; }
    bool tail_is_zero() const { return tail_ == 0.0; }
    bool is_zero() const { return coeffs_.empty() && tail_ == 0.0; }

    const std::deque<double>& coeffs() const { return coeffs_; }

    /// In-place prepend (the structural action of the shift maps); O(1).
    void push_front(double v) { coeffs_.push_front(v); }
    /// Drop the leading coordinate; no-op on an all-tail vector.
    void pop_front() {
        if (!coeffs_.empty()) coeffs_.pop_front();
    }

    SeqVector& operator+=(const SeqVector& rhs);
    SeqVector& operator-=(const SeqVector& rhs);
    SeqVector& operator*=(double s);

    friend SeqVector operator+(SeqVector lhs, const SeqVector& rhs) { return lhs += rhs; }
    friend SeqVector operator-(SeqVector lhs, const SeqVector& rhs) { return lhs -= rhs; }
    friend SeqVector operator*(double s, SeqVector v) { return v *= s; }
    friend SeqVector operator-(SeqVector v) { return v *= -1.0; }

    /// Exact comparison of the represented sequences (block length agnostic).
    friend bool operator==(const SeqVector& a, const SeqVector& b);
    friend bool operator!=(const SeqVector& a, const SeqVector& b) { return !(a == b); }

    friend std::ostream& operator<<(std::ostream& os, const SeqVector& v);

private:
    void normalize();

    std::deque<double> coeffs_;
    double tail_ = 0.0;
};

/// Dot product sum x_k * y_k. Throws DivergentSeries if both tails are
/// nonzero (infinitely many identical nonzero terms).
double dot(const SeqVector& x, const SeqVector& y);

}  // namespace horolab
