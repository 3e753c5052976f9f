#pragma once

#include "lattice.hpp"
#include "rational.hpp"

#include <map>
#include <stdexcept>
#include <vector>

namespace asaw {

// Truncated power series in z with exact coefficients; length order()+1.
class Series {
public:
    Series() : c_(1, Rational(0)) {}
    explicit Series(int order) : c_(static_cast<std::size_t>(order) + 1, Rational(0)) {
        if (order < 0) throw std::invalid_argument("negative order");
    }
    explicit Series(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
        if (c_.empty()) c_.push_back(0);
    }

    int order() const { return static_cast<int>(c_.size()) - 1; }
    const Rational& operator[](int n) const { return c_.at(static_cast<std::size_t>(n)); }
    Rational& operator[](int n) { return c_.at(static_cast<std::size_t>(n)); }
    const std::vector<Rational>& coeffs() const { return c_; }

    bool is_zero() const {
        for (const auto& x : c_)
            if (x != 0) return false;
        return true;
    }

    Series& operator+=(const Series& o) {
        check(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    Series& operator-=(const Series& o) {
        check(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    Series& operator*=(const Rational& s) {
        for (auto& x : c_) x *= s;
        return *this;
    }
    friend Series operator+(Series a, const Series& b) { return a += b; }
    friend Series operator-(Series a, const Series& b) { return a -= b; }
    friend Series operator*(Series a, const Rational& s) { return a *= s; }

    friend Series operator*(const Series& a, const Series& b) {
        a.check(b);
        Series r(a.order());
        mul_add(r, a, b);
        return r;
    }

    // r += a*b, truncated at r.order().
    static void mul_add(Series& r, const Series& a, const Series& b) {
        int N = r.order();
        for (int i = 0; i <= std::min(N, a.order()); ++i) {
            if (a.c_[static_cast<std::size_t>(i)] == 0) continue;
            for (int j = 0; i + j <= N && j <= b.order(); ++j) {
                if (b.c_[static_cast<std::size_t>(j)] == 0) continue;
                r.c_[static_cast<std::size_t>(i + j)] += a.c_[static_cast<std::size_t>(i)] * b.c_[static_cast<std::size_t>(j)];
            }
        }
    }

    // Multiply by z (drops the top coefficient).
    Series shifted() const {
        Series r(order());
        for (int n = order(); n >= 1; --n) r.c_[static_cast<std::size_t>(n)] = c_[static_cast<std::size_t>(n - 1)];
        return r;
    }

    Series derivative() const {
        Series r(order());
        for (int n = 1; n <= order(); ++n) r.c_[static_cast<std::size_t>(n - 1)] = c_[static_cast<std::size_t>(n)] * n;
        return r;
    }

    Rational evaluate(const Rational& z) const {
        Rational acc = 0;
        for (int n = order(); n >= 0; --n) acc = acc * z + c_[static_cast<std::size_t>(n)];
        return acc;
    }

    double evaluate(double z) const {
        double acc = 0;
        for (int n = order(); n >= 0; --n) acc = acc * z + c_[static_cast<std::size_t>(n)].get_d();
        return acc;
    }

    friend bool operator==(const Series&, const Series&) = default;

private:
    void check(const Series& o) const {
        if (o.order() != order()) throw std::invalid_argument("series order mismatch");
    }
    std::vector<Rational> c_;
};

// Finite-support map x -> Series; absent points are zero.
class SpatialSeries {
public:
    SpatialSeries() = default;
    SpatialSeries(int dim, int order) : dim_(dim), order_(order) {}

    int dim() const { return dim_; }
    int order() const { return order_; }
    const std::map<Point, Series>& entries() const { return m_; }

    Series& at(const Point& x) {
        auto it = m_.find(x);
        if (it == m_.end()) it = m_.emplace(x, Series(order_)).first;
        return it->second;
    }
    Series get(const Point& x) const {
        auto it = m_.find(x);
        return it == m_.end() ? Series(order_) : it->second;
    }
    Rational coeff(const Point& x, int n) const {
        auto it = m_.find(x);
        return it == m_.end() ? Rational(0) : it->second[n];
    }

    void prune() {
        for (auto it = m_.begin(); it != m_.end();)
            it = it->second.is_zero() ? m_.erase(it) : std::next(it);
    }

    bool is_zero() const {
        for (const auto& [x, s] : m_)
            if (!s.is_zero()) return false;
        return true;
    }

    Rational max_abs() const {
        Rational best = 0;
        for (const auto& [x, s] : m_)
            for (const auto& c : s.coeffs())
                if (abs(c) > best) best = abs(c);
        return best;
    }

    // Sum over x, as a series.
    Series total() const {
        Series t(order_);
        for (const auto& [x, s] : m_) t += s;
        return t;
    }

    SpatialSeries& operator+=(const SpatialSeries& o) {
        check(o);
        for (const auto& [x, s] : o.m_) at(x) += s;
        return *this;
    }
    SpatialSeries& operator-=(const SpatialSeries& o) {
        check(o);
        for (const auto& [x, s] : o.m_) at(x) -= s;
        return *this;
    }
    friend SpatialSeries operator+(SpatialSeries a, const SpatialSeries& b) { return a += b; }
    friend SpatialSeries operator-(SpatialSeries a, const SpatialSeries& b) { return a -= b; }

    static SpatialSeries delta(int dim, int order) {
        SpatialSeries s(dim, order);
        s.at(origin(dim))[0] = 1;
        return s;
    }

    friend bool operator==(const SpatialSeries& a, const SpatialSeries& b) {
        SpatialSeries diff = a - b;
        return diff.is_zero();
    }

private:
    void check(const SpatialSeries& o) const {
        if (o.order_ != order_ || o.dim_ != dim_) throw std::invalid_argument("spatial series shape mismatch");
    }
    int dim_ = 2;
    int order_ = 0;
    std::map<Point, Series> m_;
};

// (A * B)(x) = sum_y A(y) B(x - y), series multiplied and truncated.
inline SpatialSeries convolve(const SpatialSeries& A, const SpatialSeries& B) {
    if (A.order() != B.order() || A.dim() != B.dim()) throw std::invalid_argument("spatial series shape mismatch");
    SpatialSeries out(A.dim(), A.order());
    for (const auto& [y, a] : A.entries()) {
        if (a.is_zero()) continue;
        for (const auto& [u, b] : B.entries()) {
            if (b.is_zero()) continue;
            Series::mul_add(out.at(y + u), a, b);
        }
    }
    out.prune();
    return out;
}

}  // namespace asaw
