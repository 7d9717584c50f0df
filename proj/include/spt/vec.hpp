#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <initializer_list>

namespace spt {

inline constexpr std::size_t kMaxDim = 8;

//! Small fixed-capacity vector of doubles with value semantics.
class Vec {
  public:
    Vec() = default;
    explicit Vec(std::size_t n, double fill = 0.0) : n_(n) {
        assert(n <= kMaxDim);
        for (std::size_t i = 0; i < n; ++i) d_[i] = fill;
    }
    Vec(std::initializer_list<double> xs) : n_(xs.size()) {
        assert(xs.size() <= kMaxDim);
        std::size_t i = 0;
        for (double x : xs) d_[i++] = x;
    }

    std::size_t size() const { return n_; }
    bool empty() const { return n_ == 0; }
    double& operator[](std::size_t i) { return d_[i]; }
    double operator[](std::size_t i) const { return d_[i]; }
    double* begin() { return d_.data(); }
    double* end() { return d_.data() + n_; }
    const double* begin() const { return d_.data(); }
    const double* end() const { return d_.data() + n_; }

    void push_back(double x) {
        assert(n_ < kMaxDim);
        d_[n_++] = x;
    }

    Vec& operator+=(const Vec& o) {
        for (std::size_t i = 0; i < n_; ++i) d_[i] += o.d_[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        for (std::size_t i = 0; i < n_; ++i) d_[i] -= o.d_[i];
        return *this;
    }
    Vec& operator*=(double s) {
        for (std::size_t i = 0; i < n_; ++i) d_[i] *= s;
        return *this;
    }

    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator*(double s, Vec a) { return a *= s; }
    friend Vec operator*(Vec a, double s) { return a *= s; }
    friend Vec operator-(Vec a) { return a *= -1.0; }

    friend bool operator==(const Vec& a, const Vec& b) {
        if (a.n_ != b.n_) return false;
        for (std::size_t i = 0; i < a.n_; ++i)
            if (a.d_[i] != b.d_[i]) return false;
        return true;
    }

  private:
    std::array<double, kMaxDim> d_{};
    std::size_t n_ = 0;
};

inline double dot(const Vec& a, const Vec& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double max_abs_diff(const Vec& a, const Vec& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::fmax(m, std::fabs(a[i] - b[i]));
    return m;
}

} // namespace spt
