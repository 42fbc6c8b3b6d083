// Dense univariate polynomials over Q.

#pragma once

#include "lcev/rational.hpp"
#include "lcev/real.hpp"

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lcev {

class Poly {
public:
    /// Degree reported for the zero polynomial.
    static constexpr int kZeroDegree = -1;

    Poly() = default;
    explicit Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
    Poly(std::initializer_list<Rational> coeffs) : c_(coeffs) { trim(); }

    static Poly constant(const Rational& value) { return Poly(std::vector<Rational>{value}); }

    static Poly monomial(const Rational& coeff, int degree) {
        std::vector<Rational> c(static_cast<std::size_t>(degree) + 1);
        c.back() = coeff;
        return Poly(std::move(c));
    }

    /// The indeterminate S.
    static Poly identity() { return monomial(Rational(1), 1); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }

    /// Coefficient of S^i; zero outside the stored range.
    Rational operator[](int i) const {
        if (i < 0 || i > degree()) return Rational(0);
        return c_[static_cast<std::size_t>(i)];
    }

    const Rational& leading() const { return c_.back(); }
    std::span<const Rational> coeffs() const { return c_; }

    /// Lowest exponent with a nonzero coefficient (the order of vanishing at 0).
    int valuation() const {
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (c_[i] != 0) return static_cast<int>(i);
        return kZeroDegree;
    }

    bool is_monomial() const { return !is_zero() && valuation() == degree(); }

    Poly derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<Rational> d(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<long>(i);
        return Poly(std::move(d));
    }

    Poly monic() const {
        if (is_zero()) return {};
        return *this * (Rational(1) / leading());
    }

    Rational eval(const Rational& x) const {
        Rational acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    Real eval(const Real& x) const {
        Real acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + to_real(*it);
        return acc;
    }

    /// Multiplies by S^k, k >= 0.
    Poly shifted(int k) const {
        if (is_zero() || k == 0) return *this;
        std::vector<Rational> c(static_cast<std::size_t>(k), Rational(0));
        c.insert(c.end(), c_.begin(), c_.end());
        return Poly(std::move(c));
    }

    /// Divides by S^k, requiring the low k coefficients to vanish.
    Poly unshifted(int k) const {
        if (is_zero() || k == 0) return *this;
        return Poly(std::vector<Rational>(c_.begin() + k, c_.end()));
    }

    Poly operator-() const {
        Poly r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
        return Poly(std::move(c));
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        }
        return Poly(std::move(c));
    }
    friend Poly operator*(const Poly& a, const Rational& s) {
        if (s == 0) return {};
        Poly r = a;
        for (auto& x : r.c_) x *= s;
        return r;
    }
    friend Poly operator*(const Rational& s, const Poly& a) { return a * s; }

    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    Poly& operator-=(const Poly& o) { return *this = *this - o; }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

    /// Euclidean division a = q*b + r with deg r < deg b.
    static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
        if (b.is_zero()) throw ZeroDenominator("polynomial division by zero");
        if (a.degree() < b.degree()) return {Poly{}, a};
        std::vector<Rational> rem(a.c_);
        std::vector<Rational> quo(static_cast<std::size_t>(a.degree() - b.degree()) + 1);
        const Rational& lb = b.leading();
        for (int i = a.degree() - b.degree(); i >= 0; --i) {
            const Rational f = rem[static_cast<std::size_t>(i + b.degree())] / lb;
            quo[static_cast<std::size_t>(i)] = f;
            if (f == 0) continue;
            for (int j = 0; j <= b.degree(); ++j)
                rem[static_cast<std::size_t>(i + j)] -= f * b.c_[static_cast<std::size_t>(j)];
        }
        return {Poly(std::move(quo)), Poly(std::move(rem))};
    }

    std::string str(char var = 'S') const {
        if (is_zero()) return "0";
        std::string out;
        for (int i = degree(); i >= 0; --i) {
            const Rational& c = c_[static_cast<std::size_t>(i)];
            if (c == 0) continue;
            if (!out.empty()) out += c < 0 ? " - " : " + ";
            else if (c < 0) out += "-";
            const Rational a = c < 0 ? Rational(-c) : c;
            const bool unit = a == 1 && i != 0;
            if (!unit) out += to_string(a);
            if (i > 0) {
                if (!unit) out += "*";
                out += var;
                if (i > 1) out += "^" + std::to_string(i);
            }
        }
        return out;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::vector<Rational> c_;
};

/// Monic greatest common divisor; gcd(0, 0) = 0.
inline Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        auto r = Poly::divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

inline Poly lcm(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    return Poly::divmod(a * b, gcd(a, b)).first.monic();
}

} // namespace lcev
