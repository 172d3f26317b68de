#pragma once

// Exact scalars: the field Q(p) of rational functions in one formal
// transcendental p, with arbitrary-precision rational coefficients.

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "explie/errors.hpp"

namespace explie {

// Dense univariate polynomial over Q in the indeterminate p.
// Coefficients are stored lowest degree first with no trailing zeros.
class Poly {
public:
    Poly() = default;
    Poly(long c) : Poly(mpq_class(c)) {}
    Poly(const mpq_class& c)
    {
        if (sgn(c) != 0) c_.push_back(c);
    }

    static Poly monomial(const mpq_class& c, int k)
    {
        Poly r;
        if (sgn(c) == 0) return r;
        r.c_.assign(static_cast<std::size_t>(k) + 1, mpq_class(0));
        r.c_.back() = c;
        return r;
    }
    static Poly variable() { return monomial(mpq_class(1), 1); }

    static Poly from_coefficients(std::vector<mpq_class> c)
    {
        Poly r;
        r.c_ = std::move(c);
        r.trim();
        return r;
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    bool is_one() const { return c_.size() == 1 && c_[0] == 1; }

    mpq_class coeff(int k) const
    {
        if (k < 0 || k >= static_cast<int>(c_.size())) return mpq_class(0);
        return c_[static_cast<std::size_t>(k)];
    }
    const std::vector<mpq_class>& coefficients() const { return c_; }
    const mpq_class& lead() const { return c_.back(); }
    mpq_class constant_term() const { return c_.empty() ? mpq_class(0) : c_[0]; }

    Poly operator-() const
    {
        Poly r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }

    Poly& operator+=(const Poly& o)
    {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), mpq_class(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o)
    {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), mpq_class(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }

    friend Poly operator*(const Poly& a, const Poly& b)
    {
        Poly r;
        if (a.is_zero() || b.is_zero()) return r;
        r.c_.assign(a.c_.size() + b.c_.size() - 1, mpq_class(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (sgn(a.c_[i]) == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
        }
        r.trim();
        return r;
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    Poly scaled(const mpq_class& s) const
    {
        if (sgn(s) == 0) return Poly();
        Poly r = *this;
        for (auto& x : r.c_) x *= s;
        return r;
    }

    // Euclidean division a = q*b + r with deg r < deg b.
    static void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r)
    {
        if (b.is_zero()) throw ConsistencyError("polynomial division by zero");
        r = a;
        q = Poly();
        if (a.degree() < b.degree()) return;
        q.c_.assign(static_cast<std::size_t>(a.degree() - b.degree()) + 1, mpq_class(0));
        const mpq_class inv_lead = 1 / b.lead();
        while (!r.is_zero() && r.degree() >= b.degree()) {
            const int shift = r.degree() - b.degree();
            const mpq_class f = r.lead() * inv_lead;
            q.c_[static_cast<std::size_t>(shift)] = f;
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                r.c_[j + static_cast<std::size_t>(shift)] -= f * b.c_[j];
            r.trim();
        }
        q.trim();
    }

    Poly monic() const
    {
        if (is_zero() || lead() == 1) return *this;
        return scaled(1 / lead());
    }

    // Monic gcd; gcd(0, 0) = 0.
    static Poly gcd(Poly a, Poly b)
    {
        while (!b.is_zero()) {
            Poly q, r;
            divmod(a, b, q, r);
            a = std::move(b);
            b = r.monic();
        }
        return a.monic();
    }

    mpq_class eval(const mpq_class& x) const
    {
        mpq_class acc(0);
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    std::string to_string() const;

private:
    void trim()
    {
        while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
    }

    std::vector<mpq_class> c_;
};

namespace detail {

inline std::string rational_text(const mpq_class& q)
{
    if (q.get_den() == 1) return q.get_str();
    return "(" + q.get_str() + ")";
}

} // namespace detail

inline std::string Poly::to_string() const
{
    if (c_.empty()) return "0";
    std::string out;
    bool first = true;
    for (std::size_t k = 0; k < c_.size(); ++k) {
        if (sgn(c_[k]) == 0) continue;
        const bool neg = sgn(c_[k]) < 0;
        const mpq_class mag = abs(c_[k]);
        std::string term;
        if (k == 0) {
            term = detail::rational_text(mag);
        } else {
            if (mag != 1) term = detail::rational_text(mag) + "*";
            term += "p";
            if (k > 1) term += "^" + std::to_string(k);
        }
        if (first) {
            out = neg ? "-" + term : term;
            first = false;
        } else {
            out += neg ? " - " : " + ";
            out += term;
        }
    }
    return out;
}

// Element of Q(p), kept as a reduced fraction num/den with monic den.
class Scalar {
public:
    Scalar() = default;
    Scalar(long c) : num_(c) {}
    Scalar(int c) : num_(static_cast<long>(c)) {}
    Scalar(const mpq_class& c) : num_(c) {}
    Scalar(const Poly& num) : num_(num) {}
    Scalar(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den))
    {
        if (den_.is_zero()) throw ConsistencyError("Scalar with zero denominator");
        normalize();
    }

    static Scalar p() { return Scalar(Poly::variable()); }
    static Scalar rational(long num, long den) { return Scalar(mpq_class(num, den)); }

    const Poly& numerator() const { return num_; }
    const Poly& denominator() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_polynomial() const { return den_.is_one(); }
    bool is_rational() const { return den_.is_one() && num_.is_constant(); }

    mpq_class to_rational() const
    {
        if (!is_rational()) throw ConsistencyError("Scalar depends on p: " + to_string());
        return num_.constant_term();
    }

    // Value at p = x; empty when the denominator vanishes there.
    std::optional<mpq_class> eval_at(const mpq_class& x) const
    {
        const mpq_class d = den_.eval(x);
        if (sgn(d) == 0) return std::nullopt;
        return num_.eval(x) / d;
    }

    Scalar operator-() const
    {
        Scalar r = *this;
        r.num_ = -r.num_;
        return r;
    }

    friend Scalar operator+(const Scalar& a, const Scalar& b)
    {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.den_ == b.den_) {
            Scalar r;
            r.num_ = a.num_ + b.num_;
            r.den_ = a.den_;
            if (!r.den_.is_one()) r.normalize();
            return r;
        }
        return Scalar(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }

    friend Scalar operator*(const Scalar& a, const Scalar& b)
    {
        if (a.is_zero() || b.is_zero()) return Scalar();
        if (a.den_.is_one() && b.den_.is_one()) {
            Scalar r;
            r.num_ = a.num_ * b.num_;
            return r;
        }
        return Scalar(a.num_ * b.num_, a.den_ * b.den_);
    }

    friend Scalar operator/(const Scalar& a, const Scalar& b)
    {
        if (b.is_zero()) throw ConsistencyError("Scalar division by zero");
        if (a.is_zero()) return Scalar();
        if (b.is_rational()) {
            Scalar r = a;
            r.num_ = r.num_.scaled(1 / b.num_.constant_term());
            return r;
        }
        return Scalar(a.num_ * b.den_, a.den_ * b.num_);
    }

    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

    Scalar scaled(const mpq_class& s) const
    {
        Scalar r = *this;
        r.num_ = r.num_.scaled(s);
        return r;
    }

    Scalar inverse() const { return Scalar(1) / *this; }

    Scalar pow(long e) const
    {
        if (e < 0) return inverse().pow(-e);
        Scalar result(1);
        Scalar base = *this;
        while (e > 0) {
            if (e & 1) result *= base;
            e >>= 1;
            if (e > 0) base *= base;
        }
        return result;
    }

    friend bool operator==(const Scalar& a, const Scalar& b)
    {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    std::string to_string() const
    {
        if (den_.is_one()) return num_.to_string();
        return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
    }

    friend std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

private:
    void normalize()
    {
        if (num_.is_zero()) {
            den_ = Poly(1);
            return;
        }
        if (den_.is_constant()) {
            if (!den_.is_one()) {
                num_ = num_.scaled(1 / den_.constant_term());
                den_ = Poly(1);
            }
            return;
        }
        // Exact division is the common case in fraction-free elimination.
        Poly q, r;
        Poly::divmod(num_, den_, q, r);
        if (r.is_zero()) {
            num_ = std::move(q);
            den_ = Poly(1);
            return;
        }
        const Poly g = Poly::gcd(num_, den_);
        if (!g.is_constant()) {
            Poly rem;
            Poly::divmod(Poly(num_), g, num_, rem);
            Poly::divmod(Poly(den_), g, den_, rem);
        }
        const mpq_class lc = den_.lead();
        if (lc != 1) {
            num_ = num_.scaled(1 / lc);
            den_ = den_.scaled(1 / lc);
        }
    }

    Poly num_;
    Poly den_{1};
};

} // namespace explie
