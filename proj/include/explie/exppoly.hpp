#pragma once

// Exp-polynomial functions Z^r -> Q(p): finite sums
//     sum c_{k,a} n_1^{k_1} ... n_r^{k_r} a_1^{n_1} ... a_r^{n_r}
// with Scalar coefficients and nonzero rational bases.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "explie/errors.hpp"
#include "explie/matrix.hpp"
#include "explie/scalar.hpp"

namespace explie {

// Exponent vector k and base vector a of one exp-polynomial term. Also used
// as the signature (delta, a) of a term over a subset of variables.
struct TermKey {
    std::vector<int> exps;
    std::vector<mpq_class> bases;

    std::size_t arity() const { return exps.size(); }

    static TermKey unit(std::size_t arity)
    {
        return {std::vector<int>(arity, 0), std::vector<mpq_class>(arity, mpq_class(1))};
    }

    bool is_unit() const
    {
        return std::all_of(exps.begin(), exps.end(), [](int e) { return e == 0; })
            && std::all_of(bases.begin(), bases.end(), [](const mpq_class& b) { return b == 1; });
    }

    friend bool operator<(const TermKey& x, const TermKey& y)
    {
        if (x.exps != y.exps) return x.exps < y.exps;
        for (std::size_t i = 0; i < x.bases.size() && i < y.bases.size(); ++i) {
            const int c = cmp(x.bases[i], y.bases[i]);
            if (c != 0) return c < 0;
        }
        return x.bases.size() < y.bases.size();
    }
    friend bool operator==(const TermKey& x, const TermKey& y)
    {
        return x.exps == y.exps && x.bases == y.bases;
    }
};

namespace detail {

inline mpq_class rational_pow(const mpq_class& a, long e)
{
    mpz_class num, den;
    const unsigned long m = static_cast<unsigned long>(e < 0 ? -e : e);
    mpz_pow_ui(num.get_mpz_t(), a.get_num_mpz_t(), m);
    mpz_pow_ui(den.get_mpz_t(), a.get_den_mpz_t(), m);
    mpq_class r = e < 0 ? mpq_class(den, num) : mpq_class(num, den);
    r.canonicalize();
    return r;
}

inline mpz_class int_pow(long x, int k)
{
    mpz_class r;
    mpz_class base(x);
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(k));
    return r;
}

// Value of the monomial n^k a^n at the integer point x.
inline mpq_class term_value(const TermKey& key, std::span<const int> x)
{
    mpq_class v(1);
    for (std::size_t j = 0; j < key.exps.size(); ++j) {
        if (key.exps[j] > 0) {
            if (x[j] == 0) return mpq_class(0);
            v *= mpq_class(int_pow(x[j], key.exps[j]));
        }
        if (key.bases[j] != 1 && x[j] != 0) v *= rational_pow(key.bases[j], x[j]);
    }
    return v;
}

} // namespace detail

class ExpPoly {
public:
    using TermMap = std::map<TermKey, Scalar>;

    ExpPoly() = default;
    explicit ExpPoly(std::size_t arity) : arity_(arity) {}

    static ExpPoly constant(std::size_t arity, const Scalar& c)
    {
        ExpPoly f(arity);
        if (!c.is_zero()) f.terms_.emplace(TermKey::unit(arity), c);
        return f;
    }

    // The coordinate function n_j (0-based j).
    static ExpPoly variable(std::size_t arity, std::size_t j)
    {
        TermKey k = TermKey::unit(arity);
        k.exps.at(j) = 1;
        return monomial(arity, std::move(k), Scalar(1));
    }

    // The function a^{n_j}.
    static ExpPoly exponential(std::size_t arity, std::size_t j, const mpq_class& a)
    {
        TermKey k = TermKey::unit(arity);
        k.bases.at(j) = a;
        return monomial(arity, std::move(k), Scalar(1));
    }

    static ExpPoly monomial(std::size_t arity, TermKey key, const Scalar& c)
    {
        check_key(arity, key);
        ExpPoly f(arity);
        if (!c.is_zero()) f.terms_.emplace(std::move(key), c);
        return f;
    }

    // Merge a raw term list into canonical form.
    static ExpPoly normalize(std::size_t arity, const std::vector<std::pair<TermKey, Scalar>>& raw)
    {
        ExpPoly f(arity);
        for (const auto& [key, c] : raw) {
            check_key(arity, key);
            f.add_term(key, c);
        }
        return f;
    }

    std::size_t arity() const { return arity_; }
    const TermMap& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    // Scalar value when the function is constant.
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_unit()); }
    Scalar constant_value() const
    {
        if (terms_.empty()) return Scalar(0);
        if (!is_constant()) throw ConsistencyError("exp-polynomial is not constant");
        return terms_.begin()->second;
    }

    void add_term(const TermKey& key, const Scalar& c)
    {
        if (c.is_zero()) return;
        auto it = terms_.find(key);
        if (it == terms_.end()) {
            terms_.emplace(key, c);
            return;
        }
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }

    ExpPoly operator-() const
    {
        ExpPoly r = *this;
        for (auto& [k, c] : r.terms_) c = -c;
        return r;
    }

    ExpPoly& operator+=(const ExpPoly& o)
    {
        require_same_arity(o);
        for (const auto& [k, c] : o.terms_) add_term(k, c);
        return *this;
    }
    ExpPoly& operator-=(const ExpPoly& o)
    {
        require_same_arity(o);
        for (const auto& [k, c] : o.terms_) add_term(k, -c);
        return *this;
    }
    friend ExpPoly operator+(ExpPoly a, const ExpPoly& b) { return a += b; }
    friend ExpPoly operator-(ExpPoly a, const ExpPoly& b) { return a -= b; }

    friend ExpPoly operator*(const ExpPoly& a, const ExpPoly& b)
    {
        a.require_same_arity(b);
        ExpPoly r(a.arity_);
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_) {
                TermKey k{std::vector<int>(a.arity_), std::vector<mpq_class>(a.arity_)};
                for (std::size_t j = 0; j < a.arity_; ++j) {
                    k.exps[j] = ka.exps[j] + kb.exps[j];
                    k.bases[j] = ka.bases[j] * kb.bases[j];
                }
                r.add_term(k, ca * cb);
            }
        return r;
    }
    ExpPoly& operator*=(const ExpPoly& o) { return *this = *this * o; }

    ExpPoly scaled(const Scalar& s) const
    {
        if (s.is_zero()) return ExpPoly(arity_);
        ExpPoly r = *this;
        for (auto& [k, c] : r.terms_) c *= s;
        return r;
    }

    Scalar evaluate(std::span<const int> x) const
    {
        if (x.size() != arity_) throw ArityError("evaluate: expected " + std::to_string(arity_) + " arguments, got " + std::to_string(x.size()));
        Scalar acc;
        for (const auto& [k, c] : terms_) {
            const mpq_class v = detail::term_value(k, x);
            if (sgn(v) != 0) acc += c.scaled(v);
        }
        return acc;
    }
    Scalar evaluate(const std::vector<int>& x) const { return evaluate(std::span<const int>(x)); }

    friend bool operator==(const ExpPoly& a, const ExpPoly& b)
    {
        return a.arity_ == b.arity_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const ExpPoly& a, const ExpPoly& b) { return !(a == b); }

    // Text form, e.g. `3*n1^2*2^n1 + (1 + p)*n2`. Parsed back by parse_exppoly.
    std::string to_string() const;

private:
    static void check_key(std::size_t arity, const TermKey& key)
    {
        if (key.exps.size() != arity || key.bases.size() != arity)
            throw ArityError("term key arity " + std::to_string(key.exps.size()) + " does not match " + std::to_string(arity));
        for (int e : key.exps)
            if (e < 0) throw ArityError("negative exponent in exp-polynomial term");
        for (const auto& b : key.bases)
            if (sgn(b) == 0) throw InvalidBaseError("exp-polynomial base must be nonzero");
    }

    void require_same_arity(const ExpPoly& o) const
    {
        if (o.arity_ != arity_)
            throw ArityError("exp-polynomial arity mismatch: " + std::to_string(arity_) + " vs " + std::to_string(o.arity_));
    }

    std::size_t arity_ = 0;
    TermMap terms_;
};

enum class CombineOp { add, mul };

inline ExpPoly combine(CombineOp op, const ExpPoly& f, const ExpPoly& g)
{
    return op == CombineOp::add ? f + g : f * g;
}

inline ExpPoly combine_scale(const ExpPoly& f, const Scalar& s) { return f.scaled(s); }

// Integer matrix stored as rows.
using IntMatrix = std::vector<std::vector<int>>;

namespace detail {

using RationalPoly = std::map<std::vector<int>, mpq_class>;

inline RationalPoly rpoly_mul(const RationalPoly& a, const RationalPoly& b)
{
    RationalPoly r;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) {
            std::vector<int> e(ea.size());
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            auto& slot = r[e];
            slot += ca * cb;
        }
    for (auto it = r.begin(); it != r.end();) it = sgn(it->second) == 0 ? r.erase(it) : std::next(it);
    return r;
}

} // namespace detail

// g(y) = f(A y + b). A has arity(f) rows and arity(g) columns.
inline ExpPoly substitute_affine(const ExpPoly& f, const IntMatrix& a, const std::vector<int>& b)
{
    const std::size_t r = f.arity();
    if (a.size() != r || b.size() != r) throw DimensionError("substitute_affine: matrix rows must equal the arity");
    const std::size_t rn = r == 0 ? 0 : a.front().size();
    for (const auto& row : a)
        if (row.size() != rn) throw DimensionError("substitute_affine: ragged matrix");
    if (r == 0) {
        // Nothing to substitute; only the arity changes.
        return ExpPoly::constant(rn, f.constant_value());
    }

    // Powers of the linear forms (A y + b)_j, built on demand.
    std::vector<std::vector<detail::RationalPoly>> powers(r);
    auto linear_power = [&](std::size_t j, int k) -> const detail::RationalPoly& {
        auto& pw = powers[j];
        if (pw.empty()) {
            detail::RationalPoly one;
            one[std::vector<int>(rn, 0)] = 1;
            pw.push_back(std::move(one));
        }
        while (static_cast<int>(pw.size()) <= k) {
            detail::RationalPoly lin;
            if (b[j] != 0) lin[std::vector<int>(rn, 0)] = b[j];
            for (std::size_t l = 0; l < rn; ++l) {
                if (a[j][l] == 0) continue;
                std::vector<int> e(rn, 0);
                e[l] = 1;
                lin[e] = a[j][l];
            }
            pw.push_back(detail::rpoly_mul(pw.back(), lin));
        }
        return pw[static_cast<std::size_t>(k)];
    };

    ExpPoly g(rn);
    for (const auto& [key, c] : f.terms()) {
        mpq_class factor(1);
        std::vector<mpq_class> new_bases(rn, mpq_class(1));
        for (std::size_t j = 0; j < r; ++j) {
            if (key.bases[j] == 1) continue;
            if (b[j] != 0) factor *= detail::rational_pow(key.bases[j], b[j]);
            for (std::size_t l = 0; l < rn; ++l)
                if (a[j][l] != 0) new_bases[l] *= detail::rational_pow(key.bases[j], a[j][l]);
        }
        detail::RationalPoly poly;
        poly[std::vector<int>(rn, 0)] = 1;
        for (std::size_t j = 0; j < r; ++j)
            if (key.exps[j] > 0) poly = detail::rpoly_mul(poly, linear_power(j, key.exps[j]));
        for (const auto& [e, pc] : poly) g.add_term(TermKey{e, new_bases}, c.scaled(pc * factor));
    }
    return g;
}

// One group of expand_in_subset: h = sum_p f_p(complement) * term_p(S).
struct SubsetExpansion {
    ExpPoly coefficient;  // over the complement variables, in original order
    TermKey signature;    // (delta_p, a_p) over the subset variables, in subset order
};

inline std::vector<SubsetExpansion> expand_in_subset(const ExpPoly& h, const std::vector<std::size_t>& subset)
{
    const std::size_t r = h.arity();
    std::vector<bool> in_subset(r, false);
    for (auto v : subset) {
        if (v >= r) throw ArityError("expand_in_subset: variable index out of range");
        if (in_subset[v]) throw DuplicateError("expand_in_subset: repeated variable");
        in_subset[v] = true;
    }
    std::vector<std::size_t> complement;
    for (std::size_t v = 0; v < r; ++v)
        if (!in_subset[v]) complement.push_back(v);

    std::map<TermKey, ExpPoly> groups;
    for (const auto& [key, c] : h.terms()) {
        TermKey sig{std::vector<int>(subset.size()), std::vector<mpq_class>(subset.size())};
        for (std::size_t t = 0; t < subset.size(); ++t) {
            sig.exps[t] = key.exps[subset[t]];
            sig.bases[t] = key.bases[subset[t]];
        }
        TermKey rest{std::vector<int>(complement.size()), std::vector<mpq_class>(complement.size())};
        for (std::size_t t = 0; t < complement.size(); ++t) {
            rest.exps[t] = key.exps[complement[t]];
            rest.bases[t] = key.bases[complement[t]];
        }
        auto it = groups.try_emplace(sig, ExpPoly(complement.size())).first;
        it->second.add_term(rest, c);
    }
    std::vector<SubsetExpansion> out;
    for (auto& [sig, f] : groups) out.push_back({std::move(f), sig});
    return out;
}

// Inverse of expand_in_subset: sum_p f_p * term_p placed back in r variables.
inline ExpPoly recombine_subset(const std::vector<SubsetExpansion>& parts, const std::vector<std::size_t>& subset, std::size_t arity)
{
    std::vector<bool> in_subset(arity, false);
    for (auto v : subset) in_subset[v] = true;
    std::vector<std::size_t> complement;
    for (std::size_t v = 0; v < arity; ++v)
        if (!in_subset[v]) complement.push_back(v);
    ExpPoly h(arity);
    for (const auto& part : parts) {
        for (const auto& [key, c] : part.coefficient.terms()) {
            TermKey full = TermKey::unit(arity);
            for (std::size_t t = 0; t < complement.size(); ++t) {
                full.exps[complement[t]] = key.exps[t];
                full.bases[complement[t]] = key.bases[t];
            }
            for (std::size_t t = 0; t < subset.size(); ++t) {
                full.exps[subset[t]] = part.signature.exps[t];
                full.bases[subset[t]] = part.signature.bases[t];
            }
            h.add_term(full, c);
        }
    }
    return h;
}

// Per-variable sizes of the independence grid: for each base seen in a
// variable, all powers up to the largest one are counted, so each variable
// carries a complete confluent family n^t a^n (t < s_a) whose values at
// 0..s-1 form a nonsingular extended Vandermonde matrix.
inline std::vector<int> independence_grid_sizes(const std::vector<TermKey>& signatures)
{
    if (signatures.empty()) return {};
    const std::size_t m = signatures.front().arity();
    std::set<TermKey> seen;
    for (const auto& s : signatures) {
        if (s.arity() != m || s.bases.size() != m) throw ArityError("independence_grid: mixed signature arities");
        for (const auto& b : s.bases)
            if (sgn(b) == 0) throw InvalidBaseError("independence_grid: zero base");
        if (!seen.insert(s).second) throw DuplicateError("independence_grid: duplicate signature");
    }
    std::vector<int> sizes(m, 0);
    for (std::size_t v = 0; v < m; ++v) {
        std::map<mpq_class, int> max_power;
        for (const auto& s : signatures) {
            auto [it, fresh] = max_power.try_emplace(s.bases[v], s.exps[v]);
            if (!fresh) it->second = std::max(it->second, s.exps[v]);
        }
        for (const auto& [b, k] : max_power) sizes[v] += k + 1;
    }
    return sizes;
}

// Tensor grid prod_v {0, ..., s_v - 1}, lexicographic order.
inline std::vector<std::vector<int>> independence_grid(const std::vector<TermKey>& signatures)
{
    if (signatures.empty()) return {};
    const auto sizes = independence_grid_sizes(signatures);
    std::vector<std::vector<int>> points{std::vector<int>{}};
    for (int s : sizes) {
        std::vector<std::vector<int>> next;
        next.reserve(points.size() * static_cast<std::size_t>(s));
        for (const auto& pt : points)
            for (int x = 0; x < s; ++x) {
                auto q = pt;
                q.push_back(x);
                next.push_back(std::move(q));
            }
        points = std::move(next);
    }
    return points;
}

// Rows: points; columns: term functions.
inline ExactMatrix evaluation_matrix(const std::vector<TermKey>& signatures, const std::vector<std::vector<int>>& points)
{
    ExactMatrix m(points.size(), signatures.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = 0; j < signatures.size(); ++j)
            m(i, j) = Scalar(detail::term_value(signatures[j], points[i]));
    return m;
}

// Union of term signatures of several exp-polynomials of the same arity.
inline std::vector<TermKey> signatures_of(std::initializer_list<const ExpPoly*> fs)
{
    std::set<TermKey> keys;
    for (const auto* f : fs)
        for (const auto& [k, c] : f->terms()) keys.insert(k);
    return {keys.begin(), keys.end()};
}

// Agreement of f and g on the independence grid of their combined terms;
// equivalent to equality as functions on Z^r.
inline bool agree_on_grid(const ExpPoly& f, const ExpPoly& g)
{
    if (f.arity() != g.arity()) throw ArityError("agree_on_grid: arity mismatch");
    const auto sigs = signatures_of({&f, &g});
    for (const auto& pt : independence_grid(sigs))
        if (f.evaluate(pt) != g.evaluate(pt)) return false;
    return true;
}

} // namespace explie
