#pragma once

// The induced module U(G^-) (x) V with G^+ V = 0.
//
// Elements are combinations of words g_1 g_2 ... g_s v_j(beta) with every
// letter of negative Z-degree. A generator acts by
//   g (w_1 rest) = [g, w_1] rest + w_1 (g rest)
// until it either joins the word (degree < 0), kills V (degree > 0) or acts
// through the module (degree 0).
//
// The engine is written once over a policy: the concrete policy uses integer
// lattice weights and Scalar coefficients, the symbolic policy uses affine
// forms in integer variables and ExpPoly coefficients.

#include <cstddef>
#include <iterator>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "explie/algebra.hpp"
#include "explie/errors.hpp"
#include "explie/exppoly.hpp"
#include "explie/gmodule.hpp"
#include "explie/scalar.hpp"

namespace explie {

template <class W>
struct Letter {
    int i = 0;
    int k = 0;
    W arg{};

    auto operator<=>(const Letter&) const = default;
    bool operator==(const Letter&) const = default;
};

template <class W>
struct Word {
    std::vector<Letter<W>> letters;
    int base = 0;
    W base_arg{};  // empty for finite modules

    auto operator<=>(const Word&) const = default;
    bool operator==(const Word&) const = default;
};

// Lattice weight given as an affine function of integer variables:
// coordinate u equals sum_v a[u][v] x_v + b[u].
struct AffineWeight {
    IntMatrix a;
    std::vector<int> b;

    auto operator<=>(const AffineWeight&) const = default;
    bool operator==(const AffineWeight&) const = default;

    static AffineWeight constant(std::size_t nvars, const std::vector<int>& c)
    {
        return AffineWeight{IntMatrix(c.size(), std::vector<int>(nvars, 0)), c};
    }

    // The block of n variables starting at `offset`.
    static AffineWeight block(std::size_t nvars, std::size_t n, std::size_t offset)
    {
        AffineWeight w{IntMatrix(n, std::vector<int>(nvars, 0)), std::vector<int>(n, 0)};
        for (std::size_t u = 0; u < n; ++u) w.a[u][offset + u] = 1;
        return w;
    }

    std::vector<int> at(const std::vector<int>& x) const
    {
        std::vector<int> out = b;
        for (std::size_t u = 0; u < a.size(); ++u)
            for (std::size_t v = 0; v < x.size(); ++v) out[u] += a[u][v] * x[v];
        return out;
    }
};

inline AffineWeight operator+(const AffineWeight& x, const AffineWeight& y)
{
    AffineWeight z = x;
    if (y.b.size() != x.b.size()) throw DimensionError("affine weights of different rank");
    for (std::size_t u = 0; u < z.a.size(); ++u) {
        z.b[u] += y.b[u];
        for (std::size_t v = 0; v < z.a[u].size(); ++v) z.a[u][v] += y.a[u][v];
    }
    return z;
}

inline AffineWeight operator-(const AffineWeight& x, const AffineWeight& y)
{
    AffineWeight z = x;
    for (std::size_t u = 0; u < z.a.size(); ++u) {
        z.b[u] -= y.b[u];
        for (std::size_t v = 0; v < z.a[u].size(); ++v) z.a[u][v] -= y.a[u][v];
    }
    return z;
}

struct ConcretePolicy {
    using Weight = std::vector<int>;
    using Coef = Scalar;

    Coef one() const { return Scalar(1); }
    static Weight add(const Weight& x, const Weight& y) { return add_weights(x, y); }
    static Coef eval2(const ExpPoly& f, const Weight& x, const Weight& y) { return f.evaluate(concat_weights(x, y)); }
    static Coef eval1(const ExpPoly& f, const Weight& x) { return f.evaluate(x); }
};

struct SymbolicPolicy {
    using Weight = AffineWeight;
    using Coef = ExpPoly;

    std::size_t nvars = 0;

    Coef one() const { return ExpPoly::constant(nvars, Scalar(1)); }
    static Weight add(const Weight& x, const Weight& y) { return x + y; }
    static Coef eval2(const ExpPoly& f, const Weight& x, const Weight& y)
    {
        IntMatrix a = x.a;
        a.insert(a.end(), y.a.begin(), y.a.end());
        std::vector<int> b = x.b;
        b.insert(b.end(), y.b.begin(), y.b.end());
        return substitute_affine(f, a, b);
    }
    static Coef eval1(const ExpPoly& f, const Weight& x) { return substitute_affine(f, x.a, x.b); }
};

template <class P>
class InducedEngine {
public:
    using W = typename P::Weight;
    using C = typename P::Coef;
    using WordT = Word<W>;
    using LetterT = Letter<W>;
    using Vec = std::map<WordT, C>;

    InducedEngine(const AlgebraSpec& a, const ModuleSpec& m, P policy = P{}) : a_(a), m_(m), policy_(std::move(policy))
    {
        m_.check_algebra(a_);
    }

    const P& policy() const { return policy_; }

    static void accumulate(Vec& acc, const WordT& w, const C& c)
    {
        if (c.is_zero()) return;
        auto [it, fresh] = acc.emplace(w, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) acc.erase(it);
        }
    }

    Vec apply(const LetterT& g, const WordT& w) const { return apply_at(g, w, 0); }

    Vec apply(const LetterT& g, const Vec& x) const
    {
        Vec out;
        for (const auto& [w, c] : x)
            for (const auto& [u, d] : apply_at(g, w, 0)) accumulate(out, u, c * d);
        return out;
    }

    // Applies the word g_1 ... g_r, rightmost letter first.
    Vec apply_word(const std::vector<LetterT>& word, Vec x) const
    {
        for (auto it = word.rbegin(); it != word.rend(); ++it) x = apply(*it, x);
        return x;
    }

private:
    // g acting on the tail of w starting at letter `pos`.
    Vec apply_at(const LetterT& g, const WordT& w, std::size_t pos) const
    {
        Vec out;
        if (g.i < 0) {
            WordT u{{g}, w.base, w.base_arg};
            u.letters.insert(u.letters.end(), w.letters.begin() + static_cast<std::ptrdiff_t>(pos), w.letters.end());
            accumulate(out, u, policy_.one());
            return out;
        }
        if (pos == w.letters.size()) {
            if (g.i > 0) return out;
            for (const auto& t : m_.action(g.k, w.base)) {
                if (m_.graded()) accumulate(out, WordT{{}, t.s, P::add(g.arg, w.base_arg)}, P::eval2(t.h, g.arg, w.base_arg));
                else accumulate(out, WordT{{}, t.s, w.base_arg}, P::eval1(t.h, g.arg));
            }
            return out;
        }
        const LetterT& l = w.letters[pos];
        for (const auto& t : a_.structure(g.i, g.k, l.i, l.k)) {
            const C c = P::eval2(t.f, g.arg, l.arg);
            if (c.is_zero()) continue;
            const LetterT h{g.i + l.i, t.s, P::add(g.arg, l.arg)};
            for (const auto& [u, d] : apply_at(h, w, pos + 1)) accumulate(out, u, c * d);
        }
        for (const auto& [u, d] : apply_at(g, w, pos + 1)) {
            WordT v{{l}, u.base, u.base_arg};
            v.letters.insert(v.letters.end(), u.letters.begin(), u.letters.end());
            accumulate(out, v, d);
        }
        return out;
    }

    const AlgebraSpec& a_;
    const ModuleSpec& m_;
    P policy_;
};

// ---------------------------------------------------------------------------
// Concrete interface

using PBWWord = Word<std::vector<int>>;
using FormalVector = std::map<PBWWord, Scalar>;
using ConcreteEngine = InducedEngine<ConcretePolicy>;

inline Letter<std::vector<int>> to_letter(const Generator& g) { return {g.degree.i, g.family, g.degree.alpha}; }

inline int word_degree(const PBWWord& w)
{
    int d = 0;
    for (const auto& l : w.letters) d += l.i;
    return d;
}

inline std::vector<int> word_weight(const PBWWord& w, std::size_t n)
{
    std::vector<int> x = w.base_arg.empty() ? std::vector<int>(n, 0) : w.base_arg;
    for (const auto& l : w.letters) x = add_weights(x, l.arg);
    return x;
}

// (degree, weight) shared by every word of x; throws on mixed components.
inline std::pair<int, std::vector<int>> homogeneous_component(const FormalVector& x, std::size_t n)
{
    if (x.empty()) return {0, std::vector<int>(n, 0)};
    const int d = word_degree(x.begin()->first);
    const auto wt = word_weight(x.begin()->first, n);
    for (const auto& [w, c] : x)
        if (word_degree(w) != d || word_weight(w, n) != wt) throw DegreeError("vector is not homogeneous");
    return {d, wt};
}

inline FormalVector monomial_vector(const AlgebraSpec& a, const ModuleSpec& m, const std::vector<Generator>& letters, int base,
                                    const std::vector<int>& base_weight)
{
    PBWWord w;
    for (const auto& g : letters) {
        if (g.degree.i >= 0) throw DegreeError("lowering letters must have negative degree");
        a.check_generator(g);
        w.letters.push_back(to_letter(g));
    }
    if (base < 0 || static_cast<std::size_t>(base) >= m.dim()) throw UnknownNameError("basis index out of range");
    if (m.graded() && base_weight.size() != a.n()) throw DimensionError("base weight has wrong lattice rank");
    if (!m.graded() && !base_weight.empty()) throw DimensionError("finite module base carries no weight");
    w.base = base;
    w.base_arg = base_weight;
    return FormalVector{{w, Scalar(1)}};
}

inline FormalVector from_v(const VectorInV& v)
{
    FormalVector x;
    for (const auto& [k, c] : v) ConcreteEngine::accumulate(x, PBWWord{{}, k.j, k.beta}, c);
    return x;
}

inline FormalVector fv_sum(FormalVector a, const FormalVector& b, const Scalar& scale = Scalar(1))
{
    for (const auto& [w, c] : b) ConcreteEngine::accumulate(a, w, c * scale);
    return a;
}

inline FormalVector apply_generator(const AlgebraSpec& a, const ModuleSpec& m, const Generator& g, const FormalVector& x)
{
    a.check_generator(g);
    return ConcreteEngine(a, m).apply(to_letter(g), x);
}

inline FormalVector apply_lie(const AlgebraSpec& a, const ModuleSpec& m, const LieElement& e, const FormalVector& x)
{
    FormalVector out;
    for (const auto& [g, c] : e) out = fv_sum(out, apply_generator(a, m, g, x), c);
    return out;
}

// Applies g_1 ... g_r (degrees >= 1, total equal to -deg x) and reads the
// result off in V.
inline VectorInV apply_raising_word(const AlgebraSpec& a, const ModuleSpec& m, const std::vector<Generator>& word, const FormalVector& x)
{
    int total = 0;
    std::vector<Letter<std::vector<int>>> letters;
    for (const auto& g : word) {
        if (g.degree.i < 1) throw DegreeError("raising letters must have positive degree");
        a.check_generator(g);
        total += g.degree.i;
        letters.push_back(to_letter(g));
    }
    if (!x.empty()) {
        const auto [d, wt] = homogeneous_component(x, a.n());
        if (d + total != 0) throw DegreeError("raising word degree " + std::to_string(total) + " does not match vector degree " + std::to_string(d));
    }
    const FormalVector y = ConcreteEngine(a, m).apply_word(letters, x);
    VectorInV out;
    for (const auto& [w, c] : y) {
        if (!w.letters.empty()) throw ConsistencyError("raising word left lowering letters behind");
        v_add(out, VKey{w.base, w.base_arg}, c);
    }
    return out;
}

inline std::string to_string(const FormalVector& x)
{
    if (x.empty()) return "0";
    std::string s;
    for (const auto& [w, c] : x) {
        s += (s.empty() ? "" : " + ") + ("(" + c.to_string() + ")*");
        for (const auto& l : w.letters) s += to_string(Generator{{l.i, l.arg}, l.k}) + " ";
        s += "v" + std::to_string(w.base);
        if (!w.base_arg.empty()) {
            s += "(";
            for (std::size_t t = 0; t < w.base_arg.size(); ++t) s += (t ? "," : "") + std::to_string(w.base_arg[t]);
            s += ")";
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// Shapes and the symbolic reduction

// Letter degrees are stored as positive magnitudes; lowering letters have
// degree -degrees[t], raising letters +degrees[t].
struct Shape {
    std::vector<int> degrees;
    std::vector<int> families;

    std::size_t size() const { return degrees.size(); }
    int total() const
    {
        int s = 0;
        for (int d : degrees) s += d;
        return s;
    }

    auto operator<=>(const Shape&) const = default;
    bool operator==(const Shape&) const = default;
};

inline std::string to_string(const Shape& s, bool lowering)
{
    std::string out = "[";
    for (std::size_t t = 0; t < s.size(); ++t)
        out += (t ? " " : "") + std::to_string(lowering ? -s.degrees[t] : s.degrees[t]) + ":" + std::to_string(s.families[t]);
    return out + "]";
}

// Number of free lattice arguments of a lowering word of this shape: for a
// graded V every letter is free and the base absorbs the weight, for a finite
// V the last letter does.
inline std::size_t free_letters(const ModuleSpec& m, const Shape& lower)
{
    if (m.graded() || lower.size() == 0) return lower.size();
    return lower.size() - 1;
}

// The concrete lowering word of `lower` over v_j with total weight alpha and
// free arguments beta (free_letters * n integers).
inline PBWWord lowering_word(const AlgebraSpec& a, const ModuleSpec& m, const Shape& lower, int j, const std::vector<int>& alpha,
                             const std::vector<int>& beta)
{
    const std::size_t n = a.n(), f = free_letters(m, lower);
    if (beta.size() != f * n) throw DimensionError("lowering word needs " + std::to_string(f * n) + " lattice arguments");
    PBWWord w;
    std::vector<int> rest = alpha;
    for (std::size_t t = 0; t < lower.size(); ++t) {
        std::vector<int> arg(n);
        if (t < f) {
            for (std::size_t u = 0; u < n; ++u) arg[u] = beta[t * n + u];
        } else {
            arg = rest;
        }
        for (std::size_t u = 0; u < n; ++u) rest[u] -= arg[u];
        a.check_family(-lower.degrees[t], lower.families[t]);
        w.letters.push_back({-lower.degrees[t], lower.families[t], arg});
    }
    w.base = j;
    if (m.graded()) w.base_arg = rest;
    return w;
}

inline std::vector<Generator> raising_word(const AlgebraSpec& a, const Shape& raise, const std::vector<int>& gamma)
{
    const std::size_t n = a.n();
    if (gamma.size() != raise.size() * n) throw DimensionError("raising word needs one lattice argument per letter");
    std::vector<Generator> out;
    for (std::size_t t = 0; t < raise.size(); ++t) {
        std::vector<int> arg(gamma.begin() + static_cast<std::ptrdiff_t>(t * n), gamma.begin() + static_cast<std::ptrdiff_t>((t + 1) * n));
        out.push_back(Generator{{raise.degrees[t], arg}, raise.families[t]});
    }
    return out;
}

// h_l(beta, gamma): variables are the free lowering arguments (beta block)
// followed by the raising arguments (gamma block).
struct SymbolicImage {
    std::size_t beta_vars = 0;
    std::size_t gamma_vars = 0;
    std::map<int, ExpPoly> h;

    std::vector<std::size_t> gamma_subset() const
    {
        std::vector<std::size_t> s;
        for (std::size_t v = 0; v < gamma_vars; ++v) s.push_back(beta_vars + v);
        return s;
    }
};

class SymbolicReducer {
public:
    SymbolicReducer(const AlgebraSpec& a, const ModuleSpec& m) : a_(a), m_(m), cache_(std::make_shared<Cache>()) { m_.check_algebra(a_); }

    const AlgebraSpec& algebra() const { return a_; }
    const ModuleSpec& module() const { return m_; }

    SymbolicImage reduce(const Shape& lower, const Shape& raise, int j, const std::vector<int>& alpha) const
    {
        if (lower.total() != raise.total()) throw DegreeError("raising and lowering shapes have different total degree");
        if (alpha.size() != a_.n()) throw DimensionError("weight has wrong lattice rank");
        for (int d : lower.degrees)
            if (d < 1) throw DegreeError("shape degrees must be positive");
        for (int d : raise.degrees)
            if (d < 1) throw DegreeError("shape degrees must be positive");
        if (lower.total() > a_.depth()) throw DepthOverflowError("shape degree exceeds the depth bound");
        const auto key = std::make_tuple(lower, raise, j, alpha);
        {
            std::lock_guard<std::mutex> lock(cache_->mutex);
            auto it = cache_->images.find(key);
            if (it != cache_->images.end()) return it->second;
        }
        SymbolicImage img = compute(lower, raise, j, alpha);
        std::lock_guard<std::mutex> lock(cache_->mutex);
        return cache_->images.emplace(key, std::move(img)).first->second;
    }

    std::size_t cache_size() const
    {
        std::lock_guard<std::mutex> lock(cache_->mutex);
        return cache_->images.size();
    }

private:
    SymbolicImage compute(const Shape& lower, const Shape& raise, int j, const std::vector<int>& alpha) const
    {
        const std::size_t n = a_.n(), f = free_letters(m_, lower), r = raise.size();
        SymbolicImage img;
        img.beta_vars = f * n;
        img.gamma_vars = r * n;
        const std::size_t nv = img.beta_vars + img.gamma_vars;

        Word<AffineWeight> w;
        AffineWeight rest = AffineWeight::constant(nv, alpha);
        for (std::size_t t = 0; t < lower.size(); ++t) {
            const AffineWeight arg = t < f ? AffineWeight::block(nv, n, t * n) : rest;
            rest = rest - arg;
            a_.check_family(-lower.degrees[t], lower.families[t]);
            w.letters.push_back({-lower.degrees[t], lower.families[t], arg});
        }
        w.base = j;
        if (m_.graded()) w.base_arg = rest;
        else w.base_arg = AffineWeight{};

        std::vector<Letter<AffineWeight>> word;
        for (std::size_t t = 0; t < r; ++t) {
            a_.check_family(raise.degrees[t], raise.families[t]);
            word.push_back({raise.degrees[t], raise.families[t], AffineWeight::block(nv, n, img.beta_vars + t * n)});
        }

        const InducedEngine<SymbolicPolicy> engine(a_, m_, SymbolicPolicy{nv});
        typename InducedEngine<SymbolicPolicy>::Vec x;
        x.emplace(w, engine.policy().one());
        const auto y = engine.apply_word(word, x);
        for (const auto& [u, c] : y) {
            if (!u.letters.empty()) throw ConsistencyError("symbolic reduction left lowering letters behind");
            auto [it, fresh] = img.h.emplace(u.base, c);
            if (!fresh) it->second += c;
        }
        for (auto it = img.h.begin(); it != img.h.end();) it = it->second.is_zero() ? img.h.erase(it) : std::next(it);
        return img;
    }

    struct Cache {
        mutable std::mutex mutex;
        std::map<std::tuple<Shape, Shape, int, std::vector<int>>, SymbolicImage> images;
    };

    const AlgebraSpec& a_;
    const ModuleSpec& m_;
    std::shared_ptr<Cache> cache_;
};

inline SymbolicImage symbolic_reduce(const AlgebraSpec& a, const ModuleSpec& m, const Shape& lower, const Shape& raise, int j,
                                     const std::vector<int>& alpha)
{
    return SymbolicReducer(a, m).reduce(lower, raise, j, alpha);
}

} // namespace explie
