#pragma once

// Vir[M] for M = Z + Zp with p formal, and the modules with
//   d_a v_b = (b + lambda + a mu) v_{a+b},  a, b in Zp.
// An element m + kp of M is stored as (m, k); d_{m+kp} is the generator of
// degree m and lattice weight k.

#include <cstddef>
#include <string>
#include <vector>

#include "explie/algebra.hpp"
#include "explie/errors.hpp"
#include "explie/exppoly.hpp"
#include "explie/gmodule.hpp"
#include "explie/induce.hpp"
#include "explie/matrix.hpp"
#include "explie/quotient.hpp"

namespace explie {

struct MElem {
    int m = 0;
    int k = 0;

    auto operator<=>(const MElem&) const = default;
    bool operator==(const MElem&) const = default;

    Scalar value() const { return Scalar(m) + Scalar(k) * Scalar::p(); }
};

inline Generator vir_d(MElem x) { return Generator{{x.m, {x.k}}, 0}; }

inline Params vir_params(const Scalar& lambda, const Scalar& mu)
{
    return {{"lambda", lambda.to_string()}, {"mu", mu.to_string()}};
}

// 1 * 3 * ... * (2i+1)
inline mpz_class odd_double_factorial(int i)
{
    mpz_class acc(1);
    for (int t = 1; t <= i; ++t) acc *= 2 * t + 1;
    return acc;
}

// Words d_{-1+alpha_n p} ... d_{-1+alpha_1 p} v_{(a - sum alpha) p} with
// alpha_t in {0, ..., 2t}; alphas[r][t-1] holds alpha_t of entry r.
struct ReducedSpanSet {
    int level = 0;
    std::vector<std::vector<int>> alphas;

    std::size_t size() const { return alphas.size(); }

    static ReducedSpanSet build(int n)
    {
        if (n < 0) throw DegreeError("level must be nonnegative");
        ReducedSpanSet s;
        s.level = n;
        s.alphas = {{}};
        for (int t = 1; t <= n; ++t) {
            std::vector<std::vector<int>> next;
            for (const auto& pre : s.alphas)
                for (int x = 0; x <= 2 * t; ++x) {
                    auto q = pre;
                    q.push_back(x);
                    next.push_back(std::move(q));
                }
            s.alphas = std::move(next);
        }
        return s;
    }

    PBWWord word(std::size_t r, int a) const
    {
        PBWWord w;
        int rest = a;
        for (int t = level; t >= 1; --t) {
            const int x = alphas[r][static_cast<std::size_t>(t - 1)];
            w.letters.push_back({-1, 0, {x}});
            rest -= x;
        }
        w.base = 0;
        w.base_arg = {rest};
        return w;
    }
};

// Rank of the reduced spanning words against L_1 raising words whose
// arguments run over the independence grid of the symbolic family.
inline std::size_t vir_weight_dim(const AlgebraSpec& vir, const ModuleSpec& m, int i, int a)
{
    if (i < 0) throw DegreeError("level must be nonnegative");
    if (i == 0) return dim_v(m, {a});
    const Shape ones{std::vector<int>(static_cast<std::size_t>(i), 1), std::vector<int>(static_cast<std::size_t>(i), 0)};
    const SymbolicImage img = symbolic_reduce(vir, m, ones, ones, 0, {a});
    std::set<TermKey> sigs;
    for (const auto& [l, h] : img.h)
        for (const auto& part : expand_in_subset(h, img.gamma_subset())) sigs.insert(part.signature);
    if (sigs.empty()) return 0;
    const auto gammas = independence_grid({sigs.begin(), sigs.end()});

    const ReducedSpanSet rows = ReducedSpanSet::build(i);
    ExactMatrix mat(rows.size(), gammas.size() * m.dim());
    const ConcreteEngine engine(vir, m);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const FormalVector x{{rows.word(r, a), Scalar(1)}};
        for (std::size_t c = 0; c < gammas.size(); ++c) {
            std::vector<Letter<std::vector<int>>> word;
            for (int g : gammas[c]) word.push_back({1, 0, {g}});
            for (const auto& [w, coef] : engine.apply_word(word, x)) mat(r, c * m.dim() + static_cast<std::size_t>(w.base)) = coef;
        }
    }
    return mat_rank(mat);
}

inline std::size_t vir_weight_dim(int i, int a, const Scalar& lambda, const Scalar& mu)
{
    const AlgebraSpec vir = generalized_virasoro();
    const ModuleSpec m = registry_module("vir-intermediate", vir, vir_params(lambda, mu));
    return vir_weight_dim(vir, m, i, a);
}

struct BoundRow {
    int i = 0;
    std::size_t dim = 0;
    mpz_class bound;
    bool pass = false;
};

inline std::vector<BoundRow> vir_bound_report(const AlgebraSpec& vir, const ModuleSpec& m, int i_max, int a = 0, int cap = 3)
{
    if (i_max < 0) throw ParameterError("imax must be nonnegative");
    if (i_max > cap) throw ParameterError("imax exceeds the configured cap " + std::to_string(cap));
    std::vector<BoundRow> out;
    for (int i = 0; i <= i_max; ++i) {
        BoundRow row{i, vir_weight_dim(vir, m, i, a), odd_double_factorial(i), false};
        row.pass = mpz_class(static_cast<unsigned long>(row.dim)) <= row.bound;
        out.push_back(row);
    }
    return out;
}

inline std::vector<BoundRow> vir_bound_report(int i_max, const Scalar& lambda, const Scalar& mu, int a = 0, int cap = 3)
{
    const AlgebraSpec vir = generalized_virasoro();
    return vir_bound_report(vir, registry_module("vir-intermediate", vir, vir_params(lambda, mu)), i_max, a, cap);
}

// b over the nodes 0, p, ..., (2n+2)p with
//   beta'^k + sum_t (t p)^k b_t = 0,  0 <= k <= 2n+2.
inline std::vector<Scalar> vir_moment_nullvector(MElem beta_prime, int n)
{
    if (beta_prime.m != 0) throw ParameterError("beta' must lie in Zp");
    if (n < 0) throw DegreeError("level must be nonnegative");
    const std::size_t size = static_cast<std::size_t>(2 * n + 3);
    const Scalar p = Scalar::p();
    ExactMatrix sys(size, size + 1);
    for (std::size_t k = 0; k < size; ++k) {
        sys(k, 0) = beta_prime.value().pow(static_cast<long>(k));
        for (std::size_t t = 0; t < size; ++t) sys(k, t + 1) = (Scalar(static_cast<long>(t)) * p).pow(static_cast<long>(k));
    }
    const auto ns = mat_nullspace(sys);
    if (ns.size() != 1 || ns[0][0].is_zero()) throw ConsistencyError("moment system is not uniquely solvable");
    std::vector<Scalar> b;
    for (std::size_t t = 0; t < size; ++t) b.push_back(ns[0][t + 1] / ns[0][0]);
    return b;
}

// sum_t b_t d_{-1+x_t p} d_{-1+prefix_n p} ... d_{-1+prefix_1 p} v_{(a - sum prefix - x_t) p}
inline FormalVector vir_moment_combination(const std::vector<int>& nodes, const std::vector<Scalar>& b, const std::vector<int>& prefix, int a)
{
    if (nodes.size() != b.size()) throw DimensionError("one coefficient per node");
    int rest = a;
    std::vector<Letter<std::vector<int>>> tail;
    for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) {
        tail.push_back({-1, 0, {*it}});
        rest -= *it;
    }
    FormalVector x;
    for (std::size_t t = 0; t < nodes.size(); ++t) {
        PBWWord w{{{-1, 0, {nodes[t]}}}, 0, {rest - nodes[t]}};
        w.letters.insert(w.letters.end(), tail.begin(), tail.end());
        ConcreteEngine::accumulate(x, w, b[t]);
    }
    return x;
}

// rows k = 0..degree of (x_t p)^k
inline ExactMatrix vir_moment_matrix(const std::vector<int>& nodes, int degree)
{
    ExactMatrix mom(static_cast<std::size_t>(degree + 1), nodes.size());
    for (std::size_t k = 0; k < mom.rows(); ++k)
        for (std::size_t t = 0; t < nodes.size(); ++t)
            mom(k, t) = (Scalar(nodes[t]) * Scalar::p()).pow(static_cast<long>(k));
    return mom;
}

// sum_t b_t d_{x_t p} . (d_{-1+prefix_n p} ... d_{-1+prefix_1 p} v_{(a - sum prefix - x_t) p})
inline FormalVector vir_shift_combination(const AlgebraSpec& vir, const ModuleSpec& m, const std::vector<int>& nodes,
                                          const std::vector<Scalar>& b, const std::vector<int>& prefix, int a)
{
    if (nodes.size() != b.size()) throw DimensionError("one coefficient per node");
    int rest = a;
    std::vector<Letter<std::vector<int>>> word;
    for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) {
        word.push_back({-1, 0, {*it}});
        rest -= *it;
    }
    FormalVector x;
    for (std::size_t t = 0; t < nodes.size(); ++t) {
        const FormalVector w{{PBWWord{word, 0, {rest - nodes[t]}}, Scalar(1)}};
        x = fv_sum(x, apply_generator(vir, m, vir_d({0, nodes[t]}), w), b[t]);
    }
    return x;
}

// d_{-1+beta'}(prefix word) minus its rewriting over P_{n+1}, n = |prefix|.
inline FormalVector vir_rewrite_vector(MElem beta_prime, const std::vector<int>& prefix, int a)
{
    const int n = static_cast<int>(prefix.size());
    const auto b = vir_moment_nullvector(beta_prime, n);
    std::vector<int> nodes{beta_prime.k};
    std::vector<Scalar> coef{Scalar(1)};
    for (std::size_t t = 0; t < b.size(); ++t) {
        nodes.push_back(static_cast<int>(t));
        coef.push_back(b[t]);
    }
    return vir_moment_combination(nodes, coef, prefix, a);
}

struct AIndependenceTable {
    int i = 0;
    std::vector<std::pair<int, std::size_t>> dims;  // a (as multiple of p) -> dim
    bool equal = false;
};

inline AIndependenceTable a_independence_table(const AlgebraSpec& vir, const ModuleSpec& m, int i, const std::vector<int>& a_list)
{
    if (i < 1) throw DegreeError("a-independence table needs i >= 1");
    if (a_list.empty()) throw ParameterError("a list must be nonempty");
    AIndependenceTable t;
    t.i = i;
    for (int a : a_list) t.dims.emplace_back(a, vir_weight_dim(vir, m, i, a));
    t.equal = true;
    // -i + kp never vanishes for i >= 1, so every listed a is compared
    for (const auto& [a, d] : t.dims) t.equal = t.equal && d == t.dims.front().second;
    return t;
}

inline AIndependenceTable a_independence_table(int i, const std::vector<int>& a_list, const Scalar& lambda, const Scalar& mu)
{
    const AlgebraSpec vir = generalized_virasoro();
    return a_independence_table(vir, registry_module("vir-intermediate", vir, vir_params(lambda, mu)), i, a_list);
}

} // namespace explie
