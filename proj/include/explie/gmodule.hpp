#pragma once

// Exp-polynomial modules over the degree-zero part G^{(0)}.
//
//   graded : g_k(alpha) v_j(beta) = sum_s h^s_{k,j}(alpha, beta) v_s(alpha + beta)
//   finite : g_k(alpha) v_j       = sum_s h^s_{k,j}(alpha) v_s

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "explie/algebra.hpp"
#include "explie/errors.hpp"
#include "explie/exppoly.hpp"
#include "explie/scalar.hpp"
#include "explie/text.hpp"

namespace explie {

enum class ModuleKind { graded, finite };

struct ActionTerm {
    int s = 0;
    ExpPoly h;
};

using ActionFn = std::function<std::vector<ActionTerm>(int k, int j)>;

class ModuleSpec {
public:
    ModuleSpec(std::string name, const AlgebraSpec& algebra, ModuleKind kind, std::vector<std::string> basis, ActionFn action)
        : name_(std::move(name)), algebra_name_(algebra.name()), n_(algebra.n()), k0_(algebra.family_count(0)), kind_(kind),
          basis_(std::move(basis)), action_(std::move(action)), cache_(std::make_shared<Cache>())
    {
        if (basis_.empty()) throw ParameterError("module basis must be nonempty");
    }

    const std::string& name() const { return name_; }
    const std::string& algebra_name() const { return algebra_name_; }
    std::size_t n() const { return n_; }
    ModuleKind kind() const { return kind_; }
    bool graded() const { return kind_ == ModuleKind::graded; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<std::string>& basis() const { return basis_; }
    std::size_t action_arity() const { return graded() ? 2 * n_ : n_; }
    const ActionFn& action_fn() const { return action_; }

    const std::vector<ActionTerm>& action(int k, int j) const
    {
        if (k < 0 || static_cast<std::size_t>(k) >= k0_) throw UnknownNameError("family " + std::to_string(k) + " not in K_0");
        if (j < 0 || static_cast<std::size_t>(j) >= dim()) throw UnknownNameError("basis index " + std::to_string(j) + " out of range");
        const auto key = std::make_pair(k, j);
        {
            std::lock_guard<std::mutex> lock(cache_->mutex);
            auto it = cache_->action.find(key);
            if (it != cache_->action.end()) return it->second;
        }
        std::map<int, ExpPoly> merged;
        for (auto& t : action_(k, j)) {
            if (t.h.arity() != action_arity()) throw ArityError("module action function has the wrong arity");
            if (t.s < 0 || static_cast<std::size_t>(t.s) >= dim()) throw UnknownNameError("module action targets an unknown basis vector");
            auto [it, fresh] = merged.emplace(t.s, t.h);
            if (!fresh) it->second += t.h;
        }
        std::vector<ActionTerm> clean;
        for (auto& [s, h] : merged)
            if (!h.is_zero()) clean.push_back({s, std::move(h)});
        std::lock_guard<std::mutex> lock(cache_->mutex);
        return cache_->action.emplace(key, std::move(clean)).first->second;
    }

    void check_algebra(const AlgebraSpec& a) const
    {
        if (a.n() != n_ || a.family_count(0) != k0_)
            throw ParameterError("module `" + name_ + "` does not match algebra `" + a.name() + "`");
    }

private:
    struct Cache {
        std::mutex mutex;
        std::map<std::pair<int, int>, std::vector<ActionTerm>> action;
    };

    std::string name_;
    std::string algebra_name_;
    std::size_t n_;
    std::size_t k0_;
    ModuleKind kind_;
    std::vector<std::string> basis_;
    ActionFn action_;
    std::shared_ptr<Cache> cache_;
};

// v_j(beta); beta is empty for the finite kind.
struct VKey {
    int j = 0;
    std::vector<int> beta;

    auto operator<=>(const VKey&) const = default;
    bool operator==(const VKey&) const = default;
};

using VectorInV = std::map<VKey, Scalar>;

inline void v_add(VectorInV& acc, const VKey& key, const Scalar& c)
{
    if (c.is_zero()) return;
    auto [it, fresh] = acc.emplace(key, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) acc.erase(it);
    }
}

inline VectorInV v_sum(VectorInV a, const VectorInV& b, const Scalar& scale = Scalar(1))
{
    for (const auto& [k, c] : b) v_add(a, k, c * scale);
    return a;
}

inline std::string to_string(const VectorInV& v)
{
    if (v.empty()) return "0";
    std::string s;
    for (const auto& [k, c] : v) {
        s += (s.empty() ? "" : " + ") + ("(" + c.to_string() + ")*v" + std::to_string(k.j));
        if (!k.beta.empty()) {
            s += "(";
            for (std::size_t t = 0; t < k.beta.size(); ++t) s += (t ? "," : "") + std::to_string(k.beta[t]);
            s += ")";
        }
    }
    return s;
}

inline VectorInV act(const ModuleSpec& m, const Generator& g, const VectorInV& v)
{
    if (g.degree.i != 0) throw DegreeError("only degree-0 generators act on V");
    if (g.degree.alpha.size() != m.n()) throw DimensionError("generator weight has wrong lattice rank");
    VectorInV out;
    for (const auto& [key, c] : v) {
        if (m.graded() && key.beta.size() != m.n()) throw DimensionError("graded module vector needs a lattice weight");
        if (!m.graded() && !key.beta.empty()) throw DimensionError("finite module vector carries no lattice weight");
        const std::vector<int> pt = m.graded() ? concat_weights(g.degree.alpha, key.beta) : g.degree.alpha;
        const std::vector<int> target = m.graded() ? add_weights(g.degree.alpha, key.beta) : std::vector<int>{};
        for (const auto& t : m.action(g.family, key.j)) v_add(out, VKey{t.s, target}, c * t.h.evaluate(pt));
    }
    return out;
}

inline VectorInV act(const ModuleSpec& m, const LieElement& x, const VectorInV& v)
{
    VectorInV out;
    for (const auto& [g, c] : x) out = v_sum(out, act(m, g, v), c);
    return out;
}

struct CompatibilityViolation {
    Generator g, h;
    VKey v;
    std::string residual;
};

struct CompatibilityReport {
    std::size_t checked = 0;
    std::vector<CompatibilityViolation> violations;
    bool pass() const { return violations.empty(); }
};

// g.(h.v) - h.(g.v) = [g,h].v on sampled degree-0 pairs and basis vectors.
inline CompatibilityReport check_compatibility(const AlgebraSpec& a, const ModuleSpec& m, const SampleSpec& spec)
{
    m.check_algebra(a);
    std::mt19937_64 rng(spec.seed);
    std::uniform_int_distribution<int> coord(-spec.box, spec.box);
    std::uniform_int_distribution<int> fam(0, static_cast<int>(a.family_count(0)) - 1);
    std::uniform_int_distribution<int> basis(0, static_cast<int>(m.dim()) - 1);
    auto lattice = [&] {
        std::vector<int> x(a.n());
        for (auto& c : x) c = coord(rng);
        return x;
    };
    CompatibilityReport rep;
    for (std::size_t t = 0; t < spec.samples; ++t) {
        const Generator g{{0, lattice()}, fam(rng)};
        const Generator h{{0, lattice()}, fam(rng)};
        const VKey key{basis(rng), m.graded() ? lattice() : std::vector<int>{}};
        const VectorInV v{{key, Scalar(1)}};
        const VectorInV lhs = v_sum(act(m, g, act(m, h, v)), act(m, h, act(m, g, v)), Scalar(-1));
        const VectorInV rhs = act(m, bracket(a, g, h), v);
        const VectorInV diff = v_sum(lhs, rhs, Scalar(-1));
        ++rep.checked;
        if (!diff.empty()) rep.violations.push_back({g, h, key, to_string(diff)});
    }
    return rep;
}

// Adds delta to h^s_{k,j}; used to build failing test doubles.
inline ModuleSpec perturb_action(const AlgebraSpec& a, const ModuleSpec& m, int k, int j, int s, const ExpPoly& delta)
{
    const ActionFn base = m.action_fn();
    ActionFn fn = [=](int k2, int j2) {
        auto terms = base(k2, j2);
        if (k2 == k && j2 == j) terms.push_back({s, delta});
        return terms;
    };
    return ModuleSpec(m.name() + "+perturbed", a, m.kind(), m.basis(), fn);
}

// ---------------------------------------------------------------------------
// Registry

namespace detail {

// Basis of V_1 (x) ... (x) V_k as mixed-radix tuples.
inline std::vector<std::vector<int>> tensor_basis(std::size_t factor_dim, std::size_t k)
{
    std::vector<std::vector<int>> out{{}};
    for (std::size_t f = 0; f < k; ++f) {
        std::vector<std::vector<int>> next;
        for (const auto& t : out)
            for (std::size_t d = 0; d < factor_dim; ++d) {
                auto u = t;
                u.push_back(static_cast<int>(d));
                next.push_back(u);
            }
        out = std::move(next);
    }
    return out;
}

// Natural representation of sl2 on C^2 (basis u0, u1): e u1 = u0, f u0 = u1, h = diag(1,-1).
inline std::vector<std::pair<int, long>> sl2_natural(int g, int d)
{
    enum { E = 0, F = 1, H = 2 };
    if (g == E) return d == 1 ? std::vector<std::pair<int, long>>{{0, 1}} : std::vector<std::pair<int, long>>{};
    if (g == F) return d == 0 ? std::vector<std::pair<int, long>>{{1, 1}} : std::vector<std::pair<int, long>>{};
    return {{d, d == 0 ? 1 : -1}};
}

// q factors: `2` or `2;3` (one entry per tensor factor) or `2,3;5,7` (per coordinate).
inline std::vector<std::vector<mpq_class>> parse_q_factors(const std::string& text, std::size_t n)
{
    std::vector<std::vector<mpq_class>> out;
    std::size_t pos = 0;
    for (;;) {
        const std::size_t semi = text.find(';', pos);
        auto q = parse_rational_list("q", text.substr(pos, semi == std::string::npos ? std::string::npos : semi - pos));
        if (q.size() == 1 && n > 1) q.assign(n, q[0]);
        if (q.size() != n) throw ParameterError("each q factor needs one value per lattice coordinate");
        for (const auto& x : q)
            if (sgn(x) == 0) throw InvalidBaseError("module parameter q must be nonzero");
        out.push_back(q);
        if (semi == std::string::npos) break;
        pos = semi + 1;
    }
    return out;
}

// The loop/tensor modules of toroidal algebras: g(alpha) acts on tensor
// factor p with weight q_p^alpha.
inline ModuleSpec toroidal_tensor_module(const std::string& name, const AlgebraSpec& a, ModuleKind kind, const Params& params)
{
    const bool sl2 = a.name() == "toroidal-sl2";
    if (!sl2 && a.name() != "toroidal-abelian")
        throw ParameterError("module `" + name + "` needs a toroidal algebra, got `" + a.name() + "`");
    const std::size_t n = a.n();
    auto qs = parse_q_factors(param_or(params, "q", "2"), n);
    const int k_param = int_param(params, "k", static_cast<int>(qs.size()));
    if (k_param < 1 || k_param > 4) throw ParameterError("number of tensor factors k must be between 1 and 4");
    if (qs.size() == 1 && k_param > 1) qs.assign(static_cast<std::size_t>(k_param), qs[0]);
    if (qs.size() != static_cast<std::size_t>(k_param)) throw ParameterError("need one q factor per tensor factor");
    const std::size_t k = qs.size();
    const Scalar c = parse_scalar(param_or(params, "c", "1"));  // abelian generators act by c
    const std::size_t fdim = sl2 ? 2 : 1;
    const auto tuples = tensor_basis(fdim, k);
    std::vector<std::string> names;
    for (const auto& t : tuples) {
        std::string s = "u";
        for (int d : t) s += std::to_string(d);
        names.push_back(s);
    }
    const std::size_t arity = kind == ModuleKind::graded ? 2 * n : n;
    ActionFn fn = [=](int g, int j) {
        std::vector<ActionTerm> out;
        const auto& tj = tuples[static_cast<std::size_t>(j)];
        for (std::size_t p = 0; p < k; ++p) {
            ExpPoly weight = ExpPoly::constant(arity, Scalar(1));
            for (std::size_t u = 0; u < n; ++u) weight = weight * ExpPoly::exponential(arity, u, qs[p][u]);
            const auto images = sl2 ? sl2_natural(g, tj[p]) : std::vector<std::pair<int, long>>{{0, 1}};
            for (const auto& [d, coeff] : images) {
                auto ts = tj;
                ts[p] = d;
                int s = 0;
                for (int x : ts) s = s * static_cast<int>(fdim) + x;
                out.push_back({s, weight.scaled(sl2 ? Scalar(coeff) : c)});
            }
        }
        return out;
    };
    return ModuleSpec(name, a, kind, names, fn);
}

inline void require_algebra(const std::string& module, const AlgebraSpec& a, const std::string& expected)
{
    if (a.name() != expected) throw ParameterError("module `" + module + "` needs algebra `" + expected + "`, got `" + a.name() + "`");
}

} // namespace detail

inline std::vector<std::string> registry_module_names()
{
    return {"loop", "loop-q2", "qt-fd", "qt-graded", "tensor-fd", "vir-intermediate", "vl-shift"};
}

inline ModuleSpec registry_module(const std::string& name, const AlgebraSpec& a, const Params& params = {})
{
    const std::size_t n = a.n();
    if (name == "loop" || name == "loop-q2") {
        Params p = params;
        if (name == "loop-q2") p.emplace("q", "2");
        return detail::toroidal_tensor_module(name, a, ModuleKind::graded, p);
    }
    if (name == "tensor-fd") return detail::toroidal_tensor_module(name, a, ModuleKind::finite, params);
    if (name == "vl-shift") {
        // L_{0,k} v_j = f(k) v_{j+k}
        detail::require_algebra(name, a, "virasoro-like");
        const ExpPoly f = parse_exppoly(detail::param_or(params, "f", "2^n1"), 1);
        const ExpPoly h = substitute_affine(f, {{1, 0}}, {0});
        return ModuleSpec(name, a, ModuleKind::graded, {"v"}, [h](int, int) { return std::vector<ActionTerm>{{0, h}}; });
    }
    if (name == "qt-graded") {
        // t^alpha . t^beta = f(alpha, beta) t^{alpha+beta}
        detail::require_algebra(name, a, "quantum-torus");
        const ExpPoly h = parse_exppoly(detail::param_or(params, "f", "2^n1"), 2 * n);
        return ModuleSpec(name, a, ModuleKind::graded, {"t"}, [h](int, int) { return std::vector<ActionTerm>{{0, h}}; });
    }
    if (name == "qt-fd") {
        // t^alpha . 1 = f(alpha) 1
        detail::require_algebra(name, a, "quantum-torus");
        const ExpPoly h = parse_exppoly(detail::param_or(params, "f", "n1"), n);
        return ModuleSpec(name, a, ModuleKind::finite, {"1"}, [h](int, int) { return std::vector<ActionTerm>{{0, h}}; });
    }
    if (name == "vir-intermediate") {
        // d_{alpha p} v_{beta p} = (beta p + lambda + alpha p mu) v_{(alpha+beta) p}
        detail::require_algebra(name, a, "generalized-virasoro");
        const Scalar lambda = parse_scalar(detail::param_or(params, "lambda", "1/2"));
        const Scalar mu = parse_scalar(detail::param_or(params, "mu", "1/3"));
        const Scalar p = Scalar::p();
        const ExpPoly h = ExpPoly::constant(2, lambda) + ExpPoly::variable(2, 1).scaled(p) + ExpPoly::variable(2, 0).scaled(p * mu);
        return ModuleSpec(name, a, ModuleKind::graded, {"v"}, [h](int, int) { return std::vector<ActionTerm>{{0, h}}; });
    }
    throw UnknownNameError("unknown module `" + name + "`");
}

// The module each registry algebra is paired with by default.
inline std::string default_module_for(const std::string& algebra)
{
    if (algebra == "toroidal-sl2" || algebra == "toroidal-abelian") return "loop";
    if (algebra == "virasoro-like") return "vl-shift";
    if (algebra == "quantum-torus") return "qt-graded";
    if (algebra == "generalized-virasoro") return "vir-intermediate";
    return "";
}

// ---------------------------------------------------------------------------
// Definition files
//
//   kind graded
//   basis u0 u1
//   act e u1 -> u0 : 2^a1
//
// Expressions use a1..an (alpha) and, for the graded kind, b1..bn (beta).

inline ModuleSpec parse_module_definition(const std::string& text, const AlgebraSpec& a, const std::string& name = "file")
{
    ModuleKind kind = ModuleKind::graded;
    bool kind_seen = false;
    std::vector<std::string> basis;
    struct Entry {
        std::string k, j, s;
        std::string expr;
    };
    std::vector<Entry> entries;
    std::size_t pos = 0, lineno = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        const std::string raw = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
        pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++lineno;
        const std::string line = detail::strip_comment(raw);
        const auto colon = line.find(':');
        const auto words = detail::split_words(colon == std::string::npos ? line : line.substr(0, colon));
        if (words.empty()) continue;
        const std::string where = " (line " + std::to_string(lineno) + ")";
        if (words[0] == "kind" && words.size() == 2) {
            if (words[1] == "graded") kind = ModuleKind::graded;
            else if (words[1] == "finite") kind = ModuleKind::finite;
            else throw ParseError("kind must be graded or finite" + where);
            kind_seen = true;
        } else if (words[0] == "basis" && words.size() >= 2) {
            basis.assign(words.begin() + 1, words.end());
        } else if (words[0] == "act" && words.size() == 5 && words[3] == "->" && colon != std::string::npos) {
            entries.push_back({words[1], words[2], words[4], line.substr(colon + 1)});
        } else {
            throw ParseError("unrecognized module definition line `" + words[0] + " ...`" + where);
        }
    }
    if (!kind_seen) throw ParseError("module definition lacks `kind`");
    if (basis.empty()) throw ParseError("module definition lacks `basis`");

    std::vector<std::string> vars;
    for (std::size_t t = 1; t <= a.n(); ++t) vars.push_back("a" + std::to_string(t));
    if (kind == ModuleKind::graded)
        for (std::size_t t = 1; t <= a.n(); ++t) vars.push_back("b" + std::to_string(t));
    const auto& k0 = a.families(0);
    auto find = [](const std::vector<std::string>& names, const std::string& x) -> int {
        for (std::size_t t = 0; t < names.size(); ++t)
            if (names[t] == x) return static_cast<int>(t);
        throw UnknownNameError("unknown name `" + x + "`");
    };
    std::map<std::pair<int, int>, std::vector<ActionTerm>> table;
    for (const auto& e : entries)
        table[{find(k0, e.k), find(basis, e.j)}].push_back({find(basis, e.s), parse_exppoly(e.expr, vars)});
    return ModuleSpec(name, a, kind, basis, [table](int k, int j) {
        auto it = table.find({k, j});
        return it == table.end() ? std::vector<ActionTerm>{} : it->second;
    });
}

} // namespace explie
