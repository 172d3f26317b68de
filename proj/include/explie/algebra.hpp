#pragma once

// Extragraded exp-polynomial Lie algebras.
//
// A generator g_k^{(i)}(alpha) carries a Z-degree i, a lattice weight
// alpha in Z^n and a family index k in K_i. Brackets are
//   [g_k^{(i)}(alpha), g_m^{(j)}(beta)] = sum_s f^s_{k,m,i,j}(alpha, beta) g_s^{(i+j)}(alpha + beta)
// with f an ExpPoly in 2n variables (alpha first, then beta).

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "explie/errors.hpp"
#include "explie/exppoly.hpp"
#include "explie/scalar.hpp"
#include "explie/text.hpp"

namespace explie {

struct DegreeIndex {
    int i = 0;
    std::vector<int> alpha;

    auto operator<=>(const DegreeIndex&) const = default;
    bool operator==(const DegreeIndex&) const = default;
};

struct Generator {
    DegreeIndex degree;
    int family = 0;

    auto operator<=>(const Generator&) const = default;
    bool operator==(const Generator&) const = default;
};

struct StructureTerm {
    int s = 0;
    ExpPoly f;
};

using FamilyFn = std::function<std::vector<std::string>(int)>;
using StructureFn = std::function<std::vector<StructureTerm>(int i, int k, int j, int m)>;

inline std::vector<int> add_weights(const std::vector<int>& a, const std::vector<int>& b)
{
    if (a.size() != b.size()) throw DimensionError("lattice weights of different rank");
    std::vector<int> c = a;
    for (std::size_t t = 0; t < c.size(); ++t) c[t] += b[t];
    return c;
}

class AlgebraSpec {
public:
    AlgebraSpec(std::string name, std::size_t n, FamilyFn families, StructureFn structure, int depth = 32)
        : name_(std::move(name)), n_(n), depth_(depth), families_(std::move(families)), structure_(std::move(structure)),
          cache_(std::make_shared<Cache>())
    {
        if (depth_ < 1) throw ParameterError("algebra depth bound must be at least 1");
    }

    const std::string& name() const { return name_; }
    std::size_t n() const { return n_; }
    int depth() const { return depth_; }

    AlgebraSpec with_depth(int depth) const
    {
        return AlgebraSpec(name_, n_, families_, structure_, depth);
    }

    // K_i; |i| beyond the depth bound cannot be enumerated.
    const std::vector<std::string>& families(int i) const
    {
        if (i > depth_ || i < -depth_)
            throw DepthOverflowError("degree " + std::to_string(i) + " exceeds depth bound " + std::to_string(depth_));
        std::lock_guard<std::mutex> lock(cache_->mutex);
        auto it = cache_->families.find(i);
        if (it == cache_->families.end()) it = cache_->families.emplace(i, families_(i)).first;
        return it->second;
    }

    std::size_t family_count(int i) const { return families(i).size(); }

    const std::vector<StructureTerm>& structure(int i, int k, int j, int m) const
    {
        check_family(i, k);
        check_family(j, m);
        const std::size_t target = family_count(i + j);
        const auto key = std::make_tuple(i, k, j, m);
        {
            std::lock_guard<std::mutex> lock(cache_->mutex);
            auto it = cache_->structure.find(key);
            if (it != cache_->structure.end()) return it->second;
        }
        std::vector<StructureTerm> raw = structure_(i, k, j, m);
        std::map<int, ExpPoly> merged;
        for (auto& t : raw) {
            if (t.f.arity() != 2 * n_) throw ArityError("structure function must have arity 2n");
            if (t.s < 0 || static_cast<std::size_t>(t.s) >= target)
                throw UnknownNameError("structure function targets a family outside K_" + std::to_string(i + j));
            auto [it, fresh] = merged.emplace(t.s, t.f);
            if (!fresh) it->second += t.f;
        }
        std::vector<StructureTerm> clean;
        for (auto& [s, f] : merged)
            if (!f.is_zero()) clean.push_back({s, std::move(f)});
        std::lock_guard<std::mutex> lock(cache_->mutex);
        return cache_->structure.emplace(key, std::move(clean)).first->second;
    }

    void check_family(int i, int k) const
    {
        if (k < 0 || static_cast<std::size_t>(k) >= family_count(i))
            throw UnknownNameError("family " + std::to_string(k) + " not in K_" + std::to_string(i));
    }

    void check_generator(const Generator& g) const
    {
        if (g.degree.alpha.size() != n_) throw DimensionError("generator weight has wrong lattice rank");
        check_family(g.degree.i, g.family);
    }

    const FamilyFn& family_fn() const { return families_; }
    const StructureFn& structure_fn() const { return structure_; }

private:
    struct Cache {
        std::mutex mutex;
        std::map<int, std::vector<std::string>> families;
        std::map<std::tuple<int, int, int, int>, std::vector<StructureTerm>> structure;
    };

    std::string name_;
    std::size_t n_;
    int depth_;
    FamilyFn families_;
    StructureFn structure_;
    std::shared_ptr<Cache> cache_;
};

using LieElement = std::map<Generator, Scalar>;

inline void lie_add(LieElement& acc, const Generator& g, const Scalar& c)
{
    if (c.is_zero()) return;
    auto [it, fresh] = acc.emplace(g, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) acc.erase(it);
    }
}

inline std::vector<int> concat_weights(const std::vector<int>& a, const std::vector<int>& b)
{
    std::vector<int> x = a;
    x.insert(x.end(), b.begin(), b.end());
    return x;
}

inline LieElement bracket(const AlgebraSpec& a, const Generator& x, const Generator& y)
{
    a.check_generator(x);
    a.check_generator(y);
    LieElement out;
    const DegreeIndex d{x.degree.i + y.degree.i, add_weights(x.degree.alpha, y.degree.alpha)};
    const std::vector<int> pt = concat_weights(x.degree.alpha, y.degree.alpha);
    for (const auto& t : a.structure(x.degree.i, x.family, y.degree.i, y.family))
        lie_add(out, Generator{d, t.s}, t.f.evaluate(pt));
    return out;
}

inline LieElement bracket(const AlgebraSpec& a, const LieElement& x, const LieElement& y)
{
    LieElement out;
    for (const auto& [gx, cx] : x)
        for (const auto& [gy, cy] : y)
            for (const auto& [g, c] : bracket(a, gx, gy)) lie_add(out, g, cx * cy * c);
    return out;
}

inline LieElement lie_single(const Generator& g, const Scalar& c = Scalar(1))
{
    LieElement e;
    lie_add(e, g, c);
    return e;
}

inline LieElement lie_sum(LieElement a, const LieElement& b, const Scalar& scale = Scalar(1))
{
    for (const auto& [g, c] : b) lie_add(a, g, c * scale);
    return a;
}

inline std::string to_string(const Generator& g)
{
    std::string s = std::to_string(g.family) + "@(" + std::to_string(g.degree.i) + ";";
    for (std::size_t t = 0; t < g.degree.alpha.size(); ++t) s += (t ? "," : "") + std::to_string(g.degree.alpha[t]);
    return s + ")";
}

inline std::string to_string(const LieElement& e)
{
    if (e.empty()) return "0";
    std::string s;
    for (const auto& [g, c] : e) s += (s.empty() ? "" : " + ") + ("(" + c.to_string() + ")*" + to_string(g));
    return s;
}

// ---------------------------------------------------------------------------
// Axiom checks

struct SampleSpec {
    int max_degree = 3;  // |i| <= D
    int box = 3;         // |alpha_j| <= B
    std::size_t samples = 200;
    std::uint64_t seed = 1;
};

struct AxiomViolation {
    std::string kind;  // "antisymmetry" or "jacobi"
    std::vector<Generator> witness;
    std::string residual;
};

struct AxiomReport {
    std::size_t pairs_checked = 0;
    std::size_t triples_checked = 0;
    std::vector<AxiomViolation> violations;
    bool pass() const { return violations.empty(); }
};

namespace detail {

inline Generator random_generator(const AlgebraSpec& a, std::mt19937_64& rng, int max_degree, int box)
{
    std::uniform_int_distribution<int> deg(-max_degree, max_degree), coord(-box, box);
    for (;;) {
        const int i = deg(rng);
        const std::size_t count = a.family_count(i);
        if (count == 0) continue;
        std::uniform_int_distribution<int> fam(0, static_cast<int>(count) - 1);
        std::vector<int> alpha(a.n());
        for (auto& x : alpha) x = coord(rng);
        return Generator{{i, alpha}, fam(rng)};
    }
}

} // namespace detail

inline AxiomReport check_axioms(const AlgebraSpec& a, const SampleSpec& spec)
{
    std::mt19937_64 rng(spec.seed);
    AxiomReport rep;
    for (std::size_t t = 0; t < spec.samples; ++t) {
        const Generator x = detail::random_generator(a, rng, spec.max_degree, spec.box);
        const Generator y = detail::random_generator(a, rng, spec.max_degree, spec.box);
        const Generator z = detail::random_generator(a, rng, spec.max_degree, spec.box);

        for (const auto& [u, v] : {std::pair{x, y}, std::pair{y, z}, std::pair{x, x}}) {
            const LieElement s = lie_sum(bracket(a, u, v), bracket(a, v, u));
            ++rep.pairs_checked;
            if (!s.empty()) rep.violations.push_back({"antisymmetry", {u, v}, to_string(s)});
        }

        const LieElement lx = lie_single(x), ly = lie_single(y), lz = lie_single(z);
        LieElement j = bracket(a, bracket(a, lx, ly), lz);
        j = lie_sum(j, bracket(a, bracket(a, ly, lz), lx));
        j = lie_sum(j, bracket(a, bracket(a, lz, lx), ly));
        ++rep.triples_checked;
        if (!j.empty()) rep.violations.push_back({"jacobi", {x, y, z}, to_string(j)});
    }
    return rep;
}

// Adds delta(alpha, beta) to f^s_{k,m,i,j} and -delta(beta, alpha) to the
// reversed entry, keeping antisymmetry intact.
inline AlgebraSpec perturb_structure(const AlgebraSpec& a, int i, int k, int j, int m, int s, const ExpPoly& delta)
{
    const std::size_t n = a.n();
    IntMatrix swap(2 * n, std::vector<int>(2 * n, 0));
    for (std::size_t t = 0; t < n; ++t) {
        swap[t][n + t] = 1;
        swap[n + t][t] = 1;
    }
    const ExpPoly reversed = -substitute_affine(delta, swap, std::vector<int>(2 * n, 0));
    const StructureFn base = a.structure_fn();
    StructureFn fn = [=](int i2, int k2, int j2, int m2) {
        auto terms = base(i2, k2, j2, m2);
        if (i2 == i && k2 == k && j2 == j && m2 == m) terms.push_back({s, delta});
        if (i2 == j && k2 == m && j2 == i && m2 == k) terms.push_back({s, reversed});
        return terms;
    };
    return AlgebraSpec(a.name() + "+perturbed", n, a.family_fn(), fn, a.depth());
}

// ---------------------------------------------------------------------------
// Registry

using Params = std::map<std::string, std::string>;

namespace detail {

inline std::string param_or(const Params& p, const std::string& key, const std::string& fallback)
{
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

inline int int_param(const Params& p, const std::string& key, int fallback)
{
    auto it = p.find(key);
    if (it == p.end()) return fallback;
    try {
        std::size_t used = 0;
        const int v = std::stoi(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument(key);
        return v;
    } catch (const std::exception&) {
        throw ParameterError("parameter " + key + " must be an integer, got `" + it->second + "`");
    }
}

inline mpq_class rational_param(const std::string& key, const std::string& text)
{
    const Scalar s = parse_scalar(text);
    if (!s.is_rational()) throw ParameterError("parameter " + key + " must be rational, got `" + text + "`");
    return s.to_rational();
}

// Coordinate u of the (Z-degree, lattice) index (d, x), as a function of the
// 2n structure variables; `second` selects beta over alpha.
inline ExpPoly index_coordinate(std::size_t n, int d, bool second, std::size_t u)
{
    if (u == 0) return ExpPoly::constant(2 * n, Scalar(d));
    return ExpPoly::variable(2 * n, (second ? n : 0) + u - 1);
}

inline void check_rank(std::size_t n)
{
    if (n < 1) throw ParameterError("lattice rank n must be at least 1");
}

} // namespace detail

// sl2 structure constants in the basis e, f, h.
inline std::vector<std::pair<int, long>> sl2_bracket(int x, int y)
{
    enum { E = 0, F = 1, H = 2 };
    if (x == H && y == E) return {{E, 2}};
    if (x == E && y == H) return {{E, -2}};
    if (x == H && y == F) return {{F, -2}};
    if (x == F && y == H) return {{F, 2}};
    if (x == E && y == F) return {{H, 1}};
    if (x == F && y == E) return {{H, -1}};
    return {};
}

inline AlgebraSpec toroidal_sl2(std::size_t n)
{
    detail::check_rank(n);
    return AlgebraSpec(
        "toroidal-sl2", n, [](int) { return std::vector<std::string>{"e", "f", "h"}; },
        [n](int, int k, int, int m) {
            std::vector<StructureTerm> out;
            for (const auto& [s, c] : sl2_bracket(k, m)) out.push_back({s, ExpPoly::constant(2 * n, Scalar(c))});
            return out;
        });
}

inline AlgebraSpec toroidal_abelian(std::size_t n, int dim)
{
    detail::check_rank(n);
    if (dim < 1) throw ParameterError("abelian dimension must be positive");
    std::vector<std::string> names;
    for (int t = 1; t <= dim; ++t) names.push_back("x" + std::to_string(t));
    return AlgebraSpec(
        "toroidal-abelian", n, [names](int) { return names; },
        [](int, int, int, int) { return std::vector<StructureTerm>{}; });
}

// W_{n+1}: t^a d_u with a = (i, alpha), [t^a d_u, t^b d_w] = t^{a+b}(b_u d_w - a_w d_u).
inline AlgebraSpec witt(std::size_t n)
{
    detail::check_rank(n);
    std::vector<std::string> names;
    for (std::size_t u = 0; u <= n; ++u) names.push_back("d" + std::to_string(u));
    return AlgebraSpec(
        "witt", n, [names](int) { return names; },
        [n](int i, int u, int j, int w) {
            std::vector<StructureTerm> out;
            out.push_back({w, detail::index_coordinate(n, j, true, static_cast<std::size_t>(u))});
            out.push_back({u, -detail::index_coordinate(n, i, false, static_cast<std::size_t>(w))});
            return out;
        });
}

// [t0^i(alpha), t0^j(beta)] = (q^{j alpha} - q^{i beta}) t0^{i+j}(alpha + beta)
inline AlgebraSpec quantum_torus(const std::vector<mpq_class>& q)
{
    const std::size_t n = q.size();
    detail::check_rank(n);
    for (const auto& x : q)
        if (sgn(x) == 0) throw InvalidBaseError("quantum torus parameter q must be nonzero");
    return AlgebraSpec(
        "quantum-torus", n, [](int) { return std::vector<std::string>{"t"}; },
        [q, n](int i, int, int j, int) {
            ExpPoly left = ExpPoly::constant(2 * n, Scalar(1)), right = ExpPoly::constant(2 * n, Scalar(1));
            for (std::size_t u = 0; u < n; ++u) {
                left = left * ExpPoly::exponential(2 * n, u, detail::rational_pow(q[u], j));
                right = right * ExpPoly::exponential(2 * n, n + u, detail::rational_pow(q[u], i));
            }
            return std::vector<StructureTerm>{{0, left - right}};
        });
}

// [L_x, L_y] = det(y; x) L_{x+y} with x = (i, alpha), y = (j, beta).
inline AlgebraSpec virasoro_like()
{
    return AlgebraSpec(
        "virasoro-like", 1, [](int) { return std::vector<std::string>{"L"}; },
        [](int i, int, int j, int) {
            const ExpPoly f = ExpPoly::variable(2, 0).scaled(Scalar(j)) - ExpPoly::variable(2, 1).scaled(Scalar(i));
            return std::vector<StructureTerm>{{0, f}};
        });
}

// Centerless Vir[Z + Zp]: d_{i+kp} has index (i, k) and
// [d_{i+alpha p}, d_{j+beta p}] = ((j - i) + (beta - alpha) p) d_{i+j+(alpha+beta)p}.
inline AlgebraSpec generalized_virasoro()
{
    return AlgebraSpec(
        "generalized-virasoro", 1, [](int) { return std::vector<std::string>{"d"}; },
        [](int i, int, int j, int) {
            const Scalar p = Scalar::p();
            const ExpPoly f =
                ExpPoly::constant(2, Scalar(j - i)) + ExpPoly::variable(2, 1).scaled(p) - ExpPoly::variable(2, 0).scaled(p);
            return std::vector<StructureTerm>{{0, f}};
        });
}

inline std::vector<mpq_class> parse_rational_list(const std::string& key, const std::string& text)
{
    std::vector<mpq_class> out;
    std::size_t pos = 0;
    for (;;) {
        const std::size_t comma = text.find(',', pos);
        out.push_back(detail::rational_param(key, text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

inline std::vector<std::string> registry_algebra_names()
{
    return {"generalized-virasoro", "quantum-torus", "toroidal-abelian", "toroidal-sl2", "virasoro-like", "witt"};
}

inline AlgebraSpec registry_algebra(const std::string& name, const Params& params = {})
{
    const int n = detail::int_param(params, "n", 1);
    if (n < 1) throw ParameterError("lattice rank n must be at least 1");
    const auto un = static_cast<std::size_t>(n);
    if (name == "toroidal-sl2") return toroidal_sl2(un);
    if (name == "toroidal-abelian") return toroidal_abelian(un, detail::int_param(params, "dim", 1));
    if (name == "witt") return witt(un);
    if (name == "quantum-torus") {
        std::vector<mpq_class> q = parse_rational_list("q", detail::param_or(params, "q", "2"));
        if (q.size() == 1 && un > 1) q.assign(un, q[0]);
        if (q.size() != un) throw ParameterError("quantum torus needs one q per lattice coordinate");
        return quantum_torus(q);
    }
    if (name == "virasoro-like") return virasoro_like();
    if (name == "generalized-virasoro") return generalized_virasoro();
    throw UnknownNameError("unknown algebra `" + name + "`");
}

// ---------------------------------------------------------------------------
// Definition files
//
//   n 1
//   depth 8
//   family * e f h            (K_i for every i; `family 2 ...` for one degree)
//   bracket * h * e -> e : 2
//   bracket * e * f -> h : 1
//
// Expressions use a1..an (alpha), b1..bn (beta) and the degrees i, j.
// A missing bracket is filled in from its reverse by antisymmetry.

namespace detail {

inline std::vector<std::string> split_words(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) out.push_back(cur), cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

inline std::string strip_comment(const std::string& line)
{
    const auto hash = line.find('#');
    return hash == std::string::npos ? line : line.substr(0, hash);
}

constexpr int kAnyDegree = INT32_MIN;

inline int degree_token(const std::string& tok)
{
    if (tok == "*") return kAnyDegree;
    try {
        std::size_t used = 0;
        const int v = std::stoi(tok, &used);
        if (used == tok.size()) return v;
    } catch (const std::exception&) {
    }
    throw ParseError("expected a degree or `*`, got `" + tok + "`");
}

} // namespace detail

inline AlgebraSpec parse_algebra_definition(const std::string& text, const std::string& name = "file")
{
    std::size_t n = 0;
    int depth = 32;
    std::map<int, std::vector<std::string>> fam;  // kAnyDegree for the default
    struct Entry {
        int i, j;
        std::string k, m, s;
        ExpPoly f;  // arity 2n + 2
    };
    std::vector<Entry> entries;

    std::size_t lineno = 0;
    std::size_t pos = 0;
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
        if (words[0] == "n" && words.size() == 2) {
            n = static_cast<std::size_t>(detail::degree_token(words[1]));
            if (n < 1 || n > 8) throw ParseError("n must be between 1 and 8" + where);
        } else if (words[0] == "depth" && words.size() == 2) {
            depth = detail::degree_token(words[1]);
        } else if (words[0] == "family" && words.size() >= 2) {
            const int d = detail::degree_token(words[1]);
            fam[d] = std::vector<std::string>(words.begin() + 2, words.end());
        } else if (words[0] == "bracket" && words.size() == 7 && words[5] == "->" && colon != std::string::npos) {
            if (n == 0) throw ParseError("`n` must precede brackets" + where);
            std::vector<std::string> vars;
            for (std::size_t t = 1; t <= n; ++t) vars.push_back("a" + std::to_string(t));
            for (std::size_t t = 1; t <= n; ++t) vars.push_back("b" + std::to_string(t));
            vars.push_back("i");
            vars.push_back("j");
            entries.push_back({detail::degree_token(words[1]), detail::degree_token(words[3]), words[2], words[4], words[6],
                               parse_exppoly(line.substr(colon + 1), vars)});
        } else {
            throw ParseError("unrecognized algebra definition line `" + detail::split_words(raw).front() + " ...`" + where);
        }
    }
    if (n == 0) throw ParseError("algebra definition lacks `n`");

    FamilyFn families = [fam](int i) {
        auto it = fam.find(i);
        if (it == fam.end()) it = fam.find(detail::kAnyDegree);
        return it == fam.end() ? std::vector<std::string>{} : it->second;
    };
    auto index_of = [families](int i, const std::string& nm) -> int {
        const auto names = families(i);
        for (std::size_t t = 0; t < names.size(); ++t)
            if (names[t] == nm) return static_cast<int>(t);
        return -1;
    };
    auto declared = [&fam](const std::string& nm) {
        for (const auto& [d, names] : fam)
            if (std::find(names.begin(), names.end(), nm) != names.end()) return true;
        return false;
    };
    for (const auto& e : entries) {
        // names must exist wherever the entry can apply
        for (const auto& [d, nm] : {std::pair{e.i, e.k}, std::pair{e.j, e.m}}) {
            if (d == detail::kAnyDegree ? !declared(nm) : index_of(d, nm) < 0) throw UnknownNameError("unknown family `" + nm + "`");
        }
        if (!declared(e.s)) throw UnknownNameError("unknown family `" + e.s + "`");
    }

    // Restrict an entry to concrete (i, j): the result has arity 2n.
    auto specialize = [n](const ExpPoly& f, int i, int j, bool swapped) {
        IntMatrix a(2 * n + 2, std::vector<int>(2 * n, 0));
        for (std::size_t t = 0; t < n; ++t) {
            a[t][swapped ? n + t : t] = 1;
            a[n + t][swapped ? t : n + t] = 1;
        }
        std::vector<int> b(2 * n + 2, 0);
        b[2 * n] = swapped ? j : i;
        b[2 * n + 1] = swapped ? i : j;
        return substitute_affine(f, a, b);
    };
    auto matches = [](int pattern, int d) { return pattern == detail::kAnyDegree || pattern == d; };
    auto specificity = [](const Entry& e) { return (e.i != detail::kAnyDegree ? 2 : 0) + (e.j != detail::kAnyDegree ? 1 : 0); };

    StructureFn structure = [=](int i, int k, int j, int m) {
        const auto ni = families(i), nj = families(j), ns = families(i + j);
        const std::string& kn = ni.at(static_cast<std::size_t>(k));
        const std::string& mn = nj.at(static_cast<std::size_t>(m));
        std::vector<StructureTerm> out;
        // the most specific entry wins, forward before reversed on ties
        auto hit = [&](const Entry& e, bool rev) {
            return rev ? (e.k == mn && e.m == kn && matches(e.i, j) && matches(e.j, i))
                       : (e.k == kn && e.m == mn && matches(e.i, i) && matches(e.j, j));
        };
        int best_fwd = -1, best_rev = -1;
        for (const auto& e : entries) {
            if (hit(e, false)) best_fwd = std::max(best_fwd, specificity(e));
            if (hit(e, true)) best_rev = std::max(best_rev, specificity(e));
        }
        if (best_fwd < 0 && best_rev < 0) return out;
        const bool rev = best_rev > best_fwd;
        const int best = rev ? best_rev : best_fwd;
        for (const auto& e : entries) {
            if (!hit(e, rev) || specificity(e) != best) continue;
            int s = -1;
            for (std::size_t t = 0; t < ns.size(); ++t)
                if (ns[t] == e.s) s = static_cast<int>(t);
            if (s < 0) throw UnknownNameError("bracket target `" + e.s + "` not in K_" + std::to_string(i + j));
            ExpPoly f = specialize(e.f, i, j, rev);
            out.push_back({s, rev ? -f : f});
        }
        return out;
    };
    return AlgebraSpec(name, n, families, structure, depth);
}

} // namespace explie
