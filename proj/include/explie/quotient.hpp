#pragma once

// Weight spaces of M(V) = M~(V) / radical.
//
// A homogeneous x of degree -i lies in the radical iff every raising word of
// total degree i sends it to 0 in V. The dimension of M(V)^{(-i)}_alpha is
// therefore the rank of the pairing between lowering words and raising
// tests. Two routes compute it:
//   truncated : lattice arguments restricted to boxes, a lower bound;
//   symbolic  : raising arguments expanded as exp-polynomials in gamma, so
//               the tests collapse to finitely many functionals f_p(beta),
//               which are evaluated on an independence grid in beta.

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "explie/algebra.hpp"
#include "explie/errors.hpp"
#include "explie/exppoly.hpp"
#include "explie/gmodule.hpp"
#include "explie/induce.hpp"
#include "explie/matrix.hpp"

namespace explie {

// All shapes of the given total degree: ordered compositions into positive
// parts with a family choice per part (K_{-d} for lowering, K_d for raising).
inline std::vector<Shape> enumerate_shapes(const AlgebraSpec& a, int total, bool lowering)
{
    if (total < 0) throw DegreeError("shape degree must be nonnegative");
    if (total > a.depth()) throw DepthOverflowError("degree " + std::to_string(total) + " exceeds depth bound " + std::to_string(a.depth()));
    std::vector<Shape> out;
    Shape cur;
    auto rec = [&](auto&& self, int left) -> void {
        if (left == 0) {
            out.push_back(cur);
            return;
        }
        for (int d = 1; d <= left; ++d) {
            const std::size_t count = a.family_count(lowering ? -d : d);
            for (std::size_t k = 0; k < count; ++k) {
                cur.degrees.push_back(d);
                cur.families.push_back(static_cast<int>(k));
                self(self, left - d);
                cur.degrees.pop_back();
                cur.families.pop_back();
            }
        }
    };
    rec(rec, total);
    return out;
}

struct ColumnKey {
    Shape raise;
    int l = 0;
    TermKey sig;

    bool operator<(const ColumnKey& o) const { return std::tie(raise, l, sig) < std::tie(o.raise, o.l, o.sig); }
    bool operator==(const ColumnKey& o) const { return raise == o.raise && l == o.l && sig == o.sig; }
};

struct FunctionalFamily {
    Shape lower;
    int j = 0;
    std::size_t beta_arity = 0;
    std::vector<ColumnKey> keys;
    std::vector<ExpPoly> f;  // f[t] belongs to keys[t]

    std::size_t size() const { return f.size(); }
};

// For every raising shape of the same total degree, h_l(beta, gamma) is
// expanded in gamma; the coefficient functions of beta are the family.
inline FunctionalFamily functional_family(const SymbolicReducer& red, const Shape& lower, int j, const std::vector<int>& alpha)
{
    const AlgebraSpec& a = red.algebra();
    FunctionalFamily fam;
    fam.lower = lower;
    fam.j = j;
    fam.beta_arity = free_letters(red.module(), lower) * a.n();
    for (const auto& raise : enumerate_shapes(a, lower.total(), false)) {
        const SymbolicImage img = red.reduce(lower, raise, j, alpha);
        for (const auto& [l, h] : img.h)
            for (auto& part : expand_in_subset(h, img.gamma_subset())) {
                fam.keys.push_back({raise, l, part.signature});
                fam.f.push_back(std::move(part.coefficient));
            }
    }
    return fam;
}

struct RowShape {
    Shape lower;
    int j = 0;
};

inline std::vector<RowShape> lowering_row_shapes(const AlgebraSpec& a, const ModuleSpec& m, int i)
{
    std::vector<RowShape> out;
    for (const auto& s : enumerate_shapes(a, i, true))
        for (std::size_t j = 0; j < m.dim(); ++j) out.push_back({s, static_cast<int>(j)});
    return out;
}

inline std::size_t dim_v(const ModuleSpec& m, const std::vector<int>& alpha)
{
    if (m.graded()) return m.dim();
    return std::all_of(alpha.begin(), alpha.end(), [](int x) { return x == 0; }) ? m.dim() : 0;
}

struct SymbolicDim {
    std::size_t dim = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
};

inline SymbolicDim dim_symbolic(const AlgebraSpec& a, const ModuleSpec& m, int i, const std::vector<int>& alpha)
{
    if (i < 0) throw DegreeError("degree i must be nonnegative");
    if (alpha.size() != a.n()) throw DimensionError("weight has wrong lattice rank");
    if (i == 0) {
        const std::size_t d = dim_v(m, alpha);
        return {d, d, d};
    }
    const SymbolicReducer red(a, m);
    std::vector<FunctionalFamily> fams;
    std::map<ColumnKey, std::size_t> columns;
    for (const auto& rs : lowering_row_shapes(a, m, i)) {
        fams.push_back(functional_family(red, rs.lower, rs.j, alpha));
        for (const auto& k : fams.back().keys) columns.emplace(k, 0);
    }
    std::size_t c = 0;
    for (auto& [k, idx] : columns) idx = c++;

    std::vector<std::vector<Scalar>> rows;
    for (const auto& fam : fams) {
        std::set<TermKey> sigs;
        for (const auto& f : fam.f)
            for (const auto& [key, coef] : f.terms()) sigs.insert(key);
        if (sigs.empty()) continue;
        for (const auto& pt : independence_grid({sigs.begin(), sigs.end()})) {
            std::vector<Scalar> row(columns.size());
            for (std::size_t t = 0; t < fam.size(); ++t) row[columns.at(fam.keys[t])] += fam.f[t].evaluate(pt);
            rows.push_back(std::move(row));
        }
    }
    SymbolicDim out;
    out.rows = rows.size();
    out.cols = columns.size();
    if (rows.empty() || columns.empty()) return out;
    out.dim = mat_rank(ExactMatrix::from_rows(rows));
    return out;
}

// ---------------------------------------------------------------------------
// Truncated pairing

namespace detail {

// All integer vectors of the given length with entries in [-box, box].
inline std::vector<std::vector<int>> box_points(std::size_t len, int box)
{
    std::vector<std::vector<int>> pts{std::vector<int>{}};
    for (std::size_t t = 0; t < len; ++t) {
        std::vector<std::vector<int>> next;
        for (const auto& p : pts)
            for (int x = -box; x <= box; ++x) {
                auto q = p;
                q.push_back(x);
                next.push_back(std::move(q));
            }
        pts = std::move(next);
    }
    return pts;
}

} // namespace detail

struct RaisingTest {
    std::vector<Generator> word;
    int l = 0;
};

struct PairingMatrix {
    std::vector<PBWWord> rows;
    std::vector<RaisingTest> cols;
    ExactMatrix entries;
};

inline std::vector<PBWWord> truncated_rows(const AlgebraSpec& a, const ModuleSpec& m, int i, const std::vector<int>& alpha, int box)
{
    std::vector<PBWWord> rows;
    if (i == 0) {
        if (dim_v(m, alpha) == 0) return rows;
        for (std::size_t j = 0; j < m.dim(); ++j)
            rows.push_back(PBWWord{{}, static_cast<int>(j), m.graded() ? alpha : std::vector<int>{}});
        return rows;
    }
    for (const auto& rs : lowering_row_shapes(a, m, i)) {
        const std::size_t f = free_letters(m, rs.lower);
        for (const auto& beta : detail::box_points(f * a.n(), box)) {
            PBWWord w = lowering_word(a, m, rs.lower, rs.j, alpha, beta);
            bool inside = true;
            for (const auto& l : w.letters)
                for (int x : l.arg) inside = inside && x >= -box && x <= box;
            if (inside) rows.push_back(std::move(w));
        }
    }
    return rows;
}

inline PairingMatrix pairing_matrix_truncated(const AlgebraSpec& a, const ModuleSpec& m, int i, const std::vector<int>& alpha, int box_low,
                                              int box_high)
{
    if (i < 0) throw DegreeError("degree i must be nonnegative");
    if (box_low < 0 || box_high < 0) throw ParameterError("boxes must be nonnegative");
    if (alpha.size() != a.n()) throw DimensionError("weight has wrong lattice rank");
    m.check_algebra(a);
    PairingMatrix pm;
    pm.rows = truncated_rows(a, m, i, alpha, box_low);

    std::vector<std::pair<std::vector<Generator>, std::vector<int>>> tests;  // word, target weight
    for (const auto& raise : enumerate_shapes(a, i, false))
        for (const auto& gamma : detail::box_points(raise.size() * a.n(), box_high)) {
            std::vector<int> target = alpha;
            for (std::size_t t = 0; t < gamma.size(); ++t) target[t % a.n()] += gamma[t];
            tests.emplace_back(raising_word(a, raise, gamma), m.graded() ? target : std::vector<int>{});
        }
    for (const auto& [word, target] : tests)
        for (std::size_t l = 0; l < m.dim(); ++l) pm.cols.push_back({word, static_cast<int>(l)});

    pm.entries = ExactMatrix(pm.rows.size(), pm.cols.size());
    const ConcreteEngine engine(a, m);
    for (std::size_t r = 0; r < pm.rows.size(); ++r) {
        const FormalVector x{{pm.rows[r], Scalar(1)}};
        for (std::size_t t = 0; t < tests.size(); ++t) {
            std::vector<Letter<std::vector<int>>> letters;
            for (const auto& g : tests[t].first) letters.push_back(to_letter(g));
            for (const auto& [w, c] : engine.apply_word(letters, x)) {
                if (!w.letters.empty()) throw ConsistencyError("raising test left lowering letters behind");
                if (w.base_arg != tests[t].second) throw ConsistencyError("raising test landed at an unexpected weight");
                pm.entries(r, t * m.dim() + static_cast<std::size_t>(w.base)) = c;
            }
        }
    }
    return pm;
}

struct TruncatedDim {
    std::vector<std::pair<int, std::size_t>> ranks;  // box -> rank
    bool stabilized = false;
    std::size_t value = 0;
};

inline TruncatedDim dim_truncated(const AlgebraSpec& a, const ModuleSpec& m, int i, const std::vector<int>& alpha, const std::vector<int>& boxes)
{
    if (boxes.empty()) throw ParameterError("box schedule must be nonempty");
    for (std::size_t t = 0; t + 1 < boxes.size(); ++t)
        if (boxes[t] >= boxes[t + 1]) throw ParameterError("box schedule must be strictly increasing");
    TruncatedDim out;
    for (int b : boxes) {
        const PairingMatrix pm = pairing_matrix_truncated(a, m, i, alpha, b, b);
        out.ranks.emplace_back(b, mat_rank(pm.entries));
    }
    out.value = out.ranks.back().second;
    out.stabilized = out.ranks.size() >= 2 && out.ranks[out.ranks.size() - 2].second == out.value;
    return out;
}

// ---------------------------------------------------------------------------
// Radical membership

struct RadicalMode {
    bool symbolic = true;
    int box = 3;  // truncated mode only
};

struct RadicalResult {
    bool radical = false;
    bool proved = false;  // truncated mode can only refute
};

// Splits a homogeneous vector into (shape, base) groups with their free
// lattice arguments.
inline std::map<std::pair<Shape, int>, std::vector<std::pair<std::vector<int>, Scalar>>> group_by_shape(const ModuleSpec& m,
                                                                                                       const FormalVector& x)
{
    std::map<std::pair<Shape, int>, std::vector<std::pair<std::vector<int>, Scalar>>> groups;
    for (const auto& [w, c] : x) {
        Shape s;
        for (const auto& l : w.letters) {
            s.degrees.push_back(-l.i);
            s.families.push_back(l.k);
        }
        std::vector<int> beta;
        const std::size_t f = free_letters(m, s);
        for (std::size_t t = 0; t < f; ++t) beta.insert(beta.end(), w.letters[t].arg.begin(), w.letters[t].arg.end());
        groups[{s, w.base}].emplace_back(beta, c);
    }
    return groups;
}

inline RadicalResult radical_membership(const AlgebraSpec& a, const ModuleSpec& m, const FormalVector& x, const RadicalMode& mode)
{
    if (x.empty()) return {true, true};
    const auto [d, alpha] = homogeneous_component(x, a.n());
    if (d == 0) return {false, true};  // a nonzero vector of V
    const int i = -d;
    if (mode.symbolic) {
        const SymbolicReducer red(a, m);
        std::map<ColumnKey, Scalar> totals;
        for (const auto& [key, terms] : group_by_shape(m, x)) {
            const FunctionalFamily fam = functional_family(red, key.first, key.second, alpha);
            for (std::size_t t = 0; t < fam.size(); ++t) {
                Scalar s;
                for (const auto& [beta, c] : terms) s += c * fam.f[t].evaluate(beta);
                totals[fam.keys[t]] += s;
            }
        }
        for (const auto& [k, s] : totals)
            if (!s.is_zero()) return {false, true};
        return {true, true};
    }
    for (const auto& raise : enumerate_shapes(a, i, false))
        for (const auto& gamma : detail::box_points(raise.size() * a.n(), mode.box))
            if (!apply_raising_word(a, m, raising_word(a, raise, gamma), x).empty()) return {false, true};
    return {true, false};
}

} // namespace explie
