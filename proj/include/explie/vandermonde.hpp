#pragma once

// Extended (confluent-exponential) Vandermonde matrices built from the
// functions a_j^n, n a_j^n, ..., n^{s_j-1} a_j^n evaluated at n = 0..s-1.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "explie/errors.hpp"
#include "explie/exppoly.hpp"
#include "explie/matrix.hpp"
#include "explie/scalar.hpp"

namespace explie {

struct VBlock {
    mpq_class base;
    int multiplicity = 1;
};

class VSpec {
public:
    VSpec() = default;
    explicit VSpec(std::vector<VBlock> blocks) : blocks_(std::move(blocks))
    {
        if (blocks_.empty()) throw ParameterError("VSpec needs at least one block");
        std::set<mpq_class> seen;
        for (const auto& b : blocks_) {
            if (sgn(b.base) == 0) throw InvalidBaseError("VSpec base must be nonzero");
            if (b.multiplicity < 1) throw ParameterError("VSpec multiplicity must be positive");
            if (!seen.insert(b.base).second) throw DuplicateError("VSpec bases must be distinct");
        }
    }

    const std::vector<VBlock>& blocks() const { return blocks_; }

    int size() const
    {
        int s = 0;
        for (const auto& b : blocks_) s += b.multiplicity;
        return s;
    }

    // The function list f_1..f_s as one-variable term signatures.
    std::vector<TermKey> functions() const
    {
        std::vector<TermKey> out;
        for (const auto& b : blocks_)
            for (int t = 0; t < b.multiplicity; ++t) out.push_back(TermKey{{t}, {b.base}});
        return out;
    }

private:
    std::vector<VBlock> blocks_;
};

// Column k holds f_k(0), ..., f_k(s-1).
inline ExactMatrix build_matrix(const VSpec& spec)
{
    const auto fs = spec.functions();
    std::vector<std::vector<int>> nodes;
    for (int n = 0; n < spec.size(); ++n) nodes.push_back({n});
    return evaluation_matrix(fs, nodes);
}

// m!·(m-1)!·...·1!, with superfactorial(0) = 1.
inline mpz_class superfactorial(int m)
{
    mpz_class acc(1), fact(1);
    for (int k = 1; k <= m; ++k) {
        fact *= k;
        acc *= fact;
    }
    return acc;
}

// prod_j sf(s_j - 1) a_j^{s_j(s_j-1)/2} * prod_{i<j} (a_j - a_i)^{s_i s_j}
inline Scalar det_closed_form(const VSpec& spec)
{
    const auto& bl = spec.blocks();
    mpq_class acc(1);
    for (const auto& b : bl) {
        acc *= mpq_class(superfactorial(b.multiplicity - 1));
        acc *= detail::rational_pow(b.base, static_cast<long>(b.multiplicity) * (b.multiplicity - 1) / 2);
    }
    for (std::size_t i = 0; i < bl.size(); ++i)
        for (std::size_t j = i + 1; j < bl.size(); ++j)
            acc *= detail::rational_pow(mpq_class(bl[j].base - bl[i].base), static_cast<long>(bl[i].multiplicity) * bl[j].multiplicity);
    return Scalar(acc);
}

// The finite system sum_k d_kj c_k = 0 (one row per function j) next to the
// infinite system sampled on the grid n = 0..s-1 (one row per n).
struct ReducedSystem {
    ExactMatrix finite;     // s x K
    ExactMatrix grid;       // s x K
    ExactMatrix transform;  // grid = transform * finite
    bool transform_verified = false;
    bool equivalent = false;  // equal null spaces
};

// d has one row per unknown c_k and one column per function f_j.
inline ReducedSystem reduce_system(const ExactMatrix& d, const VSpec& spec)
{
    const auto s = static_cast<std::size_t>(spec.size());
    if (d.cols() != s) throw DimensionError("reduce_system: d must have one column per function");
    ReducedSystem out;
    out.finite = d.transpose();
    out.transform = build_matrix(spec);
    if (mat_det(out.transform).is_zero()) throw ConsistencyError("reduce_system: singular extended Vandermonde matrix");

    // Evaluate sum_j d_kj f_j(n) directly, independent of the product below.
    const auto fs = spec.functions();
    out.grid = ExactMatrix(s, d.rows());
    for (std::size_t n = 0; n < s; ++n) {
        const std::vector<int> pt{static_cast<int>(n)};
        for (std::size_t k = 0; k < d.rows(); ++k) {
            Scalar v;
            for (std::size_t j = 0; j < s; ++j) v += d(k, j) * Scalar(detail::term_value(fs[j], pt));
            out.grid(n, k) = v;
        }
    }
    out.transform_verified = (out.transform * out.finite) == out.grid;

    ExactMatrix stacked = out.finite;
    stacked.append_rows(out.grid);
    const std::size_t rf = mat_rank(out.finite);
    const std::size_t rg = mat_rank(out.grid);
    const std::size_t rs = mat_rank(stacked);
    out.equivalent = out.transform_verified && rf == rg && rg == rs;
    return out;
}

// Seeded sampling for verification runs.
struct VSpecSampler {
    int max_blocks = 4;
    int max_multiplicity = 3;
    int base_bound = 5;  // |a_j| <= bound
    int max_den = 3;
    int max_size = 0;    // 0: no cap on s
};

inline VSpec random_vspec(std::mt19937_64& rng, const VSpecSampler& cfg = {})
{
    std::uniform_int_distribution<int> nblocks(1, cfg.max_blocks), mult(1, cfg.max_multiplicity), den(1, cfg.max_den);
    const int want = nblocks(rng);
    std::vector<VBlock> blocks;
    int size = 0;
    while (static_cast<int>(blocks.size()) < want) {
        const int d = den(rng);
        std::uniform_int_distribution<int> num(-cfg.base_bound * d, cfg.base_bound * d);
        mpq_class b(num(rng), d);
        b.canonicalize();
        if (sgn(b) == 0) continue;
        bool dup = false;
        for (const auto& x : blocks) dup = dup || x.base == b;
        if (dup) continue;
        int m = mult(rng);
        if (cfg.max_size > 0) {
            if (size >= cfg.max_size) break;
            m = std::min(m, cfg.max_size - size);
        }
        blocks.push_back({b, m});
        size += m;
    }
    return VSpec(blocks);
}

// A spec with s <= max_size and a K x s coefficient matrix, K <= max_unknowns.
// Some draws repeat rows so that both systems have nontrivial solutions.
inline std::pair<VSpec, ExactMatrix> random_system(std::mt19937_64& rng, int max_size = 4, int max_unknowns = 6)
{
    VSpecSampler cfg;
    cfg.max_size = max_size;
    const VSpec spec = random_vspec(rng, cfg);
    const auto s = static_cast<std::size_t>(spec.size());
    std::uniform_int_distribution<int> unknowns(1, max_unknowns), entry(-4, 4), den(1, 3), coin(0, 2);
    const auto k = static_cast<std::size_t>(unknowns(rng));
    ExactMatrix d(k, s);
    const bool repeat = coin(rng) == 0;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < s; ++j) {
            if (repeat && i > 0) {
                d(i, j) = d(0, j) * Scalar(static_cast<long>(i + 1));
            } else {
                mpq_class q(entry(rng), den(rng));
                q.canonicalize();
                d(i, j) = Scalar(q);
            }
        }
    return {spec, d};
}

} // namespace explie
