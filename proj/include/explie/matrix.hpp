#pragma once

// Dense exact matrices over Q(p) and the linear algebra every other module
// relies on: determinant, rank and right null space.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "explie/errors.hpp"
#include "explie/scalar.hpp"

namespace explie {

class ExactMatrix {
public:
    ExactMatrix() = default;
    ExactMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols)
    {
    }

    static ExactMatrix identity(std::size_t n)
    {
        ExactMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar(1);
        return m;
    }

    static ExactMatrix from_rows(const std::vector<std::vector<Scalar>>& rows)
    {
        const std::size_t r = rows.size();
        const std::size_t c = r == 0 ? 0 : rows.front().size();
        ExactMatrix m(r, c);
        for (std::size_t i = 0; i < r; ++i) {
            if (rows[i].size() != c) throw DimensionError("ragged rows in matrix literal");
            for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    static ExactMatrix from_rows(std::initializer_list<std::initializer_list<Scalar>> rows)
    {
        std::vector<std::vector<Scalar>> v;
        for (const auto& r : rows) v.emplace_back(r);
        return from_rows(v);
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const Scalar& at(std::size_t i, std::size_t j) const
    {
        if (i >= rows_ || j >= cols_) throw DimensionError("matrix index out of range");
        return (*this)(i, j);
    }

    void swap_rows(std::size_t a, std::size_t b)
    {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }

    ExactMatrix transpose() const
    {
        ExactMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    std::vector<Scalar> row(std::size_t i) const
    {
        return {data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)};
    }

    // Stack `other` below this matrix.
    void append_rows(const ExactMatrix& other)
    {
        if (rows_ == 0 && cols_ == 0) cols_ = other.cols_;
        if (other.cols_ != cols_) throw DimensionError("append_rows: column count mismatch");
        data_.insert(data_.end(), other.data_.begin(), other.data_.end());
        rows_ += other.rows_;
    }

    bool all_rational() const
    {
        return std::all_of(data_.begin(), data_.end(), [](const Scalar& s) { return s.is_rational(); });
    }

    bool is_zero() const
    {
        return std::all_of(data_.begin(), data_.end(), [](const Scalar& s) { return s.is_zero(); });
    }

    friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b)
    {
        if (a.cols_ != b.rows_) throw DimensionError("matrix product shape mismatch");
        ExactMatrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                if (a(i, k).is_zero()) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += a(i, k) * b(k, j);
            }
        return r;
    }

    std::vector<Scalar> apply(const std::vector<Scalar>& v) const
    {
        if (v.size() != cols_) throw DimensionError("matrix-vector shape mismatch");
        std::vector<Scalar> out(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (!v[j].is_zero()) out[i] += (*this)(i, j) * v[j];
        return out;
    }

    friend bool operator==(const ExactMatrix& a, const ExactMatrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Scalar> data_;
};

// Fraction-free (Bareiss) determinant.
inline Scalar mat_det(const ExactMatrix& input)
{
    if (!input.is_square()) throw DimensionError("determinant of a non-square matrix");
    const std::size_t n = input.rows();
    if (n == 0) return Scalar(1);
    ExactMatrix a = input;
    Scalar prev(1);
    bool negate = false;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && a(piv, k).is_zero()) ++piv;
        if (piv == n) return Scalar(0);
        if (piv != k) {
            a.swap_rows(piv, k);
            negate = !negate;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                a(i, j) = (a(k, k) * a(i, j) - a(i, k) * a(k, j)) / prev;
            a(i, k) = Scalar(0);
        }
        prev = a(k, k);
    }
    return negate ? -a(n - 1, n - 1) : a(n - 1, n - 1);
}

namespace detail {

// Rank over Q of a rational matrix, by Bareiss elimination over Z after
// clearing denominators row by row.
inline std::size_t rank_over_q(std::vector<std::vector<mpq_class>> rows_q, std::size_t cols)
{
    std::vector<std::vector<mpz_class>> a;
    a.reserve(rows_q.size());
    for (auto& r : rows_q) {
        mpz_class l(1);
        bool nonzero = false;
        for (const auto& x : r) {
            if (sgn(x) == 0) continue;
            nonzero = true;
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
        }
        if (!nonzero) continue;
        std::vector<mpz_class> zr(cols);
        for (std::size_t j = 0; j < cols; ++j) {
            if (sgn(r[j]) == 0) continue;
            zr[j] = r[j].get_num() * (l / r[j].get_den());
        }
        a.push_back(std::move(zr));
    }
    const std::size_t m = a.size();
    std::size_t rank = 0;
    mpz_class prev(1);
    mpz_class t1, t2;
    for (std::size_t col = 0; col < cols && rank < m; ++col) {
        std::size_t piv = rank;
        while (piv < m && sgn(a[piv][col]) == 0) ++piv;
        if (piv == m) continue;
        std::swap(a[piv], a[rank]);
        const mpz_class& pv = a[rank][col];
        for (std::size_t i = rank + 1; i < m; ++i) {
            auto& ri = a[i];
            const mpz_class f = ri[col];
            for (std::size_t j = col + 1; j < cols; ++j) {
                t1 = pv * ri[j];
                if (sgn(f) != 0) {
                    t2 = f * a[rank][j];
                    t1 -= t2;
                }
                mpz_divexact(ri[j].get_mpz_t(), t1.get_mpz_t(), prev.get_mpz_t());
            }
            ri[col] = 0;
        }
        prev = a[rank][col];
        ++rank;
    }
    return rank;
}

inline Poly poly_lcm(const Poly& a, const Poly& b)
{
    const Poly g = Poly::gcd(a, b);
    Poly q, r;
    Poly::divmod(a * b, g, q, r);
    return q.monic();
}

// Integer evaluation points 0, 1, -1, 2, -2, ...
inline long specialization_point(std::size_t t)
{
    const long h = static_cast<long>((t + 1) / 2);
    return (t % 2 == 1) ? h : -h;
}

} // namespace detail

// Exact rank over Q(p).
//
// Rows are scaled to polynomial entries; the rank at any specialization
// p = c is a lower bound for the generic rank. A nonzero (r+1)-minor is a
// polynomial of degree at most D(r+1) (sum of the r+1 largest row or
// column degrees), so once D(r+1)+1 distinct specializations all have
// rank <= r the generic rank is exactly r.
inline std::size_t mat_rank(const ExactMatrix& m)
{
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    if (rows == 0 || cols == 0) return 0;

    if (m.all_rational()) {
        std::vector<std::vector<mpq_class>> q(rows, std::vector<mpq_class>(cols));
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) q[i][j] = m(i, j).numerator().constant_term();
        return detail::rank_over_q(std::move(q), cols);
    }

    std::vector<std::vector<Poly>> poly(rows, std::vector<Poly>(cols));
    std::vector<long> row_deg(rows, 0), col_deg(cols, 0);
    for (std::size_t i = 0; i < rows; ++i) {
        Poly l(1);
        for (std::size_t j = 0; j < cols; ++j)
            if (!m(i, j).is_polynomial()) l = detail::poly_lcm(l, m(i, j).denominator());
        for (std::size_t j = 0; j < cols; ++j) {
            const Scalar& s = m(i, j);
            if (s.is_zero()) continue;
            if (l.is_one()) {
                poly[i][j] = s.numerator();
            } else {
                Poly q, r;
                Poly::divmod(l, s.denominator(), q, r);
                poly[i][j] = s.numerator() * q;
            }
            const long d = poly[i][j].degree();
            row_deg[i] = std::max(row_deg[i], d);
            col_deg[j] = std::max(col_deg[j], d);
        }
    }
    std::sort(row_deg.rbegin(), row_deg.rend());
    std::sort(col_deg.rbegin(), col_deg.rend());
    auto minor_degree_bound = [&](std::size_t k) {
        long sr = 0, sc = 0;
        for (std::size_t t = 0; t < k && t < rows; ++t) sr += row_deg[t];
        for (std::size_t t = 0; t < k && t < cols; ++t) sc += col_deg[t];
        return static_cast<std::size_t>(std::min(sr, sc));
    };

    const std::size_t max_rank = std::min(rows, cols);
    std::size_t best = 0;
    std::vector<std::vector<mpq_class>> q(rows, std::vector<mpq_class>(cols));
    for (std::size_t t = 0;; ++t) {
        if (best == max_rank) return best;
        if (t >= minor_degree_bound(best + 1) + 1) return best;
        const mpq_class c(detail::specialization_point(t));
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) q[i][j] = poly[i][j].eval(c);
        best = std::max(best, detail::rank_over_q(q, cols));
    }
}

// Reduced row echelon form over Q(p); returns pivot columns.
inline std::vector<std::size_t> rref_in_place(ExactMatrix& a)
{
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t col = 0; col < a.cols() && r < a.rows(); ++col) {
        std::size_t piv = r;
        while (piv < a.rows() && a(piv, col).is_zero()) ++piv;
        if (piv == a.rows()) continue;
        a.swap_rows(piv, r);
        const Scalar inv = a(r, col).inverse();
        for (std::size_t j = col; j < a.cols(); ++j)
            if (!a(r, j).is_zero()) a(r, j) *= inv;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == r || a(i, col).is_zero()) continue;
            const Scalar f = a(i, col);
            for (std::size_t j = col; j < a.cols(); ++j)
                if (!a(r, j).is_zero()) a(i, j) -= f * a(r, j);
        }
        pivots.push_back(col);
        ++r;
    }
    return pivots;
}

// Plain Gauss-Jordan rank over Q(p). Slower than mat_rank; kept as an
// independent cross-check.
inline std::size_t rank_by_elimination(const ExactMatrix& m)
{
    ExactMatrix a = m;
    return rref_in_place(a).size();
}

// Basis of the right null space {v : M v = 0}.
inline std::vector<std::vector<Scalar>> mat_nullspace(const ExactMatrix& m)
{
    ExactMatrix a = m;
    const auto pivots = rref_in_place(a);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<Scalar>> basis;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        std::vector<Scalar> v(m.cols());
        v[f] = Scalar(1);
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a(r, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace explie
