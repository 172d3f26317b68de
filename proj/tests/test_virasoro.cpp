#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "explie/virasoro.hpp"

using namespace explie;

namespace {

const Scalar kLambda = Scalar::rational(1, 2);
const Scalar kMu = Scalar::rational(1, 3);

struct Vir {
    AlgebraSpec a = generalized_virasoro();
    ModuleSpec m = registry_module("vir-intermediate", a);
};

std::vector<int> distinct_nodes(std::mt19937_64& rng, std::size_t count, int bound)
{
    std::vector<int> nodes;
    while (nodes.size() < count) {
        const int x = static_cast<int>(rng() % static_cast<unsigned>(2 * bound + 1)) - bound;
        if (std::find(nodes.begin(), nodes.end(), x) == nodes.end()) nodes.push_back(x);
    }
    return nodes;
}

std::vector<Scalar> random_null_combination(std::mt19937_64& rng, const ExactMatrix& mom)
{
    std::vector<Scalar> b(mom.cols());
    for (const auto& v : mat_nullspace(mom)) {
        const Scalar c(static_cast<long>(rng() % 9) - 4);
        for (std::size_t u = 0; u < b.size(); ++u) b[u] += c * v[u];
    }
    return b;
}

} // namespace

TEST(MElem, Value)
{
    EXPECT_EQ((MElem{-1, 2}).value(), Scalar(-1) + Scalar(2) * Scalar::p());
    EXPECT_LT((MElem{0, 5}), (MElem{1, 0}));
    EXPECT_EQ(vir_d({1, -2}), (Generator{{1, {-2}}, 0}));
}

TEST(OddDoubleFactorial, Values)
{
    EXPECT_EQ(odd_double_factorial(0), 1);
    EXPECT_EQ(odd_double_factorial(1), 3);
    EXPECT_EQ(odd_double_factorial(2), 15);
    EXPECT_EQ(odd_double_factorial(3), 105);
}

TEST(ReducedSpanSet, SizeAndWords)
{
    for (int n = 0; n <= 4; ++n) EXPECT_EQ(mpz_class(static_cast<unsigned long>(ReducedSpanSet::build(n).size())), odd_double_factorial(n));
    const ReducedSpanSet s = ReducedSpanSet::build(2);
    for (const auto& al : s.alphas) {
        EXPECT_LE(al[0], 2);
        EXPECT_LE(al[1], 4);
    }
    // letters[0] carries alpha_n; base absorbs the rest of a
    const std::size_t r = 7;  // alpha_1 = 1, alpha_2 = 2
    ASSERT_EQ(s.alphas[r], (std::vector<int>{1, 2}));
    const PBWWord w = s.word(r, 5);
    ASSERT_EQ(w.letters.size(), 2u);
    EXPECT_EQ(w.letters[0].arg, std::vector<int>{2});
    EXPECT_EQ(w.letters[1].arg, std::vector<int>{1});
    EXPECT_EQ(w.letters[0].i, -1);
    EXPECT_EQ(w.base_arg, std::vector<int>{2});
    EXPECT_THROW(ReducedSpanSet::build(-1), DegreeError);
}

TEST(WeightDim, Regression)
{
    EXPECT_EQ(vir_weight_dim(0, 0, kLambda, kMu), 1u);
    EXPECT_EQ(vir_weight_dim(1, 0, kLambda, kMu), 3u);
    EXPECT_EQ(vir_weight_dim(2, 0, kLambda, kMu), 9u);
    EXPECT_THROW(vir_weight_dim(-1, 0, kLambda, kMu), DegreeError);
}

TEST(WeightDim, MatchesGeneralRoutes)
{
    const Vir v;
    for (int i = 1; i <= 2; ++i) {
        const std::size_t d = vir_weight_dim(v.a, v.m, i, 1);
        EXPECT_EQ(d, dim_symbolic(v.a, v.m, i, {1}).dim);
        EXPECT_EQ(d, dim_truncated(v.a, v.m, i, {1}, {1, 2}).value);
    }
}

TEST(WeightDim, ZeroActionGivesZero)
{
    const AlgebraSpec a = generalized_virasoro();
    const ModuleSpec zero("zero", a, ModuleKind::graded, {"v"}, [](int, int) { return std::vector<ActionTerm>{}; });
    EXPECT_EQ(vir_weight_dim(a, zero, 1, 0), 0u);
    EXPECT_EQ(vir_weight_dim(a, zero, 0, 0), 1u);
}

TEST(WeightDim, DegenerateParametersShrink)
{
    const std::size_t generic = vir_weight_dim(1, 0, kLambda, kMu);
    for (const auto& [l, mu] : {std::pair{Scalar(0), Scalar(0)}, std::pair{Scalar(0), Scalar(1)}, std::pair{Scalar(1), Scalar(0)}})
        EXPECT_LE(vir_weight_dim(1, 0, l, mu), generic);
}

TEST(BoundReport, Rows)
{
    const auto rows = vir_bound_report(2, kLambda, kMu);
    ASSERT_EQ(rows.size(), 3u);
    const std::size_t dims[] = {1, 3, 9};
    const long bounds[] = {1, 3, 15};
    for (int i = 0; i < 3; ++i) {
        EXPECT_EQ(rows[i].i, i);
        EXPECT_EQ(rows[i].dim, dims[i]);
        EXPECT_EQ(rows[i].bound, bounds[i]);
        EXPECT_TRUE(rows[i].pass);
    }
    EXPECT_THROW(vir_bound_report(4, kLambda, kMu), ParameterError);
    EXPECT_THROW(vir_bound_report(-1, kLambda, kMu), ParameterError);
}

TEST(MomentNullvector, Examples)
{
    EXPECT_EQ(vir_moment_nullvector({0, 3}, 0), (std::vector<Scalar>{Scalar(-1), Scalar(3), Scalar(-3)}));
    EXPECT_EQ(vir_moment_nullvector({0, 0}, 0), (std::vector<Scalar>{Scalar(-1), Scalar(0), Scalar(0)}));
    EXPECT_EQ(vir_moment_nullvector({0, 1}, 0), (std::vector<Scalar>{Scalar(0), Scalar(-1), Scalar(0)}));
    EXPECT_THROW(vir_moment_nullvector({1, 0}, 0), ParameterError);
}

TEST(MomentNullvector, SolvesMoments)
{
    for (int n = 0; n <= 2; ++n)
        for (int bp : {-3, 7}) {
            const auto b = vir_moment_nullvector({0, bp}, n);
            ASSERT_EQ(b.size(), static_cast<std::size_t>(2 * n + 3));
            for (long k = 0; k <= 2 * n + 2; ++k) {
                Scalar s = (Scalar(bp) * Scalar::p()).pow(k);
                for (std::size_t t = 0; t < b.size(); ++t) s += b[t] * (Scalar(static_cast<long>(t)) * Scalar::p()).pow(k);
                EXPECT_TRUE(s.is_zero());
            }
        }
}

// d_{-1+beta'}(word) v minus its moment rewriting is radical.
TEST(MomentRewrite, RewritingIsRadical)
{
    const Vir v;
    std::mt19937_64 rng(40);
    for (int n = 0; n <= 2; ++n)
        for (int t = 0; t < 2; ++t) {
            int bp = 0;
            while (bp >= 0 && bp <= 2 * n + 2) bp = static_cast<int>(rng() % 17) - 8;
            std::vector<int> prefix;
            for (int u = 1; u <= n; ++u) prefix.push_back(static_cast<int>(rng() % static_cast<unsigned>(2 * u + 1)));
            const int a = static_cast<int>(rng() % 5) - 2;
            const FormalVector x = vir_rewrite_vector({0, bp}, prefix, a);
            EXPECT_TRUE(radical_membership(v.a, v.m, x, {true, 0}).radical) << "n=" << n << " beta'=" << bp;
        }
}

TEST(MomentNull, MomentNullCombinations)
{
    const Vir v;
    std::mt19937_64 rng(41);
    for (int n = 0; n <= 2; ++n) {
        std::vector<int> prefix;
        for (int u = 0; u < n; ++u) prefix.push_back(static_cast<int>(rng() % 5) - 2);
        const auto nodes = distinct_nodes(rng, static_cast<std::size_t>(2 * n + 4), 6);
        const auto b = random_null_combination(rng, vir_moment_matrix(nodes, 2 * n + 2));
        EXPECT_TRUE(radical_membership(v.a, v.m, vir_moment_combination(nodes, b, prefix, 1), {true, 0}).radical);

        auto bad = b;
        bad[0] += Scalar(1);
        EXPECT_FALSE(radical_membership(v.a, v.m, vir_moment_combination(nodes, bad, prefix, 1), {true, 0}).radical);
    }
}

// Leading degree-0 generator: moments up to 2n+1 already suffice.
TEST(MomentNull, ShiftedCombinations)
{
    const Vir v;
    std::mt19937_64 rng(42);
    for (int n = 0; n <= 2; ++n) {
        std::vector<int> prefix;
        for (int u = 0; u < n; ++u) prefix.push_back(static_cast<int>(rng() % 5) - 2);
        const auto nodes = distinct_nodes(rng, static_cast<std::size_t>(2 * n + 3), 6);
        const auto b = random_null_combination(rng, vir_moment_matrix(nodes, 2 * n + 1));
        const FormalVector x = vir_shift_combination(v.a, v.m, nodes, b, prefix, 1);
        EXPECT_TRUE(radical_membership(v.a, v.m, x, {true, 0}).radical) << n;
    }
}

TEST(AIndependence, EqualDims)
{
    const AIndependenceTable t1 = a_independence_table(1, {0, 1, 2, -1}, kLambda, kMu);
    EXPECT_TRUE(t1.equal);
    ASSERT_EQ(t1.dims.size(), 4u);
    EXPECT_EQ(t1.dims[2], (std::pair<int, std::size_t>{2, 3}));

    EXPECT_TRUE(a_independence_table(1, {5}, kLambda, kMu).equal);
    EXPECT_TRUE(a_independence_table(2, {0, 1}, kLambda, kMu).equal);
    EXPECT_THROW(a_independence_table(0, {0}, kLambda, kMu), DegreeError);
    EXPECT_THROW(a_independence_table(1, {}, kLambda, kMu), ParameterError);
}
