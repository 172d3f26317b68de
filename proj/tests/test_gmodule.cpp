#include <gtest/gtest.h>

#include <random>

#include "explie/gmodule.hpp"
#include "explie/text.hpp"

using namespace explie;

namespace {

Generator gen(int i, std::vector<int> alpha, int k = 0) { return Generator{{i, std::move(alpha)}, k}; }
VectorInV basis_vec(int j, std::vector<int> beta = {}) { return {{VKey{j, std::move(beta)}, Scalar(1)}}; }

struct Pair {
    std::string algebra, module;
};

const std::vector<Pair> kPairs = {
    {"toroidal-sl2", "loop"},       {"toroidal-sl2", "loop-q2"},      {"toroidal-sl2", "tensor-fd"},
    {"toroidal-abelian", "loop"},   {"toroidal-abelian", "tensor-fd"}, {"virasoro-like", "vl-shift"},
    {"quantum-torus", "qt-graded"}, {"quantum-torus", "qt-fd"},        {"generalized-virasoro", "vir-intermediate"},
};

} // namespace

TEST(Act, VirasoroLikeShift)
{
    const AlgebraSpec a = virasoro_like();
    const ModuleSpec m = registry_module("vl-shift", a);
    EXPECT_EQ(act(m, gen(0, {1}), basis_vec(0, {0})), (VectorInV{{VKey{0, {1}}, Scalar(2)}}));
}

TEST(Act, QuantumTorusFinite)
{
    const AlgebraSpec a = registry_algebra("quantum-torus");
    const ModuleSpec m = registry_module("qt-fd", a);
    EXPECT_FALSE(m.graded());
    EXPECT_TRUE(act(m, gen(0, {0}), basis_vec(0)).empty());
    EXPECT_EQ(act(m, gen(0, {3}), basis_vec(0)), (VectorInV{{VKey{0, {}}, Scalar(3)}}));
}

TEST(Act, QuantumTorusGraded)
{
    const AlgebraSpec a = registry_algebra("quantum-torus");
    const ModuleSpec m = registry_module("qt-graded", a);
    EXPECT_EQ(act(m, gen(0, {1}), basis_vec(0, {0})), (VectorInV{{VKey{0, {1}}, Scalar(2)}}));
}

TEST(Act, VirasoroIntermediate)
{
    const AlgebraSpec a = generalized_virasoro();
    const ModuleSpec m = registry_module("vir-intermediate", a);
    // d_p v_{2p} = (2p + 1/2 + p/3) v_{3p}
    const VectorInV r = act(m, gen(0, {1}), basis_vec(0, {2}));
    EXPECT_EQ(r, (VectorInV{{VKey{0, {3}}, Scalar::rational(1, 2) + Scalar::rational(7, 3) * Scalar::p()}}));

    const ModuleSpec zero = registry_module("vir-intermediate", a, {{"lambda", "0"}, {"mu", "0"}});
    EXPECT_EQ(act(zero, gen(0, {4}), basis_vec(0, {2})), (VectorInV{{VKey{0, {6}}, Scalar(2) * Scalar::p()}}));
    EXPECT_TRUE(act(zero, gen(0, {4}), basis_vec(0, {0})).empty());
}

TEST(Act, NaturalSl2)
{
    const AlgebraSpec a = toroidal_sl2(1);
    const ModuleSpec m = registry_module("tensor-fd", a);
    ASSERT_EQ(m.dim(), 2u);
    EXPECT_EQ(act(m, gen(0, {1}, 0), basis_vec(1)), (VectorInV{{VKey{0, {}}, Scalar(2)}}));
    EXPECT_EQ(act(m, gen(0, {0}, 2), basis_vec(1)), (VectorInV{{VKey{1, {}}, Scalar(-1)}}));
    EXPECT_TRUE(act(m, gen(0, {0}, 0), basis_vec(0)).empty());

    const ModuleSpec two = registry_module("tensor-fd", a, {{"q", "2;3"}});
    EXPECT_EQ(two.dim(), 4u);
    // h(1) on u00 = (2 + 3) u00
    EXPECT_EQ(act(two, gen(0, {1}, 2), basis_vec(0)), (VectorInV{{VKey{0, {}}, Scalar(5)}}));
}

TEST(Act, ZeroAndErrors)
{
    const AlgebraSpec a = generalized_virasoro();
    const ModuleSpec m = registry_module("vir-intermediate", a);
    EXPECT_TRUE(act(m, gen(0, {1}), VectorInV{}).empty());
    EXPECT_THROW(act(m, gen(1, {1}), basis_vec(0, {0})), DegreeError);
    EXPECT_THROW(registry_module("vl-shift", a), ParameterError);
    EXPECT_THROW(registry_module("nope", a), UnknownNameError);
    EXPECT_THROW(registry_module("loop", toroidal_sl2(1), {{"k", "5"}}), ParameterError);
    EXPECT_THROW(registry_module("loop", toroidal_sl2(1), {{"q", "0"}}), InvalidBaseError);
}

TEST(Act, GradingAndFiniteKind)
{
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> c(-3, 3);
    for (const auto& [an, mn] : kPairs) {
        const AlgebraSpec a = registry_algebra(an);
        const ModuleSpec m = registry_module(mn, a);
        for (int t = 0; t < 30; ++t) {
            const Generator g = gen(0, {c(rng)}, static_cast<int>(rng() % a.family_count(0)));
            const int j = static_cast<int>(rng() % m.dim());
            const std::vector<int> beta = m.graded() ? std::vector<int>{c(rng)} : std::vector<int>{};
            for (const auto& [key, coef] : act(m, g, basis_vec(j, beta))) {
                if (m.graded())
                    EXPECT_EQ(key.beta, add_weights(g.degree.alpha, beta)) << mn;
                else
                    EXPECT_TRUE(key.beta.empty()) << mn;
                EXPECT_FALSE(coef.is_zero());
            }
        }
    }
}

TEST(Compatibility, RegistryPasses)
{
    SampleSpec spec;
    spec.samples = 100;
    spec.seed = 4;
    for (const auto& [an, mn] : kPairs) {
        const AlgebraSpec a = registry_algebra(an);
        const CompatibilityReport r = check_compatibility(a, registry_module(mn, a), spec);
        EXPECT_TRUE(r.pass()) << an << "/" << mn;
        EXPECT_EQ(r.checked, 100u);
    }
}

TEST(Compatibility, HigherRank)
{
    SampleSpec spec;
    spec.samples = 60;
    const AlgebraSpec a = registry_algebra("toroidal-sl2", {{"n", "2"}});
    EXPECT_TRUE(check_compatibility(a, registry_module("loop", a, {{"q", "2,3;5,1/2"}}), spec).pass());
    const AlgebraSpec q = registry_algebra("quantum-torus", {{"n", "2"}, {"q", "2,3"}});
    EXPECT_TRUE(check_compatibility(q, registry_module("qt-fd", q, {{"f", "n1 + 2*n2"}}), spec).pass());
}

TEST(Compatibility, PerturbedVirasoroFails)
{
    const AlgebraSpec a = generalized_virasoro();
    // a linear change of h is again an intermediate-series module; a square is not
    const ExpPoly sq = ExpPoly::variable(2, 0) * ExpPoly::variable(2, 0);
    const ModuleSpec bad = perturb_action(a, registry_module("vir-intermediate", a), 0, 0, 0, sq);
    SampleSpec spec;
    spec.samples = 50;
    const CompatibilityReport r = check_compatibility(a, bad, spec);
    ASSERT_FALSE(r.pass());
    EXPECT_FALSE(r.violations.front().residual.empty());
}

// The degree-0 part of the quantum torus is not abelian, but the commutator
// side and the action sides cancel exactly for the graded module.
TEST(Compatibility, QuantumTorusCommutator)
{
    const AlgebraSpec a = registry_algebra("quantum-torus");
    const ModuleSpec m = registry_module("qt-graded", a);
    const Generator g = gen(0, {1}), h = gen(0, {2});
    const VectorInV v = basis_vec(0, {-1});
    const VectorInV lhs = v_sum(act(m, g, act(m, h, v)), act(m, h, act(m, g, v)), Scalar(-1));
    EXPECT_EQ(lhs, act(m, bracket(a, g, h), v));
}

TEST(DefinitionFile, MatchesRegistry)
{
    const AlgebraSpec a = virasoro_like();
    const ModuleSpec f = parse_module_definition("kind graded\nbasis v\nact L v -> v : 2^a1\n", a);
    const ModuleSpec r = registry_module("vl-shift", a);
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> c(-4, 4);
    for (int t = 0; t < 30; ++t) {
        const Generator g = gen(0, {c(rng)});
        const VectorInV v = basis_vec(0, {c(rng)});
        EXPECT_EQ(act(f, g, v), act(r, g, v));
    }
}

TEST(DefinitionFile, FiniteSl2)
{
    const AlgebraSpec a = toroidal_sl2(1);
    const std::string text = "kind finite\nbasis u0 u1\n"
                             "act e u1 -> u0 : 2^a1\nact f u0 -> u1 : 2^a1\n"
                             "act h u0 -> u0 : 2^a1\nact h u1 -> u1 : -2^a1\n";
    const ModuleSpec f = parse_module_definition(text, a);
    const ModuleSpec r = registry_module("tensor-fd", a);
    for (int k = 0; k < 3; ++k)
        for (int j = 0; j < 2; ++j)
            for (int x : {-2, 0, 3}) EXPECT_EQ(act(f, gen(0, {x}, k), basis_vec(j)), act(r, gen(0, {x}, k), basis_vec(j)));
    SampleSpec spec;
    spec.samples = 40;
    EXPECT_TRUE(check_compatibility(a, f, spec).pass());
}

TEST(DefinitionFile, Errors)
{
    const AlgebraSpec a = virasoro_like();
    EXPECT_THROW(parse_module_definition("kind graded\nbasis v\nact M v -> v : 1\n", a), UnknownNameError);
    EXPECT_THROW(parse_module_definition("kind graded\nbasis v\nact L w -> v : 1\n", a), UnknownNameError);
    EXPECT_THROW(parse_module_definition("kind sideways\nbasis v\n", a), ParseError);
    EXPECT_THROW(parse_module_definition("kind finite\nbasis v\nact L v -> v : b1\n", a), ParseError);
}
