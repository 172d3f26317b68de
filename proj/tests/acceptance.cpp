// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "explie/cli.hpp"
#include "explie/quotient.hpp"
#include "explie/vandermonde.hpp"
#include "explie/virasoro.hpp"
#include "test_support.hpp"

using namespace explie;
using explie::testing::random_point;

namespace {

constexpr std::uint64_t kSeed = 20240611;

// frozen after the first derivation
constexpr std::size_t kToroidalDim1 = 6;
constexpr std::size_t kVirDim1 = 3;
constexpr std::size_t kVirDim2 = 9;

struct Outcome {
    bool pass = true;
    std::string detail;
    void require(bool ok, const std::string& what)
    {
        if (!ok && pass) detail = what;
        pass = pass && ok;
    }
};

// Criteria 1 and 2 share the same 50 matrices.
struct VandermondeRun {
    bool dets = true, ranks = true;
    std::string detail;
};

VandermondeRun vandermonde_run()
{
    VandermondeRun r;
    auto check = [&r](const VSpec& spec, const std::string& tag) {
        const ExactMatrix v = build_matrix(spec);
        if (det_closed_form(spec) != mat_det(v)) {
            r.dets = false;
            r.detail = tag + ": closed form differs from elimination";
        }
        if (mat_rank(v) != static_cast<std::size_t>(spec.size())) {
            r.ranks = false;
            r.detail = tag + ": rank deficient";
        }
    };
    const VSpec triple({{mpq_class(2), 3}}), mixed({{mpq_class(1), 2}, {mpq_class(2), 1}});
    if (det_closed_form(triple) != Scalar(16) || mat_det(build_matrix(triple)) != Scalar(16)) {
        r.dets = false;
        r.detail = "fixed case (2,3) is not 16";
    }
    if (det_closed_form(mixed) != Scalar(1) || mat_det(build_matrix(mixed)) != Scalar(1)) {
        r.dets = false;
        r.detail = "fixed case (1,2)+(2,1) is not 1";
    }
    check(triple, "fixed");
    check(mixed, "fixed");
    std::mt19937_64 rng(kSeed);
    for (int t = 0; t < 50; ++t) check(random_vspec(rng), "trial " + std::to_string(t));
    return r;
}

Outcome criterion3()
{
    Outcome o;
    std::mt19937_64 rng(kSeed + 3);
    for (int t = 0; t < 20; ++t) {
        const auto [spec, d] = random_system(rng, 4, 6);
        o.require(reduce_system(d, spec).equivalent, "system " + std::to_string(t) + " null spaces differ");
    }
    return o;
}

Outcome criterion4()
{
    Outcome o;
    SampleSpec spec;
    spec.samples = 100;
    spec.max_degree = 3;
    spec.box = 3;
    spec.seed = kSeed + 4;
    std::set<std::string> covered;
    for (const auto& an : registry_algebra_names()) {
        const AlgebraSpec a = registry_algebra(an);
        o.require(check_axioms(a, spec).pass(), an + " axioms");
        for (const auto& mn : registry_module_names()) {
            std::optional<ModuleSpec> m;
            try {
                m = registry_module(mn, a);
            } catch (const ParameterError&) {
                continue;  // module not defined over this algebra
            }
            const CompatibilityReport r = check_compatibility(a, *m, spec);
            o.require(r.pass() && r.checked >= 100, an + "/" + mn + " compatibility");
            covered.insert(mn);
        }
    }
    o.require(covered.size() == registry_module_names().size(), "some registry module was never checked");
    return o;
}

Outcome criterion5()
{
    Outcome o;
    const AlgebraSpec a = toroidal_sl2(1);
    const ModuleSpec m = registry_module("loop", a, {{"k", "1"}, {"q", "2"}});
    for (int alpha : {-1, 0, 1}) {
        const TruncatedDim td = dim_truncated(a, m, 1, {alpha}, {1, 2, 3, 4});
        const std::size_t sym = dim_symbolic(a, m, 1, {alpha}).dim;
        const std::string tag = "alpha=" + std::to_string(alpha);
        o.require(td.stabilized, tag + " not stabilized");
        o.require(td.value == sym, tag + " truncated != symbolic");
        o.require(sym == kToroidalDim1, tag + " differs from regression value");
    }
    return o;
}

Outcome criterion6()
{
    Outcome o;
    const AlgebraSpec a = generalized_virasoro();
    const ModuleSpec m = registry_module("vir-intermediate", a, vir_params(Scalar::rational(1, 2), Scalar::rational(1, 3)));
    const std::size_t expect[] = {1, kVirDim1, kVirDim2};
    const long bound[] = {1, 3, 15};
    for (int i = 0; i <= 2; ++i) {
        const std::size_t sym = dim_symbolic(a, m, i, {0}).dim;
        const TruncatedDim td = dim_truncated(a, m, i, {0}, {1, 2, 3});
        const std::size_t direct = vir_weight_dim(a, m, i, 0);
        const std::string tag = "i=" + std::to_string(i);
        o.require(sym == expect[i], tag + " differs from regression value");
        o.require(static_cast<long>(sym) <= bound[i], tag + " exceeds 1*3*...*(2i+1)");
        o.require(td.stabilized && td.value == sym && direct == sym, tag + " routes disagree");
    }
    for (const auto& row : vir_bound_report(a, m, 2)) o.require(row.pass, "bound row " + std::to_string(row.i));
    return o;
}

Outcome criterion7()
{
    Outcome o;
    const AlgebraSpec a = generalized_virasoro();
    const ModuleSpec m = registry_module("vir-intermediate", a);
    for (int i : {1, 2}) {
        const AIndependenceTable t = a_independence_table(a, m, i, {0, 1, 2, -1});
        o.require(t.equal && t.dims.size() == 4, "i=" + std::to_string(i) + " dims differ across a");
    }
    return o;
}

Outcome criterion8()
{
    Outcome o;
    const AlgebraSpec a = generalized_virasoro();
    const ModuleSpec m = registry_module("vir-intermediate", a);
    const auto b = vir_moment_nullvector({0, 3}, 0);
    o.require(b == std::vector<Scalar>{Scalar(-1), Scalar(3), Scalar(-3)}, "explicit coefficients");
    const FormalVector x = vir_moment_combination({3, 0, 1, 2}, {Scalar(1), b[0], b[1], b[2]}, {}, 0);
    o.require(radical_membership(a, m, x, {true, 0}).radical, "explicit vector not radical");

    std::mt19937_64 rng(kSeed + 8);
    for (int t = 0; t < 10; ++t) {
        const int n = t % 3;
        std::vector<int> prefix;
        for (int u = 0; u < n; ++u) prefix.push_back(static_cast<int>(rng() % 5) - 2);
        std::vector<int> nodes;
        while (nodes.size() < static_cast<std::size_t>(2 * n + 4)) {
            const int v = static_cast<int>(rng() % 13) - 6;
            if (std::find(nodes.begin(), nodes.end(), v) == nodes.end()) nodes.push_back(v);
        }
        std::vector<Scalar> null(nodes.size());
        for (const auto& v : mat_nullspace(vir_moment_matrix(nodes, 2 * n + 2))) {
            const Scalar c(static_cast<long>(rng() % 7) + 1);
            for (std::size_t u = 0; u < null.size(); ++u) null[u] += c * v[u];
        }
        const int ak = static_cast<int>(rng() % 5) - 2;
        o.require(radical_membership(a, m, vir_moment_combination(nodes, null, prefix, ak), {true, 0}).radical,
                  "null vector " + std::to_string(t));
        auto bad = null;
        bad[rng() % bad.size()] += Scalar(static_cast<long>(rng() % 3) + 1);
        o.require(!radical_membership(a, m, vir_moment_combination(nodes, bad, prefix, ak), {true, 0}).radical,
                  "non-null vector " + std::to_string(t));
    }
    return o;
}

Outcome criterion9()
{
    Outcome o;
    std::mt19937_64 rng(kSeed + 9);
    const AlgebraSpec vir = generalized_virasoro(), tor = toroidal_sl2(1);
    const std::vector<std::pair<AlgebraSpec, ModuleSpec>> cases = {
        {vir, registry_module("vir-intermediate", vir)},
        {tor, registry_module("loop-q2", tor)},
    };
    for (const auto& [a, m] : cases) {
        const SymbolicReducer red(a, m);
        for (int d = 1; d <= 2; ++d)
            for (const Shape& lower : enumerate_shapes(a, d, true))
                for (const Shape& raise : enumerate_shapes(a, d, false))
                    for (int j = 0; j < static_cast<int>(m.dim()); ++j) {
                        const std::vector<int> alpha = random_point(rng, 1, 3);
                        const SymbolicImage img = red.reduce(lower, raise, j, alpha);
                        for (int t = 0; t < 20; ++t) {
                            const auto beta = random_point(rng, img.beta_vars, 3);
                            const auto gamma = random_point(rng, img.gamma_vars, 3);
                            std::vector<int> point = beta;
                            point.insert(point.end(), gamma.begin(), gamma.end());
                            const FormalVector x{{lowering_word(a, m, lower, j, alpha, beta), Scalar(1)}};
                            const VectorInV got = apply_raising_word(a, m, raising_word(a, raise, gamma), x);
                            std::vector<int> weight = alpha;
                            for (int g : gamma) weight[0] += g;
                            VectorInV want;
                            for (const auto& [l, h] : img.h) v_add(want, VKey{l, weight}, h.evaluate(point));
                            o.require(got == want, a.name() + " " + to_string(lower, true) + " / " + to_string(raise, false));
                        }
                    }
    }
    return o;
}

Outcome criterion10()
{
    Outcome o;
    const std::vector<std::vector<std::string>> cmds = {
        {"vandermonde", "verify", "--seed", "7"},
        {"algebra", "check", "--algebra", "quantum-torus", "--seed", "7"},
        {"module", "check", "--algebra", "toroidal-sl2", "--module", "loop-q2", "--seed", "7"},
        {"dims", "--algebra", "toroidal-sl2", "--module", "loop-q2", "--degree", "1", "--weight", "0", "--boxes", "1,2,3,4"},
        {"virasoro", "bounds", "--imax", "2"},
        {"virasoro", "cor32", "--degree", "1,2"},
        {"radical", "test", "--seed", "7"},
    };
    for (const auto& c : cmds)
        for (const char* fmt : {"json", "csv"}) {
            auto args = c;
            args.push_back("--format");
            args.push_back(fmt);
            std::ostringstream o1, e1, o2, e2;
            const int c1 = cli::run_command(args, o1, e1), c2 = cli::run_command(args, o2, e2);
            const std::string tag = c[0] + (c.size() > 1 && c[1].rfind("--", 0) != 0 ? " " + c[1] : "") + " " + fmt;
            o.require(c1 == 0 && c2 == 0, tag + " did not pass");
            o.require(o1.str() == o2.str() && !o1.str().empty(), tag + " output differs between runs");
        }
    return o;
}

} // namespace

int main()
{
    using clock = std::chrono::steady_clock;
    bool all = true;
    auto report = [&all](int id, const std::string& name, const Outcome& o, double seconds, double limit) {
        const bool ok = o.pass && seconds < limit;
        all = all && ok;
        std::string why = o.detail;
        if (o.pass && !ok) why = "over time limit";
        std::printf("%s %2d %-28s %8.2fs (limit %.0fs)%s%s\n", ok ? "PASS" : "FAIL", id, name.c_str(), seconds, limit,
                    why.empty() ? "" : "  ", why.c_str());
        std::fflush(stdout);
    };
    auto timed = [](const std::function<Outcome()>& f, Outcome& out) {
        const auto t0 = clock::now();
        try {
            out = f();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string("exception: ") + e.what();
        }
        return std::chrono::duration<double>(clock::now() - t0).count();
    };

    {
        const auto t0 = clock::now();
        VandermondeRun v;
        Outcome c1, c2;
        try {
            v = vandermonde_run();
        } catch (const std::exception& e) {
            v.dets = v.ranks = false;
            v.detail = e.what();
        }
        const double s = std::chrono::duration<double>(clock::now() - t0).count();
        c1.pass = v.dets;
        c2.pass = v.ranks;
        if (!v.dets) c1.detail = v.detail;
        if (!v.ranks) c2.detail = v.detail;
        report(1, "extended Vandermonde", c1, s, 5);
        report(2, "nonsingularity", c2, s, 5);
    }
    Outcome o;
    double s;
    s = timed(criterion3, o);
    report(3, "system reduction", o, s, 5);
    s = timed(criterion4, o);
    report(4, "Lie and module axioms", o, s, 60);
    s = timed(criterion5, o);
    report(5, "toroidal finiteness", o, s, 300);
    s = timed(criterion6, o);
    report(6, "Virasoro bounds", o, s, 300);
    s = timed(criterion7, o);
    report(7, "independence of a", o, s, 300);
    s = timed(criterion8, o);
    report(8, "moment vectors", o, s, 120);
    s = timed(criterion9, o);
    report(9, "symbolic/concrete agreement", o, s, 300);
    s = timed(criterion10, o);
    report(10, "CLI determinism", o, s, 600);
    return all ? 0 : 1;
}
