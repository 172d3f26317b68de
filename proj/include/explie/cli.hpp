#pragma once

// Command-line driver. run_command takes the arguments after the program
// name and returns the exit code: 0 all checks pass, 1 a check failed,
// 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "explie/algebra.hpp"
#include "explie/errors.hpp"
#include "explie/gmodule.hpp"
#include "explie/quotient.hpp"
#include "explie/text.hpp"
#include "explie/vandermonde.hpp"
#include "explie/virasoro.hpp"

namespace explie::cli {

inline constexpr const char* kSchemaVersion = "1.0";

using Json = nlohmann::ordered_json;

struct UsageError : Error {
    using Error::Error;
};

struct Options {
    std::string config;
    int depth = 32;
    std::string boxes = "1,2,3";
    std::uint64_t seed = 1;
    std::string format = "json";
    std::string out;

    std::optional<int> trials;
    int systems = 20;

    std::string algebra, algebra_file;
    std::vector<std::string> algebra_params;
    std::string module, module_file;
    std::vector<std::string> module_params;
    std::size_t samples = 200;
    int max_degree = 3;
    int box = 3;

    std::string degree = "1";
    std::string weight;
    bool no_symbolic = false;

    int imax = 2;
    int imax_cap = 3;
    std::string lambda = "1/2", mu = "1/3";
    int a = 0;
    std::string a_list = "0,1,2,-1";

    int max_level = 2;
    int beta_prime = 3;
};

// A report: JSON document plus the CSV projection of its main table.
struct Report {
    Json doc;
    std::vector<std::string> csv_header;
    std::vector<std::vector<std::string>> csv_rows;
    bool pass = true;
};

namespace detail {

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read `" + path + "`");
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

inline std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

inline std::string scalar_text(const Json& v)
{
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number() || v.is_boolean()) return v.dump();
    throw UsageError("config values must be strings, numbers, booleans or arrays of those");
}

// key -> values, in file order. Arrays of a list option become one
// comma-joined value; for repeatable options each element is one value.
inline std::vector<std::pair<std::string, std::string>> read_config(const std::string& path)
{
    const std::string text = read_file(path);
    std::vector<std::pair<std::string, std::string>> out;
    auto key_of = [](std::string k) {
        k = trim(k);
        while (!k.empty() && k.front() == '-') k.erase(k.begin());
        return k;
    };
    const std::string head = trim(text);
    if (!head.empty() && head.front() == '{') {
        Json j;
        try {
            j = Json::parse(text);
        } catch (const Json::parse_error& e) {
            throw UsageError(std::string("config is not valid JSON: ") + e.what());
        }
        for (const auto& [k, v] : j.items()) {
            const std::string key = key_of(k);
            if (v.is_array()) {
                const bool repeat = key == "algebra-param" || key == "module-param";
                std::string joined;
                for (const auto& x : v) {
                    if (repeat)
                        out.emplace_back(key, scalar_text(x));
                    else
                        joined += (joined.empty() ? "" : ",") + scalar_text(x);
                }
                if (!repeat) out.emplace_back(key, joined);
            } else {
                out.emplace_back(key, scalar_text(v));
            }
        }
        return out;
    }
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw UsageError("config line " + std::to_string(lineno) + " is not key=value");
        out.emplace_back(key_of(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return out;
}

inline bool given(const std::vector<std::string>& args, const std::string& key)
{
    const std::string flag = "--" + key;
    for (const auto& a : args)
        if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    return false;
}

// Config entries become trailing flags unless the same flag was given.
inline std::vector<std::string> merge_config(std::vector<std::string> args, const std::vector<std::string>& known)
{
    std::string path;
    for (std::size_t t = 0; t < args.size(); ++t) {
        if (args[t] == "--config" && t + 1 < args.size()) path = args[t + 1];
        if (args[t].rfind("--config=", 0) == 0) path = args[t].substr(9);
    }
    if (path.empty()) return args;
    const auto explicit_args = args;
    for (const auto& [key, value] : read_config(path)) {
        if (key == "config") throw UsageError("config files cannot include other config files");
        if (std::find(known.begin(), known.end(), key) == known.end()) throw UsageError("unknown config key `" + key + "`");
        if (given(explicit_args, key)) continue;
        if (key == "no-symbolic") {
            if (value == "true" || value == "1") args.push_back("--no-symbolic");
            continue;
        }
        args.push_back("--" + key);
        args.push_back(value);
    }
    return args;
}

inline Params parse_params(const std::vector<std::string>& items)
{
    Params p;
    for (const auto& it : items) {
        const auto eq = it.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("parameter `" + it + "` is not key=value");
        p[it.substr(0, eq)] = it.substr(eq + 1);
    }
    return p;
}

inline std::vector<int> int_list(const std::string& what, const std::string& text)
{
    try {
        return parse_int_list(text);
    } catch (const Error& e) {
        throw UsageError(what + ": " + e.what());
    }
}

inline AlgebraSpec load_algebra(const Options& o)
{
    if (!o.algebra_file.empty()) {
        if (!o.algebra.empty()) throw UsageError("give either --algebra or --algebra-file");
        return parse_algebra_definition(read_file(o.algebra_file), o.algebra_file).with_depth(o.depth);
    }
    if (o.algebra.empty()) throw UsageError("--algebra or --algebra-file is required");
    return registry_algebra(o.algebra, parse_params(o.algebra_params)).with_depth(o.depth);
}

inline ModuleSpec load_module(const Options& o, const AlgebraSpec& a)
{
    if (!o.module_file.empty()) {
        if (!o.module.empty()) throw UsageError("give either --module or --module-file");
        return parse_module_definition(read_file(o.module_file), a, o.module_file);
    }
    std::string name = o.module;
    if (name.empty()) name = default_module_for(a.name());
    if (name.empty()) throw UsageError("--module or --module-file is required for algebra `" + a.name() + "`");
    return registry_module(name, a, parse_params(o.module_params));
}

inline Json params_json(const std::vector<std::string>& items)
{
    Json j = Json::object();
    for (const auto& [k, v] : parse_params(items)) j[k] = v;
    return j;
}

inline Json int_array(const std::vector<int>& v)
{
    Json j = Json::array();
    for (int x : v) j.push_back(x);
    return j;
}

inline std::string join(const std::vector<int>& v, const char* sep = " ")
{
    std::string s;
    for (std::size_t t = 0; t < v.size(); ++t) s += (t ? sep : "") + std::to_string(v[t]);
    return s;
}

inline std::string bool_text(bool b) { return b ? "true" : "false"; }

inline Json blocks_json(const VSpec& spec)
{
    Json j = Json::array();
    for (const auto& b : spec.blocks()) j.push_back(Json{{"base", b.base.get_str()}, {"multiplicity", b.multiplicity}});
    return j;
}

inline std::string blocks_text(const VSpec& spec)
{
    std::string s;
    for (const auto& b : spec.blocks()) s += (s.empty() ? "" : " ") + b.base.get_str() + "^" + std::to_string(b.multiplicity);
    return s;
}

inline Json header(const std::string& command, const Options& o)
{
    return Json{{"schema_version", kSchemaVersion}, {"command", command}, {"seed", o.seed}};
}

inline std::size_t samples_or(const std::optional<int>& v, int fallback)
{
    const int n = v.value_or(fallback);
    if (n < 0) throw UsageError("--trials must be nonnegative");
    return static_cast<std::size_t>(n);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Subcommands

inline Report vandermonde_verify(const Options& o)
{
    Report r;
    r.doc = detail::header("vandermonde verify", o);
    std::mt19937_64 rng(o.seed);
    const std::size_t trials = detail::samples_or(o.trials, 50);
    if (o.systems < 0) throw UsageError("--systems must be nonnegative");
    Json records = Json::array();
    r.csv_header = {"schema_version", "trial", "blocks", "size", "closed_form", "elimination", "match", "rank", "full_rank"};
    for (std::size_t t = 0; t < trials; ++t) {
        const VSpec spec = random_vspec(rng);
        const ExactMatrix v = build_matrix(spec);
        const Scalar closed = det_closed_form(spec), elim = mat_det(v);
        const std::size_t rank = mat_rank(v);
        const bool match = closed == elim, full = rank == static_cast<std::size_t>(spec.size());
        r.pass = r.pass && match && full;
        records.push_back(Json{{"trial", t},
                               {"blocks", detail::blocks_json(spec)},
                               {"size", spec.size()},
                               {"closed_form", closed.to_string()},
                               {"elimination", elim.to_string()},
                               {"match", match},
                               {"rank", rank},
                               {"full_rank", full}});
        r.csv_rows.push_back({kSchemaVersion, std::to_string(t), detail::blocks_text(spec), std::to_string(spec.size()), closed.to_string(),
                              elim.to_string(), detail::bool_text(match), std::to_string(rank), detail::bool_text(full)});
    }
    Json systems = Json::array();
    for (int t = 0; t < o.systems; ++t) {
        const auto [spec, d] = random_system(rng);
        const ReducedSystem rs = reduce_system(d, spec);
        r.pass = r.pass && rs.equivalent;
        systems.push_back(Json{{"trial", t},
                               {"blocks", detail::blocks_json(spec)},
                               {"unknowns", d.rows()},
                               {"finite_nullity", mat_nullspace(rs.finite).size()},
                               {"grid_nullity", mat_nullspace(rs.grid).size()},
                               {"transform_verified", rs.transform_verified},
                               {"equivalent", rs.equivalent}});
    }
    r.doc["trials"] = trials;
    r.doc["records"] = records;
    r.doc["systems"] = systems;
    r.doc["pass"] = r.pass;
    return r;
}

inline Report algebra_check(const Options& o)
{
    Report r;
    const AlgebraSpec a = detail::load_algebra(o);
    r.doc = detail::header("algebra check", o);
    SampleSpec spec{o.max_degree, o.box, o.samples, o.seed};
    const AxiomReport rep = check_axioms(a, spec);
    r.pass = rep.pass();
    Json viol = Json::array();
    for (const auto& v : rep.violations) {
        Json w = Json::array();
        for (const auto& g : v.witness) w.push_back(to_string(g));
        viol.push_back(Json{{"kind", v.kind}, {"witness", w}, {"residual", v.residual}});
    }
    r.doc["algebra"] = a.name();
    r.doc["params"] = detail::params_json(o.algebra_params);
    r.doc["samples"] = o.samples;
    r.doc["max_degree"] = o.max_degree;
    r.doc["box"] = o.box;
    r.doc["pairs_checked"] = rep.pairs_checked;
    r.doc["triples_checked"] = rep.triples_checked;
    r.doc["violations"] = viol;
    r.doc["pass"] = r.pass;
    r.csv_header = {"schema_version", "algebra", "pairs_checked", "triples_checked", "violations", "pass"};
    r.csv_rows.push_back({kSchemaVersion, a.name(), std::to_string(rep.pairs_checked), std::to_string(rep.triples_checked),
                          std::to_string(rep.violations.size()), detail::bool_text(r.pass)});
    return r;
}

inline Report module_check(const Options& o)
{
    Report r;
    const AlgebraSpec a = detail::load_algebra(o);
    const ModuleSpec m = detail::load_module(o, a);
    r.doc = detail::header("module check", o);
    SampleSpec spec{o.max_degree, o.box, o.samples, o.seed};
    const CompatibilityReport rep = check_compatibility(a, m, spec);
    r.pass = rep.pass();
    Json viol = Json::array();
    for (const auto& v : rep.violations)
        viol.push_back(Json{{"g", to_string(v.g)},
                            {"h", to_string(v.h)},
                            {"basis", v.v.j},
                            {"weight", detail::int_array(v.v.beta)},
                            {"residual", v.residual}});
    r.doc["algebra"] = a.name();
    r.doc["module"] = m.name();
    r.doc["kind"] = m.graded() ? "graded" : "finite";
    r.doc["dim"] = m.dim();
    r.doc["params"] = detail::params_json(o.module_params);
    r.doc["samples"] = o.samples;
    r.doc["checked"] = rep.checked;
    r.doc["violations"] = viol;
    r.doc["pass"] = r.pass;
    r.csv_header = {"schema_version", "algebra", "module", "checked", "violations", "pass"};
    r.csv_rows.push_back(
        {kSchemaVersion, a.name(), m.name(), std::to_string(rep.checked), std::to_string(rep.violations.size()), detail::bool_text(r.pass)});
    return r;
}

inline Report dims(const Options& o)
{
    Report r;
    const AlgebraSpec a = detail::load_algebra(o);
    const ModuleSpec m = detail::load_module(o, a);
    const std::vector<int> degrees = detail::int_list("--degree", o.degree);
    const std::vector<int> boxes = detail::int_list("--boxes", o.boxes);
    // weights separated by ';', coordinates by ','
    std::vector<std::vector<int>> weights;
    const std::string wtext = o.weight.empty() ? detail::join(std::vector<int>(a.n(), 0), ",") : o.weight;
    std::size_t pos = 0;
    for (;;) {
        const auto semi = wtext.find(';', pos);
        weights.push_back(detail::int_list("--weight", wtext.substr(pos, semi == std::string::npos ? std::string::npos : semi - pos)));
        if (weights.back().size() != a.n()) throw UsageError("--weight needs " + std::to_string(a.n()) + " coordinates per weight");
        if (semi == std::string::npos) break;
        pos = semi + 1;
    }
    r.doc = detail::header("dims", o);
    r.doc["algebra"] = a.name();
    r.doc["module"] = m.name();
    r.csv_header = {"schema_version", "degree", "weight", "box", "rank", "stabilized", "symbolic_dim", "pass"};
    Json results = Json::array();
    for (int i : degrees)
        for (const auto& w : weights) {
            const TruncatedDim td = dim_truncated(a, m, i, w, boxes);
            std::optional<std::size_t> sym;
            if (!o.no_symbolic) sym = dim_symbolic(a, m, i, w).dim;
            bool ok = true;
            for (std::size_t t = 0; t < td.ranks.size(); ++t) {
                if (t > 0 && td.ranks[t].second < td.ranks[t - 1].second) ok = false;
                if (sym && td.ranks[t].second > *sym) ok = false;
            }
            if (sym && td.stabilized && td.value != *sym) ok = false;
            r.pass = r.pass && ok;
            Json table = Json::array();
            for (const auto& [b, rank] : td.ranks) {
                table.push_back(Json{{"box", b}, {"rank", rank}});
                r.csv_rows.push_back({kSchemaVersion, std::to_string(i), detail::join(w, " "), std::to_string(b), std::to_string(rank),
                                      detail::bool_text(td.stabilized), sym ? std::to_string(*sym) : "", detail::bool_text(ok)});
            }
            Json rec{{"degree", i}, {"weight", detail::int_array(w)}, {"ranks", table}, {"stabilized", td.stabilized},
                     {"truncated_value", td.value}};
            rec["symbolic_dim"] = sym ? Json(*sym) : Json(nullptr);
            rec["agree"] = sym ? Json(td.value == *sym) : Json(nullptr);
            rec["pass"] = ok;
            results.push_back(rec);
        }
    r.doc["boxes"] = detail::int_array(boxes);
    r.doc["results"] = results;
    r.doc["pass"] = r.pass;
    return r;
}

inline std::pair<AlgebraSpec, ModuleSpec> virasoro_pair(const Options& o)
{
    AlgebraSpec a = generalized_virasoro().with_depth(o.depth);
    ModuleSpec m = registry_module("vir-intermediate", a, vir_params(parse_scalar(o.lambda), parse_scalar(o.mu)));
    return {a, m};
}

inline Report virasoro_bounds(const Options& o)
{
    Report r;
    const auto [a, m] = virasoro_pair(o);
    const auto rows = vir_bound_report(a, m, o.imax, o.a, o.imax_cap);
    r.doc = detail::header("virasoro bounds", o);
    r.doc["lambda"] = parse_scalar(o.lambda).to_string();
    r.doc["mu"] = parse_scalar(o.mu).to_string();
    r.doc["a"] = o.a;
    r.doc["imax"] = o.imax;
    r.csv_header = {"schema_version", "i", "dim", "bound", "pass"};
    Json table = Json::array();
    for (const auto& row : rows) {
        r.pass = r.pass && row.pass;
        table.push_back(Json{{"i", row.i}, {"dim", row.dim}, {"bound", row.bound.get_str()}, {"pass", row.pass}});
        r.csv_rows.push_back({kSchemaVersion, std::to_string(row.i), std::to_string(row.dim), row.bound.get_str(), detail::bool_text(row.pass)});
    }
    r.doc["rows"] = table;
    r.doc["pass"] = r.pass;
    return r;
}

inline Report virasoro_cor32(const Options& o)
{
    Report r;
    const auto [a, m] = virasoro_pair(o);
    const std::vector<int> degrees = detail::int_list("--degree", o.degree);
    const std::vector<int> alist = detail::int_list("--a-list", o.a_list);
    r.doc = detail::header("virasoro cor32", o);
    r.doc["lambda"] = parse_scalar(o.lambda).to_string();
    r.doc["mu"] = parse_scalar(o.mu).to_string();
    r.csv_header = {"schema_version", "i", "a", "dim", "equal"};
    Json tables = Json::array();
    for (int i : degrees) {
        const AIndependenceTable t = a_independence_table(a, m, i, alist);
        r.pass = r.pass && t.equal;
        Json d = Json::array();
        for (const auto& [ak, dim] : t.dims) {
            d.push_back(Json{{"a", ak}, {"dim", dim}});
            r.csv_rows.push_back({kSchemaVersion, std::to_string(i), std::to_string(ak), std::to_string(dim), detail::bool_text(t.equal)});
        }
        tables.push_back(Json{{"i", i}, {"dims", d}, {"equal", t.equal}});
    }
    r.doc["tables"] = tables;
    r.doc["pass"] = r.pass;
    return r;
}

inline Report radical_test(const Options& o)
{
    Report r;
    const auto [a, m] = virasoro_pair(o);
    if (o.max_level < 0 || o.max_level > 2) throw UsageError("--max-level must be between 0 and 2");
    std::mt19937_64 rng(o.seed);
    const std::size_t trials = detail::samples_or(o.trials, 10);
    r.doc = detail::header("radical test", o);
    r.csv_header = {"schema_version", "case", "level", "nodes", "coefficients", "expected_radical", "radical", "pass"};
    auto coeff_text = [](const std::vector<Scalar>& b) {
        std::string s;
        for (const auto& x : b) s += (s.empty() ? "" : " ") + x.to_string();
        return s;
    };
    auto coeff_json = [](const std::vector<Scalar>& b) {
        Json j = Json::array();
        for (const auto& x : b) j.push_back(x.to_string());
        return j;
    };
    auto record = [&](const std::string& kind, int level, const std::vector<int>& nodes, const std::vector<Scalar>& b,
                      const FormalVector& x, bool expect) {
        const bool rad = radical_membership(a, m, x, {true, 0}).radical;
        const bool ok = rad == expect;
        r.pass = r.pass && ok;
        r.csv_rows.push_back({kSchemaVersion, kind, std::to_string(level), detail::join(nodes), coeff_text(b), detail::bool_text(expect),
                              detail::bool_text(rad), detail::bool_text(ok)});
        return Json{{"level", level}, {"nodes", detail::int_array(nodes)}, {"coefficients", coeff_json(b)}, {"expected_radical", expect},
                    {"radical", rad}, {"pass", ok}};
    };

    // beta' against the rewriting over 0, p, ..., (2n+2)p; beta' is moved
    // past the nodes when the level grows
    Json explicit_cases = Json::array();
    for (int n = 0; n <= o.max_level; ++n) {
        std::vector<int> prefix;
        for (int t = 1; t <= n; ++t) prefix.push_back(t);
        const int bp = o.beta_prime >= 0 && o.beta_prime <= 2 * n + 2 && n > 0 ? o.beta_prime + 2 * n : o.beta_prime;
        const auto b = vir_moment_nullvector({0, bp}, n);
        std::vector<int> nodes{bp};
        std::vector<Scalar> coef{Scalar(1)};
        for (std::size_t t = 0; t < b.size(); ++t) {
            nodes.push_back(static_cast<int>(t));
            coef.push_back(b[t]);
        }
        Json rec = record("rewrite", n, nodes, coef, vir_moment_combination(nodes, coef, prefix, o.a), true);
        rec["prefix"] = detail::int_array(prefix);
        explicit_cases.push_back(rec);
    }

    Json null_cases = Json::array(), nonnull_cases = Json::array();
    for (std::size_t t = 0; t < trials; ++t) {
        const int n = static_cast<int>(t % static_cast<std::size_t>(o.max_level + 1));
        std::vector<int> prefix;
        for (int u = 0; u < n; ++u) prefix.push_back(static_cast<int>(rng() % 5) - 2);
        std::vector<int> nodes;
        while (nodes.size() < static_cast<std::size_t>(2 * n + 4)) {
            const int x = static_cast<int>(rng() % 13) - 6;
            if (std::find(nodes.begin(), nodes.end(), x) == nodes.end()) nodes.push_back(x);
        }
        std::vector<Scalar> b(nodes.size());
        for (const auto& v : mat_nullspace(vir_moment_matrix(nodes, 2 * n + 2))) {
            const Scalar c(static_cast<long>(rng() % 9) - 4);
            for (std::size_t u = 0; u < b.size(); ++u) b[u] += c * v[u];
        }
        bool zero = true;
        for (const auto& x : b) zero = zero && x.is_zero();
        if (zero) b = mat_nullspace(vir_moment_matrix(nodes, 2 * n + 2)).front();
        Json rec = record("null", n, nodes, b, vir_moment_combination(nodes, b, prefix, o.a), true);
        rec["prefix"] = detail::int_array(prefix);
        null_cases.push_back(rec);

        auto bad = b;
        bad[rng() % bad.size()] += Scalar(static_cast<long>(rng() % 3) + 1);
        Json rec2 = record("nonnull", n, nodes, bad, vir_moment_combination(nodes, bad, prefix, o.a), false);
        rec2["prefix"] = detail::int_array(prefix);
        nonnull_cases.push_back(rec2);
    }
    r.doc["lambda"] = parse_scalar(o.lambda).to_string();
    r.doc["mu"] = parse_scalar(o.mu).to_string();
    r.doc["a"] = o.a;
    r.doc["beta_prime"] = o.beta_prime;
    r.doc["rewrite"] = explicit_cases;
    r.doc["null"] = null_cases;
    r.doc["nonnull"] = nonnull_cases;
    r.doc["pass"] = r.pass;
    return r;
}

// ---------------------------------------------------------------------------

inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

inline std::string render(const Report& r, const std::string& format)
{
    if (format == "json") return r.doc.dump(2) + "\n";
    std::string s;
    auto line = [&s](const std::vector<std::string>& row) {
        for (std::size_t t = 0; t < row.size(); ++t) s += (t ? "," : "") + csv_field(row[t]);
        s += "\n";
    };
    line(r.csv_header);
    for (const auto& row : r.csv_rows) line(row);
    return s;
}

inline int run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Exact weight-space computations for extragraded exp-polynomial Lie algebras", "explie"};
    Options o;
    app.require_subcommand(1);
    app.add_option("--config", o.config, "key=value or JSON file; explicit flags take precedence");
    app.add_option("--depth", o.depth, "degree bound for algebra families")->check(CLI::Range(1, 1 << 20));
    app.add_option("--boxes", o.boxes, "strictly increasing box schedule, e.g. 1,2,3");
    app.add_option("--seed", o.seed, "seed for every sampled quantity");
    app.add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", o.out, "write the report here instead of stdout");
    app.add_option("--trials", o.trials, "random trials (vandermonde: 50, radical: 10)");
    app.add_option("--systems", o.systems, "random reduced systems for vandermonde verify");
    app.add_option("--algebra", o.algebra, "registry algebra name");
    app.add_option("--algebra-file", o.algebra_file, "algebra definition file");
    app.add_option("--algebra-param", o.algebra_params, "registry parameter key=value (repeatable)");
    app.add_option("--module", o.module, "registry module name");
    app.add_option("--module-file", o.module_file, "module definition file");
    app.add_option("--module-param", o.module_params, "registry parameter key=value (repeatable)");
    app.add_option("--samples", o.samples, "sampled tuples for algebra/module checks");
    app.add_option("--max-degree", o.max_degree, "sampled |i| bound")->check(CLI::NonNegativeNumber);
    app.add_option("--box", o.box, "sampled lattice coordinate bound")->check(CLI::NonNegativeNumber);
    app.add_option("--degree", o.degree, "degree i, or a comma list");
    app.add_option("--weight", o.weight, "lattice weight; several separated by ';'");
    app.add_flag("--no-symbolic", o.no_symbolic, "skip the symbolic dimension");
    app.add_option("--imax", o.imax, "largest level in virasoro bounds");
    app.add_option("--imax-cap", o.imax_cap, "refuse levels above this");
    app.add_option("--lambda", o.lambda, "module parameter lambda");
    app.add_option("--mu", o.mu, "module parameter mu");
    app.add_option("--a", o.a, "a = k p, given as k");
    app.add_option("--a-list", o.a_list, "comma list of k for virasoro cor32");
    app.add_option("--max-level", o.max_level, "largest prefix length n in radical test");
    app.add_option("--beta-prime", o.beta_prime, "beta' = k p, given as k");

    std::string chosen;
    auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& desc, const std::string& full) {
        CLI::App* s = parent->add_subcommand(name, desc);
        s->fallthrough();
        s->callback([&chosen, full] { chosen = full; });
        return s;
    };
    CLI::App* vand = app.add_subcommand("vandermonde", "extended Vandermonde checks");
    vand->fallthrough()->require_subcommand(1);
    leaf(vand, "verify", "closed form against elimination, plus reduced systems", "vandermonde verify");
    CLI::App* alg = app.add_subcommand("algebra", "algebra checks");
    alg->fallthrough()->require_subcommand(1);
    leaf(alg, "check", "antisymmetry and Jacobi on sampled generators", "algebra check");
    CLI::App* mod = app.add_subcommand("module", "module checks");
    mod->fallthrough()->require_subcommand(1);
    leaf(mod, "check", "module compatibility on sampled pairs", "module check");
    leaf(&app, "dims", "weight-space dimensions of M(V)", "dims");
    CLI::App* vir = app.add_subcommand("virasoro", "generalized Virasoro tables");
    vir->fallthrough()->require_subcommand(1);
    leaf(vir, "bounds", "dimensions against 1*3*...*(2i+1)", "virasoro bounds");
    leaf(vir, "cor32", "dimension independence from a", "virasoro cor32");
    CLI::App* rad = app.add_subcommand("radical", "radical membership");
    rad->fallthrough()->require_subcommand(1);
    leaf(rad, "test", "moment vectors in and out of the radical", "radical test");

    std::vector<std::string> args;
    try {
        std::vector<std::string> known;
        for (const CLI::Option* opt : app.get_options())
            for (const auto& name : opt->get_lnames()) known.push_back(name);
        args = detail::merge_config(argv, known);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return 2;
    }
    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return 2;
    }

    Report report;
    try {
        if (chosen == "vandermonde verify") report = vandermonde_verify(o);
        else if (chosen == "algebra check") report = algebra_check(o);
        else if (chosen == "module check") report = module_check(o);
        else if (chosen == "dims") report = dims(o);
        else if (chosen == "virasoro bounds") report = virasoro_bounds(o);
        else if (chosen == "virasoro cor32") report = virasoro_cor32(o);
        else if (chosen == "radical test") report = radical_test(o);
        else {
            err << "error: no subcommand\n" << app.help();
            return 2;
        }
    } catch (const ConsistencyError& e) {
        err << "verification error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return 2;
    }

    const std::string text = render(report, o.format);
    if (o.out.empty()) {
        out << text;
    } else {
        std::ofstream f(o.out, std::ios::binary);
        if (!f || !(f << text)) {
            err << "error: cannot write `" << o.out << "`\n";
            return 2;
        }
    }
    return report.pass ? 0 : 1;
}

} // namespace explie::cli
