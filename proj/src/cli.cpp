#include "hamtrio/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <regex>
#include <sstream>

#include "hamtrio/catalog.hpp"
#include "hamtrio/errors.hpp"
#include "hamtrio/hierarchy.hpp"
#include "hamtrio/invariants.hpp"
#include "hamtrio/parse.hpp"
#include "hamtrio/poisson.hpp"

#ifndef HAMTRIO_DEFS_DIR
#define HAMTRIO_DEFS_DIR "defs"
#endif

namespace hamtrio::cli {

using catalog::Values;
using geometry::Connection;
using geometry::Metric;
using jet::Expr;
using jet::vanishes;
using jet::Vars;
using op::MatrixDiffOp;

namespace {

constexpr std::size_t kMaxResiduals = 12;
constexpr std::size_t kMaxResidualLength = 200;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string truncate(std::string s) {
    if (s.size() > kMaxResidualLength) s = s.substr(0, kMaxResidualLength - 3) + "...";
    return s;
}

std::string values_str(const Values& v) {
    std::string out;
    for (const auto& [k, x] : v) out += (out.empty() ? "" : ", ") + k + " = " + x.str();
    return out.empty() ? "(all zero)" : out;
}

std::string list_str(const std::vector<Expr>& xs) {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + xs[i].str();
    return out + "]";
}

std::string number(double x) {
    std::ostringstream os;
    os << std::setprecision(12) << x;
    return os.str();
}

bool curvature_vanishes(const Metric& g, const Connection& c) {
    for (const auto& a : geometry::contravariant_curvature(g, c))
        for (const auto& b : a)
            for (const auto& x : b)
                for (const auto& y : x)
                    if (!vanishes(y)) return false;
    return true;
}

void add_residuals(Report& r, const std::vector<Expr>& xs) {
    for (const auto& x : xs) r.residual(x.str());
}

// ---- theorems ----

void theorem1(Report& r) {
    const auto& f = catalog::family("Th1");
    auto inst = catalog::instantiate(f, {}, 'c');
    const jet::JetContext ctx{2, 12};
    MatrixDiffOp R = catalog::canonical_operator(f.r);
    r.add("family has no algebraic conditions", f.variety.empty());
    r.add("P1(c) is Hamiltonian for symbolic c", poisson::is_hamiltonian(inst.op, ctx));
    r.add("[P1(c), R2] = 0 for symbolic c", poisson::are_compatible(inst.op, R, ctx));
    auto lc = geometry::levi_civita_residuals(inst.metric, inst.connection);
    add_residuals(r, lc);
    r.add("Levi-Civita residuals empty", lc.empty(), std::to_string(lc.size()) + " residuals");
    r.add("g is flat for every value of the parameters", geometry::is_flat(inst.metric));
    auto a = catalog::ansatz_search(f.r);
    r.add("ansatz search reproduces the family", a.dimension == static_cast<std::size_t>(f.nparams) && a.matches_family,
          "dimension " + std::to_string(a.dimension));
}

void theorem_family(Report& r, const catalog::ParamFamily& f) {
    auto t0 = Clock::now();
    auto a = catalog::ansatz_search(f.r);
    r.timings.emplace_back("ansatz", seconds_since(t0));
    r.add("ansatz dimension", a.dimension == static_cast<std::size_t>(f.nparams),
          std::to_string(a.dimension) + " (expected " + std::to_string(f.nparams) + ")");
    r.add("ansatz metric equals the family", a.matches_family);
    r.add("Levi-Civita residuals span the algebraic conditions", a.variety_matches);
    for (std::size_t k = 0; k < a.variety.size(); ++k)
        r.results.emplace_back("Levi-Civita condition " + std::to_string(k + 1), a.variety[k].str());

    t0 = Clock::now();
    for (const auto& b : f.branches) {
        auto inst = catalog::instantiate(f, catalog::branch_values(f, b.label, 'c'), 'c');
        bool lc = geometry::levi_civita_residuals(inst.metric, inst.connection).empty();
        bool flat = lc && curvature_vanishes(inst.metric, inst.connection);
        r.add("branch " + std::to_string(b.label) + " is flat", flat,
              values_str(catalog::branch_values(f, b.label, 'c')));
    }
    r.timings.emplace_back("branches", seconds_since(t0));

    t0 = Clock::now();
    int flat = 0, vacuous = 0;
    for (const auto& pc : catalog::pencil_cases(f)) {
        std::string name = pc.label + " (alternative " + std::to_string(pc.alternative) + ")";
        std::string notes;
        for (const auto& n : pc.notes) notes += "; " + n;
        if (!pc.hypotheses_hold) {
            ++vacuous;
            r.add(name, true, "vacuous: the constraints contradict the branch hypotheses" + notes);
            continue;
        }
        auto g = catalog::instantiate(f, pc.c, 'c');
        auto h = catalog::instantiate(f, pc.d, 'd');
        try {
            auto rep = geometry::flat_pencil_check(g.metric, g.connection, h.metric, h.connection);
            if (rep.ok()) ++flat;
            r.add(name, rep.ok(), (rep.ok() ? "flat pencil" : rep.diagnostic) + notes);
        } catch (const DegeneratePencil& e) {
            r.add(name, false, e.what());
        }
    }
    r.results.emplace_back("pencil cases", std::to_string(flat) + " flat, " + std::to_string(vacuous) + " vacuous");
    // the stated constraints are needed: without them the pencil is not flat at a generic point
    for (const auto& rule : f.pencils) {
        bool constrained = std::any_of(rule.alternatives.begin(), rule.alternatives.end(),
                                       [](const auto& alt) { return !alt.empty(); });
        if (!constrained) continue;
        auto g = catalog::instantiate(f, catalog::branch_point(f, rule.k, 'c', 21), 'c');
        auto h = catalog::instantiate(f, catalog::branch_point(f, rule.l, 'd', 22), 'd');
        bool ok = geometry::flat_pencil_check(g.metric, g.connection, h.metric, h.connection).ok();
        r.add(rule.label() + " needs its constraints", !ok, "generic point of branches " + std::to_string(rule.k) +
                                                               " and " + std::to_string(rule.l) + " gives a non-flat pencil");
    }
    for (auto [k, l] : f.excluded) {
        std::string name = "excluded g_lambda_" + std::to_string(k) + std::to_string(l);
        auto c = catalog::branch_point(f, k, 'c', 11);
        auto d = catalog::branch_point(f, l, 'd', 12);
        auto g = catalog::instantiate(f, c, 'c');
        auto h = catalog::instantiate(f, d, 'd');
        bool with_connection = geometry::flat_pencil_check(g.metric, g.connection, h.metric, h.connection).ok();
        bool metric_only = geometry::flat_pencil_check(g.metric, h.metric).ok();
        r.add(name + " fails at a generic point", !with_connection && !metric_only,
              "c: " + values_str(c) + "; d: " + values_str(d));
    }
    r.timings.emplace_back("pencils", seconds_since(t0));

    if (f.tag == "Th2") {
        // every integer point of a small grid on the variety lies on a listed branch
        t0 = Clock::now();
        const int vals[] = {-1, 0, 1, 2};
        std::vector<int> idx(f.nparams, 0);
        int on_variety = 0, uncovered = 0;
        auto polys = f.variety_polys('c');
        for (;;) {
            Values v;
            jet::Substitution s;
            for (int i = 0; i < f.nparams; ++i) {
                Expr x(vals[idx[i]]);
                v["c" + std::to_string(i + 1)] = x;
                s[Vars::param("c" + std::to_string(i + 1))] = x;
            }
            bool on = true;
            for (const auto& p : polys)
                if (!p.substitute(s).is_zero()) on = false;
            if (on) {
                ++on_variety;
                if (catalog::branches_at(f, v, 'c').empty()) {
                    if (uncovered++ < 3) r.residual("uncovered point " + values_str(v));
                }
            }
            int i = 0;
            while (i < f.nparams && ++idx[i] == 4) idx[i++] = 0;
            if (i == f.nparams) break;
        }
        r.add("branches cover the variety on the grid {-1,0,1,2}^7", uncovered == 0,
              std::to_string(on_variety) + " grid points on the variety, " + std::to_string(uncovered) + " uncovered");
        r.timings.emplace_back("grid", seconds_since(t0));
    }
}

// ---- documents ----

hierarchy::Trio trio_ops(const doc::Document& d, const std::string& name) {
    const auto& t = d.trio(name);
    return {d.op(t.p1), d.op(t.q1), d.op(t.r)};
}

std::vector<hierarchy::Functional> casimirs_of(const doc::Document& d, const std::string& trio) {
    std::vector<hierarchy::Functional> out;
    auto it = d.casimirs.find(trio);
    if (it == d.casimirs.end()) return out;
    for (const auto& n : it->second) out.push_back({n, d.functionals.at(n)});
    return out;
}

op::Pencil trio_pencil(const hierarchy::Trio& t) {
    // side 2 = -(P1 + eps^2 R), side 1 = Q1: the orientation under which the
    // canonical coordinates are the roots of det(g2 - lambda g1)
    const Expr eps = Expr::var(op::eps_var());
    return {-(t.p1 + (eps * eps) * t.r), t.q1};
}

Expr lambda_to_fields(const Expr& e, int m) {
    jet::Substitution s;
    for (int i = 1; i <= m; ++i) s[Vars::param("lambda" + std::to_string(i))] = Expr::u(i);
    return e.substitute(s);
}

invariants::CentralInvariants compute_invariants(const doc::Document& d, const std::string& trio, int samples,
                                                 unsigned seed, const invariants::Domain& domain, Report& r) {
    auto t = trio_ops(d, trio);
    auto pencil = trio_pencil(t);
    auto [g1, g2] = invariants::pencil_metrics(pencil);
    auto chart = invariants::canonical_coordinates(g1, g2, domain.centre());
    if (auto it = d.charts.find(trio); it != d.charts.end()) {
        chart = invariants::relabel(chart, it->second);
        r.add("canonical coordinates equal the given chart", true, list_str(it->second));
    } else {
        r.results.emplace_back("canonical coordinates", list_str(chart.coords));
    }
    if (auto it = d.inverses.find(trio); it != d.inverses.end()) chart.inverse = it->second;
    return invariants::central_invariants(pencil, chart, samples, seed, domain);
}

void compare_invariants(const invariants::CentralInvariants& ci, const std::vector<Expr>& expected, int m, Report& r) {
    bool exact = ci.canonical && !std::any_of(expected.begin(), expected.end(), [](const Expr& e) { return e.has_radicals(); }) &&
                 !std::any_of(ci.canonical->begin(), ci.canonical->end(), [](const Expr& e) { return e.has_radicals(); });
    if (exact) {
        bool ok = true;
        for (int i = 0; i < m; ++i)
            if (!((*ci.canonical)[i] - lambda_to_fields(expected[i], m)).is_zero()) ok = false;
        r.add("central invariants equal the expected functions (exact)", ok, list_str(*ci.canonical));
    }
    double worst = 0;
    for (const auto& s : ci.samples) {
        jet::Point p;
        for (int i = 0; i < m; ++i) p[Vars::param("lambda" + std::to_string(i + 1))] = s.lambda[i];
        for (int i = 0; i < m; ++i) {
            double want = expected[i].eval(p);
            worst = std::max(worst, std::abs(want - s.s[i]) / std::max(1.0, std::abs(want)));
        }
    }
    r.add("central invariants match at " + std::to_string(ci.samples.size()) + " seeded points",
          !ci.samples.empty() && worst <= 1e-9, "largest relative deviation " + number(worst));
}

void report_invariants(const invariants::CentralInvariants& ci, Report& r) {
    r.results.emplace_back("central invariants (in u)", list_str(ci.in_fields));
    if (ci.canonical) r.results.emplace_back("central invariants (in canonical coordinates)", list_str(*ci.canonical));
    for (std::size_t k = 0; k < ci.samples.size(); ++k) {
        const auto& s = ci.samples[k];
        std::string line = "u = (";
        for (std::size_t i = 0; i < s.u.size(); ++i) line += (i ? ", " : "") + number(s.u[i]);
        line += "), lambda = (";
        for (std::size_t i = 0; i < s.lambda.size(); ++i) line += (i ? ", " : "") + number(s.lambda[i]);
        line += "), s = (";
        for (std::size_t i = 0; i < s.s.size(); ++i) line += (i ? ", " : "") + number(s.s[i]);
        r.results.emplace_back("sample " + std::to_string(k + 1), line + ")");
    }
    auto v = invariants::triviality_verdict(ci);
    r.results.emplace_back("triviality", invariants::to_string(v.verdict) + (v.warning.empty() ? "" : " (" + v.warning + ")"));
}

invariants::Domain domain_for(const doc::Document& d, const std::string& trio, const std::optional<std::vector<double>>& box) {
    invariants::Domain dom;
    std::vector<double> b;
    if (box) b = *box;
    else if (auto it = d.domains.find(trio); it != d.domains.end()) b = it->second;
    if (!b.empty()) {
        if (b.size() != 2 * static_cast<std::size_t>(d.fields)) throw DimensionMismatch("domain needs lo,hi for every field");
        dom.box.clear();
        for (std::size_t i = 0; i < b.size(); i += 2) dom.box.emplace_back(b[i], b[i + 1]);
    }
    return dom;
}

void verify_trio(const doc::Document& d, const std::string& name, Report& r) {
    const auto ctx = d.context();
    auto t = trio_ops(d, name);
    const auto& def = d.trio(name);
    r.add(name + ": " + def.p1 + " and " + def.q1 + " compatible", poisson::are_compatible(t.p1, t.q1, ctx));
    r.add(name + ": " + def.p1 + " and " + def.r + " compatible", poisson::are_compatible(t.p1, t.r, ctx));
    r.add(name + ": " + def.q1 + " and " + def.r + " compatible", poisson::are_compatible(t.q1, t.r, ctx));
    auto cas = casimirs_of(d, name);
    if (cas.empty()) return;
    for (const auto& c : cas) r.add(name + ": " + c.name + " is a Casimir of " + def.q1, hierarchy::casimir_check(c, t.q1, ctx));
    std::vector<hierarchy::Flow> fl;
    try {
        fl = hierarchy::first_flows(t, cas, Expr::var(op::eps_var()), ctx);
    } catch (const NotACasimir& e) {
        r.add(name + ": first flows", false, e.what());
        return;
    }
    for (std::size_t i = 0; i < fl.size(); ++i)
        r.results.emplace_back(name + " flow of " + cas[i].name + " (eps = 1)", list_str(fl[i].at_eps(Expr(1)).rhs));
    for (std::size_t i = 0; i < fl.size(); ++i)
        for (std::size_t j = i + 1; j < fl.size(); ++j) {
            auto c = hierarchy::commutator(fl[i], fl[j], ctx);
            bool ok = std::all_of(c.begin(), c.end(), [](const Expr& e) { return vanishes(e); });
            bool numeric = std::any_of(c.begin(), c.end(), [](const Expr& e) { return e.has_radicals(); });
            if (!ok) add_residuals(r, c);
            r.add(name + ": flows of " + cas[i].name + " and " + cas[j].name + " commute", ok,
                  numeric ? "radical case: sampled, relative tolerance 1e-9" : "exact");
        }
    for (const auto& e : d.expectations) {
        if (e.kind != doc::Expectation::Kind::Flow || e.subject != name) continue;
        std::size_t k = 0;
        while (k < cas.size() && cas[k].name != e.other) ++k;
        if (k == cas.size()) {
            r.add(name + ": flow of " + e.other, false, e.other + " is not among the Casimirs");
            continue;
        }
        auto got = fl[k].at_eps(Expr(1)).rhs;
        bool ok = true;
        for (std::size_t i = 0; i < got.size(); ++i) {
            Expr diff = got[i] - e.values[i];
            if (!vanishes(diff)) {
                ok = false;
                r.residual("component " + std::to_string(i + 1) + ": " + diff.str());
            }
        }
        r.add(name + ": flow of " + e.other + " equals the expected one at eps = 1", ok);
    }
}

void verify_match(const doc::Document& d, const doc::Expectation& e, Report& r) {
    std::vector<MatrixDiffOp> ops{d.op(e.subject)};
    std::vector<std::string> names{e.subject};
    if (!e.other.empty()) {
        ops.push_back(d.op(e.other));
        names.push_back(e.other);
    }
    catalog::SystemMatch m;
    try {
        m = catalog::match_known_system(ops);
    } catch (const NoMatch& ex) {
        r.add("identification of " + names.front(), false, ex.what());
        return;
    }
    r.add("family of " + names.front() + (names.size() > 1 ? " and " + names.back() : ""), m.family == e.family,
          "found " + m.family + ", expected " + e.family);
    for (std::size_t i = 0; i < m.ops.size(); ++i) {
        const auto& om = m.ops[i];
        Values expected(e.params[i].begin(), e.params[i].end());
        auto kappa = catalog::proportional(om.params, expected);
        std::string detail = "found " + values_str(om.params) + "; expected " + values_str(expected);
        if (kappa) detail += "; scale " + kappa->str();
        if (om.r_scale) detail += "; higher part = " + om.r_scale->str() + " * " + om.r_tag;
        r.add("parameters of " + names[i] + " (up to scale)", kappa.has_value(), detail);
    }
}

}  // namespace

// ---------------------------------------------------------------------------

bool Report::pass() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

void Report::add(std::string name, bool ok, std::string detail) { checks.push_back({std::move(name), ok, std::move(detail)}); }

void Report::residual(const std::string& s) {
    if (residuals.size() < kMaxResiduals) residuals.push_back(truncate(s));
}

std::string Report::json(bool with_timings) const {
    nlohmann::ordered_json j;
    j["schema"] = "hamtrio-report/1";
    j["command"] = command;
    j["inputs"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : inputs) j["inputs"][k] = v;
    j["verdict"] = pass() ? "pass" : "fail";
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : checks) j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    j["results"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : results) j["results"][k] = v;
    j["residuals"] = residuals;
    if (with_timings) {
        j["timings"] = nlohmann::ordered_json::object();
        for (const auto& [k, v] : timings) j["timings"][k] = v;
    }
    j["seed"] = seed ? nlohmann::ordered_json(*seed) : nlohmann::ordered_json(nullptr);
    return j.dump(2);
}

std::string Report::text() const {
    std::ostringstream os;
    os << command << ": " << (pass() ? "PASS" : "FAIL") << "\n";
    for (const auto& [k, v] : inputs) os << "  input " << k << " = " << v << "\n";
    if (seed) os << "  seed " << *seed << "\n";
    for (const auto& c : checks) os << "  [" << (c.pass ? "pass" : "FAIL") << "] " << c.name << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
    for (const auto& [k, v] : results) os << "  " << k << ": " << v << "\n";
    for (const auto& s : residuals) os << "  residual: " << s << "\n";
    for (const auto& [k, v] : timings) os << "  time " << k << ": " << number(v) << " s\n";
    return os.str();
}

Report verify_theorem(int n) {
    Report r;
    r.command = "verify theorem" + std::to_string(n);
    auto t0 = Clock::now();
    if (n == 1) theorem1(r);
    else if (n >= 2 && n <= 4) theorem_family(r, catalog::family("Th" + std::to_string(n)));
    else throw UnknownName("theorem" + std::to_string(n) + " (expected theorem1..theorem4)");
    r.timings.emplace_back("total", seconds_since(t0));
    return r;
}

Report verify_document(const doc::Document& d, const std::string& label) {
    Report r;
    r.command = "verify " + label;
    auto t0 = Clock::now();
    const auto ctx = d.context();
    for (const auto& [name, p] : d.ops) {
        bool skew = op::is_skew_adjoint(p, ctx);
        r.add(name + " is skew-adjoint", skew);
        if (skew) r.add(name + " is Hamiltonian", poisson::is_hamiltonian(p, ctx));
    }
    for (const auto& [name, t] : d.trios) verify_trio(d, name, r);
    for (const auto& e : d.expectations) {
        if (e.kind == doc::Expectation::Kind::Match) verify_match(d, e, r);
        if (e.kind == doc::Expectation::Kind::Invariants) {
            auto dom = domain_for(d, e.subject, std::nullopt);
            const unsigned seed = 7;
            r.seed = seed;
            auto ci = compute_invariants(d, e.subject, 10, seed, dom, r);
            compare_invariants(ci, e.values, d.fields, r);
            auto v = invariants::triviality_verdict(ci);
            bool expected_trivial = std::all_of(e.values.begin(), e.values.end(), [](const Expr& x) { return x.is_zero(); });
            r.add("triviality verdict", (v.verdict == invariants::Triviality::Trivial) == expected_trivial,
                  invariants::to_string(v.verdict) + (v.warning.empty() ? "" : " (" + v.warning + ")"));
            report_invariants(ci, r);
        }
    }
    r.timings.emplace_back("total", seconds_since(t0));
    return r;
}

Report check_hamiltonian(const doc::Document& d, const std::string& name) {
    Report r;
    r.command = "check hamiltonian " + name;
    auto t0 = Clock::now();
    const auto ctx = d.context();
    MatrixDiffOp p = d.op(name);
    bool skew = op::is_skew_adjoint(p, ctx);
    r.add("skew-adjoint", skew);
    if (skew) {
        Expr integrand = poisson::schouten_integrand(p, p, ctx.with_cap(poisson::kBracketJetCap));
        bool ok = jet::is_total_derivative(integrand, ctx.with_cap(poisson::kBracketJetCap));
        if (!ok) r.residual(integrand.str());
        r.add("[P, P] = 0", ok);
    }
    r.timings.emplace_back("total", seconds_since(t0));
    return r;
}

Report check_compatible(const doc::Document& d, const std::string& a, const std::string& b) {
    Report r;
    r.command = "check compatible " + a + " " + b;
    auto t0 = Clock::now();
    const auto ctx = d.context();
    MatrixDiffOp p = d.op(a), q = d.op(b);
    bool skew = op::is_skew_adjoint(p, ctx) && op::is_skew_adjoint(q, ctx);
    r.add("both operators skew-adjoint", skew);
    if (skew) r.add("[" + a + ", " + b + "] = 0", poisson::are_compatible(p, q, ctx));
    r.timings.emplace_back("total", seconds_since(t0));
    return r;
}

Report check_flat_pencil(const doc::Document& d, const std::string& g, const std::string& h) {
    Report r;
    r.command = "check flat-pencil " + g + " " + h;
    auto t0 = Clock::now();
    auto find = [&](const std::string& n) {
        auto it = d.metrics.find(n);
        if (it == d.metrics.end()) throw UnknownName("metric '" + n + "'");
        return it->second;
    };
    Metric a = find(g), b = find(h);
    r.add(g + " is flat", geometry::is_flat(a));
    r.add(h + " is flat", geometry::is_flat(b));
    try {
        auto rep = geometry::flat_pencil_check(a, b);
        r.add(g + " - lambda " + h + " is flat", rep.flat, rep.diagnostic);
        r.add("Christoffel symbols are additive", rep.additive);
    } catch (const DegeneratePencil& e) {
        r.add("pencil is nondegenerate", false, e.what());
    }
    r.timings.emplace_back("total", seconds_since(t0));
    return r;
}

Report search_ansatz(const std::string& tag) {
    Report r;
    r.command = "search ansatz --operator " + tag;
    auto t0 = Clock::now();
    auto t = catalog::tag_from_name(tag);
    auto a = catalog::ansatz_search(t);
    const catalog::ParamFamily* fam = nullptr;
    for (const auto& name : catalog::family_tags())
        if (catalog::family(name).r == t) fam = &catalog::family(name);
    r.add("solution space dimension", fam && a.dimension == static_cast<std::size_t>(fam->nparams),
          std::to_string(a.dimension));
    r.add("metric equals the " + (fam ? fam->tag : std::string("?")) + " family", a.matches_family);
    r.add("Levi-Civita residuals span the algebraic conditions", a.variety_matches);
    for (int i = 0; i < a.metric.size(); ++i)
        for (int j = i; j < a.metric.size(); ++j)
            r.results.emplace_back("g" + std::to_string(i + 1) + std::to_string(j + 1), a.metric.g[i][j].str());
    for (std::size_t k = 0; k < a.variety.size(); ++k) r.results.emplace_back("condition " + std::to_string(k + 1), a.variety[k].str());
    r.timings.emplace_back("total", seconds_since(t0));
    return r;
}

Report flows(const doc::Document& d, const std::string& trio, const std::string& casimir, const std::string& eps) {
    Report r;
    r.command = "flows " + trio + " --casimir " + casimir;
    auto t0 = Clock::now();
    const auto ctx = d.context();
    auto t = trio_ops(d, trio);
    auto it = d.functionals.find(casimir);
    if (it == d.functionals.end()) throw UnknownName("functional '" + casimir + "'");
    hierarchy::Functional c{casimir, it->second};
    Expr e = text::parse_expression(eps);
    bool cas = hierarchy::casimir_check(c, t.q1, ctx);
    r.add(casimir + " is a Casimir of " + d.trio(trio).q1, cas);
    if (cas) {
        auto f = hierarchy::first_flows(t, {c}, Expr::var(op::eps_var()), ctx).front();
        auto shown = f.at_eps(e);
        for (int i = 0; i < shown.size(); ++i)
            r.results.emplace_back("u" + std::to_string(i + 1) + "_t", shown.rhs[i].str());
        for (const auto& ex : d.expectations) {
            if (ex.kind != doc::Expectation::Kind::Flow || ex.subject != trio || ex.other != casimir) continue;
            auto at1 = f.at_eps(Expr(1)).rhs;
            bool ok = true;
            for (std::size_t i = 0; i < at1.size(); ++i)
                if (!vanishes(at1[i] - ex.values[i])) ok = false;
            r.add("equals the expected flow at eps = 1", ok);
        }
    }
    r.timings.emplace_back("total", seconds_since(t0));
    return r;
}

Report central_invariants(const doc::Document& d, const std::string& trio, int samples, unsigned seed,
                          const std::optional<std::vector<double>>& domain) {
    Report r;
    r.command = "central-invariants " + trio;
    r.seed = seed;
    auto t0 = Clock::now();
    auto dom = domain_for(d, trio, domain);
    auto ci = compute_invariants(d, trio, samples, seed, dom, r);
    r.add("central invariants computed", true, ci.single_variable ? "each s_i depends on lambda^i only" : "");
    r.add("each s_i depends on lambda^i only", ci.single_variable);
    for (const auto& e : d.expectations)
        if (e.kind == doc::Expectation::Kind::Invariants && e.subject == trio) compare_invariants(ci, e.values, d.fields, r);
    report_invariants(ci, r);
    r.timings.emplace_back("total", seconds_since(t0));
    return r;
}

std::string default_defs_dir() {
    if (const char* env = std::getenv("HAMTRIO_DEFS")) return env;
    return HAMTRIO_DEFS_DIR;
}

namespace {

bool is_example_name(const std::string& s) { return std::regex_match(s, std::regex("example4[1-7]")); }

struct Loaded {
    doc::Document doc;
    std::string path;
};

// An explicit --defs file wins; otherwise "exampleNN" names load the bundled
// definition file; otherwise the catalog operators are available on two fields.
Loaded load_for(const std::string& defs, const std::string& defs_dir, const std::string& target) {
    Loaded l;
    if (!defs.empty()) l.path = defs;
    else if (is_example_name(target)) l.path = (std::filesystem::path(defs_dir) / (target + ".ham")).string();
    if (l.path.empty()) {
        l.doc = doc::parse("fields u1, u2\n");
        return l;
    }
    l.doc = doc::load(l.path);
    return l;
}

// "example45" names the only trio of that file.
std::string resolve_trio(const doc::Document& d, const std::string& name) {
    if (d.trios.count(name)) return name;
    if (is_example_name(name) && d.trios.size() == 1) return d.trios.begin()->first;
    throw UnknownName("trio '" + name + "'");
}

std::vector<double> parse_box(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument("bad number '" + item + "'");
        out.push_back(v);
    }
    return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Symbolic verification of homogeneous Hamiltonian operators and their trios", "hamtrio"};
    app.require_subcommand(1);
    std::string format = "text", defs, defs_dir = default_defs_dir();
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--defs", defs, "Definition file");
    app.add_option("--defs-dir", defs_dir, "Directory of the bundled example definitions");

    auto* check = app.add_subcommand("check", "Check a property of named operators or metrics");
    check->require_subcommand(1);
    std::string name_a, name_b;
    auto* ham = check->add_subcommand("hamiltonian", "Skew-adjointness and [P,P] = 0");
    ham->add_option("NAME", name_a)->required();
    auto* comp = check->add_subcommand("compatible", "[A,B] = 0");
    comp->add_option("A", name_a)->required();
    comp->add_option("B", name_b)->required();
    auto* flat = check->add_subcommand("flat-pencil", "Flat pencil test of two metrics");
    flat->add_option("G", name_a)->required();
    flat->add_option("H", name_b)->required();

    auto* verify = app.add_subcommand("verify", "Verify a theorem or a bundled example");
    std::string target;
    verify->add_option("TARGET", target, "theorem1..theorem4 or example41..example47")->required();

    auto* search = app.add_subcommand("search", "Ansatz search");
    search->require_subcommand(1);
    auto* ansatz = search->add_subcommand("ansatz", "Solve for all compatible first-order operators");
    std::string tag;
    ansatz->add_option("--operator", tag, "R2, R3_1, R3_2 or R3_3")->required();

    auto* flow = app.add_subcommand("flows", "First flows of a trio from a Casimir");
    std::string casimir, eps = "eps";
    flow->add_option("TRIO", target)->required();
    flow->add_option("--casimir", casimir)->required();
    flow->add_option("--eps", eps, "Value of the deformation parameter (default: symbolic)");

    auto* inv = app.add_subcommand("central-invariants", "Central invariants of the trio's pencil");
    int samples = 10;
    unsigned seed = 1;
    std::string box;
    inv->add_option("TRIO", target)->required();
    inv->add_option("--samples", samples)->check(CLI::Range(1, 100000));
    inv->add_option("--seed", seed);
    inv->add_option("--domain", box, "lo1,hi1,lo2,hi2");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << app.help();
        return 2;
    }

    Report r;
    try {
        if (ham->parsed() || comp->parsed() || flat->parsed()) {
            auto l = load_for(defs, defs_dir, "");
            if (ham->parsed()) r = check_hamiltonian(l.doc, name_a);
            else if (comp->parsed()) r = check_compatible(l.doc, name_a, name_b);
            else r = check_flat_pencil(l.doc, name_a, name_b);
            if (!l.path.empty()) r.inputs.emplace_back("defs", l.path);
        } else if (verify->parsed()) {
            std::smatch m;
            if (std::regex_match(target, m, std::regex("theorem([0-9]+)"))) {
                r = verify_theorem(std::stoi(m[1]));
            } else if (is_example_name(target)) {
                auto l = load_for(defs, defs_dir, target);
                r = verify_document(l.doc, target);
                r.inputs.emplace_back("defs", l.path);
            } else {
                throw UnknownName("verification target '" + target + "'");
            }
        } else if (ansatz->parsed()) {
            r = search_ansatz(tag);
        } else if (flow->parsed()) {
            auto l = load_for(defs, defs_dir, target);
            std::string trio = resolve_trio(l.doc, target);
            r = flows(l.doc, trio, casimir, eps);
            r.inputs.emplace_back("eps", eps);
            if (!l.path.empty()) r.inputs.emplace_back("defs", l.path);
        } else if (inv->parsed()) {
            auto l = load_for(defs, defs_dir, target);
            std::string trio = resolve_trio(l.doc, target);
            std::optional<std::vector<double>> dom;
            if (!box.empty()) dom = parse_box(box);
            r = central_invariants(l.doc, trio, samples, seed, dom);
            r.inputs.emplace_back("samples", std::to_string(samples));
            if (dom) r.inputs.emplace_back("domain", box);
            if (!l.path.empty()) r.inputs.emplace_back("defs", l.path);
        }
    } catch (const ParseError& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const UnknownName& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const DimensionMismatch& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const InputUnreadable& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        r.add("computation", false, e.what());
    }
    std::string cmd;
    for (const auto& a : args) cmd += (cmd.empty() ? "" : " ") + a;
    if (r.command.empty()) r.command = cmd;
    r.inputs.insert(r.inputs.begin(), {"arguments", cmd});
    out << (format == "json" ? r.json() + "\n" : r.text());
    return r.pass() ? 0 : 1;
}

}  // namespace hamtrio::cli
