#include "hamtrio/catalog.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "hamtrio/errors.hpp"
#include "hamtrio/linalg.hpp"
#include "hamtrio/parse.hpp"
#include "hamtrio/poisson.hpp"

namespace hamtrio::catalog {

using jet::JetContext;
using jet::Rational;
using jet::vanishes;
using jet::VarId;
using jet::Vars;
using op::ScalarDiffOp;

namespace {

const JetContext kCtx{2, 12};

Expr parse(const std::string& s) { return text::parse_expression(s); }

MatrixDiffOp sandwich(const MatrixDiffOp& inner) {
    MatrixDiffOp d = MatrixDiffOp::identity(inner.size(), ScalarDiffOp::D());
    return d.compose(inner, kCtx).compose(d, kCtx);
}

// a D + D a
ScalarDiffOp symmetric(const Expr& a) { return ScalarDiffOp::term(a, 1) + ScalarDiffOp::D().compose(ScalarDiffOp(a), kCtx); }

}  // namespace

std::string tag_name(CanonicalTag t) {
    switch (t) {
        case CanonicalTag::R2: return "R2";
        case CanonicalTag::R3_1: return "R3_1";
        case CanonicalTag::R3_2: return "R3_2";
        case CanonicalTag::R3_3: return "R3_3";
    }
    return "?";
}

CanonicalTag tag_from_name(const std::string& name) {
    for (auto t : {CanonicalTag::R2, CanonicalTag::R3_1, CanonicalTag::R3_2, CanonicalTag::R3_3})
        if (tag_name(t) == name) return t;
    throw UnknownName("canonical operator '" + name + "' (expected R2, R3_1, R3_2 or R3_3)");
}

MatrixDiffOp canonical_operator(CanonicalTag t) {
    switch (t) {
        case CanonicalTag::R2:
            return MatrixDiffOp::from_rows({{ScalarDiffOp(), ScalarDiffOp::D(2)}, {-ScalarDiffOp::D(2), ScalarDiffOp()}});
        case CanonicalTag::R3_1:
            return MatrixDiffOp::from_rows({{ScalarDiffOp(), ScalarDiffOp::D(3)}, {ScalarDiffOp::D(3), ScalarDiffOp()}});
        case CanonicalTag::R3_2: {
            Expr inv = parse("1/u1");
            MatrixDiffOp inner = MatrixDiffOp::from_rows(
                {{ScalarDiffOp(), ScalarDiffOp::D().compose(ScalarDiffOp(inv), kCtx)},
                 {ScalarDiffOp::term(inv, 1), symmetric(parse("u2/u1^2"))}});
            return sandwich(inner);
        }
        case CanonicalTag::R3_3: {
            Expr r = parse("u2/u1");
            MatrixDiffOp inner = MatrixDiffOp::from_rows(
                {{ScalarDiffOp::D(), ScalarDiffOp::D().compose(ScalarDiffOp(r), kCtx)},
                 {ScalarDiffOp::term(r, 1), symmetric(parse("(u2^2 + 1)/(2*u1^2)"))}});
            return sandwich(inner);
        }
    }
    throw UnknownName("canonical operator");
}

ScalarTrio scalar_trio() {
    MatrixDiffOp p(1), q(1), r(1);
    p.at(0, 0) = ScalarDiffOp::D();
    q.at(0, 0) = ScalarDiffOp::term(parse("2*u1"), 1) + ScalarDiffOp(parse("u1x"));
    r.at(0, 0) = ScalarDiffOp::D(3);
    return {p, q, r};
}

Expr param(char prefix, int i) { return Expr::param(std::string(1, prefix) + std::to_string(i)); }

namespace {

jet::Substitution rename(char prefix, int n) {
    jet::Substitution s;
    if (prefix == 'c') return s;
    for (int i = 1; i <= n; ++i) s.emplace(Vars::param("c" + std::to_string(i)), param(prefix, i));
    return s;
}

Expr parse_in(const std::string& text, char prefix, int n) {
    Expr e = parse(text);
    return prefix == 'c' ? e : e.substitute(rename(prefix, n));
}

// ---------------------------------------------------------------------------
// Family data. Metric entries transcribe the theorems; the connections are the
// output of ansatz_search, aligned with the metric parameters.

ParamFamily make_th1() {
    ParamFamily f;
    f.tag = "Th1";
    f.r = CanonicalTag::R2;
    f.nparams = 5;
    f.metric = {{"c1*u1 + c2", "c3*u1/2 + c1*u2/2 + c5"}, {"c3*u1/2 + c1*u2/2 + c5", "c3*u2 + c4"}};
    f.connection = {{{"c1/2", "0"}, {"c3/2", "0"}}, {{"0", "c1/2"}, {"0", "c3/2"}}};
    f.branches = {{1, {}, {}}};
    return f;
}

ParamFamily make_th2() {
    ParamFamily f;
    f.tag = "Th2";
    f.r = CanonicalTag::R3_1;
    f.nparams = 7;
    f.metric = {{"c1*u1 + c2*u2 + c3", "c4*u1 + c1*u2 + c5"}, {"c4*u1 + c1*u2 + c5", "c6*u1 + c4*u2 + c7"}};
    f.connection = {{{"c1/2", "c2/2"}, {"c4/2", "c1/2"}}, {{"c4/2", "c1/2"}, {"c6/2", "c4/2"}}};
    f.variety = {"c1*c4 - c2*c6", "c3*c4 - c7*c2", "c3*c6 - c1*c7"};
    f.branches = {{1, {2}, {{6, "c4*c1/c2"}, {7, "c3*c4/c2"}}},
                  {2, {3}, {{2, "0"}, {6, "c7*c1/c3"}, {4, "0"}}},
                  {3, {}, {{2, "0"}, {3, "0"}, {1, "0"}}},
                  {4, {1}, {{2, "0"}, {3, "0"}, {4, "0"}, {7, "0"}}}};
    f.pencils = {{1, 1, {{{"c4", "d4*c2/d2"}}, {{"d3", "d2*c3/c2"}, {"c1", "d1*c2/d2"}}}, {}},
                 {1, 2, {{{"d7", "d3*c4/c2"}}}, {}},
                 {1, 3, {{{"d6", "d4*c1/c2"}, {"d7", "d4*c3/c2"}}}, {}},
                 {1, 4, {{{"d6", "c4*d1/c2"}}}, {}},
                 {2, 2, {{{"d7", "d3*c7/c3"}}, {{"d1", "d3*c1/c3"}}}, {}},
                 {2, 3, {{{"d4", "0"}, {"d6", "d7*c1/c3"}}}, {}},
                 {2, 4, {{{"d6", "c7*d1/c3"}}}, {}},
                 {3, 3, {{}}, {}},
                 {3, 4, {{{"c4", "0"}, {"c7", "0"}}}, {}},
                 {4, 4, {{}}, {}}};
    return f;
}

ParamFamily make_th3() {
    ParamFamily f;
    f.tag = "Th3";
    f.r = CanonicalTag::R3_2;
    f.nparams = 6;
    f.metric = {{"c1*u1 + c2*u2", "c4*u1 + c3/u1 + c2*u2^2/(2*u1)"},
                {"c4*u1 + c3/u1 + c2*u2^2/(2*u1)", "2*c4*u2 + c6/u1 - c1*u2^2/u1 + c5"}};
    f.connection = {{{"c1/2", "c2/2"}, {"c4", "-c1/2"}}, {{"(-c2*u2^2/2 - c3)/u1^2", "(c1*u1/2 + c2*u2)/u1"}, {"(c1*u2^2/2 - c6/2)/u1^2", "(c4*u1 - c1*u2)/u1"}}};
    f.variety = {"c2*c6 + 2*c1*c3", "c2*c5", "c1*c5"};
    f.branches = {{1, {1}, {{5, "0"}, {3, "-c2*c6/(2*c1)"}}},
                  {2, {2}, {{1, "0"}, {5, "0"}, {6, "0"}}},
                  {3, {}, {{1, "0"}, {2, "0"}}}};
    f.pencils = {{1, 1, {{{"d6", "d1*c6/c1"}}, {{"d2", "d1*c2/c1"}}}, {}},
                 {1, 2, {{{"d3", "-d2*c6/(2*c1)"}}}, {}},
                 {1, 3, {{{"d3", "-d6*c2/(2*c1)"}, {"d5", "0"}}}, {}},
                 {2, 2, {{}}, {}},
                 {2, 3, {{{"d5", "0"}, {"d6", "0"}}}, {}},
                 {3, 3, {{}}, {}}};
    return f;
}

ParamFamily make_th4() {
    ParamFamily f;
    f.tag = "Th4";
    f.r = CanonicalTag::R3_3;
    f.nparams = 6;
    f.metric = {{"c1*u1 + c2*u2 + c3", "c4*u1 - c2/(2*u1) + c3*u2/u1 + c2*u2^2/(2*u1)"},
                {"c4*u1 - c2/(2*u1) + c3*u2/u1 + c2*u2^2/(2*u1)", "2*c4*u2 + c1/u1 + c5*u2/u1 - c1*u2^2/u1 + c6"}};
    f.connection = {{{"c1/2", "c2/2"}, {"c4", "-c1/2"}}, {{"(-c2*u2^2/2 - c3*u2 + c2/2)/u1^2", "(c1*u1/2 + c2*u2 + c3)/u1"}, {"(c1*u2^2/2 - c5*u2/2 - c1/2)/u1^2", "(c4*u1 - c1*u2 + c5/2)/u1"}}};
    f.variety = {"c2*c5 + 2*c1*c3", "c2*c6 - 2*c3*c4", "c1*c6 + c4*c5"};
    f.branches = {{1, {2}, {{5, "-2*c1*c3/c2"}, {6, "2*c3*c4/c2"}}},
                  {2, {3}, {{2, "0"}, {1, "0"}, {4, "0"}}},
                  {3, {6}, {{2, "0"}, {3, "0"}, {1, "-c4*c5/c6"}}},
                  {4, {5}, {{2, "0"}, {3, "0"}, {6, "0"}, {4, "0"}}},
                  {5, {}, {{2, "0"}, {3, "0"}, {5, "0"}, {6, "0"}}}};
    f.pencils = {{1, 1, {{{"d3", "d2*c3/c2"}}, {{"d1", "d2*c1/c2"}, {"d4", "d2*c4/c2"}}}, {}},
                 {1, 2, {{{"d5", "-2*d3*c1/c2"}, {"d6", "2*d3*c4/c2"}}}, {}},
                 {1, 3, {{{"d6", "2*d4*c3/c2"}}}, {"d4", "c3"}},
                 // first alternative is empty on branch 4 (d4 = 0 there); the second is the working condition
                 {1, 4, {{{"d5", "-2*d4*c3/c2"}}, {{"d5", "-2*d1*c3/c2"}}}, {"c3"}},
                 {1, 5, {{{"c3", "0"}}}, {}},
                 {2, 2, {{}}, {}},
                 {3, 3, {{{"d5", "0"}, {"d6", "0"}}, {{"d5", "d6*c5/c6"}}, {{"d4", "d6*c4/c6"}}}, {}},
                 {3, 4, {{{"d1", "-d5*c4/c6"}}}, {}},
                 {3, 5, {{{"d1", "-d4*c5/c6"}}}, {}},
                 {4, 4, {{}}, {}},
                 {4, 5, {{{"d4", "0"}}}, {}},
                 {5, 5, {{}}, {}}};
    f.excluded = {{2, 3}, {2, 4}, {2, 5}};
    return f;
}

const std::vector<ParamFamily>& families() {
    static const std::vector<ParamFamily> all = {make_th1(), make_th2(), make_th3(), make_th4()};
    return all;
}

}  // namespace

const std::vector<std::string>& family_tags() {
    static const std::vector<std::string> tags = {"Th1", "Th2", "Th3", "Th4"};
    return tags;
}

const ParamFamily& family(const std::string& tag) {
    for (const auto& f : families())
        if (f.tag == tag) return f;
    throw UnknownName("family '" + tag + "' (expected Th1..Th4)");
}

std::vector<Expr> ParamFamily::variety_polys(char prefix) const {
    std::vector<Expr> out;
    for (const auto& v : variety) out.push_back(parse_in(v, prefix, nparams));
    return out;
}

Metric ParamFamily::metric_of(char prefix) const {
    Metric g;
    for (const auto& row : metric) {
        g.g.emplace_back();
        for (const auto& e : row) g.g.back().push_back(parse_in(e, prefix, nparams));
    }
    return g;
}

Connection ParamFamily::connection_of(char prefix) const {
    if (connection.empty()) throw Error("family " + tag + " has no stored connection");
    Connection c;
    for (const auto& a : connection) {
        c.gamma.emplace_back();
        for (const auto& b : a) {
            c.gamma.back().emplace_back();
            for (const auto& e : b) c.gamma.back().back().push_back(parse_in(e, prefix, nparams));
        }
    }
    return c;
}

const Branch& ParamFamily::branch(int k) const {
    for (const auto& b : branches)
        if (b.label == k) return b;
    throw UnknownName(tag + " has no branch " + std::to_string(k));
}

jet::Substitution ParamFamily::branch_substitution(int k, char prefix) const {
    jet::Substitution s;
    for (const auto& [i, e] : branch(k).solution) s.emplace(Vars::param(std::string(1, prefix) + std::to_string(i)), parse_in(e, prefix, nparams));
    return s;
}

namespace {

jet::Substitution values_substitution(const ParamFamily& f, const Values& values, char prefix) {
    jet::Substitution s;
    for (const auto& [name, v] : values) {
        if (name.size() < 2 || name[0] != prefix) throw UnknownName("parameter '" + name + "' for prefix " + prefix);
        int i = std::stoi(name.substr(1));
        if (i < 1 || i > f.nparams) throw UnknownName("parameter '" + name + "' of " + f.tag);
        s.emplace(Vars::param(name), v);
    }
    return s;
}

}  // namespace

Instance instantiate(const ParamFamily& f, const Values& values, char prefix) {
    auto s = values_substitution(f, values, prefix);
    Instance inst;
    Metric g = f.metric_of(prefix);
    for (auto& row : g.g)
        for (auto& e : row) e = e.substitute(s);
    Connection c = f.connection_of(prefix);
    for (auto& a : c.gamma)
        for (auto& b : a)
            for (auto& e : b) e = e.substitute(s);
    inst.metric = g;
    inst.connection = c;
    inst.op = geometry::op_from_metric(g, c);
    return inst;
}

bool on_variety(const ParamFamily& f, const Values& values, char prefix) {
    auto s = values_substitution(f, values, prefix);
    for (const auto& p : f.variety_polys(prefix))
        if (!vanishes(p.substitute(s))) return false;
    return true;
}

std::vector<int> branches_at(const ParamFamily& f, const Values& values, char prefix) {
    auto s = values_substitution(f, values, prefix);
    auto value = [&](int i) { return param(prefix, i).substitute(s); };
    std::vector<int> out;
    for (const auto& b : f.branches) {
        bool ok = true;
        for (int i : b.nonzero)
            if (vanishes(value(i))) ok = false;
        if (!ok) continue;
        for (const auto& [i, e] : b.solution) {
            Expr rhs;
            try {
                rhs = parse_in(e, prefix, f.nparams).substitute(s);
            } catch (const DivisionByZero&) {
                ok = false;
                break;
            }
            if (!vanishes(value(i) - rhs)) ok = false;
        }
        if (ok) out.push_back(b.label);
    }
    return out;
}

PencilVerdict pencil_admissible(const ParamFamily& f, const Values& c, const Values& d) {
    if (!on_variety(f, c, 'c')) throw NotOnVariety("first point (c) is not on the variety of " + f.tag);
    if (!on_variety(f, d, 'd')) throw NotOnVariety("second point (d) is not on the variety of " + f.tag);
    auto sc = values_substitution(f, c, 'c');
    auto sd = values_substitution(f, d, 'd');
    const Expr lam = Expr::var(op::lambda_var());
    jet::Substitution line;
    for (int i = 1; i <= f.nparams; ++i)
        line.emplace(Vars::param("c" + std::to_string(i)), param('c', i).substitute(sc) - lam * param('d', i).substitute(sd));
    PencilVerdict v;
    v.admissible = true;
    for (const auto& p : f.variety_polys('c'))
        if (!vanishes(p.substitute(line))) v.admissible = false;
    // matched rows of the table
    auto bc = branches_at(f, c, 'c');
    auto bd = branches_at(f, d, 'd');
    jet::Substitution both = sc;
    for (auto& [k, e] : sd) both.emplace(k, e);
    for (const auto& rule : f.pencils) {
        if (std::find(bc.begin(), bc.end(), rule.k) == bc.end()) continue;
        if (std::find(bd.begin(), bd.end(), rule.l) == bd.end()) continue;
        bool hyp = true;
        for (const auto& n : rule.nonzero) {
            std::string name = n;
            if (vanishes(Expr::param(name).substitute(both))) hyp = false;
        }
        if (!hyp) continue;
        for (const auto& alt : rule.alternatives) {
            bool ok = true;
            for (const auto& [name, e] : alt) {
                try {
                    if (!vanishes(Expr::param(name).substitute(both) - parse(e).substitute(both))) ok = false;
                } catch (const DivisionByZero&) {
                    ok = false;
                }
            }
            if (ok) {
                v.labels.push_back(rule.label());
                break;
            }
        }
    }
    return v;
}

// ---------------------------------------------------------------------------
// Pencil cases

namespace {

std::string pname(char prefix, int i) { return std::string(1, prefix) + std::to_string(i); }

void close_substitution(jet::Substitution& s) {
    for (int pass = 0; pass < 8; ++pass) {
        bool changed = false;
        for (auto& [v, e] : s) {
            Expr next = e.substitute(s);
            if (!(next == e)) {
                e = next;
                changed = true;
            }
        }
        if (!changed) return;
    }
    throw Error("cyclic parameter constraints");
}

Values to_values(const jet::Substitution& s, char prefix, int n) {
    Values out;
    for (int i = 1; i <= n; ++i) {
        auto it = s.find(Vars::param(pname(prefix, i)));
        if (it != s.end()) out[pname(prefix, i)] = it->second;
    }
    return out;
}

}  // namespace

std::vector<PencilCase> pencil_cases(const ParamFamily& f) {
    std::vector<PencilCase> out;
    for (const auto& rule : f.pencils) {
        for (std::size_t a = 0; a < rule.alternatives.size(); ++a) {
            PencilCase pc;
            pc.label = rule.label();
            pc.alternative = static_cast<int>(a) + 1;
            jet::Substitution s;
            for (const auto& [name, rhs] : rule.alternatives[a]) {
                Expr value = parse(rhs).substitute(s);
                jet::Substitution one{{Vars::param(name), value}};
                for (auto& [v, e] : s) e = e.substitute(one);
                s[Vars::param(name)] = value;
            }
            auto add_branch = [&](int k, char prefix) {
                for (const auto& [i, rhs] : f.branch(k).solution) {
                    VarId v = Vars::param(pname(prefix, i));
                    Expr value;
                    try {
                        value = parse_in(rhs, prefix, f.nparams).substitute(s);
                    } catch (const DivisionByZero&) {
                        pc.notes.push_back("branch " + std::to_string(k) + " formula for " + pname(prefix, i) +
                                           " is singular under the constraints; dropped");
                        continue;
                    }
                    auto it = s.find(v);
                    if (it != s.end()) {
                        if (!vanishes(it->second - value))
                            pc.notes.push_back("constraint on " + pname(prefix, i) + " overrides branch " +
                                               std::to_string(k) + " formula " + rhs);
                        continue;
                    }
                    jet::Substitution one{{v, value}};
                    for (auto& [w, e] : s) e = e.substitute(one);
                    s[v] = value;
                }
            };
            add_branch(rule.k, 'c');
            add_branch(rule.l, 'd');
            close_substitution(s);
            auto check_nonzero = [&](const std::string& name, const std::string& why) {
                if (vanishes(Expr::param(name).substitute(s))) {
                    pc.hypotheses_hold = false;
                    pc.notes.push_back(why + " requires " + name + " != 0, but the constraints force " + name + " = 0");
                }
            };
            for (int i : f.branch(rule.k).nonzero) check_nonzero(pname('c', i), "branch " + std::to_string(rule.k));
            for (int i : f.branch(rule.l).nonzero) check_nonzero(pname('d', i), "branch " + std::to_string(rule.l));
            for (const auto& n : rule.nonzero) check_nonzero(n, "the table entry");
            pc.c = to_values(s, 'c', f.nparams);
            pc.d = to_values(s, 'd', f.nparams);
            out.push_back(std::move(pc));
        }
    }
    return out;
}

Values branch_values(const ParamFamily& f, int k, char prefix) {
    jet::Substitution s = f.branch_substitution(k, prefix);
    close_substitution(s);
    return to_values(s, prefix, f.nparams);
}

Values branch_point(const ParamFamily& f, int k, char prefix, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> dist(1, 7);
    jet::Substitution free;
    for (int i = 1; i <= f.nparams; ++i) {
        int v = dist(rng);
        free.emplace(Vars::param(pname(prefix, i)), Expr(Rational(rng() % 2 ? v : -v)));
    }
    jet::Substitution s = f.branch_substitution(k, prefix);
    close_substitution(s);
    for (auto& [v, e] : s) free[v] = e.substitute(free);
    return to_values(free, prefix, f.nparams);
}

// ---------------------------------------------------------------------------
// Ansatz search

AnsatzShape AnsatzShape::standard() {
    return {{"1", "u1", "u2", "u2^2/u1", "u2/u1", "1/u1"},
            {"1", "u1", "u2", "1/u1", "u2/u1", "u2^2/u1", "1/u1^2", "u2/u1^2", "u2^2/u1^2"}};
}

namespace {

// Linear equations sum_a x_a E_a = 0 (as functions) turned into rational rows.
class LinearSystem {
public:
    explicit LinearSystem(std::size_t unknowns) : n_(unknowns), basis_(unknowns, [](const Rational& x) { return x == 0; }) {}

    // terms: (unknown index, expression) contributions to one identity
    void add_identity(const std::vector<std::pair<std::size_t, Expr>>& terms) {
        std::vector<std::pair<std::size_t, Expr>> nz;
        for (const auto& t : terms)
            if (!t.second.is_zero()) nz.push_back(t);
        if (nz.empty()) return;
        jet::Poly l = nz[0].second.den();
        for (std::size_t i = 1; i < nz.size(); ++i) {
            const auto& d = nz[i].second.den();
            jet::Poly g = jet::gcd(l, d);
            l = l * jet::Poly::divide(d, g).value();
        }
        std::map<jet::Monomial, std::vector<Rational>, MonoLess> rows;
        for (const auto& [a, e] : nz) {
            jet::Poly scaled = e.num() * jet::Poly::divide(l, e.den()).value();
            for (const auto& t : scaled.terms()) {
                auto& row = rows[t.mono];
                if (row.empty()) row.assign(n_, Rational(0));
                row[a] += t.coef;
            }
        }
        for (auto& [m, row] : rows) basis_.add(std::move(row));
    }

    const linalg::EchelonBasis<Rational>& basis() const { return basis_; }

private:
    struct MonoLess {
        bool operator()(const jet::Monomial& a, const jet::Monomial& b) const { return compare(a, b) < 0; }
    };
    std::size_t n_;
    linalg::EchelonBasis<Rational> basis_;
};

// Coordinates of e in a basis of Laurent monomials.
std::optional<std::vector<Rational>> laurent_coords(const Expr& e, const std::vector<Expr>& basis) {
    std::vector<Rational> out(basis.size(), Rational(0));
    for (const auto& t : e.num().terms()) {
        Expr term = Expr::fraction(jet::Poly::term(t.mono, Rational(1)), e.den());
        bool found = false;
        for (std::size_t b = 0; b < basis.size(); ++b) {
            Expr ratio = term / basis[b];
            if (ratio.is_constant()) {
                out[b] += t.coef * ratio.constant_value();
                found = true;
                break;
            }
        }
        if (!found) return std::nullopt;
    }
    return out;
}

const ParamFamily& family_for(CanonicalTag r) {
    for (const auto& f : families())
        if (f.r == r) return f;
    throw UnknownName("no family for " + tag_name(r));
}

// Generators of the parameter ideal spanned by expressions in (u, params):
// coefficient vectors of the parameter polynomials multiplying each u-monomial.
std::vector<jet::Poly> parameter_generators(const std::vector<Expr>& exprs) {
    std::vector<jet::Poly> out;
    auto is_field = [](VarId v) { return !Vars::is_param(v); };
    for (const auto& e : exprs) {
        if (e.is_zero()) continue;
        if (e.den().contains_if([](VarId v) { return Vars::is_param(v); }))
            throw Error("parameter in a denominator: " + e.str());
        for (auto& [m, c] : e.num().collect(is_field)) out.push_back(c);
    }
    return out;
}

}  // namespace

bool same_span(const std::vector<Expr>& a, const std::vector<Expr>& b) {
    auto ga = parameter_generators(a), gb = parameter_generators(b);
    std::vector<jet::Monomial> monos;
    auto index = [&](const jet::Monomial& m) {
        for (std::size_t i = 0; i < monos.size(); ++i)
            if (monos[i] == m) return i;
        monos.push_back(m);
        return monos.size() - 1;
    };
    for (const auto* g : {&ga, &gb})
        for (const auto& p : *g)
            for (const auto& t : p.terms()) index(t.mono);
    auto vec = [&](const jet::Poly& p) {
        std::vector<Rational> v(monos.size(), Rational(0));
        for (const auto& t : p.terms()) v[index(t.mono)] = t.coef;
        return v;
    };
    auto is_zero = [](const Rational& x) { return x == 0; };
    linalg::EchelonBasis<Rational> ba(monos.size(), is_zero), bb(monos.size(), is_zero);
    for (const auto& p : ga) ba.add(vec(p));
    for (const auto& p : gb) bb.add(vec(p));
    if (ba.rank() != bb.rank()) return false;
    for (const auto& p : ga)
        if (!bb.contains(vec(p))) return false;
    return true;
}

AnsatzResult ansatz_search(CanonicalTag r, const AnsatzShape& shape) {
    const int m = 2;
    const MatrixDiffOp R = canonical_operator(r);
    std::vector<Expr> bg, bc;
    for (const auto& s : shape.metric_basis) bg.push_back(parse(s));
    for (const auto& s : shape.connection_basis) bc.push_back(parse(s));
    // unknowns: metric entries (i<=j) x basis, then Gamma^{ij}_k x basis
    struct Unknown {
        bool metric;
        int i, j, k;
        std::size_t b;
    };
    std::vector<Unknown> unknowns;
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j)
            for (std::size_t b = 0; b < bg.size(); ++b) unknowns.push_back({true, i, j, 0, b});
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                for (std::size_t b = 0; b < bc.size(); ++b) unknowns.push_back({false, i, j, k, b});
    const std::size_t n = unknowns.size();
    auto op_of = [&](const Unknown& u) {
        MatrixDiffOp p(m);
        if (u.metric) {
            p.at(u.i, u.j) = ScalarDiffOp::term(bg[u.b], 1);
            if (u.i != u.j) p.at(u.j, u.i) = ScalarDiffOp::term(bg[u.b], 1);
        } else {
            p.at(u.i, u.j) = ScalarDiffOp(bc[u.b] * Expr::u(u.k + 1, 1));
        }
        return p;
    };
    LinearSystem sys(n);
    // skew-adjointness: slots (i,j,power)
    std::map<std::tuple<int, int, int>, std::vector<std::pair<std::size_t, Expr>>> skew;
    // bracket: Euler residual in psi3 components
    std::vector<std::vector<std::pair<std::size_t, Expr>>> bracket(m);
    const JetContext big = kCtx.with_cap(poisson::kBracketJetCap);
    for (std::size_t a = 0; a < n; ++a) {
        MatrixDiffOp p = op_of(unknowns[a]);
        MatrixDiffOp s = p + p.adjoint(big);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                for (const auto& [k, c] : s.at(i, j).coefficients()) skew[{i, j, k}].emplace_back(a, c);
        Expr t = poisson::schouten_integrand_unchecked(p, R, big);
        for (int i = 0; i < m; ++i) bracket[i].emplace_back(a, jet::euler(t, jet::DependentVar::psi(3, i + 1), big));
    }
    for (auto& [slot, terms] : skew) sys.add_identity(terms);
    for (auto& terms : bracket) sys.add_identity(terms);
    auto null = sys.basis().nullspace();

    AnsatzResult res;
    res.dimension = null.size();
    const ParamFamily& fam = family_for(r);
    if (static_cast<int>(res.dimension) < fam.nparams)
        throw AnsatzTooSmall(tag_name(r) + ": solution space has dimension " + std::to_string(res.dimension) +
                             ", the theorem's family has " + std::to_string(fam.nparams));

    const std::size_t ng = 3 * bg.size();
    auto metric_of_vector = [&](const std::vector<Rational>& v) {
        Metric g{geometry::Matrix(m, std::vector<Expr>(m))};
        for (std::size_t a = 0; a < ng; ++a) {
            if (v[a] == 0) continue;
            const auto& u = unknowns[a];
            g.g[u.i][u.j] += Expr(v[a]) * bg[u.b];
            if (u.i != u.j) g.g[u.j][u.i] += Expr(v[a]) * bg[u.b];
        }
        return g;
    };
    auto connection_of_vector = [&](const std::vector<Rational>& v) {
        Connection c{std::vector<std::vector<std::vector<Expr>>>(m, std::vector<std::vector<Expr>>(m, std::vector<Expr>(m)))};
        for (std::size_t a = ng; a < n; ++a) {
            if (v[a] == 0) continue;
            const auto& u = unknowns[a];
            c.gamma[u.i][u.j][u.k] += Expr(v[a]) * bc[u.b];
        }
        return c;
    };

    // Align with the theorem's parametrisation through the metric part.
    Metric fam_metric = fam.metric_of('c');
    bool aligned = static_cast<int>(res.dimension) == fam.nparams;
    std::vector<std::vector<Rational>> param_vectors;  // solution vector per c_i
    if (aligned) {
        std::vector<std::vector<Rational>> gcols;  // metric projection of each null vector
        for (const auto& v : null) gcols.emplace_back(v.begin(), v.begin() + static_cast<long>(ng));
        for (int i = 1; i <= fam.nparams && aligned; ++i) {
            VarId ci = Vars::param("c" + std::to_string(i));
            std::vector<Rational> target(ng, Rational(0));
            for (std::size_t a = 0; a < ng && aligned; ++a) {
                const auto& u = unknowns[a];
                (void)u;
            }
            std::size_t offset = 0;
            for (int p = 0; p < m && aligned; ++p)
                for (int q = p; q < m && aligned; ++q) {
                    Expr entry = fam_metric.g[p][q].coefficient(ci, 1);
                    auto coords = laurent_coords(entry, bg);
                    if (!coords) {
                        aligned = false;
                        break;
                    }
                    for (std::size_t b = 0; b < bg.size(); ++b) target[offset + b] = (*coords)[b];
                    offset += bg.size();
                }
            if (!aligned) break;
            // solve sum_s x_s gcols[s] = target
            std::vector<std::vector<Rational>> a(ng, std::vector<Rational>(null.size()));
            for (std::size_t row = 0; row < ng; ++row)
                for (std::size_t s = 0; s < null.size(); ++s) a[row][s] = gcols[s][row];
            auto x = linalg::solve<Rational>(a, target, null.size(), [](const Rational& z) { return z == 0; });
            if (!x) {
                aligned = false;
                break;
            }
            std::vector<Rational> v(n, Rational(0));
            for (std::size_t s = 0; s < null.size(); ++s)
                for (std::size_t k = 0; k < n; ++k) v[k] += (*x)[s] * null[s][k];
            param_vectors.push_back(std::move(v));
        }
    }
    if (!aligned) {
        param_vectors = null;
    }
    res.matches_family = aligned;
    res.metric.g.assign(m, std::vector<Expr>(m));
    res.connection.gamma.assign(m, std::vector<std::vector<Expr>>(m, std::vector<Expr>(m)));
    for (std::size_t s = 0; s < param_vectors.size(); ++s) {
        Expr c = param('c', static_cast<int>(s) + 1);
        Metric g = metric_of_vector(param_vectors[s]);
        Connection con = connection_of_vector(param_vectors[s]);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                res.metric.g[i][j] += c * g.g[i][j];
                for (int k = 0; k < m; ++k) res.connection.gamma[i][j][k] += c * con.gamma[i][j][k];
            }
    }
    if (aligned) {
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                if (!vanishes(res.metric.g[i][j] - fam_metric.g[i][j])) res.matches_family = false;
    }
    res.variety = geometry::levi_civita_residuals(res.metric, res.connection);
    res.variety_matches = res.matches_family && same_span(res.variety, fam.variety_polys('c'));
    return res;
}

// ---------------------------------------------------------------------------
// Known systems

MatrixDiffOp graded_part(const MatrixDiffOp& p, int n) {
    MatrixDiffOp out(p.size());
    for (int i = 0; i < p.size(); ++i)
        for (int j = 0; j < p.size(); ++j)
            for (const auto& [k, c] : p.at(i, j).coefficients()) {
                auto comps = jet::homogeneous_components(c);
                auto it = comps.find(n - k);
                if (it != comps.end()) out.at(i, j) = out.at(i, j) + ScalarDiffOp::term(it->second, k);
            }
    return out;
}

namespace {

std::optional<OperatorMatch> match_first_order(const ParamFamily& f, const MatrixDiffOp& first, char prefix) {
    Metric g;
    Connection con;
    if (!geometry::hydrodynamic_data(first, g, con)) return std::nullopt;
    Metric fm = f.metric_of(prefix);
    // linear equations in c from metric entries, solved over the expression field
    std::vector<std::vector<Expr>> rows;
    std::vector<Expr> rhs;
    std::vector<VarId> params;
    for (int i = 1; i <= f.nparams; ++i) params.push_back(Vars::param(prefix + std::to_string(i)));
    for (int i = 0; i < 2; ++i)
        for (int j = i; j < 2; ++j) {
            Expr diff = fm.g[i][j] - g.g[i][j];
            // coefficients with respect to field monomials (Laurent): clear the u-denominator
            Expr cleared = diff * Expr(diff.den());
            auto is_field = [](VarId v) { return Vars::is_jet(v); };
            for (auto& [mono, cof] : cleared.num().collect(is_field)) {
                Expr ce(cof);
                std::vector<Expr> row;
                for (VarId c : params) row.push_back(ce.coefficient(c, 1));
                Expr constant = ce;
                for (VarId c : params) constant = constant.substitute({{c, Expr()}});
                rows.push_back(row);
                rhs.push_back(-constant);
            }
        }
    auto x = linalg::solve<Expr>(rows, rhs, params.size(), [](const Expr& e) { return vanishes(e); });
    if (!x) return std::nullopt;
    OperatorMatch om;
    om.family = f.tag;
    Values vals, all;
    for (int i = 0; i < f.nparams; ++i) {
        all[prefix + std::to_string(i + 1)] = (*x)[i];
        if (!(*x)[i].is_zero()) vals[prefix + std::to_string(i + 1)] = (*x)[i];
    }
    // the whole first-order operator (connection included) must agree
    if (!(instantiate(f, all, prefix).op - first).is_zero()) return std::nullopt;
    om.params = vals;
    return om;
}

}  // namespace

SystemMatch match_known_system(const MatrixDiffOp& a, const MatrixDiffOp& b) { return match_known_system({a, b}); }

SystemMatch match_known_system(const std::vector<MatrixDiffOp>& list) {
    if (list.empty() || list.size() > 2) throw NoMatch("expected one or two operators");
    for (const auto& p : list)
        if (p.size() != 2) throw NoMatch("only two-component systems are catalogued");
    const std::size_t n = list.size();
    std::vector<const MatrixDiffOp*> ops;
    for (const auto& p : list) ops.push_back(&p);
    // Which canonical operator appears in the higher-order part of either operator?
    std::optional<CanonicalTag> tag;
    std::optional<Expr> scales[2];
    for (std::size_t s = 0; s < n; ++s) {
        MatrixDiffOp higher = *ops[s] - graded_part(*ops[s], 1);
        if (higher.is_zero()) continue;
        bool found = false;
        for (auto t : {CanonicalTag::R2, CanonicalTag::R3_1, CanonicalTag::R3_2, CanonicalTag::R3_3}) {
            auto k = op::equal_up_to_scale(higher, canonical_operator(t));
            if (!k) continue;
            if (tag && *tag != t) throw NoMatch("the two operators carry different canonical parts");
            tag = t;
            scales[s] = k;
            found = true;
            break;
        }
        if (!found) throw NoMatch("higher-order part is not a multiple of a canonical operator: " + higher.str());
    }
    if (!tag) throw NoMatch("neither operator has a higher-order part");
    const ParamFamily& f = family_for(*tag);
    SystemMatch out;
    out.family = f.tag;
    for (std::size_t s = 0; s < n; ++s) {
        auto om = match_first_order(f, graded_part(*ops[s], 1), s == 0 ? 'c' : 'd');
        if (!om) throw NoMatch("first-order part of operator " + std::to_string(s + 1) + " is not in " + f.tag);
        om->r_scale = scales[s];
        om->r_tag = tag_name(*tag);
        out.ops.push_back(*om);
    }
    return out;
}

std::optional<Expr> proportional(const Values& found, const Values& expected) {
    std::set<std::string> names;
    for (const auto& [k, v] : found) names.insert(k);
    for (const auto& [k, v] : expected) names.insert(k);
    auto get = [](const Values& m, const std::string& k) {
        auto it = m.find(k);
        return it == m.end() ? Expr() : it->second;
    };
    std::optional<Expr> kappa;
    for (const auto& k : names) {
        Expr f = get(found, k), e = get(expected, k);
        if (e.is_zero()) {
            if (!vanishes(f)) return std::nullopt;
            continue;
        }
        Expr r = f / e;
        if (!kappa) kappa = r;
        else if (!vanishes(*kappa - r)) return std::nullopt;
    }
    if (kappa && (!kappa->depends_on_if([](VarId v) { return Vars::is_jet(v); })) && !kappa->is_zero()) return kappa;
    return std::nullopt;
}

}  // namespace hamtrio::catalog
