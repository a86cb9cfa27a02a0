#include <cmath>
#include <random>

#include "doctest.h"
#include "hamtrio/cli.hpp"
#include "hamtrio/document.hpp"
#include "hamtrio/errors.hpp"
#include "hamtrio/invariants.hpp"
#include "hamtrio/parse.hpp"

using namespace hamtrio;
using namespace hamtrio::invariants;
using jet::Vars;
using op::MatrixDiffOp;
using op::Pencil;
using text::parse_expression;

namespace {
Expr E(const char* s) { return parse_expression(s); }
const jet::JetContext ctx{2, 12};
const Expr eps = Expr::var(op::eps_var());

Pencil example_pencil(const std::string& name) {
    auto d = doc::load(cli::default_defs_dir() + "/" + name + ".ham");
    const auto& t = d.trio("T");
    return {-(d.op(t.p1) + (eps * eps) * d.op(t.r)), d.op(t.q1)};
}

jet::Point at(double a, double b) { return {{Vars::jet(1), a}, {Vars::jet(2), b}}; }
}  // namespace

TEST_CASE("rational example: constant invariants") {
    auto pencil = example_pencil("example45");
    auto [g1, g2] = pencil_metrics(pencil);
    auto chart = canonical_coordinates(g1, g2, {1.5, 2.5});
    chart = relabel(chart, {E("(u2 + 1)/u1"), E("(u2 - 1)/u1")});
    chart.inverse = std::vector<Expr>{E("2/(u1 - u2)"), E("(u1 + u2)/(u1 - u2)")};
    auto ci = central_invariants(pencil, chart, 10, 7);
    CHECK(ci.in_fields[0] == Expr::rational(1, 2));
    CHECK(ci.in_fields[1] == Expr::rational(-1, 2));
    REQUIRE(ci.canonical.has_value());
    CHECK((*ci.canonical)[0] == Expr::rational(1, 2));
    CHECK((*ci.canonical)[1] == Expr::rational(-1, 2));
    CHECK(ci.samples.size() == 10);
    CHECK(ci.single_variable);
    auto v = triviality_verdict(ci);
    CHECK(v.verdict == Triviality::Nontrivial);
    CHECK_FALSE(v.numeric_only);
    CHECK_THROWS_AS(relabel(chart, {E("u1"), E("u2")}), SemisimplicityFailure);
}

TEST_CASE("a pencil without dispersive part is trivial") {
    auto pencil = example_pencil("example45");
    pencil.side2 = pencil.side2.map_coefficients([](const Expr& e) { return e.substitute({{op::eps_var(), Expr()}}); });
    auto [g1, g2] = pencil_metrics(pencil);
    auto ci = central_invariants(pencil, canonical_coordinates(g1, g2, {1.5, 2.5}), 5, 1);
    CHECK(ci.in_fields[0].is_zero());
    CHECK(ci.in_fields[1].is_zero());
    CHECK(triviality_verdict(ci).verdict == Triviality::Trivial);
}

TEST_CASE("radical example: single-variable functions and sampled values") {
    auto pencil = example_pencil("example46");
    auto [g1, g2] = pencil_metrics(pencil);
    Domain dom{{{3, 4}, {1, 2}}};
    auto chart = relabel(canonical_coordinates(g1, g2, dom.centre()), {E("(u1 + u2)^2"), E("(u1 - u2)^2")});
    auto ci = central_invariants(pencil, chart, 10, 3, dom);
    CHECK(ci.single_variable);
    REQUIRE(ci.samples.size() == 10);
    for (const auto& s : ci.samples) {
        CHECK(std::abs(s.s[0] + 1 / (8 * std::sqrt(s.lambda[0]))) < 1e-9);
        CHECK(std::abs(s.s[1] - 1 / (8 * std::sqrt(s.lambda[1]))) < 1e-9);
    }
    // equal lambda^1, different lambda^2: s_1 unchanged
    double a = ci.in_fields[0].eval(at(3.5, 1.5));
    double b = ci.in_fields[0].eval(at(3.0, 2.0));
    CHECK(std::abs(a - b) < 1e-9);
    auto v = triviality_verdict(ci);
    CHECK(v.verdict == Triviality::Nontrivial);
}

TEST_CASE("invariance under point transformations") {
    auto pencil = example_pencil("example46");
    auto [g1, g2] = pencil_metrics(pencil);
    auto chart = relabel(canonical_coordinates(g1, g2, {3.5, 1.5}), {E("(u1 + u2)^2"), E("(u1 - u2)^2")});
    auto before = central_invariants(pencil, chart, 0, 1);

    std::mt19937 rng(20);
    std::uniform_int_distribution<int> coef(1, 3);
    for (int trial = 0; trial < 3; ++trial) {
        // linear, triangular quadratic and projective maps, each with a rational inverse
        int a = coef(rng), b = coef(rng);
        Expr ea(a), eb(b);
        std::vector<Expr> phi{Expr::u(1) + ea * Expr::u(2), Expr::u(2)};
        std::vector<Expr> inv{Expr::u(1) - ea * Expr::u(2), Expr::u(2)};
        if (trial == 1) {
            phi = {Expr::u(1), Expr::u(2) + eb * Expr::u(1) * Expr::u(1)};
            inv = {Expr::u(1), Expr::u(2) - eb * Expr::u(1) * Expr::u(1)};
        } else if (trial == 2) {
            phi = {Expr(1) / Expr::u(1), Expr::u(2) / Expr::u(1)};
            inv = {Expr(1) / Expr::u(1), Expr::u(2) / Expr::u(1)};
        }
        CAPTURE(trial);
        Pencil moved{op::point_transform(pencil.side2, phi, inv, ctx), op::point_transform(pencil.side1, phi, inv, ctx)};
        auto [h1, h2] = pencil_metrics(moved);
        std::vector<Expr> expected;
        for (const auto& c : chart.coords) expected.push_back(op::pull_back(c, inv, ctx));
        jet::Point base;
        for (int i = 0; i < 2; ++i) base[Vars::jet(i + 1)] = phi[i].eval(at(3.5, 1.5));
        auto moved_chart =
            relabel(canonical_coordinates(h1, h2, {base[Vars::jet(1)], base[Vars::jet(2)]}), expected);
        auto after = central_invariants(moved, moved_chart, 0, 1);
        for (double x : {3.1, 3.6}) {
            for (double y : {1.2, 1.8}) {
                auto p = at(x, y);
                jet::Point q;
                for (int i = 0; i < 2; ++i) q[Vars::jet(i + 1)] = phi[i].eval(p);
                for (int i = 0; i < 2; ++i) CHECK(std::abs(after.in_fields[i].eval(q) - before.in_fields[i].eval(p)) < 1e-9);
            }
        }
    }
}

TEST_CASE("scalar KdV pencil has a nonzero constant invariant") {
    MatrixDiffOp d(1), q(1), r(1);
    d.at(0, 0) = op::ScalarDiffOp::D();
    q.at(0, 0) = op::ScalarDiffOp::term(E("2*u1"), 1) + op::ScalarDiffOp(E("u1x"));
    r.at(0, 0) = op::ScalarDiffOp::D(3);
    Pencil pencil{q + (eps * eps) * r, d};
    CanonicalChart chart;
    chart.coords = {E("2*u1")};
    chart.base = {1.5};
    chart.labels = {0};
    auto ci = central_invariants(pencil, chart, 4, 1, Domain{{{1, 2}}});
    CHECK(ci.in_fields[0] == Expr::rational(1, 4));
    CHECK(triviality_verdict(ci).verdict == Triviality::Nontrivial);
}

TEST_CASE("semisimplicity failures") {
    geometry::Metric g{{{E("1"), E("0")}, {E("0"), E("1")}}};
    CHECK_THROWS_AS(canonical_coordinates(g, g, {1.5, 2.5}), SemisimplicityFailure);
}
