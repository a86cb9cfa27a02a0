#include "doctest.h"
#include "hamtrio/catalog.hpp"
#include "hamtrio/cli.hpp"
#include "hamtrio/document.hpp"
#include "hamtrio/errors.hpp"
#include "hamtrio/hierarchy.hpp"
#include "hamtrio/parse.hpp"

using namespace hamtrio;
using namespace hamtrio::hierarchy;
using text::parse_expression;

namespace {
Expr E(const char* s) { return parse_expression(s); }
const JetContext ctx1{1, 12};
const JetContext ctx2{2, 12};
MatrixDiffOp scalar(const op::ScalarDiffOp& s) {
    MatrixDiffOp m(1);
    m.at(0, 0) = s;
    return m;
}
}  // namespace

TEST_CASE("functionals and gradients") {
    Functional f{"H", E("u1^3 - u1x^2/2")};
    auto g = f.gradient(ctx1);
    REQUIRE(g.size() == 1);
    CHECK(g[0] == E("3*u1^2 + u1xx"));
    CHECK(same_functional({"a", E("u1*u2x")}, {"b", E("-u1x*u2")}, ctx2));
    CHECK_FALSE(same_functional({"a", E("u1*u2x")}, {"b", E("u1x*u2")}, ctx2));
}

TEST_CASE("Casimirs") {
    auto t = catalog::scalar_trio();
    CHECK(casimir_check({"C", E("u1")}, t.p1, ctx1));
    CHECK(casimir_check({"C", E("2*sqrt(u1)")}, t.q1, ctx1));
    CHECK_FALSE(casimir_check({"C", E("u1^2")}, t.q1, ctx1));
}

TEST_CASE("first flows of a two-component trio") {
    auto d = doc::load(cli::default_defs_dir() + "/example45.ham");
    const auto& td = d.trio("T");
    Trio trio{d.op(td.p1), d.op(td.q1), d.op(td.r)};
    Expr eps = Expr::var(op::eps_var());
    auto flows = first_flows(trio, {{"C1", E("u1")}, {"C2", E("u2/u1")}}, eps, ctx2);
    REQUIRE(flows.size() == 2);
    auto f1 = flows[0].at_eps(Expr(1));
    CHECK(f1.rhs[0] == E("-u1x/2"));
    CHECK(f1.rhs[1] == E("-u2x/2"));
    CHECK(flows_commute(flows[0], flows[1], ctx2));
    // the eps^0 part is the dispersionless flow
    auto f2 = flows[1].eps_part(0);
    CHECK(f2.rhs[0] == E("3*(u1*u2x - u2*u1x)/(2*u1^2)"));
    CHECK(f2.rhs[1] == E("3*(1 - u2^2)*u1x/(2*u1^3) + 3*u2*u2x/(2*u1^2)"));
    CHECK_THROWS_AS(first_flows(trio, {{"X", E("u1*u2")}}, eps, ctx2), NotACasimir);
}

TEST_CASE("commutators") {
    Flow kdv{{E("6*u1*u1x + u1xxx")}};
    Flow tr{{E("u1x")}};
    CHECK(flows_commute(kdv, tr, ctx1));
    Flow a{{E("u1^2")}};
    Flow b{{E("u1xx")}};
    auto c = commutator(a, b, ctx1);
    CHECK(c[0] == E("-2*u1x^2"));
    CHECK_FALSE(flows_commute(a, b, ctx1));
}

TEST_CASE("Hamiltonian flows") {
    auto d = scalar(op::ScalarDiffOp::D());
    auto yes = is_hamiltonian_flow(Flow{{E("6*u1*u1x + u1xxx")}}, d, ctx1);
    CHECK(yes.verdict == HamiltonianVerdict::Yes);
    REQUIRE(yes.density.has_value());
    auto flow = d.apply(Functional{"H", *yes.density}.gradient(ctx1), ctx1);
    CHECK(flow[0] == E("6*u1*u1x + u1xxx"));
    auto no = is_hamiltonian_flow(Flow{{E("u1x^2")}}, d, ctx1);
    CHECK(no.verdict != HamiltonianVerdict::Yes);
    CHECK(to_string(HamiltonianVerdict::Undecided).size() > 0);
}

TEST_CASE("eps handling") {
    Expr eps = Expr::var(op::eps_var());
    Flow f{{E("u1x") + eps * eps * E("u1xxx")}};
    CHECK(f.at_eps(Expr(2)).rhs[0] == E("u1x + 4*u1xxx"));
    CHECK(f.eps_part(2).rhs[0] == E("u1xxx"));
    CHECK(f.eps_part(1).rhs[0].is_zero());
}
