#include "doctest.h"
#include "hamtrio/catalog.hpp"
#include "hamtrio/diffop.hpp"
#include "hamtrio/errors.hpp"
#include "hamtrio/parse.hpp"

using namespace hamtrio;
using namespace hamtrio::op;
using jet::Expr;
using text::parse_expression;

namespace {
Expr E(const char* s) { return parse_expression(s); }
const JetContext ctx{2, 12};
}  // namespace

TEST_CASE("scalar composition uses the Leibniz rule") {
    ScalarDiffOp d = ScalarDiffOp::D();
    ScalarDiffOp a(E("u1"));
    // D o u1 = u1 D + u1x
    CHECK(d.compose(a, ctx) == ScalarDiffOp::term(E("u1"), 1) + ScalarDiffOp(E("u1x")));
    // D^2 o u1 = u1 D^2 + 2 u1x D + u1xx
    CHECK(ScalarDiffOp::D(2).compose(a, ctx) ==
          ScalarDiffOp::term(E("u1"), 2) + ScalarDiffOp::term(E("2*u1x"), 1) + ScalarDiffOp(E("u1xx")));
    CHECK(a.compose(d, ctx) == ScalarDiffOp::term(E("u1"), 1));
    CHECK(d.compose(d, ctx) == ScalarDiffOp::D(2));
}

TEST_CASE("scalar adjoint") {
    CHECK(ScalarDiffOp::D().adjoint(ctx) == -ScalarDiffOp::D());
    CHECK(ScalarDiffOp::D(3).adjoint(ctx) == -ScalarDiffOp::D(3));
    // (2u D + u_x)^* = -2u D - u_x
    ScalarDiffOp q = ScalarDiffOp::term(E("2*u1"), 1) + ScalarDiffOp(E("u1x"));
    CHECK(q.adjoint(ctx) == -q);
    ScalarDiffOp a = ScalarDiffOp::term(E("u2"), 1);
    CHECK(a.adjoint(ctx) == -ScalarDiffOp::term(E("u2"), 1) - ScalarDiffOp(E("u2x")));
}

TEST_CASE("apply") {
    ScalarDiffOp q = ScalarDiffOp::term(E("2*u1"), 1) + ScalarDiffOp(E("u1x"));
    CHECK(q.apply(E("u1"), ctx) == E("3*u1*u1x"));
    CHECK(ScalarDiffOp::D(2).apply(E("u1^2"), ctx) == E("2*u1x^2 + 2*u1*u1xx"));
}

TEST_CASE("matrix operators") {
    auto p1 = MatrixDiffOp::from_rows({{ScalarDiffOp(), ScalarDiffOp::D()}, {ScalarDiffOp::D(), ScalarDiffOp()}});
    CHECK(p1.size() == 2);
    CHECK(p1.order() == 1);
    CHECK(is_skew_adjoint(p1, ctx));
    auto sq = p1.compose(p1, ctx);
    CHECK(sq == MatrixDiffOp::identity(2, ScalarDiffOp::D(2)));
    auto v = p1.apply({E("u1"), E("u2^2")}, ctx);
    CHECK(v[0] == E("2*u2*u2x"));
    CHECK(v[1] == E("u1x"));
    auto m = MatrixDiffOp::multiplication({{E("u1"), E("0")}, {E("0"), E("1")}});
    CHECK_FALSE(is_skew_adjoint(m, ctx));
    CHECK(m.coefficient_matrix(0)[0][0] == E("u1"));
}

TEST_CASE("equal up to scale") {
    auto r = catalog::canonical_operator(catalog::CanonicalTag::R3_2);
    auto k = equal_up_to_scale(Expr(Expr::rational(-3, 4)) * r, r);
    REQUIRE(k.has_value());
    CHECK(*k == Expr::rational(-3, 4));
    auto r1 = catalog::canonical_operator(catalog::CanonicalTag::R3_1);
    CHECK_FALSE(equal_up_to_scale(r1, r).has_value());
}

TEST_CASE("graded coefficients reassemble the pencil") {
    auto p1 = MatrixDiffOp::from_rows({{ScalarDiffOp(), ScalarDiffOp::D()}, {ScalarDiffOp::D(), ScalarDiffOp()}});
    auto q1 = geometry::op_from_metric({{{E("0"), E("-u1")}, {E("-u1"), E("-2*u2")}}});
    auto r = catalog::canonical_operator(catalog::CanonicalTag::R3_2);
    Expr eps = Expr::var(eps_var());
    Pencil pencil{p1 + (eps * eps) * r, q1};
    auto gr = extract_graded(pencil);
    CHECK(gr.max_order() == 2);
    CHECK(gr.reassemble().combined() == pencil.combined());
    CHECK(gr.at(2, 0, 0)[0][1] == E("1"));
    CHECK(gr.at(1, 0, 0)[1][1] == E("-2*u2"));
    CHECK(Pencil::from_operator(pencil.combined()).side1 == pencil.side1);
    Pencil bad{catalog::canonical_operator(catalog::CanonicalTag::R2), q1};
    CHECK_THROWS_AS(extract_graded(bad), NotGraded);
}

TEST_CASE("point transformations") {
    // u -> (u1 + u2, u1 - u2) applied to the constant metric [[0,1],[1,0]] D
    auto p1 = MatrixDiffOp::from_rows({{ScalarDiffOp(), ScalarDiffOp::D()}, {ScalarDiffOp::D(), ScalarDiffOp()}});
    std::vector<Expr> phi{E("u1 + u2"), E("u1 - u2")};
    std::vector<Expr> inv{E("(u1 + u2)/2"), E("(u1 - u2)/2")};
    auto t = point_transform(p1, phi, inv, ctx);
    CHECK(t.at(0, 0) == ScalarDiffOp::D(2).compose(ScalarDiffOp(), ctx) + ScalarDiffOp::term(E("2"), 1));
    CHECK(t.at(1, 1) == ScalarDiffOp::term(E("-2"), 1));
    CHECK(t.at(0, 1).is_zero());
    auto j = jacobian({E("u1^2"), E("u1*u2")}, 2);
    CHECK(j[1][0] == E("u2"));
    CHECK(pull_back(E("u1x"), inv, ctx) == E("(u1x + u2x)/2"));
}

TEST_CASE("dimension errors") {
    auto a = MatrixDiffOp::identity(2);
    auto b = MatrixDiffOp::identity(1);
    CHECK_THROWS_AS(a.compose(b, ctx), DimensionMismatch);
    CHECK_THROWS_AS((void)(a + b), DimensionMismatch);
}
