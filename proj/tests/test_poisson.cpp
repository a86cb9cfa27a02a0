#include "doctest.h"
#include "hamtrio/catalog.hpp"
#include "hamtrio/errors.hpp"
#include "hamtrio/parse.hpp"
#include "hamtrio/poisson.hpp"

using namespace hamtrio;
using namespace hamtrio::poisson;
using catalog::CanonicalTag;
using op::ScalarDiffOp;
using text::parse_expression;

namespace {
Expr E(const char* s) { return parse_expression(s); }
const JetContext ctx{2, kBracketJetCap};
const JetContext ctx1{1, kBracketJetCap};
bool all_vanish(const std::vector<Expr>& v) {
    for (const auto& e : v)
        if (!jet::vanishes(e)) return false;
    return true;
}
}  // namespace

TEST_CASE("the scalar trio is mutually compatible") {
    auto t = catalog::scalar_trio();
    CHECK(is_hamiltonian(t.p1, ctx1));
    CHECK(is_hamiltonian(t.q1, ctx1));
    CHECK(is_hamiltonian(t.r3, ctx1));
    CHECK(are_compatible(t.p1, t.q1, ctx1));
    CHECK(are_compatible(t.p1, t.r3, ctx1));
    CHECK(are_compatible(t.q1, t.r3, ctx1));
}

TEST_CASE("Hamiltonian and non-Hamiltonian scalar operators") {
    // every first-order scalar operator g D + g'/2 u_x is Hamiltonian
    MatrixDiffOp p(1);
    p.at(0, 0) = ScalarDiffOp::term(E("u1^2"), 1) + ScalarDiffOp(E("u1*u1x"));
    CHECK(op::is_skew_adjoint(p, ctx1));
    CHECK(is_hamiltonian(p, ctx1));
    // the skew-adjoint part of u D^3 fails the Jacobi identity
    MatrixDiffOp q(1);
    q.at(0, 0) = ScalarDiffOp::term(E("u1"), 3) + ScalarDiffOp::term(E("3/2*u1x"), 2) +
                 ScalarDiffOp::term(E("3/2*u1xx"), 1) + ScalarDiffOp(E("1/2*u1xxx"));
    CHECK(op::is_skew_adjoint(q, ctx1));
    CHECK_FALSE(is_hamiltonian(q, ctx1));
}

TEST_CASE("the bracket requires skew-adjoint operators") {
    auto m = MatrixDiffOp::multiplication({{E("1")}});
    auto d = catalog::scalar_trio().p1;
    CHECK_THROWS_AS(schouten_integrand(m, d, ctx1), NotSkewAdjoint);
    CHECK_NOTHROW(schouten_integrand_unchecked(m, d, ctx1));
}

TEST_CASE("canonical operators are Hamiltonian and satisfy the third-order conditions") {
    for (auto t : {CanonicalTag::R2, CanonicalTag::R3_1, CanonicalTag::R3_2, CanonicalTag::R3_3}) {
        CAPTURE(catalog::tag_name(t));
        auto r = catalog::canonical_operator(t);
        CHECK(op::is_skew_adjoint(r, ctx));
        CHECK(is_hamiltonian(r, ctx));
        if (t == CanonicalTag::R2) continue;
        Matrix l;
        Array3 c;
        REQUIRE(third_order_data(r, l, c, ctx));
        CHECK(all_vanish(third_order_conditions(l, c)));
    }
}

TEST_CASE("third-order conditions detect a wrong connection") {
    Matrix l;
    Array3 c;
    REQUIRE(third_order_data(catalog::canonical_operator(CanonicalTag::R3_2), l, c, ctx));
    c[0][1][0] = c[0][1][0] + Expr(1);
    CHECK_FALSE(all_vanish(third_order_conditions(l, c)));
}

TEST_CASE("a leading coefficient without the skew structure violates the cyclic condition") {
    // lower-index l = [[u1, 0], [0, 1]]: l_{11,1} does not cancel cyclically
    Matrix l{{E("1/u1"), E("0")}, {E("0"), E("1")}};
    Array3 c(2, std::vector<std::vector<Expr>>(2, std::vector<Expr>(2)));
    auto res = third_order_conditions(l, c);
    CHECK_FALSE(all_vanish(res));
    Matrix constant{{E("0"), E("1")}, {E("1"), E("0")}};
    CHECK(all_vanish(third_order_conditions(constant, c)));
    Matrix degenerate{{E("1"), E("1")}, {E("1"), E("1")}};
    CHECK_THROWS_AS(third_order_conditions(degenerate, c), DegenerateMetric);
}

TEST_CASE("compatibility in the catalog") {
    auto r2 = catalog::canonical_operator(CanonicalTag::R2);
    auto r31 = catalog::canonical_operator(CanonicalTag::R3_1);
    CHECK(are_compatible(r2, r31, ctx));
    const auto& th1 = catalog::family("Th1");
    auto p = catalog::instantiate(th1, {}, 'c').op;
    CHECK(are_compatible(p, r2, ctx));
    // a hydrodynamic operator outside the family is not compatible with R2
    auto q = geometry::op_from_metric({{{E("u1"), E("0")}, {E("0"), E("u1")}}});
    CHECK_FALSE(are_compatible(q, r2, ctx));
}

TEST_CASE("directional derivative") {
    CHECK(directional_derivative(E("u1*u2x"), {E("u2"), E("u1")}, ctx) == E("u2*u2x + u1*u1x"));
}

TEST_CASE("second-order constant form") {
    Array3 t(2, std::vector<std::vector<Expr>>(2, std::vector<Expr>(2)));
    Matrix t0{{E("0"), E("1")}, {E("-1"), E("0")}};
    CHECK(second_order_form_check(t, t0));
    t0[1][0] = E("1");
    CHECK_FALSE(second_order_form_check(t, t0));
}
