#include <cmath>

#include "doctest.h"
#include "hamtrio/errors.hpp"
#include "hamtrio/jetcalc.hpp"
#include "hamtrio/parse.hpp"

using namespace hamtrio;
using namespace hamtrio::jet;
using text::parse_expression;

namespace {
Expr E(const char* s) { return parse_expression(s); }
const JetContext ctx{2, 9};
}  // namespace

TEST_CASE("total derivative follows the Leibniz and chain rules") {
    CHECK(total_derivative(E("u1*u2"), ctx) == E("u1x*u2 + u1*u2x"));
    CHECK(total_derivative(E("c1"), ctx).is_zero());
    CHECK(total_derivative(E("1/u1"), ctx) == E("-u1x/u1^2"));
    CHECK(total_derivative(E("psi1_2*u1xx"), ctx) == E("psi1_2x*u1xx + psi1_2*u1xxx"));
}

TEST_CASE("total derivative respects the jet cap") {
    JetContext small{2, 3};
    CHECK_THROWS_AS(total_derivative(E("u1xxx"), small), JetOrderExceeded);
    CHECK_NOTHROW(total_derivative(E("u1xx"), small));
}

TEST_CASE("total derivative through a radical") {
    Expr s = E("sqrt(u2^2 - 2*u1*u2)");
    Expr d = total_derivative(s, ctx);
    CHECK(vanishes(d - E("(u2*u2x - u1x*u2 - u1*u2x)") / s));
}

TEST_CASE("euler operator") {
    CHECK(euler(E("u1x^2/2"), DependentVar::field(1), ctx) == E("-u1xx"));
    CHECK(euler(E("u2/u1"), DependentVar::field(1), ctx) == E("-u2/u1^2"));
    CHECK(euler(E("u2/u1"), DependentVar::field(2), ctx) == E("1/u1"));
    Expr f = E("u1^2*u2x/(u1 + u2) + u1xx*u2^3");
    Expr df = total_derivative(f, ctx);
    CHECK(euler(df, DependentVar::field(1), ctx).is_zero());
    CHECK(euler(df, DependentVar::field(2), ctx).is_zero());
}

TEST_CASE("exactness test") {
    CHECK(is_total_derivative(E("u1x*u2 + u1*u2x"), ctx));
    CHECK_FALSE(is_total_derivative(E("u1x*u2"), ctx));
    CHECK(euler(E("u1x*u2"), DependentVar::field(2), ctx) == E("u1x"));
    CHECK(is_total_derivative(Expr(), ctx));
    CHECK(is_total_derivative(E("psi1_1x*psi2_2 + psi1_1*psi2_2x"), ctx));
}

TEST_CASE("homogeneous degree") {
    CHECK(homogeneous_degree(E("u1x*u2x")) == 2);
    CHECK_THROWS_AS(homogeneous_degree(E("u1 + u1x")), NotHomogeneous);
    CHECK(homogeneous_degree(E("u2*u1xx/u1^3")) == 2);
    CHECK(homogeneous_degree(E("c1*u1")) == 0);
    CHECK(homogeneous_degree(E("sqrt(u1x*u2xxx)")) == 2);
}

TEST_CASE("numeric evaluation") {
    Point p{{Vars::jet(1), 2.0}, {Vars::jet(2), 3.0}};
    CHECK(eval_numeric(E("(u2+1)/u1"), p) == doctest::Approx(2.0));
    Point q{{Vars::jet(1), 1.0}, {Vars::jet(2), -1.0}};
    CHECK(eval_numeric(E("sqrt(u2^2 - 2*u1*u2)"), q) == doctest::Approx(std::sqrt(3.0)));
    Point z{{Vars::jet(1), 0.0}};
    CHECK_THROWS_AS(eval_numeric(E("1/u1"), z), PoleAtPoint);
    Point neg{{Vars::jet(1), -1.0}};
    CHECK_THROWS_AS(eval_numeric(E("sqrt(u1)"), neg), NegativeRadicand);
}

TEST_CASE("parser errors carry positions") {
    try {
        parse_expression("u1 + * u2");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() == 6);
    }
    CHECK_THROWS_AS(parse_expression("u1/0"), ParseError);
    CHECK_THROWS_AS(parse_expression("(u1"), ParseError);
}
