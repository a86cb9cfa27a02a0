#include "doctest.h"
#include "hamtrio/catalog.hpp"
#include "hamtrio/errors.hpp"
#include "hamtrio/geometry.hpp"
#include "hamtrio/parse.hpp"
#include "hamtrio/poisson.hpp"

using namespace hamtrio;
using namespace hamtrio::geometry;
using text::parse_expression;

namespace {
Expr E(const char* s) { return parse_expression(s); }
Metric M(const char* a, const char* b, const char* c) { return Metric{{{E(a), E(b)}, {E(b), E(c)}}}; }
const jet::JetContext ctx{2, 12};
}  // namespace

TEST_CASE("lowering and Levi-Civita connection of polar coordinates") {
    Metric polar = M("1", "0", "1/u1^2");
    auto low = lower(polar);
    CHECK(low[1][1] == E("u1^2"));
    auto gamma = levi_civita(polar);
    CHECK(levi_civita_residuals(polar, gamma).empty());
    CHECK(is_flat(polar));
    CHECK_THROWS_AS(lower(M("1", "1", "1")), DegenerateMetric);
}

TEST_CASE("a conformally flat but curved metric") {
    Metric g = M("u1", "0", "u1");
    CHECK_FALSE(is_flat(g));
    auto r = riemann(g);
    bool nonzero = false;
    for (auto& a : r)
        for (auto& b : a)
            for (auto& c : b)
                for (auto& d : c) nonzero = nonzero || !d.is_zero();
    CHECK(nonzero);
}

TEST_CASE("leading coefficients of the third-order operators") {
    poisson::Matrix l;
    poisson::Array3 c;
    REQUIRE(poisson::third_order_data(catalog::canonical_operator(catalog::CanonicalTag::R3_2), l, c, ctx));
    CHECK(is_flat(Metric{l}));
    REQUIRE(poisson::third_order_data(catalog::canonical_operator(catalog::CanonicalTag::R3_3), l, c, ctx));
    CHECK_FALSE(is_flat(Metric{l}));
}

TEST_CASE("hydrodynamic operators from metrics") {
    Metric q = M("0", "-u1", "-2*u2");
    auto op = op_from_metric(q);
    CHECK(op::is_skew_adjoint(op, ctx));
    Metric g;
    Connection gamma;
    REQUIRE(hydrodynamic_data(op, g, gamma));
    CHECK(g.g[1][1] == E("-2*u2"));
    CHECK(levi_civita_residuals(g, gamma).empty());
    CHECK_FALSE(hydrodynamic_data(catalog::canonical_operator(catalog::CanonicalTag::R2), g, gamma));
}

TEST_CASE("flat pencils") {
    Metric g = M("0", "1", "1");
    Metric h = M("0", "-u1", "-2*u2");
    auto rep = flat_pencil_check(g, h);
    CHECK(rep.ok());
    auto rep2 = flat_pencil_check(g, levi_civita(g), h, levi_civita(h));
    CHECK(rep2.ok());
    // polar metric against the identity: each flat, but the pencil is curved
    Metric p = M("1", "0", "1/u1^2");
    Metric id = M("1", "0", "1");
    CHECK_FALSE(flat_pencil_check(p, id).ok());
    CHECK_THROWS_AS(flat_pencil_check(M("u1", "u1", "u1"), M("1", "1", "1")), DegeneratePencil);
}

TEST_CASE("contravariant curvature agrees with the covariant route") {
    for (const Metric& g : {M("1", "0", "1/u1^2"), M("u1", "0", "u1"), M("u2", "u1", "0")}) {
        auto r = contravariant_curvature(g, levi_civita(g));
        bool zero = true;
        for (auto& a : r)
            for (auto& b : a)
                for (auto& c : b)
                    for (auto& d : c) zero = zero && d.is_zero();
        CHECK(zero == is_flat(g));
    }
}
