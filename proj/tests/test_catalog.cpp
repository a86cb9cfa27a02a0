#include "doctest.h"
#include "hamtrio/catalog.hpp"
#include "hamtrio/document.hpp"
#include "hamtrio/errors.hpp"
#include "hamtrio/parse.hpp"
#include "hamtrio/poisson.hpp"

using namespace hamtrio;
using namespace hamtrio::catalog;
using text::parse_expression;

namespace {
Expr E(const char* s) { return parse_expression(s); }
const jet::JetContext ctx{2, poisson::kBracketJetCap};
}  // namespace

TEST_CASE("tags") {
    CHECK(tag_from_name("R3_2") == CanonicalTag::R3_2);
    CHECK(tag_name(CanonicalTag::R3_3) == "R3_3");
    CHECK_THROWS_AS(tag_from_name("R4"), UnknownName);
    CHECK_THROWS_AS(family("Th5"), UnknownName);
    CHECK(family_tags().size() == 4);
}

TEST_CASE("family sizes") {
    CHECK(family("Th1").nparams == 5);
    CHECK(family("Th2").nparams == 7);
    CHECK(family("Th3").nparams == 6);
    CHECK(family("Th4").nparams == 6);
    CHECK(family("Th1").variety.empty());
    CHECK(family("Th2").variety.size() == 3);
}

TEST_CASE("family members are compatible with their canonical operator") {
    for (const auto& tag : family_tags()) {
        CAPTURE(tag);
        const auto& f = family(tag);
        auto r = canonical_operator(f.r);
        for (std::size_t k = 1; k <= f.branches.size() || (f.branches.empty() && k == 1); ++k) {
            Values v = f.branches.empty() ? Values{} : branch_point(f, static_cast<int>(k), 'c', 3);
            auto inst = instantiate(f, v, 'c');
            CHECK(op::is_skew_adjoint(inst.op, ctx));
            CHECK(poisson::are_compatible(inst.op, r, ctx));
            CHECK(geometry::levi_civita_residuals(inst.metric, inst.connection).empty());
        }
    }
}

TEST_CASE("variety membership and branches") {
    const auto& f = family("Th2");
    Values on = branch_point(f, 1, 'c', 5);
    CHECK(on_variety(f, on, 'c'));
    auto labels = branches_at(f, on, 'c');
    CHECK(std::find(labels.begin(), labels.end(), 1) != labels.end());
    Values off{{"c1", E("1")}, {"c2", E("1")}, {"c3", E("0")}, {"c4", E("2")}, {"c5", E("0")}, {"c6", E("3")}, {"c7", E("0")}};
    CHECK_FALSE(on_variety(f, off, 'c'));
    Values same = branch_point(f, 1, 'd', 5);
    CHECK_THROWS_AS(pencil_admissible(f, off, same), NotOnVariety);
    // a point paired with itself spans a line through the origin inside the variety
    CHECK(pencil_admissible(f, on, same).admissible);
}

TEST_CASE("excluded pencils are not flat at a generic point") {
    const auto& f = family("Th4");
    REQUIRE(f.excluded.size() == 3);
    for (auto [k, l] : f.excluded) {
        CAPTURE(k);
        CAPTURE(l);
        auto g = instantiate(f, branch_point(f, k, 'c', 11), 'c');
        auto h = instantiate(f, branch_point(f, l, 'd', 12), 'd');
        CHECK_FALSE(geometry::flat_pencil_check(g.metric, g.connection, h.metric, h.connection).ok());
    }
}

TEST_CASE("the ansatz reproduces the Theorem 3 family") {
    auto res = ansatz_search(CanonicalTag::R3_2);
    CHECK(res.dimension == 6);
    CHECK(res.matches_family);
    CHECK(res.variety_matches);
}

TEST_CASE("spans") {
    CHECK(same_span({E("c1*c2"), E("c1*c3")}, {E("c1*c2 + c1*c3"), E("c1*c2 - c1*c3")}));
    CHECK_FALSE(same_span({E("c1*c2")}, {E("c1*c3")}));
}

TEST_CASE("graded parts") {
    auto r = canonical_operator(CanonicalTag::R2);
    auto p = instantiate(family("Th1"), {{"c1", E("1")}}, 'c').op;
    auto sum = p + r;
    CHECK(graded_part(sum, 1) == p);
    CHECK(graded_part(sum, 2) == r);
}

TEST_CASE("known-system identification recovers a constructed operator") {
    const auto& f = family("Th1");
    Values v{{"c1", E("2")}, {"c2", E("-1")}, {"c3", E("1/3")}, {"c4", E("0")}, {"c5", E("5")}};
    auto op = instantiate(f, v, 'c').op + Expr(3) * canonical_operator(CanonicalTag::R2);
    auto m = match_known_system(op, instantiate(f, {{"c1", E("1")}, {"c2", E("0")}, {"c3", E("0")}, {"c4", E("0")},
                                                    {"c5", E("0")}}, 'c').op +
                                        canonical_operator(CanonicalTag::R2));
    CHECK(m.family == "Th1");
    REQUIRE(m.ops.size() == 2);
    REQUIRE(m.ops[0].r_scale.has_value());
    CHECK(*m.ops[0].r_scale == Expr(3));
    auto k = proportional(m.ops[0].params, v);
    REQUIRE(k.has_value());
    CHECK(*k == Expr(1));
    CHECK(m.ops[1].params.at("d1") == Expr(1));
}

TEST_CASE("Kaup-Broer identification") {
    auto d = doc::parse("fields u1, u2\nop B2 = [[2*Dx, Dx*u1 - Dx^2], [u1*Dx + Dx^2, u2*Dx + Dx*u2]]\n");
    auto m = match_known_system(std::vector<MatrixDiffOp>{d.op("B2")});
    CHECK(m.family == "Th1");
    REQUIRE(m.ops[0].r_scale.has_value());
    CHECK(*m.ops[0].r_scale == Expr(-1));
    auto k = proportional(m.ops[0].params, {{"c2", E("2")}, {"c3", E("2")}});
    REQUIRE(k.has_value());
    CHECK(*k == Expr(1));
}

TEST_CASE("proportionality") {
    CHECK(*proportional({{"c1", E("2")}, {"c2", E("0")}}, {{"c1", E("1")}}) == Expr(2));
    CHECK_FALSE(proportional({{"c1", E("2")}, {"c2", E("1")}}, {{"c1", E("1")}}).has_value());
}

TEST_CASE("no match for an unrelated operator") {
    auto q = geometry::op_from_metric({{{E("u1"), E("0")}, {E("0"), E("u1")}}});
    CHECK_THROWS_AS(match_known_system(std::vector<MatrixDiffOp>{q}), NoMatch);
}
