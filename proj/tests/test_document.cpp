#include <filesystem>

#include "doctest.h"
#include "hamtrio/catalog.hpp"
#include "hamtrio/cli.hpp"
#include "hamtrio/document.hpp"
#include "hamtrio/errors.hpp"
#include "hamtrio/parse.hpp"

using namespace hamtrio;
using text::parse_expression;

namespace {
jet::Expr E(const char* s) { return parse_expression(s); }
}  // namespace

TEST_CASE("matrix literals") {
    auto d = doc::parse("fields u1, u2\nop P1 = [[0, Dx],[Dx, 0]]\n");
    auto p = d.op("P1");
    CHECK(p.size() == 2);
    CHECK(p.at(0, 1) == op::ScalarDiffOp::D());
    CHECK(p.at(0, 0).is_zero());
}

TEST_CASE("sandwich form expands to the catalog operator") {
    auto d = doc::parse(
        "fields u1, u2\n"
        "op R32 = Dx * [[0, Dx*(1/u1)],[(1/u1)*Dx, (u2/u1^2)*Dx + Dx*(u2/u1^2)]] * Dx\n");
    CHECK(d.op("R32") == catalog::canonical_operator(catalog::CanonicalTag::R3_2));
}

TEST_CASE("catalog names and expressions") {
    auto d = doc::parse(
        "fields u1, u2\n"
        "params a\n"
        "expr f = a*u1^2\n"
        "op A = R2 + f*[[Dx, 0],[0, Dx]]\n"
        "metric g = [[1, 0],[0, 1/u1^2]]\n");
    CHECK(d.op("A").at(0, 0).coeff(1) == E("a*u1^2"));
    CHECK(d.metrics.at("g").g[1][1] == E("1/u1^2"));
    CHECK(d.has_op("A"));
    CHECK_FALSE(d.has_op("B"));
}

TEST_CASE("errors carry positions") {
    CHECK_THROWS_AS(doc::parse("fields u1, u2\nop Bad = [[Dx]]\n"), DimensionMismatch);
    try {
        doc::parse("fields u1, u2\nop A = [[0, q],[Dx, 0]]\n");
        FAIL("expected UnknownName");
    } catch (const UnknownName& e) {
        CHECK(std::string(e.what()).find("2:") != std::string::npos);
    }
    try {
        doc::parse("fields u1, u2\nop A = [[0, Dx],[Dx, 0]\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(doc::parse("fields u2, u1\n"), ParseError);
    CHECK_THROWS_AS(doc::parse("fields u1, u2\nop A = u3*[[Dx, 0],[0, Dx]]\n"), UnknownName);
    CHECK_THROWS_AS(doc::parse("fields u1, u2\ntrio T = A, B, C\n"), UnknownName);
}

TEST_CASE("pretty printing is a fixed point") {
    auto src =
        "fields u1, u2\n"
        "params alpha\n"
        "# comment\n"
        "op P = [[2*Dx, Dx*u1 - Dx^2], [u1*Dx + Dx^2, u2*Dx + Dx*u2]]\n"
        "op Q = [[0, Dx],[Dx, 0]]\n"
        "trio T = P, Q, R2\n"
        "functional C = alpha*u1\n"
        "casimirs T = C\n"
        "expect match P = Th1 [c2 = 2, c3 = 2]\n";
    auto once = doc::parse(src).str();
    auto twice = doc::parse(once).str();
    CHECK(once == twice);
    CHECK(doc::parse(once).op("P") == doc::parse(src).op("P"));
}

TEST_CASE("bundled definition files parse and round-trip") {
    int count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(cli::default_defs_dir())) {
        if (entry.path().extension() != ".ham") continue;
        CAPTURE(entry.path().string());
        auto d = doc::load(entry.path().string());
        auto once = d.str();
        CHECK(doc::parse(once).str() == once);
        CHECK(d.trios.size() + d.ops.size() > 0);
        ++count;
    }
    CHECK(count == 7);
}
