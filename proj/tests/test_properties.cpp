#include "doctest.h"
#include "property_suites.hpp"

using namespace hamtrio::props;

namespace {
void require(const SuiteResult& r) {
    INFO("first failure: " << r.first_failure);
    CHECK(r.failures == 0);
    CHECK(r.cases > 0);
}
}  // namespace

TEST_CASE("the Euler operator annihilates total derivatives") { require(euler_kills_total_derivatives(100, 101)); }

TEST_CASE("the formal adjoint is an involutive anti-homomorphism") { require(adjoint_anti_homomorphism(50, 202)); }

TEST_CASE("the bracket is symmetric and bilinear on the catalog") { require(bracket_symmetry_bilinearity(303)); }

TEST_CASE("point transformations are functorial") { require(point_transform_functoriality(20, 404)); }
