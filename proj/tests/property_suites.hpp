#pragma once

#include <random>
#include <string>
#include <vector>

#include "hamtrio/catalog.hpp"
#include "hamtrio/diffop.hpp"
#include "hamtrio/jetcalc.hpp"
#include "hamtrio/poisson.hpp"

// Randomized algebraic property suites shared by the unit tests and the acceptance run.
namespace hamtrio::props {

using jet::DependentVar;
using jet::Expr;
using jet::Vars;
using op::MatrixDiffOp;
using op::ScalarDiffOp;

inline const jet::JetContext ctx{2, 12};

class Gen {
public:
    explicit Gen(unsigned seed) : rng_(seed) {}

    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    Expr rational() {
        int num = integer(-5, 5);
        return Expr::rational(num == 0 ? 1 : num, integer(1, 4));
    }

    // random differential monomial in u1, u2 and their first two derivatives
    Expr monomial(int max_order) {
        Expr m(1);
        for (int a = 1; a <= 2; ++a)
            for (int k = 0; k <= max_order; ++k) {
                int e = integer(0, k == 0 ? 2 : 1);
                if (e) m = m * Expr::u(a, k).pow(e);
            }
        return m;
    }

    Expr polynomial(int terms, int max_order) {
        Expr p;
        for (int t = 0; t < terms; ++t) p += rational() * monomial(max_order);
        return p;
    }

    // rational function with a nonvanishing denominator built from u1, u2
    Expr expression() {
        Expr num = polynomial(integer(1, 3), 2);
        if (integer(0, 1) == 0) return num;
        Expr den = Expr::u(integer(1, 2)) + Expr(integer(1, 3));
        return num / den.pow(integer(1, 2));
    }

    MatrixDiffOp matrix_operator(int max_order) {
        MatrixDiffOp p(2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k <= max_order; ++k)
                    if (integer(0, 2) > 0) p.at(i, j) = p.at(i, j) + ScalarDiffOp::term(polynomial(integer(1, 2), 1), k);
        return p;
    }

private:
    std::mt19937 rng_;
};

struct RationalMap {
    std::vector<Expr> phi, inv;
};

inline jet::Substitution fields_to(const std::vector<Expr>& v) {
    jet::Substitution s;
    for (std::size_t i = 0; i < v.size(); ++i) s.emplace(Vars::jet(static_cast<int>(i) + 1), v[i]);
    return s;
}

inline std::vector<Expr> compose(const std::vector<Expr>& outer, const std::vector<Expr>& inner) {
    std::vector<Expr> out;
    for (const auto& e : outer) out.push_back(e.substitute(fields_to(inner)));
    return out;
}

// triangular maps u1 -> u1 + a*u2^k, u2 -> u2 + b*u1^k and the projective map (1/u1, u2/u1)
inline RationalMap elementary(Gen& g) {
    Expr u1 = Expr::u(1), u2 = Expr::u(2);
    switch (g.integer(0, 2)) {
        case 0: {
            Expr s = g.rational() * u2.pow(g.integer(1, 2));
            return {{u1 + s, u2}, {u1 - s, u2}};
        }
        case 1: {
            Expr s = g.rational() * u1.pow(g.integer(1, 2));
            return {{u1, u2 + s}, {u1, u2 - s}};
        }
        default: return {{Expr(1) / u1, u2 / u1}, {Expr(1) / u1, u2 / u1}};
    }
}

inline RationalMap random_map(Gen& g) {
    RationalMap m = elementary(g);
    for (int k = g.integer(0, 1); k > 0; --k) {
        RationalMap n = elementary(g);
        m = {compose(n.phi, m.phi), compose(m.inv, n.inv)};
    }
    return m;
}


struct SuiteResult {
    int cases = 0;
    int failures = 0;
    std::string first_failure;
    void record(bool ok, const std::string& what) {
        ++cases;
        if (ok) return;
        if (failures++ == 0) first_failure = what;
    }
    bool pass() const { return cases > 0 && failures == 0; }
};

inline SuiteResult euler_kills_total_derivatives(int n, unsigned seed) {
    SuiteResult r;
    Gen g(seed);
    for (int k = 0; k < n; ++k) {
        Expr f = g.expression();
        Expr df = jet::total_derivative(f, ctx);
        r.record(jet::euler(df, DependentVar::field(1), ctx).is_zero() &&
                     jet::euler(df, DependentVar::field(2), ctx).is_zero(),
                 f.str());
    }
    return r;
}

inline SuiteResult adjoint_anti_homomorphism(int n, unsigned seed) {
    SuiteResult r;
    Gen g(seed);
    for (int k = 0; k < n; ++k) {
        MatrixDiffOp a = g.matrix_operator(2);
        MatrixDiffOp b = g.matrix_operator(2);
        bool ok = a.adjoint(ctx).adjoint(ctx) == a &&
                  a.compose(b, ctx).adjoint(ctx) == b.adjoint(ctx).compose(a.adjoint(ctx), ctx) &&
                  (a + b).adjoint(ctx) == a.adjoint(ctx) + b.adjoint(ctx);
        r.record(ok, a.str() + " ; " + b.str());
    }
    return r;
}

/// Operators of the catalog: canonical operators and one member of each family.
inline std::vector<MatrixDiffOp> catalog_operators() {
    std::vector<MatrixDiffOp> ops;
    for (auto t : {catalog::CanonicalTag::R2, catalog::CanonicalTag::R3_1, catalog::CanonicalTag::R3_2,
                   catalog::CanonicalTag::R3_3})
        ops.push_back(catalog::canonical_operator(t));
    for (const auto& tag : catalog::family_tags()) {
        const auto& f = catalog::family(tag);
        ops.push_back(
            catalog::instantiate(f, f.branches.empty() ? catalog::Values{} : catalog::branch_point(f, 1, 'c', 4), 'c').op);
    }
    return ops;
}

inline SuiteResult bracket_symmetry_bilinearity(unsigned seed) {
    const jet::JetContext bctx{2, poisson::kBracketJetCap};
    SuiteResult r;
    auto ops = catalog_operators();
    Gen g(seed);
    for (std::size_t i = 0; i < ops.size(); ++i)
        for (std::size_t j = i; j < ops.size(); ++j) {
            Expr pq = poisson::schouten_integrand(ops[i], ops[j], bctx);
            Expr qp = poisson::schouten_integrand(ops[j], ops[i], bctx);
            std::string where = std::to_string(i) + "," + std::to_string(j);
            r.record(jet::is_total_derivative(pq - qp, bctx), "symmetry " + where);
            std::size_t k = static_cast<std::size_t>(g.integer(0, static_cast<int>(ops.size()) - 1));
            Expr a = g.rational(), b = g.rational();
            Expr lhs = poisson::schouten_integrand(a * ops[i] + b * ops[k], ops[j], bctx);
            Expr rhs = a * pq + b * poisson::schouten_integrand(ops[k], ops[j], bctx);
            r.record(jet::is_total_derivative(lhs - rhs, bctx), "bilinearity " + where);
        }
    return r;
}

inline SuiteResult point_transform_functoriality(int n, unsigned seed) {
    SuiteResult r;
    Gen g(seed);
    std::vector<MatrixDiffOp> ops{
        catalog::instantiate(catalog::family("Th1"), {}, 'c').op,
        catalog::canonical_operator(catalog::CanonicalTag::R2),
    };
    for (int k = 0; k < n; ++k) {
        RationalMap f = random_map(g), h = random_map(g);
        bool inverse_ok = true;
        for (int i = 0; i < 2; ++i) inverse_ok = inverse_ok && compose(f.inv, f.phi)[i] == Expr::u(i + 1);
        const auto& p = ops[static_cast<std::size_t>(k % 2)];
        auto stepwise = op::point_transform(op::point_transform(p, f.phi, f.inv, ctx), h.phi, h.inv, ctx);
        auto direct = op::point_transform(p, compose(h.phi, f.phi), compose(f.inv, h.inv), ctx);
        r.record(inverse_ok && stepwise == direct,
                 "(" + f.phi[0].str() + ", " + f.phi[1].str() + ") then (" + h.phi[0].str() + ", " + h.phi[1].str() + ")");
    }
    return r;
}

}  // namespace hamtrio::props
