#include "hamtrio/poisson.hpp"

#include "hamtrio/errors.hpp"
#include "hamtrio/linalg.hpp"

namespace hamtrio::poisson {

using jet::DependentVar;
using jet::total_derivative;
using jet::vanishes;
using jet::VarId;
using jet::Vars;
using op::ScalarDiffOp;

namespace {

JetContext bracket_context(const JetContext& ctx) { return ctx.with_cap(std::max(ctx.max_jet_order, kBracketJetCap)); }

int field_order(const MatrixDiffOp& p) {
    int o = -1;
    for (int i = 0; i < p.size(); ++i)
        for (int j = 0; j < p.size(); ++j)
            for (const auto& [k, c] : p.at(i, j).coefficients())
                for (VarId v : c.deep_variables())
                    if (Vars::is_jet(v)) o = std::max(o, Vars::info(v).order);
    return o;
}

std::vector<Expr> psi(int a, int m) {
    std::vector<Expr> out;
    for (int i = 1; i <= m; ++i) out.push_back(Expr::var(Vars::covector(a, i, 0)));
    return out;
}

// prolonged[b][s] = D^s x^b
using Prolongation = std::vector<std::vector<Expr>>;

Prolongation prolong(const std::vector<Expr>& x, int order, const JetContext& ctx) {
    Prolongation out;
    for (const auto& xb : x) {
        std::vector<Expr> ds{xb};
        for (int s = 1; s <= order; ++s) ds.push_back(total_derivative(ds.back(), ctx));
        out.push_back(std::move(ds));
    }
    return out;
}

Expr directional(const Expr& a, const Prolongation& px) {
    std::vector<Expr> parts;
    for (VarId v : a.deep_variables()) {
        if (!Vars::is_jet(v)) continue;
        const auto& info = Vars::info(v);
        const Expr& dx = px[info.component - 1][info.order];
        if (dx.is_zero()) continue;
        parts.push_back(a.partial(v) * dx);
    }
    return jet::sum(parts);
}

// psi_a . DP[X] psi_c
void accumulate(const MatrixDiffOp& p, const Prolongation& px, int a, int c, std::vector<Expr>& parts) {
    const int m = p.size();
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (const auto& [n, coef] : p.at(i, j).coefficients()) {
                Expr d = directional(coef, px);
                if (d.is_zero()) continue;
                parts.push_back(Expr::var(Vars::covector(a, i + 1, 0)) * d *
                                Expr::var(Vars::covector(c, j + 1, n)));
            }
}

}  // namespace

Expr directional_derivative(const Expr& a, const std::vector<Expr>& x, const JetContext& ctx) {
    int order = -1;
    for (VarId v : a.deep_variables())
        if (Vars::is_jet(v)) order = std::max(order, Vars::info(v).order);
    if (order < 0) return Expr();
    return directional(a, prolong(x, order, ctx));
}

Expr schouten_integrand_unchecked(const MatrixDiffOp& p, const MatrixDiffOp& q, const JetContext& ctx) {
    if (p.size() != q.size()) throw DimensionMismatch("bracket of operators of different sizes");
    const JetContext big = bracket_context(ctx);
    const int m = p.size();
    const int np = field_order(p), nq = field_order(q);
    std::vector<Expr> parts;
    const int cyc[3][3] = {{1, 2, 3}, {2, 3, 1}, {3, 1, 2}};
    for (const auto& abc : cyc) {
        auto [a, b, c] = std::tuple(abc[0], abc[1], abc[2]);
        if (np >= 0) accumulate(p, prolong(q.apply(psi(b, m), big), np, big), a, c, parts);
        if (nq >= 0) accumulate(q, prolong(p.apply(psi(b, m), big), nq, big), a, c, parts);
    }
    return jet::sum(parts);
}

Expr schouten_integrand(const MatrixDiffOp& p, const MatrixDiffOp& q, const JetContext& ctx) {
    const JetContext big = bracket_context(ctx);
    if (!op::is_skew_adjoint(p, big)) throw NotSkewAdjoint("first operator");
    if (!op::is_skew_adjoint(q, big)) throw NotSkewAdjoint("second operator");
    return schouten_integrand_unchecked(p, q, ctx);
}

bool are_compatible(const MatrixDiffOp& p, const MatrixDiffOp& q, const JetContext& ctx) {
    Expr t = schouten_integrand(p, q, ctx);
    return jet::is_total_derivative(t, bracket_context(ctx));
}

bool is_hamiltonian(const MatrixDiffOp& p, const JetContext& ctx) {
    const JetContext big = bracket_context(ctx);
    if (!op::is_skew_adjoint(p, big)) return false;
    return jet::is_total_derivative(schouten_integrand_unchecked(p, p, ctx), big);
}

bool third_order_data(const MatrixDiffOp& r, Matrix& l, Array3& c, const JetContext& ctx) {
    const int m = r.size();
    if (r.order() > 3) return false;
    l = r.coefficient_matrix(3);
    Matrix r2 = r.coefficient_matrix(2);
    c.assign(m, std::vector<std::vector<Expr>>(m, std::vector<Expr>(m)));
    MatrixDiffOp inner(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            Expr cij = r2[i][j] - total_derivative(l[i][j], ctx);
            for (int k = 0; k < m; ++k) c[i][j][k] = cij.partial(Vars::jet(k + 1, 1));
            inner.at(i, j) = ScalarDiffOp::term(l[i][j], 1) + ScalarDiffOp(cij);
        }
    MatrixDiffOp d = MatrixDiffOp::identity(m, ScalarDiffOp::D());
    MatrixDiffOp rebuilt = d.compose(inner, ctx).compose(d, ctx);
    MatrixDiffOp diff = rebuilt - r;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (const auto& [k, x] : diff.at(i, j).coefficients())
                if (!vanishes(x)) return false;
    return true;
}

std::vector<Expr> third_order_conditions(const Matrix& lup, const Array3& cup) {
    const int m = static_cast<int>(lup.size());
    auto inv = linalg::inverse<Expr>(lup, [](const Expr& x) { return vanishes(x); });
    if (!inv) throw DegenerateMetric("leading coefficient of the third-order operator is degenerate");
    const Matrix& ll = *inv;  // l_{ij}
    auto d = [](const Expr& e, int k) { return e.partial(Vars::jet(k + 1)); };
    // c_{ijk} = l_{iq} l_{jp} c^{pq}_k
    Array3 c(m, std::vector<std::vector<Expr>>(m, std::vector<Expr>(m)));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                std::vector<Expr> parts;
                for (int p = 0; p < m; ++p)
                    for (int q = 0; q < m; ++q) parts.push_back(ll[i][q] * ll[j][p] * cup[p][q][k]);
                c[i][j][k] = jet::sum(parts);
            }
    std::vector<Expr> out;
    for (int n = 0; n < m; ++n)
        for (int k = 0; k < m; ++k)
            for (int mm = 0; mm < m; ++mm)
                out.push_back(c[n][k][mm] - Expr::rational(1, 3) * (d(ll[n][mm], k) - d(ll[n][k], mm)));
    for (int mm = 0; mm < m; ++mm)
        for (int n = 0; n < m; ++n)
            for (int k = 0; k < m; ++k) out.push_back(d(ll[mm][n], k) + d(ll[n][k], mm) + d(ll[k][mm], n));
    for (int mm = 0; mm < m; ++mm)
        for (int n = 0; n < m; ++n)
            for (int k = 0; k < m; ++k)
                for (int l = 0; l < m; ++l) {
                    std::vector<Expr> parts{d(c[mm][n][k], l)};
                    for (int p = 0; p < m; ++p)
                        for (int q = 0; q < m; ++q) parts.push_back(lup[p][q] * c[p][mm][l] * c[q][n][k]);
                    out.push_back(jet::sum(parts));
                }
    return out;
}

bool second_order_form_check(const Array3& t, const Matrix& t0) {
    const std::size_t m = t0.size();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (!vanishes(t0[i][j] + t0[j][i])) return false;
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = 0; j < t.size(); ++j)
            for (std::size_t k = 0; k < t.size(); ++k) {
                if (!vanishes(t[i][j][k] + t[j][i][k])) return false;
                if (!vanishes(t[i][j][k] + t[i][k][j])) return false;
            }
    return true;
}

}  // namespace hamtrio::poisson
