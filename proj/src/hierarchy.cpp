#include "hamtrio/hierarchy.hpp"

#include <map>
#include <set>

#include "hamtrio/errors.hpp"
#include "hamtrio/linalg.hpp"
#include "hamtrio/poisson.hpp"

namespace hamtrio::hierarchy {

using jet::Monomial;
using jet::Poly;
using jet::Rational;
using jet::vanishes;
using jet::VarId;
using jet::Vars;
using op::ScalarDiffOp;

std::vector<Expr> Functional::gradient(const JetContext& ctx) const { return jet::variational_gradient(density, ctx); }

bool same_functional(const Functional& a, const Functional& b, const JetContext& ctx) {
    return jet::is_total_derivative(a.density - b.density, ctx);
}

Flow Flow::at_eps(const Expr& e) const {
    Flow out;
    jet::Substitution s{{op::eps_var(), e}};
    for (const auto& x : rhs) out.rhs.push_back(x.substitute(s));
    return out;
}

Flow Flow::eps_part(unsigned k) const {
    Flow out;
    for (const auto& x : rhs) out.rhs.push_back(x.coefficient(op::eps_var(), k));
    return out;
}

bool casimir_check(const Functional& c, const MatrixDiffOp& q, const JetContext& ctx) {
    for (const auto& x : op::apply(q, c.gradient(ctx), ctx))
        if (!vanishes(x)) return false;
    return true;
}

std::vector<Flow> first_flows(const Trio& trio, const std::vector<Functional>& casimirs, const Expr& eps,
                              const JetContext& ctx) {
    MatrixDiffOp p = trio.p1 + (eps * eps) * trio.r;
    std::vector<Flow> out;
    for (const auto& c : casimirs) {
        if (!casimir_check(c, trio.q1, ctx))
            throw NotACasimir((c.name.empty() ? c.density.str() : c.name) + " is not annihilated by Q1");
        out.push_back(Flow{op::apply(p, c.gradient(ctx), ctx)});
    }
    return out;
}

std::vector<Expr> commutator(const Flow& f, const Flow& g, const JetContext& ctx) {
    if (f.size() != g.size()) throw DimensionMismatch("flows of different sizes");
    std::vector<Expr> out;
    for (int i = 0; i < f.size(); ++i)
        out.push_back(poisson::directional_derivative(f.rhs[i], g.rhs, ctx) -
                      poisson::directional_derivative(g.rhs[i], f.rhs, ctx));
    return out;
}

bool flows_commute(const Flow& f, const Flow& g, const JetContext& ctx) {
    for (const auto& x : commutator(f, g, ctx))
        if (!vanishes(x)) return false;
    return true;
}

std::string to_string(HamiltonianVerdict v) {
    switch (v) {
        case HamiltonianVerdict::Yes: return "yes";
        case HamiltonianVerdict::No: return "no";
        case HamiltonianVerdict::Undecided: return "undecided";
    }
    return "?";
}

namespace {

// Frechet derivative of a vector of differential functions as a matrix operator.
MatrixDiffOp frechet(const std::vector<Expr>& f) {
    const int m = static_cast<int>(f.size());
    MatrixDiffOp k(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            ScalarDiffOp entry;
            int top = jet::jet_order(f[i]);
            for (int n = 0; n <= top; ++n) {
                Expr c = f[i].partial(Vars::jet(j + 1, n));
                if (!c.is_zero()) entry = entry + ScalarDiffOp::term(c, n);
            }
            k.at(i, j) = entry;
        }
    return k;
}

// P = C D with C constant and invertible: returns C^{-1}.
std::optional<std::vector<std::vector<Expr>>> constant_times_d(const MatrixDiffOp& p) {
    const int m = p.size();
    if (p.order() != 1) return std::nullopt;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            for (const auto& [k, c] : p.at(i, j).coefficients())
                if (k != 1 || c.depends_on_if([](VarId v) { return Vars::is_jet(v); })) return std::nullopt;
        }
    return linalg::inverse<Expr>(p.coefficient_matrix(1), [](const Expr& e) { return vanishes(e); });
}

// Monomials in the jet variables u^a_(n), n <= max_order, with total degree
// <= degree and total order <= max_weight.
void jet_monomials(int m, const DensityAnsatz& a, std::vector<Expr>& out) {
    std::vector<VarId> vars;
    std::vector<int> orders;
    for (int n = 0; n <= a.max_order; ++n)
        for (int c = 1; c <= m; ++c) {
            vars.push_back(Vars::jet(c, n));
            orders.push_back(n);
        }
    std::function<void(std::size_t, int, int, Expr)> rec = [&](std::size_t start, int deg, int weight, Expr cur) {
        out.push_back(cur);
        if (deg == a.degree) return;
        for (std::size_t v = start; v < vars.size(); ++v) {
            if (weight + orders[v] > a.max_weight) continue;
            rec(v, deg + 1, weight + orders[v], cur * Expr::var(vars[v]));
        }
    };
    rec(0, 0, 0, Expr(1));
}

template <class F>
std::optional<std::vector<F>> solve_rows(const std::vector<std::map<Monomial, std::vector<Expr>, bool (*)(const Monomial&, const Monomial&)>>& rows,
                                         std::size_t n, const std::function<F(const Expr&)>& conv,
                                         const std::function<bool(const F&)>& is_zero) {
    linalg::EchelonBasis<F> basis(n + 1, is_zero);
    for (const auto& comp : rows)
        for (const auto& [mono, row] : comp) {
            std::vector<F> r;
            r.reserve(n + 1);
            for (const auto& e : row) r.push_back(conv(e));
            basis.add(std::move(r));
        }
    std::vector<F> x(n, F(0));
    for (const auto& [p, r] : basis.rows()) {
        if (p == n) return std::nullopt;
        x[p] = r[n];
    }
    return x;
}

bool mono_less(const Monomial& a, const Monomial& b) { return compare(a, b) < 0; }

}  // namespace

HamiltonianFlowResult is_hamiltonian_flow(const Flow& f, const MatrixDiffOp& p, const JetContext& ctx,
                                          const DensityAnsatz& ansatz) {
    const int m = p.size();
    if (f.size() != m) throw DimensionMismatch("flow and operator sizes differ");
    HamiltonianFlowResult res;
    for (const auto& x : f.rhs)
        if (x.has_radicals()) {
            res.reason = "flows with radicals are outside the density ansatz";
            return res;
        }
    bool helmholtz_ok = false;
    if (auto cinv = constant_times_d(p)) {
        // F = C D dH  <=>  C^{-1} F = D dH
        std::vector<Expr> g(m);
        for (int i = 0; i < m; ++i) {
            std::vector<Expr> parts;
            for (int j = 0; j < m; ++j) parts.push_back((*cinv)[i][j] * f.rhs[j]);
            g[i] = jet::sum(parts);
        }
        for (int i = 0; i < m; ++i)
            if (!jet::is_total_derivative(g[i], ctx)) {
                res.verdict = HamiltonianVerdict::No;
                res.reason = "component " + std::to_string(i + 1) + " of C^-1 F is not a total derivative";
                return res;
            }
        MatrixDiffOp k = frechet(g);
        MatrixDiffOp d = MatrixDiffOp::identity(m, ScalarDiffOp::D());
        if (!(k.compose(d, ctx) + d.compose(k.adjoint(ctx), ctx)).is_zero()) {
            res.verdict = HamiltonianVerdict::No;
            res.reason = "Helmholtz condition fails: D^-1 C^-1 F is not a variational gradient";
            return res;
        }
        helmholtz_ok = true;
    }

    // Laurent range from the denominators of the flow
    std::vector<unsigned> neg(m, 0);
    for (const auto& x : f.rhs) {
        const Poly& den = x.den();
        if (!den.is_monomial()) {
            res.reason = "denominator " + den.str() + " is outside the Laurent ansatz";
            if (helmholtz_ok) res.verdict = HamiltonianVerdict::Yes;
            return res;
        }
        const Monomial& mono = den.lead().mono;
        for (std::size_t w = 0; w < mono.size(); ++w) {
            VarId v = mono.var(w);
            const auto& info = Vars::info(v);
            if (info.kind != jet::VarKind::Jet || info.order != 0) {
                res.reason = "denominator " + den.str() + " is outside the Laurent ansatz";
                if (helmholtz_ok) res.verdict = HamiltonianVerdict::Yes;
                return res;
            }
            neg[info.component - 1] = std::max(neg[info.component - 1], mono.exp(w));
        }
    }
    std::vector<Expr> base;
    jet_monomials(m, ansatz, base);
    std::vector<Expr> candidates;
    std::set<std::string> seen;
    std::function<void(int, Expr)> laurent = [&](int c, Expr factor) {
        if (c == m) {
            for (const auto& b : base) {
                Expr cand = b * factor;
                if (cand.is_constant()) continue;
                if (seen.insert(cand.str()).second) candidates.push_back(cand);
            }
            return;
        }
        unsigned top = neg[c] + static_cast<unsigned>(ansatz.laurent);
        for (unsigned e = 0; e <= top; ++e) laurent(c + 1, factor / Expr::u(c + 1).pow(static_cast<int>(e)));
    };
    laurent(0, Expr(1));

    const std::size_t n = candidates.size();
    std::vector<std::vector<Expr>> images;
    images.reserve(n);
    for (const auto& cand : candidates) images.push_back(op::apply(p, jet::variational_gradient(cand, ctx), ctx));

    using RowMap = std::map<Monomial, std::vector<Expr>, bool (*)(const Monomial&, const Monomial&)>;
    std::vector<RowMap> rows;
    bool symbolic = false;
    auto is_field = [](VarId v) { return Vars::is_jet(v); };
    for (int i = 0; i < m; ++i) {
        Poly l = f.rhs[i].den();
        for (const auto& img : images) {
            const Poly& d = img[i].den();
            if (img[i].is_zero()) continue;
            l = l * Poly::divide(d, jet::gcd(l, d)).value();
        }
        RowMap comp(mono_less);
        auto add = [&](const Expr& e, std::size_t col, bool negate) {
            if (e.is_zero()) return;
            Poly scaled = e.num() * Poly::divide(l, e.den()).value();
            for (auto& [mono, cof] : scaled.collect(is_field)) {
                auto& row = comp[mono];
                if (row.empty()) row.assign(n + 1, Expr());
                Expr c(cof);
                if (!c.is_constant()) symbolic = true;
                row[col] += negate ? -c : c;
            }
        };
        for (std::size_t k = 0; k < n; ++k) add(images[k][i], k, false);
        add(f.rhs[i], n, false);
        rows.push_back(std::move(comp));
    }
    std::optional<std::vector<Expr>> x;
    if (symbolic) {
        x = solve_rows<Expr>(rows, n, [](const Expr& e) { return e; }, [](const Expr& e) { return vanishes(e); });
    } else {
        auto xr = solve_rows<Rational>(rows, n, [](const Expr& e) { return e.constant_value(); },
                                       [](const Rational& q) { return q == 0; });
        if (xr) {
            x.emplace();
            for (const auto& q : *xr) x->push_back(Expr(q));
        }
    }
    if (x) {
        std::vector<Expr> parts;
        for (std::size_t k = 0; k < n; ++k)
            if (!(*x)[k].is_zero()) parts.push_back((*x)[k] * candidates[k]);
        res.verdict = HamiltonianVerdict::Yes;
        res.density = jet::sum(parts);
        res.reason = "density found in the ansatz (" + std::to_string(n) + " candidate monomials)";
        return res;
    }
    if (helmholtz_ok) {
        res.verdict = HamiltonianVerdict::Yes;
        res.reason = "Helmholtz condition holds; no density within the ansatz";
        return res;
    }
    res.reason = "no density among " + std::to_string(n) + " candidate monomials";
    return res;
}

}  // namespace hamtrio::hierarchy
