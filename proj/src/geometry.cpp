#include "hamtrio/geometry.hpp"

#include "hamtrio/errors.hpp"
#include "hamtrio/linalg.hpp"

namespace hamtrio::geometry {

using jet::vanishes;
using jet::Vars;
using op::MatrixDiffOp;
using op::ScalarDiffOp;

namespace {

Expr d(const Expr& e, int k) { return e.partial(Vars::jet(k + 1)); }

bool zero(const Expr& e) { return vanishes(e); }

using Array3 = std::vector<std::vector<std::vector<Expr>>>;

Array3 array3(int m) { return Array3(m, std::vector<std::vector<Expr>>(m, std::vector<Expr>(m))); }

// Christoffel symbols of the second kind Gamma^j_{sk} of the covariant metric.
Array3 second_kind(const Metric& g, const Matrix& low) {
    const int m = g.size();
    Array3 dl = array3(m);  // dl[l][k][s] = d_s g_{lk}
    for (int l = 0; l < m; ++l)
        for (int k = 0; k < m; ++k)
            for (int s = 0; s < m; ++s) dl[l][k][s] = d(low[l][k], s);
    Array3 out = array3(m);
    for (int j = 0; j < m; ++j)
        for (int s = 0; s < m; ++s)
            for (int k = 0; k < m; ++k) {
                std::vector<Expr> parts;
                for (int l = 0; l < m; ++l) {
                    if (g.g[j][l].is_zero()) continue;
                    parts.push_back(g.g[j][l] * (dl[l][k][s] + dl[l][s][k] - dl[s][k][l]));
                }
                out[j][s][k] = jet::sum(parts) * Expr::rational(1, 2);
            }
    return out;
}

}  // namespace

Matrix lower(const Metric& g) {
    auto inv = linalg::inverse<Expr>(g.g, zero);
    if (!inv) throw DegenerateMetric("metric is degenerate");
    return *inv;
}

Connection levi_civita(const Metric& g) {
    const int m = g.size();
    Array3 ch = second_kind(g, lower(g));
    Connection c{array3(m)};
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                std::vector<Expr> parts;
                for (int s = 0; s < m; ++s) parts.push_back(-(g.g[i][s] * ch[j][s][k]));
                c.gamma[i][j][k] = jet::sum(parts);
            }
    return c;
}

std::vector<Expr> levi_civita_residuals(const Metric& g, const Connection& c) {
    const int m = g.size();
    std::vector<Expr> out;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                std::vector<Expr> parts;
                for (int s = 0; s < m; ++s) {
                    parts.push_back(g.g[i][s] * c.gamma[j][k][s]);
                    parts.push_back(-(g.g[j][s] * c.gamma[i][k][s]));
                }
                Expr r = jet::sum(parts);
                if (!zero(r)) out.push_back(r);
            }
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                Expr r = c.gamma[i][j][k] + c.gamma[j][i][k] - d(g.g[i][j], k);
                if (!zero(r)) out.push_back(r);
            }
    return out;
}

Riemann riemann(const Metric& g) {
    const int m = g.size();
    Array3 ch = second_kind(g, lower(g));  // ch[i][l][j] = Gamma^i_{lj}
    Riemann r(m, array3(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                for (int l = 0; l < m; ++l) {
                    if (l < k) {
                        r[i][j][k][l] = -r[i][j][l][k];
                        continue;
                    }
                    if (l == k) continue;
                    std::vector<Expr> parts{d(ch[i][l][j], k), -d(ch[i][k][j], l)};
                    for (int s = 0; s < m; ++s) {
                        parts.push_back(ch[i][k][s] * ch[s][l][j]);
                        parts.push_back(-(ch[i][l][s] * ch[s][k][j]));
                    }
                    r[i][j][k][l] = jet::sum(parts);
                }
    return r;
}

bool is_flat(const Metric& g) {
    for (const auto& a : contravariant_curvature(g, levi_civita(g)))
        for (const auto& b : a)
            for (const auto& c : b)
                for (const auto& x : c)
                    if (!zero(x)) return false;
    return true;
}

FlatPencilReport flat_pencil_check(const Metric& g, const Metric& h) {
    const int m = g.size();
    if (h.size() != m) throw DimensionMismatch("pencil metrics of different sizes");
    const Expr lam = Expr::var(op::lambda_var());
    Metric pencil{Matrix(m, std::vector<Expr>(m))};
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) pencil.g[i][j] = g.g[i][j] - lam * h.g[i][j];
    if (zero(linalg::determinant<Expr>(pencil.g, zero))) throw DegeneratePencil("det(g - lambda h) vanishes identically");
    FlatPencilReport rep;
    rep.flat = is_flat(pencil);
    Connection cp = levi_civita(pencil), cg = levi_civita(g), ch = levi_civita(h);
    rep.additive = true;
    for (int i = 0; i < m && rep.additive; ++i)
        for (int j = 0; j < m && rep.additive; ++j)
            for (int k = 0; k < m && rep.additive; ++k)
                if (!zero(cp.gamma[i][j][k] - cg.gamma[i][j][k] + lam * ch.gamma[i][j][k])) {
                    rep.additive = false;
                    rep.diagnostic += "Christoffel symbols not additive in (" + std::to_string(i + 1) + "," +
                                      std::to_string(j + 1) + "," + std::to_string(k + 1) + "); ";
                }
    if (!rep.flat) rep.diagnostic += "g - lambda h is not flat for generic lambda; ";
    return rep;
}

Riemann contravariant_curvature(const Metric& g, const Connection& c) {
    const int m = g.size();
    const auto& G = c.gamma;
    Riemann r(m, array3(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                for (int l = 0; l < m; ++l) {
                    std::vector<Expr> parts;
                    if (j < i) {
                        r[i][j][k][l] = -r[j][i][k][l];
                        continue;
                    }
                    if (j == i) continue;
                    for (int s = 0; s < m; ++s) {
                        if (!g.g[i][s].is_zero()) parts.push_back(g.g[i][s] * d(G[j][k][l], s));
                        if (!g.g[j][s].is_zero()) parts.push_back(-(g.g[j][s] * d(G[i][k][l], s)));
                        parts.push_back((G[j][i][s] - G[i][j][s]) * G[s][k][l]);
                        parts.push_back(G[i][s][l] * G[j][k][s]);
                        parts.push_back(-(G[j][s][l] * G[i][k][s]));
                    }
                    r[i][j][k][l] = jet::sum(parts);
                }
    return r;
}

FlatPencilReport flat_pencil_check(const Metric& g, const Connection& gg, const Metric& h, const Connection& gh) {
    const int m = g.size();
    if (h.size() != m) throw DimensionMismatch("pencil metrics of different sizes");
    const Expr lam = Expr::var(op::lambda_var());
    Metric pencil{Matrix(m, std::vector<Expr>(m))};
    Connection cp{array3(m)};
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            pencil.g[i][j] = g.g[i][j] - lam * h.g[i][j];
            for (int k = 0; k < m; ++k) cp.gamma[i][j][k] = gg.gamma[i][j][k] - lam * gh.gamma[i][j][k];
        }
    if (zero(linalg::determinant<Expr>(pencil.g, zero))) throw DegeneratePencil("det(g - lambda h) vanishes identically");
    FlatPencilReport rep;
    rep.additive = true;
    if (!levi_civita_residuals(g, gg).empty()) rep.diagnostic += "connection of g is not its Levi-Civita connection; ";
    if (!levi_civita_residuals(h, gh).empty()) rep.diagnostic += "connection of h is not its Levi-Civita connection; ";
    if (!levi_civita_residuals(pencil, cp).empty()) {
        rep.additive = false;
        rep.diagnostic += "Gamma(g) - lambda Gamma(h) is not the Levi-Civita connection of g - lambda h; ";
    }
    if (!rep.diagnostic.empty()) rep.additive = false;
    rep.flat = rep.additive;
    if (rep.additive) {
        for (const auto& a : contravariant_curvature(pencil, cp))
            for (const auto& b : a)
                for (const auto& c : b)
                    for (const auto& x : c)
                        if (rep.flat && !zero(x)) rep.flat = false;
        if (!rep.flat) rep.diagnostic += "g - lambda h is not flat for generic lambda; ";
    }
    return rep;
}

MatrixDiffOp op_from_metric(const Metric& g, const Connection& c) {
    const int m = g.size();
    MatrixDiffOp p(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            std::vector<Expr> parts;
            for (int k = 0; k < m; ++k) parts.push_back(c.gamma[i][j][k] * Expr::u(k + 1, 1));
            p.at(i, j) = ScalarDiffOp::term(g.g[i][j], 1) + ScalarDiffOp(jet::sum(parts));
        }
    return p;
}

MatrixDiffOp op_from_metric(const Metric& g) { return op_from_metric(g, levi_civita(g)); }

bool hydrodynamic_data(const MatrixDiffOp& p, Metric& g, Connection& c) {
    const int m = p.size();
    if (p.order() > 1) return false;
    g.g = p.coefficient_matrix(1);
    c.gamma = array3(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) c.gamma[i][j][k] = p.at(i, j).coeff(0).partial(Vars::jet(k + 1, 1));
    MatrixDiffOp diff = op_from_metric(g, c) - p;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (const auto& [k, x] : diff.at(i, j).coefficients())
                if (!zero(x)) return false;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (jet::jet_order(g.g[i][j]) > 0) return false;
    return true;
}

}  // namespace hamtrio::geometry
