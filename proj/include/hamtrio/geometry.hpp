#pragma once

#include <string>
#include <vector>

#include "hamtrio/diffop.hpp"

namespace hamtrio::geometry {

using jet::Expr;
using Matrix = std::vector<std::vector<Expr>>;

/// Contravariant metric g^{ij}(u).
struct Metric {
    Matrix g;
    int size() const { return static_cast<int>(g.size()); }
};

/// Contravariant Christoffel symbols gamma[i][j][k] = Gamma^{ij}_k.
struct Connection {
    std::vector<std::vector<std::vector<Expr>>> gamma;
};

/// Covariant metric g_{ij}; throws DegenerateMetric.
Matrix lower(const Metric& g);

Connection levi_civita(const Metric& g);

/// Residuals of g^{is}Gamma^{jk}_s = g^{js}Gamma^{ik}_s and
/// Gamma^{ij}_k + Gamma^{ji}_k = d_k g^{ij}; only nonzero entries are returned.
std::vector<Expr> levi_civita_residuals(const Metric& g, const Connection& gamma);

/// R[i][j][k][l] = R^i_{jkl} of the Levi-Civita connection of g_{ij}.
using Riemann = std::vector<std::vector<std::vector<std::vector<Expr>>>>;
Riemann riemann(const Metric& g);
/// Vanishing curvature of the Levi-Civita connection (computed in contravariant form).
bool is_flat(const Metric& g);

/// Curvature of a connection in contravariant form: the coefficient of xi_k in
/// [nabla^i, nabla^j] xi_l with nabla^i = g^{is} nabla_s, that is
/// g^{is} d_s Gamma^{jk}_l - g^{js} d_s Gamma^{ik}_l + (Gamma^{ji}_s - Gamma^{ij}_s) Gamma^{sk}_l
///   + Gamma^{is}_l Gamma^{jk}_s - Gamma^{js}_l Gamma^{ik}_s, stored as [i][j][k][l]. For the Levi-Civita connection of a nondegenerate
/// metric it vanishes exactly when the metric is flat; no inverse is needed.
Riemann contravariant_curvature(const Metric& g, const Connection& gamma);

struct FlatPencilReport {
    bool flat = false;         // Riemann tensor of g - lambda h vanishes identically in lambda
    bool additive = false;     // Gamma(g - lambda h) = Gamma(g) - lambda Gamma(h)
    bool ok() const { return flat && additive; }
    std::string diagnostic;
};

/// Flat pencil test with lambda treated as an indeterminate. Throws
/// DegeneratePencil when det(g - lambda h) vanishes identically.
FlatPencilReport flat_pencil_check(const Metric& g, const Metric& h);
/// Same test when the connections are known: checks that they are the
/// Levi-Civita connections of g, h and g - lambda h (which gives additivity)
/// and that the contravariant curvature of the pencil vanishes.
FlatPencilReport flat_pencil_check(const Metric& g, const Connection& gg, const Metric& h, const Connection& gh);

/// g^{ij} D + Gamma^{ij}_k u^k_x with the Levi-Civita connection.
op::MatrixDiffOp op_from_metric(const Metric& g);
/// Same with an explicitly given connection.
op::MatrixDiffOp op_from_metric(const Metric& g, const Connection& gamma);

/// Reads (g, Gamma) back from a first-order homogeneous operator; false if it is not of that form.
bool hydrodynamic_data(const op::MatrixDiffOp& p, Metric& g, Connection& gamma);

}  // namespace hamtrio::geometry
