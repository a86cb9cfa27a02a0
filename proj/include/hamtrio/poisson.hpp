#pragma once

#include <vector>

#include "hamtrio/diffop.hpp"

namespace hamtrio::poisson {

using jet::Expr;
using jet::JetContext;
using op::MatrixDiffOp;

/// Jet cap used inside bracket computations.
inline constexpr int kBracketJetCap = 36;

/// Trivector integrand of the Schouten bracket [P,Q]:
/// sum over cyclic (a,b,c) of psi_a . DP[Q psi_b] psi_c + psi_a . DQ[P psi_b] psi_c.
/// Throws NotSkewAdjoint unless both operators are skew-adjoint.
Expr schouten_integrand(const MatrixDiffOp& p, const MatrixDiffOp& q, const JetContext& ctx);

/// Same integrand without the skew-adjointness precondition check.
Expr schouten_integrand_unchecked(const MatrixDiffOp& p, const MatrixDiffOp& q, const JetContext& ctx);

/// [P,Q] = 0, decided by Euler annihilation of the integrand.
bool are_compatible(const MatrixDiffOp& p, const MatrixDiffOp& q, const JetContext& ctx);

/// Skew-adjoint and [P,P] = 0.
bool is_hamiltonian(const MatrixDiffOp& p, const JetContext& ctx);

/// Directional derivative of a coefficient along the evolutionary field X:
/// sum_{b,s} d a / d u^b_(s) * D^s X^b.
Expr directional_derivative(const Expr& a, const std::vector<Expr>& x, const JetContext& ctx);

using Matrix = std::vector<std::vector<Expr>>;
using Array3 = std::vector<std::vector<std::vector<Expr>>>;

/// Residuals of the third-order canonical-form conditions for
/// R = D (l^{ij} D + c^{ij}_k u^k_x) D: first (4), then (6), then (7); c is
/// given with upper indices c[i][j][k] = c^{ij}_k.
std::vector<Expr> third_order_conditions(const Matrix& l, const Array3& c);

/// Reads l^{ij} and c^{ij}_k back from a third-order operator D(l D + c u_x)D.
/// Returns false if the operator is not of that form.
bool third_order_data(const MatrixDiffOp& r, Matrix& l, Array3& c, const JetContext& ctx);

/// T totally antisymmetric and T0 antisymmetric (constant data of a second-order operator).
bool second_order_form_check(const Array3& t, const Matrix& t0);

}  // namespace hamtrio::poisson
