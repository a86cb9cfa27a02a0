#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "hamtrio/jetcalc.hpp"

namespace hamtrio::op {

using jet::Expr;
using jet::JetContext;

/// Scalar differential operator sum_k a_k D^k with canonical coefficients.
class ScalarDiffOp {
public:
    ScalarDiffOp() = default;
    ScalarDiffOp(Expr a);  // NOLINT(google-explicit-constructor): multiplication operator
    static ScalarDiffOp D(int k = 1);
    static ScalarDiffOp term(Expr a, int k);

    bool is_zero() const { return coef_.empty(); }
    /// Highest power of D, -1 for the zero operator.
    int order() const { return coef_.empty() ? -1 : coef_.rbegin()->first; }
    Expr coeff(int k) const;
    const std::map<int, Expr>& coefficients() const { return coef_; }

    friend ScalarDiffOp operator+(const ScalarDiffOp& a, const ScalarDiffOp& b);
    friend ScalarDiffOp operator-(const ScalarDiffOp& a, const ScalarDiffOp& b);
    ScalarDiffOp operator-() const;
    friend ScalarDiffOp operator*(const Expr& c, const ScalarDiffOp& a);  // left multiplication by a function
    friend bool operator==(const ScalarDiffOp& a, const ScalarDiffOp& b) { return a.coef_ == b.coef_; }

    ScalarDiffOp compose(const ScalarDiffOp& b, const JetContext& ctx) const;
    ScalarDiffOp adjoint(const JetContext& ctx) const;
    Expr apply(const Expr& f, const JetContext& ctx) const;
    ScalarDiffOp map_coefficients(const std::function<Expr(const Expr&)>& fn) const;

    std::string str() const;

private:
    void add(int k, const Expr& a);
    std::map<int, Expr> coef_;
};

/// Composition with the Leibniz expansion D^k a = sum_j C(k,j) D^j(a) D^(k-j).
ScalarDiffOp compose(const ScalarDiffOp& a, const ScalarDiffOp& b, const JetContext& ctx);

/// Square m x m matrix of scalar operators (row-major, 0-based access).
class MatrixDiffOp {
public:
    MatrixDiffOp() = default;
    explicit MatrixDiffOp(int m) : m_(m), e_(static_cast<std::size_t>(m * m)) {}
    static MatrixDiffOp identity(int m, const ScalarDiffOp& diag = ScalarDiffOp(Expr(1)));
    static MatrixDiffOp from_rows(const std::vector<std::vector<ScalarDiffOp>>& rows);
    /// Multiplication operator by a matrix of functions.
    static MatrixDiffOp multiplication(const std::vector<std::vector<Expr>>& a);

    int size() const { return m_; }
    ScalarDiffOp& at(int i, int j) { return e_[static_cast<std::size_t>(i * m_ + j)]; }
    const ScalarDiffOp& at(int i, int j) const { return e_[static_cast<std::size_t>(i * m_ + j)]; }
    int order() const;
    bool is_zero() const;

    friend MatrixDiffOp operator+(const MatrixDiffOp& a, const MatrixDiffOp& b);
    friend MatrixDiffOp operator-(const MatrixDiffOp& a, const MatrixDiffOp& b);
    MatrixDiffOp operator-() const;
    friend MatrixDiffOp operator*(const Expr& c, const MatrixDiffOp& a);
    friend bool operator==(const MatrixDiffOp& a, const MatrixDiffOp& b);

    MatrixDiffOp compose(const MatrixDiffOp& b, const JetContext& ctx) const;
    MatrixDiffOp adjoint(const JetContext& ctx) const;
    std::vector<Expr> apply(const std::vector<Expr>& psi, const JetContext& ctx) const;
    MatrixDiffOp map_coefficients(const std::function<Expr(const Expr&)>& fn) const;
    MatrixDiffOp substitute(const jet::Substitution& s) const;
    /// Coefficient matrix of D^k.
    std::vector<std::vector<Expr>> coefficient_matrix(int k) const;

    std::string str() const;

private:
    int m_ = 0;
    std::vector<ScalarDiffOp> e_;
};

MatrixDiffOp compose(const MatrixDiffOp& a, const MatrixDiffOp& b, const JetContext& ctx);
MatrixDiffOp adjoint(const MatrixDiffOp& p, const JetContext& ctx);
std::vector<Expr> apply(const MatrixDiffOp& p, const std::vector<Expr>& psi, const JetContext& ctx);
bool is_skew_adjoint(const MatrixDiffOp& p, const JetContext& ctx);

/// Returns kappa (free of jet and covector variables) with a = kappa * b, if one exists.
std::optional<Expr> equal_up_to_scale(const MatrixDiffOp& a, const MatrixDiffOp& b);

/// The deformation parameter and spectral parameter used by pencils.
jet::VarId eps_var();
jet::VarId lambda_var();

/// A pencil Pi = side2 - lambda * side1, both sides polynomial in eps.
struct Pencil {
    MatrixDiffOp side2;
    MatrixDiffOp side1;

    MatrixDiffOp combined() const;
    /// Splits a lambda-linear operator into its two sides.
    static Pencil from_operator(const MatrixDiffOp& pi);
};

/// A^{ij}_{a;k,l}: side a, eps-order k, degree l, sitting in front of D^(k-l+1).
class GradedCoefficients {
public:
    using Matrix = std::vector<std::vector<Expr>>;
    explicit GradedCoefficients(int m = 0) : m_(m) {}

    int size() const { return m_; }
    Matrix at(int side, int k, int l) const;
    void set(int side, int k, int l, Matrix a) { table_[{side, k, l}] = std::move(a); }
    /// Highest eps-order present.
    int max_order() const;
    const std::map<std::tuple<int, int, int>, Matrix>& table() const { return table_; }
    Pencil reassemble() const;

private:
    int m_;
    std::map<std::tuple<int, int, int>, Matrix> table_;
};

GradedCoefficients extract_graded(const Pencil& pencil);

/// Transforms P to the coordinates v = phi(u): J P J^T with J = dphi/du, inner
/// coefficients rewritten through u = phi_inv(v) (expressed in the same field
/// symbols u1..um, now read as the new coordinates).
MatrixDiffOp point_transform(const MatrixDiffOp& p, const std::vector<Expr>& phi, const std::vector<Expr>& phi_inv,
                             const JetContext& ctx);

/// Jacobian matrix dphi^i/du^j.
std::vector<std::vector<Expr>> jacobian(const std::vector<Expr>& phi, int m);

/// Rewrites every u^a_(n) as D^n(phi_inv^a).
Expr pull_back(const Expr& e, const std::vector<Expr>& phi_inv, const JetContext& ctx);

}  // namespace hamtrio::op
