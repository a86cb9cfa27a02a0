#pragma once

#include <map>
#include <optional>
#include <vector>

#include "hamtrio/expr.hpp"

namespace hamtrio::jet {

/// Component count and jet-order cap. Operations that would create a jet
/// variable of order above the cap throw JetOrderExceeded.
struct JetContext {
    int m = 2;
    int max_jet_order = 9;

    JetContext with_cap(int cap) const { return {m, cap}; }
};

/// Highest jet order among field and covector variables (radicands included); -1 if none.
int jet_order(const Expr& e);

/// Total x-derivative on the jet space (fields and test covectors).
Expr total_derivative(const Expr& e, const JetContext& ctx);
/// D_x applied n times.
Expr total_derivative(const Expr& e, int n, const JetContext& ctx);
/// D_x on a polynomial whose radical atoms are treated as constants.
Poly total_derivative_poly(const Poly& p, const JetContext& ctx);

/// A dependent variable: field u^i or component i of test covector psi_a.
struct DependentVar {
    int component = 1;
    int covector = 0;  // 0 for fields

    static DependentVar field(int i) { return {i, 0}; }
    static DependentVar psi(int a, int i) { return {i, a}; }
    VarId jet(int order) const;
    friend bool operator==(const DependentVar&, const DependentVar&) = default;
};

/// Dependent variables present in e (fields and covectors, deep through radicands).
std::vector<DependentVar> dependent_variables(const Expr& e);

/// Variational derivative sum_k (-D)^k d/d v_(k).
Expr euler(const Expr& e, DependentVar v, const JetContext& ctx);
/// Variational gradient with respect to the fields u^1..u^m.
std::vector<Expr> variational_gradient(const Expr& density, const JetContext& ctx);

/// True iff every Euler residual vanishes; covector residuals are tried first.
bool is_total_derivative(const Expr& e, const JetContext& ctx);

/// Degree with deg u^i_(k) = deg psi_(k) = k; throws NotHomogeneous.
int homogeneous_degree(const Expr& e);
std::optional<int> try_homogeneous_degree(const Expr& e);

/// Splits e into homogeneous pieces keyed by degree (denominator must be homogeneous).
std::map<int, Expr> homogeneous_components(const Expr& e);

double eval_numeric(const Expr& e, const Point& point);

/// Zero test used by every module: exact without radicals, sampled otherwise.
inline bool vanishes(const Expr& e) { return is_identically_zero(e); }

}  // namespace hamtrio::jet
