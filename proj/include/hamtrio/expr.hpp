#pragma once

#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "hamtrio/poly.hpp"

namespace hamtrio::jet {

using Point = std::unordered_map<VarId, double>;
using Substitution = std::unordered_map<VarId, class Expr>;

/// Exact scalar expression: a gcd-reduced quotient of polynomials over Q with
/// a monic denominator. Square roots appear as opaque Radical variables, so
/// the rational canonical form is also the representation of radical
/// expressions (without rewriting across radicals). Immutable, cheap to copy.
class Expr {
public:
    Expr();
    Expr(long c);             // NOLINT(google-explicit-constructor)
    Expr(int c) : Expr(static_cast<long>(c)) {}  // NOLINT(google-explicit-constructor)
    Expr(const Rational& c);  // NOLINT(google-explicit-constructor)
    Expr(Poly p);             // NOLINT(google-explicit-constructor)

    static Expr fraction(Poly num, Poly den);
    static Expr rational(long num, long den) {
        Rational q(num, den);
        q.canonicalize();
        return Expr(q);
    }
    static Expr var(VarId v) { return Expr(Poly::var(v)); }
    static Expr u(int component, int order = 0) { return var(Vars::jet(component, order)); }
    static Expr param(std::string_view name) { return var(Vars::param(name)); }
    /// Opaque square root; exact only for perfect-square rational constants.
    static Expr sqrt(const Expr& radicand);

    const Poly& num() const { return rep_->num; }
    const Poly& den() const { return rep_->den; }

    bool is_zero() const { return num().is_zero(); }
    bool is_constant() const { return num().is_constant() && den().is_constant(); }
    bool is_polynomial() const { return den().is_constant(); }
    Rational constant_value() const;
    bool has_radicals() const;
    std::vector<VarId> variables() const;
    bool depends_on(VarId v) const { return num().contains(v) || den().contains(v); }
    bool depends_on_if(const std::function<bool(VarId)>& pred) const;
    /// Variables including those inside radicands (transitively).
    std::vector<VarId> deep_variables() const;

    Expr operator-() const;
    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    Expr& operator+=(const Expr& b) { return *this = *this + b; }
    Expr& operator-=(const Expr& b) { return *this = *this - b; }
    Expr& operator*=(const Expr& b) { return *this = *this * b; }
    Expr& operator/=(const Expr& b) { return *this = *this / b; }
    Expr pow(int n) const;
    /// Canonical-form equality (exact on the rational fragment).
    friend bool operator==(const Expr& a, const Expr& b);
    friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

    /// Partial derivative, chain rule through radicals whose radicands depend on v.
    Expr partial(VarId v) const;
    /// Partial derivative treating every variable (radicals included) as independent.
    Expr explicit_partial(VarId v) const;
    /// Simultaneous substitution; radicands are substituted too.
    Expr substitute(const Substitution& s) const;
    /// Coefficient of v^k when the expression is polynomial in v (v absent from den).
    Expr coefficient(VarId v, unsigned k) const;
    unsigned degree_in(VarId v) const { return num().degree(v); }

    double eval(const Point& point) const;
    double eval(const std::function<double(VarId)>& value) const;

    std::string str() const;

private:
    struct Rep {
        Poly num;
        Poly den;
    };
    explicit Expr(std::shared_ptr<const Rep> r) : rep_(std::move(r)) {}
    static Expr make_reduced(Poly num, Poly den);  // caller guarantees coprime
    std::shared_ptr<const Rep> rep_;
};

/// Sum of many expressions, grouping equal denominators before reducing.
Expr sum(const std::vector<Expr>& terms);

/// Applies a derivation: `on_poly` differentiates a polynomial treating radical
/// atoms as constants, `on_radical` gives the derivative of a radical atom.
Expr apply_derivation(const Expr& e, const std::function<Poly(const Poly&)>& on_poly,
                      const std::function<Expr(VarId)>& on_radical);

/// Zero test: exact on the rational fragment; with radicals, numeric sampling
/// at `samples` random points (relative tolerance `tol`), a semi-decision.
bool is_identically_zero(const Expr& e, int samples = 8, double tol = 1e-9);

/// Rational square root when num and den are perfect squares (sign chosen by
/// the leading coefficient).
std::optional<Expr> exact_sqrt(const Expr& e);

std::ostream& operator<<(std::ostream& os, const Expr& e);

}  // namespace hamtrio::jet
