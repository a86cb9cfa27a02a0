#pragma once

#include <gmpxx.h>

#include <boost/container/small_vector.hpp>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hamtrio/variables.hpp"

namespace hamtrio::jet {

using Rational = mpq_class;

/// Power product of variables, stored as packed (var, exponent) words sorted
/// by variable id.
class Monomial {
public:
    static constexpr unsigned kExpBits = 12;
    static constexpr std::uint32_t kExpMask = (1u << kExpBits) - 1;

    Monomial() = default;
    static Monomial of(VarId v, unsigned exp = 1);

    bool is_one() const { return words_.empty(); }
    std::size_t size() const { return words_.size(); }
    VarId var(std::size_t i) const { return words_[i] >> kExpBits; }
    unsigned exp(std::size_t i) const { return words_[i] & kExpMask; }
    unsigned degree(VarId v) const;
    unsigned total_degree() const;
    bool contains(VarId v) const { return degree(v) != 0; }

    Monomial operator*(const Monomial& o) const;
    bool divides(const Monomial& o) const;
    /// Requires divides(o) on the other side: returns this / o.
    Monomial operator/(const Monomial& o) const;
    Monomial gcd(const Monomial& o) const;
    /// This monomial with variable v removed.
    Monomial without(VarId v) const;
    /// Keeps only the variables accepted by the predicate.
    Monomial filter(const std::function<bool(VarId)>& keep) const;

    /// Lexicographic order, smaller var id more significant: -1, 0, +1.
    friend int compare(const Monomial& a, const Monomial& b);
    friend bool operator==(const Monomial& a, const Monomial& b) { return a.words_ == b.words_; }
    std::size_t hash() const;

private:
    void push(VarId v, unsigned e);
    boost::container::small_vector<std::uint32_t, 4> words_;
};

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

struct Term {
    Monomial mono;
    Rational coef;
};

/// Sparse multivariate polynomial over Q; terms sorted by decreasing monomial,
/// no zero coefficients.
class Poly {
public:
    Poly() = default;
    Poly(long c);  // NOLINT(google-explicit-constructor)
    Poly(const Rational& c);  // NOLINT(google-explicit-constructor)
    static Poly var(VarId v, unsigned exp = 1);
    static Poly term(Monomial m, Rational c);
    /// Builds from unsorted terms, combining duplicates.
    static Poly from_terms(std::vector<Term> terms);
    /// Terms already strictly decreasing with nonzero coefficients.
    static Poly from_sorted(std::vector<Term> terms);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }
    bool is_monomial() const { return terms_.size() == 1; }
    Rational constant_value() const;
    std::size_t size() const { return terms_.size(); }
    const std::vector<Term>& terms() const { return terms_; }
    const Term& lead() const { return terms_.front(); }

    unsigned degree(VarId v) const;
    std::vector<VarId> variables() const;
    bool contains(VarId v) const;
    bool contains_if(const std::function<bool(VarId)>& pred) const;

    Poly operator-() const;
    friend Poly operator+(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a, const Poly& b);
    friend Poly operator*(const Poly& a, const Poly& b);
    Poly& operator+=(const Poly& b) { return *this = *this + b; }
    Poly& operator-=(const Poly& b) { return *this = *this - b; }
    Poly& operator*=(const Poly& b) { return *this = *this * b; }
    Poly scaled(const Rational& c) const;
    Poly times(const Monomial& m, const Rational& c) const;
    Poly pow(unsigned n) const;
    friend bool operator==(const Poly& a, const Poly& b);

    /// Exact quotient a / b, or nullopt when b does not divide a.
    static std::optional<Poly> divide(const Poly& a, const Poly& b);
    Poly divide_monomial(const Monomial& m) const;
    Monomial monomial_content() const;
    /// gcd of the coefficients' numerators over lcm of denominators (positive).
    Rational rational_content() const;
    /// Scales so that the leading coefficient is 1.
    Poly monic() const;

    Poly derivative(VarId v) const;
    /// Coefficients with respect to the given variables: (monomial in them, cofactor).
    std::vector<std::pair<Monomial, Poly>> collect(const std::function<bool(VarId)>& in_group) const;
    /// Coefficient list in a single variable, index = power.
    std::vector<Poly> coefficients_in(VarId v) const;

    double eval(const std::function<double(VarId)>& value) const;

    /// Square root when this is a perfect square with a positive leading coefficient.
    std::optional<Poly> sqrt() const;

    std::string str() const;

private:
    std::vector<Term> terms_;
};

/// Monic greatest common divisor over Q (gcd(0,0) = 0).
Poly gcd(const Poly& a, const Poly& b);

/// Univariate/multivariate pseudo-remainder of a by b with respect to v.
Poly pseudo_remainder(const Poly& a, const Poly& b, VarId v);

std::string rational_str(const Rational& q);

}  // namespace hamtrio::jet
