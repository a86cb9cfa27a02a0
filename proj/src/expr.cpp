#include "hamtrio/expr.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <set>

#include "hamtrio/errors.hpp"

namespace hamtrio::jet {

namespace {

const std::shared_ptr<const Expr>& radicand_of(VarId v) { return Vars::info(v).radicand; }

}  // namespace

Expr::Expr() : Expr(Poly()) {}

Expr::Expr(long c) : Expr(Poly(c)) {}

Expr::Expr(const Rational& c) : Expr(Poly(c)) {}

Expr::Expr(Poly p) : rep_(std::make_shared<const Rep>(Rep{std::move(p), Poly(1)})) {}

Expr Expr::make_reduced(Poly num, Poly den) {
    if (num.is_zero()) return Expr();
    if (den.is_constant()) {
        Rational c = den.constant_value();
        if (c != 1) num = num.scaled(1 / c);
        return Expr(std::move(num));
    }
    const Rational lc = den.lead().coef;
    if (lc != 1) {
        num = num.scaled(1 / lc);
        den = den.scaled(1 / lc);
    }
    return Expr(std::make_shared<const Rep>(Rep{std::move(num), std::move(den)}));
}

Expr Expr::fraction(Poly num, Poly den) {
    if (den.is_zero()) throw DivisionByZero("zero denominator");
    if (num.is_zero()) return Expr();
    if (den.is_constant()) return make_reduced(std::move(num), std::move(den));
    Poly g = gcd(num, den);
    if (!g.is_constant()) {
        num = Poly::divide(num, g).value();
        den = Poly::divide(den, g).value();
    }
    return make_reduced(std::move(num), std::move(den));
}

Expr Expr::sqrt(const Expr& radicand) {
    if (radicand.is_zero()) return Expr();
    if (radicand.is_constant()) {
        Rational c = radicand.constant_value();
        if (c > 0 && mpz_perfect_square_p(c.get_num_mpz_t()) && mpz_perfect_square_p(c.get_den_mpz_t())) {
            mpz_class n, d;
            mpz_sqrt(n.get_mpz_t(), c.get_num_mpz_t());
            mpz_sqrt(d.get_mpz_t(), c.get_den_mpz_t());
            return Expr(Rational(n, d));
        }
    }
    return var(Vars::radical(radicand));
}

Rational Expr::constant_value() const {
    if (!is_constant()) throw Error("expression is not constant: " + str());
    return num().constant_value() / den().constant_value();
}

bool Expr::has_radicals() const {
    return depends_on_if([](VarId v) { return Vars::is_radical(v); });
}

bool Expr::depends_on_if(const std::function<bool(VarId)>& pred) const {
    return num().contains_if(pred) || den().contains_if(pred);
}

std::vector<VarId> Expr::variables() const {
    auto a = num().variables(), b = den().variables();
    std::vector<VarId> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<VarId> Expr::deep_variables() const {
    std::set<VarId> seen;
    std::vector<VarId> stack = variables();
    while (!stack.empty()) {
        VarId v = stack.back();
        stack.pop_back();
        if (!seen.insert(v).second) continue;
        if (Vars::is_radical(v))
            for (VarId w : radicand_of(v)->variables()) stack.push_back(w);
    }
    return {seen.begin(), seen.end()};
}

Expr Expr::operator-() const {
    if (is_zero()) return *this;
    return Expr(std::make_shared<const Rep>(Rep{-num(), den()}));
}

Expr operator+(const Expr& a, const Expr& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const Poly& p = a.num();
    const Poly& q = a.den();
    const Poly& r = b.num();
    const Poly& s = b.den();
    if (q.is_constant() && s.is_constant()) return Expr(p + r);
    if (q == s) return Expr::fraction(p + r, q);
    if (q.is_constant()) return Expr::make_reduced(p * s + r, s);
    if (s.is_constant()) return Expr::make_reduced(p + r * q, q);
    Poly g = gcd(q, s);
    if (g.is_constant()) return Expr::make_reduced(p * s + r * q, q * s);
    Poly q1 = Poly::divide(q, g).value();
    Poly s1 = Poly::divide(s, g).value();
    Poly n = p * s1 + r * q1;
    Poly d = q1 * s;
    Poly g2 = gcd(n, g);
    if (!g2.is_constant()) {
        n = Poly::divide(n, g2).value();
        d = Poly::divide(d, g2).value();
    }
    return Expr::make_reduced(std::move(n), std::move(d));
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
    if (a.is_zero() || b.is_zero()) return Expr();
    if (a.is_polynomial() && b.is_polynomial()) return Expr(a.num() * b.num());
    Poly p = a.num(), q = a.den(), r = b.num(), s = b.den();
    if (!s.is_constant()) {
        Poly g = gcd(p, s);
        if (!g.is_constant()) {
            p = Poly::divide(p, g).value();
            s = Poly::divide(s, g).value();
        }
    }
    if (!q.is_constant()) {
        Poly g = gcd(r, q);
        if (!g.is_constant()) {
            r = Poly::divide(r, g).value();
            q = Poly::divide(q, g).value();
        }
    }
    return Expr::make_reduced(p * r, q * s);
}

Expr operator/(const Expr& a, const Expr& b) {
    if (b.is_zero()) throw DivisionByZero("division by zero expression");
    Expr inv = Expr::make_reduced(b.den(), b.num());
    return a * inv;
}

Expr Expr::pow(int n) const {
    if (n == 0) return Expr(1);
    if (n < 0) return Expr(1) / pow(-n);
    return make_reduced(num().pow(n), den().pow(n));
}

bool operator==(const Expr& a, const Expr& b) {
    if (a.rep_ == b.rep_) return true;
    return a.num() == b.num() && a.den() == b.den();
}

namespace {

// Derivation applied to num/den, radical atoms held fixed.
Expr derive_fraction(const Expr& e, const std::function<Poly(const Poly&)>& on_poly) {
    const Poly& n = e.num();
    const Poly& q = e.den();
    Poly dn = on_poly(n);
    if (q.is_constant()) return Expr::fraction(std::move(dn), q);
    Poly dq = on_poly(q);
    if (dq.is_zero()) return Expr::fraction(std::move(dn), q);
    Poly h = gcd(q, dq);
    Poly qh = h.is_constant() ? q.scaled(1 / h.constant_value()) : Poly::divide(q, h).value();
    Poly dqh = h.is_constant() ? dq.scaled(1 / h.constant_value()) : Poly::divide(dq, h).value();
    Poly num = dn * qh - n * dqh;
    Poly den = q * qh;
    if (!h.is_constant()) {
        Poly g = gcd(num, h);
        if (!g.is_constant()) {
            num = Poly::divide(num, g).value();
            den = Poly::divide(den, g).value();
        }
    }
    return Expr::fraction(std::move(num), std::move(den));
}

}  // namespace

Expr apply_derivation(const Expr& e, const std::function<Poly(const Poly&)>& on_poly,
                      const std::function<Expr(VarId)>& on_radical) {
    Expr base = derive_fraction(e, on_poly);
    std::vector<VarId> rads;
    for (VarId v : e.variables())
        if (Vars::is_radical(v)) rads.push_back(v);
    if (rads.empty()) return base;
    std::vector<Expr> parts{base};
    for (VarId s : rads) {
        Expr ds = on_radical(s);
        if (ds.is_zero()) continue;
        parts.push_back(e.explicit_partial(s) * ds);
    }
    return sum(parts);
}

Expr Expr::explicit_partial(VarId v) const {
    if (!depends_on(v)) return Expr();
    return derive_fraction(*this, [v](const Poly& p) { return p.derivative(v); });
}

Expr Expr::partial(VarId v) const {
    return apply_derivation(
        *this, [v](const Poly& p) { return p.derivative(v); },
        [v](VarId s) -> Expr {
            Expr dr = radicand_of(s)->partial(v);
            if (dr.is_zero()) return Expr();
            return dr / (Expr(2) * Expr::var(s));
        });
}

Expr sum(const std::vector<Expr>& terms) {
    // bucket numerators by identical denominators
    std::vector<std::pair<Poly, Poly>> buckets;  // (den, num)
    for (const auto& t : terms) {
        if (t.is_zero()) continue;
        bool placed = false;
        for (auto& [d, n] : buckets)
            if (d == t.den()) {
                n += t.num();
                placed = true;
                break;
            }
        if (!placed) buckets.emplace_back(t.den(), t.num());
    }
    Expr out;
    for (auto& [d, n] : buckets) out += Expr::fraction(std::move(n), std::move(d));
    return out;
}

Expr Expr::substitute(const Substitution& subs) const {
    if (subs.empty()) return *this;
    Substitution full = subs;
    bool touched = false;
    for (VarId v : variables()) {
        if (subs.count(v)) touched = true;
        if (Vars::is_radical(v) && !subs.count(v)) {
            const Expr& r = *radicand_of(v);
            bool affected = false;
            for (VarId w : r.deep_variables())
                if (subs.count(w)) affected = true;
            if (affected) {
                full[v] = Expr::sqrt(r.substitute(subs));
                touched = true;
            }
        }
    }
    if (!touched) return *this;
    auto in_group = [&](VarId v) { return full.count(v) != 0; };
    std::unordered_map<VarId, std::vector<Expr>> powers;
    auto power = [&](VarId v, unsigned e) -> const Expr& {
        auto& ps = powers[v];
        if (ps.empty()) ps.push_back(Expr(1));
        while (ps.size() <= e) ps.push_back(ps.back() * full.at(v));
        return ps[e];
    };
    auto eval_poly = [&](const Poly& p) {
        std::vector<Expr> parts;
        for (auto& [m, cof] : p.collect(in_group)) {
            Expr val(1);
            for (std::size_t i = 0; i < m.size(); ++i) val = val * power(m.var(i), m.exp(i));
            // cof has no substituted variables: multiply the numerator directly
            parts.push_back(Expr::fraction(cof * val.num(), val.den()));
        }
        return sum(parts);
    };
    Expr n = eval_poly(num());
    if (den().is_constant()) return n / Expr(den());
    return n / eval_poly(den());
}

Expr Expr::coefficient(VarId v, unsigned k) const {
    if (den().contains(v)) throw Error("coefficient extraction: variable occurs in a denominator");
    auto cs = num().coefficients_in(v);
    if (k >= cs.size()) return Expr();
    return fraction(cs[k], den());
}

double Expr::eval(const std::function<double(VarId)>& value) const {
    std::function<double(VarId)> lookup = [&](VarId v) -> double {
        if (Vars::is_radical(v)) {
            double r = radicand_of(v)->eval(value);
            if (r < 0) throw NegativeRadicand("sqrt of " + std::to_string(r) + " in " + Vars::name(v));
            return std::sqrt(r);
        }
        return value(v);
    };
    double d = den().eval(lookup);
    if (d == 0.0) throw PoleAtPoint("denominator vanishes in " + str());
    return num().eval(lookup) / d;
}

double Expr::eval(const Point& point) const {
    return eval([&](VarId v) -> double {
        auto it = point.find(v);
        if (it == point.end()) throw Error("no value assigned to " + Vars::name(v));
        return it->second;
    });
}

std::string Expr::str() const {
    if (den().is_constant()) return num().str();
    std::string n = num().str();
    if (num().size() > 1) n = "(" + n + ")";
    std::string d = den().str();
    if (den().size() > 1 || den().lead().mono.size() > 1) d = "(" + d + ")";
    return n + "/" + d;
}

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << e.str(); }

bool is_identically_zero(const Expr& e, int samples, double tol) {
    if (e.is_zero()) return true;
    if (!e.has_radicals()) return false;
    std::vector<VarId> vars;
    for (VarId v : e.num().variables())
        if (!Vars::is_radical(v)) vars.push_back(v);
    for (VarId v : e.deep_variables())
        if (!Vars::is_radical(v)) vars.push_back(v);
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    std::mt19937_64 gen(0x9e3779b97f4a7c15ull);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    int accepted = 0;
    for (int attempt = 0; attempt < 5000 && accepted < samples; ++attempt) {
        Point p;
        for (VarId v : vars) p[v] = dist(gen);
        std::unordered_map<VarId, double> cache;
        std::function<double(VarId)> value;
        value = [&](VarId v) -> double {
            auto it = cache.find(v);
            if (it != cache.end()) return it->second;
            double x;
            if (Vars::is_radical(v)) {
                double r = Vars::info(v).radicand->eval(value);
                if (r < 0) throw NegativeRadicand("sample rejected");
                x = std::sqrt(r);
            } else {
                x = p.at(v);
            }
            cache.emplace(v, x);
            return x;
        };
        double total = 0, scale = 0;
        try {
            if (std::abs(e.den().eval(value)) < 1e-8) continue;
            for (const auto& t : e.num().terms()) {
                double x = t.coef.get_d();
                for (std::size_t i = 0; i < t.mono.size(); ++i) x *= std::pow(value(t.mono.var(i)), t.mono.exp(i));
                total += x;
                scale += std::abs(x);
            }
        } catch (const NegativeRadicand&) {
            continue;
        } catch (const PoleAtPoint&) {
            continue;
        }
        if (std::abs(total) > tol * std::max(scale, 1e-300)) return false;
        ++accepted;
    }
    if (accepted < samples) throw Error("zero test: not enough admissible sample points for " + e.str());
    return true;
}

std::optional<Expr> exact_sqrt(const Expr& e) {
    auto n = e.num().sqrt();
    if (!n) return std::nullopt;
    auto d = e.den().sqrt();
    if (!d) return std::nullopt;
    return Expr::fraction(*n, *d);
}

}  // namespace hamtrio::jet
