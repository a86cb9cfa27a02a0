#include "hamtrio/poly.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>
#include <unordered_map>

#include "hamtrio/errors.hpp"

namespace hamtrio::jet {

// ---------------------------------------------------------------- Monomial

Monomial Monomial::of(VarId v, unsigned exp) {
    Monomial m;
    if (exp != 0) m.push(v, exp);
    return m;
}

void Monomial::push(VarId v, unsigned e) {
    if (e > kExpMask) throw Error("monomial exponent overflow");
    words_.push_back((static_cast<std::uint32_t>(v) << kExpBits) | e);
}

unsigned Monomial::degree(VarId v) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
        VarId w = var(i);
        if (w == v) return exp(i);
        if (w > v) break;
    }
    return 0;
}

unsigned Monomial::total_degree() const {
    unsigned d = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) d += exp(i);
    return d;
}

Monomial Monomial::operator*(const Monomial& o) const {
    Monomial r;
    std::size_t i = 0, j = 0;
    while (i < size() || j < o.size()) {
        if (j == o.size() || (i < size() && var(i) < o.var(j))) {
            r.words_.push_back(words_[i++]);
        } else if (i == size() || o.var(j) < var(i)) {
            r.words_.push_back(o.words_[j++]);
        } else {
            r.push(var(i), exp(i) + o.exp(j));
            ++i;
            ++j;
        }
    }
    return r;
}

bool Monomial::divides(const Monomial& o) const {
    std::size_t j = 0;
    for (std::size_t i = 0; i < size(); ++i) {
        while (j < o.size() && o.var(j) < var(i)) ++j;
        if (j == o.size() || o.var(j) != var(i) || o.exp(j) < exp(i)) return false;
    }
    return true;
}

Monomial Monomial::operator/(const Monomial& o) const {
    Monomial r;
    std::size_t j = 0;
    for (std::size_t i = 0; i < size(); ++i) {
        if (j < o.size() && o.var(j) == var(i)) {
            unsigned e = exp(i) - o.exp(j);
            if (e) r.push(var(i), e);
            ++j;
        } else {
            r.words_.push_back(words_[i]);
        }
    }
    return r;
}

Monomial Monomial::gcd(const Monomial& o) const {
    Monomial r;
    std::size_t i = 0, j = 0;
    while (i < size() && j < o.size()) {
        if (var(i) < o.var(j)) {
            ++i;
        } else if (o.var(j) < var(i)) {
            ++j;
        } else {
            r.push(var(i), std::min(exp(i), o.exp(j)));
            ++i;
            ++j;
        }
    }
    return r;
}

Monomial Monomial::without(VarId v) const {
    Monomial r;
    for (std::size_t i = 0; i < size(); ++i)
        if (var(i) != v) r.words_.push_back(words_[i]);
    return r;
}

Monomial Monomial::filter(const std::function<bool(VarId)>& keep) const {
    Monomial r;
    for (std::size_t i = 0; i < size(); ++i)
        if (keep(var(i))) r.words_.push_back(words_[i]);
    return r;
}

int compare(const Monomial& a, const Monomial& b) {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a.words_[i] == b.words_[i]) continue;
        VarId va = a.var(i), vb = b.var(i);
        if (va != vb) return va < vb ? 1 : -1;
        return a.exp(i) > b.exp(i) ? 1 : -1;
    }
    if (a.size() == b.size()) return 0;
    return a.size() > b.size() ? 1 : -1;
}

std::size_t Monomial::hash() const {
    std::size_t h = 1469598103934665603ull;
    for (auto w : words_) {
        h ^= w;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

struct MonoGreater {
    bool operator()(const Monomial& a, const Monomial& b) const { return compare(a, b) > 0; }
};

}  // namespace

// ---------------------------------------------------------------- Poly

Poly::Poly(long c) {
    if (c != 0) terms_.push_back({Monomial(), Rational(c)});
}

Poly::Poly(const Rational& c) {
    if (c != 0) terms_.push_back({Monomial(), c});
}

Poly Poly::var(VarId v, unsigned exp) { return term(Monomial::of(v, exp), 1); }

Poly Poly::term(Monomial m, Rational c) {
    Poly p;
    if (c != 0) p.terms_.push_back({std::move(m), std::move(c)});
    return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return compare(a.mono, b.mono) > 0; });
    Poly p;
    p.terms_.reserve(terms.size());
    for (auto& t : terms) {
        if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
            p.terms_.back().coef += t.coef;
            if (p.terms_.back().coef == 0) p.terms_.pop_back();
        } else if (t.coef != 0) {
            p.terms_.push_back(std::move(t));
        }
    }
    return p;
}

Poly Poly::from_sorted(std::vector<Term> terms) {
    Poly p;
    p.terms_ = std::move(terms);
    return p;
}

Rational Poly::constant_value() const {
    if (terms_.empty()) return 0;
    if (!is_constant()) throw Error("polynomial is not constant");
    return terms_[0].coef;
}

unsigned Poly::degree(VarId v) const {
    unsigned d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mono.degree(v));
    return d;
}

std::vector<VarId> Poly::variables() const {
    std::vector<VarId> vs;
    for (const auto& t : terms_)
        for (std::size_t i = 0; i < t.mono.size(); ++i) vs.push_back(t.mono.var(i));
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
}

bool Poly::contains(VarId v) const {
    for (const auto& t : terms_)
        if (t.mono.contains(v)) return true;
    return false;
}

bool Poly::contains_if(const std::function<bool(VarId)>& pred) const {
    for (const auto& t : terms_)
        for (std::size_t i = 0; i < t.mono.size(); ++i)
            if (pred(t.mono.var(i))) return true;
    return false;
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& t : r.terms_) t.coef = -t.coef;
    return r;
}

namespace {

Poly merge(const Poly& a, const Poly& b, bool subtract) {
    std::vector<Term> out;
    out.reserve(a.size() + b.size());
    const auto& x = a.terms();
    const auto& y = b.terms();
    std::size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
        int c = (i == x.size()) ? -1 : (j == y.size()) ? 1 : compare(x[i].mono, y[j].mono);
        if (c > 0) {
            out.push_back(x[i++]);
        } else if (c < 0) {
            out.push_back({y[j].mono, subtract ? Rational(-y[j].coef) : y[j].coef});
            ++j;
        } else {
            Rational s = subtract ? Rational(x[i].coef - y[j].coef) : Rational(x[i].coef + y[j].coef);
            if (s != 0) out.push_back({x[i].mono, std::move(s)});
            ++i;
            ++j;
        }
    }
    return Poly::from_sorted(std::move(out));
}

}  // namespace

Poly operator+(const Poly& a, const Poly& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    return merge(a, b, false);
}

Poly operator-(const Poly& a, const Poly& b) {
    if (b.is_zero()) return a;
    if (a.is_zero()) return -b;
    return merge(a, b, true);
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.is_constant()) return b.scaled(a.terms_[0].coef);
    if (b.is_constant()) return a.scaled(b.terms_[0].coef);
    if (a.size() == 1) return b.times(a.terms_[0].mono, a.terms_[0].coef);
    if (b.size() == 1) return a.times(b.terms_[0].mono, b.terms_[0].coef);
    std::unordered_map<Monomial, Rational, MonomialHash> acc;
    acc.reserve(a.size() * b.size());
    for (const auto& s : a.terms_)
        for (const auto& t : b.terms_) {
            auto [it, inserted] = acc.try_emplace(s.mono * t.mono);
            if (inserted)
                it->second = s.coef * t.coef;
            else
                it->second += s.coef * t.coef;
        }
    std::vector<Term> out;
    out.reserve(acc.size());
    for (auto& [m, c] : acc)
        if (c != 0) out.push_back({m, std::move(c)});
    return Poly::from_terms(std::move(out));
}

Poly Poly::scaled(const Rational& c) const {
    if (c == 0) return {};
    Poly r = *this;
    for (auto& t : r.terms_) t.coef *= c;
    return r;
}

Poly Poly::times(const Monomial& m, const Rational& c) const {
    if (c == 0) return {};
    Poly r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.mono * m, t.coef * c});
    return r;  // multiplication by a monomial preserves the order
}

Poly Poly::pow(unsigned n) const {
    Poly r(1), base = *this;
    while (n) {
        if (n & 1) r = r * base;
        n >>= 1;
        if (n) base = base * base;
    }
    return r;
}

bool operator==(const Poly& a, const Poly& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!(a.terms_[i].mono == b.terms_[i].mono) || a.terms_[i].coef != b.terms_[i].coef) return false;
    return true;
}

std::optional<Poly> Poly::divide(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
    if (a.is_zero()) return Poly();
    if (b.is_constant()) return a.scaled(1 / b.terms_[0].coef);
    const Term& lb = b.lead();
    if (b.size() == 1) {
        Poly q;
        q.terms_.reserve(a.size());
        for (const auto& t : a.terms_) {
            if (!lb.mono.divides(t.mono)) return std::nullopt;
            q.terms_.push_back({t.mono / lb.mono, t.coef / lb.coef});
        }
        return q;
    }
    // Cheap necessary conditions: degrees per variable.
    for (std::size_t i = 0; i < lb.mono.size(); ++i)
        if (a.degree(lb.mono.var(i)) < lb.mono.exp(i)) return std::nullopt;
    std::vector<Term> q;
    Poly r = a;
    while (!r.is_zero()) {
        const Term& lr = r.lead();
        if (!lb.mono.divides(lr.mono)) return std::nullopt;
        Monomial m = lr.mono / lb.mono;
        Rational c = lr.coef / lb.coef;
        r = r - b.times(m, c);
        q.push_back({std::move(m), std::move(c)});
    }
    Poly out;
    out.terms_ = std::move(q);
    return out;
}

Poly Poly::divide_monomial(const Monomial& m) const {
    if (m.is_one()) return *this;
    Poly r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.mono / m, t.coef});
    return r;
}

Monomial Poly::monomial_content() const {
    if (terms_.empty()) return {};
    Monomial g = terms_[0].mono;
    for (std::size_t i = 1; i < terms_.size() && !g.is_one(); ++i) g = g.gcd(terms_[i].mono);
    return g;
}

Rational Poly::rational_content() const {
    mpz_class num = 0, den = 1;
    for (const auto& t : terms_) {
        mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), t.coef.get_num_mpz_t());
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coef.get_den_mpz_t());
    }
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Poly Poly::monic() const {
    if (terms_.empty() || terms_[0].coef == 1) return *this;
    return scaled(1 / terms_[0].coef);
}

Poly Poly::derivative(VarId v) const {
    std::vector<Term> out;
    for (const auto& t : terms_) {
        unsigned e = t.mono.degree(v);
        if (e == 0) continue;
        Monomial m = t.mono.without(v) * Monomial::of(v, e - 1);
        out.push_back({std::move(m), t.coef * e});
    }
    return from_terms(std::move(out));
}

std::vector<std::pair<Monomial, Poly>> Poly::collect(const std::function<bool(VarId)>& in_group) const {
    std::map<Monomial, std::vector<Term>, MonoGreater> groups;
    for (const auto& t : terms_) {
        Monomial g = t.mono.filter(in_group);
        Monomial rest = t.mono.filter([&](VarId v) { return !in_group(v); });
        groups[g].push_back({std::move(rest), t.coef});
    }
    std::vector<std::pair<Monomial, Poly>> out;
    out.reserve(groups.size());
    for (auto& [m, ts] : groups) out.emplace_back(m, from_terms(std::move(ts)));
    return out;
}

std::vector<Poly> Poly::coefficients_in(VarId v) const {
    std::vector<std::vector<Term>> buckets(degree(v) + 1);
    for (const auto& t : terms_) buckets[t.mono.degree(v)].push_back({t.mono.without(v), t.coef});
    std::vector<Poly> out;
    out.reserve(buckets.size());
    for (auto& b : buckets) out.push_back(from_terms(std::move(b)));
    return out;
}

double Poly::eval(const std::function<double(VarId)>& value) const {
    std::unordered_map<VarId, double> cache;
    auto get = [&](VarId v) {
        auto it = cache.find(v);
        if (it != cache.end()) return it->second;
        double x = value(v);
        cache.emplace(v, x);
        return x;
    };
    double s = 0;
    for (const auto& t : terms_) {
        double x = t.coef.get_d();
        for (std::size_t i = 0; i < t.mono.size(); ++i) {
            double b = get(t.mono.var(i));
            for (unsigned e = t.mono.exp(i); e; --e) x *= b;
        }
        s += x;
    }
    return s;
}

std::optional<Poly> Poly::sqrt() const {
    if (terms_.empty()) return Poly();
    const Term& lt = lead();
    if (lt.coef <= 0) return std::nullopt;
    if (!mpz_perfect_square_p(lt.coef.get_num_mpz_t()) || !mpz_perfect_square_p(lt.coef.get_den_mpz_t()))
        return std::nullopt;
    Monomial root;
    for (std::size_t i = 0; i < lt.mono.size(); ++i) {
        if (lt.mono.exp(i) % 2) return std::nullopt;
        root = root * Monomial::of(lt.mono.var(i), lt.mono.exp(i) / 2);
    }
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), lt.coef.get_num_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), lt.coef.get_den_mpz_t());
    Rational rc(rn, rd);
    Poly s = term(root, rc);
    Term head = s.lead();
    Poly rem = *this - s * s;
    for (std::size_t guard = 0; !rem.is_zero(); ++guard) {
        if (guard > terms_.size() + 1) return std::nullopt;
        const Term& lr = rem.lead();
        if (!head.mono.divides(lr.mono)) return std::nullopt;
        Monomial m = lr.mono / head.mono;
        if (compare(m, s.terms_.back().mono) >= 0) return std::nullopt;
        Rational c = lr.coef / (2 * head.coef);
        Poly t = term(m, c);
        rem = rem - t * (s.scaled(2) + t);
        s.terms_.push_back({m, c});
    }
    return s;
}

std::string rational_str(const Rational& q) { return q.get_str(); }

std::string Poly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        Rational c = t.coef;
        bool neg = c < 0;
        if (neg) c = -c;
        if (first)
            os << (neg ? "-" : "");
        else
            os << (neg ? " - " : " + ");
        first = false;
        bool one = t.mono.is_one();
        if (c != 1 || one) {
            os << rational_str(c);
            if (!one) os << "*";
        }
        for (std::size_t i = 0; i < t.mono.size(); ++i) {
            if (i) os << "*";
            os << Vars::name(t.mono.var(i));
            if (t.mono.exp(i) > 1) os << "^" << t.mono.exp(i);
        }
    }
    return os.str();
}

// ---------------------------------------------------------------- gcd

namespace {

constexpr std::uint64_t kPrimes[] = {2147483647ull, 2147483629ull, 2147483587ull, 2147483579ull};

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) { return (a * b) % p; }

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1;
    b %= p;
    while (e) {
        if (e & 1) r = mulmod(r, b, p);
        b = mulmod(b, b, p);
        e >>= 1;
    }
    return r;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t p) { return powmod(a, p - 2, p); }

// Rational -> Z/p, or nullopt when the denominator vanishes.
std::optional<std::uint64_t> to_mod(const Rational& q, std::uint64_t p) {
    std::uint64_t d = mpz_fdiv_ui(q.get_den_mpz_t(), p);
    if (d == 0) return std::nullopt;
    std::uint64_t n = mpz_fdiv_ui(q.get_num_mpz_t(), p);
    return mulmod(n, invmod(d, p), p);
}

using UPoly = std::vector<std::uint64_t>;  // coefficient index = power

void trim(UPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

std::size_t umod_gcd_degree(UPoly a, UPoly b, std::uint64_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        // a <- a mod b
        std::uint64_t inv = invmod(b.back(), p);
        while (a.size() >= b.size()) {
            std::uint64_t f = mulmod(a.back(), inv, p);
            std::size_t shift = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i)
                a[shift + i] = (a[shift + i] + p - mulmod(f, b[i], p)) % p;
            trim(a);
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    return a.empty() ? 0 : a.size() - 1;
}

std::mt19937_64& rng() {
    thread_local std::mt19937_64 g(0x5eed1234abcdull);
    return g;
}

// Image of a in Z/p[x] after evaluating every other variable; nullopt on bad reduction.
std::optional<UPoly> image(const Poly& a, VarId x, const std::unordered_map<VarId, std::uint64_t>& vals,
                           std::uint64_t p) {
    UPoly out(a.degree(x) + 1, 0);
    for (const auto& t : a.terms()) {
        auto c = to_mod(t.coef, p);
        if (!c) return std::nullopt;
        std::uint64_t v = *c;
        unsigned dx = 0;
        for (std::size_t i = 0; i < t.mono.size(); ++i) {
            VarId w = t.mono.var(i);
            if (w == x)
                dx = t.mono.exp(i);
            else
                v = mulmod(v, powmod(vals.at(w), t.mono.exp(i), p), p);
        }
        out[dx] = (out[dx] + v) % p;
    }
    return out;
}

// True when a and b are certainly coprime (no common non-constant factor).
bool certainly_coprime(const Poly& a, const Poly& b, const std::vector<VarId>& vars) {
    for (VarId x : vars) {
        bool decided = false;
        for (int attempt = 0; attempt < 3 && !decided; ++attempt) {
            std::uint64_t p = kPrimes[attempt % 4];
            std::unordered_map<VarId, std::uint64_t> vals;
            for (VarId v : vars)
                if (v != x) vals[v] = 1 + rng()() % (p - 1);
            auto ia = image(a, x, vals, p);
            auto ib = image(b, x, vals, p);
            if (!ia || !ib) continue;
            if (ia->back() == 0 || ib->back() == 0) continue;  // leading coefficient vanished
            if (umod_gcd_degree(*ia, *ib, p) != 0) return false;
            decided = true;
        }
        if (!decided) return false;
    }
    return true;
}

Poly univariate_gcd(Poly a, Poly b, VarId x) {
    if (a.degree(x) < b.degree(x)) std::swap(a, b);
    while (!b.is_zero()) {
        // a mod b over Q
        Poly r = a;
        const Term lb = b.lead();
        unsigned db = b.degree(x);
        while (!r.is_zero() && r.degree(x) >= db) {
            const Term& lr = r.lead();
            Monomial m = lr.mono / lb.mono;
            r = r - b.times(m, lr.coef / lb.coef);
        }
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

Poly gcd_impl(const Poly& a, const Poly& b);

Poly content_in(const Poly& a, VarId x) {
    auto cs = a.coefficients_in(x);
    std::sort(cs.begin(), cs.end(), [](const Poly& p, const Poly& q) { return p.size() < q.size(); });
    Poly g;
    for (const auto& c : cs) {
        if (c.is_zero()) continue;
        g = g.is_zero() ? c.monic() : gcd_impl(g, c);
        if (g.is_constant()) return Poly(1);
    }
    return g;
}

Poly primitive_in(const Poly& a, VarId x) {
    Poly c = content_in(a, x);
    if (c.is_constant()) return a.monic();
    return Poly::divide(a, c).value().monic();
}

Poly prs_gcd(const Poly& a, const Poly& b, const std::vector<VarId>& vars) {
    if (vars.size() == 1) return univariate_gcd(a, b, vars[0]);
    VarId x = vars[0];
    unsigned best = ~0u;
    for (VarId v : vars) {
        unsigned d = std::max(a.degree(v), b.degree(v));
        if (d < best) {
            best = d;
            x = v;
        }
    }
    Poly ca = content_in(a, x), cb = content_in(b, x);
    Poly c = gcd_impl(ca, cb);
    Poly pa = ca.is_constant() ? a : Poly::divide(a, ca).value();
    Poly pb = cb.is_constant() ? b : Poly::divide(b, cb).value();
    if (pa.degree(x) < pb.degree(x)) std::swap(pa, pb);
    Poly g;
    while (true) {
        if (pb.degree(x) == 0) {
            g = Poly(1);
            break;
        }
        Poly r = pseudo_remainder(pa, pb, x);
        if (r.is_zero()) {
            g = pb;
            break;
        }
        pa = std::move(pb);
        pb = primitive_in(r, x);
    }
    if (!g.is_constant()) g = primitive_in(g, x);
    return (g * c).monic();
}

// gcd of a and b, both free of monomial content and non-constant.
Poly gcd_core(const Poly& a, const Poly& b) {
    if (a.is_monomial() || b.is_monomial()) return Poly(1);
    auto va = a.variables(), vb = b.variables();
    std::vector<VarId> shared;
    std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(shared));
    if (shared.empty()) return Poly(1);
    if (shared.size() != va.size() || shared.size() != vb.size()) {
        auto outside = [&](VarId v) { return !std::binary_search(shared.begin(), shared.end(), v); };
        std::vector<Poly> parts;
        for (auto& [m, c] : a.collect(outside)) parts.push_back(c);
        for (auto& [m, c] : b.collect(outside)) parts.push_back(c);
        std::sort(parts.begin(), parts.end(), [](const Poly& p, const Poly& q) { return p.size() < q.size(); });
        Poly g = parts[0].monic();
        for (std::size_t i = 1; i < parts.size() && !g.is_constant(); ++i) g = gcd_impl(g, parts[i]);
        return g;
    }
    if (certainly_coprime(a, b, shared)) return Poly(1);
    const Poly& small = a.size() <= b.size() ? a : b;
    const Poly& large = a.size() <= b.size() ? b : a;
    if (Poly::divide(large, small)) return small.monic();
    return prs_gcd(a, b, shared);
}

Poly gcd_impl(const Poly& a, const Poly& b) {
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    if (a.is_constant() || b.is_constant()) return Poly(1);
    Monomial ma = a.monomial_content(), mb = b.monomial_content();
    Monomial m = ma.gcd(mb);
    Poly pa = a.divide_monomial(ma), pb = b.divide_monomial(mb);
    Poly g = (pa.is_constant() || pb.is_constant()) ? Poly(1) : gcd_core(pa, pb);
    return g.times(m, 1).monic();
}

}  // namespace

Poly pseudo_remainder(const Poly& a, const Poly& b, VarId x) {
    unsigned db = b.degree(x);
    auto bc = b.coefficients_in(x);
    const Poly& lcb = bc[db];
    Poly r = a;
    while (!r.is_zero()) {
        unsigned dr = r.degree(x);
        if (dr < db) break;
        Poly lcr = r.coefficients_in(x)[dr];
        r = r * lcb - (lcr * b).times(Monomial::of(x, dr - db), 1);
    }
    return r;
}

Poly gcd(const Poly& a, const Poly& b) { return gcd_impl(a, b); }

}  // namespace hamtrio::jet
