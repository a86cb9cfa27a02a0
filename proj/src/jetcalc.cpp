#include "hamtrio/jetcalc.hpp"

#include <algorithm>
#include <map>

#include "hamtrio/errors.hpp"

namespace hamtrio::jet {

namespace {

bool is_differential(VarId v) {
    const auto& i = Vars::info(v);
    return i.kind == VarKind::Jet || i.kind == VarKind::Covector;
}

void check_cap(const Expr& e, int raise, const JetContext& ctx) {
    int order = jet_order(e);
    if (order + raise > ctx.max_jet_order)
        throw JetOrderExceeded("order " + std::to_string(order + raise) + " exceeds cap " +
                               std::to_string(ctx.max_jet_order));
}

}  // namespace

int jet_order(const Expr& e) {
    int order = -1;
    for (VarId v : e.deep_variables())
        if (is_differential(v)) order = std::max(order, Vars::info(v).order);
    return order;
}

Poly total_derivative_poly(const Poly& p, const JetContext& ctx) {
    std::vector<Term> out;
    for (const auto& t : p.terms()) {
        for (std::size_t i = 0; i < t.mono.size(); ++i) {
            VarId v = t.mono.var(i);
            if (!is_differential(v)) continue;
            if (Vars::info(v).order + 1 > ctx.max_jet_order)
                throw JetOrderExceeded("D_x of " + Vars::name(v) + " exceeds cap " +
                                       std::to_string(ctx.max_jet_order));
            unsigned e = t.mono.exp(i);
            Monomial m = t.mono / Monomial::of(v) * Monomial::of(Vars::shifted(v, 1));
            out.push_back({std::move(m), t.coef * e});
        }
    }
    return Poly::from_terms(std::move(out));
}

Expr total_derivative(const Expr& e, const JetContext& ctx) {
    if (e.is_constant()) return Expr();
    if (!e.has_radicals()) {
        // fast path without the radical chain rule
        return apply_derivation(
            e, [&](const Poly& p) { return total_derivative_poly(p, ctx); }, [](VarId) { return Expr(); });
    }
    check_cap(e, 1, ctx);
    return apply_derivation(
        e, [&](const Poly& p) { return total_derivative_poly(p, ctx); },
        [&](VarId s) -> Expr {
            Expr dr = total_derivative(*Vars::info(s).radicand, ctx);
            if (dr.is_zero()) return Expr();
            return dr / (Expr(2) * Expr::var(s));
        });
}

Expr total_derivative(const Expr& e, int n, const JetContext& ctx) {
    Expr r = e;
    for (int i = 0; i < n && !r.is_zero(); ++i) r = total_derivative(r, ctx);
    return r;
}

VarId DependentVar::jet(int order) const {
    return covector == 0 ? Vars::jet(component, order) : Vars::covector(covector, component, order);
}

std::vector<DependentVar> dependent_variables(const Expr& e) {
    std::vector<DependentVar> out;
    for (VarId v : e.deep_variables()) {
        const auto& i = Vars::info(v);
        DependentVar d;
        if (i.kind == VarKind::Jet)
            d = DependentVar::field(i.component);
        else if (i.kind == VarKind::Covector)
            d = DependentVar::psi(i.covector, i.component);
        else
            continue;
        if (std::find(out.begin(), out.end(), d) == out.end()) out.push_back(d);
    }
    std::sort(out.begin(), out.end(), [](const DependentVar& a, const DependentVar& b) {
        return std::pair(a.covector, a.component) < std::pair(b.covector, b.component);
    });
    return out;
}

Expr euler(const Expr& e, DependentVar v, const JetContext& ctx) {
    int top = -1;
    for (VarId w : e.deep_variables()) {
        const auto& i = Vars::info(w);
        bool match = (v.covector == 0 && i.kind == VarKind::Jet && i.component == v.component) ||
                     (v.covector != 0 && i.kind == VarKind::Covector && i.covector == v.covector &&
                      i.component == v.component);
        if (match) top = std::max(top, i.order);
    }
    if (top < 0) return Expr();
    // Horner form: acc_k = d f/d v_(k) - D(acc_{k+1})
    Expr acc = e.partial(v.jet(top));
    for (int k = top - 1; k >= 0; --k) acc = e.partial(v.jet(k)) - total_derivative(acc, ctx);
    return acc;
}

std::vector<Expr> variational_gradient(const Expr& density, const JetContext& ctx) {
    std::vector<Expr> out;
    for (int i = 1; i <= ctx.m; ++i) out.push_back(euler(density, DependentVar::field(i), ctx));
    return out;
}

bool is_total_derivative(const Expr& e, const JetContext& ctx) {
    if (e.is_zero()) return true;
    auto deps = dependent_variables(e);
    if (deps.empty()) return false;  // a nonzero function of parameters only
    std::stable_partition(deps.begin(), deps.end(), [](const DependentVar& d) { return d.covector != 0; });
    // If e is linear in the jets of one covector, e = sum_n A_n psi_(n) is
    // congruent to (sum_n (-D)^n A_n) psi modulo total derivatives, so the
    // residuals of that covector alone decide exactness.
    for (int a = 1; a <= Vars::kMaxCovectors; ++a) {
        auto of_a = [a](VarId v) { return Vars::is_covector(v) && Vars::info(v).covector == a; };
        if (!e.num().contains_if(of_a) || e.den().contains_if(of_a) || e.has_radicals()) continue;
        bool linear = true;
        for (const auto& t : e.num().terms()) {
            unsigned deg = 0;
            for (std::size_t i = 0; i < t.mono.size(); ++i)
                if (of_a(t.mono.var(i))) deg += t.mono.exp(i);
            if (deg != 1) {
                linear = false;
                break;
            }
        }
        if (!linear) continue;
        for (const auto& d : deps)
            if (d.covector == a && !euler(e, d, ctx).is_zero()) return false;
        return true;
    }
    for (const auto& d : deps)
        if (!vanishes(euler(e, d, ctx))) return false;
    return true;
}

namespace {

// Twice the degree of a monomial, so that radicals of odd-degree radicands stay integral.
std::optional<int> doubled_weight(const Monomial& mono) {
    int w = 0;
    for (std::size_t i = 0; i < mono.size(); ++i) {
        const auto& info = Vars::info(mono.var(i));
        int wv = 0;
        if (info.kind == VarKind::Jet || info.kind == VarKind::Covector) {
            wv = 2 * info.order;
        } else if (info.kind == VarKind::Radical) {
            auto d = try_homogeneous_degree(*info.radicand);
            if (!d) return std::nullopt;
            wv = *d;  // half the radicand degree, doubled
        }
        w += wv * static_cast<int>(mono.exp(i));
    }
    return w;
}

std::optional<int> doubled_degree(const Poly& p) {
    std::optional<int> deg;
    for (const auto& t : p.terms()) {
        auto w = doubled_weight(t.mono);
        if (!w || (deg && *deg != *w)) return std::nullopt;
        deg = w;
    }
    return deg;
}

}  // namespace

std::optional<int> try_homogeneous_degree(const Expr& e) {
    if (e.is_zero()) return 0;
    auto n = doubled_degree(e.num());
    auto d = doubled_degree(e.den());
    if (!n || !d) return std::nullopt;
    int twice = *n - *d;
    if (twice % 2 != 0) return std::nullopt;
    return twice / 2;
}

int homogeneous_degree(const Expr& e) {
    auto d = try_homogeneous_degree(e);
    if (!d) throw NotHomogeneous(e.str());
    return *d;
}

std::map<int, Expr> homogeneous_components(const Expr& e) {
    std::map<int, Expr> out;
    if (e.is_zero()) return out;
    auto dd = doubled_degree(e.den());
    if (!dd) throw NotHomogeneous("denominator of " + e.str());
    std::map<int, std::vector<Term>> groups;
    for (const auto& t : e.num().terms()) {
        auto w = doubled_weight(t.mono);
        if (!w || (*w - *dd) % 2 != 0) throw NotHomogeneous("term of " + e.str());
        groups[(*w - *dd) / 2].push_back(t);
    }
    for (auto& [deg, terms] : groups) out.emplace(deg, Expr::fraction(Poly::from_terms(std::move(terms)), e.den()));
    return out;
}

double eval_numeric(const Expr& e, const Point& point) { return e.eval(point); }

}  // namespace hamtrio::jet
