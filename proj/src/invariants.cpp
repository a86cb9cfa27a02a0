#include "hamtrio/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hamtrio/errors.hpp"

namespace hamtrio::invariants {

using jet::JetContext;
using jet::vanishes;
using jet::Vars;
using Matrix = geometry::Matrix;

namespace {

const JetContext kCtx{2, 12};

jet::Point point_of(const std::vector<double>& u) {
    jet::Point p;
    for (std::size_t i = 0; i < u.size(); ++i) p[Vars::jet(static_cast<int>(i) + 1)] = u[i];
    return p;
}

Matrix congruence(const Matrix& j, const Matrix& a) {
    const std::size_t m = j.size();
    Matrix out(m, std::vector<Expr>(m));
    for (std::size_t p = 0; p < m; ++p)
        for (std::size_t q = 0; q < m; ++q) {
            std::vector<Expr> parts;
            for (std::size_t a1 = 0; a1 < m; ++a1)
                for (std::size_t b1 = 0; b1 < m; ++b1)
                    if (!a[a1][b1].is_zero()) parts.push_back(j[p][a1] * a[a1][b1] * j[q][b1]);
            out[p][q] = jet::sum(parts);
        }
    return out;
}

// s_i from the graded coefficients expressed in canonical coordinates.
std::vector<Expr> formula(const Matrix& f, const Matrix& a2_20, const Matrix& a1_20, const Matrix& a2_10,
                          const Matrix& a1_10, const std::vector<Expr>& r) {
    const std::size_t m = r.size();
    std::vector<Expr> s(m);
    for (std::size_t i = 0; i < m; ++i) {
        Expr acc = a2_20[i][i] - r[i] * a1_20[i][i];
        for (std::size_t k = 0; k < m; ++k) {
            if (k == i) continue;
            Expr num = a2_10[k][i] - r[i] * a1_10[k][i];
            if (num.is_zero()) continue;
            acc += num * num / (f[k][k] * (r[k] - r[i]));
        }
        s[i] = acc / (f[i][i] * f[i][i]);
    }
    return s;
}

Matrix zero_matrix(int m) { return Matrix(m, std::vector<Expr>(m)); }

}  // namespace

std::vector<double> Domain::centre() const {
    std::vector<double> c;
    for (const auto& [lo, hi] : box) c.push_back((lo + hi) / 2);
    return c;
}

std::pair<Metric, Metric> pencil_metrics(const op::Pencil& pencil) {
    auto gr = op::extract_graded(pencil);
    return {Metric{gr.at(1, 0, 0)}, Metric{gr.at(2, 0, 0)}};
}

CanonicalChart canonical_coordinates(const Metric& g1, const Metric& g2, const std::vector<double>& base) {
    if (g1.size() != 2 || g2.size() != 2) throw DimensionMismatch("canonical coordinates are implemented for m = 2");
    const auto& a = g2.g;
    const auto& b = g1.g;
    Expr det_b = b[0][0] * b[1][1] - b[0][1] * b[1][0];
    Expr det_a = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if (vanishes(det_b)) throw DegenerateMetric("g1 is degenerate");
    Expr beta = a[0][0] * b[1][1] + a[1][1] * b[0][0] - a[0][1] * b[1][0] - a[1][0] * b[0][1];
    Expr disc = beta * beta - Expr(4) * det_a * det_b;
    if (vanishes(disc)) throw SemisimplicityFailure("the affinor has a double eigenvalue identically");
    auto root = jet::exact_sqrt(disc);
    Expr sq = root ? *root : Expr::sqrt(disc);
    std::vector<Expr> coords{(beta + sq) / (Expr(2) * det_b), (beta - sq) / (Expr(2) * det_b)};
    auto p = point_of(base);
    double v0 = coords[0].eval(p), v1 = coords[1].eval(p);
    if (std::abs(v0 - v1) <= 1e-12 * std::max(1.0, std::abs(v0)))
        throw SemisimplicityFailure("eigenvalues coincide at the base point");
    CanonicalChart chart;
    chart.base = base;
    if (v0 < v1) std::swap(coords[0], coords[1]);
    chart.coords = coords;
    chart.labels = {0, 1};
    return chart;
}

CanonicalChart relabel(const CanonicalChart& chart, const std::vector<Expr>& expected) {
    const std::size_t m = chart.coords.size();
    if (expected.size() != m) throw DimensionMismatch("relabel: wrong number of coordinates");
    CanonicalChart out = chart;
    std::vector<bool> used(m, false);
    for (std::size_t i = 0; i < m; ++i) {
        bool found = false;
        for (std::size_t k = 0; k < m && !found; ++k)
            if (!used[k] && vanishes(chart.coords[k] - expected[i])) {
                out.coords[i] = chart.coords[k];
                out.labels[i] = chart.labels[k];
                used[k] = found = true;
            }
        if (!found) throw SemisimplicityFailure("coordinate " + expected[i].str() + " is not an eigenvalue of the affinor");
    }
    return out;
}

CentralInvariants central_invariants(const op::Pencil& pencil, const CanonicalChart& chart, int samples,
                                     unsigned seed, const Domain& domain) {
    const int m = pencil.side1.size();
    if (m != static_cast<int>(chart.coords.size())) throw DimensionMismatch("chart and pencil sizes differ");
    auto gr = op::extract_graded(pencil);
    auto at = [&](int side, int k, int l) {
        auto a = gr.at(side, k, l);
        return a.empty() ? zero_matrix(m) : a;
    };
    // Top coefficients transform as contravariant tensors under a change of coordinates.
    Matrix j = op::jacobian(chart.coords, m);
    Matrix f = congruence(j, at(1, 0, 0));
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k)
            if (i != k && !vanishes(f[i][k]))
                throw SemisimplicityFailure("g1 is not diagonal in the given coordinates");
    CentralInvariants out;
    out.seed = seed;
    out.in_fields = formula(f, congruence(j, at(2, 2, 0)), congruence(j, at(1, 2, 0)), congruence(j, at(2, 1, 0)),
                            congruence(j, at(1, 1, 0)), chart.coords);

    if (chart.inverse) {
        op::Pencil t{op::point_transform(pencil.side2, chart.coords, *chart.inverse, kCtx),
                     op::point_transform(pencil.side1, chart.coords, *chart.inverse, kCtx)};
        auto gt = op::extract_graded(t);
        auto at_t = [&](int side, int k, int l) {
            auto a = gt.at(side, k, l);
            return a.empty() ? zero_matrix(m) : a;
        };
        std::vector<Expr> r;
        for (int i = 0; i < m; ++i) r.push_back(Expr::u(i + 1));
        out.canonical = formula(at_t(1, 0, 0), at_t(2, 2, 0), at_t(1, 2, 0), at_t(2, 1, 0), at_t(1, 1, 0), r);
    }

    // each s_i depends on lambda^i alone: ds_i ^ dlambda^i = 0
    out.single_variable = true;
    if (m == 2)
        for (int i = 0; i < m; ++i) {
            const Expr& s = out.in_fields[i];
            const Expr& l = chart.coords[i];
            Expr w = s.partial(Vars::jet(1)) * l.partial(Vars::jet(2)) - s.partial(Vars::jet(2)) * l.partial(Vars::jet(1));
            if (!vanishes(w)) out.single_variable = false;
        }

    std::mt19937_64 rng(seed);
    int attempts = 0;
    while (static_cast<int>(out.samples.size()) < samples) {
        if (++attempts > 50 * std::max(samples, 1)) throw PoleAtPoint("no admissible sample point in the domain");
        Sample smp;
        for (int a = 0; a < m; ++a) {
            auto [lo, hi] = domain.box.at(a);
            smp.u.push_back(std::uniform_real_distribution<double>(lo, hi)(rng));
        }
        auto p = point_of(smp.u);
        try {
            for (int i = 0; i < m; ++i) {
                smp.lambda.push_back(chart.coords[i].eval(p));
                smp.s.push_back(out.in_fields[i].eval(p));
            }
        } catch (const PoleAtPoint&) {
            continue;
        } catch (const NegativeRadicand&) {
            continue;
        }
        out.samples.push_back(std::move(smp));
    }
    return out;
}

TrivialityVerdict triviality_verdict(const CentralInvariants& s) {
    TrivialityVerdict v;
    bool exact = true;
    for (const auto& e : s.in_fields)
        if (e.has_radicals()) exact = false;
    if (exact) {
        bool all_zero = std::all_of(s.in_fields.begin(), s.in_fields.end(), [](const Expr& e) { return e.is_zero(); });
        v.verdict = all_zero ? Triviality::Trivial : Triviality::Nontrivial;
        return v;
    }
    v.numeric_only = true;
    bool all_small = true;
    for (const auto& smp : s.samples)
        for (double x : smp.s)
            if (std::abs(x) > 1e-9) all_small = false;
    v.verdict = all_small ? Triviality::Trivial : Triviality::Nontrivial;
    if (all_small) v.warning = "central invariants vanish numerically at the samples only; this is not a proof";
    return v;
}

std::string to_string(Triviality t) { return t == Triviality::Trivial ? "trivial" : "nontrivial"; }

}  // namespace hamtrio::invariants
