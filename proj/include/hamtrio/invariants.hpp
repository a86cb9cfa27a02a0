#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hamtrio/geometry.hpp"

namespace hamtrio::invariants {

using geometry::Metric;
using jet::Expr;

/// Sampling box for the field values, one [lo, hi] interval per component.
struct Domain {
    std::vector<std::pair<double, double>> box{{1.0, 2.0}, {2.0, 3.0}};
    std::vector<double> centre() const;
};

/// Canonical coordinates lambda^i(u) of a two-component pencil.
struct CanonicalChart {
    std::vector<Expr> coords;
    std::optional<std::vector<Expr>> inverse;  // u^a as functions of the coordinates (written in u1, u2)
    std::vector<double> base;
    std::vector<int> labels;  // labels[i] = position of coords[i] in the base-point ordering
};

/// Roots of det(g2 - lambda g1), ordered by decreasing value at the base point.
/// Throws SemisimplicityFailure when they coincide identically or at the base.
CanonicalChart canonical_coordinates(const Metric& g1, const Metric& g2, const std::vector<double>& base);

/// Reorders the chart so that its coordinates equal `expected` (in some order);
/// throws SemisimplicityFailure if they are not the same set of functions.
CanonicalChart relabel(const CanonicalChart& chart, const std::vector<Expr>& expected);

struct Sample {
    std::vector<double> u;
    std::vector<double> lambda;
    std::vector<double> s;
};

struct CentralInvariants {
    std::vector<Expr> in_fields;                  // s_i as functions of u (exact)
    std::optional<std::vector<Expr>> canonical;   // s_i as functions of lambda (u1, u2 read as lambda^1, lambda^2)
    std::vector<Sample> samples;
    bool single_variable = false;                 // each s_i depends on lambda^i only
    unsigned seed = 0;
};

/// Central invariants of the pencil side2 - lambda side1 (side 1 carries g1).
/// When the chart has an inverse the pencil is also transformed to canonical
/// coordinates with point_transform and the result cross-checked.
CentralInvariants central_invariants(const op::Pencil& pencil, const CanonicalChart& chart, int samples,
                                     unsigned seed, const Domain& domain = {});

/// First-order (eps^0) metrics of the two sides of a pencil: {g1, g2}.
std::pair<Metric, Metric> pencil_metrics(const op::Pencil& pencil);

enum class Triviality { Trivial, Nontrivial };

struct TrivialityVerdict {
    Triviality verdict = Triviality::Nontrivial;
    bool numeric_only = false;
    std::string warning;
};

TrivialityVerdict triviality_verdict(const CentralInvariants& s);

std::string to_string(Triviality t);

}  // namespace hamtrio::invariants
