#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hamtrio/geometry.hpp"

namespace hamtrio::doc {

using geometry::Metric;
using jet::Expr;
using op::MatrixDiffOp;

struct TrioDef {
    std::string p1, q1, r;
};

/// Printed data a definition file can carry for verification.
struct Expectation {
    enum class Kind { Flow, Invariants, Match };
    Kind kind = Kind::Flow;
    std::string subject;                 // trio name (flow, invariants) or first operator (match)
    std::string other;                   // casimir name (flow) or second operator (match)
    std::vector<Expr> values;            // flow components / invariants in lambda1, lambda2
    std::string family;                  // match
    std::vector<std::map<std::string, Expr>> params;  // match: one assignment per operator
    int line = 0;
};

/// A parsed definition file. Names live in one namespace.
class Document {
public:
    int fields = 0;
    std::vector<std::string> params;
    std::map<std::string, Expr> exprs;
    std::map<std::string, Metric> metrics;
    std::map<std::string, MatrixDiffOp> ops;
    std::map<std::string, TrioDef> trios;
    std::map<std::string, Expr> functionals;
    std::map<std::string, std::vector<std::string>> casimirs;    // trio -> functionals
    std::map<std::string, std::vector<Expr>> charts;             // trio -> expected canonical coordinates
    std::map<std::string, std::vector<Expr>> inverses;           // trio -> inverse chart
    std::map<std::string, std::vector<double>> domains;          // trio -> lo1, hi1, lo2, hi2
    std::vector<Expectation> expectations;

    /// Statement order, for printing: (keyword, name).
    std::vector<std::pair<std::string, std::string>> order;
    /// Source line of each named definition.
    std::map<std::string, int> lines;

    jet::JetContext context() const { return {fields, 12}; }

    /// Operator by name: document operators first, then catalog tags (R2, R3_1, ...).
    MatrixDiffOp op(const std::string& name) const;
    const TrioDef& trio(const std::string& name) const;
    bool has_op(const std::string& name) const;

    /// Canonical text; parse(str()) reproduces the same text.
    std::string str() const;
};

/// Parses a definition file. Throws ParseError (line:column), UnknownName,
/// DimensionMismatch.
Document parse(std::string_view source);

Document load(const std::string& path);

}  // namespace hamtrio::doc
