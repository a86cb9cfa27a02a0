#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hamtrio/geometry.hpp"

namespace hamtrio::catalog {

using geometry::Connection;
using geometry::Metric;
using jet::Expr;
using op::MatrixDiffOp;

enum class CanonicalTag { R2, R3_1, R3_2, R3_3 };

std::string tag_name(CanonicalTag t);
CanonicalTag tag_from_name(const std::string& name);  // throws UnknownName

/// The canonical two-component operators, expanded.
MatrixDiffOp canonical_operator(CanonicalTag t);

/// Scalar sanity tier: D, 2u D + u_x, D^3.
struct ScalarTrio {
    MatrixDiffOp p1, q1, r3;
};
ScalarTrio scalar_trio();

/// Symbolic parameter c<i> or d<i>.
Expr param(char prefix, int i);

using Values = std::map<std::string, Expr>;

/// One solution branch of the variety: hypotheses (nonzero parameters) and
/// the substitution solving the quadratic equations on that branch.
struct Branch {
    int label = 0;
    std::vector<int> nonzero;
    std::vector<std::pair<int, std::string>> solution;  // parameter index -> expression in c<j>
};

/// One line of a pencil table: g from branch k (c), h from branch l (d), under
/// constraints (alternatives separated by "or" are separate entries).
struct PencilRule {
    int k = 0;
    int l = 0;
    std::vector<std::vector<std::pair<std::string, std::string>>> alternatives;  // name -> expression
    std::vector<std::string> nonzero;  // extra hypotheses such as d4 != 0
    std::string label() const { return "g_lambda_" + std::to_string(k) + std::to_string(l); }
};

struct ParamFamily {
    std::string tag;  // Th1..Th4
    CanonicalTag r;
    int nparams = 0;
    std::vector<std::vector<std::string>> metric;         // entries in c1..cn
    std::vector<std::vector<std::vector<std::string>>> connection;  // Gamma^{ij}_k in c1..cn
    std::vector<std::string> variety;
    std::vector<Branch> branches;
    std::vector<PencilRule> pencils;
    std::vector<std::pair<int, int>> excluded;  // (k,l) pairs that do not give flat pencils

    std::vector<Expr> variety_polys(char prefix = 'c') const;
    Metric metric_of(char prefix = 'c') const;
    Connection connection_of(char prefix = 'c') const;
    /// Substitution for branch k in the given prefix.
    jet::Substitution branch_substitution(int k, char prefix) const;
    const Branch& branch(int k) const;
};

const ParamFamily& family(const std::string& tag);  // Th1..Th4; throws UnknownName
const std::vector<std::string>& family_tags();

struct Instance {
    Metric metric;
    Connection connection;
    MatrixDiffOp op;
};

/// Parameters not given stay symbolic. Names are c1..cn (or d1..dn).
Instance instantiate(const ParamFamily& f, const Values& values, char prefix = 'c');

bool on_variety(const ParamFamily& f, const Values& values, char prefix = 'c');

struct PencilVerdict {
    bool admissible = false;
    std::vector<std::string> labels;  // matched table rows
};

/// Line c - lambda d contained in the variety; throws NotOnVariety.
PencilVerdict pencil_admissible(const ParamFamily& f, const Values& c, const Values& d);

/// Branch labels whose hypotheses and equations hold at the point (numeric values).
std::vector<int> branches_at(const ParamFamily& f, const Values& values, char prefix);

/// A pencil-table entry made concrete: parameters of g (c) and h (d) after
/// combining both branch solutions with the entry's constraints; everything
/// else stays symbolic.
struct PencilCase {
    std::string label;
    int alternative = 0;
    Values c, d;
    bool hypotheses_hold = true;   // every nonzero hypothesis survives the constraints
    std::vector<std::string> notes;
};

std::vector<PencilCase> pencil_cases(const ParamFamily& f);

/// Parameters on branch k with free parameters drawn from the seeded generator
/// (small nonzero integers), as values for instantiate.
Values branch_point(const ParamFamily& f, int k, char prefix, unsigned seed);

/// Symbolic parameters on branch k.
Values branch_values(const ParamFamily& f, int k, char prefix);

struct AnsatzShape {
    std::vector<std::string> metric_basis;
    std::vector<std::string> connection_basis;
    static AnsatzShape standard();
};

struct AnsatzResult {
    std::size_t dimension = 0;
    Metric metric;          // in c1..c_dim, aligned with the theorem's family when possible
    Connection connection;  // linear in the same parameters
    bool matches_family = false;
    std::vector<Expr> variety;  // quadratic conditions from the Levi-Civita residuals
    bool variety_matches = false;
};

/// Linear solve of skew-adjointness + [P1, R] = 0 over the ansatz space.
/// Throws AnsatzTooSmall if the solution space is smaller than the theorem's family.
AnsatzResult ansatz_search(CanonicalTag r, const AnsatzShape& shape = AnsatzShape::standard());

/// Coefficient vectors spanned by the given polynomials (as functions of u)
/// in the parameter monomials, compared by mutual membership.
bool same_span(const std::vector<Expr>& a, const std::vector<Expr>& b);

/// The graded part of an operator of homogeneous degree n.
MatrixDiffOp graded_part(const MatrixDiffOp& p, int n);

struct OperatorMatch {
    std::string family;
    Values params;            // direct identification of the first-order part
    std::optional<Expr> r_scale;  // higher part = r_scale * canonical operator
    std::string r_tag;
};

struct SystemMatch {
    std::string family;
    std::vector<OperatorMatch> ops;
};

/// Identifies each operator of the pair as P1(c) + kappa R of one theorem family
/// (parameters of the first operator are named c<i>, of the second d<i>).
SystemMatch match_known_system(const MatrixDiffOp& a, const MatrixDiffOp& b);
/// Same for a single operator or a pair.
SystemMatch match_known_system(const std::vector<MatrixDiffOp>& ops);

/// kappa with found = kappa * expected (parameters absent from a map count as 0).
std::optional<Expr> proportional(const Values& found, const Values& expected);

}  // namespace hamtrio::catalog
