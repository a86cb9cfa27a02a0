#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hamtrio/diffop.hpp"

namespace hamtrio::hierarchy {

using jet::Expr;
using jet::JetContext;
using op::MatrixDiffOp;

/// A local functional, the integral of its density over the circle.
struct Functional {
    std::string name;
    Expr density;
    std::vector<Expr> gradient(const JetContext& ctx) const;
};

/// Densities differing by a total derivative define the same functional.
bool same_functional(const Functional& a, const Functional& b, const JetContext& ctx);

/// Evolutionary flow u^i_t = F^i(u, u_x, ...).
struct Flow {
    std::vector<Expr> rhs;
    int size() const { return static_cast<int>(rhs.size()); }
    /// Value at eps = e (identity when eps does not occur).
    Flow at_eps(const Expr& e) const;
    /// Coefficient of eps^k.
    Flow eps_part(unsigned k) const;
};

struct Trio {
    MatrixDiffOp p1, q1, r;
};

/// Q applied to the variational gradient of C vanishes.
bool casimir_check(const Functional& c, const MatrixDiffOp& q, const JetContext& ctx);

/// Flows (P1 + eps^2 R) delta C_i; throws NotACasimir unless each C_i is a Casimir of Q1.
std::vector<Flow> first_flows(const Trio& trio, const std::vector<Functional>& casimirs, const Expr& eps,
                              const JetContext& ctx);

/// Prolonged Lie bracket DF[G] - DG[F] of two evolutionary fields.
std::vector<Expr> commutator(const Flow& f, const Flow& g, const JetContext& ctx);
bool flows_commute(const Flow& f, const Flow& g, const JetContext& ctx);

/// Bounded density ansatz used by is_hamiltonian_flow.
struct DensityAnsatz {
    int degree = 3;         // total polynomial degree in the field and jet variables
    int max_order = 2;      // highest jet order appearing in a monomial
    int max_weight = 2;     // bound on the sum of jet orders in a monomial
    int laurent = 0;        // extra powers of 1/u1 (0 = automatic from the flow)
};

enum class HamiltonianVerdict { Yes, No, Undecided };

struct HamiltonianFlowResult {
    HamiltonianVerdict verdict = HamiltonianVerdict::Undecided;
    std::optional<Expr> density;   // a Hamiltonian density when found
    std::string reason;
};

/// Is F = P delta H for some local density H? Yes with a density found in the
/// ansatz; No when an exact obstruction is found; Undecided otherwise.
HamiltonianFlowResult is_hamiltonian_flow(const Flow& f, const MatrixDiffOp& p, const JetContext& ctx,
                                          const DensityAnsatz& ansatz = {});

std::string to_string(HamiltonianVerdict v);

}  // namespace hamtrio::hierarchy
