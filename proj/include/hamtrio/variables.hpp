#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace hamtrio::jet {

class Expr;

using VarId = std::uint32_t;

enum class VarKind : std::uint8_t {
    Jet,       // u^i_(k); k = 0 is the field itself
    Covector,  // psi_{a,i,(k)}, the formal test covectors of the Schouten bracket
    Param,     // symbolic constant
    Radical,   // opaque sqrt(radicand)
};

struct VarInfo {
    VarKind kind = VarKind::Param;
    int component = 0;  // 1-based field index for Jet/Covector
    int order = 0;      // jet order for Jet/Covector
    int covector = 0;   // which covector (1-based) for Covector
    std::string name;
    std::shared_ptr<const Expr> radicand;  // Radical only
};

/// Process-wide interning table of variables. Ids are dense and stable; the
/// id order is the lexicographic variable order of the polynomial kernel
/// (smaller id = more significant). Safe for concurrent use.
class Vars {
public:
    static constexpr int kMaxComponents = 6;
    static constexpr int kMaxCovectors = 3;
    static constexpr int kMaxOrder = 40;

    static VarId jet(int component, int order = 0);
    static VarId covector(int which, int component, int order = 0);
    static VarId param(std::string_view name);
    static VarId radical(const Expr& radicand);

    static const VarInfo& info(VarId v);
    static const std::string& name(VarId v) { return info(v).name; }
    static bool is_jet(VarId v) { return info(v).kind == VarKind::Jet; }
    static bool is_covector(VarId v) { return info(v).kind == VarKind::Covector; }
    static bool is_param(VarId v) { return info(v).kind == VarKind::Param; }
    static bool is_radical(VarId v) { return info(v).kind == VarKind::Radical; }
    /// Jet or covector with the order raised by `by`.
    static VarId shifted(VarId v, int by);

    /// Looks a textual variable name up: u1, u2x, u1_3, psi1_2xx, or a parameter.
    static VarId from_name(std::string_view text);
    /// Radicals registered so far, in creation order.
    static std::vector<VarId> radicals();
};

/// Display name of the jet u^i_(k): u1, u1x, u1xx, u1xxx, u1_4, ...
std::string jet_name(int component, int order);

}  // namespace hamtrio::jet
