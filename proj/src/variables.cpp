#include "hamtrio/variables.hpp"

#include <array>
#include <atomic>
#include <cctype>
#include <map>
#include <mutex>
#include <unordered_map>

#include "hamtrio/errors.hpp"
#include "hamtrio/expr.hpp"

namespace hamtrio::jet {

namespace {

constexpr std::size_t kCapacity = 1u << 16;

struct Registry {
    std::unique_ptr<VarInfo[]> table{new VarInfo[kCapacity]};
    std::atomic<std::uint32_t> size{0};
    std::mutex mutex;
    std::unordered_map<std::string, VarId> params;
    std::map<std::string, VarId> radicals;  // keyed by canonical radicand text
    std::vector<VarId> radical_order;

    Registry() {
        // Jets first, then covectors: fixed ids independent of usage order.
        for (int order = 0; order <= Vars::kMaxOrder; ++order)
            for (int c = 1; c <= Vars::kMaxComponents; ++c) {
                VarInfo& v = table[size++];
                v.kind = VarKind::Jet;
                v.component = c;
                v.order = order;
                v.name = jet_name(c, order);
            }
        for (int a = 1; a <= Vars::kMaxCovectors; ++a)
            for (int order = 0; order <= Vars::kMaxOrder; ++order)
                for (int c = 1; c <= Vars::kMaxComponents; ++c) {
                    VarInfo& v = table[size++];
                    v.kind = VarKind::Covector;
                    v.covector = a;
                    v.component = c;
                    v.order = order;
                    v.name = "psi" + std::to_string(a) + "_" + std::to_string(c);
                    if (order > 0 && order <= 3)
                        v.name += std::string(order, 'x');
                    else if (order > 3)
                        v.name += "_" + std::to_string(order);
                }
    }

    VarId push(VarInfo info) {
        std::uint32_t id = size.load();
        if (id >= kCapacity) throw Error("variable table exhausted");
        table[id] = std::move(info);
        size.store(id + 1);
        return id;
    }
};

Registry& registry() {
    static Registry r;
    return r;
}

void check_jet(int component, int order) {
    if (component < 1 || component > Vars::kMaxComponents)
        throw DimensionMismatch("field index " + std::to_string(component) + " out of range");
    if (order < 0 || order > Vars::kMaxOrder)
        throw JetOrderExceeded("jet order " + std::to_string(order) + " beyond table limit");
}

}  // namespace

std::string jet_name(int component, int order) {
    std::string s = "u" + std::to_string(component);
    if (order == 0) return s;
    if (order <= 3) return s + std::string(order, 'x');
    return s + "_" + std::to_string(order);
}

VarId Vars::jet(int component, int order) {
    check_jet(component, order);
    return static_cast<VarId>(order * kMaxComponents + (component - 1));
}

VarId Vars::covector(int which, int component, int order) {
    check_jet(component, order);
    if (which < 1 || which > kMaxCovectors) throw DimensionMismatch("covector index out of range");
    constexpr int jets = (kMaxOrder + 1) * kMaxComponents;
    return static_cast<VarId>(jets + ((which - 1) * (kMaxOrder + 1) + order) * kMaxComponents +
                              (component - 1));
}

VarId Vars::param(std::string_view name) {
    Registry& r = registry();
    std::lock_guard lock(r.mutex);
    auto it = r.params.find(std::string(name));
    if (it != r.params.end()) return it->second;
    VarInfo info;
    info.kind = VarKind::Param;
    info.name = std::string(name);
    VarId id = r.push(std::move(info));
    r.params.emplace(std::string(name), id);
    return id;
}

VarId Vars::radical(const Expr& radicand) {
    Registry& r = registry();
    std::string key = radicand.str();
    std::lock_guard lock(r.mutex);
    auto it = r.radicals.find(key);
    if (it != r.radicals.end()) return it->second;
    VarInfo info;
    info.kind = VarKind::Radical;
    info.name = "sqrt(" + key + ")";
    info.radicand = std::make_shared<const Expr>(radicand);
    VarId id = r.push(std::move(info));
    r.radicals.emplace(std::move(key), id);
    r.radical_order.push_back(id);
    return id;
}

std::vector<VarId> Vars::radicals() {
    Registry& r = registry();
    std::lock_guard lock(r.mutex);
    return r.radical_order;
}

const VarInfo& Vars::info(VarId v) {
    Registry& r = registry();
    if (v >= r.size.load()) throw Error("unknown variable id " + std::to_string(v));
    return r.table[v];
}

VarId Vars::shifted(VarId v, int by) {
    const VarInfo& i = info(v);
    if (i.kind == VarKind::Jet) return jet(i.component, i.order + by);
    if (i.kind == VarKind::Covector) return covector(i.covector, i.component, i.order + by);
    throw Error("only jet and covector variables carry an order");
}

VarId Vars::from_name(std::string_view text) {
    // u<c>[x...] | u<c>_<k> | psi<a>_<c>[x...] | psi<a>_<c>_<k>; anything else is a parameter.
    auto digits = [&](std::size_t& pos, int& out) {
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start || pos - start > 3) return false;
        out = std::stoi(std::string(text.substr(start, pos - start)));
        return true;
    };
    auto suffix = [&](std::size_t pos, int& order) {
        if (pos == text.size()) {
            order = 0;
            return true;
        }
        if (text[pos] == 'x') {
            std::size_t n = 0;
            while (pos + n < text.size() && text[pos + n] == 'x') ++n;
            if (pos + n != text.size()) return false;
            order = static_cast<int>(n);
            return true;
        }
        if (text[pos] == '_') {
            ++pos;
            return digits(pos, order) && pos == text.size();
        }
        return false;
    };
    std::size_t pos = 0;
    int comp = 0, order = 0, which = 0;
    if (text.size() >= 2 && text[0] == 'u' && std::isdigit(static_cast<unsigned char>(text[1]))) {
        pos = 1;
        if (digits(pos, comp) && suffix(pos, order) && comp >= 1) return jet(comp, order);
    }
    if (text.substr(0, 3) == "psi") {
        pos = 3;
        if (digits(pos, which) && pos < text.size() && text[pos] == '_') {
            ++pos;
            if (digits(pos, comp) && suffix(pos, order) && comp >= 1) return covector(which, comp, order);
        }
    }
    return param(text);
}

}  // namespace hamtrio::jet
