// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "hamtrio/catalog.hpp"
#include "hamtrio/cli.hpp"
#include "hamtrio/document.hpp"
#include "hamtrio/geometry.hpp"
#include "hamtrio/hierarchy.hpp"
#include "hamtrio/parse.hpp"
#include "hamtrio/poisson.hpp"
#include "property_suites.hpp"

using namespace hamtrio;
using catalog::CanonicalTag;
using cli::Report;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;
    void need(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            notes.push_back("failed: " + what);
        }
    }
};

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

doc::Document example(const std::string& name) { return doc::load(cli::default_defs_dir() + "/" + name + ".ham"); }

// Requires every check selected by `keep` to pass; at least one must be selected.
void require_checks(Outcome& o, const Report& r, const std::string& label,
                    const std::function<bool(const std::string&)>& keep) {
    int n = 0;
    for (const auto& c : r.checks) {
        if (!keep(c.name)) continue;
        ++n;
        o.need(c.pass, label + ": " + c.name + (c.detail.empty() ? "" : " (" + c.detail + ")"));
    }
    o.need(n > 0, label + ": no checks selected");
}

bool all_vanish(const std::vector<jet::Expr>& v) {
    for (const auto& e : v)
        if (!jet::vanishes(e)) return false;
    return true;
}

Outcome canonical_operators() {
    Outcome o;
    const jet::JetContext ctx{2, poisson::kBracketJetCap};
    for (auto t : {CanonicalTag::R2, CanonicalTag::R3_1, CanonicalTag::R3_2, CanonicalTag::R3_3}) {
        auto r = catalog::canonical_operator(t);
        auto name = catalog::tag_name(t);
        o.need(op::is_skew_adjoint(r, ctx), name + " skew-adjoint");
        o.need(poisson::is_hamiltonian(r, ctx), name + " Hamiltonian");
        if (t == CanonicalTag::R2) continue;
        poisson::Matrix l;
        poisson::Array3 c;
        bool form = poisson::third_order_data(r, l, c, ctx);
        o.need(form, name + " in the form D(l D + c u_x)D");
        if (!form) continue;
        o.need(all_vanish(poisson::third_order_conditions(l, c)), name + " third-order conditions");
        if (t == CanonicalTag::R3_2) o.need(geometry::is_flat({l}), "l of R3_2 flat");
        if (t == CanonicalTag::R3_3) o.need(!geometry::is_flat({l}), "l of R3_3 non-flat");
    }
    return o;
}

Outcome theorem1() {
    Outcome o;
    require_checks(o, cli::verify_theorem(1), "theorem1", [](const std::string&) { return true; });
    return o;
}

bool pencil_check(const std::string& name) { return starts_with(name, "g_lambda") || starts_with(name, "excluded"); }

Outcome families() {
    Outcome o;
    for (int n = 2; n <= 4; ++n)
        require_checks(o, cli::verify_theorem(n), "theorem" + std::to_string(n),
                       [](const std::string& s) { return !pencil_check(s); });
    return o;
}

Outcome pencil_tables() {
    Outcome o;
    for (int n = 2; n <= 4; ++n) require_checks(o, cli::verify_theorem(n), "theorem" + std::to_string(n), pencil_check);
    return o;
}

bool match_check(const std::string& s) { return starts_with(s, "family of") || starts_with(s, "parameters of"); }

Outcome known_systems() {
    Outcome o;
    for (auto name : {"example41", "example42", "example43", "example44"})
        require_checks(o, cli::verify_document(example(name), name), name, match_check);
    return o;
}

Outcome flows() {
    Outcome o;
    auto is_flow = [](const std::string& s) { return s.find("flow") != std::string::npos; };
    for (auto name : {"example45", "example46", "example47"}) require_checks(o, cli::verify_document(example(name), name), name, is_flow);

    // the printed t2 flow of the rational example, second component: only the
    // flagged duplicated monomial u2x u1x^2 / u1^5 may differ from the computation
    auto d = example("example45");
    const auto& t = d.trio("T");
    hierarchy::Trio trio{d.op(t.p1), d.op(t.q1), d.op(t.r)};
    const jet::JetContext ctx{2, 12};
    auto computed = hierarchy::first_flows(trio, {{"C2", d.functionals.at("C2")}}, jet::Expr(1), ctx)[0];
    auto printed = text::parse_expression(
        "3/2*(1 - u2^2)*u1x/u1^3 + 3/2*u2*u2x/u1^2 - 30*u2*u1x^3/u1^6 + 10*u2x*u1x^2/u1^5 + 12*u2x*u1x^2/u1^5"
        " - 3*u2x*u1xx/u1^4 - 2*u2*u1xxx/u1^4 - u2xx*u1x/u1^4");
    auto flagged = text::parse_expression("u2x*u1x^2/u1^5");
    auto ratio = (computed.rhs[1] - printed) / flagged;
    bool only_flagged = ratio.is_constant();
    o.need(only_flagged, "printed t2 flow, second component, differs beyond the flagged term: computed - printed = " +
                             (computed.rhs[1] - printed).str());
    return o;
}

Outcome central_invariants() {
    Outcome o;
    auto keep = [](const std::string& s) {
        return s.find("central invariants") != std::string::npos || s.find("triviality") != std::string::npos ||
               s.find("canonical coordinates") != std::string::npos;
    };
    for (auto name : {"example45", "example46", "example47"})
        require_checks(o, cli::verify_document(example(name), name), name, keep);
    return o;
}

Outcome scalar_tier() {
    Outcome o;
    const jet::JetContext ctx{1, poisson::kBracketJetCap};
    auto t = catalog::scalar_trio();
    o.need(poisson::is_hamiltonian(t.p1, ctx), "D Hamiltonian");
    o.need(poisson::is_hamiltonian(t.q1, ctx), "2u D + u_x Hamiltonian");
    o.need(poisson::is_hamiltonian(t.r3, ctx), "D^3 Hamiltonian");
    o.need(poisson::are_compatible(t.p1, t.q1, ctx), "[D, 2u D + u_x] = 0");
    o.need(poisson::are_compatible(t.p1, t.r3, ctx), "[D, D^3] = 0");
    o.need(poisson::are_compatible(t.q1, t.r3, ctx), "[2u D + u_x, D^3] = 0");
    const jet::Expr lam = jet::Expr::var(op::lambda_var());
    // Magri pencil 2u D + u_x + D^3 - lambda D and the pencil D + D^3 - lambda (2u D + u_x)
    o.need(poisson::is_hamiltonian(t.q1 + t.r3 - lam * t.p1, ctx), "KdV pencil Hamiltonian for all lambda");
    o.need(poisson::is_hamiltonian(t.p1 + t.r3 - lam * t.q1, ctx), "Camassa-Holm pencil Hamiltonian for all lambda");
    return o;
}

Outcome properties() {
    Outcome o;
    auto add = [&](const props::SuiteResult& r, const std::string& name) {
        o.need(r.pass(), name + " (" + std::to_string(r.failures) + "/" + std::to_string(r.cases) + " failing" +
                             (r.first_failure.empty() ? "" : ", first: " + r.first_failure) + ")");
        o.notes.push_back(name + ": " + std::to_string(r.cases) + " cases");
    };
    add(props::euler_kills_total_derivatives(100, 101), "Euler annihilates total derivatives");
    add(props::adjoint_anti_homomorphism(50, 202), "adjoint involution and anti-homomorphism");
    add(props::bracket_symmetry_bilinearity(303), "bracket symmetry and bilinearity");
    add(props::point_transform_functoriality(20, 404), "point-transform functoriality");
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        const char* title;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"canonical operators Hamiltonian, third-order conditions, l flatness", canonical_operators},
        {"theorem 1 family compatible and flat for all parameters", theorem1},
        {"theorems 2-4: ansatz families, varieties, flat branches", families},
        {"pencil tables flat, excluded cases non-flat", pencil_tables},
        {"known systems identified with the printed parameters", known_systems},
        {"flows match the printed expressions and commute", flows},
        {"central invariants and triviality verdicts", central_invariants},
        {"scalar trio compatible, KdV and Camassa-Holm pencils", scalar_tier},
        {"property suites", properties},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.notes.push_back(std::string("exception: ") + e.what());
        }
        if (!o.pass) ++failed;
        std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].title << "\n";
        if (!o.pass)
            for (const auto& n : o.notes) std::cout << "    " << n << "\n";
    }
    std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria fail") << "\n";
    return failed == 0 ? 0 : 1;
}
