#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hamtrio/document.hpp"

namespace hamtrio::cli {

/// One verified statement of a report.
struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct Report {
    std::string command;
    std::vector<std::pair<std::string, std::string>> inputs;
    std::vector<Check> checks;
    std::vector<std::string> residuals;                       // truncated pretty-printed expressions
    std::vector<std::pair<std::string, std::string>> results; // computed values worth printing
    std::vector<std::pair<std::string, double>> timings;      // seconds
    std::optional<unsigned> seed;

    bool pass() const;
    void add(std::string name, bool pass, std::string detail = {});
    void residual(const std::string& text);
    /// JSON document with schema "hamtrio-report/1"; timings omitted when asked.
    std::string json(bool with_timings = true) const;
    std::string text() const;
};

/// Verification routines shared by the command line and the acceptance run.
Report verify_theorem(int n);
Report verify_document(const doc::Document& d, const std::string& label);
Report check_hamiltonian(const doc::Document& d, const std::string& name);
Report check_compatible(const doc::Document& d, const std::string& a, const std::string& b);
Report check_flat_pencil(const doc::Document& d, const std::string& g, const std::string& h);
Report search_ansatz(const std::string& tag);
Report flows(const doc::Document& d, const std::string& trio, const std::string& casimir, const std::string& eps);
Report central_invariants(const doc::Document& d, const std::string& trio, int samples, unsigned seed,
                          const std::optional<std::vector<double>>& domain);

/// Directory holding the example definition files.
std::string default_defs_dir();

/// Full command line entry point. Returns 0 (all checks pass), 1 (a check
/// failed) or 2 (usage or parse error).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hamtrio::cli
