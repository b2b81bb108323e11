// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace noma {

struct CheckResult {
    std::string name;
    int criterion = 0;             // acceptance criterion number, 0 if none
    std::vector<std::string> tags;  // e.g. "n2", "n3", "mc"
    bool audit = false;            // reported, never gating
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

/// One row of the formula-versus-oracle deviation table.
struct AuditRow {
    std::string formula;
    double ebn0_db = 0.0;
    double formula_value = 0.0;
    double reference = 0.0;
    double rel_error = 0.0;
};

/// Per-formula summary of the audit rows.
struct AuditSummary {
    std::string formula;
    std::string agreement;  // Eb/N0 points within 5 % relative, or "none"
    double max_rel_elsewhere = 0.0;
    bool computed = false;
};

struct ValidationOptions {
    std::string only;    // tag or check-name filter; empty runs everything
    bool audit = false;  // append the full deviation table
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    std::vector<AuditRow> audit_rows;
    std::vector<AuditSummary> audit_summary;

    /// True when every non-audit check passed.
    bool all_passed() const;
    void print(std::ostream& os, bool with_audit_table) const;
};

struct NamedCheck {
    std::string name;
    int criterion;
    std::vector<std::string> tags;
    bool audit;
    std::function<void(CheckResult&, ValidationReport&)> body;
};

/// The acceptance suite in execution order.
const std::vector<NamedCheck>& acceptance_checks();

/// Runs the checks selected by opt; progress lines go to log when non-null.
ValidationReport run_validation(const ValidationOptions& opt, std::ostream* log = nullptr);

}  // namespace noma
