#pragma once

#include "interp/evaluator.hpp"
#include "interp/interpretations.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace interp {

struct VerifyOptions {
    BoundsOverride bounds;
    std::uint64_t budget = 0;  // per obligation, 0 = unlimited
    bool timings = false;      // record elapsed time; makes reports nondeterministic
    bool strict = false;       // no witnesses outside the range
    std::size_t sentence_cap = 2000;  // printed characters kept per sentence
};

struct ObligationRecord {
    std::string label;
    ObligationKind kind;
    std::string sentence;  // canonical text, possibly cut at the cap
    std::uint64_t sentence_length = 0;
    std::string sentence_hash;  // FNV-1a of the full text, hex
    VerdictStatus verdict = VerdictStatus::Holds;
    std::vector<std::pair<std::string, Value>> counterexample;
    std::uint64_t nodes = 0;
    double elapsed_ms = 0;
};

struct ReportSummary {
    std::size_t total = 0, holds = 0, fails = 0, budget_exceeded = 0;
};

struct VerificationReport {
    std::string interpretation;
    nlohmann::json bounds;
    bool timings = false;
    std::vector<ObligationRecord> records;  // sorted by label
    ReportSummary summary;
};

std::string fnv1a_hex(const std::string& s);

// Sorts records and recomputes the summary.
void finalize_report(VerificationReport& r);

VerificationReport run_verification(const std::string& entry, const VerifyOptions& opts = {});

// format: "json" or "text"; throws std::invalid_argument otherwise.
std::string render_report(const VerificationReport& r, const std::string& format);

// 0 all hold, 1 some obligation fails, 2 budget exceeded without failures.
int exit_code(const VerificationReport& r);

}  // namespace interp
