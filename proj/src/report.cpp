#include "interp/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>

namespace interp {

std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return fmt::format("{:016x}", h);
}

void finalize_report(VerificationReport& r) {
    std::stable_sort(r.records.begin(), r.records.end(),
                     [](const ObligationRecord& a, const ObligationRecord& b) { return a.label < b.label; });
    r.summary = {};
    r.summary.total = r.records.size();
    for (const auto& rec : r.records) {
        switch (rec.verdict) {
            case VerdictStatus::Holds: ++r.summary.holds; break;
            case VerdictStatus::Fails: ++r.summary.fails; break;
            case VerdictStatus::BudgetExceeded: ++r.summary.budget_exceeded; break;
        }
    }
}

VerificationReport run_verification(const std::string& name, const VerifyOptions& opts) {
    const auto& e = get_interpretation(name);
    auto rb = resolve_bounds(e, opts.bounds);
    VerificationReport rep;
    rep.interpretation = name;
    rep.timings = opts.timings;
    auto& b = rep.bounds;
    b["structure"] = structure_name(rb.plan.structure);
    if (e.translation.m > 1) {
        b["tuples"] = std::string(rb.plan.tuple_eps ? "strings_eps_upto(" : "strings_upto(") +
                      std::to_string(rb.plan.tuple_len) + ")";
        b["tuple_count"] = rb.range.tuples.size();
    } else if (rb.plan.structure == StructureId::Naturals) {
        b["range"] = "nats_upto(" + std::to_string(rb.plan.nat) + ")";
    } else {
        b["range"] = "strings_upto(" + std::to_string(rb.plan.len) + ")";
    }
    b["inner"] = rb.plan.inner ? nlohmann::json(*rb.plan.inner) : nlohmann::json(nullptr);
    b["schema_max_len"] = rb.plan.schema.max_len;
    b["schema_max_n"] = rb.plan.schema.max_n;
    b["budget"] = opts.budget;
    b["strict"] = opts.strict;

    EvalOptions eo;
    eo.budget = opts.budget;
    eo.strict = opts.strict;
    Evaluator ev(rb.plan.structure, rb.range, eo);
    for (const auto& ob : entry_obligations(e, rb.plan.schema)) {
        ObligationRecord rec;
        rec.label = ob.label;
        rec.kind = ob.kind;
        std::string text = print(ob.sentence);
        rec.sentence_length = text.size();
        rec.sentence_hash = fnv1a_hex(text);
        if (text.size() > opts.sentence_cap) {
            text.resize(opts.sentence_cap);
            text += " ...";
        }
        rec.sentence = std::move(text);
        auto t0 = std::chrono::steady_clock::now();
        Verdict v = ev.check_sentence(ob.sentence);
        auto t1 = std::chrono::steady_clock::now();
        rec.verdict = v.status;
        rec.counterexample = std::move(v.counterexample);
        rec.nodes = v.nodes;
        rec.elapsed_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        rep.records.push_back(std::move(rec));
    }
    finalize_report(rep);
    return rep;
}

namespace {

nlohmann::json record_json(const ObligationRecord& r, bool timings) {
    nlohmann::json j;
    j["label"] = r.label;
    j["kind"] = to_string(r.kind);
    j["sentence"] = r.sentence;
    j["sentence_length"] = r.sentence_length;
    j["sentence_fnv1a"] = r.sentence_hash;
    j["verdict"] = to_string(r.verdict);
    if (r.verdict == VerdictStatus::Fails) {
        nlohmann::json ce = nlohmann::json::array();
        for (const auto& [n, v] : r.counterexample) ce.push_back({{"var", n}, {"value", value_str(v)}});
        j["counterexample"] = ce;
    }
    j["nodes"] = r.nodes;
    if (timings) j["elapsed_ms"] = r.elapsed_ms;
    return j;
}

}  // namespace

std::string render_report(const VerificationReport& r, const std::string& format) {
    if (format == "json") {
        nlohmann::json j;
        j["interpretation"] = r.interpretation;
        j["bounds"] = r.bounds.is_null() ? nlohmann::json::object() : r.bounds;
        nlohmann::json obs = nlohmann::json::array();
        for (const auto& rec : r.records) obs.push_back(record_json(rec, r.timings));
        j["obligations"] = obs;
        j["summary"] = {{"total", r.summary.total},
                        {"holds", r.summary.holds},
                        {"fails", r.summary.fails},
                        {"budget_exceeded", r.summary.budget_exceeded}};
        return j.dump(2) + "\n";
    }
    if (format == "text") {
        std::string out = fmt::format("interpretation {}\n", r.interpretation);
        if (!r.bounds.is_null()) out += fmt::format("bounds {}\n", r.bounds.dump());
        std::size_t w = 10;
        for (const auto& rec : r.records) w = std::max(w, rec.label.size());
        for (const auto& rec : r.records) {
            out += fmt::format("{:<{}}  {:<15}  {:>10} nodes", rec.label, w, to_string(rec.verdict), rec.nodes);
            if (r.timings) out += fmt::format("  {:>9.1f} ms", rec.elapsed_ms);
            out += "\n";
            if (rec.verdict == VerdictStatus::Fails && !rec.counterexample.empty()) {
                out += "    counterexample:";
                for (const auto& [n, v] : rec.counterexample) out += fmt::format(" {}={}", n, value_str(v));
                out += "\n";
            }
        }
        out += fmt::format("summary: {} obligations, {} hold, {} fail, {} budget-exceeded\n", r.summary.total,
                           r.summary.holds, r.summary.fails, r.summary.budget_exceeded);
        return out;
    }
    throw std::invalid_argument("unknown report format: " + format + " (json, text)");
}

int exit_code(const VerificationReport& r) {
    if (r.summary.fails) return 1;
    if (r.summary.budget_exceeded) return 2;
    return 0;
}

}  // namespace interp
