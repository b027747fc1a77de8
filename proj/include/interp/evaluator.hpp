#pragma once

#include "interp/logic.hpp"
#include "interp/sl2.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace interp {

// Naturals use the BigInt alternative, bit strings the string one ("" is eps).
using Value = std::variant<BigInt, std::string>;

std::string value_str(const Value& v);
bool value_less(const Value& a, const Value& b);  // numeric, or shortlex

enum class StructureId { BitStrings, BitStringsEps, Naturals };

std::string structure_name(StructureId s);
StructureId structure_by_name(const std::string& name);
// Symbols the structure interprets.
const Signature& structure_signature(StructureId s);

struct QuantifierRange {
    std::vector<Value> elements;
    // Tuple range for consecutive quantifiers over base#1 .. base#dim.
    unsigned dim = 0;
    std::vector<std::vector<Value>> tuples;
    std::map<std::string, std::vector<Value>> overrides;
    // Used instead of elements for variables whose name has no '#'.
    std::optional<std::vector<Value>> inner;

    const std::vector<Value>& for_var(const std::string& name) const;
    // Nonempty and duplicate-free everywhere; throws std::invalid_argument.
    void validate() const;
};

QuantifierRange strings_range(unsigned max_len, bool with_eps = false);
QuantifierRange nats_range(unsigned max);
// elements become the distinct coordinates, in ascending order.
QuantifierRange tuple_range(std::vector<std::vector<Value>> tuples);
// strings_upto(L), strings_eps_upto(L), nats_upto(B); throws on L < 1.
QuantifierRange make_range(const std::string& spec);

using Assignment = std::map<std::string, Value>;

struct EvalOptions {
    std::uint64_t budget = 0;  // search nodes per check, 0 = unlimited
    // Quantifiers see only the range; no exact witness resolution.
    bool strict = false;
};

class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded() : std::runtime_error("node budget exceeded") {}
};

enum class VerdictStatus { Holds, Fails, BudgetExceeded };
std::string to_string(VerdictStatus s);

struct Verdict {
    VerdictStatus status = VerdictStatus::Holds;
    std::vector<std::pair<std::string, Value>> counterexample;
    std::uint64_t nodes = 0;
};

// Keeps compiled blocks and memoized results between calls, so the checks of
// one verification run can share work. Not thread-safe.
class Evaluator {
public:
    Evaluator(StructureId s, QuantifierRange range, EvalOptions opts = {});
    ~Evaluator();
    Evaluator(const Evaluator&) = delete;
    Evaluator& operator=(const Evaluator&) = delete;

    bool evaluate(const FormulaPtr& f, const Assignment& sigma);
    Verdict check_sentence(const FormulaPtr& f);
    // Witness for the listed variables of (ex vars f), if one is found.
    std::optional<Assignment> find_witness(const std::vector<std::string>& vars, const FormulaPtr& f,
                                           const Assignment& sigma);

    StructureId structure() const;
    const QuantifierRange& range() const;
    std::uint64_t nodes_used() const;
    std::size_t block_count() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

bool evaluate(StructureId s, const QuantifierRange& r, const FormulaPtr& f, const Assignment& sigma,
              EvalOptions opts = {});
Verdict check_sentence(StructureId s, const QuantifierRange& r, const FormulaPtr& f, EvalOptions opts = {});

Value eval_term(StructureId s, const TermPtr& t, const Assignment& sigma);
// Plain recursive evaluation over for_var ranges, without short-circuiting. Test oracle.
bool naive_evaluate(StructureId s, const QuantifierRange& r, const FormulaPtr& f, const Assignment& sigma);

}  // namespace interp
