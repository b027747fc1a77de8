#pragma once

#include "interp/evaluator.hpp"
#include "interp/theory.hpp"
#include "interp/translation.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace interp {

// How an entry is checked: the ambient structure and default bounds.
struct VerificationPlan {
    StructureId structure = StructureId::BitStrings;
    // Element range: strings_upto(len) for string targets, nats_upto(nat) otherwise.
    unsigned len = 5;
    unsigned nat = 12;
    // Bound for class-internal variables (names without '#'); absent = same range.
    std::optional<unsigned> inner;
    // m > 1: tuples are the images of strings of length <= tuple_len.
    unsigned tuple_len = 4;
    bool tuple_eps = false;
    SchemaBounds schema;
};

struct InterpretationEntry {
    std::string name;
    std::string source;  // theory names
    std::string target;
    RelativeTranslation translation;
    VerificationPlan plan;
    // Extra sentences over the target checked with the obligations.
    std::vector<Obligation> lemmas;
};

const std::vector<std::string>& list_interpretations();
const InterpretationEntry& get_interpretation(const std::string& name);

// Left-to-right composite of the named entries.
RelativeTranslation pipeline(const std::vector<std::string>& names);

// Images of the given strings ("" is eps) under the constant and function
// definitions of a translation from a string signature.
std::vector<std::vector<Value>> tuple_image(const RelativeTranslation& tau, const std::vector<std::string>& strings);

struct BoundsOverride {
    std::optional<unsigned> len, nat, inner, alpha, n;
};

struct ResolvedBounds {
    VerificationPlan plan;
    QuantifierRange range;
};

ResolvedBounds resolve_bounds(const InterpretationEntry& e, const BoundsOverride& o);

// Obligations from the translation followed by the entry's lemmas.
std::vector<Obligation> entry_obligations(const InterpretationEntry& e, const SchemaBounds& b);

nlohmann::json entry_json(const InterpretationEntry& e);

}  // namespace interp
