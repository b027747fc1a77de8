#pragma once

#include "interp/logic.hpp"
#include "interp/theory.hpp"

#include <json.hpp>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace interp {

// A formula with designated free variables, in order.
struct Definition {
    std::vector<std::string> params;
    FormulaPtr body;

    FormulaPtr at(const std::vector<std::string>& args) const { return instantiate_vars(params, body, args); }
};

struct RelativeTranslation;
using TranslationPtr = std::shared_ptr<const RelativeTranslation>;

// Parameter-free one-piece translation of dimension m. A relation of arity n
// has m*n designated variables, a function m*(n+1) with the value tuple last,
// a constant m.
struct RelativeTranslation {
    std::string name;
    Signature source;
    Signature target;
    unsigned m = 1;
    Definition domain;
    std::map<std::string, Definition> relations;
    std::map<std::string, Definition> functions;
    std::map<std::string, Definition> constants;
    std::optional<Definition> equality;  // 2m variables; absent means coordinatewise
    bool identity = false;
    // Atomic translations whose left-to-right composite this is; empty when atomic.
    std::vector<TranslationPtr> chain;

    // Throws std::invalid_argument when an invariant is broken.
    void validate() const;
    bool default_equality() const { return !equality.has_value(); }
};

// Every symbol translated as itself, domain (= x x).
RelativeTranslation identity_translation(const Signature& sig);

// Graph of a source function as a translation formula: (= y (f x1 .. xn)).
Definition function_graph(const std::string& f, int arity);

// Copies x#1..x#m of a source variable.
std::vector<std::string> copies(const std::string& x, unsigned m);

// Fresh tuple names; bases v1, v2, .. avoid every base in use.
class FreshTuples {
public:
    FreshTuples(std::set<std::string> avoid, unsigned m) : avoid_(std::move(avoid)), m_(m) {}
    std::vector<std::string> next();

private:
    std::set<std::string> avoid_;
    unsigned m_;
    std::size_t k_ = 0;
};

// Bases (text before the first '#') of every variable in f.
std::set<std::string> variable_bases(const FormulaPtr& f);

FormulaPtr translate_term(const TermPtr& t, const std::vector<std::string>& value_vars,
                          const RelativeTranslation& tau, FreshTuples& fresh);
FormulaPtr translate_term(const TermPtr& t, const std::vector<std::string>& value_vars,
                          const RelativeTranslation& tau);
FormulaPtr translate_formula(const FormulaPtr& f, const RelativeTranslation& tau);

enum class ObligationKind {
    DomainNonempty,
    FunctionTotalUnique,
    ConstantExistsUnique,
    AxiomTranslation,
    SchemaInstanceTranslation,
    EqualityAxiom,
    Lemma
};
std::string to_string(ObligationKind k);

struct Obligation {
    ObligationKind kind;
    std::string label;  // "domain", "function:o", "axiom:Q1", "schema:ID4[01]", ...
    FormulaPtr sentence;
};

std::vector<Obligation> obligations(const RelativeTranslation& tau, const Theory& source, const SchemaBounds& bounds);

// Left-to-right composite; identity translations are dropped from the chain,
// so composition is associative and has identities as units.
RelativeTranslation compose(const RelativeTranslation& first, const RelativeTranslation& second);

nlohmann::json translation_json(const RelativeTranslation& tau);

}  // namespace interp
