#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace interp {

// Single-sorted first-order syntax with equality.

struct Signature {
    std::string name;
    std::set<std::string> constants;
    std::map<std::string, int> functions;
    std::map<std::string, int> relations;

    bool is_constant(const std::string& s) const { return constants.count(s) != 0; }
    bool is_function(const std::string& s) const { return functions.count(s) != 0; }
    bool is_relation(const std::string& s) const { return relations.count(s) != 0; }
    bool declares(const std::string& s) const {
        return is_constant(s) || is_function(s) || is_relation(s);
    }
    // Throws std::invalid_argument when an invariant is broken.
    void validate() const;
};

bool same_symbols(const Signature& a, const Signature& b);
bool is_reserved(const std::string& token);
bool is_variable_name(const std::string& token);

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
    enum class Kind { Var, Const, App };
    Kind kind;
    std::string name;
    std::vector<TermPtr> args;
    std::vector<std::string> free;  // first-occurrence order
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    enum class Kind { Eq, Rel, Not, And, Or, Imp, Iff, Forall, Exists };
    Kind kind;
    std::string name;  // relation symbol, or the bound variable
    std::vector<TermPtr> terms;
    FormulaPtr lhs;  // Not and quantifiers keep their operand here
    FormulaPtr rhs;
    std::vector<std::string> free;
    std::uint64_t size = 1;  // tree size, saturating

    bool is_quantifier() const { return kind == Kind::Forall || kind == Kind::Exists; }
    bool is_binary() const {
        return kind == Kind::And || kind == Kind::Or || kind == Kind::Imp || kind == Kind::Iff;
    }
};

TermPtr var(const std::string& name);
TermPtr cnst(const std::string& name);
TermPtr app(const std::string& fn, std::vector<TermPtr> args);

FormulaPtr eq(TermPtr a, TermPtr b);
FormulaPtr rel(const std::string& r, std::vector<TermPtr> args);
FormulaPtr neg(FormulaPtr f);
FormulaPtr conj(FormulaPtr a, FormulaPtr b);
FormulaPtr disj(FormulaPtr a, FormulaPtr b);
FormulaPtr imp(FormulaPtr a, FormulaPtr b);
FormulaPtr iff(FormulaPtr a, FormulaPtr b);
FormulaPtr forall(const std::string& v, FormulaPtr body);
FormulaPtr exists(const std::string& v, FormulaPtr body);
FormulaPtr make_binary(Formula::Kind k, FormulaPtr a, FormulaPtr b);
FormulaPtr make_quantifier(Formula::Kind k, const std::string& v, FormulaPtr body);

// Right-nested; the list must be nonempty.
FormulaPtr conj_all(const std::vector<FormulaPtr>& fs);
FormulaPtr disj_all(const std::vector<FormulaPtr>& fs);
FormulaPtr forall_all(const std::vector<std::string>& vs, FormulaPtr body);
FormulaPtr exists_all(const std::vector<std::string>& vs, FormulaPtr body);

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t pos);
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

using Syntax = std::variant<TermPtr, FormulaPtr>;

Syntax parse(const std::string& text, const Signature& sig);
TermPtr parse_term(const std::string& text, const Signature& sig);
FormulaPtr parse_formula(const std::string& text, const Signature& sig);

std::string print(const TermPtr& t);
std::string print(const FormulaPtr& f);
std::string print(const Syntax& x);

const std::vector<std::string>& free_variables(const TermPtr& t);
const std::vector<std::string>& free_variables(const FormulaPtr& f);
bool is_sentence(const FormulaPtr& f);
bool occurs_free(const std::string& v, const FormulaPtr& f);

using Substitution = std::map<std::string, TermPtr>;

TermPtr substitute(const TermPtr& t, const Substitution& map);
// Simultaneous and capture-avoiding. A bound variable that would capture is
// renamed by appending primes until the name is unused.
FormulaPtr substitute(const FormulaPtr& f, const Substitution& map);
FormulaPtr rename_free(const FormulaPtr& f, const std::vector<std::string>& from,
                       const std::vector<std::string>& to);

// Instance of a defining formula at the given arguments. Large bodies are
// wrapped as (ex d1 .. (and (= d1 a1) .. body)) so the body node is shared
// between instances instead of copied.
FormulaPtr instantiate(const std::vector<std::string>& params, const FormulaPtr& body,
                       const std::vector<TermPtr>& args);
FormulaPtr instantiate_vars(const std::vector<std::string>& params, const FormulaPtr& body,
                            const std::vector<std::string>& args);
constexpr std::uint64_t kShareThreshold = 200;

// z -> z', and x#2 -> x'#2 so tuple coordinates keep their index.
std::string primed(const std::string& name);

// Names v1, v2, ... with the smallest suffixes not in avoid.
std::vector<std::string> fresh_variables(const std::set<std::string>& avoid, std::size_t count);

bool structurally_equal(const TermPtr& a, const TermPtr& b);
bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b);
bool alpha_equal(const FormulaPtr& a, const FormulaPtr& b);

// Every variable name occurring anywhere (free or bound).
std::set<std::string> all_variables(const FormulaPtr& f);
void collect_variables(const TermPtr& t, std::set<std::string>& out);

// Throws std::invalid_argument on undeclared symbols or arity mismatch.
void check_well_formed(const TermPtr& t, const Signature& sig);
void check_well_formed(const FormulaPtr& f, const Signature& sig);

}  // namespace interp
