#pragma once

#include "interp/logic.hpp"

#include <json.hpp>

#include <functional>
#include <string>
#include <vector>

namespace interp {

enum class ParamKind { Nat, NatPair, Bits, BitsPair };

std::string to_string(ParamKind k);

struct SchemaParam {
    std::vector<unsigned> nats;
    std::vector<std::string> bits;

    static SchemaParam nat(unsigned n) { return {{n}, {}}; }
    static SchemaParam nat_pair(unsigned n, unsigned m) { return {{n, m}, {}}; }
    static SchemaParam word(const std::string& a) { return {{}, {a}}; }
    static SchemaParam word_pair(const std::string& a, const std::string& b) { return {{}, {a, b}}; }

    ParamKind kind() const;
    std::string str() const;  // "3", "2,1", "01", "01,1"
    bool operator==(const SchemaParam& o) const { return nats == o.nats && bits == o.bits; }
};

// Accepts the forms produced by str() for the given kind.
SchemaParam parse_schema_param(ParamKind kind, const std::string& text);

struct Schema {
    std::string name;
    ParamKind kind;
    std::function<FormulaPtr(const SchemaParam&)> generate;
    // Side condition on parameters, e.g. n != m; absent means every parameter.
    std::function<bool(const SchemaParam&)> admits;
};

struct Axiom {
    std::string label;
    FormulaPtr formula;
};

struct Theory {
    std::string name;
    Signature sig;
    std::vector<Axiom> axioms;
    std::vector<Schema> schemas;

    const Schema& schema(const std::string& name) const;
};

struct SchemaBounds {
    unsigned max_n = 5;    // numeral parameters 0..max_n
    unsigned max_len = 3;  // bit string parameters of length 1..max_len
};

// Admitted parameters in canonical order: n ascending, shortlex for strings,
// pairs ordered by first component then second.
std::vector<SchemaParam> schema_params(const Schema& s, const SchemaBounds& b);

TermPtr numeral(unsigned n);
// The empty string is accepted only when allow_empty is set (the eps constant).
TermPtr biteral(const std::string& bits, bool allow_empty = false);

struct SegmentSets {
    std::vector<std::string> pref, suff, sub;  // length ascending, then lexicographic
};
SegmentSets segment_sets(const std::string& alpha);

// Nonempty strings of length <= L in shortlex order.
std::vector<std::string> strings_upto(unsigned L);

const std::vector<std::string>& theory_names();
const Theory& get_theory(const std::string& name);
FormulaPtr instantiate_schema(const Theory& t, const std::string& schema, const SchemaParam& p);

// subseq_s, leq_l, lt_l, prefix_def, sub_def; all binary.
const std::vector<std::string>& shorthand_names();
FormulaPtr expand_shorthand(const std::string& name, const std::vector<TermPtr>& args);

struct ClassFormula {
    std::string name;
    std::vector<std::string> params;
    FormulaPtr body;
    std::string home;  // theory whose signature the body is written in

    FormulaPtr at(const std::vector<TermPtr>& args) const { return instantiate(params, body, args); }
    FormulaPtr at_vars(const std::vector<std::string>& args) const { return instantiate_vars(params, body, args); }
};

const std::vector<std::string>& class_names();
const ClassFormula& get_class_formula(const std::string& name);

// Tuple names base#1..base#m.
std::vector<std::string> tuple_names(const std::string& base, unsigned m);
std::vector<TermPtr> tuple_vars(const std::string& base, unsigned m);

// 2x2 matrices over the arithmetic signature, as 4-tuples of terms.
using MatTerms = std::vector<TermPtr>;
MatTerms mat_literal(unsigned a, unsigned b, unsigned c, unsigned d);
FormulaPtr mat_equal(const MatTerms& x, const MatTerms& y);
// z = x * y entrywise, each entry as one bilinear equation with z on the left.
FormulaPtr mat_product_is(const MatTerms& x, const MatTerms& y, const MatTerms& z);
// Entries of x * y as terms.
MatTerms mat_product_terms(const MatTerms& x, const MatTerms& y);

nlohmann::json theory_json(const Theory& t);

}  // namespace interp
