#pragma once

#include "interp/logic.hpp"

#include <random>
#include <string>
#include <vector>

namespace interp::testgen {

// Random terms and formulas over a signature; deterministic for a given seed.
class FormulaGen {
public:
    FormulaGen(Signature sig, unsigned seed, std::vector<std::string> vars = {"x", "y", "z", "u"})
        : sig_(std::move(sig)), rng_(seed), vars_(std::move(vars)) {}

    TermPtr term(int depth) {
        std::vector<std::string> fns;
        for (const auto& [f, a] : sig_.functions) fns.push_back(f);
        int choice = pick(depth > 0 && !fns.empty() ? 3 : 2);
        if (choice == 0 || sig_.constants.empty()) return var(vars_[pick(vars_.size())]);
        if (choice == 1) {
            auto it = sig_.constants.begin();
            std::advance(it, pick(sig_.constants.size()));
            return cnst(*it);
        }
        const std::string& f = fns[pick(fns.size())];
        std::vector<TermPtr> args;
        for (int i = 0; i < sig_.functions.at(f); ++i) args.push_back(term(depth - 1));
        return app(f, std::move(args));
    }

    FormulaPtr atom() {
        std::vector<std::string> rels;
        for (const auto& [r, a] : sig_.relations) rels.push_back(r);
        if (rels.empty() || pick(2) == 0) return eq(term(1), term(1));
        const std::string& r = rels[pick(rels.size())];
        std::vector<TermPtr> args;
        for (int i = 0; i < sig_.relations.at(r); ++i) args.push_back(term(1));
        return rel(r, std::move(args));
    }

    FormulaPtr formula(int depth) {
        if (depth == 0) return atom();
        switch (pick(8)) {
            case 0: return atom();
            case 1: return neg(formula(depth - 1));
            case 2: return conj(formula(depth - 1), formula(depth - 1));
            case 3: return disj(formula(depth - 1), formula(depth - 1));
            case 4: return imp(formula(depth - 1), formula(depth - 1));
            case 5: return iff(formula(depth - 1), formula(depth - 1));
            case 6: return forall(vars_[pick(vars_.size())], formula(depth - 1));
            default: return exists(vars_[pick(vars_.size())], formula(depth - 1));
        }
    }

    // Closed by universal or existential closure of the free variables.
    FormulaPtr sentence(int depth) {
        FormulaPtr f = formula(depth);
        std::vector<std::string> fv = free_variables(f);
        if (fv.empty()) return f;
        return pick(2) ? forall_all(fv, f) : exists_all(fv, f);
    }

    // Only atoms, conjunction, disjunction and existential quantifiers.
    FormulaPtr existential(int depth) {
        if (depth == 0) return atom();
        switch (pick(4)) {
            case 0: return atom();
            case 1: return conj(existential(depth - 1), existential(depth - 1));
            case 2: return disj(existential(depth - 1), existential(depth - 1));
            default: return exists(vars_[pick(vars_.size())], existential(depth - 1));
        }
    }

    std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
    std::mt19937& rng() { return rng_; }

private:
    Signature sig_;
    std::mt19937 rng_;
    std::vector<std::string> vars_;
};

}  // namespace interp::testgen
