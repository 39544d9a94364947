#ifndef QCFL_GRAMMAR_HPP
#define QCFL_GRAMMAR_HPP

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qcfl/domain.hpp"
#include "qcfl/series.hpp"
#include "qcfl/weight.hpp"
#include "qcfl/word.hpp"

namespace qcfl {

/// A context-free grammar with one weight per production. Nonterminals and
/// terminals share one namespace of symbol names and must be disjoint.
/// Immutable after construction.
class WeightedGrammar {
public:
    struct Production {
        std::string id;
        std::string lhs;
        std::vector<std::string> rhs; // empty = epsilon
        Weight weight;
    };

    WeightedGrammar(DomainPtr domain,
                    std::vector<std::string> terminals,
                    std::vector<std::string> nonterminals,
                    std::string start,
                    std::vector<Production> productions);

    const DomainPtr& domain() const { return domain_; }
    const std::vector<std::string>& terminals() const { return terminals_; }
    const std::vector<std::string>& nonterminals() const { return nonterminals_; }
    const std::string& start() const { return start_; }
    const std::vector<Production>& productions() const { return productions_; }

    bool is_terminal(const std::string& symbol) const;
    bool is_nonterminal(const std::string& symbol) const;

    /// Index of the production with the given id; productions are tried in
    /// declaration order everywhere.
    std::optional<std::size_t> production_index(const std::string& id) const;

    // -- interned view used by the algorithms --------------------------------
    // Symbol ids: 0..nonterminal_count-1 are nonterminals (declaration
    // order), the rest are terminals.
    std::size_t symbol_count() const { return symbols_.size(); }
    std::size_t nonterminal_count() const { return nonterminals_.size(); }
    const std::string& symbol_name(int id) const { return symbols_[static_cast<std::size_t>(id)]; }
    std::optional<int> symbol_id(const std::string& name) const;
    bool id_is_terminal(int id) const { return id >= static_cast<int>(nonterminals_.size()); }
    int start_id() const { return start_id_; }
    const std::vector<int>& rhs_ids(std::size_t production) const { return rhs_ids_[production]; }
    int lhs_id(std::size_t production) const { return lhs_ids_[production]; }
    const std::vector<std::size_t>& productions_of(int nonterminal_id) const {
        return by_lhs_[static_cast<std::size_t>(nonterminal_id)];
    }

    /// Least terminal-word length derivable from the symbol; nullopt when
    /// the symbol derives no terminal word at all.
    std::optional<std::size_t> min_yield(int symbol_id) const;
    bool nullable(int nonterminal_id) const { return nullable_[static_cast<std::size_t>(nonterminal_id)]; }

private:
    DomainPtr domain_;
    std::vector<std::string> terminals_;
    std::vector<std::string> nonterminals_;
    std::string start_;
    std::vector<Production> productions_;

    std::vector<std::string> symbols_;
    std::map<std::string, int> symbol_ids_;
    int start_id_ = 0;
    std::vector<int> lhs_ids_;
    std::vector<std::vector<int>> rhs_ids_;
    std::vector<std::vector<std::size_t>> by_lhs_;
    std::vector<bool> nullable_;
    std::vector<std::size_t> min_yield_; // SIZE_MAX = derives nothing
};

/// A leftmost derivation: production indexes in application order, plus the
/// derived terminal word.
struct Derivation {
    std::vector<std::size_t> steps;
    Word word;
};

/// Production ids along a derivation, for display.
std::vector<std::string> derivation_ids(const WeightedGrammar& g, const Derivation& d);

/// Replaces the leftmost nonterminal of the sentential form using the named
/// production. Errors when the form has no nonterminal or the production's
/// left-hand side does not match.
Word leftmost_step(const WeightedGrammar& g, const Word& sentential_form,
                   const std::string& production_id);

/// All leftmost derivations of the word, ordered by trying productions in
/// declaration order at every choice point. Throws DivergenceError past the
/// budget (counting visited search states).
std::vector<Derivation> enumerate_derivations(const WeightedGrammar& g, const Word& word,
                                              std::size_t budget = kDefaultEnumerationBudget);

/// Valuation of the production weights along the derivation; replays the
/// derivation and errors when it is not valid for the grammar.
Weight derivation_weight(const WeightedGrammar& g, const Derivation& d);

/// Sum of derivation weights over all derivations of the word, zero when
/// there are none. Rejects grammars with infinitely many derivations.
Weight evaluate(const WeightedGrammar& g, const Word& word,
                std::size_t budget = kDefaultEnumerationBudget);

/// No chain productions and no epsilon productions.
bool is_proper(const WeightedGrammar& g);

struct FiniteDerivationsCheck {
    bool ok = true;
    /// When !ok: nonterminals A0, A1, ..., Ak = A0 where each derives the
    /// next surrounded by nullable context, witnessing unbounded derivation
    /// sets.
    std::vector<std::string> cycle;
};

/// Decides whether every word has finitely many derivations.
FiniteDerivationsCheck finite_derivations_check(const WeightedGrammar& g);

/// Equivalent grammar in which every production is a head terminal (or
/// nothing) followed by nonterminals only. Original production ids and
/// weights are preserved; one unit-weight production per terminal is added.
WeightedGrammar to_head_normal_form(const WeightedGrammar& g);

struct UnambiguityProbe {
    bool unambiguous = true;
    Word witness; // shortlex-first word with >= 2 derivations
};

/// Exhaustive over all derivable words of length <= n.
UnambiguityProbe unambiguity_probe(const WeightedGrammar& g, std::size_t n);

/// Calls the visitor for every derivation whose yield has length <= max_len,
/// in deterministic order. The visitor returns false to stop early.
void for_each_derivation_up_to(const WeightedGrammar& g, std::size_t max_len,
                               const std::function<bool(const Word&, const std::vector<std::size_t>&)>& visit,
                               std::size_t budget = kDefaultEnumerationBudget);

/// Exact support restriction: every word of length <= max_len with its value.
SupportMap generate_support(const WeightedGrammar& g, std::size_t max_len,
                            std::size_t budget = kDefaultEnumerationBudget);

/// Derivable words of length <= max_len with derivation counts.
std::map<Word, std::size_t, ShortlexLess> generate_words(const WeightedGrammar& g, std::size_t max_len,
                                                         std::size_t budget = kDefaultEnumerationBudget);

/// Whether the word has at least one derivation (early exit).
bool membership(const WeightedGrammar& g, const Word& word,
                std::size_t budget = kDefaultEnumerationBudget);

/// The grammar's quantitative language as a Series (with support probe).
Series grammar_series(const WeightedGrammar& g);

} // namespace qcfl

#endif
