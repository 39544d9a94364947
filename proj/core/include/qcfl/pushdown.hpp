#ifndef QCFL_PUSHDOWN_HPP
#define QCFL_PUSHDOWN_HPP

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

/// A pushdown automaton with one weight per transition. Acceptance is by
/// final state and empty pushdown. Immutable after construction.
class WeightedPushdown {
public:
    struct Transition {
        std::string id;
        std::string from;
        std::string label; // "" = epsilon
        std::string pop;   // stack symbol replaced
        std::string to;
        std::vector<std::string> push; // push[0] ends on top
        Weight weight;
    };

    WeightedPushdown(DomainPtr domain,
                     std::vector<std::string> states,
                     std::vector<std::string> stack_alphabet,
                     std::string initial_state,
                     std::string initial_symbol,
                     std::vector<std::string> final_states,
                     std::vector<Transition> transitions);

    const DomainPtr& domain() const { return domain_; }
    const std::vector<std::string>& states() const { return states_; }
    const std::vector<std::string>& stack_alphabet() const { return stack_; }
    const std::string& initial_state() const { return initial_state_; }
    const std::string& initial_symbol() const { return initial_symbol_; }
    const std::vector<std::string>& final_states() const { return finals_; }
    const std::vector<Transition>& transitions() const { return transitions_; }

    /// Input alphabet inferred from the transition labels, in first-use order.
    const std::vector<std::string>& input_alphabet() const { return input_alphabet_; }

    bool is_final(const std::string& state) const;
    std::optional<std::size_t> transition_index(const std::string& id) const;

    // -- interned view --------------------------------------------------------
    int state_id(const std::string& name) const;
    int stack_id(const std::string& name) const;
    int initial_state_id() const { return initial_state_id_; }
    int initial_symbol_id() const { return initial_symbol_id_; }
    bool final_id(int state) const { return final_flags_[static_cast<std::size_t>(state)]; }
    int from_id(std::size_t t) const { return from_ids_[t]; }
    int to_id(std::size_t t) const { return to_ids_[t]; }
    int pop_id(std::size_t t) const { return pop_ids_[t]; }
    /// -1 = epsilon, otherwise an index into input_alphabet().
    int label_id(std::size_t t) const { return label_ids_[t]; }
    const std::vector<int>& push_ids(std::size_t t) const { return push_ids_[t]; }
    /// Transitions with the given source state and stack top, declaration order.
    const std::vector<std::size_t>& transitions_from(int state, int stack_symbol) const;

    /// Admissible lower bound on input consumed while popping the symbol.
    std::size_t min_consumption(int stack_symbol) const {
        return min_consume_[static_cast<std::size_t>(stack_symbol)];
    }

private:
    DomainPtr domain_;
    std::vector<std::string> states_;
    std::vector<std::string> stack_;
    std::string initial_state_;
    std::string initial_symbol_;
    std::vector<std::string> finals_;
    std::vector<Transition> transitions_;
    std::vector<std::string> input_alphabet_;

    std::map<std::string, int> state_ids_;
    std::map<std::string, int> stack_ids_;
    std::map<std::string, int> input_ids_;
    int initial_state_id_ = 0;
    int initial_symbol_id_ = 0;
    std::vector<bool> final_flags_;
    std::vector<int> from_ids_, to_ids_, pop_ids_, label_ids_;
    std::vector<std::vector<int>> push_ids_;
    std::vector<std::vector<std::size_t>> by_source_; // state * |stack| + symbol
    std::vector<std::size_t> min_consume_;
};

/// A run from (initial state, word, initial symbol) to (final state, eps, eps).
struct Computation {
    std::vector<std::size_t> steps; // transition indexes
    Word word;
    std::string final_state;
};

std::vector<std::string> computation_ids(const WeightedPushdown& m, const Computation& c);

struct Configuration {
    std::string state;
    Word remaining_input;
    std::vector<std::string> stack; // stack[0] is the top
};

/// One step of the computation relation. Errors when the transition does not
/// apply to the configuration.
Configuration pda_step(const WeightedPushdown& m, const Configuration& c,
                       const std::string& transition_id);

/// All accepting computations on the word, ordered by trying transitions in
/// declaration order. Throws DivergenceError past the budget.
std::vector<Computation> enumerate_computations(const WeightedPushdown& m, const Word& word,
                                                std::size_t budget = kDefaultEnumerationBudget);

/// Valuation of the transition weights along the computation; replays it and
/// errors when invalid.
Weight computation_weight(const WeightedPushdown& m, const Computation& c);

/// Sum over all accepting computations; zero when there are none.
Weight evaluate(const WeightedPushdown& m, const Word& word,
                std::size_t budget = kDefaultEnumerationBudget);

/// Every epsilon transition pushes at least two symbols.
bool is_proper(const WeightedPushdown& m);

/// No transition enters the initial state, exactly one final state, and no
/// transition leaves it.
bool is_state_normalized(const WeightedPushdown& m);

/// Equivalent state-normalized machine: fresh initial state and stack
/// bottom, one unit-weight drain transition per old final state.
WeightedPushdown state_normalize(const WeightedPushdown& m);

/// Equivalent machine with a single state; stack symbols are (state, symbol,
/// state) triples rendered "q^g^p". Requires a state-normalized input.
/// Unreachable triple symbols are pruned afterwards unless disabled.
WeightedPushdown to_one_state(const WeightedPushdown& m, bool prune_unreachable = true);

/// Machine whose behavior is the pointwise sum; both inputs must be state
/// normalized and share the weight domain. States and stack symbols other
/// than the shared initial ones are kept disjoint by renaming.
WeightedPushdown sum_wpda(const WeightedPushdown& m1, const WeightedPushdown& m2);

/// Calls the visitor for every accepting computation whose consumed word has
/// length <= max_len. The visitor returns false to stop early.
void for_each_computation_up_to(const WeightedPushdown& m, std::size_t max_len,
                                const std::function<bool(const Word&, const std::vector<std::size_t>&)>& visit,
                                std::size_t budget = kDefaultEnumerationBudget);

SupportMap generate_support(const WeightedPushdown& m, std::size_t max_len,
                            std::size_t budget = kDefaultEnumerationBudget);

std::map<Word, std::size_t, ShortlexLess> generate_words(const WeightedPushdown& m, std::size_t max_len,
                                                         std::size_t budget = kDefaultEnumerationBudget);

bool membership(const WeightedPushdown& m, const Word& word,
                std::size_t budget = kDefaultEnumerationBudget);

/// The machine's quantitative behavior as a Series (with support probe).
Series pushdown_series(const WeightedPushdown& m);

} // namespace qcfl

#endif
