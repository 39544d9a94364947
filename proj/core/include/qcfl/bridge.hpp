#ifndef QCFL_BRIDGE_HPP
#define QCFL_BRIDGE_HPP

#include <string>
#include <vector>

#include "qcfl/grammar.hpp"
#include "qcfl/pushdown.hpp"

namespace qcfl {

/// One-state machine whose transitions transcribe the head-normal-form
/// productions of the grammar: stack alphabet = nonterminals, initial stack
/// symbol = start symbol, weights carried over. Evaluation agrees with the
/// grammar on every word.
WeightedPushdown grammar_to_pda(const WeightedGrammar& g);

/// Head-normal-form grammar transcribing the machine's one-state image
/// (state normalization and the triple construction are applied first when
/// needed). Behavior is preserved.
WeightedGrammar pda_to_grammar(const WeightedPushdown& m);

struct RelatedCheck {
    bool related = true;
    std::vector<std::string> violations;
};

/// Checks the transcription conditions between a one-state machine and a
/// head-normal-form grammar: equal stack alphabet/nonterminals, equal
/// initial symbols, transition/production bijection with equal weights.
RelatedCheck related_check(const WeightedPushdown& m, const WeightedGrammar& g);

} // namespace qcfl

#endif
