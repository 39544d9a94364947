#ifndef QCFL_CHOMSKY_HPP
#define QCFL_CHOMSKY_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qcfl/dfa.hpp"
#include "qcfl/grammar.hpp"
#include "qcfl/pushdown.hpp"
#include "qcfl/series.hpp"

namespace qcfl {

/// A series whose support is empty or a single word.
struct Monome {
    Weight weight;
    Word word;
};

/// A letter-to-weighted-monome map h: each source letter goes to a weight
/// and at most one target letter. Extends to words by valuating the weights
/// and concatenating the letters.
class AlphabeticMorphism {
public:
    AlphabeticMorphism(DomainPtr domain,
                       std::vector<std::string> source_alphabet,
                       std::vector<std::string> target_alphabet,
                       std::map<std::string, Monome> images);

    const DomainPtr& domain() const { return domain_; }
    const std::vector<std::string>& source_alphabet() const { return source_; }
    const std::vector<std::string>& target_alphabet() const { return target_; }
    const Monome& image(const std::string& letter) const;
    const std::map<std::string, Monome>& images() const { return images_; }

private:
    DomainPtr domain_;
    std::vector<std::string> source_;
    std::vector<std::string> target_;
    std::map<std::string, Monome> images_;
};

/// Weighted image of a word: valuation of the letter weights, concatenation
/// of the letter images. The empty word maps to (one, epsilon).
Monome apply_morphism_word(const AlphabeticMorphism& h, const Word& v);

/// Bracket pairs: a base set Y and its barred copies; bar(y) = y + "~".
class BracketAlphabet {
public:
    explicit BracketAlphabet(std::vector<std::string> base);

    static std::string bar(const std::string& y) { return y + "~"; }
    const std::vector<std::string>& base() const { return base_; }
    /// Y followed by the barred copies.
    std::vector<std::string> all() const;
    bool is_opener(const std::string& letter) const;
    bool is_closer(const std::string& letter) const;
    /// The base symbol of a closer.
    std::string unbar(const std::string& letter) const;

private:
    std::vector<std::string> base_;
};

/// Grammar for the well-nested bracket words over Y: Z -> y Z y~, Z -> Z Z,
/// Z -> eps. Boolean weights.
WeightedGrammar dyck_grammar(const std::vector<std::string>& base);

/// Equivalent unambiguous form: Z -> A Z, Z -> eps, A -> y Z y~.
WeightedGrammar dyck_grammar_unambiguous(const std::vector<std::string>& base);

/// Word-level membership oracle for the bracket language (counter based,
/// independent of any grammar).
bool dyck_member(const BracketAlphabet& brackets, const Word& w);

struct ProductionGrammar {
    /// Unambiguous boolean grammar over the production-id alphabet whose
    /// words are exactly the derivation encodings of the source grammar.
    WeightedGrammar grammar;
    /// Maps each production id to (production weight, head terminal).
    AlphabeticMorphism morphism;
};

/// Head normal form is applied internally.
ProductionGrammar production_grammar(const WeightedGrammar& g);

struct CsEncoding {
    BracketAlphabet brackets;
    /// Local control language: legal first/last symbols and bigrams of
    /// derivation-tree encodings.
    Dfa control;
    /// Bracket letter -> grammar terminal, "" = epsilon. Only slot-1 openers
    /// map to a (possibly empty) head terminal.
    std::map<std::string, std::string> letter_map;
    /// Opener names per production index: slots[p][i-1] is the slot-i opener.
    std::vector<std::vector<std::string>> slots;
};

/// Slot-bracket encoding of an unambiguous head-normal-form grammar: the
/// images of the well-nested control-conformant bracket words are exactly
/// the grammar's words, with one bracket word per derivation.
CsEncoding cs_encode_classical(const WeightedGrammar& g);

/// The bracket word encoding one derivation: openers/closers around each
/// child slot, in leftmost order.
Word cs_encode_derivation(const WeightedGrammar& hnf_grammar, const CsEncoding& enc,
                          const Derivation& d);

/// A bracket alphabet, a control automaton, and a weighted morphism whose
/// image of the well-nested control-conformant words is a series.
struct CSDecomposition {
    BracketAlphabet brackets;
    Dfa control;
    AlphabeticMorphism morphism;
};

/// Decomposes the grammar's series: brackets and control from the
/// slot-bracket encoding of the production grammar, morphism composed from
/// the letter map and the production weights.
CSDecomposition decompose(const WeightedGrammar& g);

/// Epsilon-free grammar for L(g) minus the empty word; requires an
/// unambiguous input (probe-checked) and preserves unambiguity.
WeightedGrammar eps_eliminate_unambiguous(const WeightedGrammar& g,
                                          std::size_t probe_len = 5);

/// Product grammar for L(g) intersected with the automaton's language, built
/// on (state, nonterminal, state) triples; deterministic control preserves
/// unambiguity. The input must be epsilon-free; when `readd_epsilon` is set
/// a fresh start symbol with an epsilon production is added on top.
WeightedGrammar regular_intersect_unambiguous(const WeightedGrammar& g, const Dfa& dfa,
                                              bool readd_epsilon = false);

/// Machine computing the weighted morphism image of the base machine's
/// language. The base machine's weights are ignored; its transition labels
/// must lie in the morphism's source alphabet. Unless the weight domain is
/// complete and completely idempotent, the base must be unambiguous and the
/// caller asserts this via `base_unambiguous`.
WeightedPushdown morphism_pda(const WeightedPushdown& base, const AlphabeticMorphism& h,
                              bool base_unambiguous);

/// Machine for the decomposition's series: unambiguous bracket grammar,
/// epsilon elimination, control intersection, conversion to a machine, then
/// the morphism construction.
WeightedPushdown compose(const CSDecomposition& dec);

} // namespace qcfl

#endif
