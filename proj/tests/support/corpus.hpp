#ifndef QCFL_TESTS_CORPUS_HPP
#define QCFL_TESTS_CORPUS_HPP

#include <algorithm>
#include <string>
#include <vector>

#include <qcfl/domain.hpp>
#include <qcfl/grammar.hpp>
#include <qcfl/pushdown.hpp>

namespace qcfl::testing {

/// The four domains every cross-construction test runs over.
inline std::vector<DomainPtr> core_domains() {
    return {boolean_domain(), nat_domain(), tropical_domain(), avgsup_domain()};
}

/// Maps a small integer onto a weight of the domain. Booleans collapse to
/// true, chain lattices clamp onto their elements, everything else carries
/// the integer.
inline Weight w(const DomainPtr& d, long k) {
    const std::string& n = d->name();
    if (n == "boolean") return Weight::boolean(true);
    if (n == "nat") return Weight::nat(static_cast<unsigned long>(k));
    if (n.rfind("chain ", 0) == 0) {
        long den = std::stol(n.substr(6)) - 1;
        return Weight::rational(std::min(k, den), den);
    }
    return Weight::rational(k);
}

struct NamedGrammar {
    std::string name;
    WeightedGrammar grammar;
};

/// S -> a S b | eps over {a, b}.
inline WeightedGrammar anbn_grammar(const DomainPtr& d) {
    return WeightedGrammar(d, {"a", "b"}, {"S"}, "S",
                           {{"p1", "S", {"a", "S", "b"}, w(d, 2)},
                            {"p2", "S", {}, w(d, 3)}});
}

/// Arithmetic expressions over +, *, parentheses and the variable x; the
/// two operator productions carry the costs n and m, the remaining ones the
/// domain unit (which the valuation deletes).
inline WeightedGrammar expr_grammar(const DomainPtr& d, long n = 3, long m = 6) {
    return WeightedGrammar(d, {"+", "*", "(", ")", "x"}, {"E"}, "E",
                           {{"p1", "E", {"E", "+", "E"}, w(d, n)},
                            {"p2", "E", {"E", "*", "E"}, w(d, m)},
                            {"p3", "E", {"(", "E", ")"}, d->one()},
                            {"p4", "E", {"x"}, d->one()}});
}

/// Stratified expression grammar: unambiguous, same language and the same
/// operator costs as expr_grammar; every non-operator production carries the
/// unit.
inline WeightedGrammar expr_unambiguous_grammar(const DomainPtr& d, long n = 3, long m = 6) {
    return WeightedGrammar(d, {"+", "*", "(", ")", "x"}, {"E", "T", "F"}, "E",
                           {{"p1", "E", {"E", "+", "T"}, w(d, n)},
                            {"p2", "E", {"T"}, d->one()},
                            {"p3", "T", {"T", "*", "F"}, w(d, m)},
                            {"p4", "T", {"F"}, d->one()},
                            {"p5", "F", {"(", "E", ")"}, d->one()},
                            {"p6", "F", {"x"}, d->one()}});
}

/// S -> S S | a: the word a^(n+1) has Catalan(n) leftmost derivations.
inline WeightedGrammar catalan_grammar(const DomainPtr& d) {
    return WeightedGrammar(d, {"a"}, {"S"}, "S",
                           {{"p1", "S", {"S", "S"}, w(d, 1)},
                            {"p2", "S", {"a"}, w(d, 1)}});
}

/// Unambiguous bracket-pair grammar over {a, b}: Z -> A Z | eps, A -> a Z b.
inline WeightedGrammar nested_pairs_grammar(const DomainPtr& d) {
    return WeightedGrammar(d, {"a", "b"}, {"Z", "A"}, "Z",
                           {{"p1", "Z", {"A", "Z"}, w(d, 2)},
                            {"p2", "Z", {}, w(d, 1)},
                            {"p3", "A", {"a", "Z", "b"}, w(d, 4)}});
}

/// Palindromes over {a, b}, one derivation each.
inline WeightedGrammar palindrome_grammar(const DomainPtr& d) {
    return WeightedGrammar(d, {"a", "b"}, {"S"}, "S",
                           {{"p1", "S", {"a", "S", "a"}, w(d, 2)},
                            {"p2", "S", {"b", "S", "b"}, w(d, 3)},
                            {"p3", "S", {"a"}, w(d, 1)},
                            {"p4", "S", {"b"}, w(d, 4)},
                            {"p5", "S", {}, w(d, 5)}});
}

/// All words over {a, b}, right-linear, unambiguous.
inline WeightedGrammar all_words_grammar(const DomainPtr& d) {
    return WeightedGrammar(d, {"a", "b"}, {"S"}, "S",
                           {{"p1", "S", {"a", "S"}, w(d, 2)},
                            {"p2", "S", {"b", "S"}, w(d, 3)},
                            {"p3", "S", {}, w(d, 1)}});
}

/// The word a has two derivations through distinct chain productions.
inline WeightedGrammar two_paths_grammar(const DomainPtr& d) {
    return WeightedGrammar(d, {"a"}, {"S", "A", "B"}, "S",
                           {{"p1", "S", {"A"}, w(d, 1)},
                            {"p2", "S", {"B"}, w(d, 2)},
                            {"p3", "A", {"a"}, w(d, 3)},
                            {"p4", "B", {"a"}, w(d, 4)}});
}

inline std::vector<NamedGrammar> fixture_grammars(const DomainPtr& d) {
    return {{"anbn", anbn_grammar(d)},        {"expr", expr_grammar(d)},
            {"expr-u", expr_unambiguous_grammar(d)}, {"catalan", catalan_grammar(d)},
            {"nested", nested_pairs_grammar(d)}, {"palin", palindrome_grammar(d)},
            {"all-words", all_words_grammar(d)}, {"two-paths", two_paths_grammar(d)}};
}

struct NamedPda {
    std::string name;
    WeightedPushdown machine;
};

/// a^n b^n for n >= 1, two states, no epsilon moves.
inline WeightedPushdown anbn_pda(const DomainPtr& d) {
    return WeightedPushdown(d, {"q0", "q1"}, {"Z", "A"}, "q0", "Z", {"q1"},
                            {{"t1", "q0", "a", "Z", "q0", {"A"}, w(d, 2)},
                             {"t2", "q0", "a", "A", "q0", {"A", "A"}, w(d, 2)},
                             {"t3", "q0", "b", "A", "q1", {}, w(d, 1)},
                             {"t4", "q1", "b", "A", "q1", {}, w(d, 1)}});
}

/// Accepts exactly "ab" through an epsilon push.
inline WeightedPushdown eps_push_pda(const DomainPtr& d) {
    return WeightedPushdown(d, {"q0", "q1"}, {"Z", "A", "B"}, "q0", "Z", {"q1"},
                            {{"t1", "q0", "", "Z", "q0", {"A", "B"}, w(d, 2)},
                             {"t2", "q0", "a", "A", "q0", {}, w(d, 3)},
                             {"t3", "q0", "b", "B", "q1", {}, w(d, 1)}});
}

/// Accepts "a" in one final state and "ab" in another.
inline WeightedPushdown two_final_pda(const DomainPtr& d) {
    return WeightedPushdown(d, {"q0", "q1", "q2"}, {"Z", "B"}, "q0", "Z", {"q1", "q2"},
                            {{"t1", "q0", "a", "Z", "q1", {}, w(d, 2)},
                             {"t2", "q0", "a", "Z", "q0", {"B"}, w(d, 3)},
                             {"t3", "q0", "b", "B", "q2", {}, w(d, 4)}});
}

/// The word a has two accepting computations.
inline WeightedPushdown ambiguous_pda(const DomainPtr& d) {
    return WeightedPushdown(d, {"q0", "q1"}, {"Z"}, "q0", "Z", {"q1"},
                            {{"t1", "q0", "a", "Z", "q1", {}, w(d, 2)},
                             {"t2", "q0", "a", "Z", "q1", {}, w(d, 5)}});
}

inline std::vector<NamedPda> fixture_pdas(const DomainPtr& d) {
    return {{"anbn", anbn_pda(d)},
            {"eps-push", eps_push_pda(d)},
            {"two-final", two_final_pda(d)},
            {"ambiguous", ambiguous_pda(d)}};
}

} // namespace qcfl::testing

#endif
