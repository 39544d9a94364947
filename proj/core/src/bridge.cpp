#include "qcfl/bridge.hpp"

#include <algorithm>
#include <tuple>
#include <map>
#include <set>

#include "qcfl/errors.hpp"

namespace qcfl {

WeightedPushdown grammar_to_pda(const WeightedGrammar& g) {
    WeightedGrammar h = to_head_normal_form(g);
    const std::string star = "*";
    std::vector<WeightedPushdown::Transition> transitions;
    transitions.reserve(h.productions().size());
    for (const auto& p : h.productions()) {
        WeightedPushdown::Transition t;
        t.id = p.id;
        t.from = star;
        t.to = star;
        t.pop = p.lhs;
        if (!p.rhs.empty() && h.is_terminal(p.rhs.front())) {
            t.label = p.rhs.front();
            t.push.assign(p.rhs.begin() + 1, p.rhs.end());
        } else {
            t.label = "";
            t.push = p.rhs;
        }
        t.weight = p.weight;
        transitions.push_back(std::move(t));
    }
    return WeightedPushdown(h.domain(), {star}, h.nonterminals(), star, h.start(), {star},
                            std::move(transitions));
}

WeightedGrammar pda_to_grammar(const WeightedPushdown& m) {
    const bool directly_transcribable =
        m.states().size() == 1 && m.final_states().size() == 1 &&
        m.final_states().front() == m.states().front();
    if (!directly_transcribable) {
        return pda_to_grammar(to_one_state(state_normalize(m)));
    }

    std::vector<WeightedGrammar::Production> productions;
    productions.reserve(m.transitions().size());
    std::vector<std::string> terminals;
    std::set<std::string> seen_terminals;
    for (const auto& t : m.transitions()) {
        if (!t.label.empty() && seen_terminals.insert(t.label).second) terminals.push_back(t.label);
        WeightedGrammar::Production p;
        p.id = t.id;
        p.lhs = t.pop;
        if (!t.label.empty()) p.rhs.push_back(t.label);
        p.rhs.insert(p.rhs.end(), t.push.begin(), t.push.end());
        p.weight = t.weight;
        productions.push_back(std::move(p));
    }
    return WeightedGrammar(m.domain(), std::move(terminals), m.stack_alphabet(), m.initial_symbol(),
                           std::move(productions));
}

namespace {

struct TransitionKey {
    std::string label;
    std::string lhs;
    std::vector<std::string> tail;
    std::string weight;
    auto tie() const { return std::tie(label, lhs, tail, weight); }
    bool operator<(const TransitionKey& o) const { return tie() < o.tie(); }
    bool operator==(const TransitionKey& o) const { return tie() == o.tie(); }
    std::string str() const {
        std::string out = lhs + " -> " + (label.empty() ? "<eps>" : label);
        for (const auto& s : tail) out += " " + s;
        return out + " @ " + weight;
    }
};

} // namespace

RelatedCheck related_check(const WeightedPushdown& m, const WeightedGrammar& g) {
    RelatedCheck result;
    auto violation = [&result](std::string text) {
        result.related = false;
        result.violations.push_back(std::move(text));
    };

    if (m.states().size() != 1)
        violation("machine has " + std::to_string(m.states().size()) + " states, expected one");
    if (m.final_states().size() != 1 ||
        (m.states().size() == 1 && m.final_states().front() != m.states().front()))
        violation("machine must accept in its single state");

    for (const auto& p : g.productions()) {
        bool head_ok = p.rhs.empty() ||
                       ((g.is_terminal(p.rhs.front()) || g.is_nonterminal(p.rhs.front())) &&
                        std::all_of(p.rhs.begin() + 1, p.rhs.end(),
                                    [&g](const std::string& s) { return g.is_nonterminal(s); }));
        if (!head_ok) {
            violation("grammar is not in head normal form at production " + p.id);
            break;
        }
    }

    std::set<std::string> stack_set(m.stack_alphabet().begin(), m.stack_alphabet().end());
    std::set<std::string> nt_set(g.nonterminals().begin(), g.nonterminals().end());
    if (stack_set != nt_set)
        violation("stack alphabet and nonterminal set differ");
    if (m.initial_symbol() != g.start())
        violation("initial stack symbol " + m.initial_symbol() + " differs from start symbol " +
                  g.start());

    std::multiset<TransitionKey> from_machine;
    for (const auto& t : m.transitions())
        from_machine.insert({t.label, t.pop, t.push, t.weight.str()});
    std::multiset<TransitionKey> from_grammar;
    for (const auto& p : g.productions()) {
        TransitionKey key;
        key.lhs = p.lhs;
        if (!p.rhs.empty() && g.is_terminal(p.rhs.front())) {
            key.label = p.rhs.front();
            key.tail.assign(p.rhs.begin() + 1, p.rhs.end());
        } else {
            key.tail = p.rhs;
        }
        key.weight = p.weight.str();
        from_grammar.insert(std::move(key));
    }
    if (from_machine != from_grammar) {
        std::vector<TransitionKey> only_m, only_g;
        std::set_difference(from_machine.begin(), from_machine.end(), from_grammar.begin(),
                            from_grammar.end(), std::back_inserter(only_m));
        std::set_difference(from_grammar.begin(), from_grammar.end(), from_machine.begin(),
                            from_machine.end(), std::back_inserter(only_g));
        for (const auto& k : only_m) violation("transition without matching production: " + k.str());
        for (const auto& k : only_g) violation("production without matching transition: " + k.str());
    }

    return result;
}

} // namespace qcfl
