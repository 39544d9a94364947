#include "qcfl/dfa.hpp"

#include <algorithm>
#include <set>

#include "qcfl/errors.hpp"

namespace qcfl {

Dfa::Dfa(std::vector<std::string> alphabet,
         std::vector<std::string> states,
         std::string initial,
         std::vector<std::string> accepting,
         std::vector<Edge> edges)
    : alphabet_(std::move(alphabet)),
      states_(std::move(states)),
      initial_(std::move(initial)),
      accepting_(std::move(accepting)),
      edges_(std::move(edges)) {
    for (std::size_t i = 0; i < alphabet_.size(); ++i)
        if (!letter_ids_.emplace(alphabet_[i], static_cast<int>(i)).second)
            throw ValidationError("alphabet letter declared twice: " + alphabet_[i]);
    for (std::size_t i = 0; i < states_.size(); ++i)
        if (!state_ids_.emplace(states_[i], static_cast<int>(i)).second)
            throw ValidationError("automaton state declared twice: " + states_[i]);

    auto init = state_ids_.find(initial_);
    if (init == state_ids_.end()) throw ValidationError("undeclared initial automaton state: " + initial_);
    initial_id_ = init->second;

    accepting_flags_.assign(states_.size(), false);
    for (const auto& a : accepting_) {
        auto it = state_ids_.find(a);
        if (it == state_ids_.end()) throw ValidationError("undeclared accepting state: " + a);
        accepting_flags_[static_cast<std::size_t>(it->second)] = true;
    }

    delta_.assign(states_.size() * alphabet_.size(), -1);
    for (const auto& e : edges_) {
        auto from = state_ids_.find(e.from);
        auto to = state_ids_.find(e.to);
        auto letter = letter_ids_.find(e.letter);
        if (from == state_ids_.end() || to == state_ids_.end())
            throw ValidationError("edge mentions an undeclared state: " + e.from + " or " + e.to);
        if (letter == letter_ids_.end())
            throw ValidationError("edge mentions an undeclared letter: " + e.letter);
        int& slot = delta_[static_cast<std::size_t>(from->second) * alphabet_.size() +
                           static_cast<std::size_t>(letter->second)];
        if (slot != -1)
            throw ValidationError("automaton is not deterministic: two edges from " + e.from +
                                  " on " + e.letter);
        slot = to->second;
    }

    // complete with an implicit dead state when needed
    bool incomplete = std::any_of(delta_.begin(), delta_.end(), [](int t) { return t == -1; });
    if (incomplete) {
        std::set<std::string> taken(states_.begin(), states_.end());
        std::string dead = "_dead";
        while (taken.count(dead)) dead += "'";
        int dead_id = static_cast<int>(states_.size());
        states_.push_back(dead);
        state_ids_.emplace(dead, dead_id);
        accepting_flags_.push_back(false);
        for (int& t : delta_)
            if (t == -1) t = dead_id;
        for (std::size_t l = 0; l < alphabet_.size(); ++l) delta_.push_back(dead_id);
        for (std::size_t l = 0; l < alphabet_.size(); ++l)
            edges_.push_back({dead, alphabet_[l], dead});
        // record the completion edges for serialization fidelity: edges from
        // pre-existing states to the dead state stay implicit
    }
}

bool Dfa::has_letter(const std::string& letter) const {
    return letter_ids_.count(letter) > 0;
}

const std::string& Dfa::next(const std::string& state, const std::string& letter) const {
    return states_[static_cast<std::size_t>(next_id(state_id(state), letter_id(letter)))];
}

bool Dfa::is_accepting(const std::string& state) const {
    return accepting_flags_[static_cast<std::size_t>(state_id(state))];
}

bool Dfa::accepts(const Word& w) const {
    int q = initial_id_;
    for (const auto& s : w) {
        auto it = letter_ids_.find(s);
        if (it == letter_ids_.end()) return false;
        q = next_id(q, it->second);
    }
    return accepting_flags_[static_cast<std::size_t>(q)];
}

int Dfa::state_id(const std::string& name) const {
    auto it = state_ids_.find(name);
    if (it == state_ids_.end()) throw ValidationError("undeclared automaton state: " + name);
    return it->second;
}

int Dfa::letter_id(const std::string& letter) const {
    auto it = letter_ids_.find(letter);
    if (it == letter_ids_.end()) throw ValidationError("letter outside the automaton alphabet: " + letter);
    return it->second;
}

} // namespace qcfl
