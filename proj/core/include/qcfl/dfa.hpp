#ifndef QCFL_DFA_HPP
#define QCFL_DFA_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qcfl/word.hpp"

namespace qcfl {

/// A deterministic finite automaton, completed at construction: letters
/// without an explicit edge go to an implicit dead state. Duplicate edges
/// for the same (state, letter) raise ValidationError.
class Dfa {
public:
    struct Edge {
        std::string from;
        std::string letter;
        std::string to;
    };

    Dfa(std::vector<std::string> alphabet,
        std::vector<std::string> states,
        std::string initial,
        std::vector<std::string> accepting,
        std::vector<Edge> edges);

    const std::vector<std::string>& alphabet() const { return alphabet_; }
    /// Includes the dead state (last) when one was added for completion.
    const std::vector<std::string>& states() const { return states_; }
    const std::string& initial() const { return initial_; }
    const std::vector<std::string>& accepting() const { return accepting_; }
    const std::vector<Edge>& edges() const { return edges_; }

    bool has_letter(const std::string& letter) const;
    const std::string& next(const std::string& state, const std::string& letter) const;
    bool is_accepting(const std::string& state) const;
    bool accepts(const Word& w) const;
    bool accepts_epsilon() const { return is_accepting(initial_); }

    int state_id(const std::string& name) const;
    int letter_id(const std::string& letter) const;
    int next_id(int state, int letter) const {
        return delta_[static_cast<std::size_t>(state) * alphabet_.size() + static_cast<std::size_t>(letter)];
    }
    bool accepting_id(int state) const { return accepting_flags_[static_cast<std::size_t>(state)]; }
    int initial_id() const { return initial_id_; }

private:
    std::vector<std::string> alphabet_;
    std::vector<std::string> states_;
    std::string initial_;
    std::vector<std::string> accepting_;
    std::vector<Edge> edges_;

    std::map<std::string, int> state_ids_;
    std::map<std::string, int> letter_ids_;
    std::vector<int> delta_;
    std::vector<bool> accepting_flags_;
    int initial_id_ = 0;
};

} // namespace qcfl

#endif
