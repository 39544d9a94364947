#include "qcfl/pushdown.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <set>
#include <sstream>

#include "qcfl/errors.hpp"

namespace qcfl {

namespace {

constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();

constexpr std::size_t kMaxSearchDepth = 10000;

struct DepthGuard {
    explicit DepthGuard(std::size_t& depth) : depth_(depth) { ++depth_; }
    ~DepthGuard() { --depth_; }
    std::size_t& depth_;
};

std::string join(const std::vector<std::string>& parts, const char* sep = " ") {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
    std::string name = base;
    while (taken.count(name)) name += "'";
    return name;
}

// names must survive the text format: no whitespace and none of , : [ ]
void require_token(const std::string& name, const char* what) {
    if (name.empty()) throw ValidationError(std::string(what) + " must not be empty");
    for (char c : name)
        if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == ':' || c == '[' ||
            c == ']')
            throw ValidationError(std::string(what) + " contains a reserved character: " + name);
}

} // namespace

WeightedPushdown::WeightedPushdown(DomainPtr domain,
                                   std::vector<std::string> states,
                                   std::vector<std::string> stack_alphabet,
                                   std::string initial_state,
                                   std::string initial_symbol,
                                   std::vector<std::string> final_states,
                                   std::vector<Transition> transitions)
    : domain_(std::move(domain)),
      states_(std::move(states)),
      stack_(std::move(stack_alphabet)),
      initial_state_(std::move(initial_state)),
      initial_symbol_(std::move(initial_symbol)),
      finals_(std::move(final_states)),
      transitions_(std::move(transitions)) {
    if (!domain_) throw ValidationError("pushdown machine needs a weight domain");

    for (const auto& q : states_) require_token(q, "state name");
    for (const auto& g : stack_) require_token(g, "stack symbol");
    for (const auto& t : transitions_) {
        require_token(t.id, "transition id");
        if (!t.label.empty()) require_token(t.label, "input symbol");
    }
    for (std::size_t i = 0; i < states_.size(); ++i)
        if (!state_ids_.emplace(states_[i], static_cast<int>(i)).second)
            throw ValidationError("state declared twice: " + states_[i]);
    for (std::size_t i = 0; i < stack_.size(); ++i)
        if (!stack_ids_.emplace(stack_[i], static_cast<int>(i)).second)
            throw ValidationError("stack symbol declared twice: " + stack_[i]);

    auto qi = state_ids_.find(initial_state_);
    if (qi == state_ids_.end()) throw ValidationError("undeclared initial state: " + initial_state_);
    initial_state_id_ = qi->second;
    auto gi = stack_ids_.find(initial_symbol_);
    if (gi == stack_ids_.end()) throw ValidationError("undeclared initial stack symbol: " + initial_symbol_);
    initial_symbol_id_ = gi->second;

    final_flags_.assign(states_.size(), false);
    for (const auto& f : finals_) {
        auto it = state_ids_.find(f);
        if (it == state_ids_.end()) throw ValidationError("undeclared final state: " + f);
        final_flags_[static_cast<std::size_t>(it->second)] = true;
    }

    std::set<std::string> ids;
    by_source_.assign(states_.size() * stack_.size(), {});
    for (std::size_t t = 0; t < transitions_.size(); ++t) {
        const Transition& tr = transitions_[t];
        if (!ids.insert(tr.id).second) throw ValidationError("duplicate transition id: " + tr.id);
        auto from = state_ids_.find(tr.from);
        auto to = state_ids_.find(tr.to);
        auto pop = stack_ids_.find(tr.pop);
        if (from == state_ids_.end() || to == state_ids_.end())
            throw ValidationError("transition " + tr.id + ": undeclared state");
        if (pop == stack_ids_.end())
            throw ValidationError("transition " + tr.id + ": undeclared stack symbol " + tr.pop);
        from_ids_.push_back(from->second);
        to_ids_.push_back(to->second);
        pop_ids_.push_back(pop->second);
        std::vector<int> push;
        push.reserve(tr.push.size());
        for (const auto& s : tr.push) {
            auto it = stack_ids_.find(s);
            if (it == stack_ids_.end())
                throw ValidationError("transition " + tr.id + ": undeclared stack symbol " + s);
            push.push_back(it->second);
        }
        push_ids_.push_back(std::move(push));
        if (tr.label.empty()) {
            label_ids_.push_back(-1);
        } else {
            auto it = input_ids_.find(tr.label);
            if (it == input_ids_.end()) {
                it = input_ids_.emplace(tr.label, static_cast<int>(input_alphabet_.size())).first;
                input_alphabet_.push_back(tr.label);
            }
            label_ids_.push_back(it->second);
        }
        if (!domain_->contains(tr.weight))
            throw DomainMismatchError("transition " + tr.id + ": weight " + tr.weight.str() +
                                      " is outside domain " + domain_->name());
        by_source_[static_cast<std::size_t>(from->second) * stack_.size() +
                   static_cast<std::size_t>(pop->second)]
            .push_back(t);
    }

    // per-symbol lower bound on the input consumed while popping it (state
    // structure relaxed away); admissible for search pruning
    min_consume_.assign(stack_.size(), kInf);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t t = 0; t < transitions_.size(); ++t) {
            std::size_t total = label_ids_[t] >= 0 ? 1 : 0;
            bool feasible = true;
            for (int sym : push_ids_[t]) {
                std::size_t c = min_consume_[static_cast<std::size_t>(sym)];
                if (c == kInf) {
                    feasible = false;
                    break;
                }
                total += c;
            }
            if (!feasible) continue;
            std::size_t g = static_cast<std::size_t>(pop_ids_[t]);
            if (total < min_consume_[g]) {
                min_consume_[g] = total;
                changed = true;
            }
        }
    }
}

bool WeightedPushdown::is_final(const std::string& state) const {
    auto it = state_ids_.find(state);
    return it != state_ids_.end() && final_flags_[static_cast<std::size_t>(it->second)];
}

std::optional<std::size_t> WeightedPushdown::transition_index(const std::string& id) const {
    for (std::size_t t = 0; t < transitions_.size(); ++t)
        if (transitions_[t].id == id) return t;
    return std::nullopt;
}

int WeightedPushdown::state_id(const std::string& name) const {
    auto it = state_ids_.find(name);
    if (it == state_ids_.end()) throw ValidationError("undeclared state: " + name);
    return it->second;
}

int WeightedPushdown::stack_id(const std::string& name) const {
    auto it = stack_ids_.find(name);
    if (it == stack_ids_.end()) throw ValidationError("undeclared stack symbol: " + name);
    return it->second;
}

const std::vector<std::size_t>& WeightedPushdown::transitions_from(int state, int stack_symbol) const {
    return by_source_[static_cast<std::size_t>(state) * stack_.size() +
                      static_cast<std::size_t>(stack_symbol)];
}

std::vector<std::string> computation_ids(const WeightedPushdown& m, const Computation& c) {
    std::vector<std::string> out;
    out.reserve(c.steps.size());
    for (std::size_t t : c.steps) out.push_back(m.transitions()[t].id);
    return out;
}

Configuration pda_step(const WeightedPushdown& m, const Configuration& c,
                       const std::string& transition_id) {
    auto idx = m.transition_index(transition_id);
    if (!idx) throw ValidationError("unknown transition id: " + transition_id);
    const auto& t = m.transitions()[*idx];
    if (c.state != t.from)
        throw ValidationError("transition " + transition_id + " starts in " + t.from +
                              ", configuration is in " + c.state);
    if (c.stack.empty()) throw ValidationError("stack is empty; no transition applies");
    if (c.stack.front() != t.pop)
        throw ValidationError("transition " + transition_id + " pops " + t.pop + ", stack top is " +
                              c.stack.front());
    Configuration out;
    out.state = t.to;
    out.remaining_input = c.remaining_input;
    if (!t.label.empty()) {
        if (out.remaining_input.empty() || out.remaining_input.front() != t.label)
            throw ValidationError("transition " + transition_id + " reads " + t.label +
                                  ", which is not the next input symbol");
        out.remaining_input.erase(out.remaining_input.begin());
    }
    out.stack.assign(t.push.begin(), t.push.end());
    out.stack.insert(out.stack.end(), c.stack.begin() + 1, c.stack.end());
    return out;
}

namespace {

/// Depth-first search over configurations, in transition declaration order.
/// Prunes a branch as soon as the least input needed to drain the stack
/// exceeds what is left.
class ComputationSearch {
public:
    ComputationSearch(const WeightedPushdown& m, std::size_t budget) : m_(m), budget_(budget) {}

    void match(const std::vector<int>& word,
               const std::function<bool(const std::vector<std::size_t>&, int)>& visit) {
        word_ = &word;
        visit_match_ = &visit;
        visit_generate_ = nullptr;
        max_len_ = word.size();
        run();
    }

    void generate(std::size_t max_len,
                  const std::function<bool(const std::vector<int>&, const std::vector<std::size_t>&, int)>& visit) {
        word_ = nullptr;
        visit_match_ = nullptr;
        visit_generate_ = &visit;
        max_len_ = max_len;
        run();
    }

private:
    void run() {
        visits_ = 0;
        stop_ = false;
        pos_ = 0;
        emitted_.clear();
        steps_.clear();
        stack_.clear();
        finite_sum_ = 0;
        inf_count_ = 0;
        push_symbol(m_.initial_symbol_id());
        if (feasible()) recurse(m_.initial_state_id());
        pop_symbol(m_.initial_symbol_id());
    }

    bool feasible() const { return inf_count_ == 0 && pos_ + finite_sum_ <= max_len_; }

    void push_symbol(int s) {
        stack_.push_back(s);
        std::size_t c = m_.min_consumption(s);
        if (c == kInf)
            ++inf_count_;
        else
            finite_sum_ += c;
    }

    void pop_symbol(int s) {
        stack_.pop_back();
        std::size_t c = m_.min_consumption(s);
        if (c == kInf)
            --inf_count_;
        else
            finite_sum_ -= c;
    }

    void recurse(int state) {
        if (stop_) return;
        if (depth_ > kMaxSearchDepth)
            throw DivergenceError("computation search exceeded the depth limit of " +
                                  std::to_string(kMaxSearchDepth));
        DepthGuard guard(depth_);
        if (++visits_ > budget_)
            throw DivergenceError("computation search exceeded its budget of " + std::to_string(budget_));
        if (stack_.empty()) {
            if (!m_.final_id(state)) return;
            if (word_) {
                if (pos_ == word_->size())
                    if (!(*visit_match_)(steps_, state)) stop_ = true;
            } else {
                if (!(*visit_generate_)(emitted_, steps_, state)) stop_ = true;
            }
            return;
        }
        int top = stack_.back();
        for (std::size_t t : m_.transitions_from(state, top)) {
            if (stop_) return;
            int label = m_.label_id(t);
            bool consumes = label >= 0;
            if (consumes) {
                if (word_) {
                    if (pos_ >= word_->size() || (*word_)[pos_] != label) continue;
                } else {
                    if (pos_ >= max_len_) continue;
                }
            }
            pop_symbol(top);
            const auto& push = m_.push_ids(t);
            for (auto it = push.rbegin(); it != push.rend(); ++it) push_symbol(*it);
            steps_.push_back(t);
            if (consumes) {
                ++pos_;
                if (!word_) emitted_.push_back(label);
            }
            if (feasible()) recurse(m_.to_id(t));
            if (consumes) {
                --pos_;
                if (!word_) emitted_.pop_back();
            }
            steps_.pop_back();
            for (int s : push) pop_symbol(s);
            push_symbol(top);
        }
    }

    const WeightedPushdown& m_;
    std::size_t budget_;
    std::size_t visits_ = 0;
    bool stop_ = false;

    const std::vector<int>* word_ = nullptr;
    const std::function<bool(const std::vector<std::size_t>&, int)>* visit_match_ = nullptr;
    const std::function<bool(const std::vector<int>&, const std::vector<std::size_t>&, int)>* visit_generate_ =
        nullptr;

    std::size_t max_len_ = 0;
    std::size_t pos_ = 0;
    std::vector<int> emitted_;
    std::vector<int> stack_; // top at the back
    std::vector<std::size_t> steps_;
    std::size_t finite_sum_ = 0;
    std::size_t inf_count_ = 0;
    std::size_t depth_ = 0;
};

std::optional<std::vector<int>> intern_word(const WeightedPushdown& m, const Word& w) {
    std::vector<int> out;
    out.reserve(w.size());
    const auto& alphabet = m.input_alphabet();
    for (const auto& s : w) {
        auto it = std::find(alphabet.begin(), alphabet.end(), s);
        if (it == alphabet.end()) return std::nullopt;
        out.push_back(static_cast<int>(it - alphabet.begin()));
    }
    return out;
}

Word extern_word(const WeightedPushdown& m, const std::vector<int>& ids) {
    Word out;
    out.reserve(ids.size());
    for (int s : ids) out.push_back(m.input_alphabet()[static_cast<std::size_t>(s)]);
    return out;
}

} // namespace

std::vector<Computation> enumerate_computations(const WeightedPushdown& m, const Word& word,
                                                std::size_t budget) {
    auto ids = intern_word(m, word);
    if (!ids) return {};
    std::vector<Computation> out;
    ComputationSearch search(m, budget);
    std::function<bool(const std::vector<std::size_t>&, int)> collect =
        [&](const std::vector<std::size_t>& steps, int state) {
            out.push_back(Computation{steps, word, m.states()[static_cast<std::size_t>(state)]});
            return true;
        };
    search.match(*ids, collect);
    return out;
}

Weight computation_weight(const WeightedPushdown& m, const Computation& c) {
    Configuration config{m.initial_state(), c.word, {m.initial_symbol()}};
    for (std::size_t t : c.steps) {
        if (t >= m.transitions().size()) throw ValidationError("computation step out of range");
        config = pda_step(m, config, m.transitions()[t].id);
    }
    if (!config.remaining_input.empty() || !config.stack.empty() || !m.is_final(config.state))
        throw ValidationError("computation does not accept its word");
    std::vector<Weight> ws;
    ws.reserve(c.steps.size());
    for (std::size_t t : c.steps) ws.push_back(m.transitions()[t].weight);
    return m.domain()->val(ws);
}

Weight evaluate(const WeightedPushdown& m, const Word& word, std::size_t budget) {
    const DomainPtr& d = m.domain();
    Weight acc = d->zero();
    auto ids = intern_word(m, word);
    if (!ids) return acc;
    ComputationSearch search(m, budget);
    std::function<bool(const std::vector<std::size_t>&, int)> fold =
        [&](const std::vector<std::size_t>& steps, int) {
            std::vector<Weight> ws;
            ws.reserve(steps.size());
            for (std::size_t t : steps) ws.push_back(m.transitions()[t].weight);
            acc = d->add(acc, d->val(ws));
            return true;
        };
    search.match(*ids, fold);
    return acc;
}

bool is_proper(const WeightedPushdown& m) {
    for (const auto& t : m.transitions())
        if (t.label.empty() && t.push.size() < 2) return false;
    return true;
}

bool is_state_normalized(const WeightedPushdown& m) {
    if (m.final_states().size() != 1) return false;
    const std::string& qf = m.final_states().front();
    for (const auto& t : m.transitions()) {
        if (t.to == m.initial_state()) return false;
        if (t.from == qf) return false;
    }
    return true;
}

WeightedPushdown state_normalize(const WeightedPushdown& m) {
    std::set<std::string> state_names(m.states().begin(), m.states().end());
    std::string q0 = fresh_name(m.initial_state() + "'", state_names);
    state_names.insert(q0);
    std::string qf = fresh_name("qf", state_names);
    state_names.insert(qf);
    std::set<std::string> stack_names(m.stack_alphabet().begin(), m.stack_alphabet().end());
    std::string g0 = fresh_name(m.initial_symbol() + "'", stack_names);

    std::vector<std::string> states = m.states();
    states.push_back(q0);
    states.push_back(qf);
    std::vector<std::string> stack = m.stack_alphabet();
    stack.push_back(g0);

    std::set<std::string> ids;
    for (const auto& t : m.transitions()) ids.insert(t.id);

    std::vector<WeightedPushdown::Transition> transitions = m.transitions();
    const Weight one = m.domain()->one();
    std::string in_id = fresh_name("t@in", ids);
    ids.insert(in_id);
    transitions.push_back({in_id, q0, "", g0, m.initial_state(), {m.initial_symbol(), g0}, one});
    for (const auto& p : m.final_states()) {
        std::string id = fresh_name("t@f@" + p, ids);
        ids.insert(id);
        transitions.push_back({id, p, "", g0, qf, {}, one});
    }

    return WeightedPushdown(m.domain(), std::move(states), std::move(stack), q0, g0, {qf},
                            std::move(transitions));
}

namespace {

std::string triple_name(const std::string& q, const std::string& g, const std::string& p) {
    return q + "^" + g + "^" + p;
}

} // namespace

WeightedPushdown to_one_state(const WeightedPushdown& m, bool prune_unreachable) {
    if (!is_state_normalized(m))
        throw PreconditionError("one-state construction needs a state-normalized machine");
    const std::string& qf = m.final_states().front();
    const std::string star = "*";
    const std::string initial = triple_name(m.initial_state(), m.initial_symbol(), qf);

    struct NewTransition {
        std::string id;
        std::string label;
        std::string pop;
        std::vector<std::string> push;
        Weight weight;
    };
    std::vector<NewTransition> raw;
    std::set<std::string> ids;
    const auto& states = m.states();
    for (const auto& t : m.transitions()) {
        const std::size_t k = t.push.size();
        // one instance per choice of intermediate states p1..pk
        std::vector<std::size_t> choice(k, 0);
        while (true) {
            std::vector<std::string> chain;
            chain.push_back(t.to);
            for (std::size_t i = 0; i < k; ++i) chain.push_back(states[choice[i]]);
            std::vector<std::string> push;
            push.reserve(k);
            for (std::size_t i = 0; i < k; ++i)
                push.push_back(triple_name(chain[i], t.push[i], chain[i + 1]));
            std::string pop = triple_name(t.from, t.pop, chain.back());
            std::string id = t.id;
            for (std::size_t i = 0; i < k; ++i) id += "^" + chain[i + 1];
            id = fresh_name(id, ids);
            ids.insert(id);
            raw.push_back({id, t.label, std::move(pop), std::move(push), t.weight});
            if (k == 0) break;
            std::size_t pos = k;
            while (pos > 0) {
                if (++choice[pos - 1] < states.size()) break;
                choice[pos - 1] = 0;
                --pos;
            }
            if (pos == 0) break;
        }
    }

    // prune stack symbols unreachable from the initial triple
    std::set<std::string> reachable{initial};
    if (prune_unreachable) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& t : raw) {
                if (!reachable.count(t.pop)) continue;
                for (const auto& s : t.push)
                    if (reachable.insert(s).second) changed = true;
            }
        }
    } else {
        for (const auto& t : raw) {
            reachable.insert(t.pop);
            for (const auto& s : t.push) reachable.insert(s);
        }
    }

    std::vector<std::string> stack{initial};
    std::set<std::string> seen{initial};
    std::vector<WeightedPushdown::Transition> transitions;
    for (auto& t : raw) {
        if (!reachable.count(t.pop)) continue;
        if (seen.insert(t.pop).second) stack.push_back(t.pop);
        for (const auto& s : t.push)
            if (seen.insert(s).second) stack.push_back(s);
        transitions.push_back({t.id, star, t.label, t.pop, star, t.push, t.weight});
    }

    return WeightedPushdown(m.domain(), {star}, std::move(stack), star, initial, {star},
                            std::move(transitions));
}

WeightedPushdown sum_wpda(const WeightedPushdown& m1, const WeightedPushdown& m2) {
    if (!m1.domain()->same_as(*m2.domain()))
        throw DomainMismatchError("summands live in different domains: " + m1.domain()->name() +
                                  " vs " + m2.domain()->name());
    if (!is_state_normalized(m1) || !is_state_normalized(m2))
        throw PreconditionError("sum needs state-normalized machines");

    // share the initial state and initial stack symbol, keep the rest disjoint
    std::set<std::string> state_names(m1.states().begin(), m1.states().end());
    std::map<std::string, std::string> state_map;
    state_map[m2.initial_state()] = m1.initial_state();
    std::vector<std::string> states = m1.states();
    for (const auto& q : m2.states()) {
        if (q == m2.initial_state()) continue;
        std::string name = fresh_name(state_names.count(q) ? q + "_2" : q, state_names);
        state_names.insert(name);
        state_map[q] = name;
        states.push_back(name);
    }

    std::set<std::string> stack_names(m1.stack_alphabet().begin(), m1.stack_alphabet().end());
    std::map<std::string, std::string> stack_map;
    stack_map[m2.initial_symbol()] = m1.initial_symbol();
    std::vector<std::string> stack = m1.stack_alphabet();
    for (const auto& g : m2.stack_alphabet()) {
        if (g == m2.initial_symbol()) continue;
        std::string name = fresh_name(stack_names.count(g) ? g + "_2" : g, stack_names);
        stack_names.insert(name);
        stack_map[g] = name;
        stack.push_back(name);
    }

    std::set<std::string> ids;
    std::vector<WeightedPushdown::Transition> transitions = m1.transitions();
    for (const auto& t : transitions) ids.insert(t.id);
    for (const auto& t : m2.transitions()) {
        WeightedPushdown::Transition out = t;
        out.id = fresh_name(ids.count(t.id) ? t.id + "_2" : t.id, ids);
        ids.insert(out.id);
        out.from = state_map.at(t.from);
        out.to = state_map.at(t.to);
        out.pop = stack_map.at(t.pop);
        for (auto& s : out.push) s = stack_map.at(s);
        transitions.push_back(std::move(out));
    }

    std::vector<std::string> finals = m1.final_states();
    for (const auto& f : m2.final_states()) {
        const std::string& mapped = state_map.at(f);
        if (std::find(finals.begin(), finals.end(), mapped) == finals.end()) finals.push_back(mapped);
    }

    return WeightedPushdown(m1.domain(), std::move(states), std::move(stack), m1.initial_state(),
                            m1.initial_symbol(), std::move(finals), std::move(transitions));
}

void for_each_computation_up_to(const WeightedPushdown& m, std::size_t max_len,
                                const std::function<bool(const Word&, const std::vector<std::size_t>&)>& visit,
                                std::size_t budget) {
    ComputationSearch search(m, budget);
    std::function<bool(const std::vector<int>&, const std::vector<std::size_t>&, int)> emit =
        [&](const std::vector<int>& yield, const std::vector<std::size_t>& steps, int) {
            return visit(extern_word(m, yield), steps);
        };
    search.generate(max_len, emit);
}

SupportMap generate_support(const WeightedPushdown& m, std::size_t max_len, std::size_t budget) {
    const DomainPtr& d = m.domain();
    SupportMap out;
    for_each_computation_up_to(
        m, max_len,
        [&](const Word& w, const std::vector<std::size_t>& steps) {
            std::vector<Weight> ws;
            ws.reserve(steps.size());
            for (std::size_t t : steps) ws.push_back(m.transitions()[t].weight);
            Weight value = d->val(ws);
            auto it = out.find(w);
            if (it == out.end())
                out.emplace(w, value);
            else
                it->second = d->add(it->second, value);
            return true;
        },
        budget);
    for (auto it = out.begin(); it != out.end();) {
        if (it->second == d->zero())
            it = out.erase(it);
        else
            ++it;
    }
    return out;
}

std::map<Word, std::size_t, ShortlexLess> generate_words(const WeightedPushdown& m, std::size_t max_len,
                                                         std::size_t budget) {
    std::map<Word, std::size_t, ShortlexLess> out;
    for_each_computation_up_to(
        m, max_len,
        [&](const Word& w, const std::vector<std::size_t>&) {
            ++out[w];
            return true;
        },
        budget);
    return out;
}

bool membership(const WeightedPushdown& m, const Word& word, std::size_t budget) {
    auto ids = intern_word(m, word);
    if (!ids) return false;
    bool found = false;
    ComputationSearch search(m, budget);
    std::function<bool(const std::vector<std::size_t>&, int)> stop =
        [&](const std::vector<std::size_t>&, int) {
            found = true;
            return false;
        };
    search.match(*ids, stop);
    return found;
}

Series pushdown_series(const WeightedPushdown& m) {
    auto shared = std::make_shared<const WeightedPushdown>(m);
    Series out;
    out.domain = shared->domain();
    out.provenance = Provenance::Automaton;
    out.eval = [shared](const Word& w) { return evaluate(*shared, w); };
    out.support_probe = [shared](std::size_t n) { return generate_support(*shared, n); };
    return out;
}

} // namespace qcfl
