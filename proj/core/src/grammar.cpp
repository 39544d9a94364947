#include "qcfl/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <set>
#include <sstream>

#include "qcfl/errors.hpp"

namespace qcfl {

namespace {

constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();

// guards against unbounded expansion chains that never consume input
constexpr std::size_t kMaxSearchDepth = 10000;

struct DepthGuard {
    explicit DepthGuard(std::size_t& depth) : depth_(depth) { ++depth_; }
    ~DepthGuard() { --depth_; }
    std::size_t& depth_;
};

// names must survive the text format: no whitespace and none of , : [ ]
void require_token(const std::string& name, const char* what) {
    if (name.empty()) throw ValidationError(std::string(what) + " must not be empty");
    for (char c : name)
        if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == ':' || c == '[' ||
            c == ']')
            throw ValidationError(std::string(what) + " contains a reserved character: " + name);
}

std::string join(const std::vector<std::string>& parts, const char* sep = " ") {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

} // namespace

WeightedGrammar::WeightedGrammar(DomainPtr domain,
                                 std::vector<std::string> terminals,
                                 std::vector<std::string> nonterminals,
                                 std::string start,
                                 std::vector<Production> productions)
    : domain_(std::move(domain)),
      terminals_(std::move(terminals)),
      nonterminals_(std::move(nonterminals)),
      start_(std::move(start)),
      productions_(std::move(productions)) {
    if (!domain_) throw ValidationError("grammar needs a weight domain");

    for (const auto& s : nonterminals_) require_token(s, "nonterminal");
    for (const auto& s : terminals_) require_token(s, "terminal");
    for (const auto& p : productions_) require_token(p.id, "production id");

    symbols_.reserve(nonterminals_.size() + terminals_.size());
    for (const auto& n : nonterminals_) symbols_.push_back(n);
    for (const auto& t : terminals_) symbols_.push_back(t);
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        if (!symbol_ids_.emplace(symbols_[i], static_cast<int>(i)).second)
            throw ValidationError("symbol declared twice: " + symbols_[i]);
    }

    auto sid = symbol_ids_.find(start_);
    if (sid == symbol_ids_.end() || id_is_terminal(sid->second))
        throw ValidationError("start symbol must be a declared nonterminal: " + start_);
    start_id_ = sid->second;

    std::set<std::string> ids;
    by_lhs_.assign(nonterminals_.size(), {});
    for (std::size_t p = 0; p < productions_.size(); ++p) {
        const Production& prod = productions_[p];
        if (!ids.insert(prod.id).second)
            throw ValidationError("duplicate production id: " + prod.id);
        auto lhs = symbol_ids_.find(prod.lhs);
        if (lhs == symbol_ids_.end() || id_is_terminal(lhs->second))
            throw ValidationError("production " + prod.id + ": left-hand side " + prod.lhs +
                                  " is not a nonterminal");
        lhs_ids_.push_back(lhs->second);
        std::vector<int> rhs;
        rhs.reserve(prod.rhs.size());
        for (const auto& sym : prod.rhs) {
            auto it = symbol_ids_.find(sym);
            if (it == symbol_ids_.end())
                throw ValidationError("production " + prod.id + ": undeclared symbol " + sym);
            rhs.push_back(it->second);
        }
        rhs_ids_.push_back(std::move(rhs));
        by_lhs_[static_cast<std::size_t>(lhs->second)].push_back(p);
        if (!domain_->contains(prod.weight))
            throw DomainMismatchError("production " + prod.id + ": weight " + prod.weight.str() +
                                      " is outside domain " + domain_->name());
    }

    // nullable fixpoint
    nullable_.assign(nonterminals_.size(), false);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t p = 0; p < productions_.size(); ++p) {
            std::size_t a = static_cast<std::size_t>(lhs_ids_[p]);
            if (nullable_[a]) continue;
            bool all = true;
            for (int s : rhs_ids_[p]) {
                if (id_is_terminal(s) || !nullable_[static_cast<std::size_t>(s)]) {
                    all = false;
                    break;
                }
            }
            if (all) {
                nullable_[a] = true;
                changed = true;
            }
        }
    }

    // least derivable yield length per symbol
    min_yield_.assign(symbols_.size(), kInf);
    for (std::size_t s = nonterminals_.size(); s < symbols_.size(); ++s) min_yield_[s] = 1;
    changed = true;
    while (changed) {
        changed = false;
        for (std::size_t p = 0; p < productions_.size(); ++p) {
            std::size_t total = 0;
            bool feasible = true;
            for (int s : rhs_ids_[p]) {
                std::size_t m = min_yield_[static_cast<std::size_t>(s)];
                if (m == kInf) {
                    feasible = false;
                    break;
                }
                total += m;
            }
            if (!feasible) continue;
            std::size_t a = static_cast<std::size_t>(lhs_ids_[p]);
            if (total < min_yield_[a]) {
                min_yield_[a] = total;
                changed = true;
            }
        }
    }
}

bool WeightedGrammar::is_terminal(const std::string& symbol) const {
    auto it = symbol_ids_.find(symbol);
    return it != symbol_ids_.end() && id_is_terminal(it->second);
}

bool WeightedGrammar::is_nonterminal(const std::string& symbol) const {
    auto it = symbol_ids_.find(symbol);
    return it != symbol_ids_.end() && !id_is_terminal(it->second);
}

std::optional<std::size_t> WeightedGrammar::production_index(const std::string& id) const {
    for (std::size_t p = 0; p < productions_.size(); ++p)
        if (productions_[p].id == id) return p;
    return std::nullopt;
}

std::optional<int> WeightedGrammar::symbol_id(const std::string& name) const {
    auto it = symbol_ids_.find(name);
    if (it == symbol_ids_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> WeightedGrammar::min_yield(int symbol_id) const {
    std::size_t m = min_yield_[static_cast<std::size_t>(symbol_id)];
    if (m == kInf) return std::nullopt;
    return m;
}

std::vector<std::string> derivation_ids(const WeightedGrammar& g, const Derivation& d) {
    std::vector<std::string> out;
    out.reserve(d.steps.size());
    for (std::size_t p : d.steps) out.push_back(g.productions()[p].id);
    return out;
}

Word leftmost_step(const WeightedGrammar& g, const Word& sentential_form,
                   const std::string& production_id) {
    auto p = g.production_index(production_id);
    if (!p) throw ValidationError("unknown production id: " + production_id);
    const auto& prod = g.productions()[*p];
    for (std::size_t i = 0; i < sentential_form.size(); ++i) {
        if (!g.is_nonterminal(sentential_form[i])) {
            if (!g.is_terminal(sentential_form[i]))
                throw ValidationError("sentential form contains an undeclared symbol: " +
                                      sentential_form[i]);
            continue;
        }
        if (sentential_form[i] != prod.lhs)
            throw ValidationError("leftmost nonterminal is " + sentential_form[i] +
                                  ", production " + production_id + " rewrites " + prod.lhs);
        Word out;
        out.reserve(sentential_form.size() + prod.rhs.size());
        out.insert(out.end(), sentential_form.begin(), sentential_form.begin() + static_cast<std::ptrdiff_t>(i));
        out.insert(out.end(), prod.rhs.begin(), prod.rhs.end());
        out.insert(out.end(), sentential_form.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                   sentential_form.end());
        return out;
    }
    throw ValidationError("sentential form has no nonterminal to rewrite");
}

namespace {

/// Leftmost depth-first search over sentential forms. Shared by word
/// matching and bounded language generation. Pruning: a branch dies as soon
/// as the least completable length exceeds the target.
class DerivationSearch {
public:
    DerivationSearch(const WeightedGrammar& g, std::size_t budget) : g_(g), budget_(budget) {}

    /// visit(steps) for each leftmost derivation of `word`.
    void match(const std::vector<int>& word,
               const std::function<bool(const std::vector<std::size_t>&)>& visit) {
        word_ = &word;
        visit_match_ = &visit;
        emitted_.clear();
        visit_generate_ = nullptr;
        max_len_ = word.size();
        run();
    }

    /// visit(yield, steps) for each derivation with yield length <= max_len.
    void generate(std::size_t max_len,
                  const std::function<bool(const std::vector<int>&, const std::vector<std::size_t>&)>& visit) {
        word_ = nullptr;
        visit_match_ = nullptr;
        visit_generate_ = &visit;
        emitted_.clear();
        max_len_ = max_len;
        run();
    }

private:
    void run() {
        visits_ = 0;
        stop_ = false;
        pos_ = 0;
        steps_.clear();
        stack_.clear();
        finite_sum_ = 0;
        inf_count_ = 0;
        push_symbol(g_.start_id());
        if (feasible()) recurse();
        pop_symbol(g_.start_id());
    }

    bool feasible() const {
        return inf_count_ == 0 && pos_ + finite_sum_ <= max_len_;
    }

    void push_symbol(int s) {
        stack_.push_back(s);
        auto m = g_.min_yield(s);
        if (m)
            finite_sum_ += *m;
        else
            ++inf_count_;
    }

    void pop_symbol(int s) {
        stack_.pop_back();
        auto m = g_.min_yield(s);
        if (m)
            finite_sum_ -= *m;
        else
            --inf_count_;
    }

    void recurse() {
        if (stop_) return;
        if (depth_ > kMaxSearchDepth)
            throw DivergenceError("derivation search exceeded the depth limit of " +
                                  std::to_string(kMaxSearchDepth));
        DepthGuard guard(depth_);
        if (++visits_ > budget_) {
            std::string detail;
            FiniteDerivationsCheck check = finite_derivations_check(g_);
            if (!check.ok)
                detail = "; the grammar admits unbounded derivation sets via the cycle " +
                         join(check.cycle, " > ");
            throw DivergenceError("derivation search exceeded its budget of " +
                                  std::to_string(budget_) + detail);
        }
        if (stack_.empty()) {
            if (word_) {
                if (pos_ == word_->size())
                    if (!(*visit_match_)(steps_)) stop_ = true;
            } else {
                if (!(*visit_generate_)(emitted_, steps_)) stop_ = true;
            }
            return;
        }
        int top = stack_.back();
        if (g_.id_is_terminal(top)) {
            if (word_) {
                if (pos_ < word_->size() && (*word_)[pos_] == top) {
                    pop_symbol(top);
                    ++pos_;
                    recurse();
                    --pos_;
                    push_symbol(top);
                }
            } else {
                pop_symbol(top);
                emitted_.push_back(top);
                ++pos_;
                recurse();
                --pos_;
                emitted_.pop_back();
                push_symbol(top);
            }
            return;
        }
        for (std::size_t p : g_.productions_of(top)) {
            if (stop_) return;
            pop_symbol(top);
            const auto& rhs = g_.rhs_ids(p);
            for (auto it = rhs.rbegin(); it != rhs.rend(); ++it) push_symbol(*it);
            steps_.push_back(p);
            if (feasible()) recurse();
            steps_.pop_back();
            for (int s : rhs) pop_symbol(s);
            push_symbol(top);
        }
    }

    const WeightedGrammar& g_;
    std::size_t budget_;
    std::size_t visits_ = 0;
    bool stop_ = false;

    const std::vector<int>* word_ = nullptr;
    const std::function<bool(const std::vector<std::size_t>&)>* visit_match_ = nullptr;
    const std::function<bool(const std::vector<int>&, const std::vector<std::size_t>&)>* visit_generate_ = nullptr;

    std::size_t max_len_ = 0;
    std::size_t pos_ = 0;
    std::vector<int> emitted_;
    std::vector<int> stack_; // leftmost pending symbol at the back
    std::vector<std::size_t> steps_;
    std::size_t finite_sum_ = 0;
    std::size_t inf_count_ = 0;
    std::size_t depth_ = 0;
};

std::optional<std::vector<int>> intern_word(const WeightedGrammar& g, const Word& w) {
    std::vector<int> out;
    out.reserve(w.size());
    for (const auto& s : w) {
        auto id = g.symbol_id(s);
        if (!id || !g.id_is_terminal(*id)) return std::nullopt;
        out.push_back(*id);
    }
    return out;
}

Word extern_word(const WeightedGrammar& g, const std::vector<int>& ids) {
    Word out;
    out.reserve(ids.size());
    for (int s : ids) out.push_back(g.symbol_name(s));
    return out;
}

} // namespace

std::vector<Derivation> enumerate_derivations(const WeightedGrammar& g, const Word& word,
                                              std::size_t budget) {
    auto ids = intern_word(g, word);
    if (!ids) return {}; // a symbol outside the terminal alphabet occurs in no derivation
    std::vector<Derivation> out;
    DerivationSearch search(g, budget);
    std::function<bool(const std::vector<std::size_t>&)> collect =
        [&](const std::vector<std::size_t>& steps) {
            out.push_back(Derivation{steps, word});
            return true;
        };
    search.match(*ids, collect);
    return out;
}

Weight derivation_weight(const WeightedGrammar& g, const Derivation& d) {
    // replay from the start symbol to validate
    Word form{g.start()};
    for (std::size_t p : d.steps) {
        if (p >= g.productions().size()) throw ValidationError("derivation step out of range");
        form = leftmost_step(g, form, g.productions()[p].id);
    }
    if (form != d.word)
        throw ValidationError("derivation does not derive its word: got '" + join(form) +
                              "', expected '" + join(d.word) + "'");
    for (const auto& s : form)
        if (!g.is_terminal(s))
            throw ValidationError("derivation ends in a non-terminal sentential form");
    std::vector<Weight> ws;
    ws.reserve(d.steps.size());
    for (std::size_t p : d.steps) ws.push_back(g.productions()[p].weight);
    return g.domain()->val(ws);
}

Weight evaluate(const WeightedGrammar& g, const Word& word, std::size_t budget) {
    FiniteDerivationsCheck check = finite_derivations_check(g);
    if (!check.ok)
        throw DivergenceError("grammar admits infinitely many derivations (cycle " +
                              join(check.cycle, " > ") + "); evaluation rejected");
    const DomainPtr& d = g.domain();
    Weight acc = d->zero();
    auto ids = intern_word(g, word);
    if (!ids) return acc;
    DerivationSearch search(g, budget);
    std::function<bool(const std::vector<std::size_t>&)> fold =
        [&](const std::vector<std::size_t>& steps) {
            std::vector<Weight> ws;
            ws.reserve(steps.size());
            for (std::size_t p : steps) ws.push_back(g.productions()[p].weight);
            acc = d->add(acc, d->val(ws));
            return true;
        };
    search.match(*ids, fold);
    return acc;
}

bool is_proper(const WeightedGrammar& g) {
    for (std::size_t p = 0; p < g.productions().size(); ++p) {
        const auto& rhs = g.rhs_ids(p);
        if (rhs.empty()) return false;
        if (rhs.size() == 1 && !g.id_is_terminal(rhs[0])) return false;
    }
    return true;
}

FiniteDerivationsCheck finite_derivations_check(const WeightedGrammar& g) {
    const std::size_t nts = g.nonterminal_count();

    std::vector<bool> productive(nts, false);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t p = 0; p < g.productions().size(); ++p) {
            std::size_t a = static_cast<std::size_t>(g.lhs_id(p));
            if (productive[a]) continue;
            bool all = true;
            for (int s : g.rhs_ids(p))
                if (!g.id_is_terminal(s) && !productive[static_cast<std::size_t>(s)]) {
                    all = false;
                    break;
                }
            if (all) {
                productive[a] = true;
                changed = true;
            }
        }
    }

    // reachability through productions that can complete
    std::vector<bool> reachable(nts, false);
    if (productive[static_cast<std::size_t>(g.start_id())]) {
        std::vector<int> queue{g.start_id()};
        reachable[static_cast<std::size_t>(g.start_id())] = true;
        while (!queue.empty()) {
            int a = queue.back();
            queue.pop_back();
            for (std::size_t p : g.productions_of(a)) {
                bool usable = true;
                for (int s : g.rhs_ids(p))
                    if (!g.id_is_terminal(s) && !productive[static_cast<std::size_t>(s)]) {
                        usable = false;
                        break;
                    }
                if (!usable) continue;
                for (int s : g.rhs_ids(p)) {
                    if (g.id_is_terminal(s)) continue;
                    if (!reachable[static_cast<std::size_t>(s)]) {
                        reachable[static_cast<std::size_t>(s)] = true;
                        queue.push_back(s);
                    }
                }
            }
        }
    }

    std::vector<bool> useful(nts);
    for (std::size_t a = 0; a < nts; ++a) useful[a] = productive[a] && reachable[a];

    // A > B when A -> alpha B beta with both flanks nullable, A and B useful
    std::vector<std::vector<int>> edges(nts);
    for (std::size_t p = 0; p < g.productions().size(); ++p) {
        std::size_t a = static_cast<std::size_t>(g.lhs_id(p));
        if (!useful[a]) continue;
        const auto& rhs = g.rhs_ids(p);
        std::vector<bool> null_sym(rhs.size());
        for (std::size_t i = 0; i < rhs.size(); ++i)
            null_sym[i] = !g.id_is_terminal(rhs[i]) && g.nullable(rhs[i]);
        std::vector<bool> prefix_null(rhs.size() + 1, true);
        for (std::size_t i = 0; i < rhs.size(); ++i) prefix_null[i + 1] = prefix_null[i] && null_sym[i];
        std::vector<bool> suffix_null(rhs.size() + 1, true);
        for (std::size_t i = rhs.size(); i-- > 0;) suffix_null[i] = suffix_null[i + 1] && null_sym[i];
        for (std::size_t i = 0; i < rhs.size(); ++i) {
            int b = rhs[i];
            if (g.id_is_terminal(b) || !useful[static_cast<std::size_t>(b)]) continue;
            if (prefix_null[i] && suffix_null[i + 1]) edges[a].push_back(b);
        }
    }

    // cycle detection
    enum class Color { White, Gray, Black };
    std::vector<Color> color(nts, Color::White);
    std::vector<int> path;
    FiniteDerivationsCheck result;
    std::function<bool(int)> dfs = [&](int a) -> bool {
        color[static_cast<std::size_t>(a)] = Color::Gray;
        path.push_back(a);
        for (int b : edges[static_cast<std::size_t>(a)]) {
            if (color[static_cast<std::size_t>(b)] == Color::Gray) {
                auto it = std::find(path.begin(), path.end(), b);
                for (; it != path.end(); ++it) result.cycle.push_back(g.symbol_name(*it));
                result.cycle.push_back(g.symbol_name(b));
                return true;
            }
            if (color[static_cast<std::size_t>(b)] == Color::White && dfs(b)) return true;
        }
        path.pop_back();
        color[static_cast<std::size_t>(a)] = Color::Black;
        return false;
    };
    for (std::size_t a = 0; a < nts; ++a) {
        if (useful[a] && color[a] == Color::White && dfs(static_cast<int>(a))) {
            result.ok = false;
            return result;
        }
    }
    return result;
}

namespace {

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
    std::string name = base;
    while (taken.count(name)) name += "'";
    return name;
}

} // namespace

WeightedGrammar to_head_normal_form(const WeightedGrammar& g) {
    std::set<std::string> taken;
    for (const auto& s : g.nonterminals()) taken.insert(s);
    for (const auto& s : g.terminals()) taken.insert(s);

    std::map<std::string, std::string> helper_for; // terminal -> helper nonterminal
    std::vector<std::string> nonterminals = g.nonterminals();
    for (const auto& t : g.terminals()) {
        std::string name = fresh_name("A@" + t, taken);
        taken.insert(name);
        helper_for[t] = name;
        nonterminals.push_back(name);
    }

    std::set<std::string> ids;
    for (const auto& p : g.productions()) ids.insert(p.id);

    std::vector<WeightedGrammar::Production> productions;
    productions.reserve(g.productions().size() + g.terminals().size());
    for (const auto& p : g.productions()) {
        WeightedGrammar::Production out = p;
        for (std::size_t i = 1; i < out.rhs.size(); ++i)
            if (g.is_terminal(out.rhs[i])) out.rhs[i] = helper_for[out.rhs[i]];
        productions.push_back(std::move(out));
    }
    for (const auto& t : g.terminals()) {
        std::string id = fresh_name("u@" + t, ids);
        ids.insert(id);
        productions.push_back({id, helper_for[t], {t}, g.domain()->one()});
    }

    return WeightedGrammar(g.domain(), g.terminals(), std::move(nonterminals), g.start(),
                           std::move(productions));
}

UnambiguityProbe unambiguity_probe(const WeightedGrammar& g, std::size_t n) {
    FiniteDerivationsCheck check = finite_derivations_check(g);
    if (!check.ok)
        throw PreconditionError("unambiguity probe needs finitely many derivations per word (cycle " +
                                join(check.cycle, " > ") + ")");
    auto counts = generate_words(g, n);
    for (const auto& [word, count] : counts) {
        if (count >= 2) return UnambiguityProbe{false, word};
    }
    return UnambiguityProbe{};
}

void for_each_derivation_up_to(const WeightedGrammar& g, std::size_t max_len,
                               const std::function<bool(const Word&, const std::vector<std::size_t>&)>& visit,
                               std::size_t budget) {
    DerivationSearch search(g, budget);
    std::function<bool(const std::vector<int>&, const std::vector<std::size_t>&)> emit =
        [&](const std::vector<int>& yield, const std::vector<std::size_t>& steps) {
            return visit(extern_word(g, yield), steps);
        };
    search.generate(max_len, emit);
}

SupportMap generate_support(const WeightedGrammar& g, std::size_t max_len, std::size_t budget) {
    const DomainPtr& d = g.domain();
    SupportMap out;
    for_each_derivation_up_to(
        g, max_len,
        [&](const Word& w, const std::vector<std::size_t>& steps) {
            std::vector<Weight> ws;
            ws.reserve(steps.size());
            for (std::size_t p : steps) ws.push_back(g.productions()[p].weight);
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

std::map<Word, std::size_t, ShortlexLess> generate_words(const WeightedGrammar& g, std::size_t max_len,
                                                         std::size_t budget) {
    std::map<Word, std::size_t, ShortlexLess> out;
    for_each_derivation_up_to(
        g, max_len,
        [&](const Word& w, const std::vector<std::size_t>&) {
            ++out[w];
            return true;
        },
        budget);
    return out;
}

bool membership(const WeightedGrammar& g, const Word& word, std::size_t budget) {
    auto ids = intern_word(g, word);
    if (!ids) return false;
    bool found = false;
    DerivationSearch search(g, budget);
    std::function<bool(const std::vector<std::size_t>&)> stop =
        [&](const std::vector<std::size_t>&) {
            found = true;
            return false;
        };
    search.match(*ids, stop);
    return found;
}

Series grammar_series(const WeightedGrammar& g) {
    auto shared = std::make_shared<const WeightedGrammar>(g);
    Series out;
    out.domain = shared->domain();
    out.provenance = Provenance::Grammar;
    out.eval = [shared](const Word& w) { return evaluate(*shared, w); };
    out.support_probe = [shared](std::size_t n) { return generate_support(*shared, n); };
    return out;
}

} // namespace qcfl
