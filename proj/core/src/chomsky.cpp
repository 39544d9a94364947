#include "qcfl/chomsky.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "qcfl/bridge.hpp"
#include "qcfl/errors.hpp"

namespace qcfl {

namespace {

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
    std::string name = base;
    while (taken.count(name)) name += "'";
    return name;
}

bool is_hnf(const WeightedGrammar& g) {
    for (const auto& p : g.productions()) {
        if (p.rhs.empty()) continue;
        std::size_t tail_start = g.is_terminal(p.rhs.front()) ? 1 : 0;
        for (std::size_t i = tail_start; i < p.rhs.size(); ++i)
            if (!g.is_nonterminal(p.rhs[i])) return false;
    }
    return true;
}

/// Number of nonterminals on the right-hand side of an HNF production.
std::size_t child_count(const WeightedGrammar& g, const WeightedGrammar::Production& p) {
    if (p.rhs.empty()) return 0;
    return p.rhs.size() - (g.is_terminal(p.rhs.front()) ? 1 : 0);
}

/// Removes nonterminals and productions that take part in no terminal
/// derivation from the start symbol. The derivation sets of terminal words
/// are unchanged.
WeightedGrammar trim(const WeightedGrammar& g) {
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

    std::vector<std::string> nonterminals;
    for (std::size_t a = 0; a < nts; ++a)
        if ((productive[a] && reachable[a]) || static_cast<int>(a) == g.start_id())
            nonterminals.push_back(g.symbol_name(static_cast<int>(a)));

    std::vector<WeightedGrammar::Production> productions;
    for (std::size_t p = 0; p < g.productions().size(); ++p) {
        std::size_t a = static_cast<std::size_t>(g.lhs_id(p));
        if (!(productive[a] && reachable[a])) continue;
        bool keep = true;
        for (int s : g.rhs_ids(p))
            if (!g.id_is_terminal(s) &&
                !(productive[static_cast<std::size_t>(s)] && reachable[static_cast<std::size_t>(s)])) {
                keep = false;
                break;
            }
        if (keep) productions.push_back(g.productions()[p]);
    }
    return WeightedGrammar(g.domain(), g.terminals(), std::move(nonterminals), g.start(),
                           std::move(productions));
}

} // namespace

// --- alphabetic morphisms ----------------------------------------------------

AlphabeticMorphism::AlphabeticMorphism(DomainPtr domain,
                                       std::vector<std::string> source_alphabet,
                                       std::vector<std::string> target_alphabet,
                                       std::map<std::string, Monome> images)
    : domain_(std::move(domain)),
      source_(std::move(source_alphabet)),
      target_(std::move(target_alphabet)),
      images_(std::move(images)) {
    if (!domain_) throw ValidationError("alphabetic morphism needs a weight domain");
    if (source_.empty()) throw ValidationError("alphabetic morphism needs a nonempty source alphabet");
    std::set<std::string> source_set(source_.begin(), source_.end());
    if (source_set.size() != source_.size())
        throw ValidationError("duplicate source letter in alphabetic morphism");
    std::set<std::string> target_set(target_.begin(), target_.end());
    for (const auto& letter : source_) {
        auto it = images_.find(letter);
        if (it == images_.end())
            throw ValidationError("alphabetic morphism has no image for letter " + letter);
        const Monome& m = it->second;
        if (m.word.size() > 1)
            throw ValidationError("image of " + letter + " must be a letter or empty");
        if (m.word.size() == 1 && !target_set.count(m.word.front()))
            throw ValidationError("image of " + letter + " uses an undeclared target letter " +
                                  m.word.front());
        if (!domain_->contains(m.weight))
            throw DomainMismatchError("image weight of " + letter + " is outside domain " +
                                      domain_->name());
    }
    for (const auto& [letter, m] : images_)
        if (!source_set.count(letter))
            throw ValidationError("image given for undeclared letter " + letter);
}

const Monome& AlphabeticMorphism::image(const std::string& letter) const {
    auto it = images_.find(letter);
    if (it == images_.end())
        throw ValidationError("letter outside the morphism's source alphabet: " + letter);
    return it->second;
}

Monome apply_morphism_word(const AlphabeticMorphism& h, const Word& v) {
    std::vector<Weight> weights;
    weights.reserve(v.size());
    Word word;
    for (const auto& letter : v) {
        const Monome& m = h.image(letter);
        weights.push_back(m.weight);
        word.insert(word.end(), m.word.begin(), m.word.end());
    }
    return Monome{h.domain()->val(weights), std::move(word)};
}

// --- Dyck languages ------------------------------------------------------------

BracketAlphabet::BracketAlphabet(std::vector<std::string> base) : base_(std::move(base)) {
    if (base_.empty()) throw ValidationError("bracket alphabet needs a nonempty base set");
    std::set<std::string> all(base_.begin(), base_.end());
    if (all.size() != base_.size()) throw ValidationError("duplicate bracket symbol");
    for (const auto& y : base_)
        if (all.count(bar(y)))
            throw ValidationError("bracket symbol collides with a barred copy: " + bar(y));
}

std::vector<std::string> BracketAlphabet::all() const {
    std::vector<std::string> out = base_;
    for (const auto& y : base_) out.push_back(bar(y));
    return out;
}

bool BracketAlphabet::is_opener(const std::string& letter) const {
    return std::find(base_.begin(), base_.end(), letter) != base_.end();
}

bool BracketAlphabet::is_closer(const std::string& letter) const {
    if (letter.size() < 2 || letter.back() != '~') return false;
    return is_opener(letter.substr(0, letter.size() - 1));
}

std::string BracketAlphabet::unbar(const std::string& letter) const {
    if (!is_closer(letter)) throw ValidationError("not a barred bracket: " + letter);
    return letter.substr(0, letter.size() - 1);
}

WeightedGrammar dyck_grammar(const std::vector<std::string>& base) {
    BracketAlphabet brackets(base);
    std::vector<std::string> terminals = brackets.all();
    std::set<std::string> taken(terminals.begin(), terminals.end());
    std::string z = fresh_name("Z", taken);
    DomainPtr b = boolean_domain();
    std::vector<WeightedGrammar::Production> productions;
    for (std::size_t i = 0; i < base.size(); ++i)
        productions.push_back({"y" + std::to_string(i), z,
                               {base[i], z, BracketAlphabet::bar(base[i])},
                               b->one()});
    productions.push_back({"cat", z, {z, z}, b->one()});
    productions.push_back({"nil", z, {}, b->one()});
    return WeightedGrammar(b, std::move(terminals), {z}, z, std::move(productions));
}

WeightedGrammar dyck_grammar_unambiguous(const std::vector<std::string>& base) {
    BracketAlphabet brackets(base);
    std::vector<std::string> terminals = brackets.all();
    std::set<std::string> taken(terminals.begin(), terminals.end());
    std::string z = fresh_name("Z", taken);
    taken.insert(z);
    std::string a = fresh_name("A", taken);
    DomainPtr b = boolean_domain();
    std::vector<WeightedGrammar::Production> productions;
    productions.push_back({"cons", z, {a, z}, b->one()});
    productions.push_back({"nil", z, {}, b->one()});
    for (std::size_t i = 0; i < base.size(); ++i)
        productions.push_back({"y" + std::to_string(i), a,
                               {base[i], z, BracketAlphabet::bar(base[i])},
                               b->one()});
    return WeightedGrammar(b, std::move(terminals), {z, a}, z, std::move(productions));
}

bool dyck_member(const BracketAlphabet& brackets, const Word& w) {
    std::vector<std::string> open;
    for (const auto& letter : w) {
        if (brackets.is_opener(letter)) {
            open.push_back(letter);
        } else if (brackets.is_closer(letter)) {
            if (open.empty() || open.back() != brackets.unbar(letter)) return false;
            open.pop_back();
        } else {
            return false;
        }
    }
    return open.empty();
}

// --- production grammar ---------------------------------------------------------

ProductionGrammar production_grammar(const WeightedGrammar& g) {
    WeightedGrammar h = to_head_normal_form(g);
    DomainPtr b = boolean_domain();

    std::set<std::string> taken(h.nonterminals().begin(), h.nonterminals().end());
    std::vector<std::string> delta;
    std::map<std::string, std::string> letter_of; // production id -> Delta letter
    for (const auto& p : h.productions()) {
        std::string letter = fresh_name(p.id, taken);
        taken.insert(letter);
        delta.push_back(letter);
        letter_of[p.id] = letter;
    }

    std::vector<WeightedGrammar::Production> productions;
    std::map<std::string, Monome> images;
    for (const auto& p : h.productions()) {
        WeightedGrammar::Production out;
        out.id = p.id;
        out.lhs = p.lhs;
        out.rhs.push_back(letter_of[p.id]);
        Monome image{p.weight, {}};
        if (!p.rhs.empty() && h.is_terminal(p.rhs.front())) {
            image.word.push_back(p.rhs.front());
            out.rhs.insert(out.rhs.end(), p.rhs.begin() + 1, p.rhs.end());
        } else {
            out.rhs.insert(out.rhs.end(), p.rhs.begin(), p.rhs.end());
        }
        out.weight = b->one();
        productions.push_back(std::move(out));
        images.emplace(letter_of[p.id], std::move(image));
    }

    WeightedGrammar grammar(b, delta, h.nonterminals(), h.start(), std::move(productions));
    AlphabeticMorphism morphism(g.domain(), delta, g.terminals(), std::move(images));
    return ProductionGrammar{std::move(grammar), std::move(morphism)};
}

// --- slot-bracket encoding --------------------------------------------------------

CsEncoding cs_encode_classical(const WeightedGrammar& g) {
    if (!is_hnf(g))
        throw PreconditionError("slot-bracket encoding needs a head-normal-form grammar");
    {
        UnambiguityProbe probe = unambiguity_probe(g, 5);
        if (!probe.unambiguous)
            throw PreconditionError("slot-bracket encoding needs an unambiguous grammar; found two derivations of a word");
    }

    const auto& prods = g.productions();
    std::set<std::string> taken;
    std::vector<std::vector<std::string>> slots(prods.size());
    std::vector<std::string> base;
    for (std::size_t p = 0; p < prods.size(); ++p) {
        std::size_t k = std::max<std::size_t>(child_count(g, prods[p]), 1);
        for (std::size_t i = 1; i <= k; ++i) {
            std::string name = fresh_name(prods[p].id + "." + std::to_string(i), taken);
            taken.insert(name);
            slots[p].push_back(name);
            base.push_back(name);
        }
    }
    BracketAlphabet brackets(base);

    std::map<std::string, std::string> letter_map;
    for (std::size_t p = 0; p < prods.size(); ++p) {
        for (const auto& s : slots[p]) {
            letter_map[s] = "";
            letter_map[BracketAlphabet::bar(s)] = "";
        }
        if (!prods[p].rhs.empty() && g.is_terminal(prods[p].rhs.front()))
            letter_map[slots[p].front()] = prods[p].rhs.front();
    }

    // control automaton: states remember the last letter read
    const std::string start_state = "start";
    std::vector<std::string> states{start_state};
    std::vector<std::string> alphabet = brackets.all();
    for (const auto& letter : alphabet) states.push_back(letter);
    std::vector<Dfa::Edge> edges;
    std::vector<std::string> accepting;

    auto child_nonterminal = [&](std::size_t p, std::size_t slot) -> const std::string& {
        const auto& rhs = prods[p].rhs;
        std::size_t tail_start = (!rhs.empty() && g.is_terminal(rhs.front())) ? 1 : 0;
        return rhs[tail_start + slot - 1];
    };
    auto openers_of = [&](const std::string& nonterminal, const std::string& from) {
        for (std::size_t q = 0; q < prods.size(); ++q)
            if (prods[q].lhs == nonterminal) edges.push_back({from, slots[q].front(), slots[q].front()});
    };

    openers_of(g.start(), start_state);
    for (std::size_t p = 0; p < prods.size(); ++p) {
        std::size_t children = child_count(g, prods[p]);
        std::size_t k = slots[p].size();
        for (std::size_t i = 1; i <= k; ++i) {
            const std::string& opener = slots[p][i - 1];
            const std::string closer = BracketAlphabet::bar(opener);
            if (children == 0) {
                edges.push_back({opener, closer, closer});
            } else {
                openers_of(child_nonterminal(p, i), opener);
            }
            if (i < k) {
                edges.push_back({closer, slots[p][i], slots[p][i]});
            } else {
                // after a final closer: any closer, or end of input
                for (const auto& other : brackets.base()) {
                    const std::string c = BracketAlphabet::bar(other);
                    edges.push_back({closer, c, c});
                }
                if (prods[p].lhs == g.start()) accepting.push_back(closer);
            }
        }
    }

    Dfa control(alphabet, std::move(states), start_state, std::move(accepting), std::move(edges));
    return CsEncoding{std::move(brackets), std::move(control), std::move(letter_map), std::move(slots)};
}

Word cs_encode_derivation(const WeightedGrammar& hnf_grammar, const CsEncoding& enc,
                          const Derivation& d) {
    Word out;
    std::size_t next = 0;
    std::function<void(const std::string&)> encode = [&](const std::string& expected_lhs) {
        if (next >= d.steps.size()) throw ValidationError("derivation ends before the tree is complete");
        std::size_t p = d.steps[next++];
        const auto& prod = hnf_grammar.productions()[p];
        if (prod.lhs != expected_lhs)
            throw ValidationError("derivation expands " + prod.lhs + " where " + expected_lhs +
                                  " was pending");
        std::size_t children = child_count(hnf_grammar, prod);
        std::size_t tail_start =
            (!prod.rhs.empty() && hnf_grammar.is_terminal(prod.rhs.front())) ? 1 : 0;
        if (children == 0) {
            out.push_back(enc.slots[p].front());
            out.push_back(BracketAlphabet::bar(enc.slots[p].front()));
            return;
        }
        for (std::size_t i = 1; i <= children; ++i) {
            out.push_back(enc.slots[p][i - 1]);
            encode(prod.rhs[tail_start + i - 1]);
            out.push_back(BracketAlphabet::bar(enc.slots[p][i - 1]));
        }
    };
    encode(hnf_grammar.start());
    if (next != d.steps.size()) throw ValidationError("derivation continues past a complete tree");
    return out;
}

// --- decomposition -------------------------------------------------------------------

CSDecomposition decompose(const WeightedGrammar& g) {
    ProductionGrammar pg = production_grammar(g);
    CsEncoding enc = cs_encode_classical(pg.grammar);

    std::vector<std::string> source = enc.brackets.all();
    std::map<std::string, Monome> images;
    const DomainPtr& d = g.domain();
    for (const auto& letter : source) {
        const std::string& delta_letter = enc.letter_map.at(letter);
        if (delta_letter.empty()) {
            images.emplace(letter, Monome{d->one(), {}});
        } else {
            images.emplace(letter, pg.morphism.image(delta_letter));
        }
    }
    AlphabeticMorphism morphism(d, std::move(source), g.terminals(), std::move(images));
    return CSDecomposition{std::move(enc.brackets), std::move(enc.control), std::move(morphism)};
}

// --- epsilon elimination ----------------------------------------------------------------

WeightedGrammar eps_eliminate_unambiguous(const WeightedGrammar& g, std::size_t probe_len) {
    {
        UnambiguityProbe probe = unambiguity_probe(g, probe_len);
        if (!probe.unambiguous)
            throw PreconditionError("epsilon elimination needs an unambiguous grammar");
    }
    WeightedGrammar gt = trim(g);

    std::vector<WeightedGrammar::Production> productions;
    std::set<std::pair<std::string, std::vector<std::string>>> seen;
    std::set<std::string> ids;
    for (const auto& p : gt.productions()) {
        std::vector<std::size_t> nullable_positions;
        for (std::size_t i = 0; i < p.rhs.size(); ++i) {
            auto sid = gt.symbol_id(p.rhs[i]);
            if (sid && !gt.id_is_terminal(*sid) && gt.nullable(*sid)) nullable_positions.push_back(i);
        }
        if (nullable_positions.size() > 20)
            throw ValidationError("too many nullable occurrences in one production: " + p.id);
        const std::size_t variants = std::size_t(1) << nullable_positions.size();
        for (std::size_t mask = 0; mask < variants; ++mask) {
            std::vector<std::string> residue;
            std::size_t np = 0;
            for (std::size_t i = 0; i < p.rhs.size(); ++i) {
                bool drop = false;
                if (np < nullable_positions.size() && nullable_positions[np] == i) {
                    drop = (mask >> np) & 1;
                    ++np;
                }
                if (!drop) residue.push_back(p.rhs[i]);
            }
            if (residue.empty()) continue;
            if (!seen.insert({p.lhs, residue}).second) continue;
            std::string id = mask == 0 ? p.id : p.id + "~" + std::to_string(mask);
            id = fresh_name(id, ids);
            ids.insert(id);
            productions.push_back({id, p.lhs, std::move(residue), p.weight});
        }
    }

    WeightedGrammar out(gt.domain(), gt.terminals(), gt.nonterminals(), gt.start(),
                        std::move(productions));
    return trim(out);
}

// --- intersection with a deterministic control language -----------------------------------

WeightedGrammar regular_intersect_unambiguous(const WeightedGrammar& g, const Dfa& dfa,
                                              bool readd_epsilon) {
    for (const auto& p : g.productions())
        if (p.rhs.empty())
            throw PreconditionError("intersection needs an epsilon-free grammar; production " + p.id +
                                    " derives the empty word");
    for (const auto& t : g.terminals())
        if (!dfa.has_letter(t))
            throw PreconditionError("control automaton does not cover terminal " + t);

    WeightedGrammar gt = trim(g);

    // states from which some accepting state is reachable; chains through the
    // rest cannot produce useful triples
    const auto& states = dfa.states();
    std::vector<bool> live(states.size(), false);
    {
        std::vector<std::vector<int>> reverse(states.size());
        for (int q = 0; q < static_cast<int>(states.size()); ++q)
            for (int l = 0; l < static_cast<int>(dfa.alphabet().size()); ++l)
                reverse[static_cast<std::size_t>(dfa.next_id(q, l))].push_back(q);
        std::vector<int> queue;
        for (int q = 0; q < static_cast<int>(states.size()); ++q)
            if (dfa.accepting_id(q)) {
                live[static_cast<std::size_t>(q)] = true;
                queue.push_back(q);
            }
        while (!queue.empty()) {
            int q = queue.back();
            queue.pop_back();
            for (int p : reverse[static_cast<std::size_t>(q)])
                if (!live[static_cast<std::size_t>(p)]) {
                    live[static_cast<std::size_t>(p)] = true;
                    queue.push_back(p);
                }
        }
    }

    auto triple = [&states](int p, const std::string& a, int q) {
        return states[static_cast<std::size_t>(p)] + "^" + a + "^" + states[static_cast<std::size_t>(q)];
    };

    std::vector<WeightedGrammar::Production> productions;
    std::set<std::string> mentioned;

    std::set<std::string> taken(gt.terminals().begin(), gt.terminals().end());
    std::string start = fresh_name("S0", taken);

    for (int qa = 0; qa < static_cast<int>(states.size()); ++qa) {
        if (!dfa.accepting_id(qa)) continue;
        std::string t = triple(dfa.initial_id(), gt.start(), qa);
        mentioned.insert(t);
        productions.push_back({"s@" + states[static_cast<std::size_t>(qa)], start, {t},
                               gt.domain()->one()});
    }
    if (readd_epsilon)
        productions.push_back({"s@eps", start, {}, gt.domain()->one()});

    for (const auto& p : gt.productions()) {
        // enumerate automaton state chains along the right-hand side;
        // terminal positions follow the unique edge, nonterminal positions
        // range over live states
        std::vector<std::size_t> nt_positions;
        for (std::size_t i = 0; i < p.rhs.size(); ++i)
            if (gt.is_nonterminal(p.rhs[i])) nt_positions.push_back(i);

        std::vector<int> chain(p.rhs.size() + 1, -1);
        std::function<void(std::size_t)> emit = [&](std::size_t i) {
            if (i == p.rhs.size()) {
                std::vector<std::string> rhs;
                rhs.reserve(p.rhs.size());
                for (std::size_t j = 0; j < p.rhs.size(); ++j) {
                    if (gt.is_nonterminal(p.rhs[j])) {
                        std::string t = triple(chain[j], p.rhs[j], chain[j + 1]);
                        mentioned.insert(t);
                        rhs.push_back(std::move(t));
                    } else {
                        rhs.push_back(p.rhs[j]);
                    }
                }
                std::string id = p.id;
                for (std::size_t j = 0; j < chain.size(); ++j)
                    id += "@" + states[static_cast<std::size_t>(chain[j])];
                std::string lhs = triple(chain.front(), p.lhs, chain.back());
                mentioned.insert(lhs);
                productions.push_back({std::move(id), std::move(lhs), std::move(rhs), p.weight});
                return;
            }
            if (gt.is_nonterminal(p.rhs[i])) {
                for (int q = 0; q < static_cast<int>(states.size()); ++q) {
                    if (!live[static_cast<std::size_t>(q)]) continue;
                    chain[i + 1] = q;
                    emit(i + 1);
                }
            } else {
                int q = dfa.next_id(chain[i], dfa.letter_id(p.rhs[i]));
                if (!live[static_cast<std::size_t>(q)]) return;
                chain[i + 1] = q;
                emit(i + 1);
            }
        };
        for (int q0 = 0; q0 < static_cast<int>(states.size()); ++q0) {
            if (!live[static_cast<std::size_t>(q0)]) continue;
            chain[0] = q0;
            emit(0);
        }
    }

    std::vector<std::string> nonterminals{start};
    nonterminals.insert(nonterminals.end(), mentioned.begin(), mentioned.end());
    WeightedGrammar out(gt.domain(), gt.terminals(), std::move(nonterminals), start,
                        std::move(productions));
    return trim(out);
}

// --- morphism machine ---------------------------------------------------------------------

WeightedPushdown morphism_pda(const WeightedPushdown& base, const AlphabeticMorphism& h,
                              bool base_unambiguous) {
    const DomainPtr& d = h.domain();
    if (!(d->flags().complete && d->flags().completely_idempotent) && !base_unambiguous)
        throw PreconditionError(
            "morphism image of an ambiguous machine needs a complete and completely idempotent "
            "domain");
    const auto& delta = h.source_alphabet();
    std::set<std::string> delta_set(delta.begin(), delta.end());
    for (const auto& label : base.input_alphabet())
        if (!delta_set.count(label))
            throw ValidationError("base machine reads " + label +
                                  ", which is outside the morphism's source alphabet");

    const std::string fixed = *std::min_element(delta.begin(), delta.end());

    // next-letter choices: every source letter, then epsilon
    std::vector<std::string> guesses = delta;
    guesses.push_back("");
    auto guess_tag = [](const std::string& x) { return x.empty() ? std::string("eps") : x; };

    std::set<std::string> taken;
    std::string initial = fresh_name(base.initial_state() + "'", taken);
    taken.insert(initial);
    std::vector<std::string> states{initial};
    std::map<std::pair<std::string, std::string>, std::string> product; // (state, guess) -> name
    for (const auto& q : base.states()) {
        for (const auto& x : guesses) {
            std::string name = fresh_name(q + "@" + guess_tag(x), taken);
            taken.insert(name);
            product[{q, x}] = name;
            states.push_back(name);
        }
    }

    std::set<std::string> ids;
    std::vector<WeightedPushdown::Transition> transitions;
    for (const auto& x : guesses) {
        std::string id = fresh_name("in@" + guess_tag(x), ids);
        ids.insert(id);
        transitions.push_back({id, initial, "", base.initial_symbol(),
                               product.at({base.initial_state(), x}),
                               {base.initial_symbol()},
                               d->one()});
    }
    for (const auto& t : base.transitions()) {
        for (const auto& x : guesses) {
            std::string id = fresh_name(t.id + "@" + guess_tag(x), ids);
            ids.insert(id);
            WeightedPushdown::Transition out;
            out.id = std::move(id);
            out.from = product.at({t.from, t.label});
            out.to = product.at({t.to, x});
            out.pop = t.pop;
            out.push = t.push;
            if (t.label.empty()) {
                out.label = "";
                out.weight = d->one();
            } else {
                const Monome& m = h.image(t.label);
                out.label = m.word.empty() ? "" : m.word.front();
                out.weight = m.weight;
            }
            transitions.push_back(std::move(out));
        }
    }

    std::vector<std::string> finals;
    for (const auto& f : base.final_states()) finals.push_back(product.at({f, fixed}));

    return WeightedPushdown(d, std::move(states), base.stack_alphabet(), initial,
                            base.initial_symbol(), std::move(finals), std::move(transitions));
}

// --- composition ----------------------------------------------------------------------------

WeightedPushdown compose(const CSDecomposition& dec) {
    std::vector<std::string> all = dec.brackets.all();
    std::set<std::string> all_set(all.begin(), all.end());
    std::set<std::string> source_set(dec.morphism.source_alphabet().begin(),
                                     dec.morphism.source_alphabet().end());
    if (all_set != source_set)
        throw ValidationError("morphism source alphabet must equal the bracket alphabet");

    WeightedGrammar dyck = dyck_grammar_unambiguous(dec.brackets.base());
    WeightedGrammar eps_free = eps_eliminate_unambiguous(dyck);
    WeightedGrammar product =
        regular_intersect_unambiguous(eps_free, dec.control, dec.control.accepts_epsilon());
    WeightedPushdown base = grammar_to_pda(product);
    return morphism_pda(base, dec.morphism, /*base_unambiguous=*/true);
}

} // namespace qcfl
