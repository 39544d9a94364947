#include "qcfl/stepfn.hpp"

#include <algorithm>
#include <set>

#include "qcfl/bridge.hpp"
#include "qcfl/chomsky.hpp"
#include "qcfl/errors.hpp"

namespace qcfl {

namespace {

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
    std::string name = base;
    while (taken.count(name)) name += "'";
    return name;
}

} // namespace

Weight evaluate(const StepFunction& sf, const Word& w) {
    Weight acc = sf.domain->zero();
    for (const auto& step : sf.steps)
        if (membership(step.language, w)) acc = sf.domain->add(acc, step.weight);
    return acc;
}

Series stepfn_series(const StepFunction& sf) {
    auto shared = std::make_shared<const StepFunction>(sf);
    Series out;
    out.domain = sf.domain;
    out.provenance = Provenance::StepFunction;
    out.eval = [shared](const Word& w) { return evaluate(*shared, w); };
    out.support_probe = [shared](std::size_t n) {
        SupportMap m;
        const DomainPtr& d = shared->domain;
        for (const auto& step : shared->steps) {
            for (const auto& [w, count] : generate_words(step.language, n)) {
                (void)count;
                auto it = m.find(w);
                if (it == m.end())
                    m.emplace(w, step.weight);
                else
                    it->second = d->add(it->second, step.weight);
            }
        }
        for (auto it = m.begin(); it != m.end();) {
            if (it->second == d->zero())
                it = m.erase(it);
            else
                ++it;
        }
        return m;
    };
    return out;
}

WeightedPushdown scalar_step_series(const DomainPtr& domain, const Weight& a,
                                    const WeightedGrammar& language, bool unambiguous,
                                    std::size_t probe_len) {
    if (!domain->contains(a))
        throw DomainMismatchError("step weight " + a.str() + " is outside domain " + domain->name());
    if (!(domain->flags().complete && domain->flags().completely_idempotent)) {
        if (!unambiguous)
            throw PreconditionError("scalar step over domain " + domain->name() +
                                    " needs an unambiguous step language");
        UnambiguityProbe probe = unambiguity_probe(language, probe_len);
        if (!probe.unambiguous)
            throw PreconditionError("step language is ambiguous although claimed unambiguous");
    }

    // prefix every word with a fresh marker carrying the scalar weight
    std::set<std::string> taken(language.terminals().begin(), language.terminals().end());
    for (const auto& n : language.nonterminals()) taken.insert(n);
    std::string marker = fresh_name("#", taken);
    taken.insert(marker);
    std::string start = fresh_name(language.start() + "0", taken);

    DomainPtr b = boolean_domain();
    std::vector<std::string> terminals{marker};
    terminals.insert(terminals.end(), language.terminals().begin(), language.terminals().end());
    std::vector<std::string> nonterminals{start};
    nonterminals.insert(nonterminals.end(), language.nonterminals().begin(),
                        language.nonterminals().end());

    std::set<std::string> ids;
    for (const auto& p : language.productions()) ids.insert(p.id);
    std::vector<WeightedGrammar::Production> productions;
    productions.push_back({fresh_name("mark", ids), start, {marker, language.start()}, b->one()});
    for (const auto& p : language.productions())
        productions.push_back({p.id, p.lhs, p.rhs, b->one()});

    WeightedGrammar marked(b, std::move(terminals), std::move(nonterminals), start,
                           std::move(productions));
    WeightedPushdown base = grammar_to_pda(marked);

    std::vector<std::string> source{marker};
    source.insert(source.end(), language.terminals().begin(), language.terminals().end());
    std::map<std::string, Monome> images;
    images.emplace(marker, Monome{a, {}});
    for (const auto& t : language.terminals()) images.emplace(t, Monome{domain->one(), {t}});
    AlphabeticMorphism h(domain, std::move(source), language.terminals(), std::move(images));

    return morphism_pda(base, h, unambiguous);
}

WeightedPushdown stepfn_to_series(const StepFunction& sf) {
    if (sf.steps.empty()) {
        return WeightedPushdown(sf.domain, {"q0", "qf"}, {"Z0"}, "q0", "Z0", {"qf"}, {});
    }
    std::vector<WeightedPushdown> machines;
    machines.reserve(sf.steps.size());
    for (const auto& step : sf.steps)
        machines.push_back(state_normalize(
            scalar_step_series(sf.domain, step.weight, step.language, step.unambiguous_claim)));
    WeightedPushdown acc = std::move(machines.front());
    for (std::size_t i = 1; i < machines.size(); ++i) {
        if (!is_state_normalized(acc)) acc = state_normalize(acc);
        acc = sum_wpda(acc, machines[i]);
    }
    return acc;
}

StepFunction extract_stepfn(const WeightedPushdown& m, std::size_t closure_cap) {
    const DomainPtr& d = m.domain();
    const DomainFlags& flags = d->flags();
    if (!flags.additively_idempotent || !flags.locally_finite || !flags.fold_presentable)
        throw PreconditionError("step extraction needs an additively idempotent, locally finite, "
                                "fold-presentable domain; " +
                                d->name() + " is not");
    if (flags.complete && !flags.completely_idempotent)
        throw PreconditionError("step extraction over a complete domain needs complete idempotence");

    std::vector<Weight> generators;
    generators.reserve(m.transitions().size());
    for (const auto& t : m.transitions()) generators.push_back(t.weight);
    std::vector<Weight> closure = val_closure(*d, generators, closure_cap);

    DomainPtr b = boolean_domain();
    StepFunction out;
    out.domain = d;
    out.strong = false;

    for (const Weight& a : closure) {
        // track the folded weight of the computation so far in the state
        std::set<std::string> taken;
        std::map<std::pair<std::string, std::string>, std::string> product;
        std::vector<std::string> states;
        for (const auto& q : m.states()) {
            for (const Weight& y : closure) {
                std::string name = fresh_name(q + "@" + y.str(), taken);
                taken.insert(name);
                product[{q, y.str()}] = name;
                states.push_back(name);
            }
        }
        std::set<std::string> ids;
        std::vector<WeightedPushdown::Transition> transitions;
        for (const auto& t : m.transitions()) {
            for (const Weight& y : closure) {
                Weight next = d->fold_step(y, t.weight);
                std::string id = fresh_name(t.id + "@" + y.str(), ids);
                ids.insert(id);
                transitions.push_back({std::move(id), product.at({t.from, y.str()}), t.label, t.pop,
                                       product.at({t.to, next.str()}), t.push, b->one()});
            }
        }
        std::vector<std::string> finals;
        for (const auto& f : m.final_states()) finals.push_back(product.at({f, a.str()}));

        WeightedPushdown machine(b, std::move(states), m.stack_alphabet(),
                                 product.at({m.initial_state(), d->one().str()}),
                                 m.initial_symbol(), std::move(finals), std::move(transitions));
        out.steps.push_back({a, pda_to_grammar(machine), /*unambiguous_claim=*/false});
    }
    return out;
}

StrongnessReport strongness_probe(const StepFunction& sf,
                                  const std::vector<std::string>& alphabet, std::size_t n) {
    StrongnessReport report;
    std::vector<std::set<Word, ShortlexLess>> languages;
    languages.reserve(sf.steps.size());
    for (const auto& step : sf.steps) {
        std::set<Word, ShortlexLess> words;
        for (const auto& [w, count] : generate_words(step.language, n)) {
            (void)count;
            words.insert(w);
        }
        languages.push_back(std::move(words));
    }

    std::set<Weight, WeightCanonicalLess> image;
    for (const Word& w : words_up_to(alphabet, n)) {
        std::size_t members = 0;
        Weight value = sf.domain->zero();
        for (std::size_t i = 0; i < sf.steps.size(); ++i) {
            if (languages[i].count(w)) {
                ++members;
                value = sf.domain->add(value, sf.steps[i].weight);
            }
        }
        image.insert(value);
        report.fibers[value.str()].push_back(w);
        if (report.strong) {
            if (members >= 2) {
                report.strong = false;
                report.violation = StrongnessReport::Violation::Disjointness;
                report.witness = w;
            } else if (members == 0) {
                report.strong = false;
                report.violation = StrongnessReport::Violation::Coverage;
                report.witness = w;
            }
        }
    }
    report.image.assign(image.begin(), image.end());
    return report;
}

} // namespace qcfl
