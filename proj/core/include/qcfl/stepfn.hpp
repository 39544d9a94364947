#ifndef QCFL_STEPFN_HPP
#define QCFL_STEPFN_HPP

#include <map>
#include <string>
#include <vector>

#include "qcfl/grammar.hpp"
#include "qcfl/pushdown.hpp"
#include "qcfl/series.hpp"

namespace qcfl {

/// A finite sum of weighted characteristic series of context-free languages.
/// The value at a word is the sum of the weights of the steps whose language
/// contains it.
struct StepFunction {
    struct Step {
        Weight weight;
        WeightedGrammar language;      // boolean semantics
        bool unambiguous_claim = true; // caller's obligation, probe-checked where it matters
    };

    DomainPtr domain;
    std::vector<Step> steps;
    bool strong = false; // claimed partition of all words
};

Series stepfn_series(const StepFunction& sf);

/// Evaluate without materializing a machine.
Weight evaluate(const StepFunction& sf, const Word& w);

/// Machine for  a * 1_L  via a fresh marker symbol carrying the weight and a
/// morphism erasing it. Unless the domain is complete and completely
/// idempotent the language grammar must be unambiguous; the claim is
/// probe-checked up to a bound.
WeightedPushdown scalar_step_series(const DomainPtr& domain, const Weight& a,
                                    const WeightedGrammar& language, bool unambiguous,
                                    std::size_t probe_len = 6);

/// Machine for the whole step function: sum of the per-step scalar machines.
WeightedPushdown stepfn_to_series(const StepFunction& sf);

/// Step function equal to the machine's behavior, for additively idempotent,
/// locally finite, fold-presentable domains (completely idempotent when
/// complete). One step per value in the closure of the transition weights,
/// with the step language extracted by tracking the folded weight in the
/// state.
StepFunction extract_stepfn(const WeightedPushdown& m, std::size_t closure_cap = 10000);

struct StrongnessReport {
    bool strong = true;
    enum class Violation { None, Disjointness, Coverage };
    Violation violation = Violation::None;
    Word witness; // shortlex-first violating word
    /// Image of the step function restricted to words of length <= n.
    std::vector<Weight> image;
    /// For each image value, the words of length <= n evaluating to it.
    std::map<std::string, std::vector<Word>> fibers; // key: canonical weight string
};

/// Checks pairwise disjointness and coverage of the step languages over all
/// words of length <= n, and reports the bounded image and its fibers.
StrongnessReport strongness_probe(const StepFunction& sf,
                                  const std::vector<std::string>& alphabet, std::size_t n);

} // namespace qcfl

#endif
