#ifndef QCFL_SERIES_HPP
#define QCFL_SERIES_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qcfl/domain.hpp"
#include "qcfl/weight.hpp"
#include "qcfl/word.hpp"

namespace qcfl {

enum class Provenance { Grammar, Automaton, MorphismImage, Sum, Characteristic, StepFunction };

/// Map from words to weights, restricted to words of bounded length; words
/// absent from the map evaluate to the domain's zero.
using SupportMap = std::map<Word, Weight, ShortlexLess>;

/// A quantitative language, represented intensionally by its evaluator.
/// Evaluation is pure: the same word always yields an equal value.
struct Series {
    DomainPtr domain;
    std::function<Weight(const Word&)> eval;
    Provenance provenance = Provenance::Characteristic;

    /// Optional exact support restriction: all words of length <= n with a
    /// nonzero value, with their values. Present for series backed by finite
    /// machinery (grammars, automata, step functions); enables probes that
    /// avoid sweeping the whole alphabet.
    std::function<SupportMap(std::size_t)> support_probe;

    Weight operator()(const Word& w) const { return eval(w); }
};

/// Pointwise sum; domains must agree.
Series sum_series(const Series& a, const Series& b);

/// n-ary pointwise sum of finitely many series.
Series sum_series(const std::vector<Series>& summands, const DomainPtr& domain);

/// one on members of the language, zero elsewhere.
Series characteristic(DomainPtr d, std::function<bool(const Word&)> membership);

struct CompareResult {
    bool equal = true;
    Word witness;  // shortlex-first mismatch when !equal
    Weight lhs;
    Weight rhs;
};

/// Exhaustive comparison over all words of length <= n; reports the
/// shortlex-first mismatch. Uses the support probes when both series carry
/// them, which is exact and avoids the alphabet sweep.
CompareResult compare_up_to(const Series& a, const Series& b,
                            const std::vector<std::string>& alphabet, std::size_t n);

struct ImageSupport {
    std::vector<Weight> image;   // canonically sorted, deduplicated
    std::vector<Word> support;   // shortlex
};

/// Exact restriction of the image and support to words of length <= n.
ImageSupport image_support_up_to(const Series& s, const std::vector<std::string>& alphabet,
                                 std::size_t n);

} // namespace qcfl

#endif
