#ifndef QCFL_DOMAIN_HPP
#define QCFL_DOMAIN_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qcfl/errors.hpp"
#include "qcfl/weight.hpp"

namespace qcfl {

struct DomainFlags {
    bool additively_idempotent = false;
    bool completely_idempotent = false;
    bool complete = false;
    bool locally_finite = false;
    bool fold_presentable = false;
};

class Domain;
using DomainPtr = std::shared_ptr<const Domain>;

/// A unital valuation monoid: a commutative monoid (carrier, add, zero)
/// together with a valuation mapping finite weight sequences into the
/// carrier, a unit that the valuation deletes from sequences, and
/// capability flags. Immutable after construction; all operations are pure.
class Domain {
public:
    using BinaryOp = std::function<Weight(const Weight&, const Weight&)>;
    using ValOp = std::function<Weight(std::span<const Weight>)>;
    using Predicate = std::function<bool(const Weight&)>;
    using Parser = std::function<std::optional<Weight>(std::string_view)>;

    /// `val` may be null when `fold_step` is given; the valuation is then the
    /// left fold of `fold_step` starting from `one`. `fold_step` must be
    /// non-null exactly when flags.fold_presentable.
    Domain(std::string name, DomainFlags flags, Weight zero, Weight one,
           BinaryOp add, ValOp val, BinaryOp fold_step,
           Predicate contains, Parser parse, std::vector<Weight> samples);

    const std::string& name() const { return name_; }
    const DomainFlags& flags() const { return flags_; }
    const Weight& zero() const { return zero_; }
    const Weight& one() const { return one_; }

    bool contains(const Weight& w) const { return contains_(w); }

    /// Monoid addition; both operands must lie in the carrier.
    Weight add(const Weight& a, const Weight& b) const;

    /// Valuation of a finite sequence.
    Weight val(std::span<const Weight> seq) const;
    Weight val(const std::vector<Weight>& seq) const {
        return val(std::span<const Weight>(seq));
    }

    /// The binary step whose left fold presents the valuation.
    /// Throws PreconditionError when the domain is not fold presentable.
    Weight fold_step(const Weight& a, const Weight& b) const;

    /// Parses a weight literal of this domain; throws ValidationError on
    /// malformed or out-of-carrier text.
    Weight parse_weight(std::string_view text) const;

    std::string print_weight(const Weight& w) const { return w.str(); }

    /// A small probe set (contains zero and one) used by default in axiom
    /// checks.
    const std::vector<Weight>& default_samples() const { return samples_; }

    /// Two domain objects are interchangeable when their spec names agree.
    bool same_as(const Domain& other) const {
        return this == &other || name_ == other.name_;
    }

private:
    void require_carrier(const Weight& w) const;

    std::string name_;
    DomainFlags flags_;
    Weight zero_;
    Weight one_;
    BinaryOp add_;
    ValOp val_;
    BinaryOp fold_step_;
    Predicate contains_;
    Parser parse_;
    std::vector<Weight> samples_;
};

// --- built-in domain constructors -----------------------------------------

/// ({false,true}, or, and-fold, false, true).
DomainPtr boolean_domain();

/// (N, +, product-fold, 0, 1).
DomainPtr nat_domain();

/// (N + {inf}, min, sum-fold, inf, 0).
DomainPtr tropical_domain();

/// (Q + {-inf, inf}, sup, avg, -inf, inf); occurrences of inf are dropped
/// before averaging, -inf annihilates.
DomainPtr avgsup_domain();

/// avgsup with the carrier restricted to rationals with at most `digits`
/// decimal digits; the mean is truncated toward zero onto that grid.
DomainPtr truncavg_domain(unsigned digits);

/// Bounded chain lattice with n elements {0, 1/(n-1), ..., 1}, max/min.
DomainPtr chain_domain(unsigned n);

/// Bounded lattice given by explicit join/meet tables over named elements.
/// Unordered pairs may be listed once; the diagonal may be omitted.
struct LatticeTable {
    std::vector<std::string> elements;
    std::string bottom;
    std::string top;
    std::map<std::pair<std::string, std::string>, std::string> join;
    std::map<std::pair<std::string, std::string>, std::string> meet;
};

/// Validates the bounded-lattice laws; on failure throws ValidationError
/// naming the violated law and a witness.
DomainPtr lattice_domain(const LatticeTable& table, std::string name = "lattice");

/// A unital monoid-magma over named elements, given by explicit addition and
/// multiplication tables; the valuation is the left fold of multiplication.
/// The multiplication need not be associative or commutative.
struct MagmaTable {
    std::vector<std::string> elements;
    std::string zero;
    std::string one;
    std::map<std::pair<std::string, std::string>, std::string> add; // symmetrized
    std::map<std::pair<std::string, std::string>, std::string> mul; // ordered pairs
};

DomainPtr magma_fold_domain(const MagmaTable& table, std::string name = "magma-fold");

/// Adjoins a fresh top unit to a (possibly non-unital) valuation monoid:
/// x + 1 = 1 + 1 = 1, and the valuation deletes unit occurrences before
/// delegating to the inner valuation. The inner domain's one() is never
/// consulted.
DomainPtr adjoin_unit(DomainPtr inner);

/// N x K with componentwise addition, zero (0,0) and unit (1,0). The
/// valuation of a sequence of pairs (after unit deletion and the forced
/// singleton/zero cases) is (sum of counts, inner valuation of the
/// expansion that repeats each inner value count times, skipping pairs
/// with count 0 or inner value 0).
DomainPtr nat_product(DomainPtr inner);

/// Valuation presented as the left fold of a binary step. Probes the
/// annihilation law (a*0 = 0*a = 0) and the unit law (a*1 = 1*a = a) of
/// `step` on the samples and throws ValidationError on a violation.
DomainPtr fold_adapter(std::string name, DomainFlags flags, Weight zero, Weight one,
                       Domain::BinaryOp add, Domain::BinaryOp step,
                       Domain::Predicate contains, Domain::Parser parse,
                       std::vector<Weight> samples);

/// dim x dim matrices over a fold-presentable base domain; addition is
/// pointwise, the fold step is matrix multiplication over the base ops.
DomainPtr matrix_magma(DomainPtr base, std::size_t dim);

// --- probes ----------------------------------------------------------------

struct AxiomCheck {
    std::string law;
    bool passed = true;
    std::string witness; // empty when passed
};

struct AxiomsReport {
    std::vector<AxiomCheck> checks;
    bool all_passed() const;
};

/// Exhaustively exercises the valuation-monoid laws over all sequences of
/// the given samples (plus zero and one) up to max_seq_len. Failures are
/// reported as data, never thrown.
AxiomsReport axioms_probe(const Domain& d, std::vector<Weight> samples,
                          std::size_t max_seq_len);

/// BFS closure of the valuation over all finite sequences of the given
/// generators; requires a fold-presentable domain. Result is sorted
/// canonically. Throws DivergenceError when the closure exceeds `cap`.
std::vector<Weight> val_closure(const Domain& d, const std::vector<Weight>& generators,
                                std::size_t cap = 10000);

// --- spec-named convenience forms ------------------------------------------

inline Weight val_sequence(const Domain& d, const std::vector<Weight>& ws) {
    return d.val(ws);
}

inline Weight combine(const Domain& d, const Weight& a, const Weight& b) {
    return d.add(a, b);
}

} // namespace qcfl

#endif
