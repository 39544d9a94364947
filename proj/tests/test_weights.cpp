#include <doctest.h>

#include <qcfl/domain.hpp>
#include <qcfl/errors.hpp>
#include <qcfl/io.hpp>

#include <filesystem>
#include <set>
#include <vector>

using namespace qcfl;

namespace {

const std::filesystem::path kFixtures = QCFL_FIXTURE_DIR;

Weight rat(long n, long d = 1) { return Weight::rational(n, d); }
Weight inf() { return Weight::rational(ExtRat::pos_inf()); }
Weight ninf() { return Weight::rational(ExtRat::neg_inf()); }

/// The ten built-in domain spec strings exercised throughout the suite.
std::vector<std::string> builtin_specs() {
    return {"boolean",
            "nat",
            "tropical",
            "avgsup",
            "truncavg 2",
            "chain 3",
            "lattice diamond.lat",
            "magma-fold magma4.mag",
            "adjoin-unit nat",
            "nat-product nat"};
}

} // namespace

TEST_CASE("make_domain produces the documented flags") {
    auto flags_of = [](const std::string& spec) {
        return make_domain(spec, kFixtures)->flags();
    };

    DomainFlags b = flags_of("boolean");
    CHECK(b.additively_idempotent);
    CHECK(b.completely_idempotent);
    CHECK(b.complete);
    CHECK(b.locally_finite);
    CHECK(b.fold_presentable);

    DomainFlags n = flags_of("nat");
    CHECK_FALSE(n.additively_idempotent);
    CHECK_FALSE(n.completely_idempotent);
    CHECK_FALSE(n.complete);
    CHECK_FALSE(n.locally_finite);
    CHECK(n.fold_presentable);

    DomainFlags t = flags_of("tropical");
    CHECK(t.additively_idempotent);
    CHECK(t.completely_idempotent);
    CHECK(t.complete);
    CHECK_FALSE(t.locally_finite);
    CHECK(t.fold_presentable);

    DomainFlags a = flags_of("avgsup");
    CHECK(a.additively_idempotent);
    CHECK(a.completely_idempotent);
    CHECK(a.complete);
    CHECK_FALSE(a.locally_finite);
    CHECK_FALSE(a.fold_presentable);

    DomainFlags ta = flags_of("truncavg 2");
    CHECK(ta.additively_idempotent);
    CHECK(ta.completely_idempotent);
    CHECK(ta.complete);
    CHECK(ta.locally_finite);
    CHECK_FALSE(ta.fold_presentable);

    for (const char* lat : {"chain 3", "lattice diamond.lat"}) {
        DomainFlags f = flags_of(lat);
        CHECK(f.additively_idempotent);
        CHECK(f.locally_finite);
        CHECK(f.fold_presentable);
        CHECK(f.complete);
        CHECK(f.completely_idempotent);
    }
}

TEST_CASE("zeros and ones of the builtin domains") {
    CHECK(boolean_domain()->zero() == Weight::boolean(false));
    CHECK(boolean_domain()->one() == Weight::boolean(true));
    CHECK(avgsup_domain()->zero() == ninf());
    CHECK(avgsup_domain()->one() == inf());
    CHECK(tropical_domain()->zero() == inf());
    CHECK(tropical_domain()->one() == rat(0));

    auto chain3 = chain_domain(3);
    CHECK(chain3->zero() == rat(0));
    CHECK(chain3->one() == rat(1));
    CHECK(chain3->contains(rat(1, 2)));
    CHECK_FALSE(chain3->contains(rat(1, 3)));
    CHECK(chain3->flags().fold_presentable);
}

TEST_CASE("val_sequence: unit deletion, annihilation, exact means") {
    auto avg = avgsup_domain();
    CHECK(avg->val(std::vector<Weight>{}) == inf());
    CHECK(avg->val(std::vector<Weight>{rat(3), inf(), rat(6), rat(6)}) == rat(5));
    CHECK(avg->val(std::vector<Weight>{rat(3), ninf(), rat(6)}) == ninf());
    CHECK(avg->val(std::vector<Weight>{rat(1), rat(2)}) == rat(3, 2));

    auto nat = nat_domain();
    CHECK(nat->val(std::vector<Weight>{Weight::nat(2ul), Weight::nat(0ul), Weight::nat(5ul)}) ==
          Weight::nat(0ul));
    CHECK(nat->val(std::vector<Weight>{Weight::nat(2ul), Weight::nat(5ul)}) == Weight::nat(10ul));
}

TEST_CASE("combine is the monoid addition") {
    CHECK(combine(*boolean_domain(), Weight::boolean(true), Weight::boolean(false)) ==
          Weight::boolean(true));
    CHECK(combine(*tropical_domain(), rat(3), rat(7)) == rat(3));
    CHECK(combine(*nat_domain(), Weight::nat(2ul), Weight::nat(5ul)) == Weight::nat(7ul));
}

TEST_CASE("carrier mismatches are rejected") {
    CHECK_THROWS_AS(nat_domain()->add(Weight::nat(1ul), Weight::boolean(true)),
                    DomainMismatchError);
    CHECK_THROWS_AS(tropical_domain()->val(std::vector<Weight>{rat(1, 2)}), DomainMismatchError);
    CHECK_THROWS_AS(chain_domain(3)->parse_weight("2/3"), ValidationError);
}

TEST_CASE("truncavg truncates the exact mean toward zero onto its grid") {
    auto d = truncavg_domain(2);
    // mean 1/200 truncates to 0, mean -1/200 also truncates to 0
    CHECK(d->val(std::vector<Weight>{rat(0), rat(1, 100)}) == rat(0));
    CHECK(d->val(std::vector<Weight>{rat(0), rat(-1, 100)}) == rat(0));
    // mean of 1 and 2/100 is 51/100, already on the grid
    CHECK(d->val(std::vector<Weight>{rat(1), rat(2, 100)}) == rat(51, 100));
    // singletons stay untouched
    CHECK(d->val(std::vector<Weight>{rat(-7, 100)}) == rat(-7, 100));
    CHECK_FALSE(d->contains(rat(1, 3)));
    CHECK(d->contains(rat(25, 100)));
}

TEST_CASE("adjoin_unit behaves like the fresh-top extension") {
    auto extended = adjoin_unit(nat_domain());
    const Weight unit = Weight::unit_marker();
    CHECK(extended->one() == unit);
    CHECK(extended->zero() == Weight::nat(0ul));
    // x + 1 = 1 + x = 1
    CHECK(extended->add(Weight::nat(5ul), unit) == unit);
    CHECK(extended->add(unit, Weight::nat(5ul)) == unit);
    // val of units alone is the unit
    CHECK(extended->val(std::vector<Weight>{unit, unit}) == unit);
    // unit occurrences are deleted before the inner valuation
    CHECK(extended->val(std::vector<Weight>{Weight::nat(2ul), unit, Weight::nat(3ul)}) ==
          Weight::nat(6ul));
    CHECK(extended->parse_weight("unit") == unit);
}

TEST_CASE("adjoining a unit to sup/avg gives the avgsup behavior") {
    // sup/avg over the rationals with -inf, no unit of its own; the one()
    // slot is a placeholder that adjoin_unit never consults
    auto base = std::make_shared<Domain>(
        "supavg-base", DomainFlags{true, false, false, false, false},
        ninf(), ninf(),
        [](const Weight& a, const Weight& b) {
            return Weight::rational(max(a.as_rational(), b.as_rational()));
        },
        [](std::span<const Weight> seq) -> Weight {
            mpq_class sum = 0;
            unsigned long n = 0;
            for (const Weight& w : seq) {
                if (w.as_rational().is_neg_inf()) return Weight::rational(ExtRat::neg_inf());
                sum += w.as_rational().value();
                ++n;
            }
            return Weight::rational(ExtRat::of(sum / mpq_class(n)));
        },
        nullptr,
        [](const Weight& w) { return w.is_rational() && !w.as_rational().is_pos_inf(); },
        [](std::string_view t) -> std::optional<Weight> {
            auto r = ExtRat::parse(t);
            if (!r || r->is_pos_inf()) return std::nullopt;
            return Weight::rational(*r);
        },
        std::vector<Weight>{ninf(), rat(0), rat(1)});
    auto extended = adjoin_unit(base);
    auto avg = avgsup_domain();

    // compare on sequences over {-inf, 0, 1, 3, unit/inf} up to length 3
    std::vector<Weight> ext_samples{ninf(), rat(0), rat(1), rat(3), Weight::unit_marker()};
    std::vector<Weight> avg_samples{ninf(), rat(0), rat(1), rat(3), inf()};
    auto translate = [&](const Weight& w) { return w.is_unit_marker() ? inf() : w; };
    const std::size_t n = ext_samples.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            CHECK(translate(extended->add(ext_samples[i], ext_samples[j])) ==
                  avg->add(avg_samples[i], avg_samples[j]));
            for (std::size_t k = 0; k < n; ++k) {
                Weight lhs = extended->val(
                    std::vector<Weight>{ext_samples[i], ext_samples[j], ext_samples[k]});
                Weight rhs = avg->val(
                    std::vector<Weight>{avg_samples[i], avg_samples[j], avg_samples[k]});
                CHECK(translate(lhs) == rhs);
            }
        }
    }
}

TEST_CASE("fold_adapter presents valuations as left folds") {
    auto chain3 = chain_domain(3);
    CHECK(chain3->val(std::vector<Weight>{rat(1, 2), rat(1), rat(0)}) == rat(0));

    // binary running average with the infinities as unit and zero
    auto avg2 = fold_adapter(
        "avg2", DomainFlags{true, false, false, false, false}, ninf(), inf(),
        [](const Weight& a, const Weight& b) {
            return Weight::rational(max(a.as_rational(), b.as_rational()));
        },
        [](const Weight& a, const Weight& b) -> Weight {
            const ExtRat& x = a.as_rational();
            const ExtRat& y = b.as_rational();
            if (x.is_neg_inf() || y.is_neg_inf()) return Weight::rational(ExtRat::neg_inf());
            if (x.is_pos_inf()) return b;
            if (y.is_pos_inf()) return a;
            return Weight::rational(ExtRat::of((x.value() + y.value()) / 2));
        },
        [](const Weight& w) { return w.is_rational(); },
        [](std::string_view t) -> std::optional<Weight> {
            auto r = ExtRat::parse(t);
            if (!r) return std::nullopt;
            return Weight::rational(*r);
        },
        std::vector<Weight>{ninf(), rat(0), rat(2), inf()});
    CHECK(avg2->val(std::vector<Weight>{rat(2), rat(4)}) == rat(3));
    CHECK(avg2->val(std::vector<Weight>{rat(2), rat(4), rat(5)}) == rat(4));

    auto b = boolean_domain();
    CHECK(b->val(std::vector<Weight>{Weight::boolean(true), Weight::boolean(true)}) ==
          Weight::boolean(true));

    // a step violating annihilation is rejected at adaptation time
    CHECK_THROWS_AS(
        fold_adapter(
            "broken", DomainFlags{}, Weight::nat(0ul), Weight::nat(1ul),
            [](const Weight& a, const Weight& b) {
                return Weight::nat(mpz_class(a.as_nat() + b.as_nat()));
            },
            [](const Weight& a, const Weight& b) {
                return Weight::nat(mpz_class(a.as_nat() + b.as_nat())); // 2*0 != 0 as a product
            },
            [](const Weight& w) { return w.is_nat(); }, nullptr,
            std::vector<Weight>{Weight::nat(2ul)}),
        ValidationError);
}

TEST_CASE("axioms probe passes on every builtin domain spec") {
    for (const auto& spec : builtin_specs()) {
        CAPTURE(spec);
        DomainPtr d = make_domain(spec, kFixtures);
        AxiomsReport report = axioms_probe(*d, d->default_samples(), 4);
        for (const auto& check : report.checks) {
            CAPTURE(check.law);
            CAPTURE(check.witness);
            CHECK(check.passed);
        }
    }
}

TEST_CASE("axioms probe reports a witness for a broken annihilation law") {
    // fold step max: the zero 0 does not annihilate
    auto broken = std::make_shared<Domain>(
        "broken-max", DomainFlags{false, false, false, false, true},
        Weight::nat(0ul), Weight::nat(1ul),
        [](const Weight& a, const Weight& b) {
            return Weight::nat(mpz_class(a.as_nat() + b.as_nat()));
        },
        nullptr,
        [](const Weight& a, const Weight& b) {
            return Weight::nat(a.as_nat() > b.as_nat() ? a.as_nat() : b.as_nat());
        },
        [](const Weight& w) { return w.is_nat(); }, nullptr,
        std::vector<Weight>{Weight::nat(0ul), Weight::nat(2ul)});
    AxiomsReport report = axioms_probe(*broken, broken->default_samples(), 3);
    CHECK_FALSE(report.all_passed());
    bool found = false;
    for (const auto& check : report.checks) {
        if (check.law == "zero-annihilates-val") {
            CHECK_FALSE(check.passed);
            CHECK_FALSE(check.witness.empty());
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("canonical strings reparse to equal values") {
    for (const auto& spec : builtin_specs()) {
        CAPTURE(spec);
        DomainPtr d = make_domain(spec, kFixtures);
        for (const Weight& s : d->default_samples()) {
            CHECK(d->parse_weight(s.str()) == s);
        }
    }
    // rationals normalize on parse
    CHECK(avgsup_domain()->parse_weight("5/10") == rat(1, 2));
    CHECK(rat(1, 2).str() == "1/2");
    CHECK(rat(4, 2).str() == "2");
}

TEST_CASE("val equals the left fold on fold-presentable domains") {
    for (const auto& spec : builtin_specs()) {
        DomainPtr d = make_domain(spec, kFixtures);
        if (!d->flags().fold_presentable) continue;
        CAPTURE(spec);
        const auto& samples = d->default_samples();
        // exhaustive over sequences of length <= 3 (the probe covers longer)
        std::vector<std::vector<Weight>> seqs{{}};
        for (int round = 0; round < 3; ++round) {
            std::vector<std::vector<Weight>> next = seqs;
            for (const auto& seq : seqs)
                for (const auto& s : samples) {
                    auto longer = seq;
                    longer.push_back(s);
                    next.push_back(std::move(longer));
                }
            seqs = std::move(next);
        }
        for (const auto& seq : seqs) {
            Weight folded = d->one();
            for (const Weight& x : seq) folded = d->fold_step(folded, x);
            CHECK(d->val(seq) == folded);
        }
    }
}

TEST_CASE("fold closures of locally finite domains stabilize") {
    auto chain3 = chain_domain(3);
    auto closure = val_closure(*chain3, {rat(1, 2), rat(1)});
    CHECK(closure.size() == 2); // {1/2, 1}
    closure = val_closure(*chain3, chain3->default_samples());
    CHECK(closure.size() == 3);

    auto magma = make_domain("magma-fold magma4.mag", kFixtures);
    auto magma_closure = val_closure(*magma, magma->default_samples());
    CHECK(magma_closure.size() <= 4);

    auto lattice = make_domain("lattice diamond.lat", kFixtures);
    CHECK(val_closure(*lattice, lattice->default_samples()).size() <= 4);

    CHECK_THROWS_AS(val_closure(*avgsup_domain(), {rat(1)}), PreconditionError);
}

TEST_CASE("truncavg valuation image over a finite set stays finite") {
    // every mean of values in {0, 1} truncated to one digit lies on the
    // eleven-point grid; check growth has stopped well before the cap
    auto d = truncavg_domain(1);
    std::set<std::string> values;
    // means depend only on (sum, count); enumerate counts up to 60
    for (unsigned n = 1; n <= 60; ++n) {
        for (unsigned ones = 0; ones <= n; ++ones) {
            std::vector<Weight> seq;
            for (unsigned i = 0; i < n; ++i)
                seq.push_back(i < ones ? rat(1) : rat(0));
            values.insert(d->val(seq).str());
            if (values.size() > 10000) FAIL("closure exceeded the cap");
        }
    }
    CHECK(values.size() <= 11);
}

TEST_CASE("matrix magma over nat multiplies matrices through the fold") {
    auto m = matrix_magma(nat_domain(), 2);
    auto cell = [](unsigned long v) { return Weight::nat(v); };
    Weight a = Weight::matrix(2, {cell(1), cell(2), cell(3), cell(4)});
    Weight b = Weight::matrix(2, {cell(5), cell(6), cell(7), cell(8)});
    Weight product = m->val(std::vector<Weight>{a, b});
    CHECK(product == Weight::matrix(2, {cell(19), cell(22), cell(43), cell(50)}));
    CHECK(m->val(std::vector<Weight>{a}) == a);
    CHECK(m->parse_weight(a.str()) == a);
    AxiomsReport report = axioms_probe(*m, m->default_samples(), 3);
    CHECK(report.all_passed());
}

TEST_CASE("nat-product pairs follow the patched pair valuation") {
    auto d = make_domain("nat-product nat");
    const Weight zero = d->zero();
    const Weight one = d->one();
    CHECK(zero == Weight::pair(0, Weight::nat(0ul)));
    CHECK(one == Weight::pair(1, Weight::nat(0ul)));
    // the unit is not additively idempotent: (1,0) + (1,0) = (2,0)
    CHECK(d->add(one, one) == Weight::pair(2, Weight::nat(0ul)));
    Weight p23 = Weight::pair(2, Weight::nat(3ul));
    Weight p12 = Weight::pair(1, Weight::nat(2ul));
    CHECK(d->val(std::vector<Weight>{p23}) == p23);
    CHECK(d->val(std::vector<Weight>{p23, zero}) == zero);
    CHECK(d->val(std::vector<Weight>{p23, one}) == p23);
    // expansion: 3,3 then 2 multiplied out, counts added
    CHECK(d->val(std::vector<Weight>{p23, p12}) == Weight::pair(3, Weight::nat(18ul)));
    CHECK(d->parse_weight("(2,3)") == p23);
}

TEST_CASE("magma-fold respects the table order sensitivity") {
    auto d = make_domain("magma-fold magma4.mag", kFixtures);
    Weight n = Weight::element("n");
    // the fold is left-associated and the table is not associative:
    // (n*n)*n = m*n = 1 while n*(n*n) = n*m = n
    CHECK(d->val(std::vector<Weight>{n, n, n}) == Weight::element("1"));
    CHECK(d->fold_step(n, d->fold_step(n, n)) == Weight::element("n"));
}

TEST_CASE("malformed tables are rejected with the failed law") {
    LatticeTable bad;
    bad.elements = {"0", "1"};
    bad.bottom = "0";
    bad.top = "1";
    bad.join[{"0", "1"}] = "0"; // bottom not neutral
    bad.meet[{"0", "1"}] = "0";
    CHECK_THROWS_WITH_AS(lattice_domain(bad), doctest::Contains("bottom neutral"),
                         ValidationError);

    MagmaTable magma;
    magma.elements = {"0", "n", "1"};
    magma.zero = "0";
    magma.one = "1";
    for (const auto& x : magma.elements) {
        magma.add[{"0", x}] = x;
        magma.mul[{"0", x}] = "0";
        magma.mul[{x, "0"}] = "0";
        magma.mul[{"1", x}] = x;
        magma.mul[{x, "1"}] = x;
    }
    magma.add[{"n", "n"}] = "n";
    magma.add[{"n", "1"}] = "1";
    magma.add[{"1", "1"}] = "1";
    magma.mul[{"n", "n"}] = "n";
    magma.mul[{"0", "n"}] = "n"; // zero fails to annihilate on the left
    CHECK_THROWS_WITH_AS(magma_fold_domain(magma), doctest::Contains("annihilates"),
                         ValidationError);
}
