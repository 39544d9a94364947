#include <doctest.h>

#include <qcfl/bridge.hpp>
#include <qcfl/chomsky.hpp>
#include <qcfl/errors.hpp>
#include <qcfl/io.hpp>
#include <qcfl/series.hpp>

#include <map>

#include "corpus.hpp"
#include "oracles.hpp"

using namespace qcfl;
using namespace qcfl::testing;

TEST_CASE("bracket words: grammar membership equals the counter oracle") {
    for (std::vector<std::string> base : {std::vector<std::string>{"a"},
                                          std::vector<std::string>{"a", "b"}}) {
        BracketAlphabet brackets(base);
        WeightedGrammar flat = dyck_grammar(base);
        WeightedGrammar unamb = dyck_grammar_unambiguous(base);
        std::size_t limit = base.size() == 1 ? 8 : 6;
        for (const Word& w : words_up_to(brackets.all(), limit)) {
            bool counter = dyck_member(brackets, w);
            // the flat grammar has infinitely many derivations per word, so
            // its membership is checked with the span-table oracle
            CHECK(cyk_member(flat, w) == counter);
            CHECK(membership(unamb, w) == counter);
        }
    }

    BracketAlphabet one({"y"});
    CHECK(dyck_member(one, {"y", "y~"}));
    CHECK_FALSE(dyck_member(one, {"y~", "y"}));
    BracketAlphabet two({"y1", "y2"});
    CHECK(dyck_member(two, {"y1", "y2", "y2~", "y1~"}));
}

TEST_CASE("the two-nonterminal bracket grammar is unambiguous") {
    WeightedGrammar unamb = dyck_grammar_unambiguous({"a", "b"});
    // every generated bracket word of length <= 10 has exactly one derivation
    for (const auto& [w, count] : generate_words(unamb, 10)) {
        CAPTURE(format_word(w, unamb.terminals()));
        CHECK(count == 1);
    }
    // the flat grammar does not even have finite derivation sets
    CHECK_FALSE(finite_derivations_check(dyck_grammar({"a"})).ok);
    CHECK_THROWS_AS(unambiguity_probe(dyck_grammar({"a"}), 4), PreconditionError);
}

TEST_CASE("alphabetic morphisms value words through the valuation") {
    auto avg = avgsup_domain();
    AlphabeticMorphism h(avg, {"c", "d"}, {"a"},
                         {{"c", {Weight::rational(3), {"a"}}},
                          {"d", {avg->one(), {}}}});
    Monome m = apply_morphism_word(h, {"c", "d", "c"});
    CHECK(m.weight == Weight::rational(3)); // avg(3, 3) after deleting the unit
    CHECK(m.word == Word{"a", "a"});

    Monome empty = apply_morphism_word(h, {});
    CHECK(empty.weight == avg->one());
    CHECK(empty.word.empty());

    // a zero-weight letter annihilates the whole image weight
    auto nat = nat_domain();
    AlphabeticMorphism hz(nat, {"c"}, {"a"}, {{"c", {Weight::nat(0ul), {"a"}}}});
    Monome zero = apply_morphism_word(hz, {"c", "c"});
    CHECK(zero.weight == Weight::nat(0ul));
    CHECK(zero.word == Word{"a", "a"});

    CHECK_THROWS_AS(apply_morphism_word(h, {"e"}), ValidationError);
}

TEST_CASE("production grammar encodes derivations as words") {
    auto avg = avgsup_domain();
    WeightedGrammar g = expr_grammar(avg, 3, 6);
    ProductionGrammar pg = production_grammar(g);

    CHECK(unambiguity_probe(pg.grammar, 8).unambiguous);

    // the morphism sends the sum production to (3, eps) and the variable
    // production to (unit, x)
    CHECK(pg.morphism.image("p1").weight == Weight::rational(3));
    CHECK(pg.morphism.image("p1").word.empty());
    CHECK(pg.morphism.image("p4").weight == avg->one());
    CHECK(pg.morphism.image("p4").word == Word{"x"});

    // a derivation word maps to (value, original word)
    WeightedGrammar hnf = to_head_normal_form(g);
    Word w = {"x", "*", "x", "+", "x", "*", "x"};
    for (const Derivation& d : enumerate_derivations(hnf, w)) {
        Word encoded = derivation_ids(hnf, d);
        Monome m = apply_morphism_word(pg.morphism, encoded);
        CHECK(m.weight == Weight::rational(5));
        CHECK(m.word == w);
        // the encoded word is generated by the production grammar
        CHECK(membership(pg.grammar, encoded));
    }

    // language of the production grammar = all derivation encodings
    auto probe = generate_support(pg.grammar, 4);
    for (const auto& [word, value] : probe) {
        (void)value;
        Monome m = apply_morphism_word(pg.morphism, word);
        auto ds = enumerate_derivations(hnf, m.word);
        bool found = false;
        for (const Derivation& d : ds)
            if (derivation_ids(hnf, d) == word) found = true;
        CHECK(found);
    }
}

TEST_CASE("the morphism image of the production grammar is the series") {
    for (const auto& d : core_domains()) {
        for (const auto& name : {"anbn", "expr-u", "palin"}) {
            CAPTURE(d->name());
            CAPTURE(name);
            WeightedGrammar g = [&]() {
                for (auto& [n, gram] : fixture_grammars(d))
                    if (n == name) return gram;
                throw std::logic_error("fixture not found");
            }();
            ProductionGrammar pg = production_grammar(g);
            // sum the images of all generated encodings per word and compare
            // with direct evaluation
            SupportMap image;
            for (const auto& [enc, value] : generate_support(pg.grammar, 12)) {
                (void)value;
                Monome m = apply_morphism_word(pg.morphism, enc);
                if (m.word.size() > 4) continue;
                auto it = image.find(m.word);
                if (it == image.end())
                    image.emplace(m.word, m.weight);
                else
                    it->second = d->add(it->second, m.weight);
            }
            for (const Word& w : words_up_to(g.terminals(), 2)) {
                Weight direct = evaluate(g, w);
                auto it = image.find(w);
                Weight via_image = it == image.end() ? d->zero() : it->second;
                CHECK(direct == via_image);
            }
        }
    }
}

TEST_CASE("slot-bracket encoding of a linear grammar") {
    auto b = boolean_domain();
    // S -> a S | eps, already head normal form
    WeightedGrammar g(b, {"a"}, {"S"}, "S",
                      {{"r1", "S", {"a", "S"}, b->one()},
                       {"r2", "S", {}, b->one()}});
    CsEncoding enc = cs_encode_classical(g);

    // one slot per production
    CHECK(enc.brackets.base() == std::vector<std::string>{"r1.1", "r2.1"});
    CHECK(enc.letter_map.at("r1.1") == "a");
    CHECK(enc.letter_map.at("r2.1") == "");
    CHECK(enc.letter_map.at("r1.1~") == "");

    // the derivation r1 r2 encodes to r1.1 r2.1 r2.1~ r1.1~
    auto ds = enumerate_derivations(g, {"a"});
    REQUIRE(ds.size() == 1);
    Word encoded = cs_encode_derivation(g, enc, ds[0]);
    CHECK(encoded == Word{"r1.1", "r2.1", "r2.1~", "r1.1~"});
    CHECK(dyck_member(enc.brackets, encoded));
    CHECK(enc.control.accepts(encoded));

    // image under the letter map is the derived word
    Word image;
    for (const auto& letter : encoded) {
        const std::string& t = enc.letter_map.at(letter);
        if (!t.empty()) image.push_back(t);
    }
    CHECK(image == Word{"a"});
}

namespace {

/// All well-nested control-conformant bracket words of length <= n, via the
/// intersection grammar of the composition pipeline.
std::map<Word, std::size_t, ShortlexLess> bracket_language(const CsEncoding& enc, std::size_t n) {
    WeightedGrammar dyck = dyck_grammar_unambiguous(enc.brackets.base());
    WeightedGrammar eps_free = eps_eliminate_unambiguous(dyck);
    WeightedGrammar product =
        regular_intersect_unambiguous(eps_free, enc.control, enc.control.accepts_epsilon());
    return generate_words(product, n);
}

} // namespace

TEST_CASE("bracket preimages are in bijection with derivations") {
    auto nat = nat_domain();
    for (const auto& name : {"anbn", "expr-u", "catalan", "two-paths"}) {
        CAPTURE(name);
        WeightedGrammar g = [&]() {
            for (auto& [n, gram] : fixture_grammars(nat))
                if (n == name) return gram;
            throw std::logic_error("fixture not found");
        }();
        ProductionGrammar pg = production_grammar(g);
        CsEncoding enc = cs_encode_classical(pg.grammar);
        WeightedGrammar hnf = to_head_normal_form(g);

        // encodings of all derivations with yield <= 4
        std::map<Word, std::size_t, ShortlexLess> expected;
        std::size_t max_len = 0;
        for_each_derivation_up_to(hnf, 4, [&](const Word&, const std::vector<std::size_t>& steps) {
            // rebuild the derivation over the production grammar: same
            // production indexes by construction
            Derivation d{steps, {}};
            Word enc_word = cs_encode_derivation(pg.grammar, enc, d);
            max_len = std::max(max_len, enc_word.size());
            ++expected[enc_word];
            return true;
        });
        for (const auto& [w, count] : expected) CHECK(count == 1);

        // the control-conformant well-nested words up to that length that
        // map to words of length <= 4 are exactly the encodings
        std::map<Word, std::size_t, ShortlexLess> actual;
        for (const auto& [w, count] : bracket_language(enc, max_len)) {
            CHECK(count == 1);
            Monome m = apply_morphism_word(pg.morphism, [&]() {
                Word delta;
                for (const auto& letter : w) {
                    const std::string& t = enc.letter_map.at(letter);
                    if (!t.empty()) delta.push_back(t);
                }
                return delta;
            }());
            if (m.word.size() <= 4) actual[w] = count;
        }
        CHECK(actual == expected);
    }
}

TEST_CASE("epsilon elimination preserves the language minus the empty word") {
    auto nat = nat_domain();
    WeightedGrammar g = anbn_grammar(nat);
    WeightedGrammar slim = eps_eliminate_unambiguous(g);

    for (const auto& p : slim.productions()) CHECK_FALSE(p.rhs.empty());
    CHECK_FALSE(membership(slim, {}));
    for (const Word& w : words_up_to({"a", "b"}, 6)) {
        bool expected = !w.empty() && membership(g, w);
        CHECK(membership(slim, w) == expected);
    }
    CHECK(unambiguity_probe(slim, 6).unambiguous);

    // bracket grammar fixture
    WeightedGrammar dyck = dyck_grammar_unambiguous({"a"});
    WeightedGrammar dyck_slim = eps_eliminate_unambiguous(dyck);
    CHECK(unambiguity_probe(dyck_slim, 6).unambiguous);
    BracketAlphabet brackets({"a"});
    for (const Word& w : words_up_to(dyck.terminals(), 6)) {
        bool expected = !w.empty() && dyck_member(brackets, w);
        CHECK(membership(dyck_slim, w) == expected);
    }

    CHECK_THROWS_AS(eps_eliminate_unambiguous(catalan_grammar(nat)), PreconditionError);
}

TEST_CASE("intersection with a deterministic automaton") {
    auto nat = nat_domain();
    WeightedGrammar anbn = eps_eliminate_unambiguous(anbn_grammar(nat));

    // a* b as a two-state automaton
    Dfa astar_b({"a", "b"}, {"s0", "s1"}, "s0", {"s1"},
                {{"s0", "a", "s0"}, {"s0", "b", "s1"}});
    WeightedGrammar product = regular_intersect_unambiguous(anbn, astar_b);

    for (const Word& w : words_up_to({"a", "b"}, 6)) {
        bool expected = membership(anbn, w) && astar_b.accepts(w);
        CHECK(membership(product, w) == expected);
    }
    // the intersection is {ab}
    CHECK(membership(product, {"a", "b"}));
    CHECK_FALSE(membership(product, {"a", "a", "b", "b"}));
    CHECK(unambiguity_probe(product, 6).unambiguous);

    // epsilon-free inputs are required
    CHECK_THROWS_AS(regular_intersect_unambiguous(anbn_grammar(nat), astar_b), PreconditionError);

    // readding the empty word goes through the fresh start symbol
    WeightedGrammar with_eps = regular_intersect_unambiguous(anbn, astar_b, true);
    CHECK(membership(with_eps, {}));
    CHECK(unambiguity_probe(with_eps, 5).unambiguous);
}

TEST_CASE("morphism machine: state count and simple images") {
    auto b = boolean_domain();
    // base machine over {c, d} accepting c d
    WeightedPushdown base(b, {"q0", "q1"}, {"Z", "B"}, "q0", "Z", {"q1"},
                          {{"t1", "q0", "c", "Z", "q0", {"B"}, b->one()},
                           {"t2", "q0", "d", "B", "q1", {}, b->one()}});
    AlphabeticMorphism h(b, {"c", "d"}, {"a"},
                         {{"c", {b->one(), {"a"}}}, {"d", {b->one(), {}}}});
    WeightedPushdown image = morphism_pda(base, h, true);
    CHECK(image.states().size() == 1 + base.states().size() * (2 + 1));
    CHECK(membership(image, {"a"}));
    CHECK_FALSE(membership(image, {"a", "a"}));
    CHECK_FALSE(membership(image, {}));

    // over a domain that is not completely idempotent an ambiguous base is
    // rejected
    auto nat = nat_domain();
    AlphabeticMorphism hn(nat, {"c", "d"}, {"a"},
                          {{"c", {nat->one(), {"a"}}}, {"d", {nat->one(), {}}}});
    WeightedPushdown base_n(nat, {"q0", "q1"}, {"Z", "B"}, "q0", "Z", {"q1"},
                            {{"t1", "q0", "c", "Z", "q0", {"B"}, nat->one()},
                             {"t2", "q0", "d", "B", "q1", {}, nat->one()}});
    CHECK_THROWS_AS(morphism_pda(base_n, hn, false), PreconditionError);
}

TEST_CASE("morphism machine image agrees with bounded preimage sums") {
    // ambiguous base over a completely idempotent domain: the image value is
    // the sup over all preimage values, cross-checked by enumerating the
    // base language
    auto avg = avgsup_domain();
    WeightedPushdown base = grammar_to_pda(catalan_grammar(boolean_domain()));
    AlphabeticMorphism h(avg, {"a"}, {"b"}, {{"a", {Weight::rational(3), {"b"}}}});
    WeightedPushdown image = morphism_pda(base, h, false);

    // brute force: words of the base language mapped through the morphism
    SupportMap expected;
    for (const auto& [v, count] : generate_words(base, 6)) {
        (void)count;
        Monome m = apply_morphism_word(h, v);
        auto it = expected.find(m.word);
        if (it == expected.end())
            expected.emplace(m.word, m.weight);
        else
            it->second = avg->add(it->second, m.weight);
    }
    for (const Word& w : words_up_to({"b"}, 6)) {
        auto it = expected.find(w);
        Weight want = it == expected.end() ? avg->zero() : it->second;
        CHECK(evaluate(image, w) == want);
    }
}

TEST_CASE("composing a decomposition reproduces the series") {
    for (const auto& d : core_domains()) {
        for (const auto& name : {"anbn", "two-paths"}) {
            CAPTURE(d->name());
            CAPTURE(name);
            WeightedGrammar g = [&]() {
                for (auto& [n, gram] : fixture_grammars(d))
                    if (n == name) return gram;
                throw std::logic_error("fixture not found");
            }();
            CSDecomposition dec = decompose(g);
            WeightedPushdown composed = compose(dec);
            CompareResult r = compare_up_to(grammar_series(g), pushdown_series(composed),
                                            g.terminals(), 5);
            CAPTURE(format_word(r.witness, g.terminals()));
            CHECK(r.equal);
        }
    }
}

TEST_CASE("bracket alphabet size is the slot count") {
    auto nat = nat_domain();
    WeightedGrammar g = anbn_grammar(nat);
    ProductionGrammar pg = production_grammar(g);
    CsEncoding enc = cs_encode_classical(pg.grammar);
    std::size_t slots = 0;
    for (const auto& p : pg.grammar.productions()) {
        std::size_t children = 0;
        for (const auto& s : p.rhs)
            if (pg.grammar.is_nonterminal(s)) ++children;
        slots += std::max<std::size_t>(children, 1);
    }
    CHECK(enc.brackets.base().size() == slots);
}

TEST_CASE("hand-written decompositions compose too") {
    auto b = boolean_domain();

    // Y = {y}, control (y y~)*, images y -> a and y~ -> eps: the image
    // series is the characteristic series of a*
    BracketAlphabet brackets({"y"});
    Dfa control({"y", "y~"}, {"s0", "s1"}, "s0", {"s0"},
                {{"s0", "y", "s1"}, {"s1", "y~", "s0"}});
    AlphabeticMorphism h(b, {"y", "y~"}, {"a"},
                         {{"y", {b->one(), {"a"}}}, {"y~", {b->one(), {}}}});
    CSDecomposition dec{brackets, control, h};
    WeightedPushdown composed = compose(dec);
    for (const Word& w : words_up_to({"a"}, 6)) {
        CAPTURE(format_word(w, {"a"}));
        CHECK(evaluate(composed, w) == b->one());
    }

    // an empty control language composes to the zero series
    Dfa empty_control({"y", "y~"}, {"s0"}, "s0", {}, {});
    CSDecomposition zero{brackets, empty_control, h};
    WeightedPushdown nothing = compose(zero);
    for (const Word& w : words_up_to({"a"}, 4)) CHECK(evaluate(nothing, w) == b->zero());
}
