#include "qcfl/domain.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <deque>
#include <set>
#include <sstream>

namespace qcfl {

Domain::Domain(std::string name, DomainFlags flags, Weight zero, Weight one,
               BinaryOp add, ValOp val, BinaryOp fold_step,
               Predicate contains, Parser parse, std::vector<Weight> samples)
    : name_(std::move(name)),
      flags_(flags),
      zero_(std::move(zero)),
      one_(std::move(one)),
      add_(std::move(add)),
      val_(std::move(val)),
      fold_step_(std::move(fold_step)),
      contains_(std::move(contains)),
      parse_(std::move(parse)),
      samples_(std::move(samples)) {
    if (flags_.fold_presentable && !fold_step_)
        throw ValidationError("domain " + name_ + ": fold-presentable without a fold step");
    if (!flags_.fold_presentable && !val_)
        throw ValidationError("domain " + name_ + ": no valuation given");
}

void Domain::require_carrier(const Weight& w) const {
    if (!contains_(w))
        throw DomainMismatchError("value " + w.str() + " is not in the carrier of domain " + name_);
}

Weight Domain::add(const Weight& a, const Weight& b) const {
    require_carrier(a);
    require_carrier(b);
    return add_(a, b);
}

Weight Domain::val(std::span<const Weight> seq) const {
    for (const Weight& w : seq) require_carrier(w);
    if (val_) return val_(seq);
    Weight acc = one_;
    for (const Weight& w : seq) acc = fold_step_(acc, w);
    return acc;
}

Weight Domain::fold_step(const Weight& a, const Weight& b) const {
    if (!flags_.fold_presentable || !fold_step_)
        throw PreconditionError("domain " + name_ + " is not fold presentable");
    require_carrier(a);
    require_carrier(b);
    return fold_step_(a, b);
}

Weight Domain::parse_weight(std::string_view text) const {
    auto w = parse_(text);
    if (!w) throw ValidationError("cannot parse '" + std::string(text) + "' as a weight of domain " + name_);
    if (!contains_(*w))
        throw ValidationError("value " + w->str() + " is outside the carrier of domain " + name_);
    return *w;
}

// --- boolean ----------------------------------------------------------------

DomainPtr boolean_domain() {
    static const DomainPtr d = std::make_shared<Domain>(
        "boolean",
        DomainFlags{true, true, true, true, true},
        Weight::boolean(false), Weight::boolean(true),
        [](const Weight& a, const Weight& b) { return Weight::boolean(a.as_boolean() || b.as_boolean()); },
        nullptr,
        [](const Weight& a, const Weight& b) { return Weight::boolean(a.as_boolean() && b.as_boolean()); },
        [](const Weight& w) { return w.is_boolean(); },
        [](std::string_view t) -> std::optional<Weight> {
            if (t == "true") return Weight::boolean(true);
            if (t == "false") return Weight::boolean(false);
            return std::nullopt;
        },
        std::vector<Weight>{Weight::boolean(false), Weight::boolean(true)});
    return d;
}

// --- nat --------------------------------------------------------------------

DomainPtr nat_domain() {
    static const DomainPtr d = std::make_shared<Domain>(
        "nat",
        DomainFlags{false, false, false, false, true},
        Weight::nat(0ul), Weight::nat(1ul),
        [](const Weight& a, const Weight& b) { return Weight::nat(mpz_class(a.as_nat() + b.as_nat())); },
        nullptr,
        [](const Weight& a, const Weight& b) { return Weight::nat(mpz_class(a.as_nat() * b.as_nat())); },
        [](const Weight& w) { return w.is_nat() && w.as_nat() >= 0; },
        [](std::string_view t) -> std::optional<Weight> {
            if (t.empty()) return std::nullopt;
            for (char c : t)
                if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
            return Weight::nat(mpz_class(std::string(t), 10));
        },
        std::vector<Weight>{Weight::nat(0ul), Weight::nat(1ul), Weight::nat(2ul), Weight::nat(3ul)});
    return d;
}

// --- tropical ---------------------------------------------------------------

DomainPtr tropical_domain() {
    auto step = [](const Weight& a, const Weight& b) {
        const ExtRat& x = a.as_rational();
        const ExtRat& y = b.as_rational();
        if (x.is_pos_inf() || y.is_pos_inf()) return Weight::rational(ExtRat::pos_inf());
        return Weight::rational(ExtRat::of(mpq_class(x.value() + y.value())));
    };
    static const DomainPtr d = std::make_shared<Domain>(
        "tropical",
        DomainFlags{true, true, true, false, true},
        Weight::rational(ExtRat::pos_inf()), Weight::rational(0),
        [](const Weight& a, const Weight& b) {
            return Weight::rational(min(a.as_rational(), b.as_rational()));
        },
        nullptr, step,
        [](const Weight& w) {
            if (!w.is_rational()) return false;
            const ExtRat& r = w.as_rational();
            return r.is_pos_inf() || (r.is_integer() && ExtRat::of(0) <= r);
        },
        [](std::string_view t) -> std::optional<Weight> {
            auto r = ExtRat::parse(t);
            if (!r) return std::nullopt;
            return Weight::rational(*r);
        },
        std::vector<Weight>{Weight::rational(ExtRat::pos_inf()), Weight::rational(0), Weight::rational(1),
         Weight::rational(3)});
    return d;
}

// --- avgsup / truncavg --------------------------------------------------------

namespace {

std::optional<mpq_class> exact_mean_dropping_units(std::span<const Weight> seq, bool& neg_inf,
                                                   bool& empty) {
    mpq_class sum = 0;
    unsigned long n = 0;
    neg_inf = false;
    for (const Weight& w : seq) {
        const ExtRat& r = w.as_rational();
        if (r.is_pos_inf()) continue;
        if (r.is_neg_inf()) {
            neg_inf = true;
            return std::nullopt;
        }
        sum += r.value();
        ++n;
    }
    empty = (n == 0);
    if (empty) return std::nullopt;
    return mpq_class(sum / mpq_class(n));
}

std::optional<Weight> parse_extrat(std::string_view t) {
    auto r = ExtRat::parse(t);
    if (!r) return std::nullopt;
    return Weight::rational(*r);
}

Weight sup_weight(const Weight& a, const Weight& b) {
    return Weight::rational(max(a.as_rational(), b.as_rational()));
}

} // namespace

DomainPtr avgsup_domain() {
    static const DomainPtr d = std::make_shared<Domain>(
        "avgsup",
        DomainFlags{true, true, true, false, false},
        Weight::rational(ExtRat::neg_inf()), Weight::rational(ExtRat::pos_inf()),
        sup_weight,
        [](std::span<const Weight> seq) {
            bool neg_inf = false, empty = false;
            auto mean = exact_mean_dropping_units(seq, neg_inf, empty);
            if (neg_inf) return Weight::rational(ExtRat::neg_inf());
            if (empty) return Weight::rational(ExtRat::pos_inf());
            return Weight::rational(ExtRat::of(*mean));
        },
        nullptr,
        [](const Weight& w) { return w.is_rational(); },
        parse_extrat,
        std::vector<Weight>{Weight::rational(ExtRat::neg_inf()), Weight::rational(0), Weight::rational(1),
         Weight::rational(ExtRat::pos_inf())});
    return d;
}

DomainPtr truncavg_domain(unsigned digits) {
    mpz_class scale = 1;
    for (unsigned i = 0; i < digits; ++i) scale *= 10;
    auto on_grid = [scale](const ExtRat& r) {
        if (!r.is_finite()) return true;
        mpq_class scaled = r.value() * mpq_class(scale);
        scaled.canonicalize();
        return scaled.get_den() == 1;
    };
    return std::make_shared<Domain>(
        "truncavg " + std::to_string(digits),
        DomainFlags{true, true, true, true, false},
        Weight::rational(ExtRat::neg_inf()), Weight::rational(ExtRat::pos_inf()),
        sup_weight,
        [scale](std::span<const Weight> seq) {
            bool neg_inf = false, empty = false;
            auto mean = exact_mean_dropping_units(seq, neg_inf, empty);
            if (neg_inf) return Weight::rational(ExtRat::neg_inf());
            if (empty) return Weight::rational(ExtRat::pos_inf());
            // truncate toward zero onto the digit grid
            mpz_class t = (mean->get_num() * scale) / mean->get_den();
            return Weight::rational(ExtRat::of(mpq_class(t, scale)));
        },
        nullptr,
        [on_grid](const Weight& w) { return w.is_rational() && on_grid(w.as_rational()); },
        parse_extrat,
        std::vector<Weight>{Weight::rational(ExtRat::neg_inf()), Weight::rational(0),
         Weight::rational(ExtRat::of(mpq_class(mpz_class(1), scale))), Weight::rational(ExtRat::pos_inf())});
}

// --- chain lattice -----------------------------------------------------------

DomainPtr chain_domain(unsigned n) {
    if (n < 2) throw ValidationError("chain lattice needs at least 2 elements");
    const long den = static_cast<long>(n) - 1;
    auto in_chain = [den](const Weight& w) {
        if (!w.is_rational()) return false;
        const ExtRat& r = w.as_rational();
        if (!r.is_finite()) return false;
        if (r < ExtRat::of(0) || ExtRat::of(1) < r) return false;
        mpq_class scaled = r.value() * den;
        scaled.canonicalize();
        return scaled.get_den() == 1;
    };
    std::vector<Weight> samples;
    for (unsigned k = 0; k < n && samples.size() < 4; ++k)
        samples.push_back(Weight::rational(ExtRat::of(mpq_class(k, den))));
    if (samples.back() != Weight::rational(1))
        samples.back() = Weight::rational(1);
    return std::make_shared<Domain>(
        "chain " + std::to_string(n),
        DomainFlags{true, true, true, true, true},
        Weight::rational(0), Weight::rational(1),
        sup_weight,
        nullptr,
        [](const Weight& a, const Weight& b) {
            return Weight::rational(min(a.as_rational(), b.as_rational()));
        },
        in_chain, parse_extrat, std::move(samples));
}

// --- explicit lattice ---------------------------------------------------------

namespace {

using Table = std::map<std::pair<std::string, std::string>, std::string>;

/// Symmetrizes and fills the diagonal of a join/meet style table; checks
/// totality and commutativity.
Table normalize_lattice_table(const Table& raw, const std::vector<std::string>& elems,
                              const std::string& which) {
    Table t;
    std::set<std::string> universe(elems.begin(), elems.end());
    for (const auto& [key, value] : raw) {
        if (!universe.count(key.first) || !universe.count(key.second) || !universe.count(value))
            throw ValidationError(which + " table mentions an undeclared element");
        t[key] = value;
    }
    for (const auto& x : elems) {
        for (const auto& y : elems) {
            auto it = t.find({x, y});
            auto rev = t.find({y, x});
            if (it == t.end() && rev != t.end()) {
                t[{x, y}] = rev->second;
            } else if (it != t.end() && rev != t.end() && it->second != rev->second) {
                throw ValidationError(which + " violates commutativity at (" + x + "," + y + ")");
            } else if (it == t.end() && rev == t.end()) {
                if (x == y) {
                    t[{x, y}] = x; // idempotence defines the diagonal
                } else {
                    throw ValidationError(which + " table is missing entry (" + x + "," + y + ")");
                }
            }
        }
    }
    return t;
}

const std::string& table_get(const Table& t, const std::string& x, const std::string& y) {
    return t.at({x, y});
}

} // namespace

DomainPtr lattice_domain(const LatticeTable& table, std::string name) {
    const auto& elems = table.elements;
    if (elems.empty()) throw ValidationError("lattice has no elements");
    std::set<std::string> universe(elems.begin(), elems.end());
    if (universe.size() != elems.size()) throw ValidationError("duplicate lattice element");
    if (!universe.count(table.bottom) || !universe.count(table.top))
        throw ValidationError("lattice bottom/top must be declared elements");

    Table join = normalize_lattice_table(table.join, elems, "join");
    Table meet = normalize_lattice_table(table.meet, elems, "meet");

    auto check_law = [&](bool ok, const std::string& law, const std::string& witness) {
        if (!ok) throw ValidationError("lattice law violated: " + law + " at " + witness);
    };
    for (const auto& x : elems) {
        check_law(table_get(join, x, x) == x, "join idempotence", x);
        check_law(table_get(meet, x, x) == x, "meet idempotence", x);
        check_law(table_get(join, table.bottom, x) == x, "bottom neutral for join", x);
        check_law(table_get(meet, table.top, x) == x, "top neutral for meet", x);
        for (const auto& y : elems) {
            check_law(table_get(join, x, table_get(meet, x, y)) == x, "absorption join(x,meet(x,y))=x",
                      "(" + x + "," + y + ")");
            check_law(table_get(meet, x, table_get(join, x, y)) == x, "absorption meet(x,join(x,y))=x",
                      "(" + x + "," + y + ")");
            for (const auto& z : elems) {
                check_law(table_get(join, table_get(join, x, y), z) == table_get(join, x, table_get(join, y, z)),
                          "join associativity", "(" + x + "," + y + "," + z + ")");
                check_law(table_get(meet, table_get(meet, x, y), z) == table_get(meet, x, table_get(meet, y, z)),
                          "meet associativity", "(" + x + "," + y + "," + z + ")");
            }
        }
    }

    std::vector<Weight> samples;
    samples.push_back(Weight::element(table.bottom));
    for (const auto& e : elems)
        if (e != table.bottom && e != table.top && samples.size() < 3) samples.push_back(Weight::element(e));
    samples.push_back(Weight::element(table.top));

    auto contains = [universe](const Weight& w) { return w.is_element() && universe.count(w.as_element()) > 0; };
    return std::make_shared<Domain>(
        std::move(name),
        DomainFlags{true, true, true, true, true},
        Weight::element(table.bottom), Weight::element(table.top),
        [join](const Weight& a, const Weight& b) {
            return Weight::element(table_get(join, a.as_element(), b.as_element()));
        },
        nullptr,
        [meet](const Weight& a, const Weight& b) {
            return Weight::element(table_get(meet, a.as_element(), b.as_element()));
        },
        contains,
        [universe](std::string_view t) -> std::optional<Weight> {
            std::string s(t);
            if (universe.count(s)) return Weight::element(std::move(s));
            return std::nullopt;
        },
        std::move(samples));
}

// --- explicit unital monoid-magma ---------------------------------------------

DomainPtr magma_fold_domain(const MagmaTable& table, std::string name) {
    const auto& elems = table.elements;
    if (elems.empty()) throw ValidationError("magma has no elements");
    std::set<std::string> universe(elems.begin(), elems.end());
    if (universe.size() != elems.size()) throw ValidationError("duplicate magma element");
    if (!universe.count(table.zero) || !universe.count(table.one))
        throw ValidationError("magma zero/one must be declared elements");

    Table add = normalize_lattice_table(table.add, elems, "add");
    Table mul;
    for (const auto& [key, value] : table.mul) {
        if (!universe.count(key.first) || !universe.count(key.second) || !universe.count(value))
            throw ValidationError("mul table mentions an undeclared element");
        mul[key] = value;
    }
    for (const auto& x : elems)
        for (const auto& y : elems)
            if (!mul.count({x, y}))
                throw ValidationError("mul table is missing entry (" + x + "," + y + ")");

    auto check_law = [&](bool ok, const std::string& law, const std::string& witness) {
        if (!ok) throw ValidationError("magma law violated: " + law + " at " + witness);
    };
    bool add_idempotent = true;
    for (const auto& x : elems) {
        check_law(table_get(add, table.zero, x) == x, "zero neutral for add", x);
        check_law(table_get(mul, table.zero, x) == table.zero, "zero annihilates mul (left)", x);
        check_law(table_get(mul, x, table.zero) == table.zero, "zero annihilates mul (right)", x);
        check_law(table_get(mul, table.one, x) == x, "one neutral for mul (left)", x);
        check_law(table_get(mul, x, table.one) == x, "one neutral for mul (right)", x);
        if (table_get(add, x, x) != x) add_idempotent = false;
        for (const auto& y : elems)
            for (const auto& z : elems)
                check_law(table_get(add, table_get(add, x, y), z) == table_get(add, x, table_get(add, y, z)),
                          "add associativity", "(" + x + "," + y + "," + z + ")");
    }

    std::vector<Weight> samples;
    samples.push_back(Weight::element(table.zero));
    for (const auto& e : elems)
        if (e != table.zero && e != table.one && samples.size() < 3) samples.push_back(Weight::element(e));
    samples.push_back(Weight::element(table.one));

    // finite carrier: infinitary sums are determined exactly when addition is
    // idempotent
    return std::make_shared<Domain>(
        std::move(name),
        DomainFlags{add_idempotent, add_idempotent, add_idempotent, true, true},
        Weight::element(table.zero), Weight::element(table.one),
        [add](const Weight& a, const Weight& b) {
            return Weight::element(table_get(add, a.as_element(), b.as_element()));
        },
        nullptr,
        [mul](const Weight& a, const Weight& b) {
            return Weight::element(table_get(mul, a.as_element(), b.as_element()));
        },
        [universe](const Weight& w) { return w.is_element() && universe.count(w.as_element()) > 0; },
        [universe](std::string_view t) -> std::optional<Weight> {
            std::string s(t);
            if (universe.count(s)) return Weight::element(std::move(s));
            return std::nullopt;
        },
        std::move(samples));
}

// --- adjoin a fresh unit --------------------------------------------------------

DomainPtr adjoin_unit(DomainPtr inner) {
    if (!inner) throw ValidationError("adjoin-unit needs an inner domain");
    DomainFlags flags = inner->flags();
    const Weight unit = Weight::unit_marker();

    Domain::BinaryOp add = [inner, unit](const Weight& a, const Weight& b) -> Weight {
        if (a.is_unit_marker() || b.is_unit_marker()) return unit;
        return inner->add(a, b);
    };
    Domain::ValOp val;
    Domain::BinaryOp step;
    if (flags.fold_presentable) {
        step = [inner](const Weight& a, const Weight& b) -> Weight {
            if (a.is_unit_marker()) return b;
            if (b.is_unit_marker()) return a;
            return inner->fold_step(a, b);
        };
    } else {
        val = [inner, unit](std::span<const Weight> seq) -> Weight {
            std::vector<Weight> rest;
            rest.reserve(seq.size());
            for (const Weight& w : seq)
                if (!w.is_unit_marker()) rest.push_back(w);
            if (rest.empty()) return unit;
            return inner->val(rest);
        };
    }

    std::vector<Weight> samples;
    for (const Weight& s : inner->default_samples())
        if (samples.size() < 3) samples.push_back(s);
    samples.push_back(unit);

    return std::make_shared<Domain>(
        "adjoin-unit " + inner->name(), flags, inner->zero(), unit,
        std::move(add), std::move(val), std::move(step),
        [inner](const Weight& w) { return w.is_unit_marker() || inner->contains(w); },
        [inner](std::string_view t) -> std::optional<Weight> {
            if (t == "unit") return Weight::unit_marker();
            try {
                return inner->parse_weight(t);
            } catch (const ValidationError&) {
                return std::nullopt;
            }
        },
        std::move(samples));
}

// --- N x K pairs -------------------------------------------------------------

DomainPtr nat_product(DomainPtr inner) {
    if (!inner) throw ValidationError("nat-product needs an inner domain");
    const Weight zero = Weight::pair(0, inner->zero());
    const Weight one = Weight::pair(1, inner->zero());

    auto val = [inner, zero, one](std::span<const Weight> seq) -> Weight {
        std::vector<Weight> rest;
        rest.reserve(seq.size());
        for (const Weight& w : seq)
            if (w != one) rest.push_back(w);
        if (rest.empty()) return one;
        if (rest.size() == 1) return rest.front();
        for (const Weight& w : rest)
            if (w == zero) return zero;
        mpz_class total = 0;
        std::vector<Weight> expansion;
        for (const Weight& w : rest) {
            const auto& p = w.as_pair();
            total += p.count;
            if (p.count == 0 || *p.inner == inner->zero()) continue;
            if (!p.count.fits_ulong_p())
                throw ValidationError("pair count too large to expand");
            unsigned long copies = p.count.get_ui();
            for (unsigned long i = 0; i < copies; ++i) expansion.push_back(*p.inner);
        }
        return Weight::pair(std::move(total), inner->val(expansion));
    };

    std::vector<Weight> samples = {zero, one};
    for (const Weight& s : inner->default_samples()) {
        if (samples.size() >= 4) break;
        Weight candidate = Weight::pair(2, s);
        if (std::find(samples.begin(), samples.end(), candidate) == samples.end())
            samples.push_back(candidate);
    }

    return std::make_shared<Domain>(
        "nat-product " + inner->name(),
        DomainFlags{false, false, false, false, false},
        zero, one,
        [inner](const Weight& a, const Weight& b) {
            const auto& pa = a.as_pair();
            const auto& pb = b.as_pair();
            return Weight::pair(mpz_class(pa.count + pb.count), inner->add(*pa.inner, *pb.inner));
        },
        std::move(val), nullptr,
        [inner](const Weight& w) {
            return w.is_pair() && w.as_pair().count >= 0 && inner->contains(*w.as_pair().inner);
        },
        [inner](std::string_view t) -> std::optional<Weight> {
            if (t.size() < 4 || t.front() != '(' || t.back() != ')') return std::nullopt;
            std::string_view body = t.substr(1, t.size() - 2);
            std::size_t comma = body.find(',');
            if (comma == std::string_view::npos) return std::nullopt;
            std::string_view count_text = body.substr(0, comma);
            if (count_text.empty()) return std::nullopt;
            for (char c : count_text)
                if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
            try {
                Weight in = inner->parse_weight(body.substr(comma + 1));
                return Weight::pair(mpz_class(std::string(count_text), 10), std::move(in));
            } catch (const ValidationError&) {
                return std::nullopt;
            }
        },
        std::move(samples));
}

// --- fold adapter --------------------------------------------------------------

DomainPtr fold_adapter(std::string name, DomainFlags flags, Weight zero, Weight one,
                       Domain::BinaryOp add, Domain::BinaryOp step,
                       Domain::Predicate contains, Domain::Parser parse,
                       std::vector<Weight> samples) {
    std::vector<Weight> probe = samples;
    auto ensure = [&probe](const Weight& w) {
        if (std::find(probe.begin(), probe.end(), w) == probe.end()) probe.push_back(w);
    };
    ensure(zero);
    ensure(one);
    for (const Weight& a : probe) {
        if (step(a, zero) != zero || step(zero, a) != zero)
            throw ValidationError("fold step violates zero annihilation at " + a.str());
        if (step(a, one) != a || step(one, a) != a)
            throw ValidationError("fold step violates the unit law at " + a.str());
    }
    flags.fold_presentable = true;
    return std::make_shared<Domain>(std::move(name), flags, std::move(zero), std::move(one),
                                    std::move(add), nullptr, std::move(step),
                                    std::move(contains), std::move(parse), std::move(samples));
}

// --- matrices over a fold-presentable base ---------------------------------------

namespace {

/// Splits "[a,b,[c,d]]"-style bracketed lists at top-level commas.
std::optional<std::vector<std::string_view>> split_bracket_list(std::string_view t) {
    if (t.size() < 2 || t.front() != '[' || t.back() != ']') return std::nullopt;
    std::string_view body = t.substr(1, t.size() - 2);
    std::vector<std::string_view> parts;
    if (body.empty()) return parts;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < body.size(); ++i) {
        char c = body[i];
        if (c == '[' || c == '(') ++depth;
        if (c == ']' || c == ')') --depth;
        if (c == ',' && depth == 0) {
            parts.push_back(body.substr(start, i - start));
            start = i + 1;
        }
    }
    parts.push_back(body.substr(start));
    return parts;
}

} // namespace

DomainPtr matrix_magma(DomainPtr base, std::size_t dim) {
    if (!base) throw ValidationError("matrix-magma needs a base domain");
    if (!base->flags().fold_presentable)
        throw PreconditionError("matrix-magma needs a fold-presentable base domain");
    if (dim < 2) throw ValidationError("matrix-magma needs dimension >= 2");

    std::vector<Weight> zero_cells(dim * dim, base->zero());
    std::vector<Weight> one_cells(dim * dim, base->zero());
    for (std::size_t i = 0; i < dim; ++i) one_cells[i * dim + i] = base->one();
    Weight zero = Weight::matrix(dim, std::move(zero_cells));
    Weight one = Weight::matrix(dim, std::move(one_cells));

    auto add = [base, dim](const Weight& a, const Weight& b) {
        const auto& ma = a.as_matrix();
        const auto& mb = b.as_matrix();
        std::vector<Weight> cells;
        cells.reserve(dim * dim);
        for (std::size_t i = 0; i < dim * dim; ++i) cells.push_back(base->add(ma.cells[i], mb.cells[i]));
        return Weight::matrix(dim, std::move(cells));
    };
    auto mul = [base, dim](const Weight& a, const Weight& b) {
        const auto& ma = a.as_matrix();
        const auto& mb = b.as_matrix();
        std::vector<Weight> cells;
        cells.reserve(dim * dim);
        for (std::size_t r = 0; r < dim; ++r) {
            for (std::size_t c = 0; c < dim; ++c) {
                Weight acc = base->zero();
                for (std::size_t k = 0; k < dim; ++k)
                    acc = base->add(acc, base->fold_step(ma.cells[r * dim + k], mb.cells[k * dim + c]));
                cells.push_back(std::move(acc));
            }
        }
        return Weight::matrix(dim, std::move(cells));
    };
    auto contains = [base, dim](const Weight& w) {
        if (!w.is_matrix()) return false;
        const auto& m = w.as_matrix();
        if (m.dim != dim) return false;
        for (const Weight& c : m.cells)
            if (!base->contains(c)) return false;
        return true;
    };
    auto parse = [base, dim](std::string_view t) -> std::optional<Weight> {
        auto rows = split_bracket_list(t);
        if (!rows || rows->size() != dim) return std::nullopt;
        std::vector<Weight> cells;
        for (std::string_view row : *rows) {
            auto entries = split_bracket_list(row);
            if (!entries || entries->size() != dim) return std::nullopt;
            for (std::string_view e : *entries) {
                try {
                    cells.push_back(base->parse_weight(e));
                } catch (const ValidationError&) {
                    return std::nullopt;
                }
            }
        }
        return Weight::matrix(dim, std::move(cells));
    };

    std::vector<Weight> samples = {zero, one};
    // one off-diagonal sample built from the base samples
    std::vector<Weight> cells(dim * dim, base->zero());
    const auto& bs = base->default_samples();
    for (std::size_t i = 0; i < dim * dim; ++i) cells[i] = bs[i % bs.size()];
    samples.push_back(Weight::matrix(dim, std::move(cells)));

    DomainFlags flags;
    flags.additively_idempotent = base->flags().additively_idempotent;
    flags.completely_idempotent = base->flags().completely_idempotent;
    flags.complete = base->flags().complete;
    flags.locally_finite = false;
    return fold_adapter("matrix-magma " + std::to_string(dim) + " " + base->name(), flags,
                        std::move(zero), std::move(one), std::move(add), std::move(mul),
                        std::move(contains), std::move(parse), std::move(samples));
}

// --- axioms probe ---------------------------------------------------------------

bool AxiomsReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.passed; });
}

namespace {

std::string render_sequence(const std::vector<Weight>& seq) {
    std::string out = "(";
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (i) out += ",";
        out += seq[i].str();
    }
    return out + ")";
}

/// Enumerates all sequences over `pool` of length 0..max_len.
void for_each_sequence(const std::vector<Weight>& pool, std::size_t max_len,
                       const std::function<void(const std::vector<Weight>&)>& visit) {
    std::vector<Weight> seq;
    std::function<void()> rec = [&]() {
        visit(seq);
        if (seq.size() == max_len) return;
        for (const Weight& w : pool) {
            seq.push_back(w);
            rec();
            seq.pop_back();
        }
    };
    rec();
}

} // namespace

AxiomsReport axioms_probe(const Domain& d, std::vector<Weight> samples, std::size_t max_seq_len) {
    auto ensure = [&samples](const Weight& w) {
        if (std::find(samples.begin(), samples.end(), w) == samples.end()) samples.push_back(w);
    };
    ensure(d.zero());
    ensure(d.one());

    AxiomsReport report;
    auto run = [&report](const std::string& law, const std::function<std::optional<std::string>()>& body) {
        AxiomCheck check{law, true, ""};
        try {
            if (auto witness = body()) {
                check.passed = false;
                check.witness = *witness;
            }
        } catch (const Error& e) {
            check.passed = false;
            check.witness = std::string("exception: ") + e.what();
        }
        report.checks.push_back(std::move(check));
    };

    run("val-of-singleton-is-identity", [&]() -> std::optional<std::string> {
        for (const Weight& a : samples) {
            std::vector<Weight> seq{a};
            if (d.val(seq) != a) return "val" + render_sequence(seq);
        }
        return std::nullopt;
    });

    run("val-of-empty-is-one", [&]() -> std::optional<std::string> {
        if (d.val(std::vector<Weight>{}) != d.one()) return "val()";
        return std::nullopt;
    });

    run("zero-annihilates-val", [&]() -> std::optional<std::string> {
        std::optional<std::string> witness;
        for_each_sequence(samples, max_seq_len, [&](const std::vector<Weight>& seq) {
            if (witness || seq.empty()) return;
            bool has_zero = std::find(seq.begin(), seq.end(), d.zero()) != seq.end();
            if (has_zero && d.val(seq) != d.zero()) witness = "val" + render_sequence(seq);
        });
        return witness;
    });

    run("one-deletable-in-val", [&]() -> std::optional<std::string> {
        std::optional<std::string> witness;
        for_each_sequence(samples, max_seq_len, [&](const std::vector<Weight>& seq) {
            if (witness) return;
            for (std::size_t i = 0; i < seq.size(); ++i) {
                if (seq[i] != d.one()) continue;
                std::vector<Weight> without = seq;
                without.erase(without.begin() + static_cast<std::ptrdiff_t>(i));
                if (d.val(seq) != d.val(without)) {
                    witness = "val" + render_sequence(seq) + " vs val" + render_sequence(without);
                    return;
                }
            }
        });
        return witness;
    });

    run("add-commutative", [&]() -> std::optional<std::string> {
        for (const Weight& a : samples)
            for (const Weight& b : samples)
                if (d.add(a, b) != d.add(b, a))
                    return a.str() + "+" + b.str();
        return std::nullopt;
    });

    run("add-associative", [&]() -> std::optional<std::string> {
        for (const Weight& a : samples)
            for (const Weight& b : samples)
                for (const Weight& c : samples)
                    if (d.add(d.add(a, b), c) != d.add(a, d.add(b, c)))
                        return a.str() + "+" + b.str() + "+" + c.str();
        return std::nullopt;
    });

    run("add-zero-neutral", [&]() -> std::optional<std::string> {
        for (const Weight& a : samples)
            if (d.add(a, d.zero()) != a || d.add(d.zero(), a) != a)
                return a.str();
        return std::nullopt;
    });

    return report;
}

// --- fold closure -----------------------------------------------------------------

std::vector<Weight> val_closure(const Domain& d, const std::vector<Weight>& generators,
                                std::size_t cap) {
    if (!d.flags().fold_presentable)
        throw PreconditionError("val_closure needs a fold-presentable domain");
    std::vector<Weight> gens;
    for (const Weight& g : generators)
        if (std::find(gens.begin(), gens.end(), g) == gens.end()) gens.push_back(g);

    std::set<Weight, WeightCanonicalLess> seen;
    std::deque<Weight> queue;
    seen.insert(d.one());
    queue.push_back(d.one());
    while (!queue.empty()) {
        Weight v = queue.front();
        queue.pop_front();
        for (const Weight& g : gens) {
            Weight next = d.fold_step(v, g);
            if (seen.insert(next).second) {
                if (seen.size() > cap)
                    throw DivergenceError("fold closure exceeded cap of " + std::to_string(cap));
                queue.push_back(next);
            }
        }
    }
    return std::vector<Weight>(seen.begin(), seen.end());
}

} // namespace qcfl
