#ifndef QCFL_WEIGHT_HPP
#define QCFL_WEIGHT_HPP

#include <gmpxx.h>

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qcfl {

/// Exact rational extended with -inf and +inf. All arithmetic is exact;
/// no floating point is involved anywhere.
class ExtRat {
public:
    ExtRat() : kind_(Kind::Finite), value_(0) {}

    static ExtRat neg_inf() { return ExtRat(Kind::NegInf); }
    static ExtRat pos_inf() { return ExtRat(Kind::PosInf); }
    static ExtRat of(mpq_class q) {
        q.canonicalize();
        ExtRat r;
        r.value_ = std::move(q);
        return r;
    }
    static ExtRat of(long num, long den = 1) { return of(mpq_class(num, den)); }

    bool is_neg_inf() const { return kind_ == Kind::NegInf; }
    bool is_pos_inf() const { return kind_ == Kind::PosInf; }
    bool is_finite() const { return kind_ == Kind::Finite; }

    /// Finite value; only meaningful when is_finite().
    const mpq_class& value() const { return value_; }

    bool is_integer() const { return is_finite() && value_.get_den() == 1; }

    friend bool operator==(const ExtRat& a, const ExtRat& b) {
        if (a.kind_ != b.kind_) return false;
        if (a.kind_ != Kind::Finite) return true;
        return a.value_ == b.value_;
    }
    friend bool operator!=(const ExtRat& a, const ExtRat& b) { return !(a == b); }
    friend bool operator<(const ExtRat& a, const ExtRat& b) {
        if (a.kind_ == b.kind_) return a.kind_ == Kind::Finite && a.value_ < b.value_;
        if (a.kind_ == Kind::NegInf) return true;
        if (b.kind_ == Kind::NegInf) return false;
        return b.kind_ == Kind::PosInf;
    }
    friend bool operator<=(const ExtRat& a, const ExtRat& b) { return a < b || a == b; }

    std::string str() const;

    /// Accepts "inf", "-inf", "p", "-p", "p/q"; rejects everything else.
    static std::optional<ExtRat> parse(std::string_view text);

private:
    enum class Kind { NegInf, Finite, PosInf };
    explicit ExtRat(Kind k) : kind_(k), value_(0) {}

    Kind kind_;
    mpq_class value_;
};

ExtRat min(const ExtRat& a, const ExtRat& b);
ExtRat max(const ExtRat& a, const ExtRat& b);

/// A single element of some weight domain's carrier. A closed sum over the
/// concrete representations the built-in domain constructions need.
/// Equality is exact and decidable; str() is a canonical form that every
/// domain's parser accepts back.
class Weight {
public:
    /// The fresh top element adjoined by adjoin_unit; distinct from every
    /// inner carrier value.
    struct Unit {
        friend bool operator==(const Unit&, const Unit&) { return true; }
    };

    /// (natural, inner value) pairs of the nat_product construction.
    struct Pair {
        mpz_class count;
        std::shared_ptr<const Weight> inner; // never null
        friend bool operator==(const Pair& a, const Pair& b) {
            return a.count == b.count && *a.inner == *b.inner;
        }
    };

    /// Square matrix of inner values, row-major, dim*dim cells.
    struct Matrix {
        std::size_t dim = 0;
        std::vector<Weight> cells;
        friend bool operator==(const Matrix& a, const Matrix& b) {
            return a.dim == b.dim && a.cells == b.cells;
        }
    };

    Weight() : v_(false) {}

    static Weight boolean(bool b) { return Weight(Repr(b)); }
    static Weight nat(mpz_class n) { return Weight(Repr(std::move(n))); }
    static Weight nat(unsigned long n) { return Weight(Repr(mpz_class(n))); }
    static Weight rational(ExtRat r) { return Weight(Repr(std::move(r))); }
    static Weight rational(long num, long den = 1) { return rational(ExtRat::of(num, den)); }
    static Weight element(std::string name) { return Weight(Repr(std::move(name))); }
    static Weight unit_marker() { return Weight(Repr(Unit{})); }
    static Weight pair(mpz_class count, Weight inner) {
        return Weight(Repr(Pair{std::move(count), std::make_shared<const Weight>(std::move(inner))}));
    }
    static Weight matrix(std::size_t dim, std::vector<Weight> cells);

    bool is_boolean() const { return std::holds_alternative<bool>(v_); }
    bool as_boolean() const { return std::get<bool>(v_); }
    bool is_nat() const { return std::holds_alternative<mpz_class>(v_); }
    const mpz_class& as_nat() const { return std::get<mpz_class>(v_); }
    bool is_rational() const { return std::holds_alternative<ExtRat>(v_); }
    const ExtRat& as_rational() const { return std::get<ExtRat>(v_); }
    bool is_element() const { return std::holds_alternative<std::string>(v_); }
    const std::string& as_element() const { return std::get<std::string>(v_); }
    bool is_unit_marker() const { return std::holds_alternative<Unit>(v_); }
    bool is_pair() const { return std::holds_alternative<Pair>(v_); }
    const Pair& as_pair() const { return std::get<Pair>(v_); }
    bool is_matrix() const { return std::holds_alternative<Matrix>(v_); }
    const Matrix& as_matrix() const { return std::get<Matrix>(v_); }

    friend bool operator==(const Weight& a, const Weight& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Weight& a, const Weight& b) { return !(a == b); }

    std::string str() const;

private:
    using Repr = std::variant<bool, mpz_class, ExtRat, std::string, Unit, Pair, Matrix>;
    explicit Weight(Repr v) : v_(std::move(v)) {}

    Repr v_;
};

/// Total order on canonical strings; used only for deterministic output
/// ordering, never for semantics.
bool canonical_less(const Weight& a, const Weight& b);

struct WeightCanonicalLess {
    bool operator()(const Weight& a, const Weight& b) const { return canonical_less(a, b); }
};

} // namespace qcfl

#endif
