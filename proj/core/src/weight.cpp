#include "qcfl/weight.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

#include "qcfl/errors.hpp"

namespace qcfl {

std::string ExtRat::str() const {
    switch (kind_) {
        case Kind::NegInf: return "-inf";
        case Kind::PosInf: return "inf";
        case Kind::Finite: break;
    }
    if (value_.get_den() == 1) return value_.get_num().get_str();
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::optional<ExtRat> ExtRat::parse(std::string_view text) {
    if (text == "inf" || text == "+inf") return pos_inf();
    if (text == "-inf") return neg_inf();
    // strict shape: [-]digits[/digits]
    std::size_t i = 0;
    if (i < text.size() && text[i] == '-') ++i;
    std::size_t num_start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == num_start) return std::nullopt;
    if (i == text.size()) {
        return of(mpq_class(std::string(text), 10));
    }
    if (text[i] != '/') return std::nullopt;
    ++i;
    std::size_t den_start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == den_start || i != text.size()) return std::nullopt;
    mpq_class q(std::string(text), 10);
    if (q.get_den() == 0) return std::nullopt;
    return of(std::move(q));
}

ExtRat min(const ExtRat& a, const ExtRat& b) { return a < b ? a : b; }
ExtRat max(const ExtRat& a, const ExtRat& b) { return a < b ? b : a; }

Weight Weight::matrix(std::size_t dim, std::vector<Weight> cells) {
    if (cells.size() != dim * dim)
        throw ValidationError("matrix weight needs dim*dim cells");
    return Weight(Repr(Matrix{dim, std::move(cells)}));
}

namespace {

struct Printer {
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const mpz_class& n) const { return n.get_str(); }
    std::string operator()(const ExtRat& r) const { return r.str(); }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(const Weight::Unit&) const { return "unit"; }
    std::string operator()(const Weight::Pair& p) const {
        return "(" + p.count.get_str() + "," + p.inner->str() + ")";
    }
    std::string operator()(const Weight::Matrix& m) const {
        std::ostringstream os;
        os << "[";
        for (std::size_t r = 0; r < m.dim; ++r) {
            if (r) os << ",";
            os << "[";
            for (std::size_t c = 0; c < m.dim; ++c) {
                if (c) os << ",";
                os << m.cells[r * m.dim + c].str();
            }
            os << "]";
        }
        os << "]";
        return os.str();
    }
};

} // namespace

std::string Weight::str() const { return std::visit(Printer{}, v_); }

bool canonical_less(const Weight& a, const Weight& b) {
    const std::string sa = a.str();
    const std::string sb = b.str();
    if (sa.size() != sb.size()) return sa.size() < sb.size();
    return sa < sb;
}

} // namespace qcfl
