#ifndef QCFL_WORD_HPP
#define QCFL_WORD_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace qcfl {

/// Search budget (visited states) for the derivation and computation
/// enumerations.
inline constexpr std::size_t kDefaultEnumerationBudget = 100000;

/// A word over some alphabet, one string per symbol.
using Word = std::vector<std::string>;

/// Shortlex: shorter first, then elementwise lexicographic.
struct ShortlexLess {
    bool operator()(const Word& a, const Word& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }
};

/// Concatenated when every alphabet symbol is a single character,
/// space-separated otherwise; the empty word renders as "".
std::string format_word(const Word& w, const std::vector<std::string>& alphabet);

/// Inverse of format_word under the same alphabet convention.
Word parse_word(const std::string& text, const std::vector<std::string>& alphabet);

/// All words over the alphabet with length <= max_len, in shortlex order.
std::vector<Word> words_up_to(const std::vector<std::string>& alphabet, std::size_t max_len);

} // namespace qcfl

#endif
