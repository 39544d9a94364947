#include "qcfl/word.hpp"

#include <algorithm>
#include <sstream>

#include "qcfl/errors.hpp"

namespace qcfl {

namespace {

bool all_single_char(const std::vector<std::string>& alphabet) {
    return std::all_of(alphabet.begin(), alphabet.end(),
                       [](const std::string& s) { return s.size() == 1; });
}

} // namespace

std::string format_word(const Word& w, const std::vector<std::string>& alphabet) {
    if (all_single_char(alphabet)) {
        std::string out;
        for (const auto& s : w) out += s;
        return out;
    }
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += ' ';
        out += w[i];
    }
    return out;
}

Word parse_word(const std::string& text, const std::vector<std::string>& alphabet) {
    Word w;
    if (all_single_char(alphabet)) {
        for (char c : text) {
            if (c == ' ') continue;
            w.push_back(std::string(1, c));
        }
        return w;
    }
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) w.push_back(tok);
    return w;
}

std::vector<Word> words_up_to(const std::vector<std::string>& alphabet, std::size_t max_len) {
    std::vector<Word> out;
    out.push_back({});
    std::size_t level_start = 0;
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::size_t level_end = out.size();
        for (std::size_t i = level_start; i < level_end; ++i) {
            for (const auto& s : alphabet) {
                Word next = out[i];
                next.push_back(s);
                out.push_back(std::move(next));
            }
        }
        level_start = level_end;
    }
    return out;
}

} // namespace qcfl
