#include "sigvol/word.hpp"

#include <algorithm>
#include <charconv>

#include "sigvol/error.hpp"

namespace sigvol {

Word::Word(std::initializer_list<int> letters) {
    letters_.reserve(letters.size());
    for (int l : letters) {
        if (l < 0 || l > 255) throw InvalidArgument("word letter out of range: " + std::to_string(l));
        letters_.push_back(static_cast<Letter>(l));
    }
}

Word Word::repeat(Letter letter, std::size_t n) { return Word(std::vector<Letter>(n, letter)); }

Letter Word::max_letter() const noexcept {
    return letters_.empty() ? Letter{0} : *std::max_element(letters_.begin(), letters_.end());
}

Word Word::concat(const Word& other) const {
    std::vector<Letter> out(letters_);
    out.insert(out.end(), other.letters_.begin(), other.letters_.end());
    return Word(std::move(out));
}

Word Word::appended(Letter letter) const {
    std::vector<Letter> out(letters_);
    out.push_back(letter);
    return Word(std::move(out));
}

Word Word::prefix() const {
    if (letters_.empty()) throw InvalidArgument("prefix of the empty word");
    return Word(std::vector<Letter>(letters_.begin(), letters_.end() - 1));
}

Word Word::reversed() const { return Word(std::vector<Letter>(letters_.rbegin(), letters_.rend())); }

std::string Word::to_string() const {
    if (letters_.empty()) return std::string(kEmptyWordGlyph);
    std::string out;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
        if (i) out += '.';
        out += std::to_string(letters_[i]);
    }
    return out;
}

Word Word::parse(std::string_view text) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (text.empty() || text == kEmptyWordGlyph || text == "e") return Word{};
    std::vector<Letter> letters;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto dot = text.find('.', pos);
        auto piece = text.substr(pos, dot == std::string_view::npos ? std::string_view::npos : dot - pos);
        unsigned value = 0;
        auto [end, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), value);
        if (ec != std::errc{} || end != piece.data() + piece.size() || piece.empty() || value > 255)
            throw InvalidArgument("malformed word: '" + std::string(text) + "'");
        letters.push_back(static_cast<Letter>(value));
        if (dot == std::string_view::npos) break;
        pos = dot + 1;
    }
    return Word(std::move(letters));
}

std::strong_ordering operator<=>(const Word& a, const Word& b) {
    if (auto c = a.size() <=> b.size(); c != 0) return c;
    return std::lexicographical_compare_three_way(a.letters_.begin(), a.letters_.end(), b.letters_.begin(),
                                                  b.letters_.end());
}

std::vector<Word> enumerate_words(int d, std::size_t min_len, std::size_t max_len) {
    std::vector<Word> out;
    std::vector<Letter> current;
    const auto alphabet = static_cast<std::size_t>(d) + 1;
    for (std::size_t len = min_len; len <= max_len; ++len) {
        current.assign(len, 0);
        while (true) {
            out.emplace_back(current);
            std::size_t i = len;
            while (i > 0) {
                --i;
                if (++current[i] < alphabet) break;
                current[i] = 0;
                if (i == 0) { i = len + 1; break; }
            }
            if (len == 0 || i == len + 1) break;
        }
    }
    return out;
}

} // namespace sigvol
