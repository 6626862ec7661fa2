#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sigvol {

/// Letter type of the prolonged alphabet {0, 1, ..., d}; 0 is the time letter.
using Letter = std::uint8_t;

inline constexpr Letter kTimeLetter = 0;

/// A finite multi-index over {0, ..., d}.
///
/// Words are ordered canonically: shorter words first, then lexicographically
/// by letter. The empty word is the unit of concatenation and of shuffle.
class Word {
public:
    Word() = default;
    Word(std::initializer_list<int> letters);
    explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}

    /// `n` copies of `letter`.
    static Word repeat(Letter letter, std::size_t n);

    std::size_t size() const noexcept { return letters_.size(); }
    bool empty() const noexcept { return letters_.empty(); }
    Letter operator[](std::size_t i) const { return letters_[i]; }
    Letter back() const { return letters_.back(); }
    std::span<const Letter> letters() const noexcept { return letters_; }

    /// Largest letter, or 0 for the empty word.
    Letter max_letter() const noexcept;

    Word concat(const Word& other) const;
    Word appended(Letter letter) const;
    /// Word with the last letter removed. Requires a non-empty word.
    Word prefix() const;
    Word reversed() const;

    /// `1.2.0`, or `∅` for the empty word.
    std::string to_string() const;
    /// Inverse of `to_string`. Also accepts `e` and the empty string for the empty word.
    static Word parse(std::string_view text);

    friend bool operator==(const Word&, const Word&) = default;
    friend std::strong_ordering operator<=>(const Word& a, const Word& b);

private:
    std::vector<Letter> letters_;
};

/// UTF-8 spelling of the empty word in text formats.
inline constexpr std::string_view kEmptyWordGlyph = "\xE2\x88\x85";

/// Every word over {0..d} with length in [min_len, max_len], canonical order.
std::vector<Word> enumerate_words(int d, std::size_t min_len, std::size_t max_len);

} // namespace sigvol
