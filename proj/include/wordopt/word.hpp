#ifndef WORDOPT_WORD_HPP
#define WORDOPT_WORD_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "wordopt/rng.hpp"

namespace wordopt {

struct Word;

// Ordered set of distinct symbol tokens. Index order is fixed for the
// lifetime of a run; words store indices, never symbol text.
class Alphabet {
  public:
    explicit Alphabet(std::vector<std::string> symbols);

    std::size_t size() const { return symbols_.size(); }
    const std::string& symbol(std::size_t i) const { return symbols_.at(i); }
    const std::vector<std::string>& symbols() const { return symbols_; }

    /// Index of a symbol token, or throws ContractError if unknown.
    std::size_t index_of(std::string_view symbol) const;

    bool single_char() const { return single_char_; }

    /// Word -> text. Symbols are concatenated when all are single characters,
    /// otherwise joined with spaces.
    std::string render(const Word& w) const;

    /// Inverse of render (also accepts space-separated text for single-char
    /// alphabets).
    Word parse(std::string_view text) const;

    static Alphabet binary() { return Alphabet({"0", "1"}); }

    bool operator==(const Alphabet& other) const { return symbols_ == other.symbols_; }

  private:
    std::vector<std::string> symbols_;
    std::map<std::string, std::size_t, std::less<>> index_;
    bool single_char_;
};

// Fixed-length sequence of alphabet indices; the unit of search.
struct Word {
    std::vector<std::uint8_t> sym;

    Word() = default;
    explicit Word(std::vector<std::uint8_t> s) : sym(std::move(s)) {}

    std::size_t size() const { return sym.size(); }
    std::uint8_t operator[](std::size_t i) const { return sym[i]; }
    std::uint8_t& operator[](std::size_t i) { return sym[i]; }

    auto operator<=>(const Word&) const = default;
};

/// Number of positions where a and b differ. Lengths must match.
std::size_t hamming_distance(const Word& a, const Word& b);

/// Word with each position drawn independently and uniformly from the
/// alphabet. Consumes exactly n draws.
Word random_word(const Alphabet& alphabet, std::size_t n, Rng& rng);

/// All words at Hamming distance exactly 1: n * (|A|-1) of them, no
/// duplicates, in (position, symbol) order.
std::vector<Word> neighbors(const Word& w, const Alphabet& alphabet);

/// Throws ContractError unless every index in w is valid for the alphabet.
void check_word(const Word& w, const Alphabet& alphabet);

}  // namespace wordopt

#endif
