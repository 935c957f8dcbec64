#include "wordopt/word.hpp"

#include <sstream>

#include "wordopt/errors.hpp"

namespace wordopt {

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
    if (symbols_.size() < 2) throw ContractError("alphabet needs at least 2 symbols");
    if (symbols_.size() > 255) throw ContractError("alphabet larger than 255 symbols");
    single_char_ = true;
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        const auto& s = symbols_[i];
        if (s.empty()) throw ContractError("alphabet symbol must be non-empty");
        if (s.size() != 1) single_char_ = false;
        if (!index_.emplace(s, i).second)
            throw ContractError("alphabet symbols must be distinct: '" + s + "'");
    }
}

std::size_t Alphabet::index_of(std::string_view symbol) const {
    auto it = index_.find(symbol);
    if (it == index_.end())
        throw ContractError("symbol '" + std::string(symbol) + "' is not in the alphabet");
    return it->second;
}

std::string Alphabet::render(const Word& w) const {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!single_char_ && i > 0) out += ' ';
        out += symbol(w[i]);
    }
    return out;
}

Word Alphabet::parse(std::string_view text) const {
    Word w;
    if (single_char_ && text.find(' ') == std::string_view::npos) {
        w.sym.reserve(text.size());
        for (char c : text) w.sym.push_back(static_cast<std::uint8_t>(index_of({&c, 1})));
        return w;
    }
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) w.sym.push_back(static_cast<std::uint8_t>(index_of(tok)));
    return w;
}

std::size_t hamming_distance(const Word& a, const Word& b) {
    if (a.size() != b.size())
        throw ContractError("hamming_distance: word lengths differ");
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
}

Word random_word(const Alphabet& alphabet, std::size_t n, Rng& rng) {
    if (n == 0) throw ContractError("random_word: length must be positive");
    Word w;
    w.sym.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        w.sym.push_back(static_cast<std::uint8_t>(rng.below(alphabet.size())));
    return w;
}

std::vector<Word> neighbors(const Word& w, const Alphabet& alphabet) {
    std::vector<Word> out;
    out.reserve(w.size() * (alphabet.size() - 1));
    for (std::size_t pos = 0; pos < w.size(); ++pos) {
        for (std::size_t s = 0; s < alphabet.size(); ++s) {
            if (s == w[pos]) continue;
            Word v = w;
            v[pos] = static_cast<std::uint8_t>(s);
            out.push_back(std::move(v));
        }
    }
    return out;
}

void check_word(const Word& w, const Alphabet& alphabet) {
    for (auto s : w.sym)
        if (s >= alphabet.size())
            throw ContractError("word contains index outside the alphabet");
}

}  // namespace wordopt
