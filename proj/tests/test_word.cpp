#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "wordopt/errors.hpp"
#include "wordopt/token.hpp"
#include "wordopt/word.hpp"

using namespace wordopt;

namespace {

// Independent oracle: positional comparison count.
std::size_t brute_distance(const Word& a, const Word& b) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a.sym[i] != b.sym[i]) ++d;
    return d;
}

Word word_from_value(std::uint64_t value, std::size_t n, std::size_t base) {
    Word w;
    w.sym.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        w.sym[n - 1 - i] = static_cast<std::uint8_t>(value % base);
        value /= base;
    }
    return w;
}

}  // namespace

TEST_CASE("alphabet basics") {
    Alphabet a({"A", "C", "G", "T"});
    CHECK(a.size() == 4);
    CHECK(a.index_of("G") == 2);
    CHECK_THROWS_AS(a.index_of("X"), ContractError);
    CHECK_THROWS_AS(Alphabet({"0"}), ContractError);
    CHECK_THROWS_AS(Alphabet({"0", "0"}), ContractError);

    Word w = a.parse("ACGT");
    CHECK(a.render(w) == "ACGT");
    CHECK(w.sym == std::vector<std::uint8_t>{0, 1, 2, 3});

    Alphabet multi({"up", "down"});
    Word m = multi.parse("up down up");
    CHECK(multi.render(m) == "up down up");
}

TEST_CASE("hamming distance identities") {
    Alphabet a({"A", "C", "G", "T"});
    CHECK(hamming_distance(a.parse("ACGT"), a.parse("ACGT")) == 0);
    Alphabet b({"A", "B"});
    CHECK(hamming_distance(b.parse("AAA"), b.parse("AAB")) == 1);
    CHECK_THROWS_AS(hamming_distance(b.parse("AA"), b.parse("AAA")), ContractError);
}

TEST_CASE("hamming distance matches brute force on all binary n=4 pairs") {
    for (std::uint64_t x = 0; x < 16; ++x) {
        for (std::uint64_t y = 0; y < 16; ++y) {
            Word a = word_from_value(x, 4, 2);
            Word b = word_from_value(y, 4, 2);
            CHECK(hamming_distance(a, b) == brute_distance(a, b));
            CHECK(hamming_distance(a, b) == hamming_distance(b, a));
        }
    }
}

TEST_CASE("distance axioms on sampled triples") {
    Alphabet a({"A", "C", "G", "T"});
    Rng rng(7);
    for (int i = 0; i < 500; ++i) {
        Word x = random_word(a, 12, rng);
        Word y = random_word(a, 12, rng);
        Word z = random_word(a, 12, rng);
        CHECK(hamming_distance(x, x) == 0);
        CHECK(hamming_distance(x, y) == hamming_distance(y, x));
        CHECK(hamming_distance(x, z) <= hamming_distance(x, y) + hamming_distance(y, z));
    }
}

TEST_CASE("random_word is deterministic under a fixed seed and consumes n draws") {
    Alphabet bin = Alphabet::binary();
    Rng r1(42), r2(42);
    Word w1 = random_word(bin, 8, r1);
    Word w2 = random_word(bin, 8, r2);
    CHECK(w1 == w2);
    CHECK(r1 == r2);

    // Draw-count contract: after sampling, both streams advanced by exactly n.
    Rng r3(42);
    for (int i = 0; i < 8; ++i) r3.next();
    CHECK(r1 == r3);

    Alphabet four({"A", "C", "G", "T"});
    Rng r4(3);
    Word single = random_word(four, 1, r4);
    CHECK(single.size() == 1);
    CHECK(single.sym[0] < 4);
}

TEST_CASE("random_word symbol frequencies are uniform (chi-square)") {
    Alphabet a({"A", "C", "G", "T"});
    Rng rng(12345);
    const int samples = 100000;
    std::array<int, 4> counts{};
    for (int i = 0; i < samples; ++i) {
        Word w = random_word(a, 1, rng);
        counts[w.sym[0]] += 1;
    }
    const double expected = samples / 4.0;
    double chi2 = 0;
    for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
    // 3 degrees of freedom; 3-sigma-ish bound (chi2_{0.997,3} ~ 14.2)
    CHECK(chi2 < 14.2);
}

TEST_CASE("neighbors enumerate exactly the distance-1 sphere") {
    Alphabet bin = Alphabet::binary();
    CHECK(neighbors(bin.parse("0"), bin) == std::vector<Word>{bin.parse("1")});
    CHECK(neighbors(bin.parse("010"), bin).size() == 3);

    // n=2, |A|=4: brute-force over all 16 words.
    Alphabet four({"A", "C", "G", "T"});
    Word w = four.parse("AC");
    auto nb = neighbors(w, four);
    CHECK(nb.size() == 6);
    std::set<Word> got(nb.begin(), nb.end());
    CHECK(got.size() == 6);  // no duplicates
    std::set<Word> expected;
    for (std::uint64_t v = 0; v < 16; ++v) {
        Word u = word_from_value(v, 2, 4);
        if (hamming_distance(u, w) == 1) expected.insert(u);
    }
    CHECK(got == expected);
}

TEST_CASE("neighbors match brute force for n<=4, |A|<=4") {
    for (std::size_t m = 2; m <= 4; ++m) {
        std::vector<std::string> syms;
        for (std::size_t i = 0; i < m; ++i) syms.push_back(std::string(1, char('a' + i)));
        Alphabet a(syms);
        for (std::size_t n = 1; n <= 4; ++n) {
            std::uint64_t total = 1;
            for (std::size_t i = 0; i < n; ++i) total *= m;
            Rng rng(n * 10 + m);
            Word w = random_word(a, n, rng);
            auto nb = neighbors(w, a);
            CHECK(nb.size() == n * (m - 1));
            std::set<Word> got(nb.begin(), nb.end());
            std::set<Word> expected;
            for (std::uint64_t v = 0; v < total; ++v) {
                Word u = word_from_value(v, n, m);
                if (hamming_distance(u, w) == 1) expected.insert(u);
            }
            CHECK(got == expected);
        }
    }
}

TEST_CASE("token checkpoint round trip is the identity") {
    Alphabet bin = Alphabet::binary();
    Rng rng(99);
    Word w = random_word(bin, 16, rng);
    StateToken t = make_token(w, 5.0, rng);
    t.mh_params["alpha"] = "0.95";
    t.push_trace(0, 5.0);

    auto bytes = token_checkpoint(t);
    StateToken back = token_restore(bytes);
    CHECK(back == t);
}

TEST_CASE("token restore rejects junk and version mismatches") {
    std::vector<std::uint8_t> junk = {0x12, 0x9f, 0x00, 0x41, 0x7c, 0x33, 0x90, 0x01,
                                      0xde, 0xad, 0xbe, 0xef, 0x10, 0x20, 0x30, 0x40};
    CHECK_THROWS_AS(token_restore(junk), DecodeError);

    std::string wrong_version = R"({"format":"wordopt.token","version":99})";
    std::vector<std::uint8_t> wv(wrong_version.begin(), wrong_version.end());
    CHECK_THROWS_AS(token_restore(wv), DecodeError);

    std::string truncated = R"({"format":"wordopt.token","version":1,"current":[0,1])";
    std::vector<std::uint8_t> tr(truncated.begin(), truncated.end());
    CHECK_THROWS_AS(token_restore(tr), DecodeError);
}

TEST_CASE("rng bounded draws are in range and reproducible") {
    Rng a(1), b(1);
    for (int i = 0; i < 1000; ++i) {
        auto x = a.below(7);
        CHECK(x < 7);
        CHECK(x == b.below(7));
    }
    CHECK_THROWS_AS(a.below(0), ContractError);

    // substreams with different labels diverge
    Rng s1(derive_seed(5, "sa"));
    Rng s2(derive_seed(5, "ga"));
    CHECK(s1.next() != s2.next());
}
