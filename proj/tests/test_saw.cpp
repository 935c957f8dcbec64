#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <set>

#include "wordopt/errors.hpp"
#include "wordopt/saw.hpp"
#include "wordopt/token.hpp"

using namespace wordopt;

namespace {

Word dir_word(const std::string& text) {
    return saw_alphabet().parse(text);
}

// Independent oracle helpers: rotation via rotation matrices on raw pairs and
// validity via a std::set, kept free of the library's code paths.
using P = std::array<int, 2>;

P oracle_rot(const P& p, const P& c, int sign) {
    // sign +1: (dx,dy) -> (-dy,dx); sign -1: (dx,dy) -> (dy,-dx)
    const int dx = p[0] - c[0], dy = p[1] - c[1];
    if (sign > 0) return {c[0] - dy, c[1] + dx};
    return {c[0] + dy, c[1] - dx};
}

bool oracle_valid(const std::vector<P>& vs) {
    std::set<P> s(vs.begin(), vs.end());
    return s.size() == vs.size();
}

int oracle_pivot_count(const Walk& walk) {
    const std::size_t n = walk.steps();
    int count = 0;
    for (std::size_t center = 1; center + 1 <= n - 1 + 1 && center < n; ++center) {
        bool any = false;
        for (int sign : {+1, -1}) {
            std::vector<P> vs = walk.vertices;
            for (std::size_t i = center + 1; i < vs.size(); ++i)
                vs[i] = oracle_rot(vs[i], vs[center], sign);
            any = any || oracle_valid(vs);
        }
        count += any;
    }
    return count;
}

int oracle_contacts(const Walk& walk, const std::string& hp) {
    int c = 0;
    for (std::size_t i = 0; i < walk.vertices.size(); ++i)
        for (std::size_t j = i + 2; j < walk.vertices.size(); ++j) {
            if (hp[i] != 'H' || hp[j] != 'H') continue;
            const int dx = walk.vertices[i][0] - walk.vertices[j][0];
            const int dy = walk.vertices[i][1] - walk.vertices[j][1];
            c += std::abs(dx) + std::abs(dy) == 1;
        }
    return c;
}

std::vector<Word> all_words(std::size_t n) {
    std::vector<Word> out;
    const std::size_t total = std::size_t(1) << (2 * n);
    for (std::size_t v = 0; v < total; ++v) {
        Word w;
        std::size_t x = v;
        for (std::size_t i = 0; i < n; ++i) {
            w.sym.push_back(static_cast<std::uint8_t>(x & 3));
            x >>= 2;
        }
        out.push_back(std::move(w));
    }
    return out;
}

// random SAW via elongation with all-P labels (pure random growth)
Word random_saw(std::size_t n, Rng& rng) {
    HPSequence all_p;
    all_p.hydrophobic.assign(n + 1, false);
    return elongate(all_p, rng);
}

}  // namespace

TEST_CASE("decode produces the documented vertex paths") {
    Walk ee = decode(dir_word("EE"));
    CHECK(ee.vertices == std::vector<P>{{0, 0}, {1, 0}, {2, 0}});
    Walk enw = decode(dir_word("ENW"));
    CHECK(enw.vertices == std::vector<P>{{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

TEST_CASE("encode is the inverse of decode") {
    Rng rng(4);
    for (int i = 0; i < 1000; ++i) {
        Word w = random_word(saw_alphabet(), 1 + rng.below(20), rng);
        CHECK(encode(decode(w)) == w);
    }
    Walk bad;
    bad.vertices = {{0, 0}, {2, 0}};
    CHECK_THROWS_AS(encode(bad), ContractError);
}

TEST_CASE("self-avoidance basics and the n=3 enumeration") {
    CHECK(is_self_avoiding(decode(dir_word("EE"))));
    CHECK_FALSE(is_self_avoiding(decode(dir_word("EW"))));

    int valid = 0;
    for (const auto& w : all_words(3)) {
        const Walk walk = decode(w);
        const bool lib = is_self_avoiding(walk);
        CHECK(lib == oracle_valid(walk.vertices));
        valid += lib;
    }
    CHECK(valid == 36);  // 4 * 3 * 3: no length-3 word re-collides beyond reversals
}

TEST_CASE("apply_pivot rotates the tail and validates") {
    Walk line = decode(dir_word("EEE"));
    auto up = apply_pivot(line, 1, Rotation::ccw);
    REQUIRE(up.has_value());
    CHECK(up->vertices == std::vector<P>{{0, 0}, {1, 0}, {1, 1}, {1, 2}});
    CHECK(is_self_avoiding(*up));

    CHECK_THROWS_AS(apply_pivot(line, 0, Rotation::ccw), ContractError);
    CHECK_THROWS_AS(apply_pivot(line, 3, Rotation::ccw), ContractError);

    Walk one = decode(dir_word("E"));
    CHECK_THROWS_AS(apply_pivot(one, 1, Rotation::ccw), ContractError);
}

TEST_CASE("a pivot followed by its inverse returns the original walk") {
    Rng rng(9);
    int checked = 0;
    for (int i = 0; i < 200; ++i) {
        Word w = random_saw(8, rng);
        Walk walk = decode(w);
        const std::size_t center = 1 + rng.below(7);
        auto fwd = apply_pivot(walk, center, Rotation::ccw);
        if (!fwd) continue;
        auto back = apply_pivot(*fwd, center, Rotation::cw);
        if (!back) continue;
        CHECK(*back == walk);
        ++checked;
    }
    CHECK(checked > 50);
}

TEST_CASE("pivot_count on the straight line and the degenerate walk") {
    CHECK(pivot_count_score(dir_word("EEE")) == 2.0);
    CHECK(pivot_count_score(dir_word("E")) == 0.0);
    CHECK_THROWS_AS(pivot_count_score(dir_word("EW")), ContractError);
}

TEST_CASE("pivot_count matches the exhaustive oracle for all SAWs with n<=6") {
    for (std::size_t n = 2; n <= 6; ++n) {
        for (const auto& w : all_words(n)) {
            const Walk walk = decode(w);
            if (!is_self_avoiding(walk)) continue;
            CHECK(pivot_count(walk) == oracle_pivot_count(walk));
        }
    }
}

TEST_CASE("hp contact scoring on worked examples") {
    HPSequence hhhh = HPSequence::parse("HHHH");
    CHECK(hp_contacts(decode(dir_word("ENW")), hhhh) == 1);
    CHECK(hp_contact_score(dir_word("ENW"), hhhh) == 3.0);  // K=4, one contact

    HPSequence pppp = HPSequence::parse("PPPP");
    CHECK(hp_contact_score(dir_word("ENW"), pppp) == 4.0);

    // straight line: no non-consecutive adjacencies regardless of labels
    HPSequence line_seq = HPSequence::parse("HHHHHH");
    CHECK(hp_contact_score(dir_word("EEEEE"), line_seq) == 6.0);

    CHECK_THROWS_AS(hp_contact_score(dir_word("EE"), hhhh), ContractError);
}

TEST_CASE("hp contacts match the oracle for all SAWs with n<=6") {
    Rng rng(123);
    for (std::size_t n = 2; n <= 6; ++n) {
        for (const auto& w : all_words(n)) {
            const Walk walk = decode(w);
            if (!is_self_avoiding(walk)) continue;
            std::string hp;
            for (std::size_t i = 0; i <= n; ++i) hp += rng.below(2) ? 'H' : 'P';
            CHECK(hp_contacts(walk, HPSequence::parse(hp)) == oracle_contacts(walk, hp));
        }
    }
}

TEST_CASE("hp contact score is invariant under the 8 lattice symmetries") {
    Rng rng(31);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 4 + rng.below(10);
        Word w = random_saw(n, rng);
        std::string hp;
        for (std::size_t i = 0; i <= n; ++i) hp += rng.below(2) ? 'H' : 'P';
        HPSequence seq = HPSequence::parse(hp);
        const Score base = hp_contact_score(w, seq);

        const Walk walk = decode(w);
        for (int sym = 0; sym < 8; ++sym) {
            Walk t = walk;
            for (auto& v : t.vertices) {
                P p = v;
                // rotations by 90 degrees sym%4 times, then optional reflection
                for (int r = 0; r < sym % 4; ++r) p = {-p[1], p[0]};
                if (sym >= 4) p = {-p[0], p[1]};
                v = p;
            }
            // translate back to the origin
            const P origin = t.vertices.front();
            for (auto& v : t.vertices) v = {v[0] - origin[0], v[1] - origin[1]};
            CHECK(hp_contact_score(encode(t), seq) == base);
        }
    }
}

TEST_CASE("saw_move always yields a self-avoiding walk") {
    Rng rng(77);
    StateToken t = make_token(straight_line_word(12), 0.0, Rng(5));
    for (int i = 0; i < 2000; ++i) {
        Word next = saw_move(t, rng);
        CHECK(is_self_avoiding(decode(next)));
        t.current = next;
    }
}

TEST_CASE("saw_move center choice is uniform on the straight line") {
    // straight line n=10: every pivot is valid, so the chosen center is the
    // first draw; frequencies over 10^4 moves must be uniform over 1..9
    Rng rng(55);
    StateToken t = make_token(straight_line_word(10), 0.0, Rng(5));
    std::array<int, 10> counts{};
    const int trials = 10000;
    for (int i = 0; i < trials; ++i) {
        Word next = saw_move(t, rng);
        Walk moved = decode(next);
        // recover the pivot center: first vertex that moved
        const Walk base = decode(t.current);
        std::size_t center = 0;
        for (std::size_t v = 0; v < moved.vertices.size(); ++v) {
            if (moved.vertices[v] != base.vertices[v]) {
                center = v - 1;
                break;
            }
        }
        counts[center] += 1;
    }
    const double expected = trials / 9.0;
    for (std::size_t c = 1; c <= 9; ++c) {
        const double sigma = std::sqrt(trials * (1.0 / 9.0) * (8.0 / 9.0));
        CHECK(std::abs(counts[c] - expected) < 3 * sigma + 1e-9);
    }
    CHECK(counts[0] == 0);
}

TEST_CASE("saw_move self-loops on degenerate inputs") {
    StateToken t = make_token(dir_word("E"), 0.0, Rng(1));
    Rng rng(2);
    CHECK(saw_move(t, rng) == t.current);
}

TEST_CASE("elongate base cases and validity") {
    Rng rng(11);
    // n=1: one step
    HPSequence two = HPSequence::parse("HP");
    Word w1 = elongate(two, rng);
    CHECK(w1.size() == 1);

    // all-P growth stays self-avoiding across lengths and seeds
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng.below(30);
        HPSequence seq;
        seq.hydrophobic.assign(n + 1, false);
        Word w = elongate(seq, rng);
        CHECK(w.size() == n);
        CHECK(is_self_avoiding(decode(w)));
    }
}

TEST_CASE("elongate on an all-H sequence never scores below the straight line") {
    HPSequence seq = HPSequence::parse("HHHHHHHH");  // n = 7
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(seed);
        Word w = elongate(seq, rng);
        const Walk walk = decode(w);
        CHECK(is_self_avoiding(walk));
        CHECK(hp_contacts(walk, seq) >= 0);
        CHECK(hp_contact_score(w, seq) <= hp_contact_score(straight_line_word(7), seq));
    }
}

TEST_CASE("elongate is deterministic per seed") {
    HPSequence seq = HPSequence::parse("HPHPHHPPHH");
    Rng a(42), b(42);
    CHECK(elongate(seq, a) == elongate(seq, b));
}

TEST_CASE("walk_text lists one labeled row per vertex") {
    HPSequence seq = HPSequence::parse("HPH");
    const std::string text = walk_text(decode(dir_word("EN")), &seq);
    CHECK(text == "0 0 H\n1 0 P\n1 1 H\n");
    CHECK(walk_text(decode(dir_word("EN"))) == "0 0 0\n1 0 1\n1 1 2\n");
}
