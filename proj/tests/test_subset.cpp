#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>

#include "wordopt/errors.hpp"
#include "wordopt/ga.hpp"
#include "wordopt/sa.hpp"
#include "wordopt/subset.hpp"

using namespace wordopt;

namespace {

Word bits(const std::string& text) {
    return Alphabet::binary().parse(text);
}

Word word_of_value(std::uint64_t v, std::size_t n) {
    Word w;
    w.sym.resize(n);
    for (std::size_t i = 0; i < n; ++i) w.sym[n - 1 - i] = (v >> i) & 1;
    return w;
}

}  // namespace

TEST_CASE("subset_score arithmetic from the definition") {
    SupportEvaluation s100{100, std::nullopt, 0.0};
    CHECK(subset_score(bits("1111111111"), s100) == 0.0);

    SupportEvaluation s80{80, std::nullopt, 0.0};
    CHECK(subset_score(bits("1111100000"), s80) == doctest::Approx(35.0));

    CHECK_THROWS_AS(subset_score(bits("0000"), s80), EvalError);
    CHECK_THROWS_AS(subset_score(bits("1000"), SupportEvaluation{0, std::nullopt, 0.0}),
                    ContractError);
    CHECK_THROWS_AS(subset_score(bits("1000"), SupportEvaluation{101, std::nullopt, 0.0}),
                    ContractError);

    // fixing support, adding a 1 strictly decreases the minimized score
    SupportEvaluation s50{50, std::nullopt, 0.0};
    double prev = subset_score(bits("1000000000"), s50);
    for (std::size_t ones = 2; ones <= 10; ++ones) {
        std::string text(10, '0');
        for (std::size_t i = 0; i < ones; ++i) text[i] = '1';
        const double cur = subset_score(bits(text), s50);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("synthetic oracle construction cases") {
    SyntheticOracleSpec spec;
    spec.planted = {1, 3, 5};
    spec.noise_level = 0.0;

    Word exact = bits("0101010000");
    CHECK(synthetic_evaluate(exact, spec).lowest_support == 100);

    Word disjoint = bits("1010100000");
    CHECK(synthetic_evaluate(disjoint, spec).lowest_support == 1);

    // deterministic per (word, seed), noise bounded by 10*noise_level
    spec.noise_level = 0.3;
    spec.seed = 7;
    const int a = synthetic_evaluate(exact, spec).lowest_support;
    const int b = synthetic_evaluate(exact, spec).lowest_support;
    CHECK(a == b);
    CHECK(std::abs(a - 100) <= 3);
}

TEST_CASE("brute-force minimum of the synthetic problem is found by SA and GA") {
    const std::size_t n = 10;
    SyntheticOracleSpec spec;
    spec.planted = {0, 2, 4, 6, 8};
    spec.noise_level = 0.0;

    SyntheticSubsetScore scorer(spec);
    double true_min = 1e30;
    Word argmin;
    for (std::uint64_t v = 1; v < (1ull << n); ++v) {
        Word w = word_of_value(v, n);
        const double s = scorer.evaluate(w);
        if (s < true_min) {
            true_min = s;
            argmin = w;
        }
    }
    // sanity on the oracle itself: the all-ones word scores (100 + support)/2
    // with support degraded by the 5 extra genes
    CHECK(true_min < 30.0);

    Problem p;
    p.name = "subset-synth";
    p.alphabet = Alphabet::binary();
    p.n = n;
    p.score = std::make_shared<SyntheticSubsetScore>(spec);
    p.move = std::make_shared<SubsetMove>(p.alphabet);
    p.initial = [n](Rng& rng) { return nonempty_subset_word(n, rng); };

    int sa_hits = 0, ga_hits = 0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        SAParams sa;
        sa.max_iterations = 10000;
        sa.target_score = true_min;
        sa_hits += run_sa(p, sa, seed).token.best_score == true_min;

        GAParams ga;
        ga.stop_threshold = true_min;
        ga_hits += run_ga(p, ga, seed).token.best_score == true_min;
    }
    CHECK(sa_hits >= 27);
    CHECK(ga_hits >= 27);
}

TEST_CASE("external evaluator parses declared output and caches by word") {
    CommandTemplate tmpl;
    tmpl.pattern = "echo support=87";
    ExternalEvaluator eval(tmpl);
    auto first = eval.evaluate(bits("1010"));
    CHECK(first.lowest_support == 87);
    CHECK(eval.external_calls() == 1);
    auto second = eval.evaluate(bits("1010"));
    CHECK(second.lowest_support == 87);
    CHECK(eval.external_calls() == 1);  // cache hit, no second call
    eval.evaluate(bits("1110"));
    CHECK(eval.external_calls() == 2);

    CHECK_THROWS_AS(eval.evaluate(bits("0000")), EvalError);
}

TEST_CASE("external evaluator writes gene indices and reads the output file") {
    CommandTemplate tmpl;
    tmpl.pattern = "cp {input} {output} && echo support=42 >> {output} && echo topology=T1 >> {output}";
    ExternalEvaluator eval(tmpl);
    auto res = eval.evaluate(bits("0110"));
    CHECK(res.lowest_support == 42);
    REQUIRE(res.topology_id.has_value());
    CHECK(*res.topology_id == "T1");
}

TEST_CASE("external evaluator failure modes") {
    CommandTemplate bad_exit;
    bad_exit.pattern = "echo support=90; exit 3";
    ExternalEvaluator e1(bad_exit);
    CHECK_THROWS_AS(e1.evaluate(bits("10")), EvalError);

    CommandTemplate no_support;
    no_support.pattern = "echo hello";
    ExternalEvaluator e2(no_support);
    CHECK_THROWS_AS(e2.evaluate(bits("10")), EvalError);

    CommandTemplate slow;
    slow.pattern = "sleep 30; echo support=10";
    slow.timeout_s = 0.2;
    ExternalEvaluator e3(slow);
    CHECK_THROWS_AS(e3.evaluate(bits("10")), EvalError);

    // the adapter skips failures instead of dying
    ExternalSubsetScore adapter(no_support);
    CHECK(adapter.evaluate(bits("10")) == 100.0);
}

TEST_CASE("external evaluator persists its cache") {
    namespace fs = std::filesystem;
    const auto path = fs::temp_directory_path() / "wordopt-test-cache.txt";
    fs::remove(path);
    {
        CommandTemplate tmpl;
        tmpl.pattern = "echo support=66";
        ExternalEvaluator eval(tmpl, path.string());
        eval.evaluate(bits("1100"));
        CHECK(eval.external_calls() == 1);
    }
    {
        CommandTemplate tmpl;
        tmpl.pattern = "false";  // would fail if actually invoked
        ExternalEvaluator eval(tmpl, path.string());
        CHECK(eval.evaluate(bits("1100")).lowest_support == 66);
        CHECK(eval.external_calls() == 0);
    }
    fs::remove(path);
}

TEST_CASE("subset move never emits the all-zero word") {
    SubsetMove move(Alphabet::binary(), 1, 0.0);
    Rng rng(3);
    StateToken t = make_token(bits("01"), 0.0, Rng(1));
    int self_loops = 0;
    for (int i = 0; i < 200; ++i) {
        Word next = move.propose(t, rng);
        bool any = false;
        for (auto b : next.sym) any = any || b;
        CHECK(any);
        self_loops += next == t.current;
    }
    CHECK(self_loops > 0);  // the 01 -> 00 flip must self-loop sometimes
}
