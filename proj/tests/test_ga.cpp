#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "wordopt/errors.hpp"
#include "wordopt/ga.hpp"

using namespace wordopt;

namespace {

Score onemax(const Word& w) {
    Score s = 0;
    for (auto b : w.sym) s += b != 0;
    return s;
}

Problem onemax_problem(std::size_t n) {
    Problem p;
    p.name = "onemax";
    p.alphabet = Alphabet::binary();
    p.n = n;
    p.score = std::make_shared<LambdaScore>(onemax);
    p.move = std::make_shared<SubstituteMove>(p.alphabet);
    return p;
}

Population make_population(const Problem& problem, std::size_t count, Rng& rng) {
    Population pop;
    for (std::size_t i = 0; i < count; ++i) {
        Word w = random_word(problem.alphabet, problem.n, rng);
        Score s = problem.score->evaluate(w);
        pop.archive.emplace_back(w, s);
        pop.members.push_back({std::move(w), s});
    }
    return pop;
}

}  // namespace

TEST_CASE("crossover follows the positionwise odd/even rule") {
    Alphabet ab({"A", "B"});
    Word w1 = ab.parse("AAAA");
    Word w2 = ab.parse("BBBB");
    // I_1 = {1,2}, I_2 = {3,4} in 1-based terms.
    std::vector<std::vector<std::size_t>> part = {{0, 1}, {2, 3}};
    CHECK(ab.render(crossover(w1, w2, part)) == "AABB");

    // identity parents: any partition returns the parent
    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        Word w = random_word(ab, 8, rng);
        auto p = random_partition(8, 1 + rng.below(4), rng);
        CHECK(crossover(w, w, p) == w);
    }
}

TEST_CASE("crossover fuzz against a positionwise oracle") {
    Alphabet four({"a", "b", "c", "d"});
    Rng rng(99);
    for (int trial = 0; trial < 10000; ++trial) {
        const std::size_t n = 8;
        Word w1 = random_word(four, n, rng);
        Word w2 = random_word(four, n, rng);
        const std::size_t k = 1 + rng.below(n / 2);
        auto part = random_partition(n, k, rng);
        Word child = crossover(w1, w2, part);
        // oracle: subset index of each position, re-evaluated independently
        for (std::size_t pos = 0; pos < n; ++pos) {
            std::size_t subset = part.size();
            for (std::size_t j = 0; j < part.size(); ++j)
                if (std::find(part[j].begin(), part[j].end(), pos) != part[j].end()) subset = j;
            REQUIRE(subset < part.size());
            const bool odd = (subset + 1) % 2 == 1;
            CHECK(child[pos] == (odd ? w1[pos] : w2[pos]));
        }
    }
}

TEST_CASE("crossover rejects non-partitions") {
    Alphabet ab({"A", "B"});
    Word w1 = ab.parse("AAAA");
    Word w2 = ab.parse("BBBB");
    CHECK_THROWS_AS(crossover(w1, w2, {{0, 1}, {1, 2, 3}}), ContractError);  // overlap
    CHECK_THROWS_AS(crossover(w1, w2, {{0, 1}, {3}}), ContractError);        // gap
    CHECK_THROWS_AS(crossover(w1, w2, {}), ContractError);                   // k = 0
    CHECK_THROWS_AS(crossover(w1, w2, {{0}, {1}, {2}, {3}}), ContractError); // k > n/2
}

TEST_CASE("random_partition structure") {
    Rng rng(1);
    auto p = random_partition(4, 2, rng);
    CHECK(p.size() == 2);
    std::set<std::size_t> all;
    for (const auto& s : p) {
        CHECK(!s.empty());
        all.insert(s.begin(), s.end());
    }
    CHECK(all == std::set<std::size_t>{0, 1, 2, 3});

    auto single = random_partition(2, 1, rng);
    CHECK(single == std::vector<std::vector<std::size_t>>{{0, 1}});

    CHECK_THROWS_AS(random_partition(6, 0, rng), ContractError);
    CHECK_THROWS_AS(random_partition(6, 4, rng), ContractError);

    // every index lands in exactly one subset on every draw
    for (int trial = 0; trial < 10000; ++trial) {
        auto part = random_partition(6, 3, rng);
        std::vector<int> hits(6, 0);
        for (const auto& s : part) {
            CHECK(!s.empty());
            for (auto i : s) hits[i] += 1;
        }
        for (int h : hits) CHECK(h == 1);
    }
}

TEST_CASE("mutate touches at most k_mut positions and resamples uniformly") {
    Alphabet bin = Alphabet::binary();
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        Word w = random_word(bin, 20, rng);
        const std::size_t k = 1 + rng.below(20);
        Word m = mutate(w, k, bin, rng);
        CHECK(hamming_distance(w, m) <= k);
    }
    CHECK_THROWS_AS(mutate(random_word(bin, 4, rng), 0, bin, rng), ContractError);
    CHECK_THROWS_AS(mutate(random_word(bin, 4, rng), 5, bin, rng), ContractError);

    // binary alphabet: each resampled position changes with probability 1/2,
    // so changed positions ~ Binomial(k, 1/2)
    const std::size_t k_mut = 8;
    const int trials = 10000;
    std::uint64_t changed = 0;
    Word base = random_word(bin, 16, rng);
    for (int i = 0; i < trials; ++i) changed += hamming_distance(base, mutate(base, k_mut, bin, rng));
    const double mean = double(changed) / trials;
    const double expect = k_mut / 2.0;
    const double sigma = std::sqrt(k_mut * 0.25 / trials);
    CHECK(std::abs(mean - expect) < 3 * sigma + 1e-9);
}

TEST_CASE("ga_iteration adds 15 to the archive and keeps pop_size members") {
    Problem p = onemax_problem(12);
    GAParams params;
    Rng rng(17);
    Population pop = make_population(p, params.pop_size, rng);
    RunStats stats;
    for (int it = 1; it <= 10; ++it) {
        const double before_min = pop.best_score();
        const std::size_t before_archive = pop.archive.size();
        ga_iteration(pop, params, p, rng, stats);
        CHECK(pop.members.size() == params.pop_size);
        CHECK(pop.archive.size() == before_archive + 15);
        CHECK(pop.best_score() <= before_min);  // elitist selection
    }
    CHECK(pop.archive.size() == 50 + 10 * 15);
}

TEST_CASE("selection keeps the minimum even in a degenerate population") {
    Problem p = onemax_problem(8);
    GAParams params;
    params.pop_size = 20;
    Rng rng(2);
    Population pop;
    Word w = p.alphabet.parse("00001111");
    for (std::size_t i = 0; i < params.pop_size; ++i) pop.members.push_back({w, onemax(w)});
    RunStats stats;
    ga_iteration(pop, params, p, rng, stats);
    CHECK(pop.best_score() <= onemax(w));
}

TEST_CASE("run_ga solves OneMax n=20 within 200 iterations for most seeds") {
    int solved = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Problem p = onemax_problem(20);
        GAParams params;
        params.stop_threshold = 0.0;
        auto res = run_ga(p, params, seed);
        solved += res.token.best_score == 0.0;
    }
    CHECK(solved >= 90);
}

TEST_CASE("run_ga stops at the threshold and reports a single phase without lasso") {
    Problem p = onemax_problem(16);
    GAParams params;
    params.stop_threshold = 0.0;
    auto res = run_ga(p, params, 4);
    CHECK(res.stats.phases == 1);
    if (res.token.best_score == 0.0) CHECK(res.token.iteration <= params.max_iterations);
}

TEST_CASE("run_ga is deterministic per seed") {
    Problem p = onemax_problem(14);
    GAParams params;
    params.max_iterations = 40;
    auto a = run_ga(p, params, 77);
    auto b = run_ga(p, params, 77);
    CHECK(a.token == b.token);
    CHECK(a.stats.evaluations == b.stats.evaluations);
}

TEST_CASE("run_ga checkpoint and resume reproduces the uninterrupted run") {
    Problem p = onemax_problem(14);
    GAParams params;
    params.max_iterations = 30;

    auto full = run_ga(p, params, 9);

    StateToken saved_token;
    nlohmann::json saved_state;
    RunHooks hooks;
    hooks.checkpoint_every = 10;
    hooks.checkpoint = [&](const StateToken& t, const nlohmann::json& state) {
        if (t.iteration == 10) {
            saved_token = t;
            saved_state = state;
        }
    };
    run_ga(p, params, 9, hooks);
    REQUIRE(saved_token.iteration == 10);

    RunHooks resume;
    resume.resume_token = &saved_token;
    resume.resume_state = &saved_state;
    auto back = run_ga(p, params, 9, resume);
    CHECK(back.token == full.token);
}
