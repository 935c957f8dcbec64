#ifndef WORDOPT_GA_HPP
#define WORDOPT_GA_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "wordopt/lasso.hpp"
#include "wordopt/run.hpp"
#include "wordopt/strings.hpp"

namespace wordopt {

// Scored population plus the append-only archive of every word ever
// evaluated this run (the Lasso phase fits on the archive).
struct Population {
    struct Member {
        Word word;
        Score score;
    };
    std::vector<Member> members;  // insertion order; selection keeps older first on ties
    std::vector<std::pair<Word, Score>> archive;

    Score best_score() const;
    const Member& best() const;
};

struct GAParams {
    std::uint64_t pop_size = 50;
    std::uint64_t max_iterations = 200;
    std::uint64_t n_crossovers = 5;
    std::uint64_t n_mutations = 5;
    std::uint64_t n_randoms = 5;
    std::uint64_t k_subsets = 0;  // crossover partition count bound; 0 = n/2
    std::uint64_t k_mut = 0;      // mutated positions per word; 0 = max(1, n/20)
    std::optional<double> stop_threshold;
    bool lasso_enabled = false;
    double lasso_lambda = 0.0;           // 0 = auto: 0.01 * lambda_max on the archive
    double lasso_freeze_fraction = 0.25; // top-ranked positions frozen by the bridge

    void validate() const;
    static GAParams from_params(const ParamMap& p);
};

/// Partition of {0..n-1} into k nonempty, disjoint, covering subsets, in the
/// sampled order (order fixes the odd/even crossover roles). 1 <= k <= n/2.
std::vector<std::vector<std::size_t>> random_partition(std::size_t n, std::size_t k, Rng& rng);

/// Positionwise mix: child takes parent 1's symbol at positions whose subset
/// I_j has odd 1-based j, parent 2's symbol elsewhere.
Word crossover(const Word& w1, const Word& w2,
               const std::vector<std::vector<std::size_t>>& partition);

/// Resamples exactly k_mut distinct positions uniformly over the alphabet
/// (the fresh symbol may equal the original).
Word mutate(const Word& w, std::size_t k_mut, const Alphabet& alphabet, Rng& rng);

/// One generation: add n_crossovers children, n_mutations mutants,
/// n_randoms fresh words (parents and mutation targets drawn with
/// replacement from the growing population), then keep the pop_size best.
/// Everything new lands in the archive with its score.
void ga_iteration(Population& p, const GAParams& params, const Problem& problem, Rng& rng,
                  RunStats& stats);

// Bridge from the ranked positions to the phase-2 population: by default the
// top-ranked fraction of positions is frozen at elite values and the rest is
// resampled. Replaceable for experiments.
using LassoBridge = std::function<Population(const Population&, const std::vector<PositionImpact>&,
                                             const GAParams&, const Problem&, Rng&, RunStats&)>;

Population default_lasso_bridge(const Population& pop, const std::vector<PositionImpact>& ranks,
                                const GAParams& params, const Problem& problem, Rng& rng,
                                RunStats& stats);

/// Full GA run; with lasso_enabled, ranks positions on the phase-1 archive,
/// rebuilds the population through the bridge, and runs a second phase of
/// max_iterations/2. The returned token carries the overall best.
RunResult run_ga(const Problem& problem, const GAParams& params, std::uint64_t seed,
                 const RunHooks& hooks = {}, const LassoBridge& bridge = {});

}  // namespace wordopt

#endif
