#ifndef WORDOPT_SUBSET_HPP
#define WORDOPT_SUBSET_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "wordopt/executor.hpp"
#include "wordopt/score.hpp"
#include "wordopt/word.hpp"

namespace wordopt {

// Core-gene subset selection: binary words pick gene subsets, the evaluation
// reports the resulting tree's lowest bootstrap support, and the score
// averages subset size with that support (wrapped for minimization).

struct SupportEvaluation {
    int lowest_support = 1;  // integer in [1,100]
    std::optional<std::string> topology_id;
    double evaluator_cost = 0.0;  // wall seconds
};

/// Minimized score: 100 - (percentage_of_ones + lowest_support) / 2, in
/// [0,100). The percentage is a real number, not truncated. Throws EvalError
/// on the all-zero word (an empty subset has no tree).
Score subset_score(const Word& w, const SupportEvaluation& eval);

// Desk-scale stand-in for the real alignment+inference pipeline: support is
// highest when the chosen subset matches the planted one, degraded by extra
// genes and optional seeded noise. Deterministic per (word, seed).
struct SyntheticOracleSpec {
    std::vector<std::size_t> planted;  // positions of the good genes
    double noise_level = 0.0;          // noise amplitude is noise_level * 10
    double penalty = 0.5;              // cost of genes outside the planted set
    std::uint64_t seed = 0;
};

SupportEvaluation synthetic_evaluate(const Word& w, const SyntheticOracleSpec& spec);

// External evaluator client. The command template runs through the executor
// with {input} (selected gene indices, one per line), {output} (file the tool
// writes), and {word} (the 0/1 text) placeholders; the declared output -- the
// {output} file when the placeholder is used, stdout otherwise -- must carry a
// "support=<int>" line and may carry "topology=<id>". Results are cached by
// word, optionally persisted as an append-only file of "word support" records.
struct CommandTemplate {
    std::string pattern;
    double timeout_s = 60.0;
    std::string workdir;
};

class ExternalEvaluator {
  public:
    explicit ExternalEvaluator(CommandTemplate tmpl, std::string cache_path = "");

    /// Cached evaluation; throws EvalError (with captured output) on nonzero
    /// exit, unparseable output, or timeout.
    SupportEvaluation evaluate(const Word& w);

    std::size_t external_calls() const { return external_calls_; }

  private:
    CommandTemplate tmpl_;
    std::string cache_path_;
    std::unordered_map<std::string, SupportEvaluation> cache_;
    std::size_t external_calls_ = 0;
};

/// Parses "support=<int>" (required) and "topology=<id>" (optional) from
/// evaluator output. Throws EvalError when no valid support line is present.
SupportEvaluation parse_support_output(const std::string& text);

// Score functions for the optimizer. The raw subset_score refuses the empty
// subset, but mid-run candidates may hit it; the adapters report the worst
// possible score (100) instead so the optimizer steers away without dying.
class SyntheticSubsetScore final : public ScoreFunction {
  public:
    explicit SyntheticSubsetScore(SyntheticOracleSpec spec) : spec_(std::move(spec)) {}
    Score evaluate(const Word& w) override;

  private:
    SyntheticOracleSpec spec_;
};

class ExternalSubsetScore final : public ScoreFunction {
  public:
    explicit ExternalSubsetScore(CommandTemplate tmpl, std::string cache_path = "")
        : eval_(std::move(tmpl), std::move(cache_path)) {}
    Score evaluate(const Word& w) override;
    ExternalEvaluator& evaluator() { return eval_; }

  private:
    ExternalEvaluator eval_;
};

/// Uniform random word conditioned on having at least one 1: the subset
/// problem's initial-word constructor. Consumes n draws per attempt.
Word nonempty_subset_word(std::size_t n, Rng& rng);

/// Substitute move that self-loops instead of emitting the all-zero word,
/// keeping candidates inside the problem's constraint set.
class SubsetMove final : public MoveFunction {
  public:
    SubsetMove(Alphabet alphabet, std::size_t radius = 1, double jump_prob = 0.2,
               std::size_t jump_radius = 4);
    Word propose(const StateToken& t, Rng& rng) override;

  private:
    SubstituteMove inner_;
};

}  // namespace wordopt

#endif
