#ifndef WORDOPT_SCORE_HPP
#define WORDOPT_SCORE_HPP

#include <cmath>
#include <functional>
#include <memory>

#include "wordopt/errors.hpp"
#include "wordopt/word.hpp"

namespace wordopt {

struct StateToken;

// Scores are finite nonnegative reals and the framework always minimizes.
// Problems stated as maximizations are wrapped at the problem layer.
using Score = double;

inline void check_score(Score s, const char* who) {
    if (!(std::isfinite(s) && s >= 0.0))
        throw EvalError(std::string(who) + ": score must be finite and nonnegative");
}

// Field function: Word -> Score. Deterministic per run unless declared
// stochastic.
class ScoreFunction {
  public:
    virtual ~ScoreFunction() = default;
    virtual Score evaluate(const Word& w) = 0;
    virtual bool deterministic() const { return true; }
};

// Field function: (token, random stream) -> candidate Word. A move is a graph
// step or bounded jump in the neighbor graph, never a resample of the whole
// space; constrained problems guarantee the candidate stays feasible.
class MoveFunction {
  public:
    virtual ~MoveFunction() = default;
    virtual Word propose(const StateToken& t, Rng& rng) = 0;
};

class LambdaScore final : public ScoreFunction {
  public:
    explicit LambdaScore(std::function<Score(const Word&)> fn) : fn_(std::move(fn)) {}
    Score evaluate(const Word& w) override { return fn_(w); }

  private:
    std::function<Score(const Word&)> fn_;
};

class LambdaMove final : public MoveFunction {
  public:
    explicit LambdaMove(std::function<Word(const StateToken&, Rng&)> fn) : fn_(std::move(fn)) {}
    Word propose(const StateToken& t, Rng& rng) override { return fn_(t, rng); }

  private:
    std::function<Word(const StateToken&, Rng&)> fn_;
};

// Substitutes `radius` distinct positions with symbols different from the
// current ones: one uniform step in the Hamming graph for radius 1, a bounded
// jump otherwise. With probability jump_prob the step uses jump_radius
// instead; the occasional wider kick keeps the chain mobile on unstructured
// landscapes. Draw count is fixed per mode: 1 mode draw (when jump_prob > 0)
// plus 2 draws per substituted position.
class SubstituteMove final : public MoveFunction {
  public:
    explicit SubstituteMove(Alphabet alphabet, std::size_t radius = 1,
                            double jump_prob = 0.2, std::size_t jump_radius = 4);
    Word propose(const StateToken& t, Rng& rng) override;

  private:
    Alphabet alphabet_;
    std::size_t radius_;
    double jump_prob_;
    std::size_t jump_radius_;
};

}  // namespace wordopt

#endif
