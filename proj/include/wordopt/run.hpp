#ifndef WORDOPT_RUN_HPP
#define WORDOPT_RUN_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "wordopt/score.hpp"
#include "wordopt/token.hpp"
#include "wordopt/word.hpp"

namespace wordopt {

// A resolved problem instance: everything a metaheuristic needs to run.
struct Problem {
    std::string name;
    Alphabet alphabet{Alphabet::binary()};
    std::size_t n = 0;
    std::shared_ptr<ScoreFunction> score;
    std::shared_ptr<MoveFunction> move;
    // Produces the starting word; defaults to uniform sampling. Constrained
    // problems (SAWs, nonempty subsets) install their own constructor.
    std::function<Word(Rng&)> initial;

    Word initial_word(Rng& rng) const {
        return initial ? initial(rng) : random_word(alphabet, n, rng);
    }

    Score evaluate(const Word& w) const {
        Score s = score->evaluate(w);
        check_score(s, name.c_str());
        return s;
    }
};

// Receives one record per iteration; full traces go here, the token keeps
// only a bounded tail. `control` is the temperature for SA and the phase
// index for population methods.
class TraceSink {
  public:
    virtual ~TraceSink() = default;
    virtual void record(std::uint64_t iteration, Score current, Score best, double control) = 0;
};

struct RunStats {
    std::uint64_t evaluations = 0;
    std::uint64_t accepts = 0;
    std::uint64_t self_loops = 0;
    std::uint64_t phases = 1;
    double wall_seconds = 0.0;

    void merge(const RunStats& other) {
        evaluations += other.evaluations;
        accepts += other.accepts;
        self_loops += other.self_loops;
    }
};

struct RunResult {
    StateToken token;
    RunStats stats;
};

// Engines call the hook at iteration boundaries with the token plus whatever
// engine-private state (population, swarm) a resume needs.
using CheckpointHook = std::function<void(const StateToken&, const nlohmann::json& mh_state)>;

// Optional knobs shared by all run_* entry points.
struct RunHooks {
    TraceSink* trace = nullptr;
    CheckpointHook checkpoint;           // invoked when checkpoint_every divides the iteration
    std::uint64_t checkpoint_every = 0;  // 0 disables
    const nlohmann::json* resume_state = nullptr;
    const StateToken* resume_token = nullptr;
};

}  // namespace wordopt

#endif
