#ifndef WORDOPT_TOKEN_HPP
#define WORDOPT_TOKEN_HPP

#include <cstdint>
#include <deque>
#include <span>
#include <utility>
#include <vector>

#include "wordopt/rng.hpp"
#include "wordopt/score.hpp"
#include "wordopt/strings.hpp"
#include "wordopt/word.hpp"

namespace wordopt {

// The dataflow token every metaheuristic threads through its steps: current
// coordinates and score, best ever seen, the RNG stream, and the active
// parameters. Single-owner mutable; crosses process boundaries only as
// checkpoint bytes.
struct StateToken {
    static constexpr std::size_t kTraceTailLimit = 10000;

    Word current;
    Score current_score = 0.0;
    Word best;
    Score best_score = 0.0;
    std::uint64_t iteration = 0;
    Rng rng;
    ParamMap mh_params;
    std::deque<std::pair<std::uint64_t, Score>> trace_tail;

    /// Record a fresh evaluation; best_score stays the minimum score ever
    /// evaluated in this token's history.
    void note_evaluation(const Word& w, Score s) {
        if (best.sym.empty() || s < best_score) {
            best = w;
            best_score = s;
        }
    }

    void push_trace(std::uint64_t it, Score best_now) {
        trace_tail.emplace_back(it, best_now);
        if (trace_tail.size() > kTraceTailLimit) trace_tail.pop_front();
    }

    bool operator==(const StateToken&) const = default;
};

/// Fresh token positioned on `start` with its score already evaluated.
StateToken make_token(Word start, Score start_score, Rng rng);

// Checkpoint format: one UTF-8 JSON document, versioned and self-describing.
// Restoring under the same code version reproduces the identical future
// trajectory; corrupted bytes or a version mismatch raise DecodeError, never
// a partial token.
std::vector<std::uint8_t> token_checkpoint(const StateToken& t);
StateToken token_restore(std::span<const std::uint8_t> bytes);

}  // namespace wordopt

#endif
