#ifndef WORDOPT_SA_HPP
#define WORDOPT_SA_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "wordopt/run.hpp"
#include "wordopt/strings.hpp"

namespace wordopt {

// Plateau control handed to the acceptance test each step. `threshold` is the
// current bound for the threshold-family criteria; Metropolis ignores it.
struct SAControl {
    double temperature = 1.0;
    double threshold = 0.0;
};

// The test applied after each (move, evaluate) pair. All variants accept
// improvements and ties (delta <= 0).
class AcceptanceCriterion {
  public:
    virtual ~AcceptanceCriterion() = default;
    virtual bool accept(double delta, const SAControl& ctrl, Rng& rng) const = 0;
    virtual std::string name() const = 0;
    /// Uniform draws consumed per call for a worsening delta (improvements
    /// consume none); documented so step draw counts stay fixed.
    virtual int draws_per_test() const = 0;
};

/// Accept with probability min(1, exp(-delta/T)). Consumes one draw iff
/// delta > 0. T must be positive.
bool metropolis_accept(double delta, double temperature, Rng& rng);

/// Deterministic: accept iff delta <= threshold (threshold >= 0).
bool threshold_accept(double delta, double threshold);

// Criterion family registered by name: "metropolis", "threshold" (fixed
// bound), "great_deluge" (bound decays by `decay` each plateau).
class MetropolisCriterion final : public AcceptanceCriterion {
  public:
    bool accept(double delta, const SAControl& ctrl, Rng& rng) const override {
        return metropolis_accept(delta, ctrl.temperature, rng);
    }
    std::string name() const override { return "metropolis"; }
    int draws_per_test() const override { return 1; }
};

class ThresholdCriterion final : public AcceptanceCriterion {
  public:
    bool accept(double delta, const SAControl& ctrl, Rng&) const override {
        return threshold_accept(delta, ctrl.threshold);
    }
    std::string name() const override { return "threshold"; }
    int draws_per_test() const override { return 0; }
};

class GreatDelugeCriterion final : public AcceptanceCriterion {
  public:
    bool accept(double delta, const SAControl& ctrl, Rng&) const override {
        return threshold_accept(delta, ctrl.threshold);
    }
    std::string name() const override { return "great_deluge"; }
    int draws_per_test() const override { return 0; }
};

struct SAParams {
    // t0 == 0 requests auto-calibration: pick T0 so a 100-move probe from the
    // start word would accept uphill moves at rate ~0.8.
    double t0 = 0.0;
    double alpha = 0.95;
    std::uint64_t chain_length = 100;
    double t_min = 1e-4;
    std::uint64_t max_iterations = 100000;
    std::optional<double> target_score;
    std::string criterion = "metropolis";
    double threshold0 = 1.0;       // threshold family: initial bound
    double threshold_decay = 0.95; // great deluge: bound *= decay per plateau

    void validate() const;
    static SAParams from_params(const ParamMap& p);
};

std::shared_ptr<AcceptanceCriterion> make_criterion(const std::string& name);

struct StepOutcome {
    bool accepted = false;
    bool self_loop = false;  // move returned the current word unchanged
    bool evaluated = true;   // false when a deterministic self-loop skipped the call
    Score candidate_score = 0.0;
};

/// One annealing step: move, evaluate, test, maybe adopt; best and iteration
/// bookkeeping included. Throws EvalError with the candidate word attached if
/// the score function fails.
void sa_step(StateToken& t, MoveFunction& move, ScoreFunction& score,
             const AcceptanceCriterion& crit, const SAControl& ctrl,
             StepOutcome* out = nullptr);

/// Full annealing run: chains of chain_length steps, T <- alpha*T between
/// chains, until T < t_min, the iteration cap, or target_score is reached.
/// Restartable from a checkpointed token via hooks.resume_token.
RunResult run_sa(const Problem& problem, const SAParams& params, std::uint64_t seed,
                 const RunHooks& hooks = {});

/// Greedy descent: threshold criterion with bound 0, run for at most
/// `step_cap` steps, stopping early after `stall` consecutive rejected
/// candidates (the local-minimum proxy for stochastic moves).
struct DescentParams {
    std::uint64_t step_cap = 1000;
    std::uint64_t stall = 50;
    static DescentParams from_params(const ParamMap& p);
};

RunResult run_descent(const Problem& problem, const DescentParams& params, std::uint64_t seed,
                      const RunHooks& hooks = {});

}  // namespace wordopt

#endif
