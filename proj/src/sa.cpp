#include "wordopt/sa.hpp"

#include <chrono>
#include <cmath>

#include "wordopt/errors.hpp"

namespace wordopt {

namespace {

std::string word_digits(const Word& w) {
    std::string s = "[";
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += ' ';
        s += std::to_string(int(w[i]));
    }
    return s + "]";
}

Score evaluate_candidate(ScoreFunction& score, const Word& w) {
    try {
        Score s = score.evaluate(w);
        check_score(s, "score");
        return s;
    } catch (const Error& e) {
        throw EvalError("score evaluation failed for candidate " + word_digits(w) + ": " + e.what());
    }
}

double plateau_temperature(const SAParams& p, double t0, std::uint64_t plateau) {
    // T0 * alpha^k recomputed from the plateau index, so the schedule carries
    // no accumulated multiplication drift.
    return t0 * std::pow(p.alpha, static_cast<double>(plateau));
}

double plateau_threshold(const SAParams& p, std::uint64_t plateau) {
    if (p.criterion == "great_deluge")
        return p.threshold0 * std::pow(p.threshold_decay, static_cast<double>(plateau));
    return p.threshold0;
}

}  // namespace

bool metropolis_accept(double delta, double temperature, Rng& rng) {
    if (!(temperature > 0.0)) throw ContractError("metropolis: temperature must be positive");
    if (delta <= 0.0) return true;
    return rng.uniform() < std::exp(-delta / temperature);
}

bool threshold_accept(double delta, double threshold) {
    if (threshold < 0.0) throw ContractError("threshold_accept: threshold must be >= 0");
    return delta <= threshold;
}

void SAParams::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("sa: alpha must be in (0,1)");
    if (chain_length < 1) throw ConfigError("sa: chain_length must be >= 1");
    if (max_iterations < 1) throw ConfigError("sa: max_iterations must be >= 1");
    if (!(t_min > 0.0)) throw ConfigError("sa: t_min must be positive");
    if (t0 < 0.0) throw ConfigError("sa: t0 must be >= 0 (0 auto-calibrates)");
    if (threshold0 < 0.0) throw ConfigError("sa: threshold0 must be >= 0");
    if (!(threshold_decay > 0.0 && threshold_decay <= 1.0))
        throw ConfigError("sa: threshold_decay must be in (0,1]");
    make_criterion(criterion);
}

SAParams SAParams::from_params(const ParamMap& p) {
    SAParams out;
    out.t0 = param_double(p, "t0", out.t0);
    out.alpha = param_double(p, "alpha", out.alpha);
    out.chain_length = param_uint(p, "chain_length", out.chain_length);
    out.t_min = param_double(p, "t_min", out.t_min);
    out.max_iterations = param_uint(p, "max_iterations", out.max_iterations);
    out.target_score = param_opt_double(p, "target_score");
    out.criterion = param_str(p, "criterion", out.criterion);
    out.threshold0 = param_double(p, "threshold0", out.threshold0);
    out.threshold_decay = param_double(p, "threshold_decay", out.threshold_decay);
    out.validate();
    return out;
}

std::shared_ptr<AcceptanceCriterion> make_criterion(const std::string& name) {
    if (name == "metropolis") return std::make_shared<MetropolisCriterion>();
    if (name == "threshold") return std::make_shared<ThresholdCriterion>();
    if (name == "great_deluge") return std::make_shared<GreatDelugeCriterion>();
    throw ConfigError("unknown acceptance criterion '" + name +
                      "' (available: metropolis, threshold, great_deluge)");
}

void sa_step(StateToken& t, MoveFunction& move, ScoreFunction& score,
             const AcceptanceCriterion& crit, const SAControl& ctrl, StepOutcome* out) {
    Word candidate = move.propose(t, t.rng);
    const bool self_loop = candidate == t.current;
    // A self-loop of a deterministic score re-scores to the same value, so
    // the call is skipped.
    const bool skip_eval = self_loop && score.deterministic();
    const Score cand_score = skip_eval ? t.current_score : evaluate_candidate(score, candidate);
    t.note_evaluation(candidate, cand_score);
    const double delta = cand_score - t.current_score;
    const bool accepted = crit.accept(delta, ctrl, t.rng);
    if (accepted) {
        t.current = std::move(candidate);
        t.current_score = cand_score;
    }
    t.iteration += 1;
    t.push_trace(t.iteration, t.best_score);
    if (out) *out = StepOutcome{accepted, self_loop, !skip_eval, cand_score};
}

namespace {

// Probe T0 so that mean uphill acceptance over 100 sampled moves is ~0.8.
double calibrate_t0(const Problem& problem, const StateToken& start, std::uint64_t seed,
                    RunStats& stats) {
    Rng probe_rng(derive_seed(seed, "sa.calibrate"));
    StateToken probe = start;
    double uphill_sum = 0.0;
    int uphill_count = 0;
    for (int i = 0; i < 100; ++i) {
        Word cand = problem.move->propose(probe, probe_rng);
        if (cand == probe.current) continue;
        const Score s = problem.evaluate(cand);
        stats.evaluations += 1;
        const double delta = s - probe.current_score;
        if (delta > 0.0) {
            uphill_sum += delta;
            uphill_count += 1;
        }
    }
    if (uphill_count == 0) return 1.0;
    return (uphill_sum / uphill_count) / std::log(1.0 / 0.8);
}

StateToken fresh_token(const Problem& problem, std::uint64_t seed, const char* stream,
                       RunStats& stats) {
    Rng rng(derive_seed(seed, stream));
    Word start = problem.initial_word(rng);
    const Score s0 = problem.evaluate(start);
    stats.evaluations += 1;
    StateToken t = make_token(std::move(start), s0, rng);
    t.mh_params["seed"] = std::to_string(seed);
    return t;
}

}  // namespace

RunResult run_sa(const Problem& problem, const SAParams& params, std::uint64_t seed,
                 const RunHooks& hooks) {
    params.validate();
    if (!problem.score || !problem.move) throw ConfigError("sa: problem is missing score or move");
    const auto criterion = make_criterion(params.criterion);
    const auto start_time = std::chrono::steady_clock::now();

    RunStats stats;
    StateToken t;
    double t0 = params.t0;
    if (hooks.resume_token) {
        t = *hooks.resume_token;
        t0 = param_double(t.mh_params, "t0", t0);
        if (t0 <= 0.0) throw ConfigError("sa: resumed token carries no usable t0");
    } else {
        t = fresh_token(problem, seed, "sa", stats);
        if (t0 == 0.0)
            t0 = params.criterion == "metropolis" ? calibrate_t0(problem, t, seed, stats) : 1.0;
        t.mh_params["t0"] = format_double(t0);
        t.mh_params["criterion"] = params.criterion;
        t.mh_params["plateau"] = "0";
        t.mh_params["chain_pos"] = "0";
    }

    std::uint64_t plateau = param_uint(t.mh_params, "plateau", 0);
    std::uint64_t chain_pos = param_uint(t.mh_params, "chain_pos", 0);

    const auto done = [&] {
        if (params.target_score && t.best_score <= *params.target_score) return true;
        if (t.iteration >= params.max_iterations) return true;
        return plateau_temperature(params, t0, plateau) < params.t_min;
    };

    const auto save_position = [&] {
        t.mh_params["plateau"] = std::to_string(plateau);
        t.mh_params["chain_pos"] = std::to_string(chain_pos);
    };

    while (!done()) {
        const SAControl ctrl{plateau_temperature(params, t0, plateau),
                             plateau_threshold(params, plateau)};
        StepOutcome step;
        sa_step(t, *problem.move, *problem.score, *criterion, ctrl, &step);
        stats.evaluations += step.evaluated;
        stats.accepts += step.accepted;
        stats.self_loops += step.self_loop;
        if (hooks.trace) hooks.trace->record(t.iteration, t.current_score, t.best_score, ctrl.temperature);

        chain_pos += 1;
        if (chain_pos >= params.chain_length) {
            chain_pos = 0;
            plateau += 1;
        }
        if (hooks.checkpoint && hooks.checkpoint_every && t.iteration % hooks.checkpoint_every == 0) {
            save_position();
            hooks.checkpoint(t, nlohmann::json::object());
        }
    }

    save_position();
    stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
    return RunResult{std::move(t), stats};
}

DescentParams DescentParams::from_params(const ParamMap& p) {
    DescentParams out;
    out.step_cap = param_uint(p, "step_cap", out.step_cap);
    out.stall = param_uint(p, "stall", out.stall);
    return out;
}

RunResult run_descent(const Problem& problem, const DescentParams& params, std::uint64_t seed,
                      const RunHooks& hooks) {
    if (!problem.score || !problem.move)
        throw ConfigError("descent: problem is missing score or move");
    const ThresholdCriterion crit;
    const SAControl ctrl{1.0, 0.0};  // bound 0: pure descent
    const auto start_time = std::chrono::steady_clock::now();

    RunStats stats;
    StateToken t;
    if (hooks.resume_token) {
        t = *hooks.resume_token;
    } else {
        t = fresh_token(problem, seed, "descent", stats);
    }

    std::uint64_t rejects_in_row = 0;
    for (std::uint64_t step = 0; step < params.step_cap; ++step) {
        StepOutcome out;
        sa_step(t, *problem.move, *problem.score, crit, ctrl, &out);
        stats.evaluations += out.evaluated;
        stats.accepts += out.accepted;
        stats.self_loops += out.self_loop;
        if (hooks.trace) hooks.trace->record(t.iteration, t.current_score, t.best_score, 0.0);
        rejects_in_row = out.accepted ? 0 : rejects_in_row + 1;
        if (params.stall && rejects_in_row >= params.stall) break;
    }

    stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
    return RunResult{std::move(t), stats};
}

}  // namespace wordopt
