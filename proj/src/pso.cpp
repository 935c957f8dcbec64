#include "wordopt/pso.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "wordopt/errors.hpp"

namespace wordopt {

void PSOParams::validate() const {
    if (swarm_size < 1) throw ConfigError("pso: swarm_size must be >= 1");
    if (max_iterations < 1) throw ConfigError("pso: max_iterations must be >= 1");
    if (!(v_max > 0.0)) throw ConfigError("pso: v_max must be positive");
    if (inertia < 0.0) throw ConfigError("pso: inertia must be >= 0");
    if (phi1 < 0.0 || phi2 < 0.0) throw ConfigError("pso: phi weights must be >= 0");
}

PSOParams PSOParams::from_params(const ParamMap& p) {
    PSOParams out;
    out.swarm_size = param_uint(p, "swarm_size", out.swarm_size);
    out.inertia = param_double(p, "inertia", out.inertia);
    out.phi1 = param_double(p, "phi1", out.phi1);
    out.phi2 = param_double(p, "phi2", out.phi2);
    out.v_max = param_double(p, "v_max", out.v_max);
    out.max_iterations = param_uint(p, "max_iterations", out.max_iterations);
    out.stop_threshold = param_opt_double(p, "target_score");
    if (auto alt = param_opt_double(p, "stop_threshold")) out.stop_threshold = alt;
    out.stochastic = param_bool(p, "stochastic", out.stochastic);
    out.collapse_rescue = param_bool(p, "collapse_rescue", out.collapse_rescue);
    out.validate();
    return out;
}

std::vector<double> velocity_update(const Particle& p, const Word& global_best,
                                    const PSOParams& params, Rng& rng) {
    const std::size_t n = p.position.size();
    if (p.velocity.size() != n || p.best.size() != n || global_best.size() != n)
        throw ContractError("velocity_update: dimension mismatch");
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = double(p.position[i]);
        double a1 = params.phi1;
        double a2 = params.phi2;
        if (params.stochastic) {
            a1 *= rng.uniform();
            a2 *= rng.uniform();
        }
        double next = params.inertia * p.velocity[i] + a1 * (double(p.best[i]) - x) +
                      a2 * (double(global_best[i]) - x);
        v[i] = std::clamp(next, -params.v_max, params.v_max);
    }
    return v;
}

std::size_t discretize(double velocity, const Alphabet& alphabet) {
    const std::size_t m = alphabet.size();
    const double s = sigmoid(velocity);  // strictly within (0,1)
    // anchors a_j = j/(m-1); compare the two bracketing anchors so an exact
    // tie lands on the lower index
    const double scaled = s * double(m - 1);
    std::size_t lo = std::min<std::size_t>(static_cast<std::size_t>(scaled), m - 1);
    std::size_t hi = std::min<std::size_t>(lo + 1, m - 1);
    const double d_lo = std::abs(s - double(lo) / double(m - 1));
    const double d_hi = std::abs(s - double(hi) / double(m - 1));
    return d_lo <= d_hi ? lo : hi;
}

void pso_step(Swarm& s, const Problem& problem, const PSOParams& params, Rng& rng,
              RunStats& stats) {
    for (auto& p : s.particles) {
        p.velocity = velocity_update(p, s.global_best, params, rng);
        Word next;
        next.sym.resize(p.position.size());
        for (std::size_t i = 0; i < p.velocity.size(); ++i)
            next.sym[i] = static_cast<std::uint8_t>(discretize(p.velocity[i], problem.alphabet));
        p.position = std::move(next);
        try {
            p.position_score = problem.evaluate(p.position);
        } catch (const Error& e) {
            const std::size_t index = &p - s.particles.data();
            throw EvalError("pso: particle " + std::to_string(index) +
                            " score failed on word '" + problem.alphabet.render(p.position) +
                            "': " + e.what());
        }
        stats.evaluations += 1;
        if (p.position_score < p.best_score) {
            p.best = p.position;
            p.best_score = p.position_score;
        }
        if (p.best_score < s.global_best_score) {
            s.global_best = p.best;
            s.global_best_score = p.best_score;
        }
    }
    s.iteration += 1;
}

bool swarm_collapsed(const Swarm& s) {
    for (const auto& p : s.particles)
        if (p.position != s.global_best || p.best != s.global_best) return false;
    return true;
}

namespace {

nlohmann::json swarm_state(const Swarm& s) {
    nlohmann::json j;
    j["iteration"] = s.iteration;
    j["global_best"] = s.global_best.sym;
    j["global_best_score"] = s.global_best_score;
    auto& parts = j["particles"] = nlohmann::json::array();
    for (const auto& p : s.particles) {
        parts.push_back({{"position", p.position.sym},
                         {"position_score", p.position_score},
                         {"velocity", p.velocity},
                         {"best", p.best.sym},
                         {"best_score", p.best_score}});
    }
    return j;
}

Word word_from_state(const nlohmann::json& j) {
    Word w;
    for (const auto& v : j) w.sym.push_back(v.get<std::uint8_t>());
    return w;
}

Swarm restore_swarm(const nlohmann::json& state) {
    Swarm s;
    try {
        s.iteration = state.at("iteration").get<std::uint64_t>();
        s.global_best = word_from_state(state.at("global_best"));
        s.global_best_score = state.at("global_best_score").get<double>();
        for (const auto& pj : state.at("particles")) {
            Particle p;
            p.position = word_from_state(pj.at("position"));
            p.position_score = pj.at("position_score").get<double>();
            p.velocity = pj.at("velocity").get<std::vector<double>>();
            p.best = word_from_state(pj.at("best"));
            p.best_score = pj.at("best_score").get<double>();
            s.particles.push_back(std::move(p));
        }
    } catch (const nlohmann::json::exception& e) {
        throw DecodeError(std::string("pso: bad resume state: ") + e.what());
    }
    return s;
}

}  // namespace

RunResult run_pso(const Problem& problem, const PSOParams& params, std::uint64_t seed,
                  const RunHooks& hooks) {
    params.validate();
    if (!problem.score) throw ConfigError("pso: problem is missing a score function");
    const auto start_time = std::chrono::steady_clock::now();

    RunStats stats;
    Swarm swarm;
    StateToken token;

    if (hooks.resume_token && hooks.resume_state) {
        token = *hooks.resume_token;
        swarm = restore_swarm(*hooks.resume_state);
    } else {
        token.rng = Rng(derive_seed(seed, "pso"));
        token.mh_params["seed"] = std::to_string(seed);
        // Init order per particle: n position draws then n velocity draws in
        // [-1,1]; both counts are fixed.
        for (std::uint64_t i = 0; i < params.swarm_size; ++i) {
            Particle p;
            p.position = problem.initial_word(token.rng);
            p.velocity.resize(problem.n);
            for (auto& v : p.velocity) v = token.rng.uniform(-1.0, 1.0);
            p.position_score = problem.evaluate(p.position);
            stats.evaluations += 1;
            p.best = p.position;
            p.best_score = p.position_score;
            swarm.particles.push_back(std::move(p));
        }
        swarm.global_best = swarm.particles.front().best;
        swarm.global_best_score = swarm.particles.front().best_score;
        for (const auto& p : swarm.particles) {
            if (p.best_score < swarm.global_best_score) {
                swarm.global_best = p.best;
                swarm.global_best_score = p.best_score;
            }
        }
        token.current = swarm.global_best;
        token.current_score = swarm.global_best_score;
        token.best = swarm.global_best;
        token.best_score = swarm.global_best_score;
    }

    const auto attained = [&] {
        return params.stop_threshold && swarm.global_best_score <= *params.stop_threshold;
    };

    while (swarm.iteration < params.max_iterations && !attained()) {
        pso_step(swarm, problem, params, token.rng, stats);
        if (params.collapse_rescue && swarm_collapsed(swarm)) {
            for (auto& p : swarm.particles)
                for (auto& v : p.velocity) v = token.rng.uniform(-1.0, 1.0);
        }
        token.iteration = swarm.iteration;
        // swarm-level "current": the best position held this iteration
        Score iter_best = swarm.particles.front().position_score;
        for (const auto& p : swarm.particles) iter_best = std::min(iter_best, p.position_score);
        token.current = swarm.global_best;
        token.current_score = iter_best;
        token.note_evaluation(swarm.global_best, swarm.global_best_score);
        token.push_trace(token.iteration, token.best_score);
        if (hooks.trace)
            hooks.trace->record(token.iteration, iter_best, swarm.global_best_score, 1.0);
        if (hooks.checkpoint && hooks.checkpoint_every &&
            token.iteration % hooks.checkpoint_every == 0)
            hooks.checkpoint(token, swarm_state(swarm));
    }

    token.current = swarm.global_best;
    token.current_score = swarm.global_best_score;
    stats.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
    return RunResult{std::move(token), stats};
}

}  // namespace wordopt
