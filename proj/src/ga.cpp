#include "wordopt/ga.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "wordopt/errors.hpp"

namespace wordopt {

Score Population::best_score() const {
    return best().score;
}

const Population::Member& Population::best() const {
    if (members.empty()) throw ContractError("population is empty");
    const Member* out = &members.front();
    for (const auto& m : members)
        if (m.score < out->score) out = &m;
    return *out;
}

void GAParams::validate() const {
    if (pop_size < 1) throw ConfigError("ga: pop_size must be >= 1");
    if (max_iterations < 1) throw ConfigError("ga: max_iterations must be >= 1");
    if (n_crossovers < 1 || n_mutations < 1 || n_randoms < 1)
        throw ConfigError("ga: per-iteration counts must be >= 1");
    if (pop_size < n_crossovers + n_mutations + n_randoms)
        throw ConfigError("ga: pop_size must be >= n_crossovers + n_mutations + n_randoms");
    if (lasso_lambda < 0.0) throw ConfigError("ga: lasso_lambda must be >= 0");
    if (!(lasso_freeze_fraction > 0.0 && lasso_freeze_fraction <= 1.0))
        throw ConfigError("ga: lasso_freeze_fraction must be in (0,1]");
}

GAParams GAParams::from_params(const ParamMap& p) {
    GAParams out;
    out.pop_size = param_uint(p, "pop_size", out.pop_size);
    out.max_iterations = param_uint(p, "max_iterations", out.max_iterations);
    out.n_crossovers = param_uint(p, "n_crossovers", out.n_crossovers);
    out.n_mutations = param_uint(p, "n_mutations", out.n_mutations);
    out.n_randoms = param_uint(p, "n_randoms", out.n_randoms);
    out.k_subsets = param_uint(p, "k_subsets", out.k_subsets);
    out.k_mut = param_uint(p, "k_mut", out.k_mut);
    out.stop_threshold = param_opt_double(p, "target_score");
    if (auto alt = param_opt_double(p, "stop_threshold")) out.stop_threshold = alt;
    out.lasso_enabled = param_bool(p, "lasso_enabled", out.lasso_enabled);
    out.lasso_lambda = param_double(p, "lasso_lambda", out.lasso_lambda);
    out.lasso_freeze_fraction = param_double(p, "lasso_freeze_fraction", out.lasso_freeze_fraction);
    out.validate();
    return out;
}

std::vector<std::vector<std::size_t>> random_partition(std::size_t n, std::size_t k, Rng& rng) {
    if (n == 0) throw ContractError("random_partition: n must be positive");
    // k <= n/2 per the crossover rule; n = 1 degenerates to the single subset.
    const std::size_t bound = std::max<std::size_t>(1, n / 2);
    if (k < 1 || k > bound) throw ContractError("random_partition: k out of range [1, n/2]");

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    // One anchor per subset keeps every subset nonempty (k draws), then the
    // remaining indices are assigned uniformly (n-k draws).
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(idx[i], idx[j]);
    }
    std::vector<std::vector<std::size_t>> subsets(k);
    for (std::size_t i = 0; i < k; ++i) subsets[i].push_back(idx[i]);
    for (std::size_t i = k; i < n; ++i)
        subsets[static_cast<std::size_t>(rng.below(k))].push_back(idx[i]);
    for (auto& s : subsets) std::sort(s.begin(), s.end());
    return subsets;
}

Word crossover(const Word& w1, const Word& w2,
               const std::vector<std::vector<std::size_t>>& partition) {
    if (w1.size() != w2.size()) throw ContractError("crossover: parents differ in length");
    const std::size_t n = w1.size();
    if (partition.empty() || partition.size() > std::max<std::size_t>(1, n / 2))
        throw ContractError("crossover: partition count k out of range [1, n/2]");

    std::vector<char> seen(n, 0);
    Word child = w2;
    for (std::size_t j = 0; j < partition.size(); ++j) {
        if (partition[j].empty()) throw ContractError("crossover: empty subset in partition");
        for (std::size_t pos : partition[j]) {
            if (pos >= n) throw ContractError("crossover: partition index out of range");
            if (seen[pos]) throw ContractError("crossover: partition subsets overlap");
            seen[pos] = 1;
            if ((j + 1) % 2 == 1) child[pos] = w1[pos];  // odd 1-based subsets take parent 1
        }
    }
    for (char c : seen)
        if (!c) throw ContractError("crossover: partition does not cover every position");
    return child;
}

Word mutate(const Word& w, std::size_t k_mut, const Alphabet& alphabet, Rng& rng) {
    const std::size_t n = w.size();
    if (k_mut < 1 || k_mut > n) throw ContractError("mutate: k_mut out of range [1, n]");
    Word out = w;
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < k_mut; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(idx[i], idx[j]);
        // Full-alphabet resample: a no-op replacement is allowed.
        out[idx[i]] = static_cast<std::uint8_t>(rng.below(alphabet.size()));
    }
    return out;
}

void ga_iteration(Population& p, const GAParams& params, const Problem& problem, Rng& rng,
                  RunStats& stats) {
    if (p.members.empty()) throw ContractError("ga_iteration: population is empty");
    const std::size_t n = problem.n;
    auto add = [&](Word w) {
        const Score s = problem.evaluate(w);
        stats.evaluations += 1;
        p.archive.emplace_back(w, s);
        p.members.push_back({std::move(w), s});
    };

    // P -> P_c: crossover children; parents drawn with replacement from the
    // growing population.
    const std::size_t k_bound =
        std::max<std::size_t>(1, std::min<std::size_t>(params.k_subsets ? params.k_subsets : n / 2,
                                                       std::max<std::size_t>(1, n / 2)));
    for (std::uint64_t c = 0; c < params.n_crossovers; ++c) {
        const Word w1 = p.members[rng.below(p.members.size())].word;
        const Word w2 = p.members[rng.below(p.members.size())].word;
        const std::size_t k = 1 + static_cast<std::size_t>(rng.below(k_bound));
        add(crossover(w1, w2, random_partition(n, k, rng)));
    }

    // P_c -> P_m: mutants of randomly chosen members.
    const std::size_t k_mut = params.k_mut ? params.k_mut : std::max<std::size_t>(1, n / 20);
    for (std::uint64_t m = 0; m < params.n_mutations; ++m) {
        const Word base = p.members[rng.below(p.members.size())].word;
        add(mutate(base, std::min(k_mut, n), problem.alphabet, rng));
    }

    // P_m -> P_r: fresh random words.
    for (std::uint64_t r = 0; r < params.n_randoms; ++r)
        add(random_word(problem.alphabet, n, rng));

    // Select the pop_size best; stable sort keeps older members first on ties.
    std::stable_sort(p.members.begin(), p.members.end(),
                     [](const Population::Member& a, const Population::Member& b) {
                         return a.score < b.score;
                     });
    if (p.members.size() > params.pop_size) p.members.resize(params.pop_size);
}

Population default_lasso_bridge(const Population& pop, const std::vector<PositionImpact>& ranks,
                                const GAParams& params, const Problem& problem, Rng& rng,
                                RunStats& stats) {
    const std::size_t n = problem.n;
    Population out;
    out.archive = pop.archive;

    std::vector<Population::Member> elites = pop.members;
    std::stable_sort(elites.begin(), elites.end(),
                     [](const Population::Member& a, const Population::Member& b) {
                         return a.score < b.score;
                     });
    const std::size_t elite_count = std::max<std::size_t>(1, params.pop_size / 10);
    if (elites.size() > elite_count) elites.resize(elite_count);

    const std::size_t frozen_count = std::min<std::size_t>(
        n, std::max<std::size_t>(1, static_cast<std::size_t>(
                                        std::lround(params.lasso_freeze_fraction * double(n)))));
    std::vector<char> frozen(n, 0);
    for (std::size_t i = 0; i < frozen_count && i < ranks.size(); ++i)
        frozen[ranks[i].position] = 1;

    for (std::uint64_t i = 0; i < params.pop_size; ++i) {
        Word w = elites[i % elites.size()].word;
        for (std::size_t pos = 0; pos < n; ++pos)
            if (!frozen[pos]) w[pos] = static_cast<std::uint8_t>(rng.below(problem.alphabet.size()));
        const Score s = problem.evaluate(w);
        stats.evaluations += 1;
        out.archive.emplace_back(w, s);
        out.members.push_back({std::move(w), s});
    }
    return out;
}

namespace {

nlohmann::json population_state(const Population& pop, std::uint64_t phase,
                                std::uint64_t phase_iter) {
    nlohmann::json j;
    j["phase"] = phase;
    j["phase_iter"] = phase_iter;
    auto& members = j["members"] = nlohmann::json::array();
    for (const auto& m : pop.members) members.push_back({m.word.sym, m.score});
    auto& archive = j["archive"] = nlohmann::json::array();
    for (const auto& [w, s] : pop.archive) archive.push_back({w.sym, s});
    return j;
}

Word word_from_state(const nlohmann::json& j) {
    Word w;
    for (const auto& v : j) w.sym.push_back(v.get<std::uint8_t>());
    return w;
}

void restore_population(const nlohmann::json& state, Population& pop, std::uint64_t& phase,
                        std::uint64_t& phase_iter) {
    try {
        phase = state.at("phase").get<std::uint64_t>();
        phase_iter = state.at("phase_iter").get<std::uint64_t>();
        for (const auto& m : state.at("members"))
            pop.members.push_back({word_from_state(m.at(0)), m.at(1).get<double>()});
        for (const auto& m : state.at("archive"))
            pop.archive.emplace_back(word_from_state(m.at(0)), m.at(1).get<double>());
    } catch (const nlohmann::json::exception& e) {
        throw DecodeError(std::string("ga: bad resume state: ") + e.what());
    }
}

}  // namespace

RunResult run_ga(const Problem& problem, const GAParams& params, std::uint64_t seed,
                 const RunHooks& hooks, const LassoBridge& bridge) {
    params.validate();
    if (!problem.score) throw ConfigError("ga: problem is missing a score function");
    const auto start_time = std::chrono::steady_clock::now();

    RunStats stats;
    Population pop;
    StateToken token;
    std::uint64_t phase = 1;
    std::uint64_t phase_iter = 0;

    if (hooks.resume_token && hooks.resume_state) {
        token = *hooks.resume_token;
        restore_population(*hooks.resume_state, pop, phase, phase_iter);
    } else {
        token.rng = Rng(derive_seed(seed, "ga"));
        token.mh_params["seed"] = std::to_string(seed);
        for (std::uint64_t i = 0; i < params.pop_size; ++i) {
            Word w = problem.initial_word(token.rng);
            const Score s = problem.evaluate(w);
            stats.evaluations += 1;
            pop.archive.emplace_back(w, s);
            pop.members.push_back({std::move(w), s});
        }
        const auto& b = pop.best();
        token.current = b.word;
        token.current_score = b.score;
        token.best = b.word;
        token.best_score = b.score;
    }

    const auto attained = [&] {
        return params.stop_threshold && token.best_score <= *params.stop_threshold;
    };

    const auto run_phase = [&](std::uint64_t iters) {
        while (phase_iter < iters && !attained()) {
            ga_iteration(pop, params, problem, token.rng, stats);
            phase_iter += 1;
            token.iteration += 1;
            const auto& b = pop.best();
            token.current = b.word;
            token.current_score = b.score;
            token.note_evaluation(b.word, b.score);
            token.push_trace(token.iteration, token.best_score);
            if (hooks.trace)
                hooks.trace->record(token.iteration, token.current_score, token.best_score,
                                    double(phase));
            if (hooks.checkpoint && hooks.checkpoint_every &&
                token.iteration % hooks.checkpoint_every == 0)
                hooks.checkpoint(token, population_state(pop, phase, phase_iter));
        }
    };

    if (phase == 1) {
        run_phase(params.max_iterations);
        if (params.lasso_enabled && !attained()) {
            double lambda = params.lasso_lambda;
            if (lambda == 0.0) {
                Eigen::MatrixXd X = one_hot_design(pop.archive, problem.alphabet, problem.n);
                Eigen::VectorXd y(static_cast<Eigen::Index>(pop.archive.size()));
                for (std::size_t i = 0; i < pop.archive.size(); ++i)
                    y[static_cast<Eigen::Index>(i)] = pop.archive[i].second;
                lambda = 0.01 * lasso_lambda_max(X, y);
            }
            const auto ranks = lasso_rank(pop.archive, problem.alphabet, problem.n, lambda);
            const LassoBridge& b = bridge ? bridge : LassoBridge(default_lasso_bridge);
            pop = b(pop, ranks, params, problem, token.rng, stats);
            const auto& best = pop.best();
            token.current = best.word;
            token.current_score = best.score;
            token.note_evaluation(best.word, best.score);
            phase = 2;
            phase_iter = 0;
            stats.phases = 2;
        } else {
            phase = 0;  // done marker; no second phase
        }
    }
    if (phase == 2) {
        stats.phases = 2;
        run_phase(std::max<std::uint64_t>(1, params.max_iterations / 2));
    }

    token.mh_params["phases"] = std::to_string(stats.phases);
    stats.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
    return RunResult{std::move(token), stats};
}

}  // namespace wordopt
