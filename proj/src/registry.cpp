#include "wordopt/registry.hpp"

#include <cmath>
#include <fstream>

#include "wordopt/errors.hpp"
#include "wordopt/ga.hpp"
#include "wordopt/pso.hpp"
#include "wordopt/runner.hpp"
#include "wordopt/saw.hpp"
#include "wordopt/subset.hpp"

namespace wordopt {

namespace {

std::string listing(const std::vector<std::string>& names) {
    std::string out;
    for (const auto& n : names) {
        if (!out.empty()) out += ", ";
        out += n;
    }
    return out;
}

// onemax: count of positions holding a non-reference symbol; the classic
// all-zeros optimum under minimization.
class OneMaxScore final : public ScoreFunction {
  public:
    Score evaluate(const Word& w) override {
        Score s = 0;
        for (auto b : w.sym) s += b != 0;
        return s;
    }
};

// table: explicit score per word, indexed by the word read as a base-m
// number (most significant position first).
class TableScore final : public ScoreFunction {
  public:
    TableScore(std::vector<double> values, std::size_t alphabet_size)
        : values_(std::move(values)), m_(alphabet_size) {}

    Score evaluate(const Word& w) override {
        std::uint64_t index = 0;
        for (auto b : w.sym) index = index * m_ + b;
        return values_.at(index);
    }

  private:
    std::vector<double> values_;
    std::size_t m_;
};

// linear: offset + sum coeff[i] * index(i); handy for ranking experiments.
class LinearScore final : public ScoreFunction {
  public:
    LinearScore(std::vector<double> coeffs, double offset)
        : coeffs_(std::move(coeffs)), offset_(offset) {}

    Score evaluate(const Word& w) override {
        double s = offset_;
        for (std::size_t i = 0; i < w.size(); ++i) s += coeffs_[i] * double(w[i]);
        return s;
    }

  private:
    std::vector<double> coeffs_;
    double offset_;
};

void require_saw_alphabet(const Registry::SpecContext& ctx) {
    if (!(ctx.alphabet == saw_alphabet()))
        throw ConfigError("problem.alphabet: this score needs symbols N,E,S,W");
}

void require_binary_alphabet(const Registry::SpecContext& ctx) {
    if (ctx.alphabet.size() != 2)
        throw ConfigError("problem.alphabet: this score needs a binary alphabet");
}

Registry make_builtin() {
    Registry r;

    r.register_score("onemax", [](const ParamMap&, const Registry::SpecContext&) {
        return std::make_shared<OneMaxScore>();
    });

    r.register_score("table", [](const ParamMap& p, const Registry::SpecContext& ctx) {
        const std::string file = param_str(p, "file", "");
        if (file.empty()) throw ConfigError("score 'table': parameter 'file' is required");
        const double bits = double(ctx.spec.n) * std::log2(double(ctx.alphabet.size()));
        if (bits > 26) throw ConfigError("score 'table': word space too large for a table");
        std::ifstream in(file);
        if (!in) throw ConfigError("score 'table': cannot open file " + file);
        std::vector<double> values;
        double v;
        while (in >> v) values.push_back(v);
        std::size_t expected = 1;
        for (std::size_t i = 0; i < ctx.spec.n; ++i) expected *= ctx.alphabet.size();
        if (values.size() != expected)
            throw ConfigError("score 'table': file holds " + std::to_string(values.size()) +
                              " values, expected " + std::to_string(expected));
        return std::make_shared<TableScore>(std::move(values), ctx.alphabet.size());
    });

    r.register_score("linear", [](const ParamMap& p, const Registry::SpecContext& ctx) {
        const auto coeff_text = param_str(p, "coeffs", "");
        if (coeff_text.empty()) throw ConfigError("score 'linear': parameter 'coeffs' is required");
        std::vector<double> coeffs;
        for (const auto& piece : split_list(coeff_text, ',')) {
            const auto c = parse_double(piece);
            if (!c) throw ConfigError("score 'linear': bad coefficient '" + piece + "'");
            coeffs.push_back(*c);
        }
        if (coeffs.size() != ctx.spec.n)
            throw ConfigError("score 'linear': coefficient count must equal the word length");
        const double offset = param_double(p, "offset", 0.0);
        // reject configurations whose minimum would go negative
        double lowest = offset;
        for (double c : coeffs) lowest += std::min(0.0, c * double(ctx.alphabet.size() - 1));
        if (lowest < 0.0)
            throw ConfigError("score 'linear': offset too small, scores could go negative");
        return std::make_shared<LinearScore>(std::move(coeffs), offset);
    });

    r.register_score("saw_pivot_count", [](const ParamMap&, const Registry::SpecContext& ctx) {
        require_saw_alphabet(ctx);
        return std::make_shared<PivotCountScore>();
    });

    r.register_score("saw_hp_contact", [](const ParamMap& p, const Registry::SpecContext& ctx) {
        require_saw_alphabet(ctx);
        const std::string hp = param_str(p, "hp", "");
        if (hp.empty()) throw ConfigError("score 'saw_hp_contact': parameter 'hp' is required");
        HPSequence seq = HPSequence::parse(hp);
        if (seq.size() != ctx.spec.n + 1)
            throw ConfigError("score 'saw_hp_contact': hp length must be word length + 1");
        return std::make_shared<HPContactScore>(std::move(seq));
    });

    r.register_score("subset_synthetic", [](const ParamMap& p, const Registry::SpecContext& ctx) {
        require_binary_alphabet(ctx);
        SyntheticOracleSpec spec;
        const auto planted_text = param_str(p, "planted", "");
        if (planted_text.empty())
            throw ConfigError("score 'subset_synthetic': parameter 'planted' is required");
        for (const auto& piece : split_list(planted_text, ',')) {
            const auto pos = parse_uint(piece);
            if (!pos || *pos >= ctx.spec.n)
                throw ConfigError("score 'subset_synthetic': bad planted position '" + piece + "'");
            spec.planted.push_back(std::size_t(*pos));
        }
        spec.noise_level = param_double(p, "noise_level", 0.0);
        spec.penalty = param_double(p, "penalty", 0.5);
        spec.seed = param_uint(p, "seed", 0);
        if (spec.noise_level < 0.0 || spec.noise_level >= 1.0)
            throw ConfigError("score 'subset_synthetic': noise_level must be in [0,1)");
        return std::make_shared<SyntheticSubsetScore>(std::move(spec));
    });

    r.register_score("subset_external", [](const ParamMap& p, const Registry::SpecContext& ctx) {
        require_binary_alphabet(ctx);
        CommandTemplate tmpl;
        tmpl.pattern = param_str(p, "cmd", "");
        if (tmpl.pattern.empty())
            throw ConfigError("score 'subset_external': parameter 'cmd' is required");
        tmpl.timeout_s = param_double(p, "timeout_s", 60.0);
        tmpl.workdir = param_str(p, "workdir", "");
        return std::make_shared<ExternalSubsetScore>(std::move(tmpl), param_str(p, "cache", ""));
    });

    r.register_move("substitute", [](const ParamMap& p, const Registry::SpecContext& ctx) {
        return std::make_shared<SubstituteMove>(
            ctx.alphabet, std::size_t(param_uint(p, "radius", 1)),
            param_double(p, "jump_prob", 0.2), std::size_t(param_uint(p, "jump_radius", 4)));
    });

    r.register_move("saw_pivot", [](const ParamMap& p, const Registry::SpecContext& ctx) {
        require_saw_alphabet(ctx);
        return std::make_shared<SawPivotMove>(int(param_uint(p, "retries", 50)));
    });

    r.register_move("subset_flip", [](const ParamMap& p, const Registry::SpecContext& ctx) {
        require_binary_alphabet(ctx);
        return std::make_shared<SubsetMove>(
            ctx.alphabet, std::size_t(param_uint(p, "radius", 1)),
            param_double(p, "jump_prob", 0.2), std::size_t(param_uint(p, "jump_radius", 4)));
    });

    const auto simple_mh = [](auto runner) {
        return [runner](const ParamMap& params) -> Registry::MetaheuristicRunner {
            return [runner, params](const Problem& problem, const ProblemSpec&, std::uint64_t seed,
                                    const RunHooks& hooks) {
                return runner(problem, params, seed, hooks);
            };
        };
    };

    r.register_metaheuristic(
        "sa", simple_mh([](const Problem& problem, const ParamMap& params, std::uint64_t seed,
                           const RunHooks& hooks) {
            return run_sa(problem, SAParams::from_params(params), seed, hooks);
        }));

    r.register_metaheuristic(
        "descent", simple_mh([](const Problem& problem, const ParamMap& params, std::uint64_t seed,
                                const RunHooks& hooks) {
            return run_descent(problem, DescentParams::from_params(params), seed, hooks);
        }));

    r.register_metaheuristic(
        "ga", simple_mh([](const Problem& problem, const ParamMap& params, std::uint64_t seed,
                           const RunHooks& hooks) {
            return run_ga(problem, GAParams::from_params(params), seed, hooks);
        }));

    r.register_metaheuristic(
        "pso", simple_mh([](const Problem& problem, const ParamMap& params, std::uint64_t seed,
                            const RunHooks& hooks) {
            return run_pso(problem, PSOParams::from_params(params), seed, hooks);
        }));

    r.register_metaheuristic("basin_hopping", [](const ParamMap& params) {
        return [params](const Problem& problem, const ProblemSpec& spec, std::uint64_t seed,
                        const RunHooks& hooks) {
            return run_basin_hopping(problem, spec, BasinHoppingParams::from_params(params), seed,
                                     hooks);
        };
    });

    return r;
}

}  // namespace

void Registry::register_score(const std::string& name, ScoreFactory f) {
    scores_[name] = std::move(f);
}
void Registry::register_move(const std::string& name, MoveFactory f) {
    moves_[name] = std::move(f);
}
void Registry::register_metaheuristic(const std::string& name, MetaheuristicFactory f) {
    metaheuristics_[name] = std::move(f);
}

std::shared_ptr<ScoreFunction> Registry::make_score(const std::string& name, const ParamMap& params,
                                                    const SpecContext& ctx) const {
    const auto it = scores_.find(name);
    if (it == scores_.end())
        throw ConfigError("unknown score function '" + name + "' (available: " +
                          listing(names("score")) + ")");
    return it->second(params, ctx);
}

std::shared_ptr<MoveFunction> Registry::make_move(const std::string& name, const ParamMap& params,
                                                  const SpecContext& ctx) const {
    const auto it = moves_.find(name);
    if (it == moves_.end())
        throw ConfigError("unknown move function '" + name + "' (available: " +
                          listing(names("move")) + ")");
    return it->second(params, ctx);
}

Registry::MetaheuristicRunner Registry::make_metaheuristic(const std::string& name,
                                                           const ParamMap& params) const {
    const auto it = metaheuristics_.find(name);
    if (it == metaheuristics_.end())
        throw ConfigError("unknown metaheuristic '" + name + "' (available: " +
                          listing(names("metaheuristic")) + ")");
    return it->second(params);
}

std::shared_ptr<AcceptanceCriterion> Registry::make_acceptance(const std::string& name) const {
    // delegated: the criterion family lives with the SA engine
    return make_criterion(name);
}

std::vector<std::string> Registry::names(const std::string& kind) const {
    std::vector<std::string> out;
    if (kind == "score")
        for (const auto& [k, v] : scores_) out.push_back(k);
    else if (kind == "move")
        for (const auto& [k, v] : moves_) out.push_back(k);
    else if (kind == "metaheuristic")
        for (const auto& [k, v] : metaheuristics_) out.push_back(k);
    else if (kind == "criterion")
        out = {"great_deluge", "metropolis", "threshold"};
    else
        throw ContractError("unknown registry kind '" + kind + "'");
    return out;
}

const Registry& Registry::builtin() {
    static const Registry registry = make_builtin();
    return registry;
}

Problem build_problem(const ProblemSpec& spec, const Registry& registry) {
    Problem problem;
    problem.name = spec.name;
    problem.alphabet = Alphabet(spec.alphabet_symbols);
    problem.n = spec.n;

    const Registry::SpecContext ctx{spec, problem.alphabet};
    problem.score = registry.make_score(spec.score_name, spec.score_params, ctx);
    problem.move = registry.make_move(spec.move_name, spec.move_params, ctx);

    const bool is_saw = spec.score_name.rfind("saw_", 0) == 0;
    const bool is_subset = spec.score_name.rfind("subset_", 0) == 0;
    const std::size_t n = spec.n;
    if (spec.initial == "default") {
        if (is_saw) {
            problem.initial = [n](Rng&) { return straight_line_word(n); };
        } else if (is_subset) {
            problem.initial = [n](Rng& rng) { return nonempty_subset_word(n, rng); };
        }
        // otherwise: uniform random (Problem's default)
    } else if (spec.initial == "straight_line") {
        if (!is_saw)
            throw ConfigError("problem.word: initial 'straight_line' needs a saw_* score");
        problem.initial = [n](Rng&) { return straight_line_word(n); };
    } else if (spec.initial == "random") {
        // uniform random even for constrained problems; validated at run start
    } else {
        const Word fixed = problem.alphabet.parse(spec.initial);
        if (fixed.size() != n)
            throw ConfigError("problem.word: explicit initial word has the wrong length");
        problem.initial = [fixed](Rng&) { return fixed; };
    }

    if (is_saw) {
        // constrained space: the start must satisfy it, surfaced before a run
        const auto inner = problem.initial;
        problem.initial = [inner, n](Rng& rng) {
            Word w = inner ? inner(rng) : random_word(saw_alphabet(), n, rng);
            if (!is_self_avoiding(decode(w)))
                throw ConfigError("initial word does not decode to a self-avoiding walk");
            return w;
        };
    }
    return problem;
}

}  // namespace wordopt
