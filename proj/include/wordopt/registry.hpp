#ifndef WORDOPT_REGISTRY_HPP
#define WORDOPT_REGISTRY_HPP

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "wordopt/config.hpp"
#include "wordopt/run.hpp"
#include "wordopt/sa.hpp"

namespace wordopt {

// Name -> factory resolution for the four field-function kinds. Everything a
// spec names resolves here before the first step; unknown names fail with the
// full listing so configs are discoverable.
class Registry {
  public:
    struct SpecContext {
        const ProblemSpec& spec;
        Alphabet alphabet;
    };

    using ScoreFactory =
        std::function<std::shared_ptr<ScoreFunction>(const ParamMap&, const SpecContext&)>;
    using MoveFactory =
        std::function<std::shared_ptr<MoveFunction>(const ParamMap&, const SpecContext&)>;
    using MetaheuristicRunner = std::function<RunResult(
        const Problem&, const ProblemSpec&, std::uint64_t seed, const RunHooks&)>;
    using MetaheuristicFactory = std::function<MetaheuristicRunner(const ParamMap&)>;

    void register_score(const std::string& name, ScoreFactory f);
    void register_move(const std::string& name, MoveFactory f);
    void register_metaheuristic(const std::string& name, MetaheuristicFactory f);

    std::shared_ptr<ScoreFunction> make_score(const std::string& name, const ParamMap& params,
                                              const SpecContext& ctx) const;
    std::shared_ptr<MoveFunction> make_move(const std::string& name, const ParamMap& params,
                                            const SpecContext& ctx) const;
    MetaheuristicRunner make_metaheuristic(const std::string& name, const ParamMap& params) const;
    std::shared_ptr<AcceptanceCriterion> make_acceptance(const std::string& name) const;

    std::vector<std::string> names(const std::string& kind) const;

    /// The registry with every built-in score, move, metaheuristic, and
    /// criterion registered.
    static const Registry& builtin();

  private:
    std::map<std::string, ScoreFactory> scores_;
    std::map<std::string, MoveFactory> moves_;
    std::map<std::string, MetaheuristicFactory> metaheuristics_;
};

/// Resolves a spec into a runnable problem: alphabet, score, move, and the
/// problem-appropriate initial-word constructor.
Problem build_problem(const ProblemSpec& spec, const Registry& registry = Registry::builtin());

}  // namespace wordopt

#endif
