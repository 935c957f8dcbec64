#ifndef WORDOPT_PSO_HPP
#define WORDOPT_PSO_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "wordopt/run.hpp"
#include "wordopt/strings.hpp"

namespace wordopt {

struct PSOParams {
    std::uint64_t swarm_size = 30;
    double inertia = 0.72;
    double phi1 = 1.49;
    double phi2 = 1.49;
    double v_max = 4.0;
    std::uint64_t max_iterations = 500;
    std::optional<double> stop_threshold;
    // Per-component uniform factors on the attraction terms. On by default:
    // without them the fully informed swarm fixates far too early on
    // unstructured landscapes (see also collapse_rescue). Turn off for the
    // literal deterministic update rule.
    bool stochastic = true;
    // Collapse rescue in the outer loop: once every particle sits exactly on
    // the global best with its personal best equal to it, the update rule can
    // never move the swarm again (attraction is zero and inertia preserves
    // velocity signs). At that point velocities are redrawn uniform in [-1,1];
    // positions and bests are kept and the per-step rule is untouched.
    bool collapse_rescue = true;

    void validate() const;
    static PSOParams from_params(const ParamMap& p);
};

struct Particle {
    Word position;
    Score position_score = 0.0;
    std::vector<double> velocity;
    Word best;
    Score best_score = 0.0;
};

struct Swarm {
    std::vector<Particle> particles;
    Word global_best;
    Score global_best_score = 0.0;
    std::uint64_t iteration = 0;
};

/// True when every particle's position and personal best coincide with the
/// global best: a permanent fixed point of the deterministic update.
bool swarm_collapsed(const Swarm& s);

/// Componentwise V(t+1) = w V + phi1 (Pbest - X) + phi2 (Gbest - X), on
/// alphabet-index values, clamped to [-v_max, v_max]. In stochastic mode each
/// attraction term is scaled by its own uniform draw (2n draws), otherwise no
/// draws are consumed.
std::vector<double> velocity_update(const Particle& p, const Word& global_best,
                                    const PSOParams& params, Rng& rng);

/// Logistic squashing, clamped to the open interval so saturation never
/// rounds to exactly 0 or 1.
inline double sigmoid(double v) {
    const double s = 1.0 / (1.0 + std::exp(-v));
    if (s >= 1.0) return std::nextafter(1.0, 0.0);
    if (s <= 0.0) return std::numeric_limits<double>::min();
    return s;
}

/// Index of the alphabet anchor a_j = j/(m-1) nearest to sigmoid(v); exact
/// ties resolve to the lower index.
std::size_t discretize(double velocity, const Alphabet& alphabet);

/// One synchronous-iteration sweep in particle order: velocity update,
/// discretized reposition, re-score, personal/global best bookkeeping.
void pso_step(Swarm& s, const Problem& problem, const PSOParams& params, Rng& rng,
              RunStats& stats);

RunResult run_pso(const Problem& problem, const PSOParams& params, std::uint64_t seed,
                  const RunHooks& hooks = {});

}  // namespace wordopt

#endif
