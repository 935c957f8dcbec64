#ifndef WORDOPT_RNG_HPP
#define WORDOPT_RNG_HPP

#include <array>
#include <cstdint>
#include <string_view>

namespace wordopt {

/// One splitmix64 step; also the seed expander for Rng.
std::uint64_t splitmix64_next(std::uint64_t& state);

/// Derives an independent stream seed from a base seed and a component label
/// (run seed -> component label -> stream). Pure function of its arguments,
/// so the same (seed, label) pair names the same stream on every platform.
std::uint64_t derive_seed(std::uint64_t base, std::string_view label);

// xoshiro256** generator. Chosen over std::mt19937 because its state is four
// words, checkpointable bit-exactly, and every trajectory-defining draw here
// is a pure integer computation.
class Rng {
  public:
    using State = std::array<std::uint64_t, 4>;

    Rng() : Rng(0) {}
    explicit Rng(std::uint64_t seed);

    static Rng from_state(const State& s) {
        Rng r;
        r.state_ = s;
        return r;
    }
    const State& state() const { return state_; }

    /// Next raw 64-bit draw.
    std::uint64_t next();

    /// Uniform in [0,1) with 53 random bits. Consumes one draw.
    double uniform();

    /// Uniform in [lo,hi). Consumes one draw.
    double uniform(double lo, double hi);

    /// Uniform integer in [0,bound); bound must be positive. Consumes exactly
    /// one draw (multiply-high mapping; residual bias is bound/2^64, far below
    /// anything observable, and the fixed draw count keeps trajectories
    /// checkpoint-exact).
    std::uint64_t below(std::uint64_t bound);

    bool operator==(const Rng&) const = default;

  private:
    State state_{};
};

}  // namespace wordopt

#endif
