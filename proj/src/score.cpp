#include "wordopt/score.hpp"

#include <numeric>
#include <vector>

#include "wordopt/token.hpp"

namespace wordopt {

SubstituteMove::SubstituteMove(Alphabet alphabet, std::size_t radius, double jump_prob,
                               std::size_t jump_radius)
    : alphabet_(std::move(alphabet)),
      radius_(radius),
      jump_prob_(jump_prob),
      jump_radius_(jump_radius) {
    if (radius_ < 1) throw ContractError("substitute move: radius must be >= 1");
    if (jump_radius_ < radius_) throw ContractError("substitute move: jump_radius < radius");
    if (!(jump_prob_ >= 0.0 && jump_prob_ < 1.0))
        throw ContractError("substitute move: jump_prob must be in [0,1)");
}

Word SubstituteMove::propose(const StateToken& t, Rng& rng) {
    Word w = t.current;
    const std::size_t n = w.size();
    const std::size_t m = alphabet_.size();
    std::size_t r = radius_;
    if (jump_prob_ > 0.0 && rng.uniform() < jump_prob_) r = jump_radius_;
    r = std::min(r, n);
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t step = 0; step < r; ++step) {
        // Partial Fisher-Yates: positions without replacement, one draw each.
        const std::size_t j = step + static_cast<std::size_t>(rng.below(n - step));
        std::swap(idx[step], idx[j]);
        const std::size_t pos = idx[step];
        // Uniform over the m-1 symbols different from the current one.
        const std::uint64_t off = rng.below(m - 1);
        w[pos] = static_cast<std::uint8_t>(off < w[pos] ? off : off + 1);
    }
    return w;
}

}  // namespace wordopt
