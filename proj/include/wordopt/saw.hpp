#ifndef WORDOPT_SAW_HPP
#define WORDOPT_SAW_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wordopt/score.hpp"
#include "wordopt/word.hpp"

namespace wordopt {

// 2D square-lattice self-avoiding walks encoded as absolute direction words
// over {N,E,S,W}. A word of n steps decodes to n+1 vertices from (0,0).

/// The fixed direction alphabet: N=0, E=1, S=2, W=3.
const Alphabet& saw_alphabet();

struct Walk {
    std::vector<std::array<int, 2>> vertices;  // v0 = (0,0)

    std::size_t steps() const { return vertices.empty() ? 0 : vertices.size() - 1; }
    bool operator==(const Walk&) const = default;
};

enum class Rotation : std::int8_t { ccw = 1, cw = -1 };  // +90 / -90 degrees

/// Direction word -> vertex path. unit(N)=(0,1), E=(1,0), S=(0,-1), W=(-1,0).
Walk decode(const Word& w);

/// Inverse of decode; throws ContractError when successive vertices are not
/// unit steps apart.
Word encode(const Walk& walk);

/// True iff all vertices are pairwise distinct.
bool is_self_avoiding(const Walk& walk);

/// Rotates the vertices strictly after `center` by +-90 degrees about the
/// center vertex. Returns the new walk when self-avoiding, nullopt otherwise.
/// Valid centers are the interior vertices 1..n-1.
std::optional<Walk> apply_pivot(const Walk& walk, std::size_t center, Rotation angle);

/// Number of interior centers where at least one of the two pivots yields a
/// self-avoiding walk; zero means the walk is unfoldable. Input must decode
/// to a SAW.
int pivot_count(const Walk& walk);
Score pivot_count_score(const Word& w);

// Hydrophobic / polar labels for the n+1 vertices of an n-step walk.
struct HPSequence {
    std::vector<bool> hydrophobic;

    static HPSequence parse(std::string_view text);  // 'H' / 'P' characters
    std::string render() const;
    std::size_t size() const { return hydrophobic.size(); }
};

/// Count of vertex pairs (i, j), j > i+1, lattice-adjacent and both H.
int hp_contacts(const Walk& walk, const HPSequence& seq);

/// Maximization wrapped for the minimizing framework: K - contacts with
/// K = n+1 (contacts can never reach K, so the score stays positive).
Score hp_contact_score(const Word& w, const HPSequence& seq);

/// Pivot-move neighborhood: picks a uniform (center, angle) up to `retries`
/// times and returns the first self-avoiding pivot, else the current word
/// unchanged (the self-loop keeps the chain total on unfoldable walks).
/// Consumes exactly 2 draws per attempt.
Word saw_move(const StateToken& t, Rng& rng, int retries = 50);

class SawPivotMove final : public MoveFunction {
  public:
    explicit SawPivotMove(int retries = 50) : retries_(retries) {}
    Word propose(const StateToken& t, Rng& rng) override { return saw_move(t, rng, retries_); }

  private:
    int retries_;
};

/// Greedy stretch construction: grows from one step, always extending with a
/// direction that maximizes the incremental H-contact gain (ties broken
/// uniformly); dead ends backtrack one step and forbid the failed branch.
/// Throws EvalError("construction failed") past `backtrack_limit`.
Word elongate(const HPSequence& seq, Rng& rng, int backtrack_limit = 10000);

/// All-East word: the straight-line start used by pivot searches.
Word straight_line_word(std::size_t n);

/// One "x y label" row per vertex; labels are H/P when a sequence is given,
/// vertex indices otherwise.
std::string walk_text(const Walk& walk, const HPSequence* seq = nullptr);

class PivotCountScore final : public ScoreFunction {
  public:
    Score evaluate(const Word& w) override { return pivot_count_score(w); }
};

class HPContactScore final : public ScoreFunction {
  public:
    explicit HPContactScore(HPSequence seq) : seq_(std::move(seq)) {}
    Score evaluate(const Word& w) override { return hp_contact_score(w, seq_); }

  private:
    HPSequence seq_;
};

}  // namespace wordopt

#endif
