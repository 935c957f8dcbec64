#include "wordopt/saw.hpp"

#include <sstream>
#include <unordered_set>

#include "wordopt/errors.hpp"
#include "wordopt/token.hpp"

namespace wordopt {

namespace {

constexpr std::array<std::array<int, 2>, 4> kUnits = {{
    {0, 1},   // N
    {1, 0},   // E
    {0, -1},  // S
    {-1, 0},  // W
}};

inline std::uint64_t pack(const std::array<int, 2>& v) {
    return (std::uint64_t(std::uint32_t(v[0])) << 32) | std::uint64_t(std::uint32_t(v[1]));
}

inline std::array<int, 2> rotate_about(const std::array<int, 2>& p, const std::array<int, 2>& c,
                                       Rotation angle) {
    const int dx = p[0] - c[0];
    const int dy = p[1] - c[1];
    if (angle == Rotation::ccw) return {c[0] - dy, c[1] + dx};  // +90
    return {c[0] + dy, c[1] - dx};                              // -90
}

}  // namespace

const Alphabet& saw_alphabet() {
    static const Alphabet a({"N", "E", "S", "W"});
    return a;
}

Walk decode(const Word& w) {
    check_word(w, saw_alphabet());
    Walk walk;
    walk.vertices.reserve(w.size() + 1);
    walk.vertices.push_back({0, 0});
    for (std::size_t i = 0; i < w.size(); ++i) {
        const auto& u = kUnits[w[i]];
        const auto& prev = walk.vertices.back();
        walk.vertices.push_back({prev[0] + u[0], prev[1] + u[1]});
    }
    return walk;
}

Word encode(const Walk& walk) {
    if (walk.vertices.empty()) throw ContractError("encode: walk has no vertices");
    Word w;
    w.sym.reserve(walk.steps());
    for (std::size_t i = 1; i < walk.vertices.size(); ++i) {
        const int dx = walk.vertices[i][0] - walk.vertices[i - 1][0];
        const int dy = walk.vertices[i][1] - walk.vertices[i - 1][1];
        std::uint8_t dir = 255;
        for (std::uint8_t d = 0; d < 4; ++d)
            if (kUnits[d][0] == dx && kUnits[d][1] == dy) dir = d;
        if (dir == 255) throw ContractError("encode: vertices are not unit steps apart");
        w.sym.push_back(dir);
    }
    return w;
}

bool is_self_avoiding(const Walk& walk) {
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(walk.vertices.size() * 2);
    for (const auto& v : walk.vertices)
        if (!seen.insert(pack(v)).second) return false;
    return true;
}

std::optional<Walk> apply_pivot(const Walk& walk, std::size_t center, Rotation angle) {
    const std::size_t n = walk.steps();
    if (center < 1 || center >= n)
        throw ContractError("apply_pivot: center must be an interior vertex (1..n-1)");
    Walk out = walk;
    const auto c = walk.vertices[center];
    for (std::size_t i = center + 1; i < out.vertices.size(); ++i)
        out.vertices[i] = rotate_about(out.vertices[i], c, angle);
    if (!is_self_avoiding(out)) return std::nullopt;
    return out;
}

int pivot_count(const Walk& walk) {
    if (!is_self_avoiding(walk)) throw ContractError("pivot_count: walk is not self-avoiding");
    const std::size_t n = walk.steps();
    if (n < 2) return 0;  // no interior centers
    int count = 0;
    for (std::size_t center = 1; center < n; ++center) {
        if (apply_pivot(walk, center, Rotation::ccw) || apply_pivot(walk, center, Rotation::cw))
            ++count;
    }
    return count;
}

Score pivot_count_score(const Word& w) {
    return static_cast<Score>(pivot_count(decode(w)));
}

HPSequence HPSequence::parse(std::string_view text) {
    HPSequence seq;
    seq.hydrophobic.reserve(text.size());
    for (char c : text) {
        if (c == 'H' || c == 'h')
            seq.hydrophobic.push_back(true);
        else if (c == 'P' || c == 'p')
            seq.hydrophobic.push_back(false);
        else
            throw ContractError(std::string("hp sequence: unexpected character '") + c + "'");
    }
    if (seq.hydrophobic.empty()) throw ContractError("hp sequence: empty");
    return seq;
}

std::string HPSequence::render() const {
    std::string s;
    for (bool h : hydrophobic) s += h ? 'H' : 'P';
    return s;
}

int hp_contacts(const Walk& walk, const HPSequence& seq) {
    if (seq.size() != walk.vertices.size())
        throw ContractError("hp_contacts: sequence length must equal vertex count");
    int contacts = 0;
    for (std::size_t i = 0; i + 2 < walk.vertices.size(); ++i) {
        if (!seq.hydrophobic[i]) continue;
        for (std::size_t j = i + 2; j < walk.vertices.size(); ++j) {
            if (!seq.hydrophobic[j]) continue;
            const int dist = std::abs(walk.vertices[i][0] - walk.vertices[j][0]) +
                             std::abs(walk.vertices[i][1] - walk.vertices[j][1]);
            contacts += dist == 1;
        }
    }
    return contacts;
}

Score hp_contact_score(const Word& w, const HPSequence& seq) {
    Walk walk = decode(w);
    if (!is_self_avoiding(walk))
        throw ContractError("hp_contact_score: word does not decode to a SAW");
    const int k = static_cast<int>(w.size()) + 1;
    return static_cast<Score>(k - hp_contacts(walk, seq));
}

Word saw_move(const StateToken& t, Rng& rng, int retries) {
    const std::size_t n = t.current.size();
    if (n < 2) return t.current;
    const Walk walk = decode(t.current);
    for (int attempt = 0; attempt < retries; ++attempt) {
        const std::size_t center = 1 + static_cast<std::size_t>(rng.below(n - 1));
        const Rotation angle = rng.below(2) == 0 ? Rotation::ccw : Rotation::cw;
        if (auto pivoted = apply_pivot(walk, center, angle)) return encode(*pivoted);
    }
    return t.current;  // self-loop
}

Word elongate(const HPSequence& seq, Rng& rng, int backtrack_limit) {
    if (seq.size() < 2) throw ContractError("elongate: sequence needs at least 2 labels");
    const std::size_t total = seq.size();  // vertices wanted

    std::vector<std::array<int, 2>> vertices{{0, 0}};
    std::unordered_set<std::uint64_t> occupied{pack({0, 0})};
    std::vector<std::array<bool, 4>> forbidden(total, {false, false, false, false});
    std::vector<std::uint8_t> chosen;  // direction taken at each depth
    int backtracks = 0;

    while (vertices.size() < total) {
        const std::size_t depth = chosen.size();
        const auto& tip = vertices.back();

        // candidate directions: free cells not yet forbidden at this depth
        std::array<std::uint8_t, 4> cand{};
        std::array<int, 4> gain{};
        int cand_count = 0;
        int best_gain = -1;
        for (std::uint8_t d = 0; d < 4; ++d) {
            if (forbidden[depth][d]) continue;
            const std::array<int, 2> next = {tip[0] + kUnits[d][0], tip[1] + kUnits[d][1]};
            if (occupied.contains(pack(next))) continue;
            int g = 0;
            if (seq.hydrophobic[vertices.size()]) {
                // new H vertex: count H neighbors among placed vertices,
                // excluding the chain predecessor
                for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
                    if (!seq.hydrophobic[i]) continue;
                    const int dist = std::abs(vertices[i][0] - next[0]) +
                                     std::abs(vertices[i][1] - next[1]);
                    g += dist == 1;
                }
            }
            cand[cand_count] = d;
            gain[cand_count] = g;
            ++cand_count;
            best_gain = std::max(best_gain, g);
        }

        if (cand_count == 0) {
            // dead end: back up one step and forbid the branch we took
            if (chosen.empty() || ++backtracks > backtrack_limit)
                throw EvalError("elongate: construction failed (backtrack limit exceeded)");
            occupied.erase(pack(vertices.back()));
            vertices.pop_back();
            forbidden[depth] = {false, false, false, false};
            forbidden[chosen.size() - 1][chosen.back()] = true;
            chosen.pop_back();
            continue;
        }

        // pick uniformly among the best-gain extensions
        int ties = 0;
        for (int i = 0; i < cand_count; ++i) ties += gain[i] == best_gain;
        std::uint8_t dir = 0;
        if (ties == 1) {
            for (int i = 0; i < cand_count; ++i)
                if (gain[i] == best_gain) dir = cand[i];
        } else {
            auto pick = rng.below(static_cast<std::uint64_t>(ties));
            for (int i = 0; i < cand_count; ++i) {
                if (gain[i] != best_gain) continue;
                if (pick == 0) {
                    dir = cand[i];
                    break;
                }
                --pick;
            }
        }
        const auto& tip2 = vertices.back();
        vertices.push_back({tip2[0] + kUnits[dir][0], tip2[1] + kUnits[dir][1]});
        occupied.insert(pack(vertices.back()));
        chosen.push_back(dir);
    }

    Walk walk;
    walk.vertices = std::move(vertices);
    return encode(walk);
}

Word straight_line_word(std::size_t n) {
    Word w;
    w.sym.assign(n, 1);  // E
    return w;
}

std::string walk_text(const Walk& walk, const HPSequence* seq) {
    if (seq && seq->size() != walk.vertices.size())
        throw ContractError("walk_text: sequence length must equal vertex count");
    std::ostringstream out;
    for (std::size_t i = 0; i < walk.vertices.size(); ++i) {
        out << walk.vertices[i][0] << ' ' << walk.vertices[i][1] << ' ';
        if (seq)
            out << (seq->hydrophobic[i] ? 'H' : 'P');
        else
            out << i;
        out << '\n';
    }
    return out.str();
}

}  // namespace wordopt
