#include "wordopt/subset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "wordopt/errors.hpp"
#include "wordopt/logging.hpp"
#include "wordopt/rng.hpp"
#include "wordopt/strings.hpp"
#include "wordopt/token.hpp"

namespace wordopt {

namespace {

std::size_t count_ones(const Word& w) {
    std::size_t ones = 0;
    for (auto b : w.sym) ones += b != 0;
    return ones;
}

std::string word_bits(const Word& w) {
    std::string s;
    s.reserve(w.size());
    for (auto b : w.sym) s += b ? '1' : '0';
    return s;
}

}  // namespace

Score subset_score(const Word& w, const SupportEvaluation& eval) {
    const std::size_t ones = count_ones(w);
    if (ones == 0) throw EvalError("subset_score: empty subset (all-zero word)");
    if (eval.lowest_support < 1 || eval.lowest_support > 100)
        throw ContractError("subset_score: support must be in [1,100]");
    const double pct = 100.0 * double(ones) / double(w.size());
    const double raw = (pct + double(eval.lowest_support)) / 2.0;
    return 100.0 - raw;
}

SupportEvaluation synthetic_evaluate(const Word& w, const SyntheticOracleSpec& spec) {
    if (spec.planted.empty()) throw ContractError("synthetic oracle: planted set is empty");
    const std::size_t n = w.size();
    std::size_t overlap = 0;
    for (std::size_t pos : spec.planted) {
        if (pos >= n) throw ContractError("synthetic oracle: planted position out of range");
        overlap += w[pos] != 0;
    }
    const std::size_t extra = count_ones(w) - overlap;
    double support = 100.0 * (double(overlap) / double(spec.planted.size())) *
                     (1.0 - spec.penalty * double(extra) / double(n));
    if (spec.noise_level > 0.0) {
        // per-word deterministic noise stream
        Rng noise(derive_seed(spec.seed, word_bits(w)));
        support += noise.uniform(-1.0, 1.0) * spec.noise_level * 10.0;
    }
    SupportEvaluation eval;
    eval.lowest_support = int(std::clamp(std::lround(support), 1l, 100l));
    return eval;
}

ExternalEvaluator::ExternalEvaluator(CommandTemplate tmpl, std::string cache_path)
    : tmpl_(std::move(tmpl)), cache_path_(std::move(cache_path)) {
    if (tmpl_.pattern.empty()) throw ConfigError("external evaluator: empty command template");
    if (!cache_path_.empty() && std::filesystem::exists(cache_path_)) {
        std::ifstream in(cache_path_);
        std::string word, topology;
        int support = 0;
        std::string line;
        while (std::getline(in, line)) {
            std::istringstream row(line);
            topology.clear();
            if (!(row >> word >> support)) continue;
            row >> topology;
            SupportEvaluation eval;
            eval.lowest_support = support;
            if (!topology.empty()) eval.topology_id = topology;
            cache_[word] = eval;
        }
    }
}

SupportEvaluation parse_support_output(const std::string& text) {
    SupportEvaluation eval;
    bool found = false;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto sv = trim(line);
        if (sv.rfind("support=", 0) == 0) {
            const auto value = parse_int(sv.substr(8));
            if (!value || *value < 1 || *value > 100)
                throw EvalError("external evaluator: bad support value in '" + line + "'");
            eval.lowest_support = int(*value);
            found = true;
        } else if (sv.rfind("topology=", 0) == 0) {
            eval.topology_id = std::string(trim(sv.substr(9)));
        }
    }
    if (!found)
        throw EvalError("external evaluator: no support=<1..100> line in output:\n" + text);
    return eval;
}

SupportEvaluation ExternalEvaluator::evaluate(const Word& w) {
    if (count_ones(w) == 0) throw EvalError("external evaluator: empty subset (all-zero word)");
    const std::string key = word_bits(w);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;

    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("wordopt-eval-" + std::to_string(getpid()));
    fs::create_directories(dir);
    const fs::path input = dir / (key.substr(0, std::min<std::size_t>(32, key.size())) + ".genes");
    const fs::path output = dir / (input.stem().string() + ".out");
    {
        std::ofstream in_file(input);
        for (std::size_t i = 0; i < w.size(); ++i)
            if (w[i] != 0) in_file << i << '\n';
    }

    std::string cmd = tmpl_.pattern;
    const bool uses_output_file = cmd.find("{output}") != std::string::npos;
    const auto substitute = [&cmd](const std::string& key_text, const std::string& value) {
        for (std::size_t at = cmd.find(key_text); at != std::string::npos;
             at = cmd.find(key_text, at + value.size())) {
            cmd.replace(at, key_text.size(), value);
        }
    };
    substitute("{input}", input.string());
    substitute("{output}", output.string());
    substitute("{word}", key);

    ExecSpec spec;
    spec.command = cmd;
    spec.timeout_s = tmpl_.timeout_s;
    spec.workdir = tmpl_.workdir;
    spec.log_tag = "subset-eval";
    ExecResult result;
    try {
        result = execute(spec);
    } catch (const ExecError& e) {
        throw EvalError(std::string("external evaluator: ") + e.what());
    }
    external_calls_ += 1;
    if (!result.exit_ok)
        throw EvalError("external evaluator: exit code " + std::to_string(result.exit_code) +
                        "\nstdout:\n" + result.out + "\nstderr:\n" + result.err);

    std::string text;
    if (uses_output_file) {
        std::ifstream out_file(output);
        if (!out_file)
            throw EvalError("external evaluator: declared output file missing: " + output.string());
        std::ostringstream buf;
        buf << out_file.rdbuf();
        text = buf.str();
    } else {
        text = result.out;
    }
    SupportEvaluation eval = parse_support_output(text);
    eval.evaluator_cost = result.seconds;

    cache_[key] = eval;
    if (!cache_path_.empty()) {
        std::ofstream log(cache_path_, std::ios::app);
        log << key << ' ' << eval.lowest_support;
        if (eval.topology_id) log << ' ' << *eval.topology_id;
        log << '\n';
    }
    return eval;
}

Score SyntheticSubsetScore::evaluate(const Word& w) {
    if (count_ones(w) == 0) return 100.0;  // worst possible, steers away
    return subset_score(w, synthetic_evaluate(w, spec_));
}

Score ExternalSubsetScore::evaluate(const Word& w) {
    if (count_ones(w) == 0) return 100.0;
    try {
        return subset_score(w, eval_.evaluate(w));
    } catch (const EvalError& e) {
        // failed candidate: skipped by giving it the worst score
        log_warn("subset", 0, std::string("evaluation failed, candidate skipped: ") + e.what());
        return 100.0;
    }
}

Word nonempty_subset_word(std::size_t n, Rng& rng) {
    const Alphabet bin = Alphabet::binary();
    for (;;) {
        Word w = random_word(bin, n, rng);
        if (count_ones(w) > 0) return w;
    }
}

SubsetMove::SubsetMove(Alphabet alphabet, std::size_t radius, double jump_prob,
                       std::size_t jump_radius)
    : inner_(std::move(alphabet), radius, jump_prob, jump_radius) {}

Word SubsetMove::propose(const StateToken& t, Rng& rng) {
    Word w = inner_.propose(t, rng);
    if (count_ones(w) == 0) return t.current;  // self-loop keeps the chain total
    return w;
}

}  // namespace wordopt
