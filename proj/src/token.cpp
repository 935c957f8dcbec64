#include "wordopt/token.hpp"

#include <json.hpp>

#include "wordopt/errors.hpp"

namespace wordopt {

namespace {

constexpr const char* kFormat = "wordopt.token";
constexpr int kVersion = 1;

nlohmann::json word_to_json(const Word& w) {
    return nlohmann::json(w.sym);
}

Word word_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw DecodeError("token: word field is not an array");
    Word w;
    w.sym.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number_unsigned() || v.get<std::uint64_t>() > 255)
            throw DecodeError("token: word index out of range");
        w.sym.push_back(v.get<std::uint8_t>());
    }
    return w;
}

}  // namespace

StateToken make_token(Word start, Score start_score, Rng rng) {
    StateToken t;
    t.current = start;
    t.current_score = start_score;
    t.best = std::move(start);
    t.best_score = start_score;
    t.rng = rng;
    return t;
}

std::vector<std::uint8_t> token_checkpoint(const StateToken& t) {
    nlohmann::json j;
    j["format"] = kFormat;
    j["version"] = kVersion;
    j["current"] = word_to_json(t.current);
    j["current_score"] = t.current_score;
    j["best"] = word_to_json(t.best);
    j["best_score"] = t.best_score;
    j["iteration"] = t.iteration;
    j["rng"] = t.rng.state();
    j["mh_params"] = t.mh_params;
    auto& tail = j["trace_tail"] = nlohmann::json::array();
    for (const auto& [it, s] : t.trace_tail) tail.push_back({it, s});
    const std::string text = j.dump();
    return std::vector<std::uint8_t>(text.begin(), text.end());
}

StateToken token_restore(std::span<const std::uint8_t> bytes) {
    nlohmann::json j = nlohmann::json::parse(bytes.begin(), bytes.end(), nullptr,
                                             /*allow_exceptions=*/false);
    if (j.is_discarded()) throw DecodeError("token: bytes are not valid JSON");
    try {
        if (j.at("format").get<std::string>() != kFormat)
            throw DecodeError("token: unrecognized format tag");
        if (j.at("version").get<int>() != kVersion)
            throw DecodeError("token: checkpoint version mismatch");
        StateToken t;
        t.current = word_from_json(j.at("current"));
        t.current_score = j.at("current_score").get<double>();
        t.best = word_from_json(j.at("best"));
        t.best_score = j.at("best_score").get<double>();
        t.iteration = j.at("iteration").get<std::uint64_t>();
        t.rng = Rng::from_state(j.at("rng").get<Rng::State>());
        t.mh_params = j.at("mh_params").get<ParamMap>();
        for (const auto& e : j.at("trace_tail")) {
            if (!e.is_array() || e.size() != 2) throw DecodeError("token: bad trace entry");
            t.trace_tail.emplace_back(e[0].get<std::uint64_t>(), e[1].get<double>());
        }
        return t;
    } catch (const nlohmann::json::exception& e) {
        throw DecodeError(std::string("token: ") + e.what());
    }
}

}  // namespace wordopt
