#include "wordopt/report.hpp"

#include <json.hpp>

#include "wordopt/errors.hpp"
#include "wordopt/strings.hpp"

namespace wordopt {

CsvTraceSink::CsvTraceSink(const std::filesystem::path& path) {
    std::filesystem::create_directories(path.parent_path());
    out_.open(path, std::ios::trunc);
    if (!out_) throw ConfigError("cannot open trace file for writing: " + path.string());
    out_ << "iteration,current_score,best_score,control\n";
}

void CsvTraceSink::record(std::uint64_t iteration, Score current, Score best, double control) {
    out_ << iteration << ',' << format_double(current) << ',' << format_double(best) << ','
         << format_double(control) << '\n';
}

void CsvTraceSink::flush() {
    out_.flush();
}

void write_summary(const std::filesystem::path& dir, const RunReport& report) {
    std::filesystem::create_directories(dir);
    nlohmann::json j;
    j["format"] = "wordopt.summary";
    j["version"] = 1;
    j["run_id"] = report.run_id;
    j["spec_digest"] = report.spec_digest;
    j["problem"] = report.problem;
    j["metaheuristic"] = report.metaheuristic;
    j["seed"] = report.seed;
    j["best_word"] = report.best_word;
    j["best_score"] = report.best_score;
    j["iterations"] = report.iterations;
    j["evaluations"] = report.evaluations;
    j["accepts"] = report.accepts;
    j["self_loops"] = report.self_loops;
    j["phases"] = report.phases;
    j["wall_seconds"] = report.wall_seconds;
    j["trace_file"] = report.trace_file;
    std::ofstream out(dir / "summary.json", std::ios::trunc);
    if (!out) throw ConfigError("cannot write summary into " + dir.string());
    out << j.dump(2) << '\n';
}

RunReport read_summary(const std::filesystem::path& dir) {
    std::ifstream in(dir / "summary.json");
    if (!in) throw ConfigError("no summary.json in " + dir.string());
    nlohmann::json j = nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw DecodeError("summary.json is not valid JSON");
    try {
        if (j.at("format").get<std::string>() != "wordopt.summary")
            throw DecodeError("summary.json: unexpected format tag");
        RunReport r;
        r.run_id = j.at("run_id").get<std::string>();
        r.spec_digest = j.at("spec_digest").get<std::string>();
        r.problem = j.at("problem").get<std::string>();
        r.metaheuristic = j.at("metaheuristic").get<std::string>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.best_word = j.at("best_word").get<std::string>();
        r.best_score = j.at("best_score").get<double>();
        r.iterations = j.at("iterations").get<std::uint64_t>();
        r.evaluations = j.at("evaluations").get<std::uint64_t>();
        r.accepts = j.at("accepts").get<std::uint64_t>();
        r.self_loops = j.at("self_loops").get<std::uint64_t>();
        r.phases = j.at("phases").get<std::uint64_t>();
        r.wall_seconds = j.at("wall_seconds").get<double>();
        r.trace_file = j.at("trace_file").get<std::string>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw DecodeError(std::string("summary.json: ") + e.what());
    }
}

std::vector<TraceRow> read_trace(const std::filesystem::path& csv_path) {
    std::ifstream in(csv_path);
    if (!in) throw ConfigError("no trace file at " + csv_path.string());
    std::vector<TraceRow> rows;
    std::string line;
    std::getline(in, line);  // header
    if (line != "iteration,current_score,best_score,control")
        throw DecodeError("trace file header mismatch: " + line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_list(line, ',');
        if (fields.size() != 4) throw DecodeError("trace row malformed: " + line);
        const auto it = parse_uint(fields[0]);
        const auto cur = parse_double(fields[1]);
        const auto best = parse_double(fields[2]);
        const auto ctrl = parse_double(fields[3]);
        if (!it || !cur || !best || !ctrl) throw DecodeError("trace row malformed: " + line);
        rows.push_back({*it, *cur, *best, *ctrl});
    }
    return rows;
}

}  // namespace wordopt
