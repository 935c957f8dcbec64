#ifndef WORDOPT_REPORT_HPP
#define WORDOPT_REPORT_HPP

#include <filesystem>
#include <fstream>
#include <vector>

#include "wordopt/run.hpp"

namespace wordopt {

// Trace file: one record per iteration, comma-separated with a header row
// (iteration,current_score,best_score,control), UTF-8, full double precision.
class CsvTraceSink final : public TraceSink {
  public:
    explicit CsvTraceSink(const std::filesystem::path& path);
    void record(std::uint64_t iteration, Score current, Score best, double control) override;
    void flush();

  private:
    std::ofstream out_;
};

class MemoryTraceSink final : public TraceSink {
  public:
    struct Row {
        std::uint64_t iteration;
        Score current;
        Score best;
        double control;
    };
    std::vector<Row> rows;
    void record(std::uint64_t iteration, Score current, Score best, double control) override {
        rows.push_back({iteration, current, best, control});
    }
};

struct RunReport {
    std::string run_id;
    std::string spec_digest;
    std::string problem;
    std::string metaheuristic;
    std::uint64_t seed = 0;
    std::string best_word;
    double best_score = 0.0;
    std::uint64_t iterations = 0;
    std::uint64_t evaluations = 0;
    std::uint64_t accepts = 0;
    std::uint64_t self_loops = 0;
    std::uint64_t phases = 1;
    double wall_seconds = 0.0;
    std::string trace_file = "trace.csv";
};

/// Writes summary.json into the run directory (the trace is streamed there
/// separately during the run).
void write_summary(const std::filesystem::path& dir, const RunReport& report);

RunReport read_summary(const std::filesystem::path& dir);

struct TraceRow {
    std::uint64_t iteration;
    double current;
    double best;
    double control;
};

std::vector<TraceRow> read_trace(const std::filesystem::path& csv_path);

}  // namespace wordopt

#endif
