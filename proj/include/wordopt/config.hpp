#ifndef WORDOPT_CONFIG_HPP
#define WORDOPT_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wordopt/strings.hpp"

namespace wordopt {

// Parsed configuration tree shared by the XML form and the equivalent JSON
// form. Attribute order is preserved for faithful emission.
struct ConfigNode {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attrs;
    std::vector<ConfigNode> children;
    int line = 0;  // 1-based source line when known

    const std::string* attr(std::string_view key) const;
};

/// Strict XML subset: prolog, comments, elements, quoted attributes, the five
/// predefined entities; element text must be whitespace. Errors carry line
/// numbers.
ConfigNode parse_xml(const std::string& text);

/// JSON object form with identical semantics; element objects hold attributes
/// as scalars, child elements as objects, and "params" maps to param
/// children.
ConfigNode parse_json_config(const std::string& text);

std::string emit_xml(const ConfigNode& root);

struct StopRules {
    std::optional<std::uint64_t> max_iterations;
    std::optional<double> target_score;
};

struct TransportSettings {
    std::string pool_address;     // empty: in-process
    double task_timeout_s = 60.0;
};

struct ReportSettings {
    std::string dir;       // empty: runs/<run_id>
    bool archive = false;  // also spill the GA archive
};

struct CheckpointSettings {
    std::string path;
    std::uint64_t every = 0;
};

// The validated problem definition: everything a run needs, resolvable
// against the registry before the first step.
struct ProblemSpec {
    std::string name;
    std::vector<std::string> alphabet_symbols;
    std::size_t n = 0;
    std::string initial = "default";  // default | random | straight_line | explicit word text
    std::string score_name;
    ParamMap score_params;
    std::string move_name = "substitute";
    ParamMap move_params;
    std::string mh_name;
    ParamMap mh_params;
    std::optional<std::uint64_t> seed;
    StopRules stop;
    TransportSettings transport;
    ReportSettings report;
    CheckpointSettings checkpoint;

    /// Metaheuristic params with the stop block merged in (stop wins).
    ParamMap effective_mh_params() const;

    /// Digest of the canonical emission; identifies the spec in reports and
    /// checkpoints.
    std::string digest() const;
};

/// Parses either form (XML when the first non-space byte is '<', JSON
/// otherwise) and validates strictly: unknown elements, unknown attributes,
/// and out-of-range values are ConfigErrors naming the offending path.
ProblemSpec parse_spec(const std::string& document);

/// Canonical XML emission; parse_spec(emit_spec(s)) == s on semantic content.
std::string emit_spec(const ProblemSpec& spec);

}  // namespace wordopt

#endif
