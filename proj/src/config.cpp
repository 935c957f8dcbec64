#include "wordopt/config.hpp"

#include <algorithm>
#include <json.hpp>
#include <sstream>

#include "wordopt/errors.hpp"

namespace wordopt {

const std::string* ConfigNode::attr(std::string_view key) const {
    for (const auto& [k, v] : attrs)
        if (k == key) return &v;
    return nullptr;
}

// ------------------------------------------------------------------- XML in

namespace {

class XmlParser {
  public:
    explicit XmlParser(const std::string& text) : text_(text) {}

    ConfigNode parse() {
        skip_prolog();
        ConfigNode root = element();
        skip_ws_and_comments();
        if (pos_ != text_.size()) fail("trailing content after the root element");
        return root;
    }

  private:
    [[noreturn]] void fail(const std::string& why) const {
        throw ConfigError("xml:" + std::to_string(line_) + ": " + why);
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    char take() {
        if (pos_ >= text_.size()) fail("unexpected end of document");
        const char c = text_[pos_++];
        if (c == '\n') ++line_;
        return c;
    }

    bool consume(std::string_view token) {
        if (text_.compare(pos_, token.size(), token) != 0) return false;
        for (std::size_t i = 0; i < token.size(); ++i) take();
        return true;
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) take();
    }

    void skip_ws_and_comments() {
        for (;;) {
            skip_ws();
            if (consume("<!--")) {
                while (!consume("-->")) take();
                continue;
            }
            return;
        }
    }

    void skip_prolog() {
        skip_ws();
        if (consume("<?xml")) {
            while (!consume("?>")) take();
        }
        skip_ws_and_comments();
    }

    std::string name_token() {
        std::string out;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.') {
                out += take();
            } else {
                break;
            }
        }
        if (out.empty()) fail("expected a name");
        return out;
    }

    std::string entity() {
        if (consume("amp;")) return "&";
        if (consume("lt;")) return "<";
        if (consume("gt;")) return ">";
        if (consume("quot;")) return "\"";
        if (consume("apos;")) return "'";
        fail("unknown entity reference");
    }

    std::string quoted_value() {
        const char quote = take();
        if (quote != '"' && quote != '\'') fail("attribute value must be quoted");
        std::string out;
        for (;;) {
            const char c = take();
            if (c == quote) return out;
            if (c == '<') fail("'<' inside attribute value");
            if (c == '&') {
                out += entity();
            } else {
                out += c;
            }
        }
    }

    ConfigNode element() {
        if (take() != '<') fail("expected '<'");
        ConfigNode node;
        node.line = line_;
        node.name = name_token();
        for (;;) {
            skip_ws();
            if (consume("/>")) return node;
            if (consume(">")) break;
            const std::string key = name_token();
            skip_ws();
            if (take() != '=') fail("expected '=' after attribute name");
            skip_ws();
            if (node.attr(key)) fail("duplicate attribute '" + key + "'");
            node.attrs.emplace_back(key, quoted_value());
        }
        // content: child elements, comments, whitespace only
        for (;;) {
            const std::size_t text_start = pos_;
            while (pos_ < text_.size() && text_[pos_] != '<') {
                if (!std::isspace(static_cast<unsigned char>(text_[pos_])))
                    fail("unexpected text content in <" + node.name + "> (only elements allowed)");
                take();
            }
            (void)text_start;
            if (consume("<!--")) {
                while (!consume("-->")) take();
                continue;
            }
            if (text_.compare(pos_, 2, "</") == 0) {
                consume("</");
                const std::string closing = name_token();
                if (closing != node.name)
                    fail("mismatched closing tag </" + closing + "> for <" + node.name + ">");
                skip_ws();
                if (take() != '>') fail("expected '>' in closing tag");
                return node;
            }
            node.children.push_back(element());
        }
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

void append_escaped(std::string& out, const std::string& value) {
    for (char c : value) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
}

void emit_node(std::string& out, const ConfigNode& node, int depth) {
    out.append(std::size_t(depth) * 2, ' ');
    out += '<';
    out += node.name;
    for (const auto& [k, v] : node.attrs) {
        out += ' ';
        out += k;
        out += "=\"";
        append_escaped(out, v);
        out += '"';
    }
    if (node.children.empty()) {
        out += "/>\n";
        return;
    }
    out += ">\n";
    for (const auto& child : node.children) emit_node(out, child, depth + 1);
    out.append(std::size_t(depth) * 2, ' ');
    out += "</";
    out += node.name;
    out += ">\n";
}

}  // namespace

ConfigNode parse_xml(const std::string& text) {
    return XmlParser(text).parse();
}

std::string emit_xml(const ConfigNode& root) {
    std::string out = "<?xml version=\"1.0\"?>\n";
    emit_node(out, root, 0);
    return out;
}

// ------------------------------------------------------------------ JSON in

namespace {

std::string scalar_to_text(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
    if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
    if (v.is_number_float()) return format_double(v.get<double>());
    throw ConfigError("config json: expected a scalar, got " + std::string(v.type_name()));
}

ConfigNode json_to_node(const std::string& name, const nlohmann::json& obj,
                        const std::string& path) {
    if (!obj.is_object())
        throw ConfigError("config json: " + path + " must be an object");
    ConfigNode node;
    node.name = name;
    for (const auto& [key, value] : obj.items()) {
        if (key == "params") {
            if (!value.is_object())
                throw ConfigError("config json: " + path + ".params must be an object");
            for (const auto& [pk, pv] : value.items()) {
                ConfigNode param;
                param.name = "param";
                param.attrs.emplace_back("name", pk);
                param.attrs.emplace_back("value", scalar_to_text(pv));
                node.children.push_back(std::move(param));
            }
        } else if (value.is_object()) {
            node.children.push_back(json_to_node(key, value, path + "." + key));
        } else {
            node.attrs.emplace_back(key, scalar_to_text(value));
        }
    }
    return node;
}

}  // namespace

ConfigNode parse_json_config(const std::string& text) {
    const auto doc = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) throw ConfigError("config json: document is not valid JSON");
    if (!doc.is_object() || doc.size() != 1 || !doc.contains("problem"))
        throw ConfigError("config json: expected a single top-level \"problem\" object");
    return json_to_node("problem", doc.at("problem"), "problem");
}

// -------------------------------------------------------------- validation

namespace {

struct Checker {
    const ConfigNode& node;
    std::string path;

    [[noreturn]] void fail(const std::string& why) const {
        throw ConfigError(path + ": " + why);
    }

    void allow_attrs(std::initializer_list<std::string_view> allowed) const {
        for (const auto& [k, v] : node.attrs) {
            if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
                fail("unknown attribute '" + k + "'");
        }
    }

    void allow_children(std::initializer_list<std::string_view> allowed) const {
        for (const auto& child : node.children) {
            if (std::find(allowed.begin(), allowed.end(), child.name) == allowed.end())
                fail("unknown element <" + child.name + ">");
        }
    }

    std::string require_attr(const std::string& key) const {
        const auto* v = node.attr(key);
        if (!v) fail("missing required attribute '" + key + "'");
        return *v;
    }
};

ParamMap collect_params(const ConfigNode& node, const std::string& path) {
    ParamMap params;
    int index = 0;
    for (const auto& child : node.children) {
        const std::string child_path = path + ".param[" + std::to_string(index++) + "]";
        Checker c{child, child_path};
        if (child.name != "param") c.fail("only <param> children are allowed here");
        c.allow_attrs({"name", "value"});
        c.allow_children({});
        const std::string key = c.require_attr("name");
        if (params.count(key)) c.fail("duplicate parameter '" + key + "'");
        params[key] = c.require_attr("value");
    }
    return params;
}

std::uint64_t parse_uint_attr(const Checker& c, const std::string& key, const std::string& text) {
    const auto v = parse_uint(text);
    if (!v) c.fail("attribute '" + key + "' must be a nonnegative integer, got '" + text + "'");
    return *v;
}

double parse_double_attr(const Checker& c, const std::string& key, const std::string& text) {
    const auto v = parse_double(text);
    if (!v) c.fail("attribute '" + key + "' must be a number, got '" + text + "'");
    return *v;
}

}  // namespace

ProblemSpec parse_spec(const std::string& document) {
    const auto first = trim(document);
    if (first.empty()) throw ConfigError("config: empty document");
    const ConfigNode root =
        first.front() == '<' ? parse_xml(document) : parse_json_config(document);

    Checker rc{root, "problem"};
    if (root.name != "problem") rc.fail("root element must be <problem>, got <" + root.name + ">");
    rc.allow_attrs({"name"});
    rc.allow_children({"alphabet", "word", "score", "move", "metaheuristic", "seed", "stop",
                       "transport", "report", "checkpoint"});

    ProblemSpec spec;
    spec.name = rc.require_attr("name");
    if (spec.name.empty()) rc.fail("problem name must be non-empty");

    bool saw_alphabet = false, saw_word = false, saw_score = false, saw_mh = false;
    for (const auto& child : root.children) {
        const std::string path = "problem." + child.name;
        Checker c{child, path};
        if (child.name == "alphabet") {
            if (saw_alphabet) c.fail("duplicate element");
            saw_alphabet = true;
            c.allow_attrs({"symbols"});
            c.allow_children({});
            spec.alphabet_symbols = split_list(c.require_attr("symbols"), ',');
            if (spec.alphabet_symbols.size() < 2)
                c.fail("alphabet needs at least 2 comma-separated symbols");
        } else if (child.name == "word") {
            if (saw_word) c.fail("duplicate element");
            saw_word = true;
            c.allow_attrs({"length", "initial"});
            c.allow_children({});
            spec.n = parse_uint_attr(c, "length", c.require_attr("length"));
            if (spec.n < 1) c.fail("word length must be >= 1");
            if (const auto* initial = child.attr("initial")) spec.initial = *initial;
        } else if (child.name == "score") {
            if (saw_score) c.fail("duplicate element");
            saw_score = true;
            c.allow_attrs({"name"});
            spec.score_name = c.require_attr("name");
            spec.score_params = collect_params(child, path);
        } else if (child.name == "move") {
            c.allow_attrs({"name"});
            spec.move_name = c.require_attr("name");
            spec.move_params = collect_params(child, path);
        } else if (child.name == "metaheuristic") {
            if (saw_mh) c.fail("duplicate element");
            saw_mh = true;
            c.allow_attrs({"name"});
            spec.mh_name = c.require_attr("name");
            spec.mh_params = collect_params(child, path);
        } else if (child.name == "seed") {
            c.allow_attrs({"value"});
            c.allow_children({});
            spec.seed = parse_uint_attr(c, "value", c.require_attr("value"));
        } else if (child.name == "stop") {
            c.allow_attrs({"max_iterations", "target_score"});
            c.allow_children({});
            if (const auto* v = child.attr("max_iterations"))
                spec.stop.max_iterations = parse_uint_attr(c, "max_iterations", *v);
            if (const auto* v = child.attr("target_score"))
                spec.stop.target_score = parse_double_attr(c, "target_score", *v);
        } else if (child.name == "transport") {
            c.allow_attrs({"pool", "task_timeout_s"});
            c.allow_children({});
            if (const auto* v = child.attr("pool")) spec.transport.pool_address = *v;
            if (const auto* v = child.attr("task_timeout_s")) {
                spec.transport.task_timeout_s = parse_double_attr(c, "task_timeout_s", *v);
                if (!(spec.transport.task_timeout_s > 0)) c.fail("task_timeout_s must be positive");
            }
        } else if (child.name == "report") {
            c.allow_attrs({"dir", "archive"});
            c.allow_children({});
            if (const auto* v = child.attr("dir")) spec.report.dir = *v;
            if (const auto* v = child.attr("archive")) {
                const auto b = parse_bool(*v);
                if (!b) c.fail("attribute 'archive' must be a boolean");
                spec.report.archive = *b;
            }
        } else if (child.name == "checkpoint") {
            c.allow_attrs({"path", "every"});
            c.allow_children({});
            spec.checkpoint.path = c.require_attr("path");
            if (const auto* v = child.attr("every"))
                spec.checkpoint.every = parse_uint_attr(c, "every", *v);
            if (spec.checkpoint.every == 0) spec.checkpoint.every = 1000;
        }
    }

    if (!saw_alphabet) rc.fail("missing required element <alphabet>");
    if (!saw_word) rc.fail("missing required element <word> (attribute 'length')");
    if (!saw_score) rc.fail("missing required element <score>");
    if (!saw_mh) rc.fail("missing required element <metaheuristic>");

    // duplicate symbols and length bounds surface here, not mid-run
    {
        std::vector<std::string> sorted = spec.alphabet_symbols;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw ConfigError("problem.alphabet: symbols must be distinct");
        if (sorted.size() > 255) throw ConfigError("problem.alphabet: more than 255 symbols");
    }
    return spec;
}

ParamMap ProblemSpec::effective_mh_params() const {
    ParamMap params = mh_params;
    if (stop.max_iterations) params["max_iterations"] = std::to_string(*stop.max_iterations);
    if (stop.target_score) params["target_score"] = format_double(*stop.target_score);
    return params;
}

std::string emit_spec(const ProblemSpec& spec) {
    ConfigNode root;
    root.name = "problem";
    root.attrs.emplace_back("name", spec.name);

    const auto add_params = [](ConfigNode& node, const ParamMap& params) {
        for (const auto& [k, v] : params) {
            ConfigNode p;
            p.name = "param";
            p.attrs.emplace_back("name", k);
            p.attrs.emplace_back("value", v);
            node.children.push_back(std::move(p));
        }
    };

    {
        ConfigNode alphabet;
        alphabet.name = "alphabet";
        std::string symbols;
        for (std::size_t i = 0; i < spec.alphabet_symbols.size(); ++i) {
            if (i) symbols += ',';
            symbols += spec.alphabet_symbols[i];
        }
        alphabet.attrs.emplace_back("symbols", symbols);
        root.children.push_back(std::move(alphabet));
    }
    {
        ConfigNode word;
        word.name = "word";
        word.attrs.emplace_back("length", std::to_string(spec.n));
        word.attrs.emplace_back("initial", spec.initial);
        root.children.push_back(std::move(word));
    }
    {
        ConfigNode score;
        score.name = "score";
        score.attrs.emplace_back("name", spec.score_name);
        add_params(score, spec.score_params);
        root.children.push_back(std::move(score));
    }
    {
        ConfigNode move;
        move.name = "move";
        move.attrs.emplace_back("name", spec.move_name);
        add_params(move, spec.move_params);
        root.children.push_back(std::move(move));
    }
    {
        ConfigNode mh;
        mh.name = "metaheuristic";
        mh.attrs.emplace_back("name", spec.mh_name);
        add_params(mh, spec.mh_params);
        root.children.push_back(std::move(mh));
    }
    if (spec.seed) {
        ConfigNode seed;
        seed.name = "seed";
        seed.attrs.emplace_back("value", std::to_string(*spec.seed));
        root.children.push_back(std::move(seed));
    }
    if (spec.stop.max_iterations || spec.stop.target_score) {
        ConfigNode stop;
        stop.name = "stop";
        if (spec.stop.max_iterations)
            stop.attrs.emplace_back("max_iterations", std::to_string(*spec.stop.max_iterations));
        if (spec.stop.target_score)
            stop.attrs.emplace_back("target_score", format_double(*spec.stop.target_score));
        root.children.push_back(std::move(stop));
    }
    if (!spec.transport.pool_address.empty() || spec.transport.task_timeout_s != 60.0) {
        ConfigNode transport;
        transport.name = "transport";
        if (!spec.transport.pool_address.empty())
            transport.attrs.emplace_back("pool", spec.transport.pool_address);
        transport.attrs.emplace_back("task_timeout_s", format_double(spec.transport.task_timeout_s));
        root.children.push_back(std::move(transport));
    }
    if (!spec.report.dir.empty() || spec.report.archive) {
        ConfigNode report;
        report.name = "report";
        if (!spec.report.dir.empty()) report.attrs.emplace_back("dir", spec.report.dir);
        if (spec.report.archive) report.attrs.emplace_back("archive", "true");
        root.children.push_back(std::move(report));
    }
    if (!spec.checkpoint.path.empty()) {
        ConfigNode checkpoint;
        checkpoint.name = "checkpoint";
        checkpoint.attrs.emplace_back("path", spec.checkpoint.path);
        checkpoint.attrs.emplace_back("every", std::to_string(spec.checkpoint.every));
        root.children.push_back(std::move(checkpoint));
    }
    return emit_xml(root);
}

std::string ProblemSpec::digest() const {
    return digest_hex(emit_spec(*this));
}

}  // namespace wordopt
