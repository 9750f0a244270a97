#include "frontlab/config.hpp"

#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "frontlab/errors.hpp"

namespace frontlab::config {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    size_t e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& s) {
    bool in_str = false;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_str = !in_str;
        if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
}

nlohmann::json parse_scalar(const std::string& tok, int line) {
    if (tok.empty()) throw config_error("config line " + std::to_string(line) + ": empty value");
    if (tok.front() == '"') {
        if (tok.size() < 2 || tok.back() != '"') {
            throw config_error("config line " + std::to_string(line) + ": unterminated string");
        }
        return tok.substr(1, tok.size() - 2);
    }
    if (tok == "true") return true;
    if (tok == "false") return false;
    try {
        size_t pos = 0;
        if (tok.find_first_of(".eE") == std::string::npos) {
            const long long v = std::stoll(tok, &pos);
            if (pos == tok.size()) return v;
        }
        const double v = std::stod(tok, &pos);
        if (pos == tok.size()) return v;
    } catch (...) {
    }
    throw config_error("config line " + std::to_string(line) + ": cannot parse value '" + tok +
                       "'");
}

nlohmann::json parse_value(const std::string& raw, int line) {
    const std::string tok = trim(raw);
    if (!tok.empty() && tok.front() == '[') {
        if (tok.back() != ']') {
            throw config_error("config line " + std::to_string(line) + ": unterminated array");
        }
        nlohmann::json arr = nlohmann::json::array();
        std::string inner = tok.substr(1, tok.size() - 2);
        std::string item;
        bool in_str = false;
        for (char ch : inner) {
            if (ch == '"') in_str = !in_str;
            if (ch == ',' && !in_str) {
                if (!trim(item).empty()) arr.push_back(parse_scalar(trim(item), line));
                item.clear();
            } else {
                item.push_back(ch);
            }
        }
        if (!trim(item).empty()) arr.push_back(parse_scalar(trim(item), line));
        return arr;
    }
    return parse_scalar(tok, line);
}

nlohmann::json* descend(nlohmann::json& root, const std::string& dotted, int line) {
    nlohmann::json* node = &root;
    std::stringstream ss(dotted);
    std::string part;
    while (std::getline(ss, part, '.')) {
        part = trim(part);
        if (part.empty()) {
            throw config_error("config line " + std::to_string(line) + ": empty table name");
        }
        if (!node->contains(part)) (*node)[part] = nlohmann::json::object();
        node = &(*node)[part];
    }
    return node;
}

}  // namespace

nlohmann::json parse_config_text(const std::string& text) {
    // JSON alternative serialization.
    for (char ch : text) {
        if (std::isspace(static_cast<unsigned char>(ch))) continue;
        if (ch == '{') {
            try {
                return nlohmann::json::parse(text);
            } catch (const nlohmann::json::exception& e) {
                throw config_error(std::string("invalid JSON config: ") + e.what());
            }
        }
        break;
    }

    nlohmann::json root = nlohmann::json::object();
    nlohmann::json lines = nlohmann::json::object();
    nlohmann::json* table = &root;
    std::string table_prefix;

    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = trim(strip_comment(raw));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') {
                throw config_error("config line " + std::to_string(line) +
                                   ": unterminated table header");
            }
            table_prefix = trim(s.substr(1, s.size() - 2));
            table = descend(root, table_prefix, line);
            continue;
        }
        const size_t eq = s.find('=');
        if (eq == std::string::npos) {
            throw config_error("config line " + std::to_string(line) + ": expected key = value");
        }
        const std::string key = trim(s.substr(0, eq));
        if (key.empty()) {
            throw config_error("config line " + std::to_string(line) + ": empty key");
        }
        if (table->contains(key)) {
            throw config_error("config line " + std::to_string(line) + ": duplicate key '" +
                               key + "'");
        }
        (*table)[key] = parse_value(s.substr(eq + 1), line);
        const std::string path = table_prefix.empty() ? key : table_prefix + "." + key;
        lines[path] = line;
    }
    if (!lines.empty()) root["__lines"] = lines;
    return root;
}

nlohmann::json load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in.is_open()) {
        throw config_error("cannot open config file: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

namespace {

void validate_node(const nlohmann::json& cfg, const nlohmann::json& schema,
                   const std::string& prefix, const nlohmann::json& lines) {
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
        const std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
        if (!schema.contains(it.key())) {
            std::string msg = "unknown config key '" + path + "'";
            if (lines.contains(path)) {
                msg += " (line " + std::to_string(lines[path].get<int>()) + ")";
            }
            throw config_error(msg);
        }
        if (it->is_object() && schema[it.key()].is_object()) {
            validate_node(*it, schema[it.key()], path, lines);
        }
    }
}

}  // namespace

void validate_keys(const nlohmann::json& config, const nlohmann::json& schema) {
    nlohmann::json cfg = config;
    nlohmann::json lines = nlohmann::json::object();
    if (cfg.contains("__lines")) {
        lines = cfg["__lines"];
        cfg.erase("__lines");
    }
    validate_node(cfg, schema, "", lines);
}

nlohmann::json run_config_schema() {
    return nlohmann::json::parse(R"({
      "model": {
        "variant": 0,
        "nonlinearity": {"kind": 0, "s": 0, "coeffs": 0},
        "lv": {"a": 0, "b": 0, "d": 0, "r": 0},
        "kernel": {"shape": 0, "half_width": 0, "samples": 0}
      },
      "grid": {"x_min": 0, "x_max": 0, "n": 0},
      "stepper": {"scheme": 0, "dt": 0, "cfl_safety": 0},
      "run": {
        "t_end": 0, "sample_dt": 0, "level": 0, "comoving": 0,
        "t_lo_fraction": 0,
        "profile": 0, "x0": 0, "x1": 0, "width": 0, "v_background": 0
      },
      "wave": {"c": 0, "xi_min": 0, "xi_max": 0, "h": 0, "t_max": 0},
      "dispersion": {"c": 0, "lambda_max": 0},
      "threshold": {"parameter": 0, "lo": 0, "hi": 0, "tol": 0, "method": 0, "margin": 0},
      "sweep": {"parameter": 0, "values": 0, "measurements": 0},
      "output": {"dir": 0, "svg": 0},
      "workers": 0,
      "deterministic": 0
    })");
}

std::string config_hash(const nlohmann::json& config) {
    nlohmann::json c = config;
    if (c.contains("__lines")) c.erase("__lines");
    const std::string dump = c.dump();
    uint64_t hash = 1469598103934665603ULL;
    for (unsigned char ch : dump) {
        hash ^= ch;
        hash *= 1099511628211ULL;
    }
    char buf[17];
    snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return std::string(buf);
}

}  // namespace frontlab::config
