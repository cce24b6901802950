#include "bimodal/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace bimodal {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
        if (!ok) return false;
    }
    return true;
}

[[noreturn]] void fail(const std::string& origin, int line,
                       const std::string& message) {
    throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + message);
}

}  // namespace

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_string(buffer.str(), path);
}

Config Config::parse_string(const std::string& text, const std::string& origin) {
    Config cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        if (stripped.front() == '[') {
            if (stripped.back() != ']') {
                fail(origin, line_no, "unterminated section header: " + stripped);
            }
            section = trim(stripped.substr(1, stripped.size() - 2));
            if (!valid_name(section)) {
                fail(origin, line_no, "invalid section name: [" + section + "]");
            }
            continue;
        }
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            fail(origin, line_no, "expected key = value, got: " + stripped);
        }
        const std::string key = trim(stripped.substr(0, eq));
        if (!valid_name(key)) {
            fail(origin, line_no, "invalid key name: " + key);
        }
        if (section.empty()) {
            fail(origin, line_no, "key '" + key + "' appears before any [section]");
        }
        auto& entries = cfg.sections_[section];
        if (entries.count(key) != 0) {
            fail(origin, line_no,
                 "duplicate key '" + key + "' in section [" + section +
                     "] (first at line " + std::to_string(entries[key].line) + ")");
        }
        Entry e;
        e.value = trim(stripped.substr(eq + 1));
        e.line = line_no;
        entries[key] = std::move(e);
    }
    return cfg;
}

const Config::Entry* Config::find(const std::string& section,
                                  const std::string& key) const {
    auto sit = sections_.find(section);
    if (sit == sections_.end()) return nullptr;
    auto kit = sit->second.find(key);
    if (kit == sit->second.end()) return nullptr;
    return &kit->second;
}

void Config::fail_at(const Entry& e, const std::string& message) const {
    fail(origin_, e.line, message);
}

bool Config::has(const std::string& section, const std::string& key) const {
    return find(section, key) != nullptr;
}

std::string Config::get_string(const std::string& section,
                               const std::string& key,
                               const std::string& fallback) {
    const Entry* e = find(section, key);
    if (e == nullptr) return fallback;
    e->used = true;
    return e->value;
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) {
    const Entry* e = find(section, key);
    if (e == nullptr) return fallback;
    e->used = true;
    const char* begin = e->value.data();
    const char* end = begin + e->value.size();
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc{} || ptr != end) {
        fail_at(*e, "key '" + key + "': not a number: " + e->value);
    }
    return out;
}

int Config::get_int(const std::string& section, const std::string& key,
                    int fallback) {
    const Entry* e = find(section, key);
    if (e == nullptr) return fallback;
    e->used = true;
    const char* begin = e->value.data();
    const char* end = begin + e->value.size();
    int out = 0;
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc{} || ptr != end) {
        fail_at(*e, "key '" + key + "': not an integer: " + e->value);
    }
    return out;
}

std::uint64_t Config::get_uint64(const std::string& section,
                                 const std::string& key,
                                 std::uint64_t fallback) {
    const Entry* e = find(section, key);
    if (e == nullptr) return fallback;
    e->used = true;
    const char* begin = e->value.data();
    const char* end = begin + e->value.size();
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc{} || ptr != end) {
        fail_at(*e, "key '" + key + "': not an unsigned integer: " + e->value);
    }
    return out;
}

bool Config::get_bool(const std::string& section, const std::string& key,
                      bool fallback) {
    const Entry* e = find(section, key);
    if (e == nullptr) return fallback;
    e->used = true;
    if (e->value == "true" || e->value == "1") return true;
    if (e->value == "false" || e->value == "0") return false;
    fail_at(*e, "key '" + key + "': expected true/false/1/0, got: " + e->value);
}

Complex Config::get_complex(const std::string& section, const std::string& base,
                            Complex fallback) {
    const bool has_re = has(section, base + "_re");
    const bool has_im = has(section, base + "_im");
    if (!has_re && !has_im) return fallback;
    if (has_re != has_im) {
        const Entry* e = find(section, base + (has_re ? "_re" : "_im"));
        fail_at(*e, "complex key '" + base + "' needs both " + base + "_re and " +
                        base + "_im");
    }
    const double re = get_double(section, base + "_re", 0.0);
    const double im = get_double(section, base + "_im", 0.0);
    return Complex{re, im};
}

void Config::finish() const {
    std::vector<std::string> unused;
    for (const auto& [section, entries] : sections_) {
        for (const auto& [key, e] : entries) {
            if (!e.used) {
                unused.push_back("[" + section + "] " + key + " (line " +
                                 std::to_string(e.line) + ")");
            }
        }
    }
    if (!unused.empty()) {
        std::string message = origin_ + ": unknown or unused keys:";
        for (const std::string& u : unused) message += "\n  " + u;
        throw std::runtime_error(message);
    }
}

ModelParams model_from_config(Config& cfg, const std::string& section,
                              const ModelParams& defaults) {
    ModelParams p = defaults;
    p.omega0 = cfg.get_double(section, "omega0", p.omega0);
    p.omega = cfg.get_double(section, "omega", p.omega);
    p.s = cfg.get_double(section, "s", p.s);
    p.r1 = cfg.get_double(section, "r1", p.r1);
    p.r2 = cfg.get_double(section, "r2", p.r2);
    p.g1 = cfg.get_complex(section, "g1", p.g1);
    p.g2 = cfg.get_complex(section, "g2", p.g2);
    p.lambda1 = cfg.get_complex(section, "lambda1", p.lambda1);
    p.lambda2 = cfg.get_complex(section, "lambda2", p.lambda2);
    p.g = cfg.get_complex(section, "g", p.g);
    p.spin_ladder_scale =
        cfg.get_double(section, "spin_ladder_scale", p.spin_ladder_scale);
    p.enforce_resonance =
        cfg.get_bool(section, "enforce_resonance", p.enforce_resonance);
    return p;
}

}  // namespace bimodal
