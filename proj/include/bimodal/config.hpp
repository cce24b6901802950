#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "bimodal/models.hpp"

namespace bimodal {

// Sectioned key = value text:
//
//   # comment
//   [model]
//   omega0 = 2.0
//   g_re = 1.0
//   g_im = 0.0
//
// Keys and sections are lowercase [a-z0-9_]. Values run to end of line
// (trimmed); there are no inline comments. Every key must be consumed by a
// get_* call before finish() — a typo in a physics parameter is an error,
// never a silently ignored string. Complex parameters use paired _re/_im
// keys, each defaulting to 0 when only one is given would be ambiguous, so
// one without the other is rejected.
//
// Parse and type errors throw std::runtime_error with "origin:line:" prefixes.
class Config {
public:
    Config() = default;

    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text,
                               const std::string& origin = "<config>");

    bool has(const std::string& section, const std::string& key) const;

    // Each getter returns the fallback when the key is absent and marks the
    // key as consumed when present.
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback);
    double get_double(const std::string& section, const std::string& key,
                      double fallback);
    int get_int(const std::string& section, const std::string& key,
                int fallback);
    std::uint64_t get_uint64(const std::string& section, const std::string& key,
                             std::uint64_t fallback);
    bool get_bool(const std::string& section, const std::string& key,
                  bool fallback);  // true/false/1/0
    Complex get_complex(const std::string& section, const std::string& base,
                        Complex fallback);  // reads base_re / base_im

    // Throws listing every never-consumed key with its line number.
    void finish() const;

private:
    struct Entry {
        std::string value;
        int line = 0;
        mutable bool used = false;
    };

    const Entry* find(const std::string& section, const std::string& key) const;
    [[noreturn]] void fail_at(const Entry& e, const std::string& message) const;

    std::string origin_ = "<config>";
    std::map<std::string, std::map<std::string, Entry>> sections_;
};

// ModelParams assembled from a config section on top of explicit defaults;
// different commands start from different documented defaults.
ModelParams model_from_config(Config& cfg, const std::string& section,
                              const ModelParams& defaults);

}  // namespace bimodal
