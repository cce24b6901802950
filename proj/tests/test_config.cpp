#include <doctest.h>

#include <stdexcept>
#include <string>

#include "bimodal/config.hpp"

using namespace bimodal;

namespace {

// Runs f and returns the exception text (empty when nothing was thrown).
template <typename F>
std::string error_text(F&& f) {
    try {
        f();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

constexpr const char* kSample = R"(# experiment setup
[model]
omega = 1.5
g_re = 0.25
g_im = -0.75

[evolve]
n0 = 6
t_max = 12.5
store = true
label = run with spaces
seed = 18446744073709551615
)";

}  // namespace

TEST_SUITE("config") {

TEST_CASE("parse and typed access") {
    Config cfg = Config::parse_string(kSample, "sample");
    CHECK(cfg.has("model", "omega"));
    CHECK(!cfg.has("model", "missing"));
    CHECK(!cfg.has("nosuch", "omega"));

    CHECK(cfg.get_double("model", "omega", 0.0) == 1.5);
    CHECK(cfg.get_int("evolve", "n0", -1) == 6);
    CHECK(cfg.get_double("evolve", "t_max", 0.0) == 12.5);
    CHECK(cfg.get_bool("evolve", "store", false));
    CHECK(cfg.get_string("evolve", "label", "") == "run with spaces");
    CHECK(cfg.get_uint64("evolve", "seed", 0) == 18446744073709551615ull);
    CHECK(cfg.get_complex("model", "g", Complex{}) == Complex(0.25, -0.75));

    // Fallbacks for absent keys do not create entries.
    CHECK(cfg.get_double("model", "omega0", 42.0) == 42.0);
    CHECK(cfg.get_bool("model", "flag", true));
    CHECK(cfg.get_complex("model", "lambda1", Complex(1.0, 2.0)) ==
          Complex(1.0, 2.0));

    CHECK_NOTHROW(cfg.finish());
}

TEST_CASE("finish rejects unconsumed keys with their location") {
    Config cfg = Config::parse_string("[model]\nomega = 1\nonega = 2\n", "f.cfg");
    CHECK(cfg.get_double("model", "omega", 0.0) == 1.0);
    const std::string msg = error_text([&] { cfg.finish(); });
    CHECK(msg.find("onega") != std::string::npos);
    CHECK(msg.find("line 3") != std::string::npos);
    CHECK(msg.find("f.cfg") != std::string::npos);
}

TEST_CASE("parse errors carry origin and line number") {
    const std::string no_equals =
        error_text([] { Config::parse_string("[model]\nomega 1\n", "x"); });
    CHECK(no_equals.find("x:2") == 0);
    CHECK(no_equals.find("expected key = value") != std::string::npos);

    const std::string no_section =
        error_text([] { Config::parse_string("omega = 1\n", "x"); });
    CHECK(no_section.find("before any [section]") != std::string::npos);

    const std::string bad_header =
        error_text([] { Config::parse_string("[model\n", "x"); });
    CHECK(bad_header.find("unterminated") != std::string::npos);

    const std::string bad_name =
        error_text([] { Config::parse_string("[Model]\n", "x"); });
    CHECK(bad_name.find("invalid section name") != std::string::npos);

    const std::string bad_key =
        error_text([] { Config::parse_string("[m]\nOmega = 1\n", "x"); });
    CHECK(bad_key.find("invalid key name") != std::string::npos);

    const std::string dup = error_text(
        [] { Config::parse_string("[m]\na = 1\na = 2\n", "x"); });
    CHECK(dup.find("duplicate key 'a'") != std::string::npos);
    CHECK(dup.find("first at line 2") != std::string::npos);

    const std::string missing =
        error_text([] { Config::parse_file("/nonexistent/path.cfg"); });
    CHECK(missing.find("cannot open") != std::string::npos);
}

TEST_CASE("value parse errors name the key and line") {
    Config cfg = Config::parse_string(
        "[m]\nx = 1.5.3\ny = 2.5\nz = yes\nw = -4\n", "v.cfg");
    CHECK(error_text([&] { cfg.get_double("m", "x", 0.0); }).find("v.cfg:2") == 0);
    CHECK(error_text([&] { cfg.get_int("m", "y", 0); }).find("not an integer") !=
          std::string::npos);
    CHECK(error_text([&] { cfg.get_bool("m", "z", false); })
              .find("expected true/false/1/0") != std::string::npos);
    CHECK(error_text([&] { cfg.get_uint64("m", "w", 0); })
              .find("not an unsigned integer") != std::string::npos);
    CHECK(cfg.get_int("m", "w", 0) == -4);
}

TEST_CASE("complex values need both halves") {
    Config cfg = Config::parse_string("[m]\ng_re = 0.5\n", "c.cfg");
    const std::string msg =
        error_text([&] { cfg.get_complex("m", "g", Complex{}); });
    CHECK(msg.find("needs both g_re and g_im") != std::string::npos);

    Config other = Config::parse_string("[m]\ng_im = 0.5\n", "c.cfg");
    CHECK(error_text([&] { other.get_complex("m", "g", Complex{}); })
              .find("needs both") != std::string::npos);
}

TEST_CASE("model overlay changes only the given keys") {
    Config cfg = Config::parse_string(
        "[model]\nomega0 = 4\nomega = 2\nlambda1_re = -1\nlambda1_im = 0\n"
        "lambda2_re = -1\nlambda2_im = 0\ng_re = 2\ng_im = 0\n"
        "enforce_resonance = true\n",
        "m.cfg");
    ModelParams defaults;
    defaults.s = 0.3;
    const ModelParams p = model_from_config(cfg, "model", defaults);
    CHECK_NOTHROW(cfg.finish());

    CHECK(p.omega0 == 4.0);
    CHECK(p.omega == 2.0);
    CHECK(p.lambda1 == Complex(-1.0, 0.0));
    CHECK(p.g == Complex(2.0, 0.0));
    CHECK(p.s == 0.3);                       // untouched default
    CHECK(p.r1 == 0.0);
    CHECK(p.spin_ladder_scale == 1.0);
    CHECK(p.enforce_resonance);
}

}  // TEST_SUITE
