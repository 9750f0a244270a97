#include <doctest.h>

#include "frontlab/config.hpp"
#include "frontlab/errors.hpp"

using namespace frontlab;

TEST_SUITE("config") {

TEST_CASE("structured text parses into nested tables") {
    const std::string text = R"(# experiment
workers = 4

[model]
variant = "lv_system"

[model.lv]
a = 0.5
b = 0.5
d = 50.0
r = 1

[sweep]
values = [1, 5.0, 50]
measurements = ["c_hat", "excess"]

[output]
svg = true
)";
    auto cfg = config::parse_config_text(text);
    CHECK(cfg["workers"] == 4);
    CHECK(cfg["model"]["variant"] == "lv_system");
    CHECK(cfg["model"]["lv"]["a"] == 0.5);
    CHECK(cfg["model"]["lv"]["d"] == 50.0);
    CHECK(cfg["model"]["lv"]["r"] == 1);
    CHECK(cfg["sweep"]["values"].size() == 3);
    CHECK(cfg["sweep"]["values"][1] == 5.0);
    CHECK(cfg["sweep"]["measurements"][0] == "c_hat");
    CHECK(cfg["output"]["svg"] == true);
    config::validate_keys(cfg, config::run_config_schema());
}

TEST_CASE("json is accepted as an alternative serialization") {
    auto cfg = config::parse_config_text(R"({"model": {"variant": "scalar_local",
        "nonlinearity": {"kind": "hadeler_rothe", "s": 2.0}}, "workers": 2})");
    CHECK(cfg["model"]["nonlinearity"]["s"] == 2.0);
    config::validate_keys(cfg, config::run_config_schema());
}

TEST_CASE("unknown keys are rejected with the line number") {
    const std::string text = "[model]\nvariant = \"lv_system\"\nbogus_key = 1\n";
    auto cfg = config::parse_config_text(text);
    try {
        config::validate_keys(cfg, config::run_config_schema());
        FAIL("expected config_error");
    } catch (const config_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("model.bogus_key") != std::string::npos);
        CHECK(msg.find("line 3") != std::string::npos);
    }
}

TEST_CASE("malformed input raises config errors") {
    CHECK_THROWS_AS(config::parse_config_text("[model\nx = 1\n"), config_error);
    CHECK_THROWS_AS(config::parse_config_text("x == 1\n"), config_error);
    CHECK_THROWS_AS(config::parse_config_text("x = \"unterminated\n"), config_error);
    CHECK_THROWS_AS(config::parse_config_text("x = 1\nx = 2\n"), config_error);
    CHECK_THROWS_AS(config::parse_config_text("{\"bad\": }"), config_error);
}

TEST_CASE("config hash is stable and ignores line annotations") {
    auto c1 = config::parse_config_text("[model]\nvariant = \"lv_system\"\n");
    auto c2 = config::parse_config_text("\n# comment\n[model]\nvariant = \"lv_system\"\n");
    CHECK(config::config_hash(c1) == config::config_hash(c2));
    auto c3 = config::parse_config_text("[model]\nvariant = \"scalar_local\"\n");
    CHECK(config::config_hash(c1) != config::config_hash(c3));
}

}  // TEST_SUITE
