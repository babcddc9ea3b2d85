// Copyright 2026 The dockmpc Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <string>

#include "dockmpc/error.hpp"
#include "dockmpc/scenario.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace dockmpc;
using nlohmann::json;

namespace {

std::string preset_file(const std::string& name) {
  return std::string(DOCKMPC_SOURCE_DIR) + "/presets/" + name + ".json";
}

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

json base() { return json::parse(save_config(preset("exp1"))); }

}  // namespace

TEST_SUITE("scenario") {
  TEST_CASE("presets follow the experiment definitions") {
    const auto e1 = preset("exp1");
    CHECK(e1.horizon == 20);
    CHECK(e1.dt == doctest::Approx(0.25));
    CHECK(e1.initial == CentralState{{0, -2, 0}, {0, 2, 0}});
    CHECK(e1.coupling.half_cone == doctest::Approx(deg2rad(15.0)));
    CHECK(e1.coupling.iface1.delta_phi() == doctest::Approx(kPi / 2));
    CHECK(e1.coupling.iface2.delta_phi() == doctest::Approx(-kPi / 2));
    CHECK(e1.weights.lambda_dtheta == 1000.0);
    CHECK(e1.terminal.w[2] == 200.0);

    const auto e2 = preset("exp2");
    CHECK(e2.initial.robot1 == e1.initial.robot2);
    CHECK(e2.initial.robot2 == e1.initial.robot1);

    const auto c = preset("exp3_coupled");
    std::size_t couple = c.script.size(), transfer = c.script.size(), uncouple = c.script.size();
    for (std::size_t i = 0; i < c.script.size(); ++i) {
      if (c.script[i].kind == EventKind::Couple) couple = i;
      if (c.script[i].kind == EventKind::Transfer) transfer = i;
      if (c.script[i].kind == EventKind::Uncouple) uncouple = i;
    }
    REQUIRE(couple < transfer);
    REQUIRE(transfer < uncouple);
    CHECK(c.script[transfer].duration == doctest::Approx(7.0));
    CHECK(preset("exp3_baseline").controller == ControllerKind::Baseline);
    CHECK_THROWS_AS(preset("exp9"), ConfigError);
  }

  TEST_CASE("every preset validates and round-trips") {
    for (const auto& name : preset_names()) {
      const ScenarioConfig c = preset(name);
      CHECK_NOTHROW(c.validate());
      const std::string once = save_config(c);
      const ScenarioConfig back = parse_config(once);
      CHECK(save_config(back) == once);
      CHECK(back.initial == c.initial);
      CHECK(back.coupling.half_cone == c.coupling.half_cone);
      CHECK(back.bounds.omega_max == c.bounds.omega_max);
      CHECK(back.script.size() == c.script.size());
    }
  }

  TEST_CASE("shipped preset files load") {
    const auto c = load_config(preset_file("experiment1"));
    CHECK(c.initial == CentralState{{0, -2, 0}, {0, 2, 0}});
    for (const char* n : {"experiment2", "experiment3_coupled", "experiment3_baseline"}) {
      CHECK_NOTHROW(load_config(preset_file(n)));
    }
  }

  TEST_CASE("defaults fill omitted fields") {
    json j = base();
    j["coupling"].erase("r_ca");
    CHECK(parse_config(j.dump()).coupling.r_ca == doctest::Approx(0.4));
    const auto minimal = parse_config(
        R"({"schema": 1, "initial": {"robot1": [0, -2, 0], "robot2": [0, 2, 90]}, "script": []})");
    CHECK(minimal.initial.robot2.theta() == doctest::Approx(kPi / 2));
    CHECK(minimal.horizon == 20);
    CHECK(minimal.coupling.delta_r == doctest::Approx(0.2));
  }

  TEST_CASE("schema errors name the field") {
    CHECK(error_of("").find("schema") != std::string::npos);
    CHECK(error_of("{}").find("schema") != std::string::npos);
    CHECK(error_of(R"({"schema": 2})").find("schema") != std::string::npos);
    json j = base();
    j["coupling"]["r_cx"] = 1.0;
    CHECK(error_of(j.dump()).find("coupling.r_cx") != std::string::npos);
    j = base();
    j["horizon"] = "twenty";
    CHECK(error_of(j.dump()).find("horizon") != std::string::npos);
    j = base();
    j["dt"] = -0.1;
    CHECK(error_of(j.dump()).find("dt") != std::string::npos);
    j = base();
    j["script"][0]["event"] = "teleport";
    CHECK(error_of(j.dump()).find("script") != std::string::npos);
  }

  TEST_CASE("scripts must be well formed") {
    ScenarioConfig c = preset("exp3_coupled");
    c.script.insert(c.script.begin(), ScriptEvent::uncouple());
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = preset("exp3_baseline");
    c.script.push_back(ScriptEvent::couple(1, 1, 0));
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = preset("exp1");
    c.script.push_back(ScriptEvent::transfer(2.0));
    CHECK_NOTHROW(c.validate());
    c.script.push_back(ScriptEvent::transfer(-1.0));
    CHECK_THROWS_AS(c.validate(), ConfigError);
  }

  TEST_CASE("missing file is a config error") {
    CHECK_THROWS_AS(load_config("/nonexistent/dir/missing.json"), ConfigError);
    const auto tmp = std::filesystem::temp_directory_path() / "dockmpc_empty.json";
    { std::ofstream(tmp.string()); }
    try {
      load_config(tmp.string());
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("schema") != std::string::npos);
    }
    std::filesystem::remove(tmp);
  }

  TEST_CASE("docked partner pose") {
    const CouplingParams p;
    const auto q = docked_partner_pose({1, 2, 0}, p);
    CHECK(q.x == doctest::Approx(1.0));
    CHECK(q.y == doctest::Approx(2.2));
    CHECK(q.theta == doctest::Approx(0.0).epsilon(1e-12));
  }
}
