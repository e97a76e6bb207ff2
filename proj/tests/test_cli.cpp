#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "strata/selftest.hpp"
#include "strata/weight.hpp"

using namespace strata;
using json = nlohmann::ordered_json;

// The CLI subcommands are thin wrappers over the library; the binary itself
// is exercised end to end by the acceptance suite.  Here we pin the report
// contracts that the wrappers rely on.

TEST_CASE("quick selftest passes and serializes stably") {
    const auto a = run_selftest({true, 1});
    CHECK(a.all_pass());
    const auto b = run_selftest({true, 1});
    CHECK(a.to_json() == b.to_json());
    // the table has one line per check plus the verdict
    std::string table = a.to_table();
    size_t lines = 0;
    for (char c : table)
        if (c == '\n')
            ++lines;
    CHECK(lines == a.checks.size() + 1);
    CHECK(table.find("PASS") != std::string::npos);
}

TEST_CASE("selftest report is valid JSON with the declared fields") {
    const auto rep = run_selftest({true, 7});
    const json j = json::parse(rep.to_json());
    CHECK(j.at("report") == "selftest");
    CHECK(j.at("seed") == 7);
    CHECK(j.at("quick") == true);
    CHECK(j.at("checks").is_array());
    CHECK(j.at("checks").size() == rep.checks.size());
    for (const auto& c : j.at("checks")) {
        CHECK(c.contains("anchor"));
        CHECK(c.contains("pass"));
    }
    CHECK(j.at("all_pass") == rep.all_pass());
}

TEST_CASE("different seeds change the sampled scenarios but not the verdict") {
    const auto a = run_selftest({true, 1});
    const auto c = run_selftest({true, 123456});
    CHECK(a.all_pass());
    CHECK(c.all_pass());
}

TEST_CASE("scenario schema round trip") {
    const auto sc = generate_scenario(2, 31, 2, 6, ScenarioProfile::fibered(3));
    const json j = json::parse(scenario_to_json(sc));
    for (const char* key : {"d", "sigma", "tau_of_i", "X1", "Xp", "deg1", "deg2", "seed"})
        CHECK(j.contains(key));
    const auto sc2 = scenario_from_json(j.dump());
    CHECK(scenario_to_json(sc2) == scenario_to_json(sc));
}
