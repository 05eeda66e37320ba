#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "spinforge/io.hpp"
#include "spinforge/state_library.hpp"
#include "spinforge/synthesis.hpp"

using namespace spinforge;

namespace {

std::uint64_t bits(double x) {
    std::uint64_t b = 0;
    std::memcpy(&b, &x, sizeof b);
    return b;
}

void require_bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(bits(a[i]) == bits(b[i]));
    }
}

std::string edited(const SynthesisSchedule& s, const std::function<void(nlohmann::json&)>& edit) {
    auto j = nlohmann::json::parse(schedule_to_json(s));
    edit(j);
    return j.dump();
}

std::filesystem::path scratch_dir() {
    auto dir = std::filesystem::temp_directory_path() / "spinforge_io_test";
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("format_real round trips every double") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 10000; ++i) {
        double x = 0.0;
        const std::uint64_t b = rng();
        std::memcpy(&x, &b, sizeof x);
        if (!std::isfinite(x)) {
            continue;
        }
        const std::string s = format_real(x);
        REQUIRE(bits(std::strtod(s.c_str(), nullptr)) == bits(x));
    }
    CHECK(format_real(0.5) == "0.5");
}

TEST_CASE("property: schedule JSON round trip is bit exact") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = std::uniform_int_distribution<int>(1, 30)(rng);
        const auto s = synthesize(random_profile(n, rng(), trial % 2 == 0), 0.3 + trial);
        const auto back = schedule_from_json(schedule_to_json(s));
        REQUIRE(back.n == s.n);
        REQUIRE(bits(back.j1) == bits(s.j1));
        require_bit_equal(back.couplings, s.couplings);
        require_bit_equal(back.intervals, s.intervals);
        require_bit_equal(back.tails, s.tails);
        require_bit_equal(back.phases, s.phases);
    }
}

TEST_CASE("schedule JSON layout") {
    const auto s = synthesize(w_state_profile(3), 1.0);
    const auto j = nlohmann::json::parse(schedule_to_json(s));
    CHECK(j["n"] == 3);
    CHECK(j["couplings"].size() == 3);
    CHECK(j["intervals"].size() == 3);
    CHECK(j["tails"].size() == 4);
    CHECK(j["phases"].size() == 6);
    CHECK(j["branch"]["m"] == 0);
    CHECK(j["branch"]["n"] == "N");
    CHECK(j["meta"]["tool_version"] == std::string(kToolVersion));
    CHECK(j["meta"]["schema_version"] == kScheduleSchemaVersion);
}

TEST_CASE("schedule JSON validation") {
    const auto s = synthesize(w_state_profile(2), 1.0);
    CHECK_THROWS_AS(schedule_from_json("{\"n\": 2, \"j1\": "), FormatError);
    CHECK_THROWS_AS(schedule_from_json(edited(s, [](auto& j) { j["extra"] = 1; })), FormatError);
    CHECK_THROWS_AS(schedule_from_json(edited(s, [](auto& j) { j["meta"]["comment"] = "x"; })), FormatError);
    CHECK_THROWS_AS(schedule_from_json(edited(s, [](auto& j) { j.erase("tails"); })), FormatError);
    CHECK_THROWS_AS(schedule_from_json(edited(s, [](auto& j) { j["meta"]["schema_version"] = 2; })), FormatError);
    CHECK_THROWS_AS(schedule_from_json(edited(s, [](auto& j) { j["branch"]["m"] = 1; })), FormatError);
    CHECK_THROWS_AS(schedule_from_json(edited(s, [](auto& j) { j["couplings"][1] = -1.0; })), FormatError);
    CHECK_THROWS_AS(schedule_from_json(edited(s, [](auto& j) { j["tails"][0] = 100.0; })), FormatError);
    CHECK_THROWS_AS(schedule_from_json(edited(s, [](auto& j) { j["phases"].push_back(0.0); })), FormatError);
    CHECK_NOTHROW(schedule_from_json(edited(s, [](auto&) {})));
}

TEST_CASE("schedule files") {
    const auto dir = scratch_dir();
    const auto path = dir / "schedule.json";
    const auto s = synthesize(gaussian_state_profile(6, 1.0), 1.0);
    write_schedule(path, s);
    CHECK_FALSE(std::filesystem::exists(dir / "schedule.json.tmp"));
    const auto back = read_schedule(path);
    require_bit_equal(back.couplings, s.couplings);
    CHECK_THROWS_AS(read_schedule(dir / "does_not_exist.json"), FormatError);
}

TEST_CASE("profile text formats") {
    CHECK(parse_profile_text("0,0.5,0,0.5") == std::vector<double>{0, 0.5, 0, 0.5});
    CHECK(parse_profile_text("# header\n0\n0.5 # inline\n\n0\n0.5\n") == std::vector<double>{0, 0.5, 0, 0.5});
    CHECK(parse_profile_text("[0.25, 0.25, 0.25, 0.25]") == std::vector<double>{0.25, 0.25, 0.25, 0.25});
    CHECK(parse_profile_text("{\"probabilities\": [1, 0]}") == std::vector<double>{1, 0});
    CHECK_THROWS_AS(parse_profile_text("{\"p\": [1, 0]}"), FormatError);
    CHECK_THROWS_AS(parse_profile_text("0,,1"), FormatError);
    CHECK_THROWS_AS(parse_profile_text("# nothing\n"), FormatError);

    const auto w = normalize_profile({0.0, 0.5, 0.0, 0.5});
    CHECK(w.at(2) == 0.5);
    CHECK_THROWS_AS(normalize_profile({0.0, 0.5, 0.0, 0.6}), FormatError);
}

TEST_CASE("CSV emitters") {
    SUBCASE("curve with threshold footer") {
        FidelityCurve curve;
        curve.points = {{0.0, 1.0}, {0.01, 0.98}};
        std::ostringstream out;
        write_curve_csv(out, curve, {0.005, false});
        CHECK(out.str() == "eps_scaled,fidelity\n0,1\n0.01,0.98\n# threshold,0.005,bounded\n");
    }
    SUBCASE("scaling table") {
        SensitivityReport report;
        report.rows = {{10, 0.01, 0.1, false}};
        std::ostringstream out;
        write_scaling_csv(out, report);
        CHECK(out.str() == "N,eps_star,N_times_eps_star\n10,0.01,0.1\n");
    }
    SUBCASE("trace and schedule tables") {
        std::ostringstream trace;
        write_trace_csv(trace, {{0.0, {1.0, 0.0}}, {0.5, {0.25, 0.75}}});
        CHECK(trace.str() == "time,P1,P2\n0,1,0\n0.5,0.25,0.75\n");

        std::ostringstream table;
        write_schedule_csv(table, synthesize(w_state_profile(2), 1.0));
        CHECK(table.str().rfind("k,J,J_over_J1,t,tau\n1,1,1,", 0) == 0);
    }
}
