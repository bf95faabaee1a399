#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "linconts/environment.hpp"

using namespace linconts;

namespace {

std::filesystem::path write_temp(const std::string& content) {
    static int counter = 0;
    auto path = std::filesystem::temp_directory_path() /
                ("linconts_env_test_" + std::to_string(counter++) + ".csv");
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("reward events follow the arm mean") {
    BanditInstance inst{{{0.0, 0.5}, {1.0, 0.5}, {0.3, 0.5}}, 0.2, "env"};
    Rng rng(123);
    for (int i = 0; i < 100; ++i) {
        CHECK(sample_reward_event(inst, 0, rng) == 0);
        CHECK(sample_reward_event(inst, 1, rng) == 1);
    }
    long hits = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) hits += sample_reward_event(inst, 2, rng);
    CHECK(static_cast<double>(hits) / draws == Catch::Approx(0.3).margin(0.01));
    CHECK_THROWS_AS(sample_reward_event(inst, 3, rng), std::invalid_argument);
}

TEST_CASE("csv loader parses and sorts by arm_id") {
    const auto path = write_temp("# comment\narm_id,mu,r\n2,0.9,0.1\n1,0.1,1.0\n");
    const auto inst = load_arms_csv(path.string());
    REQUIRE(inst.num_arms() == 2);
    CHECK(inst.arms[0].mu == 0.1);
    CHECK(inst.arms[0].r == 1.0);
    CHECK(inst.arms[1].mu == 0.9);
    std::filesystem::remove(path);
}

TEST_CASE("csv loader error paths name the row") {
    const auto bad_range = write_temp("arm_id,mu,r\n1,1.5,0.5\n");
    CHECK_THROWS_WITH(load_arms_csv(bad_range.string()),
                      Catch::Matchers::ContainsSubstring("row 2"));

    const auto bad_field = write_temp("arm_id,mu,r\n1,abc,0.5\n");
    CHECK_THROWS_WITH(load_arms_csv(bad_field.string()),
                      Catch::Matchers::ContainsSubstring("row 2"));

    const auto dup = write_temp("arm_id,mu,r\n1,0.5,0.5\n1,0.2,0.2\n");
    CHECK_THROWS_WITH(load_arms_csv(dup.string()),
                      Catch::Matchers::ContainsSubstring("duplicate"));

    const auto short_row = write_temp("arm_id,mu,r\n1,0.5\n");
    CHECK_THROWS_AS(load_arms_csv(short_row.string()), parse_error);

    const auto empty = write_temp("arm_id,mu,r\n");
    CHECK_THROWS_WITH(load_arms_csv(empty.string()),
                      Catch::Matchers::ContainsSubstring("no arms"));

    const auto bad_header = write_temp("id,mean,reward\n1,0.5,0.5\n");
    CHECK_THROWS_AS(load_arms_csv(bad_header.string()), parse_error);

    for (const auto& p : {bad_range, bad_field, dup, short_row, empty, bad_header})
        std::filesystem::remove(p);
}

TEST_CASE("coupon-like generator respects the parameter ranges") {
    Rng rng(99);
    const auto inst = synth_coupon_like(142, rng);
    CHECK(inst.num_arms() == 142);
    CHECK(inst.eta == 0.25);
    for (const auto& a : inst.arms) {
        CHECK(a.mu >= 0.0);
        CHECK(a.mu <= 0.30);
        CHECK(a.r > 0.0);
        CHECK(a.r <= 1.0);
    }
    CHECK(inst.feasible());

    Rng rng2(1);
    CHECK(synth_coupon_like(2, rng2).num_arms() == 2);
    CHECK_THROWS_AS(synth_coupon_like(1, rng2), std::invalid_argument);
}

TEST_CASE("edx-like generator respects the parameter ranges") {
    Rng rng(99);
    const auto inst = synth_edx_like(290, rng);
    CHECK(inst.num_arms() == 290);
    CHECK(inst.eta == 0.50);
    for (const auto& a : inst.arms) {
        CHECK(a.mu >= 0.0);
        CHECK(a.mu <= 1.0);
        CHECK(a.r > 0.0);
        CHECK(a.r <= 0.40);
    }
    CHECK(inst.feasible());
}

TEST_CASE("minmax normalization") {
    CHECK(normalize_minmax({10, 20, 30}) == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(normalize_minmax({0, 100}) == std::vector<double>{0.0, 1.0});
    CHECK_THROWS_AS(normalize_minmax({5, 5, 5}), std::invalid_argument);
    CHECK_THROWS_AS(normalize_minmax({5}), std::invalid_argument);

    // any positive vector with distinct entries spans exactly [0, 1]
    Rng rng(4);
    std::vector<double> counts(20);
    for (auto& v : counts) v = 1.0 + rng.uniform() * 1000.0;
    const auto norm = normalize_minmax(counts);
    const auto [lo, hi] = std::minmax_element(norm.begin(), norm.end());
    CHECK(*lo == 0.0);
    CHECK(*hi == 1.0);
}
