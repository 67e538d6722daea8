#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pkcpc/perf.hpp"

using namespace pkcpc;
using perf::BenchPoint;
using perf::CostReport;
using perf::EnergyModel;

namespace {

Seed test_seed(char fill) { return seed_from_hex(std::string(64, fill)); }

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        lines.push_back(line);
    return lines;
}

} // namespace

TEST_CASE("memory models match the closed forms") {
    CHECK(perf::memory_model_enc(256, 16, 8) == 137536);
    CHECK(perf::memory_model_dec(256, 16, 8) == 207424);
    CHECK(perf::memory_model_enc(1, 0, 0) == 3);
    CHECK(perf::memory_model_dec(1, 0, 0) == 4);
    CHECK(perf::memory_model_enc(64, 16, 4) == 9552);

    // symbolic expansion for random triples, and dec > enc always
    std::mt19937 rng(61);
    for (int round = 0; round < 100; ++round) {
        std::uint64_t n = 1 + rng() % 2048;
        std::uint64_t k = 1 + rng() % n;
        std::uint64_t t = 1 + rng() % n;
        CHECK(perf::memory_model_enc(n, k, t) ==
              n * (1 + k + t + 2 * n) + t * t);
        CHECK(perf::memory_model_dec(n, k, t) ==
              n * (3 * n + 2 * k + t + 1) + t * t + k * k);
        CHECK(perf::memory_model_dec(n, k, t) > perf::memory_model_enc(n, k, t));
    }
}

TEST_CASE("energy model") {
    EnergyModel def;
    CHECK(perf::energy_joules(def, 0.076) ==
          doctest::Approx(0.0798).epsilon(1e-12));
    CHECK(perf::energy_joules(def, 1.24) ==
          doctest::Approx(1.302).epsilon(1e-12));
    CHECK(perf::energy_joules(def, 0.0) == 0.0);

    // linearity
    std::mt19937 rng(67);
    for (int round = 0; round < 20; ++round) {
        double a = (rng() % 1000) / 250.0;
        double b = (rng() % 1000) / 250.0;
        CHECK(perf::energy_joules(def, a + b) ==
              doctest::Approx(perf::energy_joules(def, a) +
                              perf::energy_joules(def, b)));
    }

    EnergyModel custom{2.0, 5.0};
    CHECK(perf::energy_joules(custom, 0.5) == doctest::Approx(5.0));

    CHECK_THROWS_AS(perf::energy_joules(def, -1.0), ParameterError);
    CHECK_THROWS_AS(perf::energy_joules(EnergyModel{0.0, 1.5}, 1.0),
                    ParameterError);
    CHECK_THROWS_AS(perf::energy_joules(EnergyModel{0.7, -1.5}, 1.0),
                    ParameterError);
}

TEST_CASE("bench_run structure and determinism") {
    std::vector<BenchPoint> grid{{64, 8, 2, 0.5}, {128, 16, 2, 0.5}};
    Seed seed = test_seed('1');
    auto reports = perf::bench_run(grid, 5, seed);
    REQUIRE(reports.size() == 2);

    for (const auto& r : reports) {
        CHECK(r.error.empty());
        CHECK(r.trials == 5);
        CHECK(r.keygen.median_s >= 0.0);
        CHECK(r.keygen.min_s <= r.keygen.median_s);
        CHECK(r.keygen.median_s <= r.keygen.max_s);
        CHECK(r.enc_counters.xor_bits > 0);
        CHECK(r.dec_counters.fg_evals > 0);
        CHECK(r.mem_enc_cells == perf::memory_model_enc(r.n, r.k, r.t));
        CHECK(r.mem_dec_cells == perf::memory_model_dec(r.n, r.k, r.t));
        CHECK(r.energy_enc_j ==
              doctest::Approx(perf::energy_joules({}, r.enc.median_s)));
        CHECK(r.energy_dec_j ==
              doctest::Approx(perf::energy_joules({}, r.dec.median_s)));
        REQUIRE(r.dfr.has_value());
        CHECK(*r.dfr >= 0.0);
        CHECK(*r.dfr <= 1.0);
    }
    // decryption min-sum work is n log2 n per trial, exactly
    CHECK(reports[0].dec_counters.fg_evals == 5 * 64 * 6);
    CHECK(reports[1].dec_counters.fg_evals == 5 * 128 * 7);

    // counters (not timings) repeat exactly under the same seed
    auto again = perf::bench_run(grid, 5, seed);
    for (std::size_t i = 0; i < reports.size(); ++i) {
        CHECK(again[i].enc_counters == reports[i].enc_counters);
        CHECK(again[i].dec_counters == reports[i].dec_counters);
        CHECK(again[i].dfr == reports[i].dfr);
    }

    CHECK_THROWS_AS(perf::bench_run(grid, 2, seed), ParameterError);
}

TEST_CASE("bench_run marks infeasible points instead of aborting") {
    // k above the default rate-limit window cannot keygen
    std::vector<BenchPoint> grid{{64, 8, 2, 0.5}, {256, 200, 8, 0.5}};
    auto reports = perf::bench_run(grid, 3, test_seed('2'));
    REQUIRE(reports.size() == 2);
    CHECK(reports[0].error.empty());
    CHECK_FALSE(reports[1].error.empty());
    CHECK_FALSE(reports[1].dfr.has_value());
    CHECK(reports[1].n == 256);  // point identity is preserved
}

TEST_CASE("dfr_montecarlo clean-channel limit") {
    auto code = polar::PolarCode::build(polar::ChannelSpec::bec(0.5), 64, 16);
    auto res = perf::dfr_montecarlo(code, polar::ChannelSpec::bec(1e-6), 1000,
                                    test_seed('3'));
    CHECK(res.trials == 1000);
    CHECK(res.failures == 0);
    CHECK(res.empirical == 0.0);
    CHECK(res.within_bound);
}

TEST_CASE("dfr_montecarlo respects the union bound") {
    for (double eps : {0.2, 0.3}) {
        auto spec = polar::ChannelSpec::bec(eps);
        auto code = polar::PolarCode::build(spec, 64, 16);
        auto res = perf::dfr_montecarlo(code, spec, 10000, test_seed('4'));
        CHECK(res.trials == 10000);
        CHECK(res.bound ==
              doctest::Approx(code.dfr_bound().clamped).epsilon(1e-12));
        CHECK(res.empirical <= res.bound + 3.0 * res.sigma);
        CHECK(res.within_bound);
    }

    // bound field for the 4-bit toy set
    auto toy = polar::PolarCode::build(polar::ChannelSpec::bec(0.5), 4, 2);
    auto toyres = perf::dfr_montecarlo(toy, polar::ChannelSpec::bec(0.5), 200,
                                       test_seed('5'));
    CHECK(toyres.bound == doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS(perf::dfr_montecarlo(toy, polar::ChannelSpec::bec(0.5), 50,
                                         test_seed('5')),
                    ParameterError);
}

TEST_CASE("dfr_montecarlo determinism") {
    auto spec = polar::ChannelSpec::bec(0.25);
    auto code = polar::PolarCode::build(spec, 32, 8);
    auto a = perf::dfr_montecarlo(code, spec, 500, test_seed('6'));
    auto b = perf::dfr_montecarlo(code, spec, 500, test_seed('6'));
    CHECK(a.failures == b.failures);
    CHECK(a.empirical == b.empirical);
}

TEST_CASE("scaling check") {
    // synthetic fixed-rate doubling grid with ideal counters
    auto make = [](std::size_t n, std::size_t k, std::uint64_t encx,
                   std::uint64_t decf) {
        CostReport r;
        r.n = n;
        r.k = k;
        r.t = 2;
        r.epsilon = 0.5;
        r.trials = 1;
        r.enc_counters.xor_bits = encx;
        r.dec_counters.fg_evals = decf;
        return r;
    };

    std::uint64_t enc512 = 100000, dec512 = 512 * 9;
    std::vector<CostReport> reports{
        make(512, 384, enc512, dec512),
        make(1024, 768, enc512 * 4, 1024 * 10),
    };
    auto rep = perf::scaling_check(reports);
    REQUIRE(rep.checks.size() == 2);
    CHECK(rep.all_pass);
    for (const auto& c : rep.checks) {
        CHECK(c.n_from == 512);
        CHECK(c.n_to == 1024);
        CHECK(c.pass);
    }
    // the encrypt prediction at fixed rate is exactly x4
    CHECK(rep.checks[0].predicted == doctest::Approx(4.0));
    // the decrypt prediction follows n log2 n
    CHECK(rep.checks[1].predicted ==
          doctest::Approx((1024.0 * 10.0) / (512.0 * 9.0)));

    // a far-off observation fails
    reports[1].enc_counters.xor_bits = enc512 * 6;
    CHECK_FALSE(perf::scaling_check(reports).all_pass);

    // no doubling pair -> parameter error
    std::vector<CostReport> single{make(512, 384, 1, 1)};
    CHECK_THROWS_AS(perf::scaling_check(single), ParameterError);
    std::vector<CostReport> mismatched{make(512, 384, 1, 1),
                                       make(1024, 512, 1, 1)};
    CHECK_THROWS_AS(perf::scaling_check(mismatched), ParameterError);
}

TEST_CASE("scaling check on real measurements") {
    std::vector<BenchPoint> grid{{256, 64, 2, 0.5}, {512, 128, 2, 0.5}};
    auto reports = perf::bench_run(grid, 4, test_seed('7'));
    REQUIRE(reports[0].error.empty());
    REQUIRE(reports[1].error.empty());
    auto rep = perf::scaling_check(reports);
    CHECK(rep.all_pass);  // fg ratio is exact; xor ratio is message-dependent
}

TEST_CASE("csv emission") {
    std::vector<BenchPoint> grid{{64, 8, 2, 0.5}};
    auto reports = perf::bench_run(grid, 3, test_seed('8'));
    std::string csv = perf::to_csv(reports);
    auto lines = split_lines(csv);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] ==
          "n,k,t,epsilon,keygen_s,enc_s,dec_s,enc_xor_bits,dec_fg_evals,"
          "mem_enc_cells,mem_dec_cells,energy_enc_j,energy_dec_j,dfr,trials");
    CHECK(lines[1].substr(0, 10) == "64,8,2,0.5");
    // 15 fields -> 14 commas in every row
    for (const auto& line : lines)
        CHECK(std::count(line.begin(), line.end(), ',') == 14);

    // error rows carry the identity fields and leave the rest empty
    CostReport broken;
    broken.n = 256;
    broken.k = 200;
    broken.t = 8;
    broken.epsilon = 0.5;
    broken.error = "infeasible";
    std::vector<CostReport> mixed{reports[0], broken};
    auto mixed_lines = split_lines(perf::to_csv(mixed));
    REQUIRE(mixed_lines.size() == 3);
    CHECK(std::count(mixed_lines[2].begin(), mixed_lines[2].end(), ',') == 14);
    CHECK(mixed_lines[2].substr(0, 12) == "256,200,8,0.");
}

TEST_CASE("json roundtrip") {
    std::vector<BenchPoint> grid{{64, 8, 2, 0.5}, {128, 16, 2, 0.5}};
    auto reports = perf::bench_run(grid, 3, test_seed('9'));
    nlohmann::json doc = perf::to_json(reports);
    REQUIRE(doc.contains("reports"));
    REQUIRE(doc["reports"].is_array());
    REQUIRE(doc["reports"].size() == 2);
    CHECK(doc["reports"][0]["n"] == 64);
    CHECK(doc["reports"][0]["enc_xor_bits"] ==
          reports[0].enc_counters.xor_bits);

    auto back = perf::from_json(doc);
    REQUIRE(back.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(back[i].n == reports[i].n);
        CHECK(back[i].k == reports[i].k);
        CHECK(back[i].t == reports[i].t);
        CHECK(back[i].trials == reports[i].trials);
        CHECK(back[i].enc_counters == reports[i].enc_counters);
        CHECK(back[i].dec_counters == reports[i].dec_counters);
        CHECK(back[i].dfr == reports[i].dfr);
    }

    // bare-array form is accepted too
    auto bare = perf::from_json(doc["reports"]);
    CHECK(bare.size() == 2);

    // error reports survive the roundtrip
    CostReport broken;
    broken.n = 256;
    broken.error = "nope";
    std::vector<CostReport> with_err{broken};
    auto err_doc = perf::to_json(with_err);
    auto err_back = perf::from_json(err_doc);
    REQUIRE(err_back.size() == 1);
    CHECK(err_back[0].error == "nope");
}
