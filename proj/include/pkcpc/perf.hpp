#pragma once

// Cost accounting: abstract memory models, the energy-from-time model,
// benchmark runs with exact operation counters, decryption-failure-rate
// Monte Carlo, and the complexity-scaling cross-check.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pkcpc/counters.hpp"
#include "pkcpc/drbg.hpp"
#include "pkcpc/pkcpc.hpp"
#include "pkcpc/polar.hpp"

namespace pkcpc::perf {

struct EnergyModel {
    double current_amps = 0.7;
    double voltage = 1.5;
};

// E = I * V * seconds.
double energy_joules(const EnergyModel& model, double seconds);

// Abstract working-set sizes in bit cells.
std::uint64_t memory_model_enc(std::size_t n, std::size_t k, std::size_t t);
std::uint64_t memory_model_dec(std::size_t n, std::size_t k, std::size_t t);

struct TimingSample {
    double median_s = 0.0;
    double min_s = 0.0;
    double max_s = 0.0;
};

struct BenchPoint {
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t t = 0;
    double epsilon = 0.5;
};

struct CostReport {
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t t = 0;
    double epsilon = 0.0;
    std::size_t trials = 0;
    TimingSample keygen, enc, dec;
    OpCounters enc_counters;  // totals over all trials
    OpCounters dec_counters;
    std::uint64_t mem_enc_cells = 0;
    std::uint64_t mem_dec_cells = 0;
    double energy_enc_j = 0.0;  // from the median times
    double energy_dec_j = 0.0;
    std::optional<double> dfr;  // measured failures / trials
    std::string error;          // non-empty when the point could not run
};

// Runs every grid point sequentially (trials >= 3); a point that cannot run
// (bad parameters) produces a report with `error` set instead of aborting.
std::vector<CostReport> bench_run(std::span<const BenchPoint> grid,
                                  std::size_t trials, const Seed& seed,
                                  const EnergyModel& energy = {});

struct DfrResult {
    std::size_t trials = 0;
    std::size_t failures = 0;
    double empirical = 0.0;
    double bound_raw = 0.0;
    double bound = 0.0;   // clamped to [0, 1]
    double sigma = 0.0;   // binomial std dev of the empirical estimate
    bool within_bound = false;  // empirical <= bound + 3 sigma
};

// Erasure-channel Monte Carlo of the decoder over the given channel
// (trials >= 100); the reported bound is the information-set Bhattacharyya
// sum evaluated for that channel.
DfrResult dfr_montecarlo(const polar::PolarCode& code,
                         const polar::ChannelSpec& channel, std::size_t trials,
                         const Seed& seed);

struct RatioCheck {
    std::string metric;
    std::size_t n_from = 0;
    std::size_t n_to = 0;
    double observed = 0.0;
    double predicted = 0.0;
    bool pass = false;
};

struct ScalingReport {
    std::vector<RatioCheck> checks;
    bool all_pass = false;
};

// Compares measured per-trial operation counts against the claimed
// complexity scaling (encrypt ~ k(n-k), decrypt ~ n log2 n) across
// fixed-rate block-length doublings found in the reports.
ScalingReport scaling_check(std::span<const CostReport> reports,
                            double tolerance = 0.25);

std::string to_csv(std::span<const CostReport> reports);
nlohmann::json to_json(std::span<const CostReport> reports);
std::vector<CostReport> from_json(const nlohmann::json& doc);

} // namespace pkcpc::perf
