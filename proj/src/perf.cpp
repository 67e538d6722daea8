#include "pkcpc/perf.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <nlohmann/json.hpp>

#include "pkcpc/scdec.hpp"

namespace pkcpc::perf {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

TimingSample summarize(std::vector<double> samples) {
    TimingSample out;
    if (samples.empty())
        return out;
    std::sort(samples.begin(), samples.end());
    std::size_t mid = samples.size() / 2;
    out.median_s = (samples.size() % 2 == 1)
                       ? samples[mid]
                       : 0.5 * (samples[mid - 1] + samples[mid]);
    out.min_s = samples.front();
    out.max_s = samples.back();
    return out;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

} // namespace

double energy_joules(const EnergyModel& model, double seconds) {
    if (!(model.current_amps > 0.0) || !(model.voltage > 0.0))
        throw ParameterError("energy model values must be positive");
    if (!(seconds >= 0.0))
        throw ParameterError("time must be non-negative");
    return model.current_amps * model.voltage * seconds;
}

std::uint64_t memory_model_enc(std::size_t n, std::size_t k, std::size_t t) {
    std::uint64_t n64 = n, k64 = k, t64 = t;
    return n64 * (1 + k64 + t64 + 2 * n64) + t64 * t64;
}

std::uint64_t memory_model_dec(std::size_t n, std::size_t k, std::size_t t) {
    std::uint64_t n64 = n, k64 = k, t64 = t;
    return n64 * (3 * n64 + 2 * k64 + t64 + 1) + t64 * t64 + k64 * k64;
}

std::vector<CostReport> bench_run(std::span<const BenchPoint> grid,
                                  std::size_t trials, const Seed& seed,
                                  const EnergyModel& energy) {
    if (trials < 3)
        throw ParameterError("benchmark needs at least 3 trials per point");
    energy_joules(energy, 0.0);  // validate the model once up front
    CtrDrbg master(seed);
    std::vector<CostReport> reports;
    reports.reserve(grid.size());

    for (const BenchPoint& point : grid) {
        CostReport report;
        report.n = point.n;
        report.k = point.k;
        report.t = point.t;
        report.epsilon = point.epsilon;
        Seed key_seed = master.derive_seed();
        Seed run_seed = master.derive_seed();
        try {
            Params params = Params::create(point.n, point.k, point.t, point.epsilon);
            std::size_t keygen_reps = std::min<std::size_t>(trials, 5);
            std::vector<double> keygen_times;
            KeyPair kp;
            for (std::size_t rep = 0; rep < keygen_reps; ++rep) {
                auto start = Clock::now();
                kp = keygen(params, key_seed);
                keygen_times.push_back(seconds_since(start));
            }
            report.keygen = summarize(std::move(keygen_times));

            CtrDrbg rng(run_seed);
            std::vector<double> enc_times, dec_times;
            std::size_t failures = 0;
            for (std::size_t trial = 0; trial < trials; ++trial) {
                gf2::BitVector m = random_bits(params.k, rng);
                auto start = Clock::now();
                Ciphertext ct = encrypt(m, kp.public_key, rng, &report.enc_counters);
                enc_times.push_back(seconds_since(start));
                start = Clock::now();
                auto out = decrypt(ct, kp.secret_key, &report.dec_counters);
                dec_times.push_back(seconds_since(start));
                if (!out || *out != m)
                    ++failures;
            }
            report.trials = trials;
            report.enc = summarize(std::move(enc_times));
            report.dec = summarize(std::move(dec_times));
            report.mem_enc_cells = memory_model_enc(point.n, point.k, point.t);
            report.mem_dec_cells = memory_model_dec(point.n, point.k, point.t);
            report.energy_enc_j = energy_joules(energy, report.enc.median_s);
            report.energy_dec_j = energy_joules(energy, report.dec.median_s);
            report.dfr = static_cast<double>(failures) / static_cast<double>(trials);
        } catch (const std::exception& e) {
            report = CostReport{};
            report.n = point.n;
            report.k = point.k;
            report.t = point.t;
            report.epsilon = point.epsilon;
            report.error = e.what();
        }
        reports.push_back(std::move(report));
    }
    return reports;
}

DfrResult dfr_montecarlo(const polar::PolarCode& code,
                         const polar::ChannelSpec& channel, std::size_t trials,
                         const Seed& seed) {
    if (trials < 100)
        throw ParameterError("failure-rate estimation needs at least 100 trials");
    DfrResult result;
    result.trials = trials;
    std::vector<double> z_log = polar::bhattacharyya_log(channel, code.n());
    polar::DfrBound bound = polar::dfr_bound(z_log, code.info_set());
    result.bound_raw = bound.raw;
    result.bound = bound.clamped;

    CtrDrbg rng(seed);
    scdec::ScDecoder decoder(code.n());
    double epsilon = channel.epsilon;
    gf2::BitVector frozen_zero(code.n() - code.k());
    scdec::LlrVector llr;
    llr.values.resize(code.n());

    for (std::size_t trial = 0; trial < trials; ++trial) {
        gf2::BitVector info = random_bits(code.k(), rng);
        gf2::BitVector u = code.scatter(info, frozen_zero);
        gf2::BitVector x = polar::polar_transform(u);
        for (std::size_t i = 0; i < code.n(); ++i) {
            if (rng.uniform01() < epsilon)
                llr.values[i] = 0.0;  // erased
            else
                llr.values[i] = x.get(i) ? -scdec::kLlrSaturation
                                         : scdec::kLlrSaturation;
        }
        scdec::DecodeResult dec = decoder.decode(llr, code.info_set(), frozen_zero);
        if (dec.u_hat != u)
            ++result.failures;
    }

    result.empirical =
        static_cast<double>(result.failures) / static_cast<double>(trials);
    result.sigma = std::sqrt(result.empirical * (1.0 - result.empirical) /
                             static_cast<double>(trials));
    result.within_bound = result.empirical <= result.bound + 3.0 * result.sigma;
    return result;
}

ScalingReport scaling_check(std::span<const CostReport> reports, double tolerance) {
    if (!(tolerance > 0.0))
        throw ParameterError("tolerance must be positive");

    struct Point {
        std::size_t n, k;
        double enc_per_trial, dec_per_trial;
    };
    std::vector<Point> points;
    for (const CostReport& r : reports) {
        if (!r.error.empty() || r.trials == 0)
            continue;
        points.push_back({r.n, r.k,
                          static_cast<double>(r.enc_counters.xor_bits) /
                              static_cast<double>(r.trials),
                          static_cast<double>(r.dec_counters.fg_evals) /
                              static_cast<double>(r.trials)});
    }
    std::sort(points.begin(), points.end(),
              [](const Point& a, const Point& b) { return a.n < b.n; });

    ScalingReport report;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = 0; j < points.size(); ++j) {
            const Point& a = points[i];
            const Point& b = points[j];
            if (b.n != 2 * a.n)
                continue;
            if (b.k * a.n != a.k * b.n)
                continue;  // only fixed-rate doublings
            double pred_enc =
                static_cast<double>(b.k * (b.n - b.k)) /
                static_cast<double>(a.k * (a.n - a.k));
            double pred_dec =
                (static_cast<double>(b.n) * std::log2(static_cast<double>(b.n))) /
                (static_cast<double>(a.n) * std::log2(static_cast<double>(a.n)));
            RatioCheck enc_check{"enc_xor_bits", a.n, b.n,
                                 b.enc_per_trial / a.enc_per_trial, pred_enc, false};
            enc_check.pass =
                std::fabs(enc_check.observed - enc_check.predicted) <=
                tolerance * enc_check.predicted;
            RatioCheck dec_check{"dec_fg_evals", a.n, b.n,
                                 b.dec_per_trial / a.dec_per_trial, pred_dec, false};
            dec_check.pass =
                std::fabs(dec_check.observed - dec_check.predicted) <=
                tolerance * dec_check.predicted;
            report.checks.push_back(std::move(enc_check));
            report.checks.push_back(std::move(dec_check));
        }
    }
    if (report.checks.empty())
        throw ParameterError("no fixed-rate block-length doublings in the reports");
    report.all_pass = std::all_of(report.checks.begin(), report.checks.end(),
                                  [](const RatioCheck& c) { return c.pass; });
    return report;
}

std::string to_csv(std::span<const CostReport> reports) {
    std::string out =
        "n,k,t,epsilon,keygen_s,enc_s,dec_s,enc_xor_bits,dec_fg_evals,"
        "mem_enc_cells,mem_dec_cells,energy_enc_j,energy_dec_j,dfr,trials\n";
    for (const CostReport& r : reports) {
        out += std::to_string(r.n) + ',' + std::to_string(r.k) + ',' +
               std::to_string(r.t) + ',' + format_double(r.epsilon) + ',';
        if (r.error.empty()) {
            out += format_double(r.keygen.median_s) + ',' +
                   format_double(r.enc.median_s) + ',' +
                   format_double(r.dec.median_s) + ',' +
                   std::to_string(r.enc_counters.xor_bits) + ',' +
                   std::to_string(r.dec_counters.fg_evals) + ',' +
                   std::to_string(r.mem_enc_cells) + ',' +
                   std::to_string(r.mem_dec_cells) + ',' +
                   format_double(r.energy_enc_j) + ',' +
                   format_double(r.energy_dec_j) + ',' +
                   (r.dfr ? format_double(*r.dfr) : std::string()) + ',' +
                   std::to_string(r.trials);
        } else {
            out += ",,,,,,,,,,";  // measurement fields stay empty
        }
        out += '\n';
    }
    return out;
}

nlohmann::json to_json(std::span<const CostReport> reports) {
    nlohmann::json doc;
    nlohmann::json arr = nlohmann::json::array();
    for (const CostReport& r : reports) {
        nlohmann::json row{{"n", r.n}, {"k", r.k}, {"t", r.t}, {"epsilon", r.epsilon}};
        if (r.error.empty()) {
            row["trials"] = r.trials;
            row["keygen_s"] = r.keygen.median_s;
            row["enc_s"] = r.enc.median_s;
            row["dec_s"] = r.dec.median_s;
            row["enc_xor_bits"] = r.enc_counters.xor_bits;
            row["dec_xor_bits"] = r.dec_counters.xor_bits;
            row["dec_fg_evals"] = r.dec_counters.fg_evals;
            row["dec_perm_moves"] = r.dec_counters.perm_moves;
            row["mem_enc_cells"] = r.mem_enc_cells;
            row["mem_dec_cells"] = r.mem_dec_cells;
            row["energy_enc_j"] = r.energy_enc_j;
            row["energy_dec_j"] = r.energy_dec_j;
            if (r.dfr)
                row["dfr"] = *r.dfr;
        } else {
            row["error"] = r.error;
        }
        arr.push_back(std::move(row));
    }
    doc["reports"] = std::move(arr);
    return doc;
}

std::vector<CostReport> from_json(const nlohmann::json& doc) {
    const nlohmann::json& arr =
        doc.is_object() && doc.contains("reports") ? doc.at("reports") : doc;
    if (!arr.is_array())
        throw ParameterError("report document must hold a \"reports\" array");
    std::vector<CostReport> reports;
    for (const auto& row : arr) {
        CostReport r;
        r.n = row.at("n").get<std::size_t>();
        r.k = row.at("k").get<std::size_t>();
        r.t = row.at("t").get<std::size_t>();
        r.epsilon = row.at("epsilon").get<double>();
        if (row.contains("error")) {
            r.error = row.at("error").get<std::string>();
        } else {
            r.trials = row.at("trials").get<std::size_t>();
            r.keygen.median_s = row.value("keygen_s", 0.0);
            r.enc.median_s = row.value("enc_s", 0.0);
            r.dec.median_s = row.value("dec_s", 0.0);
            r.enc_counters.xor_bits = row.at("enc_xor_bits").get<std::uint64_t>();
            r.dec_counters.xor_bits = row.value("dec_xor_bits", std::uint64_t{0});
            r.dec_counters.fg_evals = row.at("dec_fg_evals").get<std::uint64_t>();
            r.dec_counters.perm_moves = row.value("dec_perm_moves", std::uint64_t{0});
            r.mem_enc_cells = row.value("mem_enc_cells", std::uint64_t{0});
            r.mem_dec_cells = row.value("mem_dec_cells", std::uint64_t{0});
            r.energy_enc_j = row.value("energy_enc_j", 0.0);
            r.energy_dec_j = row.value("energy_dec_j", 0.0);
            if (row.contains("dfr"))
                r.dfr = row.at("dfr").get<double>();
        }
        reports.push_back(std::move(r));
    }
    return reports;
}

} // namespace pkcpc::perf
