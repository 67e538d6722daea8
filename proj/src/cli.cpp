#include "pkcpc/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pkcpc/perf.hpp"
#include "pkcpc/pkcpc.hpp"
#include "pkcpc/serialize.hpp"

namespace pkcpc::cli {

namespace {

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);
    std::vector<std::uint8_t> data{std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>()};
    if (in.bad())
        throw IoError("read failed: " + path);
    return data;
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw IoError("write failed: " + path);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw IoError("cannot open " + path + " for writing");
    out << text;
    if (!out)
        throw IoError("write failed: " + path);
}

// Seed from an optional hex flag; fresh OS entropy otherwise.  `echo` prints
// the seed to stderr (only ever used for public-parameter runs).
Seed resolve_seed(const std::string& hex, bool echo, const char* label) {
    Seed seed = hex.empty() ? random_seed() : seed_from_hex(hex);
    if (echo)
        std::cerr << label << "=" << seed_to_hex(seed) << "\n";
    return seed;
}

struct KeygenArgs {
    std::size_t n = 0, k = 0, t = 0;
    double epsilon = 0.5;
    std::string seed_hex;
    std::size_t window = 0;  // 0 = rate-limit default
    std::string pub_out, sec_out;
};

int cmd_keygen(const KeygenArgs& a) {
    Params params = Params::create(a.n, a.k, a.t, a.epsilon);
    if (params.exceeds_rate_limit()) {
        auto limit = polar::max_rate_r0(polar::ChannelSpec::bec(params.epsilon),
                                        params.n);
        std::cerr << "warning: k=" << params.k
                  << " exceeds the finite-length rate limit (k0=" << limit.k0
                  << "); decoding reliability is degraded\n";
    }
    // The keygen seed feeds the secret sampling; it is stored in the secret
    // key file and intentionally never printed.
    Seed seed = a.seed_hex.empty() ? random_seed() : seed_from_hex(a.seed_hex);
    KeygenOptions options;
    if (a.window != 0)
        options.window_override = a.window;
    KeyPair kp = keygen(params, seed, options);
    write_file(a.pub_out, serialize_public_key(kp.public_key));
    write_file(a.sec_out, serialize_secret_key(kp.secret_key));
    std::cerr << "wrote public key to " << a.pub_out << " and secret key to "
              << a.sec_out << "\n";
    return exit_ok;
}

struct EncryptArgs {
    std::string pub_path, in_path, out_path, rng_seed_hex;
};

int cmd_encrypt(const EncryptArgs& a) {
    PublicKey pk = deserialize_public_key(read_file(a.pub_path));
    std::vector<std::uint8_t> message = read_file(a.in_path);
    // Error-vector randomness; not echoed (it is as sensitive as the message).
    CtrDrbg rng(a.rng_seed_hex.empty() ? random_seed()
                                       : seed_from_hex(a.rng_seed_hex));
    CiphertextFile file;
    file.params = pk.params;
    for (const gf2::BitVector& block : frame_message(message, pk.params.k))
        file.blocks.push_back(encrypt(block, pk, rng).payload);
    write_file(a.out_path, serialize_ciphertext(file));
    std::cerr << "encrypted " << message.size() << " bytes into "
              << file.blocks.size() << " blocks\n";
    return exit_ok;
}

struct DecryptArgs {
    std::string sec_path, in_path, out_path;
};

int cmd_decrypt(const DecryptArgs& a) {
    SecretKey sk = deserialize_secret_key(read_file(a.sec_path));
    CiphertextFile file = deserialize_ciphertext(read_file(a.in_path));
    if (!(file.params == sk.params))
        throw ParseError(ParseError::Code::invariant_violation,
                         "ciphertext parameters do not match the secret key");
    std::vector<gf2::BitVector> blocks;
    for (const gf2::BitVector& payload : file.blocks) {
        Ciphertext ct{sk.params.n, sk.params.t, payload};
        auto out = decrypt(ct, sk);
        if (!out) {
            std::cerr << "decryption failure\n";
            return exit_decrypt;
        }
        blocks.push_back(std::move(*out));
    }
    std::vector<std::uint8_t> message = unframe_message(blocks);
    write_file(a.out_path, message);
    std::cerr << "decrypted " << message.size() << " bytes\n";
    return exit_ok;
}

struct BenchArgs {
    std::string preset, grid_file;
    std::size_t trials = 10;
    std::string csv_out, json_out, rng_seed_hex;
};

std::vector<perf::BenchPoint> preset_grid(const std::string& name) {
    if (name == "comparison") {
        // Low-rate points at the symmetric design erasure rate.
        return {{256, 16, 16, 0.5}, {512, 8, 16, 0.5}, {1024, 4, 16, 0.5}};
    }
    if (name == "rate075") {
        // Rate-3/4 points; the erasure rate keeps k inside the rate limit at
        // every block length.
        return {{256, 192, 2, 0.03}, {512, 384, 2, 0.03}, {1024, 768, 2, 0.03}};
    }
    throw ParameterError("unknown preset '" + name + "'");
}

std::vector<perf::BenchPoint> load_grid(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(ParseError::Code::invariant_violation, e.what());
    }
    const nlohmann::json& arr = doc.is_object() && doc.contains("grid")
                                    ? doc.at("grid")
                                    : doc;
    if (!arr.is_array() || arr.empty())
        throw ParseError(ParseError::Code::invariant_violation,
                         "grid file must hold a non-empty array of points");
    std::vector<perf::BenchPoint> grid;
    for (const auto& row : arr) {
        perf::BenchPoint p;
        p.n = row.at("n").get<std::size_t>();
        p.k = row.at("k").get<std::size_t>();
        p.t = row.at("t").get<std::size_t>();
        p.epsilon = row.value("epsilon", 0.5);
        grid.push_back(p);
    }
    return grid;
}

int cmd_bench(const BenchArgs& a) {
    std::vector<perf::BenchPoint> grid =
        a.grid_file.empty() ? preset_grid(a.preset) : load_grid(a.grid_file);
    Seed seed = resolve_seed(a.rng_seed_hex, true, "bench_seed");
    std::vector<perf::CostReport> reports = perf::bench_run(grid, a.trials, seed);
    for (const perf::CostReport& r : reports) {
        if (!r.error.empty())
            std::cerr << "point n=" << r.n << " k=" << r.k << " t=" << r.t
                      << " failed: " << r.error << "\n";
    }
    std::string csv = perf::to_csv(reports);
    if (!a.csv_out.empty())
        write_text(a.csv_out, csv);
    if (!a.json_out.empty())
        write_text(a.json_out, perf::to_json(reports).dump(2) + "\n");
    if (a.csv_out.empty() && a.json_out.empty())
        std::cout << csv;
    return exit_ok;
}

struct DfrArgs {
    std::size_t n = 0, k = 0;
    double epsilon = 0.5;
    std::size_t trials = 1000;
    std::string rng_seed_hex;
};

int cmd_dfr(const DfrArgs& a) {
    auto spec = polar::ChannelSpec::bec(a.epsilon);
    polar::PolarCode code = polar::PolarCode::build(spec, a.n, a.k);
    Seed seed = resolve_seed(a.rng_seed_hex, true, "dfr_seed");
    perf::DfrResult result = perf::dfr_montecarlo(code, spec, a.trials, seed);
    char line[160];
    std::snprintf(line, sizeof line, "n=%zu k=%zu epsilon=%g trials=%zu\n", a.n,
                  a.k, a.epsilon, a.trials);
    std::cout << line;
    std::snprintf(line, sizeof line, "empirical_dfr=%.6g (%zu failures)\n",
                  result.empirical, result.failures);
    std::cout << line;
    std::snprintf(line, sizeof line, "union_bound=%.6g (raw=%.6g)\n",
                  result.bound, result.bound_raw);
    std::cout << line;
    std::cout << "within_bound=" << (result.within_bound ? "true" : "false")
              << "\n";
    return exit_ok;
}

struct AnalyzeArgs {
    std::string reports_path;
    double tolerance = 0.25;
};

int cmd_analyze(const AnalyzeArgs& a) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(a.reports_path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(ParseError::Code::invariant_violation, e.what());
    }
    std::vector<perf::CostReport> reports = perf::from_json(doc);
    perf::ScalingReport scaling = perf::scaling_check(reports, a.tolerance);
    for (const perf::RatioCheck& c : scaling.checks) {
        char line[200];
        std::snprintf(line, sizeof line,
                      "scaling %s n=%zu->%zu observed=%.4f predicted=%.4f %s\n",
                      c.metric.c_str(), c.n_from, c.n_to, c.observed,
                      c.predicted, c.pass ? "PASS" : "FAIL");
        std::cout << line;
    }
    std::cout << "scaling_check=" << (scaling.all_pass ? "PASS" : "FAIL")
              << "\n";
    return scaling.all_pass ? exit_ok : exit_check_failed;
}

} // namespace

int run_command(const std::vector<std::string>& args) {
    CLI::App app{"polar-code public-key cryptosystem tool"};
    app.require_subcommand(1);

    KeygenArgs keygen_args;
    CLI::App* keygen_cmd = app.add_subcommand("keygen", "generate a key pair");
    keygen_cmd->add_option("--n", keygen_args.n, "block length")->required();
    keygen_cmd->add_option("--k", keygen_args.k, "message length")->required();
    keygen_cmd->add_option("--t", keygen_args.t, "error weight")->required();
    keygen_cmd->add_option("--epsilon", keygen_args.epsilon,
                           "design erasure probability");
    keygen_cmd->add_option("--seed-hex", keygen_args.seed_hex,
                           "64-hex-char keygen seed (default: OS entropy)");
    keygen_cmd->add_option("--window-override", keygen_args.window,
                           "sampling window override (default: rate-limit k0)");
    keygen_cmd->add_option("--pub-out", keygen_args.pub_out, "public key path")
        ->required();
    keygen_cmd->add_option("--sec-out", keygen_args.sec_out, "secret key path")
        ->required();

    EncryptArgs encrypt_args;
    CLI::App* encrypt_cmd = app.add_subcommand("encrypt", "encrypt a file");
    encrypt_cmd->add_option("--pub", encrypt_args.pub_path, "public key path")
        ->required();
    encrypt_cmd->add_option("--in", encrypt_args.in_path, "plaintext path")
        ->required();
    encrypt_cmd->add_option("--out", encrypt_args.out_path, "ciphertext path")
        ->required();
    encrypt_cmd->add_option("--rng-seed-hex", encrypt_args.rng_seed_hex,
                            "64-hex-char error-vector seed (default: OS entropy)");

    DecryptArgs decrypt_args;
    CLI::App* decrypt_cmd = app.add_subcommand("decrypt", "decrypt a file");
    decrypt_cmd->add_option("--sec", decrypt_args.sec_path, "secret key path")
        ->required();
    decrypt_cmd->add_option("--in", decrypt_args.in_path, "ciphertext path")
        ->required();
    decrypt_cmd->add_option("--out", decrypt_args.out_path, "plaintext path")
        ->required();

    BenchArgs bench_args;
    CLI::App* bench_cmd = app.add_subcommand("bench", "run the cost harness");
    auto* preset_opt = bench_cmd->add_option("--preset", bench_args.preset,
                                             "comparison or rate075");
    auto* grid_opt = bench_cmd->add_option("--grid-file", bench_args.grid_file,
                                           "JSON grid of {n,k,t,epsilon} points");
    preset_opt->excludes(grid_opt);
    bench_cmd->add_option("--trials", bench_args.trials, "trials per point")
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("--csv-out", bench_args.csv_out, "CSV report path");
    bench_cmd->add_option("--json-out", bench_args.json_out, "JSON report path");
    bench_cmd->add_option("--rng-seed-hex", bench_args.rng_seed_hex,
                          "64-hex-char run seed (default: OS entropy, echoed)");

    DfrArgs dfr_args;
    CLI::App* dfr_cmd =
        app.add_subcommand("dfr", "decoder failure-rate Monte Carlo");
    dfr_cmd->add_option("--n", dfr_args.n, "block length")->required();
    dfr_cmd->add_option("--k", dfr_args.k, "code dimension")->required();
    dfr_cmd->add_option("--epsilon", dfr_args.epsilon, "erasure probability");
    dfr_cmd->add_option("--trials", dfr_args.trials, "Monte Carlo trials")
        ->check(CLI::PositiveNumber);
    dfr_cmd->add_option("--rng-seed-hex", dfr_args.rng_seed_hex,
                        "64-hex-char run seed (default: OS entropy, echoed)");

    AnalyzeArgs analyze_args;
    CLI::App* analyze_cmd =
        app.add_subcommand("analyze", "check scaling claims in a JSON report");
    analyze_cmd->add_option("--reports", analyze_args.reports_path,
                            "JSON report path")
        ->required();
    analyze_cmd->add_flag("--scaling-check",
                          "check counter growth against the complexity claims "
                          "(the default and only analysis)");
    analyze_cmd->add_option("--tolerance", analyze_args.tolerance,
                            "relative ratio tolerance");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (keygen_cmd->parsed())
            return cmd_keygen(keygen_args);
        if (encrypt_cmd->parsed())
            return cmd_encrypt(encrypt_args);
        if (decrypt_cmd->parsed())
            return cmd_decrypt(decrypt_args);
        if (bench_cmd->parsed()) {
            if (bench_args.preset.empty() && bench_args.grid_file.empty())
                throw ParameterError("bench needs --preset or --grid-file");
            return cmd_bench(bench_args);
        }
        if (dfr_cmd->parsed())
            return cmd_dfr(dfr_args);
        if (analyze_cmd->parsed())
            return cmd_analyze(analyze_args);
        throw ParameterError("no subcommand given");
    } catch (const FramingError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_framing;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_format;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_io;
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return exit_internal;
    }
}

} // namespace pkcpc::cli
