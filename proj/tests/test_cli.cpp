#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <nlohmann/json.hpp>

#include "pkcpc/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = 0;
    std::string out;
    std::string err;
};

RunResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    std::streambuf* old_out = std::cout.rdbuf(out.rdbuf());
    std::streambuf* old_err = std::cerr.rdbuf(err.rdbuf());
    int code = -1;
    try {
        code = pkcpc::cli::run_command(args);
    } catch (...) {
        std::cout.rdbuf(old_out);
        std::cerr.rdbuf(old_err);
        throw;
    }
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
    return RunResult{code, out.str(), err.str()};
}

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        path_ = fs::temp_directory_path() /
                ("pkcpc_test_" + tag + "_" + std::to_string(::getpid()));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string file(const std::string& name) const {
        return (path_ / name).string();
    }

private:
    fs::path path_;
};

std::vector<std::uint8_t> read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& data) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
}

std::vector<std::uint8_t> random_payload(std::size_t len, unsigned seed) {
    std::mt19937 rng(seed);
    std::vector<std::uint8_t> data(len);
    for (auto& b : data)
        b = static_cast<std::uint8_t>(rng());
    return data;
}

const std::string kSeedA(64, 'a');
const std::string kSeedB(64, 'b');
const std::string kSeedC(64, 'c');

} // namespace

TEST_CASE("file pipeline recovers the exact bytes") {
    TempDir dir("pipeline");
    auto message = random_payload(100, 1);
    write_bytes(dir.file("msg.bin"), message);

    auto kg = run({"keygen", "--n", "64", "--k", "20", "--t", "3",
                   "--epsilon", "0.1", "--seed-hex", kSeedA,
                   "--pub-out", dir.file("pub.key"),
                   "--sec-out", dir.file("sec.key")});
    REQUIRE(kg.code == 0);
    CHECK(fs::exists(dir.file("pub.key")));
    CHECK(fs::exists(dir.file("sec.key")));

    auto enc = run({"encrypt", "--pub", dir.file("pub.key"),
                    "--in", dir.file("msg.bin"), "--out", dir.file("ct.bin"),
                    "--rng-seed-hex", kSeedB});
    REQUIRE(enc.code == 0);

    auto dec = run({"decrypt", "--sec", dir.file("sec.key"),
                    "--in", dir.file("ct.bin"), "--out", dir.file("back.bin")});
    REQUIRE(dec.code == 0);
    CHECK(read_bytes(dir.file("back.bin")) == message);

    // an empty plaintext survives the framing too
    write_bytes(dir.file("empty.bin"), {});
    REQUIRE(run({"encrypt", "--pub", dir.file("pub.key"),
                 "--in", dir.file("empty.bin"), "--out", dir.file("ect.bin"),
                 "--rng-seed-hex", kSeedC})
                .code == 0);
    REQUIRE(run({"decrypt", "--sec", dir.file("sec.key"),
                 "--in", dir.file("ect.bin"), "--out", dir.file("eback.bin")})
                .code == 0);
    CHECK(read_bytes(dir.file("eback.bin")).empty());
}

TEST_CASE("keygen is deterministic and never logs the seed") {
    TempDir dir("keydet");
    std::vector<std::string> args{"keygen", "--n", "64", "--k", "20",
                                  "--t", "3", "--epsilon", "0.1",
                                  "--seed-hex", kSeedA,
                                  "--pub-out", dir.file("pub1.key"),
                                  "--sec-out", dir.file("sec1.key")};
    auto first = run(args);
    REQUIRE(first.code == 0);
    CHECK(first.out.find(kSeedA) == std::string::npos);
    CHECK(first.err.find(kSeedA) == std::string::npos);

    args[12] = dir.file("pub2.key");
    args[14] = dir.file("sec2.key");
    REQUIRE(run(args).code == 0);
    CHECK(read_bytes(dir.file("pub1.key")) == read_bytes(dir.file("pub2.key")));
    CHECK(read_bytes(dir.file("sec1.key")) == read_bytes(dir.file("sec2.key")));

    // a rate-limit-exceeding k warns on stderr but still succeeds
    auto warn = run({"keygen", "--n", "64", "--k", "40", "--t", "2",
                     "--epsilon", "0.1", "--seed-hex", kSeedA,
                     "--window-override", "64",
                     "--pub-out", dir.file("pub3.key"),
                     "--sec-out", dir.file("sec3.key")});
    REQUIRE(warn.code == 0);
    CHECK(warn.err.find("rate limit") != std::string::npos);
    CHECK(warn.err.find(kSeedA) == std::string::npos);
}

TEST_CASE("usage errors") {
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"keygen", "--n", "64"}).code == 1);  // missing required flags
    TempDir dir("usage");
    CHECK(run({"keygen", "--n", "64", "--k", "20", "--t", "3",
               "--seed-hex", "zz",
               "--pub-out", dir.file("p"), "--sec-out", dir.file("s")})
              .code == 1);
    CHECK(run({"keygen", "--n", "63", "--k", "20", "--t", "3",
               "--pub-out", dir.file("p"), "--sec-out", dir.file("s")})
              .code == 1);
    CHECK(run({"bench", "--trials", "3"}).code == 1);  // no preset/grid
    CHECK(run({"bench", "--preset", "bogus", "--trials", "3"}).code == 1);
}

TEST_CASE("io and format errors") {
    TempDir dir("errors");
    auto message = random_payload(10, 2);
    write_bytes(dir.file("msg.bin"), message);
    REQUIRE(run({"keygen", "--n", "64", "--k", "20", "--t", "3",
                 "--epsilon", "0.1", "--seed-hex", kSeedA,
                 "--pub-out", dir.file("pub.key"),
                 "--sec-out", dir.file("sec.key")})
                .code == 0);

    // missing input files
    CHECK(run({"encrypt", "--pub", dir.file("nope.key"),
               "--in", dir.file("msg.bin"), "--out", dir.file("ct.bin")})
              .code == 2);
    CHECK(run({"decrypt", "--sec", dir.file("sec.key"),
               "--in", dir.file("nope.bin"), "--out", dir.file("x.bin")})
              .code == 2);

    // corrupted key: flipped magic
    auto pub = read_bytes(dir.file("pub.key"));
    pub[0] = 'X';
    write_bytes(dir.file("bad.key"), pub);
    CHECK(run({"encrypt", "--pub", dir.file("bad.key"),
               "--in", dir.file("msg.bin"), "--out", dir.file("ct.bin")})
              .code == 3);

    // truncated secret key
    auto sec = read_bytes(dir.file("sec.key"));
    sec.resize(sec.size() - 2);
    write_bytes(dir.file("cut.key"), sec);
    REQUIRE(run({"encrypt", "--pub", dir.file("pub.key"),
                 "--in", dir.file("msg.bin"), "--out", dir.file("ct.bin"),
                 "--rng-seed-hex", kSeedB})
                .code == 0);
    CHECK(run({"decrypt", "--sec", dir.file("cut.key"),
               "--in", dir.file("ct.bin"), "--out", dir.file("x.bin")})
              .code == 3);

    // ciphertext with trailing bytes
    auto ct = read_bytes(dir.file("ct.bin"));
    ct.push_back(0);
    write_bytes(dir.file("long.bin"), ct);
    CHECK(run({"decrypt", "--sec", dir.file("sec.key"),
               "--in", dir.file("long.bin"), "--out", dir.file("x.bin")})
              .code == 3);

    // key with different parameters than the ciphertext
    REQUIRE(run({"keygen", "--n", "128", "--k", "20", "--t", "3",
                 "--epsilon", "0.1", "--seed-hex", kSeedA,
                 "--pub-out", dir.file("pub128.key"),
                 "--sec-out", dir.file("sec128.key")})
                .code == 0);
    CHECK(run({"decrypt", "--sec", dir.file("sec128.key"),
               "--in", dir.file("ct.bin"), "--out", dir.file("x.bin")})
              .code == 3);
}

TEST_CASE("wrong secret key is detected") {
    TempDir dir("wrongkey");
    auto message = random_payload(40, 3);
    write_bytes(dir.file("msg.bin"), message);

    REQUIRE(run({"keygen", "--n", "256", "--k", "64", "--t", "8",
                 "--seed-hex", kSeedA,
                 "--pub-out", dir.file("pubA.key"),
                 "--sec-out", dir.file("secA.key")})
                .code == 0);
    REQUIRE(run({"keygen", "--n", "256", "--k", "64", "--t", "8",
                 "--seed-hex", kSeedB,
                 "--pub-out", dir.file("pubB.key"),
                 "--sec-out", dir.file("secB.key")})
                .code == 0);
    REQUIRE(run({"encrypt", "--pub", dir.file("pubA.key"),
                 "--in", dir.file("msg.bin"), "--out", dir.file("ct.bin"),
                 "--rng-seed-hex", kSeedC})
                .code == 0);

    auto wrong = run({"decrypt", "--sec", dir.file("secB.key"),
                      "--in", dir.file("ct.bin"), "--out", dir.file("x.bin")});
    // the residual check (4) or the framing check (5) must catch it
    CHECK((wrong.code == 4 || wrong.code == 5));
    CHECK_FALSE(fs::exists(dir.file("x.bin")));

    auto right = run({"decrypt", "--sec", dir.file("secA.key"),
                      "--in", dir.file("ct.bin"), "--out", dir.file("y.bin")});
    REQUIRE(right.code == 0);
    CHECK(read_bytes(dir.file("y.bin")) == message);
}

TEST_CASE("bench grid file, outputs and analyze") {
    TempDir dir("bench");
    nlohmann::json grid = {
        {"grid", {{{"n", 64}, {"k", 16}, {"t", 2}, {"epsilon", 0.3}},
                  {{"n", 128}, {"k", 32}, {"t", 2}, {"epsilon", 0.3}}}}};
    {
        std::ofstream out(dir.file("grid.json"));
        out << grid.dump(2);
    }

    auto bench = run({"bench", "--grid-file", dir.file("grid.json"),
                      "--trials", "4", "--rng-seed-hex", kSeedB,
                      "--csv-out", dir.file("bench.csv"),
                      "--json-out", dir.file("bench.json")});
    REQUIRE(bench.code == 0);
    CHECK(bench.err.find("bench_seed=" + kSeedB) != std::string::npos);

    // CSV: header + one row per grid point
    std::ifstream csv(dir.file("bench.csv"));
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(csv, line))
        lines.push_back(line);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0].substr(0, 4) == "n,k,");
    CHECK(lines[1].substr(0, 8) == "64,16,2,");
    CHECK(lines[2].substr(0, 9) == "128,32,2,");

    auto doc = nlohmann::json::parse(std::ifstream(dir.file("bench.json")));
    REQUIRE(doc.contains("reports"));
    CHECK(doc["reports"].size() == 2);

    auto ok = run({"analyze", "--reports", dir.file("bench.json"),
                   "--scaling-check"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("scaling_check=PASS") != std::string::npos);

    // tampered counters break the scaling fit
    doc["reports"][1]["enc_xor_bits"] =
        doc["reports"][1]["enc_xor_bits"].get<std::uint64_t>() * 10;
    {
        std::ofstream out(dir.file("tampered.json"));
        out << doc.dump(2);
    }
    auto bad = run({"analyze", "--reports", dir.file("tampered.json")});
    CHECK(bad.code == 6);
    CHECK(bad.out.find("scaling_check=FAIL") != std::string::npos);

    // single-point reports cannot support the check
    nlohmann::json single;
    single["reports"] = nlohmann::json::array({doc["reports"][0]});
    {
        std::ofstream out(dir.file("single.json"));
        out << single.dump(2);
    }
    CHECK(run({"analyze", "--reports", dir.file("single.json")}).code == 1);

    CHECK(run({"analyze", "--reports", dir.file("missing.json")}).code == 2);
    {
        std::ofstream out(dir.file("garbage.json"));
        out << "{not json";
    }
    CHECK(run({"analyze", "--reports", dir.file("garbage.json")}).code == 3);
}

TEST_CASE("bench presets emit three rows") {
    TempDir dir("preset");
    auto bench = run({"bench", "--preset", "comparison", "--trials", "3",
                      "--rng-seed-hex", kSeedA});
    REQUIRE(bench.code == 0);
    // CSV to stdout when no output files are given
    std::istringstream in(bench.out);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line))
        lines.push_back(line);
    REQUIRE(lines.size() == 4);
    CHECK(lines[1].substr(0, 11) == "256,16,16,0");
    CHECK(lines[2].substr(0, 10) == "512,8,16,0");
    CHECK(lines[3].substr(0, 10) == "1024,4,16,");
}

TEST_CASE("dfr subcommand") {
    auto res = run({"dfr", "--n", "64", "--k", "16", "--epsilon", "0.3",
                    "--trials", "400", "--rng-seed-hex", kSeedC});
    REQUIRE(res.code == 0);
    CHECK(res.err.find("dfr_seed=" + kSeedC) != std::string::npos);
    CHECK(res.out.find("n=64 k=16") != std::string::npos);
    CHECK(res.out.find("empirical_dfr=") != std::string::npos);
    CHECK(res.out.find("union_bound=") != std::string::npos);
    CHECK(res.out.find("within_bound=true") != std::string::npos);

    CHECK(run({"dfr", "--n", "64", "--k", "16", "--trials", "50"}).code == 1);
    CHECK(run({"dfr", "--n", "63", "--k", "16"}).code == 1);
}
