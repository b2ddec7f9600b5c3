#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

#include <json.hpp>

#include "bcs/telemetry.hpp"

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("bcs_cli_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run_cli(const std::string& args) {
    const std::string command = std::string(BCS_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("cli: full synth/compress/recover/metrics round trip") {
    TempDir dir;
    CHECK(run_cli("synth --kind blocksparse --n 384 --epochs 2 --seed 4 --output " +
                  dir.file("data.csv")) == 0);
    CHECK(run_cli("compress --data " + dir.file("data.csv") +
                  " --m 192 --n 384 --s 15 --seed 1 --dict identity --output " +
                  dir.file("stream.bcs")) == 0);
    CHECK(run_cli("recover --data " + dir.file("stream.bcs") + " --output " +
                  dir.file("rec.csv") + " --max-iters 40 --reference " +
                  dir.file("data.csv") + " --report " + dir.file("report.jsonl")) == 0);

    std::ifstream report(dir.file("report.jsonl"));
    std::string line;
    REQUIRE(std::getline(report, line));
    CHECK(nlohmann::json::parse(line).at("nmse_mean").get<double>() < 1e-6);

    CHECK(run_cli("metrics --data " + dir.file("rec.csv") + " --reference " +
                  dir.file("data.csv") + " --n 384") == 0);
}

TEST_CASE("cli: exit codes for usage and data errors") {
    TempDir dir;
    CHECK(run_cli("") == 2);                       // no subcommand
    CHECK(run_cli("synth") == 2);                  // missing required --output
    CHECK(run_cli("frobnicate --n 2") == 2);       // unknown subcommand
    CHECK(run_cli("synth --kind nope --output " + dir.file("x.csv")) == 2);
    CHECK(run_cli("compress --data " + dir.file("absent.csv") + " --output " +
                  dir.file("y.bcs")) == 3);        // missing input file
    CHECK(run_cli("compress --data " + dir.file("absent.csv") + " --output " +
                  dir.file("y.bcs") + " --epoch-len 256 --n 384") == 2);  // N mismatch
    CHECK(run_cli("--help") == 0);
}

TEST_CASE("cli: l1 recovery accepts a fixed rho or the oracle grid") {
    TempDir dir;
    CHECK(run_cli("synth --kind ar1 --n 128 --epochs 1 --seed 44 --output " +
                  dir.file("data.csv")) == 0);
    CHECK(run_cli("compress --data " + dir.file("data.csv") +
                  " --m 64 --n 128 --s 8 --output " + dir.file("stream.bcs")) == 0);
    CHECK(run_cli("recover --data " + dir.file("stream.bcs") + " --algo l1 --rho 0.5 "
                  "--output " + dir.file("rec.csv")) == 0);
    CHECK(run_cli("recover --data " + dir.file("stream.bcs") + " --algo l1 --rho grid "
                  "--reference " + dir.file("data.csv") + " --output " +
                  dir.file("rec2.csv")) == 0);
    // grid tuning without a reference cannot work
    CHECK(run_cli("recover --data " + dir.file("stream.bcs") + " --algo l1 --rho grid "
                  "--output " + dir.file("rec3.csv")) == 2);
    CHECK(run_cli("recover --data " + dir.file("stream.bcs") + " --algo l1 --rho -2 "
                  "--output " + dir.file("rec4.csv")) == 2);
}

TEST_CASE("cli: corrupt packet stream is a data error") {
    TempDir dir;
    {
        std::ofstream out(dir.file("garbage.bcs"), std::ios::binary);
        out << "XCS1 this is not a packet";
    }
    CHECK(run_cli("recover --data " + dir.file("garbage.bcs") + " --output " +
                  dir.file("rec.csv")) == 3);
}

TEST_CASE("cli: config file provides defaults, flags override") {
    TempDir dir;
    CHECK(run_cli("synth --kind ar1 --n 128 --epochs 2 --seed 6 --output " +
                  dir.file("data.csv")) == 0);
    {
        std::ofstream config(dir.file("config.json"));
        config << R"({"m": 64, "n": 128, "s": 8, "seed": 2, "dict": "dct"})";
    }
    CHECK(run_cli("compress --config " + dir.file("config.json") + " --data " +
                  dir.file("data.csv") + " --output " + dir.file("a.bcs")) == 0);
    const auto a = bcs::read_packet_stream(dir.file("a.bcs"));
    REQUIRE(!a.empty());
    CHECK(a.front().m == 64);
    CHECK(a.front().s == 8);

    // Flag beats config.
    CHECK(run_cli("compress --config " + dir.file("config.json") + " --m 32 --data " +
                  dir.file("data.csv") + " --output " + dir.file("b.bcs")) == 0);
    const auto b = bcs::read_packet_stream(dir.file("b.bcs"));
    REQUIRE(!b.empty());
    CHECK(b.front().m == 32);
}

TEST_CASE("cli: sensing flags flow into packets") {
    TempDir dir;
    CHECK(run_cli("synth --kind ar2mix --n 256 --epochs 1 --seed 10 --output " +
                  dir.file("data.csv")) == 0);
    CHECK(run_cli("compress --data " + dir.file("data.csv") +
                  " --m 128 --n 256 --s 12 --seed 31 --dict wavelet:taps=20:levels=4 "
                  "--sample-rate-mhz 256000 --output " +
                  dir.file("stream.bcs")) == 0);
    const auto packets = bcs::read_packet_stream(dir.file("stream.bcs"));
    REQUIRE(packets.size() == 1);
    CHECK(packets.front().n == 256);
    CHECK(packets.front().m == 128);
    CHECK(packets.front().s == 12);
    CHECK(packets.front().dict_code == 2);
    CHECK(packets.front().wavelet_taps == 20);
    CHECK(packets.front().wavelet_levels == 4);
    CHECK(packets.front().sample_rate_mhz == 256000);

    CHECK(run_cli("recover --data " + dir.file("stream.bcs") + " --output " +
                  dir.file("rec.csv") + " --jobs 2") == 0);
    const auto recovered = bcs::ingest_csv(dir.file("rec.csv"), 256).dataset;
    CHECK(recovered.total_epochs() == 1);
}
