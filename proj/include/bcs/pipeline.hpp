#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bcs/metrics.hpp"
#include "bcs/telemetry.hpp"
#include "bcs/types.hpp"

namespace bcs {

/// Bad flag/config combinations; the CLI maps this to exit code 2.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SolverConfig {
    std::string algo = "bsbl";  // bsbl | bsbl-no-dict | l1 | topk
    int max_iters = 7;
    double tol = 1e-8;
    bool learn_b = true;
    bool learn_lambda = false;
    double lambda_init = -1;  // < 0: 1e-10 ||y||^2 / M
    Index block_step = 24;
    double rho = -1;     // l1 weight; < 0 means oracle grid (needs a reference)
    Index top_k = -1;    // top-K kept coefficients; < 0 means match M
    int ssim_window = 100;
};

struct RunConfig {
    std::string command;  // synth | compress | recover | bench | metrics
    std::string data_path;
    std::string output_path;
    std::string reference_path;
    std::string report_path;
    std::string labels_path;

    // sensing + dictionary
    Index m = 192;
    Index n = 384;
    int s = 15;
    std::uint64_t seed = 1;
    std::string dict_spec = "dct";
    std::string dict_override;  // recover: non-empty replaces the packet's dictionary
    std::uint32_t sample_rate_mhz = 0;

    SolverConfig solver;

    // synth
    std::string synth_kind = "ar1";
    Index epochs = 80;
    Index channels = 1;
    double ar1_coeff = 0.95;
    int active_blocks = 3;

    // ingest
    bool channels_as_rows = true;

    bool check_rank = false;  // debug: verify Phi has full row rank

    // bench
    std::vector<Index> m_grid;
    std::vector<std::string> algos;

    int jobs = 1;
};

/// One benchmark / recovery report cell, serialized as a JSON line.
struct ReportRecord {
    std::string algo;
    std::string dict;
    Index m = 0;
    Index n = 0;
    std::uint64_t seed = 0;
    QualityReport quality;
    std::string to_json() const;
};

int run_synth(const RunConfig& config);
int run_compress(const RunConfig& config);
int run_recover(const RunConfig& config);
int run_bench(const RunConfig& config);
int run_metrics(const RunConfig& config);

/// Dispatch on config.command; returns the process exit code.
int run_command(const RunConfig& config);

/// Exception-to-exit-code policy: 0 ok, 2 usage, 3 data, 4 numerical.
int run_command_guarded(const RunConfig& config);

}  // namespace bcs
