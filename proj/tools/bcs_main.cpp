#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bcs/pipeline.hpp"

namespace {

using bcs::RunConfig;

// --config file.json provides defaults; command-line flags override. Keys
// mirror the long flag names.
void apply_config_file(RunConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw bcs::UsageError("cannot open config file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw bcs::UsageError("config file " + path + ": " + e.what());
    }
    const auto get = [&](const char* key, auto& target) {
        if (j.contains(key)) target = j.at(key).get<std::decay_t<decltype(target)>>();
    };
    get("data", config.data_path);
    get("output", config.output_path);
    get("reference", config.reference_path);
    get("report", config.report_path);
    get("labels", config.labels_path);
    get("m", config.m);
    get("n", config.n);
    get("s", config.s);
    get("seed", config.seed);
    get("dict", config.dict_spec);
    get("sample-rate-mhz", config.sample_rate_mhz);
    get("algo", config.solver.algo);
    get("max-iters", config.solver.max_iters);
    get("tol", config.solver.tol);
    get("learn-b", config.solver.learn_b);
    get("learn-lambda", config.solver.learn_lambda);
    get("lambda-init", config.solver.lambda_init);
    get("block-step", config.solver.block_step);
    get("rho", config.solver.rho);
    get("k", config.solver.top_k);
    get("ssim-window", config.solver.ssim_window);
    get("kind", config.synth_kind);
    get("epochs", config.epochs);
    get("channels", config.channels);
    get("ar1-coeff", config.ar1_coeff);
    get("active-blocks", config.active_blocks);
    get("jobs", config.jobs);
    if (j.contains("m-grid")) config.m_grid = j.at("m-grid").get<std::vector<bcs::Index>>();
    if (j.contains("algos")) config.algos = j.at("algos").get<std::vector<std::string>>();
    if (j.contains("channels-as")) {
        const std::string v = j.at("channels-as").get<std::string>();
        if (v != "rows" && v != "cols")
            throw bcs::UsageError("config channels-as must be rows or cols");
        config.channels_as_rows = v == "rows";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Compressed-sensing codec for epoched biosignals (BSBL-BO recovery)"};
    app.require_subcommand(1);

    RunConfig config;
    std::string config_path;
    std::string channels_as = "rows";
    std::string rho_spec;
    bcs::Index epoch_len = -1;

    // Config file is applied before flag parsing so flags win.
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
    if (!config_path.empty()) {
        try {
            apply_config_file(config, config_path);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << std::endl;
            return 2;
        }
    }
    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file mirroring the flags");
    };
    const auto add_sensing = [&](CLI::App* cmd) {
        cmd->add_option("--m", config.m, "measurements per epoch");
        cmd->add_option("--n", config.n, "epoch length");
        cmd->add_option("--s", config.s, "ones per sensing-matrix column");
        cmd->add_option("--seed", config.seed, "sensing-matrix seed");
    };
    const auto add_solver = [&](CLI::App* cmd) {
        cmd->add_option("--algo", config.solver.algo, "bsbl | bsbl-no-dict | l1 | topk");
        cmd->add_option("--max-iters", config.solver.max_iters, "solver iteration cap");
        cmd->add_option("--tol", config.solver.tol, "relative change stopping threshold");
        cmd->add_flag("--learn-b,!--no-learn-b", config.solver.learn_b,
                      "learn intra-block correlation");
        cmd->add_flag("--learn-lambda,!--no-learn-lambda", config.solver.learn_lambda,
                      "learn noise variance");
        cmd->add_option("--lambda-init", config.solver.lambda_init,
                        "initial noise variance (default 1e-10*||y||^2/M)");
        cmd->add_option("--block-step", config.solver.block_step, "block partition step");
        cmd->add_option("--rho", rho_spec, "l1 weight: a value, or \"grid\" for oracle tuning");
        cmd->add_option("--k", config.solver.top_k, "kept coefficients for topk");
        cmd->add_option("--ssim-window", config.solver.ssim_window, "SSIM sliding window");
    };
    const auto add_ingest = [&](CLI::App* cmd) {
        cmd->add_option("--channels-as", channels_as, "CSV orientation: rows | cols")
            ->check(CLI::IsMember({"rows", "cols"}));
        cmd->add_option("--epoch-len", epoch_len, "dataset epoch length (default --n)");
    };

    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset CSV");
    synth->add_option("--kind", config.synth_kind, "blocksparse | ar1 | ar2mix");
    synth->add_option("--n", config.n, "epoch length");
    synth->add_option("--epochs", config.epochs, "epochs per channel");
    synth->add_option("--channels", config.channels, "channel count");
    synth->add_option("--seed", config.seed, "generator seed");
    synth->add_option("--ar1-coeff", config.ar1_coeff, "AR(1) coefficient");
    synth->add_option("--active-blocks", config.active_blocks, "blocksparse active blocks");
    synth->add_option("--block-step", config.solver.block_step, "blocksparse block step");
    synth->add_option("--output", config.output_path, "output CSV")->required();

    CLI::App* compress = app.add_subcommand("compress", "compress a dataset into packets");
    compress->add_option("--data", config.data_path, "input CSV")->required();
    compress->add_option("--output", config.output_path, "packet stream file")->required();
    compress->add_option("--dict", config.dict_spec,
                         "identity | dct | wavelet:taps=T:levels=L");
    compress->add_option("--sample-rate-mhz", config.sample_rate_mhz,
                         "sample rate in millihertz, stamped into packets");
    compress->add_flag("--check-rank", config.check_rank,
                       "debug: verify the sensing matrix has full row rank");
    add_sensing(compress);
    add_ingest(compress);

    CLI::App* recover = app.add_subcommand("recover", "recover epochs from a packet stream");
    recover->add_option("--data", config.data_path, "packet stream file")->required();
    recover->add_option("--output", config.output_path, "recovered CSV")->required();
    recover->add_option("--dict", config.dict_override,
                        "override the packet dictionary");
    recover->add_option("--reference", config.reference_path,
                        "reference CSV for quality metrics");
    recover->add_option("--report", config.report_path, "JSON-lines report file");
    recover->add_option("--jobs", config.jobs, "parallel epochs");
    add_solver(recover);
    add_ingest(recover);

    CLI::App* bench = app.add_subcommand("bench", "sweep algorithms and M over a dataset");
    bench->add_option("--data", config.data_path, "reference CSV")->required();
    bench->add_option("--output", config.output_path, "plot-data CSV (default bench_plot.csv)");
    bench->add_option("--report", config.report_path, "JSON-lines report file");
    bench->add_option("--dict", config.dict_spec, "dictionary for bsbl/l1");
    bench->add_option("--m-grid", config.m_grid, "measurement counts to sweep")
        ->delimiter(',');
    bench->add_option("--algos", config.algos, "algorithms to run")->delimiter(',');
    bench->add_option("--jobs", config.jobs, "parallel epochs");
    add_sensing(bench);
    add_solver(bench);
    add_ingest(bench);

    CLI::App* metrics = app.add_subcommand("metrics", "score a recovered dataset");
    metrics->add_option("--data", config.data_path, "recovered CSV")->required();
    metrics->add_option("--reference", config.reference_path, "reference CSV")->required();
    metrics->add_option("--n", config.n, "epoch length");
    metrics->add_option("--labels", config.labels_path, "sidecar event labels CSV");
    metrics->add_option("--report", config.report_path, "JSON-lines report file");
    metrics->add_option("--ssim-window", config.solver.ssim_window, "SSIM sliding window");
    metrics->add_option("--channels-as", channels_as, "CSV orientation: rows | cols")
        ->check(CLI::IsMember({"rows", "cols"}));

    for (CLI::App* sub : {synth, compress, recover, bench, metrics}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
            e.get_name() == "CallForVersion")
            return app.exit(e);
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    }

    config.channels_as_rows = channels_as == "rows";
    if (!rho_spec.empty()) {
        if (rho_spec == "grid") {
            config.solver.rho = -1;
        } else {
            try {
                std::size_t used = 0;
                config.solver.rho = std::stod(rho_spec, &used);
                if (used != rho_spec.size() || config.solver.rho <= 0)
                    throw std::invalid_argument(rho_spec);
            } catch (const std::exception&) {
                std::cerr << "error: --rho expects a positive value or \"grid\", got \""
                          << rho_spec << "\"" << std::endl;
                return 2;
            }
        }
    }
    if (epoch_len >= 0) {
        const bool n_given = compress->count("--n") > 0 || bench->count("--n") > 0;
        if (!n_given)
            config.n = epoch_len;
        else if (epoch_len != config.n) {
            std::cerr << "error: sensing N=" << config.n << " but --epoch-len is "
                      << epoch_len << "; epochs must match the sensing matrix" << std::endl;
            return 2;
        }
    }
    for (CLI::App* sub : {synth, compress, recover, bench, metrics})
        if (sub->parsed()) config.command = sub->get_name();

    return bcs::run_command_guarded(config);
}
