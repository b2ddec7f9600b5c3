#include "bcs/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "bcs/baselines.hpp"
#include "bcs/bsbl.hpp"
#include "bcs/dictionary.hpp"
#include "bcs/sensing.hpp"
#include "bcs/synth.hpp"

namespace bcs {
namespace {

using nlohmann::json;

void parallel_for(Index count, int jobs, const std::function<void(Index)>& body) {
    if (jobs <= 1 || count <= 1) {
        for (Index i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<Index> cursor{0};
    std::vector<std::thread> workers;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const int threads = static_cast<int>(std::min<Index>(jobs, count));
    for (int t = 0; t < threads; ++t)
        workers.emplace_back([&] {
            for (;;) {
                const Index i = cursor.fetch_add(1);
                if (i >= count) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        });
    for (auto& worker : workers) worker.join();
    if (failure) std::rethrow_exception(failure);
}

struct DictCodes {
    std::uint8_t code = 0;
    std::uint8_t taps = 0;
    std::uint8_t levels = 0;
};

DictCodes dict_codes_from_spec(const std::string& spec, Index n) {
    const Dictionary dict = dictionary_from_spec(spec, n);  // validates spec for this N
    return {static_cast<std::uint8_t>(dict.kind), static_cast<std::uint8_t>(dict.taps),
            static_cast<std::uint8_t>(dict.levels)};
}

Dictionary dictionary_from_codes(const DictCodes& codes, Index n) {
    switch (codes.code) {
        case 0: return build_identity(n);
        case 1: return build_dct(n);
        case 2: return build_wavelet(n, codes.taps, codes.levels);
        default:
            throw std::runtime_error("unknown dictionary code " +
                                     std::to_string(codes.code) + " in packet");
    }
}

std::string dict_name(const Dictionary& dict) {
    return dictionary_spec_string(dict.kind, dict.taps, dict.levels);
}

BsblOptions bsbl_options(const SolverConfig& solver) {
    BsblOptions opts;
    opts.max_iters = solver.max_iters;
    opts.tol = solver.tol;
    opts.learn_correlation = solver.learn_b;
    opts.learn_noise = solver.learn_lambda;
    if (solver.lambda_init >= 0) opts.lambda_init = solver.lambda_init;
    return opts;
}

// Best-NMSE l1 solution over the rho grid ("parameters tuned for optimal
// results": the baseline is reported at its best).
Vec l1_oracle_recover(const Vec& y, const Mat& theta, const Dictionary& dict,
                      const Vec& reference) {
    L1Options opts;
    std::vector<double> grid = l1_rho_grid(y, theta);
    std::sort(grid.rbegin(), grid.rend());
    Vec best;
    double best_nmse = std::numeric_limits<double>::infinity();
    for (double rho : grid) {
        opts.rho = rho;
        const L1Result result = l1_recover(y, theta, opts);
        const Vec x = dict.synthesize(result.coeffs);
        const double err = nmse(x, reference);
        if (err < best_nmse) {
            best_nmse = err;
            best = x;
        }
    }
    return best;
}

struct EpochSolve {
    Vec signal;
    double seconds = 0;
};

// One epoch through the selected algorithm. `reference` may be empty except
// for the oracle-tuned l1 and topk paths.
EpochSolve solve_epoch(const std::string& algo, const Vec& y, const Mat& theta,
                       const Dictionary& dict, const BlockPartition& partition,
                       const SolverConfig& solver, const Vec& reference) {
    const auto start = std::chrono::steady_clock::now();
    EpochSolve out;
    if (algo == "bsbl" || algo == "bsbl-no-dict") {
        out.signal = recover(y, theta, partition, bsbl_options(solver), dict).signal;
    } else if (algo == "l1") {
        if (solver.rho >= 0) {
            L1Options opts;
            opts.rho = solver.rho;
            out.signal = dict.synthesize(l1_recover(y, theta, opts).coeffs);
        } else {
            if (reference.size() == 0)
                throw UsageError("l1 oracle tuning needs --reference; pass --rho for a fixed weight");
            out.signal = l1_oracle_recover(y, theta, dict, reference);
        }
    } else if (algo == "topk") {
        if (reference.size() == 0)
            throw UsageError("topk operates on the original signal; it needs --reference");
        const Index k = solver.top_k >= 0 ? solver.top_k : std::min(theta.rows(), dict.n);
        out.signal = wavelet_topk(reference, dict, k);
    } else {
        throw UsageError("unknown algorithm \"" + algo +
                         "\" (bsbl, bsbl-no-dict, l1, topk)");
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

void emit_report(const ReportRecord& record, const std::string& report_path) {
    const std::string line = record.to_json();
    if (!report_path.empty()) {
        std::ofstream out(report_path, std::ios::app);
        if (!out) throw std::runtime_error("cannot open report file " + report_path);
        out << line << '\n';
    }
    std::cout << line << std::endl;
}

EpochedDataset ingest_or_warn(const std::string& path, Index epoch_length,
                              bool channels_as_rows) {
    IngestResult result = ingest_csv(path, epoch_length, channels_as_rows);
    if (result.dropped_samples > 0)
        std::cerr << "warning: dropped " << result.dropped_samples
                  << " trailing samples per channel (epoch length " << epoch_length << ")\n";
    return std::move(result.dataset);
}

}  // namespace

std::string ReportRecord::to_json() const {
    json j;
    j["algo"] = algo;
    j["dict"] = dict;
    j["M"] = m;
    j["N"] = n;
    j["seed"] = seed;
    j["nmse_mean"] = quality.nmse_mean();
    j["nmse_std"] = quality.nmse_std();
    j["ssim_mean"] = quality.ssim_mean();
    j["ssim_std"] = quality.ssim_std();
    j["seconds_per_epoch"] = quality.seconds_per_epoch;
    j["ssim_aggregation"] = "mean_per_epoch";  // per-epoch SSIM averaged over epochs
    return j.dump();
}

int run_synth(const RunConfig& config) {
    if (config.output_path.empty()) throw UsageError("synth: --output is required");
    SynthOptions opts;
    opts.epoch_length = config.n;
    opts.epochs = config.epochs;
    opts.channels = config.channels;
    opts.seed = config.seed;
    opts.block_step = config.solver.block_step;
    opts.active_blocks = config.active_blocks;
    opts.ar1_coeff = config.ar1_coeff;
    const EpochedDataset dataset = synth_dataset(synth_kind_from_string(config.synth_kind), opts);
    write_csv(dataset, config.output_path);
    std::cout << "synth: wrote " << dataset.channels << " channel(s) x "
              << dataset.epochs_per_channel << " epoch(s) x " << dataset.epoch_length
              << " samples to " << config.output_path << std::endl;
    return 0;
}

int run_compress(const RunConfig& config) {
    if (config.data_path.empty()) throw UsageError("compress: --data is required");
    if (config.output_path.empty()) throw UsageError("compress: --output is required");
    if (config.n > 0xFFFF || config.m > 0xFFFF || config.s > 0xFF)
        throw UsageError("compress: M/N/s exceed packet field ranges");

    const EpochedDataset dataset =
        ingest_or_warn(config.data_path, config.n, config.channels_as_rows);
    if (dataset.channels > 0 && dataset.epoch_length != config.n)
        throw UsageError("compress: sensing N=" + std::to_string(config.n) +
                         " but dataset epochs have length " +
                         std::to_string(dataset.epoch_length));
    if (dataset.channels > 0xFFFF)
        throw UsageError("compress: too many channels for the packet header");

    std::vector<CompressedPacket> packets;
    std::size_t bytes = 0;
    if (dataset.channels > 0) {
        const DictCodes codes = dict_codes_from_spec(config.dict_spec, config.n);
        const SensingMatrix phi = generate_sensing(config.m, config.n, config.s, config.seed);
        if (config.check_rank && !has_full_row_rank(phi))
            throw std::runtime_error("compress: sensing matrix is row-rank deficient");
        packets.reserve(static_cast<std::size_t>(dataset.total_epochs()));
        for (Index ch = 0; ch < dataset.channels; ++ch)
            for (Index ep = 0; ep < dataset.epochs_per_channel; ++ep) {
                const Vec y = apply_sensing(phi, dataset.epoch(ch, ep));
                CompressedPacket packet;
                packet.n = static_cast<std::uint16_t>(config.n);
                packet.m = static_cast<std::uint16_t>(config.m);
                packet.s = static_cast<std::uint8_t>(config.s);
                packet.matrix_seed = phi.seed;
                packet.dict_code = codes.code;
                packet.wavelet_taps = codes.taps;
                packet.wavelet_levels = codes.levels;
                packet.channel = static_cast<std::uint16_t>(ch);
                packet.epoch_index = static_cast<std::uint32_t>(ep);
                packet.sample_rate_mhz = config.sample_rate_mhz;
                packet.payload.resize(static_cast<std::size_t>(y.size()));
                for (Index i = 0; i < y.size(); ++i)
                    packet.payload[static_cast<std::size_t>(i)] = static_cast<float>(y[i]);
                bytes += packet_size_bytes(packet.payload.size());
                packets.push_back(std::move(packet));
            }
    }
    write_packet_stream(config.output_path, packets);
    std::cout << "compress: wrote " << packets.size() << " packet(s), " << bytes
              << " bytes to " << config.output_path << std::endl;
    return 0;
}

int run_recover(const RunConfig& config) {
    if (config.data_path.empty()) throw UsageError("recover: --data is required");
    if (config.output_path.empty()) throw UsageError("recover: --output is required");
    const std::string algo = config.solver.algo;
    if (algo == "topk")
        throw UsageError("recover: topk is not a packet-recovery algorithm (see bench)");

    std::vector<CompressedPacket> packets;
    try {
        packets = read_packet_stream(config.data_path);
    } catch (const DecodeError& e) {
        throw std::runtime_error(std::string("recover: ") + e.what());
    }
    if (packets.empty()) {
        write_csv(EpochedDataset{}, config.output_path);
        std::cout << "recover: 0 packets in " << config.data_path << std::endl;
        return 0;
    }

    const CompressedPacket& first = packets.front();
    Index channels = 0, epochs = 0;
    for (std::size_t i = 0; i < packets.size(); ++i) {
        const auto& p = packets[i];
        if (p.n != first.n || p.m != first.m || p.s != first.s ||
            p.matrix_seed != first.matrix_seed || p.dict_code != first.dict_code ||
            p.wavelet_taps != first.wavelet_taps || p.wavelet_levels != first.wavelet_levels)
            throw std::runtime_error("recover: packet " + std::to_string(i) +
                                     " disagrees with the stream header fields");
        channels = std::max<Index>(channels, p.channel + 1);
        epochs = std::max<Index>(epochs, static_cast<Index>(p.epoch_index) + 1);
    }

    const Index n = first.n;
    // Receiver-side reconstruction context, regenerated from packet fields only.
    const SensingMatrix phi = generate_sensing(first.m, n, first.s, first.matrix_seed);
    Dictionary dict;
    if (algo == "bsbl-no-dict")
        dict = build_identity(n);
    else if (!config.dict_override.empty())
        dict = dictionary_from_spec(config.dict_override, n);
    else
        dict = dictionary_from_codes(
            {first.dict_code, first.wavelet_taps, first.wavelet_levels}, n);
    const Mat theta = compose(phi, dict);
    const BlockPartition partition = default_partition(n, config.solver.block_step);

    EpochedDataset recovered;
    recovered.channels = channels;
    recovered.epochs_per_channel = epochs;
    recovered.epoch_length = n;
    recovered.samples.assign(static_cast<std::size_t>(channels * epochs * n), 0.0f);

    std::optional<EpochedDataset> reference;
    if (!config.reference_path.empty()) {
        reference = ingest_or_warn(config.reference_path, n, config.channels_as_rows);
        if (reference->channels < channels || reference->epochs_per_channel < epochs)
            throw std::runtime_error("recover: reference dataset smaller than packet stream");
    }

    std::vector<double> seconds(packets.size(), 0.0);
    std::vector<double> nmse_per_epoch(packets.size(), 0.0);
    std::vector<double> ssim_per_epoch(packets.size(), 0.0);

    parallel_for(static_cast<Index>(packets.size()), config.jobs, [&](Index i) {
        const CompressedPacket& packet = packets[static_cast<std::size_t>(i)];
        Vec y(packet.m);
        for (std::size_t k = 0; k < packet.payload.size(); ++k)
            y[static_cast<Index>(k)] = static_cast<double>(packet.payload[k]);
        Vec ref;
        if (reference) ref = reference->epoch(packet.channel, packet.epoch_index);
        const EpochSolve solve =
            solve_epoch(algo, y, theta, dict, partition, config.solver, ref);
        recovered.set_epoch(packet.channel, packet.epoch_index, solve.signal);
        seconds[static_cast<std::size_t>(i)] = solve.seconds;
        if (reference) {
            nmse_per_epoch[static_cast<std::size_t>(i)] = nmse(solve.signal, ref);
            ssim_per_epoch[static_cast<std::size_t>(i)] =
                ssim_1d(solve.signal, ref, config.solver.ssim_window);
        }
    });

    write_csv(recovered, config.output_path);
    std::cout << "recover: wrote " << packets.size() << " epoch(s) to "
              << config.output_path << std::endl;

    if (reference) {
        ReportRecord record;
        record.algo = algo;
        record.dict = dict_name(dict);
        record.m = first.m;
        record.n = n;
        record.seed = first.matrix_seed;
        record.quality.nmse_per_epoch = std::move(nmse_per_epoch);
        record.quality.ssim_per_epoch = std::move(ssim_per_epoch);
        record.quality.seconds_per_epoch = QualityReport::mean(seconds);
        emit_report(record, config.report_path);
    }
    return 0;
}

int run_bench(const RunConfig& config) {
    if (config.data_path.empty()) throw UsageError("bench: --data (reference dataset) is required");
    const EpochedDataset reference =
        ingest_or_warn(config.data_path, config.n, config.channels_as_rows);
    if (reference.channels == 0) throw std::runtime_error("bench: empty reference dataset");
    const Index n = reference.epoch_length;
    const Index total = reference.total_epochs();

    std::vector<Index> m_grid = config.m_grid;
    if (m_grid.empty()) m_grid = {config.m};
    std::vector<std::string> algos = config.algos;
    if (algos.empty()) algos = {"bsbl", "bsbl-no-dict", "l1", "topk"};

    const std::string plot_path =
        config.output_path.empty() ? "bench_plot.csv" : config.output_path;
    std::ofstream plot(plot_path);
    if (!plot) throw std::runtime_error("bench: cannot open " + plot_path);
    plot << "algo,dict,M,N,ratio,nmse_mean,nmse_std,ssim_mean,ssim_std,seconds_per_epoch\n";

    const BlockPartition partition = default_partition(n, config.solver.block_step);

    for (Index m : m_grid) {
        const SensingMatrix phi = generate_sensing(m, n, config.s, config.seed);
        // Measurements quantized to float32, matching the wire format.
        std::vector<Vec> measurements(static_cast<std::size_t>(total));
        for (Index ch = 0; ch < reference.channels; ++ch)
            for (Index ep = 0; ep < reference.epochs_per_channel; ++ep) {
                const Index slot = ch * reference.epochs_per_channel + ep;
                Vec y = apply_sensing(phi, reference.epoch(ch, ep));
                for (Index k = 0; k < y.size(); ++k) y[k] = static_cast<double>(static_cast<float>(y[k]));
                measurements[static_cast<std::size_t>(slot)] = std::move(y);
            }

        for (const std::string& algo : algos) {
            Dictionary dict;
            if (algo == "bsbl-no-dict") {
                dict = build_identity(n);
            } else if (algo == "topk") {
                // topk is only defined for wavelet synthesis; skip when N
                // does not admit one (e.g. N not a power of two).
                try {
                    dict = config.dict_spec.rfind("wavelet", 0) == 0
                               ? dictionary_from_spec(config.dict_spec, n)
                               : build_wavelet(n);
                } catch (const std::invalid_argument& e) {
                    std::cerr << "bench: skipping topk at N=" << n << ": " << e.what() << "\n";
                    continue;
                }
            } else {
                dict = dictionary_from_spec(config.dict_spec, n);
            }
            const Mat theta = compose(phi, dict);

            QualityReport quality;
            quality.nmse_per_epoch.resize(static_cast<std::size_t>(total));
            quality.ssim_per_epoch.resize(static_cast<std::size_t>(total));
            std::vector<double> seconds(static_cast<std::size_t>(total));
            parallel_for(total, config.jobs, [&](Index slot) {
                const Index ch = slot / reference.epochs_per_channel;
                const Index ep = slot % reference.epochs_per_channel;
                const Vec ref = reference.epoch(ch, ep);
                const EpochSolve solve =
                    solve_epoch(algo, measurements[static_cast<std::size_t>(slot)], theta,
                                dict, partition, config.solver, ref);
                quality.nmse_per_epoch[static_cast<std::size_t>(slot)] = nmse(solve.signal, ref);
                quality.ssim_per_epoch[static_cast<std::size_t>(slot)] =
                    ssim_1d(solve.signal, ref, config.solver.ssim_window);
                seconds[static_cast<std::size_t>(slot)] = solve.seconds;
            });
            quality.seconds_per_epoch = QualityReport::mean(seconds);

            ReportRecord record;
            record.algo = algo;
            record.dict = dict_name(dict);
            record.m = m;
            record.n = n;
            record.seed = config.seed;
            record.quality = std::move(quality);
            emit_report(record, config.report_path);
            plot << record.algo << ',' << record.dict << ',' << m << ',' << n << ','
                 << static_cast<double>(m) / static_cast<double>(n) << ','
                 << record.quality.nmse_mean() << ',' << record.quality.nmse_std() << ','
                 << record.quality.ssim_mean() << ',' << record.quality.ssim_std() << ','
                 << record.quality.seconds_per_epoch << '\n';
        }
    }
    std::cout << "bench: plot data written to " << plot_path << std::endl;
    return 0;
}

int run_metrics(const RunConfig& config) {
    if (config.data_path.empty() || config.reference_path.empty())
        throw UsageError("metrics: --data (recovered) and --reference are required");
    const EpochedDataset recovered =
        ingest_or_warn(config.data_path, config.n, config.channels_as_rows);
    const EpochedDataset reference =
        ingest_or_warn(config.reference_path, config.n, config.channels_as_rows);
    if (recovered.channels != reference.channels ||
        recovered.epochs_per_channel != reference.epochs_per_channel ||
        recovered.epoch_length != reference.epoch_length)
        throw std::runtime_error("metrics: recovered and reference shapes differ");
    if (recovered.channels == 0) throw std::runtime_error("metrics: empty datasets");

    QualityReport quality;
    for (Index ch = 0; ch < recovered.channels; ++ch)
        for (Index ep = 0; ep < recovered.epochs_per_channel; ++ep) {
            const Vec ref = reference.epoch(ch, ep);
            const Vec got = recovered.epoch(ch, ep);
            quality.nmse_per_epoch.push_back(nmse(got, ref));
            quality.ssim_per_epoch.push_back(ssim_1d(got, ref, config.solver.ssim_window));
        }

    ReportRecord record;
    record.algo = "external";
    record.dict = config.dict_spec;
    record.m = config.m;
    record.n = recovered.epoch_length;
    record.seed = config.seed;
    record.quality = std::move(quality);

    json j = json::parse(record.to_json());
    if (!config.labels_path.empty()) {
        const auto labels = read_labels_csv(config.labels_path, recovered.epochs_per_channel);
        std::vector<double> erp_nmse, erp_ssim;
        for (Index ch = 0; ch < recovered.channels; ++ch) {
            std::vector<Vec> rec_epochs, ref_epochs;
            std::vector<std::string> epoch_labels;
            for (Index ep = 0; ep < recovered.epochs_per_channel; ++ep) {
                if (labels[static_cast<std::size_t>(ep)].empty()) continue;
                rec_epochs.push_back(recovered.epoch(ch, ep));
                ref_epochs.push_back(reference.epoch(ch, ep));
                epoch_labels.push_back(labels[static_cast<std::size_t>(ep)]);
            }
            const auto rec_erp = erp_average(rec_epochs, epoch_labels);
            const auto ref_erp = erp_average(ref_epochs, epoch_labels);
            for (const auto& [label, ref_mean] : ref_erp) {
                erp_nmse.push_back(nmse(rec_erp.at(label), ref_mean));
                erp_ssim.push_back(
                    ssim_1d(rec_erp.at(label), ref_mean, config.solver.ssim_window));
            }
        }
        j["erp_nmse_mean"] = QualityReport::mean(erp_nmse);
        j["erp_ssim_mean"] = QualityReport::mean(erp_ssim);
    }

    const std::string line = j.dump();
    if (!config.report_path.empty()) {
        std::ofstream out(config.report_path, std::ios::app);
        if (!out) throw std::runtime_error("cannot open report file " + config.report_path);
        out << line << '\n';
    }
    std::cout << line << std::endl;
    return 0;
}

int run_command(const RunConfig& config) {
    if (config.command == "synth") return run_synth(config);
    if (config.command == "compress") return run_compress(config);
    if (config.command == "recover") return run_recover(config);
    if (config.command == "bench") return run_bench(config);
    if (config.command == "metrics") return run_metrics(config);
    throw UsageError("unknown command \"" + config.command + "\"");
}

int run_command_guarded(const RunConfig& config) {
    try {
        return run_command(config);
    } catch (const CholeskyError& e) {
        std::cerr << "numerical failure: " << e.what() << std::endl;
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 3;
    }
}

}  // namespace bcs
