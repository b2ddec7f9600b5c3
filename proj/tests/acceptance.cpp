// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Criteria tied to external datasets (not redistributable) print
// SKIP unless the environment points at local copies:
//   BCS_EEGLAB_CSV    32x30720 CSV, channels as rows   (criterion 5)
//   BCS_ERP_CSV       1x(256*500) CSV                  (criterion 6)
//   BCS_ERP_LABELS    sidecar "epoch_index,label" CSV  (criterion 6)

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <thread>
#include <vector>

#include "bcs/baselines.hpp"
#include "bcs/bsbl.hpp"
#include "bcs/dictionary.hpp"
#include "bcs/metrics.hpp"
#include "bcs/sensing.hpp"
#include "bcs/synth.hpp"
#include "bcs/telemetry.hpp"

using namespace bcs;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& description,
            const std::string& detail) {
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << criterion << ": " << description
              << " (" << detail << ")" << std::endl;
    if (!pass) ++failures;
}

void report_skip(int criterion, const std::string& description, const std::string& reason) {
    std::cout << "SKIP criterion " << criterion << ": " << description << " (" << reason << ")"
              << std::endl;
}

Vec random_vector(Index n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    Vec x(n);
    for (Index i = 0; i < n; ++i) x[i] = 2.0 * rng.next_double() - 1.0;
    return x;
}

Mat random_matrix(Index rows, Index cols, std::uint64_t seed) {
    detail::GaussianStream gauss(seed);
    Mat a(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) a(i, j) = gauss.next();
    return a;
}

Vec blocksparse_coeffs(const BlockPartition& partition, int active, std::uint64_t seed) {
    detail::GaussianStream gauss(seed);
    SplitMix64 picker(seed ^ 0xABCDEF12345ULL);
    Vec z = Vec::Zero(partition.total);
    std::vector<Index> pool(static_cast<std::size_t>(partition.num_blocks()));
    std::iota(pool.begin(), pool.end(), Index(0));
    for (int k = 0; k < active; ++k) {
        const std::uint64_t j =
            picker.next() % static_cast<std::uint64_t>(partition.num_blocks() - k);
        const Index block = pool[j];
        std::swap(pool[j], pool[static_cast<std::size_t>(partition.num_blocks() - 1 - k)]);
        for (Index t = 0; t < partition.block_size(block); ++t)
            z[partition.block_start(block) + t] = gauss.next();
    }
    return z;
}

void parallel_seeds(int count, const std::function<void(int)>& body) {
    const unsigned hardware = std::max(2u, std::thread::hardware_concurrency());
    std::atomic<int> cursor{0};
    std::vector<std::thread> workers;
    for (unsigned t = 0; t < hardware; ++t)
        workers.emplace_back([&] {
            for (;;) {
                const int i = cursor.fetch_add(1);
                if (i >= count) return;
                body(i);
            }
        });
    for (auto& worker : workers) worker.join();
}

// --- criterion 1 -----------------------------------------------------------

void criterion_exact_recovery() {
    const auto start = std::chrono::steady_clock::now();
    const BlockPartition partition = default_partition(384, 24);
    const SensingMatrix phi = generate_sensing(192, 384, 15, 1);
    const Mat theta = compose(phi, build_identity(384));
    std::atomic<int> hits{0};
    parallel_seeds(100, [&](int seed) {
        const Vec truth = blocksparse_coeffs(partition, 3, static_cast<std::uint64_t>(seed));
        const Vec y = theta * truth;
        BsblOptions opts;
        opts.max_iters = 50;
        const RecoveredEpoch out = recover(y, theta, partition, opts);
        if ((out.coeffs - truth).squaredNorm() / truth.squaredNorm() < 1e-6) ++hits;
    });
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(1, hits >= 99 && seconds < 5.0, "exact recovery of block-sparse synth",
           std::to_string(hits.load()) + "/100 seeds under 1e-6, " + std::to_string(seconds) +
               " s");
}

// --- criterion 2 -----------------------------------------------------------

void criterion_cost_monotonicity() {
    int monotone = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Mat theta = random_matrix(64, 128, seed * 11 + 1);
        const Vec y = random_vector(64, seed * 17 + 3);
        BsblOptions opts;
        opts.max_iters = 12;
        opts.tol = 0;
        opts.learn_correlation = false;
        opts.learn_noise = false;
        const RecoveredEpoch out = recover(y, theta, default_partition(128, 24), opts);
        bool ok = true;
        for (std::size_t k = 1; k < out.state.cost_history.size(); ++k)
            ok = ok && out.state.cost_history[k] <= out.state.cost_history[k - 1] + 1e-9;
        monotone += ok;
    }
    report(2, monotone == 100, "cost history non-increasing with learning off",
           std::to_string(monotone) + "/100 problems monotone within 1e-9");
}

// --- criterion 3 -----------------------------------------------------------

void criterion_woodbury() {
    int agree = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Mat theta = random_matrix(20, 40, seed + 300);
        const Vec y = random_vector(20, seed + 700);
        const BlockPartition partition = default_partition(40, 8);
        SplitMix64 rng(seed + 4000);
        bool ok = true;
        BsblOptions opts;
        opts.max_iters = 2;
        opts.tol = 0;
        opts.lambda_init = 0.01 + rng.next_double();
        opts.iteration_callback = [&](const BsblState& state) {
            if (state.gamma.minCoeff() < 1e-6) return;
            Mat sigma0 = Mat::Zero(40, 40);
            for (Index i = 0; i < partition.num_blocks(); ++i) {
                const Index start = partition.block_start(i);
                const Index size = partition.block_size(i);
                sigma0.block(start, start, size, size) =
                    state.gamma[i] * toeplitz_correlation(state.corr, size);
            }
            const Vec oracle = posterior_mean_oracle(y, theta, sigma0, state.lambda);
            ok = ok && (state.mu - oracle).norm() <= 1e-8 * std::max(oracle.norm(), 1e-30);
        };
        recover(y, theta, partition, opts);
        agree += ok;
    }
    report(3, agree == 100, "posterior mean matches the Woodbury oracle",
           std::to_string(agree) + "/100 instances within 1e-8 relative");
}

// --- criterion 4 -----------------------------------------------------------

void criterion_nonsparse_superiority() {
    SynthOptions synth_opts;
    synth_opts.epoch_length = 384;
    synth_opts.epochs = 100;
    synth_opts.seed = 7;
    synth_opts.ar1_coeff = 0.95;
    const EpochedDataset data = synth_dataset(SynthKind::ar1, synth_opts);
    const SensingMatrix phi = generate_sensing(192, 384, 15, 1);
    const Dictionary dict = build_dct(384);
    const Mat theta = compose(phi, dict);
    const BlockPartition partition = default_partition(384, 24);

    std::atomic<int> bsbl_wins{0};
    std::vector<double> bsbl_nmse(100), l1_nmse(100);
    parallel_seeds(100, [&](int ep) {
        const Vec x = data.epoch(0, ep);
        Vec y = apply_sensing(phi, x);
        for (Index k = 0; k < y.size(); ++k)
            y[k] = static_cast<double>(static_cast<float>(y[k]));

        BsblOptions opts;
        opts.max_iters = 7;
        const Vec bsbl_hat = recover(y, theta, partition, opts, dict).signal;
        const double bsbl_err = nmse(bsbl_hat, x);

        double l1_err = std::numeric_limits<double>::infinity();
        L1Options l1_opts;
        for (double rho : l1_rho_grid(y, theta)) {
            l1_opts.rho = rho;
            const Vec l1_hat = dict.synthesize(l1_recover(y, theta, l1_opts).coeffs);
            l1_err = std::min(l1_err, nmse(l1_hat, x));
        }
        bsbl_nmse[static_cast<std::size_t>(ep)] = bsbl_err;
        l1_nmse[static_cast<std::size_t>(ep)] = l1_err;
        if (bsbl_err < l1_err) ++bsbl_wins;
    });
    const double bsbl_mean = QualityReport::mean(bsbl_nmse);
    const double l1_mean = QualityReport::mean(l1_nmse);
    report(4, bsbl_wins >= 90, "BSBL-BO beats oracle-tuned l1 on non-sparse ar1 epochs",
           std::to_string(bsbl_wins.load()) + "/100 epochs, mean NMSE " +
               std::to_string(bsbl_mean) + " vs " + std::to_string(l1_mean));
}

// --- criterion 5 (conditional) ---------------------------------------------

void criterion_eeglab() {
    const char* path = std::getenv("BCS_EEGLAB_CSV");
    if (!path) {
        report_skip(5, "EEGLab reproduction", "set BCS_EEGLAB_CSV to run");
        return;
    }
    const EpochedDataset data = ingest_csv(path, 384).dataset;
    const SensingMatrix phi = generate_sensing(192, 384, 15, 1);
    const BlockPartition partition = default_partition(384, 24);
    const Dictionary dct = build_dct(384);
    const Dictionary identity = build_identity(384);
    const Mat theta_dct = compose(phi, dct);
    const Mat theta_id = compose(phi, identity);

    const Index total = data.total_epochs();
    std::vector<double> nmse_dct(static_cast<std::size_t>(total));
    std::vector<double> ssim_dct(static_cast<std::size_t>(total));
    std::vector<double> nmse_id(static_cast<std::size_t>(total));
    parallel_seeds(static_cast<int>(total), [&](int slot) {
        const Index ch = slot / data.epochs_per_channel;
        const Index ep = slot % data.epochs_per_channel;
        const Vec x = data.epoch(ch, ep);
        Vec y = apply_sensing(phi, x);
        for (Index k = 0; k < y.size(); ++k)
            y[k] = static_cast<double>(static_cast<float>(y[k]));
        BsblOptions opts;
        opts.max_iters = 7;
        const Vec xh = recover(y, theta_dct, partition, opts, dct).signal;
        nmse_dct[static_cast<std::size_t>(slot)] = nmse(xh, x);
        ssim_dct[static_cast<std::size_t>(slot)] = ssim_1d(xh, x, 100);
        const Vec xh_id = recover(y, theta_id, partition, opts, identity).signal;
        nmse_id[static_cast<std::size_t>(slot)] = nmse(xh_id, x);
    });
    const double nmse_mean = QualityReport::mean(nmse_dct);
    const double ssim_mean = QualityReport::mean(ssim_dct);
    const double nmse_id_mean = QualityReport::mean(nmse_id);
    const bool pass = nmse_mean >= 0.05 && nmse_mean <= 0.12 && ssim_mean >= 0.80 &&
                      nmse_id_mean >= 0.08 && nmse_id_mean <= 0.16;
    report(5, pass, "EEGLab reproduction",
           "dct NMSE " + std::to_string(nmse_mean) + ", SSIM " + std::to_string(ssim_mean) +
               ", identity NMSE " + std::to_string(nmse_id_mean));
}

// --- criterion 6 (conditional) ---------------------------------------------

void criterion_erp() {
    const char* path = std::getenv("BCS_ERP_CSV");
    const char* labels_path = std::getenv("BCS_ERP_LABELS");
    if (!path || !labels_path) {
        report_skip(6, "Experiment-2 ERP reproduction",
                    "set BCS_ERP_CSV and BCS_ERP_LABELS to run");
        return;
    }
    const EpochedDataset data = ingest_csv(path, 256).dataset;
    const auto labels = read_labels_csv(labels_path, data.epochs_per_channel);
    const SensingMatrix phi = generate_sensing(128, 256, 15, 1);
    const Dictionary wavelet = build_wavelet(256, 20, 4);
    const Mat theta = compose(phi, wavelet);
    const BlockPartition partition = default_partition(256, 24);

    const Index epochs = data.epochs_per_channel;
    std::vector<Vec> recovered(static_cast<std::size_t>(epochs));
    std::vector<Vec> topk_hat(static_cast<std::size_t>(epochs));
    parallel_seeds(static_cast<int>(epochs), [&](int ep) {
        const Vec x = data.epoch(0, ep);
        Vec y = apply_sensing(phi, x);
        for (Index k = 0; k < y.size(); ++k)
            y[k] = static_cast<double>(static_cast<float>(y[k]));
        BsblOptions opts;
        opts.max_iters = 7;
        recovered[static_cast<std::size_t>(ep)] = recover(y, theta, partition, opts, wavelet).signal;
        topk_hat[static_cast<std::size_t>(ep)] = wavelet_topk(x, wavelet, 128);
    });

    std::vector<Vec> reference(static_cast<std::size_t>(epochs));
    for (Index ep = 0; ep < epochs; ++ep) reference[static_cast<std::size_t>(ep)] = data.epoch(0, ep);
    const auto ref_erp = erp_average(reference, labels);
    const auto bsbl_erp = erp_average(recovered, labels);
    const auto topk_erp = erp_average(topk_hat, labels);

    double worst_bsbl_ssim = 1, worst_topk_ssim = 1, worst_bsbl_nmse = 0;
    for (const auto& [label, ref] : ref_erp) {
        worst_bsbl_ssim = std::min(worst_bsbl_ssim, ssim_1d(bsbl_erp.at(label), ref, 100));
        worst_bsbl_nmse = std::max(worst_bsbl_nmse, nmse(bsbl_erp.at(label), ref));
        worst_topk_ssim = std::min(worst_topk_ssim, ssim_1d(topk_erp.at(label), ref, 100));
    }
    const bool pass =
        worst_bsbl_ssim >= 0.95 && worst_bsbl_nmse <= 0.02 && worst_topk_ssim >= 0.98;
    report(6, pass, "Experiment-2 ERP reproduction",
           "BSBL ERP SSIM " + std::to_string(worst_bsbl_ssim) + ", NMSE " +
               std::to_string(worst_bsbl_nmse) + ", topk ERP SSIM " +
               std::to_string(worst_topk_ssim));
}

// --- criterion 7 -----------------------------------------------------------

void criterion_metric_identities() {
    const Vec x = random_vector(384, 123);
    bool pass = nmse(x, x) == 0.0;
    pass = pass && nmse(Vec::Zero(384).eval(), x) == 1.0;
    pass = pass && nmse((2.0 * x).eval(), x) == 1.0;
    pass = pass && ssim_1d(x, x, 100) == 1.0;
    const Vec xhat = random_vector(384, 321);
    pass = pass && nmse((2.0 * xhat).eval(), (2.0 * x).eval()) == nmse(xhat, x);
    report(7, pass, "metric identities", "nmse and ssim identities hold exactly");
}

// --- criterion 8 -----------------------------------------------------------

void criterion_dictionary_orthonormality() {
    const auto max_err = [](const Mat& d) {
        return ((d.transpose() * d) - Mat::Identity(d.cols(), d.cols())).cwiseAbs().maxCoeff();
    };
    const double dct256 = max_err(build_dct(256).synthesis);
    const double dct384 = max_err(build_dct(384).synthesis);
    const Dictionary wavelet = build_wavelet(256, 20, 4);
    const double wav256 = max_err(wavelet.synthesis);

    bool topk_energy = true;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Vec x = random_vector(256, seed + 3000);
        const Vec z = wavelet.analyze(x);
        std::vector<double> mags(256);
        for (Index i = 0; i < 256; ++i) mags[static_cast<std::size_t>(i)] = std::abs(z[i]);
        std::sort(mags.rbegin(), mags.rend());
        double discarded = 0;
        for (Index i = 128; i < 256; ++i)
            discarded += mags[static_cast<std::size_t>(i)] * mags[static_cast<std::size_t>(i)];
        const double err = (x - wavelet_topk(x, wavelet, 128)).squaredNorm();
        topk_energy = topk_energy && std::abs(err - discarded) <= 1e-10 * std::max(1.0, discarded);
    }

    const bool pass = dct256 < 1e-10 && dct384 < 1e-10 && wav256 < 1e-8 && topk_energy;
    report(8, pass, "dictionary orthonormality and topk energy identity",
           "dct " + std::to_string(dct384) + ", wavelet " + std::to_string(wav256) +
               ", topk energy identity " + (topk_energy ? "ok" : "violated"));
}

// --- criterion 9 -----------------------------------------------------------

void criterion_packet_codec() {
    bool roundtrips = true;
    SplitMix64 rng(0xC0DEC);
    for (int trial = 0; trial < 10000; ++trial) {
        CompressedPacket p;
        p.n = static_cast<std::uint16_t>(rng.next());
        p.m = static_cast<std::uint16_t>(rng.next() % 256);
        p.s = static_cast<std::uint8_t>(rng.next());
        p.matrix_seed = rng.next();
        p.dict_code = static_cast<std::uint8_t>(rng.next() % 3);
        p.wavelet_taps = static_cast<std::uint8_t>(rng.next());
        p.wavelet_levels = static_cast<std::uint8_t>(rng.next());
        p.channel = static_cast<std::uint16_t>(rng.next());
        p.epoch_index = static_cast<std::uint32_t>(rng.next());
        p.sample_rate_mhz = static_cast<std::uint32_t>(rng.next());
        p.payload.resize(p.m);
        for (auto& v : p.payload) v = static_cast<float>(2.0 * rng.next_double() - 1.0);
        const auto bytes = encode_packet(p);
        roundtrips = roundtrips && decode_packet(bytes) == p && bytes.size() == 31 + 4u * p.m;
    }

    bool rejects = true;
    {
        auto bytes = encode_packet(CompressedPacket{});
        bytes[0] = 'X';
        try {
            decode_packet(bytes);
            rejects = false;
        } catch (const DecodeError& e) {
            rejects = rejects && e.kind == DecodeError::Kind::bad_magic;
        }
    }
    {
        auto bytes = encode_packet(CompressedPacket{});
        bytes[4] = 9;
        try {
            decode_packet(bytes);
            rejects = false;
        } catch (const DecodeError& e) {
            rejects = rejects && e.kind == DecodeError::Kind::bad_version;
        }
    }
    {
        CompressedPacket p;
        p.m = 8;
        p.payload.resize(8, 1.0f);
        auto bytes = encode_packet(p);
        bytes.pop_back();
        try {
            decode_packet(bytes);
            rejects = false;
        } catch (const DecodeError& e) {
            rejects = rejects && e.kind == DecodeError::Kind::truncated_payload;
        }
    }

    // Decoder-side sensing regeneration yields the identical recovery.
    const SensingMatrix phi = generate_sensing(64, 128, 8, 11);
    const Vec x = random_vector(128, 999);
    const Vec y_exact = apply_sensing(phi, x);
    CompressedPacket p;
    p.n = 128;
    p.m = 64;
    p.s = 8;
    p.matrix_seed = phi.seed;
    p.dict_code = 1;
    p.payload.resize(64);
    for (Index i = 0; i < 64; ++i) p.payload[static_cast<std::size_t>(i)] =
        static_cast<float>(y_exact[i]);
    const CompressedPacket q = decode_packet(encode_packet(p));
    const SensingMatrix phi_dec = generate_sensing(q.m, q.n, q.s, q.matrix_seed);
    const Dictionary dict = build_dct(128);
    const Mat theta_enc = compose(phi, dict);
    const Mat theta_dec = compose(phi_dec, dict);
    Vec y(64);
    for (Index i = 0; i < 64; ++i) y[i] = static_cast<double>(q.payload[static_cast<std::size_t>(i)]);
    BsblOptions opts;
    opts.max_iters = 7;
    const Vec enc_side = recover(y, theta_enc, default_partition(128, 24), opts, dict).signal;
    const Vec dec_side = recover(y, theta_dec, default_partition(128, 24), opts, dict).signal;
    const bool regen = (enc_side.array() == dec_side.array()).all() &&
                       phi_dec.col_supports == phi.col_supports;

    report(9, roundtrips && rejects && regen, "packet codec",
           std::string("10^4 roundtrips ") + (roundtrips ? "bit-exact" : "BROKEN") +
               ", rejects " + (rejects ? "ok" : "BROKEN") + ", seed regeneration " +
               (regen ? "identical" : "BROKEN"));
}

// --- criterion 10 ----------------------------------------------------------

void criterion_throughput() {
    const SensingMatrix phi = generate_sensing(192, 384, 15, 1);
    const Dictionary dict = build_dct(384);
    const Mat theta = compose(phi, dict);
    const BlockPartition partition = default_partition(384, 24);
    SynthOptions synth_opts;
    synth_opts.epoch_length = 384;
    synth_opts.epochs = 1;
    synth_opts.seed = 77;
    const Vec x = synth_dataset(SynthKind::ar1, synth_opts).epoch(0, 0);
    const Vec y = apply_sensing(phi, x);
    BsblOptions opts;
    opts.max_iters = 7;
    opts.tol = 0;  // run all 7 iterations
    const auto start = std::chrono::steady_clock::now();
    const RecoveredEpoch out = recover(y, theta, partition, opts, dict);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(10, seconds < 1.0 && out.iterations == 7, "single-epoch throughput",
           std::to_string(seconds) + " s for 7 iterations at M=192, N=384");
}

}  // namespace

int main() {
    criterion_exact_recovery();
    criterion_cost_monotonicity();
    criterion_woodbury();
    criterion_nonsparse_superiority();
    criterion_eeglab();
    criterion_erp();
    criterion_metric_identities();
    criterion_dictionary_orthonormality();
    criterion_packet_codec();
    criterion_throughput();
    if (failures) {
        std::cout << failures << " criterion failure(s)" << std::endl;
        return 1;
    }
    std::cout << "all criteria passed (conditional ones may be skipped)" << std::endl;
    return 0;
}
