#pragma once

#include <cmath>
#include <string>

#include "bcs/bsbl.hpp"
#include "bcs/sensing.hpp"
#include "bcs/telemetry.hpp"
#include "bcs/types.hpp"

namespace bcs {

enum class SynthKind { blocksparse, ar1, ar2mix };

inline SynthKind synth_kind_from_string(const std::string& name) {
    if (name == "blocksparse") return SynthKind::blocksparse;
    if (name == "ar1") return SynthKind::ar1;
    if (name == "ar2mix") return SynthKind::ar2mix;
    throw std::invalid_argument("synth: unknown kind \"" + name +
                                "\" (blocksparse, ar1, ar2mix)");
}

struct SynthOptions {
    Index epoch_length = 384;
    Index epochs = 1;
    Index channels = 1;
    std::uint64_t seed = 0;
    // blocksparse
    Index block_step = 24;
    int active_blocks = 3;
    // ar1
    double ar1_coeff = 0.95;
};

namespace detail {

// Deterministic standard normals: Box-Muller over splitmix64 uniforms.
struct GaussianStream {
    SplitMix64 rng;
    bool have_spare = false;
    double spare = 0;

    explicit GaussianStream(std::uint64_t seed) : rng(seed) {}

    double next() {
        if (have_spare) {
            have_spare = false;
            return spare;
        }
        double u = 0;
        do {
            u = rng.next_double();
        } while (u <= 0);
        const double v = rng.next_double();
        const double radius = std::sqrt(-2.0 * std::log(u));
        spare = radius * std::sin(2.0 * EIGEN_PI * v);
        have_spare = true;
        return radius * std::cos(2.0 * EIGEN_PI * v);
    }
};

inline Vec blocksparse_epoch(GaussianStream& gauss, SplitMix64& picker, Index n,
                             const BlockPartition& partition, int active_blocks) {
    Vec x = Vec::Zero(n);
    const Index blocks = partition.num_blocks();
    std::vector<Index> pool(static_cast<std::size_t>(blocks));
    std::iota(pool.begin(), pool.end(), Index(0));
    for (int k = 0; k < active_blocks && k < blocks; ++k) {
        const std::uint64_t j = picker.next() % static_cast<std::uint64_t>(blocks - k);
        const Index block = pool[j];
        std::swap(pool[j], pool[static_cast<std::size_t>(blocks - 1 - k)]);
        for (Index t = 0; t < partition.block_size(block); ++t)
            x[partition.block_start(block) + t] = gauss.next();
    }
    return x;
}

inline Vec ar1_epoch(GaussianStream& gauss, Index n, double coeff) {
    Vec x(n);
    double state = coeff * coeff < 1.0
                       ? gauss.next() / std::sqrt(1.0 - coeff * coeff)
                       : gauss.next();
    for (Index t = 0; t < n; ++t) {
        x[t] = state;
        state = coeff * state + gauss.next();
    }
    return x;
}

// Two resonant AR(2) processes summed; poles at 0.95 e^(+-i 0.10 pi) and
// 0.90 e^(+-i 0.35 pi).
inline Vec ar2mix_epoch(GaussianStream& gauss, Index n) {
    constexpr double radius1 = 0.95, angle1 = 0.10 * EIGEN_PI;
    constexpr double radius2 = 0.90, angle2 = 0.35 * EIGEN_PI;
    const double a1 = 2 * radius1 * std::cos(angle1), b1 = -radius1 * radius1;
    const double a2 = 2 * radius2 * std::cos(angle2), b2 = -radius2 * radius2;
    double p1 = 0, p2 = 0, q1 = 0, q2 = 0;
    Vec x(n);
    for (Index t = -64; t < n; ++t) {  // burn-in washes out the zero start
        const double next1 = a1 * p1 + b1 * p2 + gauss.next();
        const double next2 = a2 * q1 + b2 * q2 + gauss.next();
        p2 = p1;
        p1 = next1;
        q2 = q1;
        q1 = next2;
        if (t >= 0) x[t] = next1 + next2;
    }
    return x;
}

}  // namespace detail

/// Deterministic synthetic dataset; the stand-in for recordings that cannot
/// be redistributed.
inline EpochedDataset synth_dataset(SynthKind kind, const SynthOptions& opts) {
    if (opts.epoch_length < 32)
        throw std::invalid_argument("synth: epoch length must be >= 32");
    EpochedDataset dataset;
    dataset.channels = opts.channels;
    dataset.epochs_per_channel = opts.epochs;
    dataset.epoch_length = opts.epoch_length;
    dataset.samples.resize(static_cast<std::size_t>(opts.channels * opts.epochs *
                                                    opts.epoch_length));
    detail::GaussianStream gauss(opts.seed);
    SplitMix64 picker(opts.seed ^ 0xB10C5EEDB10C5EEDULL);
    const BlockPartition partition =
        kind == SynthKind::blocksparse
            ? default_partition(opts.epoch_length,
                                std::min(opts.block_step, opts.epoch_length))
            : BlockPartition{};
    for (Index ch = 0; ch < opts.channels; ++ch)
        for (Index ep = 0; ep < opts.epochs; ++ep) {
            Vec x;
            switch (kind) {
                case SynthKind::blocksparse:
                    x = detail::blocksparse_epoch(gauss, picker, opts.epoch_length, partition,
                                                  opts.active_blocks);
                    break;
                case SynthKind::ar1:
                    x = detail::ar1_epoch(gauss, opts.epoch_length, opts.ar1_coeff);
                    break;
                case SynthKind::ar2mix:
                    x = detail::ar2mix_epoch(gauss, opts.epoch_length);
                    break;
            }
            dataset.set_epoch(ch, ep, x);
        }
    return dataset;
}

}  // namespace bcs
