#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "bcs/types.hpp"

namespace bcs {

/// splitmix64. This exact stream is part of the wire contract: receivers
/// regenerate sensing matrices from the seed alone.
struct SplitMix64 {
    std::uint64_t state;

    explicit constexpr SplitMix64(std::uint64_t seed) : state(seed) {}

    constexpr std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    constexpr double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }
};

/// Sparse binary M x N measurement matrix with exactly `ones_per_col` ones
/// per column, stored as sorted per-column row supports. Immutable after
/// generation; safe to share across threads.
struct SensingMatrix {
    Index rows = 0;        // M
    Index cols = 0;        // N
    int ones_per_col = 0;  // s
    std::uint64_t seed = 0;  // effective seed (after any reseeding)
    std::vector<std::vector<std::int32_t>> col_supports;
};

namespace detail {

// One full draw of all column supports from a single splitmix64 stream.
// Column k's support: partial Fisher-Yates over [0, M), step k picks
// j = next() % (M - k) from the live prefix and retires it to the tail.
inline std::vector<std::vector<std::int32_t>> draw_supports(Index rows, Index cols,
                                                            int ones_per_col,
                                                            std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<std::int32_t> pool(static_cast<std::size_t>(rows));
    std::vector<std::vector<std::int32_t>> supports(static_cast<std::size_t>(cols));
    for (auto& support : supports) {
        std::iota(pool.begin(), pool.end(), 0);
        support.resize(static_cast<std::size_t>(ones_per_col));
        for (int k = 0; k < ones_per_col; ++k) {
            const std::uint64_t j = rng.next() % static_cast<std::uint64_t>(rows - k);
            support[static_cast<std::size_t>(k)] = pool[j];
            std::swap(pool[j], pool[static_cast<std::size_t>(rows - 1 - k)]);
        }
        std::sort(support.begin(), support.end());
    }
    return supports;
}

inline bool has_empty_row(Index rows, const std::vector<std::vector<std::int32_t>>& supports) {
    std::vector<char> hit(static_cast<std::size_t>(rows), 0);
    for (const auto& support : supports)
        for (std::int32_t r : support) hit[static_cast<std::size_t>(r)] = 1;
    for (char h : hit)
        if (!h) return true;
    return false;
}

}  // namespace detail

/// Deterministic sparse binary sensing matrix. If a draw leaves some row
/// all-zero the whole matrix is re-drawn with seed+1 (and so on); the
/// effective seed is recorded in the result.
inline SensingMatrix generate_sensing(Index rows, Index cols, int ones_per_col,
                                      std::uint64_t seed) {
    if (ones_per_col < 1 || ones_per_col > rows || rows >= cols)
        throw std::invalid_argument("generate_sensing: need 1 <= s <= M < N, got M=" +
                                    std::to_string(rows) + " N=" + std::to_string(cols) +
                                    " s=" + std::to_string(ones_per_col));
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const std::uint64_t effective = seed + static_cast<std::uint64_t>(attempt);
        auto supports = detail::draw_supports(rows, cols, ones_per_col, effective);
        if (!detail::has_empty_row(rows, supports))
            return SensingMatrix{rows, cols, ones_per_col, effective, std::move(supports)};
    }
    throw std::runtime_error("generate_sensing: exhausted-reseed after 1000 seeds (M=" +
                             std::to_string(rows) + " N=" + std::to_string(cols) +
                             " s=" + std::to_string(ones_per_col) + ")");
}

/// y = Phi x. Exact accumulation in ascending column order; the order is
/// part of the contract so measurements are byte-reproducible.
template <class Derived>
VectorX<typename Derived::Scalar> apply_sensing(const SensingMatrix& phi,
                                                const Eigen::MatrixBase<Derived>& x) {
    using Scalar = typename Derived::Scalar;
    if (x.size() != phi.cols)
        throw std::invalid_argument("apply_sensing: length mismatch, x has " +
                                    std::to_string(x.size()) + " entries, Phi has N=" +
                                    std::to_string(phi.cols));
    VectorX<Scalar> y = VectorX<Scalar>::Zero(phi.rows);
    for (Index n = 0; n < phi.cols; ++n) {
        const Scalar xn = x[n];
        for (std::int32_t m : phi.col_supports[static_cast<std::size_t>(n)]) y[m] += xn;
    }
    return y;
}

/// Dense 0/1 view of the sensing matrix.
template <class Scalar = double>
MatrixX<Scalar> to_dense(const SensingMatrix& phi) {
    MatrixX<Scalar> dense = MatrixX<Scalar>::Zero(phi.rows, phi.cols);
    for (Index n = 0; n < phi.cols; ++n)
        for (std::int32_t m : phi.col_supports[static_cast<std::size_t>(n)])
            dense(m, n) = Scalar(1);
    return dense;
}

/// Debug check for the full-row-rank premise. Generation only enforces the
/// necessary no-empty-row condition; rank failure is vanishingly rare at
/// realistic sizes and the solver tolerates mild deficiency through lambda.
inline bool has_full_row_rank(const SensingMatrix& phi) {
    return to_dense(phi).colPivHouseholderQr().rank() == phi.rows;
}

/// One-line text export: "M N s seed".
inline std::string to_text(const SensingMatrix& phi) {
    std::ostringstream out;
    out << phi.rows << ' ' << phi.cols << ' ' << phi.ones_per_col << ' ' << phi.seed;
    return out.str();
}

inline SensingMatrix sensing_from_text(const std::string& line) {
    std::istringstream in(line);
    Index rows = 0, cols = 0;
    int s = 0;
    std::uint64_t seed = 0;
    if (!(in >> rows >> cols >> s >> seed))
        throw std::invalid_argument("sensing_from_text: expected \"M N s seed\", got \"" +
                                    line + "\"");
    return generate_sensing(rows, cols, s, seed);
}

}  // namespace bcs
