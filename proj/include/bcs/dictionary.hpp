#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>

#include "bcs/sensing.hpp"
#include "bcs/types.hpp"
#include "bcs/wavelet_filters.hpp"

namespace bcs {

enum class DictKind : std::uint8_t { identity = 0, dct = 1, wavelet = 2 };

/// Orthonormal N x N synthesis dictionary: x = D z. Immutable after
/// construction.
template <class Scalar = double>
struct DictionaryT {
    DictKind kind = DictKind::identity;
    Index n = 0;
    int taps = 0;    // wavelet only
    int levels = 0;  // wavelet only
    MatrixX<Scalar> synthesis;  // D

    VectorX<Scalar> synthesize(const VectorX<Scalar>& z) const { return synthesis * z; }
    VectorX<Scalar> analyze(const VectorX<Scalar>& x) const {
        return synthesis.transpose() * x;
    }
};

using Dictionary = DictionaryT<double>;

template <class Scalar = double>
DictionaryT<Scalar> build_identity(Index n) {
    if (n < 1) throw std::invalid_argument("build_identity: N must be >= 1");
    return {DictKind::identity, n, 0, 0, MatrixX<Scalar>::Identity(n, n)};
}

/// Orthonormal DCT-II analysis matrix C: C(0,t) = sqrt(1/N),
/// C(k,t) = sqrt(2/N) cos(pi (2t+1) k / (2N)).
template <class Scalar = double>
MatrixX<Scalar> dct_analysis_matrix(Index n) {
    MatrixX<Scalar> c(n, n);
    const Scalar scale0 = std::sqrt(Scalar(1) / Scalar(n));
    const Scalar scale = std::sqrt(Scalar(2) / Scalar(n));
    for (Index k = 0; k < n; ++k)
        for (Index t = 0; t < n; ++t)
            c(k, t) = k == 0 ? scale0
                             : scale * std::cos(Scalar(EIGEN_PI) * Scalar(2 * t + 1) *
                                                Scalar(k) / Scalar(2 * n));
    return c;
}

/// Inverse-DCT dictionary: D = C^T, so analyze() yields DCT coefficients.
template <class Scalar = double>
DictionaryT<Scalar> build_dct(Index n) {
    if (n < 1) throw std::invalid_argument("build_dct: N must be >= 1");
    return {DictKind::dct, n, 0, 0, dct_analysis_matrix<Scalar>(n).transpose()};
}

namespace detail {

inline bool is_power_of_two(Index n) { return n >= 1 && (n & (n - 1)) == 0; }

// Single-level periodic analysis matrix of size len x len. Top half is the
// stride-2 circular correlation with the scaling filter, bottom half with
// the QMF wavelet filter g[t] = (-1)^t h[taps-1-t]. "+=" folds filters
// longer than the signal; folding keeps the matrix exactly orthonormal for
// any even len.
template <class Scalar>
MatrixX<Scalar> wavelet_level_analysis(Index len, std::span<const double> scaling) {
    const Index taps = static_cast<Index>(scaling.size());
    MatrixX<Scalar> a = MatrixX<Scalar>::Zero(len, len);
    const Index half = len / 2;
    for (Index i = 0; i < half; ++i)
        for (Index t = 0; t < taps; ++t) {
            const Index col = (2 * i + t) % len;
            const Scalar h = static_cast<Scalar>(scaling[static_cast<std::size_t>(t)]);
            const Scalar g = (t % 2 == 0 ? Scalar(1) : Scalar(-1)) *
                             static_cast<Scalar>(scaling[static_cast<std::size_t>(taps - 1 - t)]);
            a(i, col) += h;
            a(half + i, col) += g;
        }
    return a;
}

}  // namespace detail

/// Synthesis matrix of the multilevel periodic orthonormal wavelet transform
/// with an explicit scaling filter (sum must be sqrt(2)). Composes per-level
/// synthesis matrices; level k acts on the leading N/2^(k-1) coefficients.
template <class Scalar = double>
DictionaryT<Scalar> build_wavelet(Index n, std::span<const double> scaling, int levels,
                                  int taps_label = 0) {
    const int taps = static_cast<int>(scaling.size());
    if (!detail::is_power_of_two(n))
        throw std::invalid_argument("build_wavelet: N must be a power of two, got " +
                                    std::to_string(n));
    if (taps < 2 || taps % 2 != 0)
        throw std::invalid_argument("build_wavelet: filter length must be even and >= 2");
    if (levels < 1 || (n >> levels) < 1)
        throw std::invalid_argument("build_wavelet: invalid levels " +
                                    std::to_string(levels) + " for N=" + std::to_string(n));
    MatrixX<Scalar> analysis = MatrixX<Scalar>::Identity(n, n);
    Index len = n;
    for (int level = 0; level < levels; ++level) {
        MatrixX<Scalar> stage = MatrixX<Scalar>::Identity(n, n);
        stage.topLeftCorner(len, len) = detail::wavelet_level_analysis<Scalar>(len, scaling);
        analysis = stage * analysis;
        len /= 2;
    }
    return {DictKind::wavelet, n, taps_label == 0 ? taps : taps_label, levels,
            analysis.transpose()};
}

/// Daubechies wavelet dictionary from the bundled filter table.
template <class Scalar = double>
DictionaryT<Scalar> build_wavelet(Index n, int taps = 20, int levels = 4) {
    const std::span<const double> scaling = daubechies_scaling_filter(taps);
    if (scaling.empty())
        throw std::invalid_argument("build_wavelet: no bundled Daubechies filter with " +
                                    std::to_string(taps) + " taps (even 2..40 available)");
    return build_wavelet<Scalar>(n, scaling, levels);
}

/// Theta = Phi D, accumulated row-wise in ascending dictionary-row order so
/// it matches apply_sensing(phi, D z) exactly.
template <class Scalar>
MatrixX<Scalar> compose(const SensingMatrix& phi, const DictionaryT<Scalar>& dict) {
    if (phi.cols != dict.n)
        throw std::invalid_argument("compose: Phi has N=" + std::to_string(phi.cols) +
                                    " but dictionary has N=" + std::to_string(dict.n));
    MatrixX<Scalar> theta = MatrixX<Scalar>::Zero(phi.rows, phi.cols);
    for (Index n = 0; n < phi.cols; ++n)
        for (std::int32_t m : phi.col_supports[static_cast<std::size_t>(n)])
            theta.row(m) += dict.synthesis.row(n);
    return theta;
}

/// Parse the CLI/config dictionary spec: "identity", "dct",
/// "wavelet[:taps=T][:levels=L]".
inline Dictionary dictionary_from_spec(const std::string& spec, Index n) {
    if (spec == "identity") return build_identity(n);
    if (spec == "dct") return build_dct(n);
    if (spec.rfind("wavelet", 0) == 0) {
        int taps = 20, levels = 4;
        std::size_t pos = 7;
        while (pos < spec.size()) {
            if (spec[pos] != ':')
                throw std::invalid_argument("dictionary_from_spec: bad wavelet spec \"" +
                                            spec + "\"");
            const std::size_t next = spec.find(':', pos + 1);
            const std::string field = spec.substr(pos + 1, next == std::string::npos
                                                               ? std::string::npos
                                                               : next - pos - 1);
            if (field.rfind("taps=", 0) == 0)
                taps = std::stoi(field.substr(5));
            else if (field.rfind("levels=", 0) == 0)
                levels = std::stoi(field.substr(7));
            else
                throw std::invalid_argument("dictionary_from_spec: unknown field \"" + field +
                                            "\" in \"" + spec + "\"");
            pos = next == std::string::npos ? spec.size() : next;
        }
        return build_wavelet(n, taps, levels);
    }
    throw std::invalid_argument("dictionary_from_spec: unknown dictionary \"" + spec +
                                "\" (expected identity, dct, or wavelet:taps=T:levels=L)");
}

/// Spec string for a dictionary (inverse of dictionary_from_spec).
inline std::string dictionary_spec_string(DictKind kind, int taps = 0, int levels = 0) {
    switch (kind) {
        case DictKind::identity: return "identity";
        case DictKind::dct: return "dct";
        case DictKind::wavelet:
            return "wavelet:taps=" + std::to_string(taps) +
                   ":levels=" + std::to_string(levels);
    }
    throw std::invalid_argument("dictionary_spec_string: bad kind");
}

}  // namespace bcs
