#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "bcs/types.hpp"

namespace bcs {

/// ||xhat - x||^2 / ||x||^2.
template <class DerivedA, class DerivedB>
typename DerivedA::Scalar nmse(const Eigen::MatrixBase<DerivedA>& xhat,
                               const Eigen::MatrixBase<DerivedB>& x) {
    using Scalar = typename DerivedA::Scalar;
    if (xhat.size() != x.size())
        throw std::invalid_argument("nmse: length mismatch");
    const Scalar reference_energy = x.squaredNorm();
    if (reference_energy == Scalar(0))
        throw std::invalid_argument("nmse: zero reference signal");
    return (xhat - x).squaredNorm() / reference_energy;
}

/// Mean SSIM over all stride-1 windows. Uniform windows, sample statistics
/// with 1/window normalization, K1 = 0.01, K2 = 0.03, dynamic range taken
/// from the reference signal.
template <class Scalar>
Scalar ssim_1d(const VectorX<Scalar>& xhat, const VectorX<Scalar>& x, Index window = 100) {
    if (xhat.size() != x.size())
        throw std::invalid_argument("ssim_1d: length mismatch");
    const Index n = x.size();
    if (window < 1 || window > n)
        throw std::invalid_argument("ssim_1d: window " + std::to_string(window) +
                                    " larger than signal length " + std::to_string(n));
    const Scalar range = x.maxCoeff() - x.minCoeff();
    if (range == Scalar(0)) {
        if ((xhat.array() == x.array()).all()) return Scalar(1);
        throw std::invalid_argument("ssim_1d: reference has zero dynamic range");
    }
    const Scalar c1 = Scalar(0.01) * range * Scalar(0.01) * range;
    const Scalar c2 = Scalar(0.03) * range * Scalar(0.03) * range;

    const Scalar inv = Scalar(1) / Scalar(window);
    Scalar total = 0;
    const Index windows = n - window + 1;
    for (Index w = 0; w < windows; ++w) {
        Scalar sx = 0, sxh = 0, sxx = 0, sxhxh = 0, sxxh = 0;
        for (Index t = w; t < w + window; ++t) {
            sx += x[t];
            sxh += xhat[t];
            sxx += x[t] * x[t];
            sxhxh += xhat[t] * xhat[t];
            sxxh += x[t] * xhat[t];
        }
        const Scalar mx = sx * inv, mxh = sxh * inv;
        const Scalar vx = sxx * inv - mx * mx;
        const Scalar vxh = sxhxh * inv - mxh * mxh;
        const Scalar cov = sxxh * inv - mx * mxh;
        total += ((2 * mx * mxh + c1) * (2 * cov + c2)) /
                 ((mx * mx + mxh * mxh + c1) * (vx + vxh + c2));
    }
    return total / Scalar(windows);
}

/// Arithmetic mean of the epochs sharing each event label.
template <class Scalar>
std::map<std::string, VectorX<Scalar>> erp_average(const std::vector<VectorX<Scalar>>& epochs,
                                                   const std::vector<std::string>& labels) {
    if (epochs.empty())
        throw std::invalid_argument("erp_average: no epochs");
    if (labels.size() != epochs.size())
        throw std::invalid_argument("erp_average: labels/epochs size mismatch");
    const Index len = epochs.front().size();
    std::map<std::string, VectorX<Scalar>> sums;
    std::map<std::string, Index> counts;
    for (std::size_t i = 0; i < epochs.size(); ++i) {
        if (epochs[i].size() != len)
            throw std::invalid_argument("erp_average: epochs have unequal lengths");
        if (labels[i].empty())
            throw std::invalid_argument("erp_average: empty label on epoch " +
                                        std::to_string(i));
        auto [it, inserted] = sums.try_emplace(labels[i], VectorX<Scalar>::Zero(len));
        it->second += epochs[i];
        ++counts[labels[i]];
    }
    for (auto& [label, sum] : sums) sum /= Scalar(counts[label]);
    return sums;
}

/// Per-epoch quality arrays plus their summary statistics.
struct QualityReport {
    std::vector<double> nmse_per_epoch;
    std::vector<double> ssim_per_epoch;
    double seconds_per_epoch = 0;

    static double mean(const std::vector<double>& v) {
        if (v.empty()) return 0;
        double s = 0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    }
    static double stddev(const std::vector<double>& v) {
        if (v.size() < 2) return 0;
        const double m = mean(v);
        double s = 0;
        for (double x : v) s += (x - m) * (x - m);
        return std::sqrt(s / static_cast<double>(v.size() - 1));
    }

    double nmse_mean() const { return mean(nmse_per_epoch); }
    double nmse_std() const { return stddev(nmse_per_epoch); }
    double ssim_mean() const { return mean(ssim_per_epoch); }
    double ssim_std() const { return stddev(ssim_per_epoch); }
};

}  // namespace bcs
