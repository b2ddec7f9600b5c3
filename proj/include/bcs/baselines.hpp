#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "bcs/dictionary.hpp"
#include "bcs/sensing.hpp"
#include "bcs/types.hpp"

namespace bcs {

template <class Scalar = double>
struct L1OptionsT {
    Scalar rho = 0;  // l1 weight, > 0
    int max_iters = 2000;
    Scalar tol = Scalar(1e-8);
    Scalar backtrack = Scalar(0.5);
    int power_iters = 40;  // spectral-norm estimate for the initial step
};

template <class Scalar = double>
struct L1ResultT {
    VectorX<Scalar> coeffs;
    int iterations = 0;
    bool converged = false;  // non-convergence is reported here, never thrown
    std::vector<Scalar> objective_history;
};

using L1Options = L1OptionsT<double>;
using L1Result = L1ResultT<double>;

namespace detail {

template <class Scalar>
VectorX<Scalar> soft_threshold(const VectorX<Scalar>& v, Scalar t) {
    return v.array().sign() * (v.array().abs() - t).max(Scalar(0));
}

// Largest eigenvalue of Theta' Theta by power iteration from a fixed
// deterministic start.
template <class Scalar>
Scalar spectral_norm_squared(const MatrixX<Scalar>& theta, int iters) {
    SplitMix64 rng(0x5eed5eed5eed5eedULL);
    VectorX<Scalar> v(theta.cols());
    for (Index i = 0; i < v.size(); ++i)
        v[i] = Scalar(rng.next_double()) - Scalar(0.5);
    v.normalize();
    Scalar value = 0;
    for (int k = 0; k < iters; ++k) {
        VectorX<Scalar> w = theta.transpose() * (theta * v);
        value = w.norm();
        if (value == Scalar(0)) return Scalar(1);
        v = w / value;
    }
    return value;
}

}  // namespace detail

/// Approximate minimizer of 1/2 ||y - Theta z||^2 + rho ||z||_1 by
/// accelerated proximal gradient with backtracking. Momentum restarts keep
/// the recorded objective non-increasing.
template <class Scalar>
L1ResultT<Scalar> l1_recover(const VectorX<Scalar>& y, const MatrixX<Scalar>& theta,
                             const L1OptionsT<Scalar>& opts) {
    if (y.size() != theta.rows())
        throw std::invalid_argument("l1_recover: y/Theta dimension mismatch");
    if (!(opts.rho > Scalar(0)))
        throw std::invalid_argument("l1_recover: rho must be positive");

    const auto objective = [&](const VectorX<Scalar>& z) {
        return Scalar(0.5) * (y - theta * z).squaredNorm() + opts.rho * z.template lpNorm<1>();
    };
    const auto smooth = [&](const VectorX<Scalar>& z) {
        return Scalar(0.5) * (y - theta * z).squaredNorm();
    };

    Scalar step = Scalar(1) / detail::spectral_norm_squared(theta, opts.power_iters);

    VectorX<Scalar> z = VectorX<Scalar>::Zero(theta.cols());
    VectorX<Scalar> extrapolated = z;
    Scalar momentum = 1;

    L1ResultT<Scalar> result;
    result.objective_history.push_back(objective(z));

    // One backtracked proximal step from `point`.
    const auto prox_step = [&](const VectorX<Scalar>& point) {
        const VectorX<Scalar> gradient = theta.transpose() * (theta * point - y);
        const Scalar f_point = smooth(point);
        for (;;) {
            VectorX<Scalar> candidate =
                detail::soft_threshold<Scalar>(point - step * gradient, step * opts.rho);
            const VectorX<Scalar> delta = candidate - point;
            if (smooth(candidate) <=
                f_point + gradient.dot(delta) + delta.squaredNorm() / (2 * step) +
                    Scalar(1e-14) * std::abs(f_point))
                return candidate;
            step *= opts.backtrack;
        }
    };

    for (int iter = 1; iter <= opts.max_iters; ++iter) {
        VectorX<Scalar> z_next = prox_step(extrapolated);
        Scalar obj_next = objective(z_next);

        if (obj_next > result.objective_history.back()) {
            // Momentum overshot: restart and take a plain descent step.
            momentum = 1;
            z_next = prox_step(z);
            obj_next = objective(z_next);
            if (obj_next > result.objective_history.back()) {
                z_next = z;  // at numerical stagnation, hold
                obj_next = result.objective_history.back();
            }
        }

        const Scalar momentum_next = (1 + std::sqrt(1 + 4 * momentum * momentum)) / 2;
        extrapolated = z_next + ((momentum - 1) / momentum_next) * (z_next - z);
        momentum = momentum_next;

        const Scalar previous = result.objective_history.back();
        result.objective_history.push_back(obj_next);
        result.iterations = iter;
        z = z_next;

        if (std::abs(previous - obj_next) <= opts.tol * std::max(previous, Scalar(1))) {
            result.converged = true;
            break;
        }
    }

    result.coeffs = z;
    return result;
}

/// rho grid used when the baseline is reported at its oracle-tuned best:
/// {1e-4, 1e-3, 1e-2, 1e-1, 1} * ||Theta' y||_inf.
template <class Scalar>
std::vector<Scalar> l1_rho_grid(const VectorX<Scalar>& y, const MatrixX<Scalar>& theta) {
    const Scalar top = (theta.transpose() * y).template lpNorm<Eigen::Infinity>();
    std::vector<Scalar> grid;
    for (Scalar factor : {Scalar(1e-4), Scalar(1e-3), Scalar(1e-2), Scalar(1e-1), Scalar(1)})
        grid.push_back(factor * top);
    return grid;
}

/// Transform-coding baseline: keep the K largest-magnitude analysis
/// coefficients (ties to the lower index) and synthesize back.
template <class Scalar>
VectorX<Scalar> wavelet_topk(const VectorX<Scalar>& x, const DictionaryT<Scalar>& dict,
                             Index k) {
    if (x.size() != dict.n)
        throw std::invalid_argument("wavelet_topk: x/dictionary dimension mismatch");
    if (k < 0 || k > dict.n)
        throw std::invalid_argument("wavelet_topk: K must be in [0, N], got " +
                                    std::to_string(k));
    const VectorX<Scalar> z = dict.analyze(x);
    std::vector<Index> order(static_cast<std::size_t>(z.size()));
    std::iota(order.begin(), order.end(), Index(0));
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
        const Scalar fa = std::abs(z[a]), fb = std::abs(z[b]);
        return fa != fb ? fa > fb : a < b;
    });
    VectorX<Scalar> kept = VectorX<Scalar>::Zero(z.size());
    for (Index i = 0; i < k; ++i) kept[order[static_cast<std::size_t>(i)]] =
        z[order[static_cast<std::size_t>(i)]];
    return dict.synthesize(kept);
}

}  // namespace bcs
