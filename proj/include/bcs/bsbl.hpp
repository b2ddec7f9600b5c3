#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bcs/dictionary.hpp"
#include "bcs/types.hpp"

namespace bcs {

/// Contiguous non-overlapping blocks covering [0, N). The partition is a
/// regularizer chosen by the user; it need not match any true structure of
/// the signal.
struct BlockPartition {
    std::vector<Index> starts;  // ascending, starts[0] == 0
    Index total = 0;            // N

    Index num_blocks() const { return static_cast<Index>(starts.size()); }
    Index block_start(Index i) const { return starts[static_cast<std::size_t>(i)]; }
    Index block_size(Index i) const {
        const auto k = static_cast<std::size_t>(i);
        return (k + 1 < starts.size() ? starts[k + 1] : total) - starts[k];
    }
};

/// Blocks of `step` entries starting at 0, step, 2*step, ...; the last block
/// is shorter when step does not divide N.
inline BlockPartition default_partition(Index n, Index step = 24) {
    if (step < 1 || step > n)
        throw std::invalid_argument("default_partition: need 1 <= step <= N, got step=" +
                                    std::to_string(step) + " N=" + std::to_string(n));
    BlockPartition partition;
    partition.total = n;
    for (Index start = 0; start < n; start += step) partition.starts.push_back(start);
    return partition;
}

/// Toeplitz AR(1) correlation matrix B[j,k] = r^|j-k|.
template <class Scalar = double>
MatrixX<Scalar> toeplitz_correlation(Scalar r, Index size) {
    MatrixX<Scalar> b(size, size);
    for (Index j = 0; j < size; ++j)
        for (Index k = 0; k < size; ++k) b(j, k) = std::pow(r, Scalar(std::abs(j - k)));
    return b;
}

/// Symmetric PSD square root via eigendecomposition, eigenvalues floored at
/// 1e-12.
template <class Scalar>
MatrixX<Scalar> symmetric_sqrt(const MatrixX<Scalar>& a) {
    Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> eig(a);
    VectorX<Scalar> d = eig.eigenvalues().cwiseMax(Scalar(1e-12)).cwiseSqrt();
    return eig.eigenvectors() * d.asDiagonal() * eig.eigenvectors().transpose();
}

template <class Scalar = double>
struct BsblStateT;

template <class Scalar = double>
struct BsblOptionsT {
    int max_iters = 7;
    Scalar tol = Scalar(1e-8);
    bool learn_correlation = true;  // intra-block Toeplitz B
    bool learn_noise = false;       // lambda
    std::optional<Scalar> lambda_init;  // default 1e-10 * ||y||^2 / M
    Scalar gamma_floor = Scalar(1e-12);
    /// Invoked after each iteration's posterior update with the state that
    /// produced it (hyperparameters not yet advanced). Test hook.
    std::function<void(const BsblStateT<Scalar>&)> iteration_callback;
};

template <class Scalar>
struct BsblStateT {
    BlockPartition partition;
    VectorX<Scalar> gamma;   // per-block variance scales, >= gamma_floor
    Scalar corr = 0;         // r in B[j,k] = r^|j-k|, |r| <= 0.99
    Scalar lambda = 0;       // noise variance
    VectorX<Scalar> mu;      // posterior mean, length N
    std::vector<MatrixX<Scalar>> sigma_blocks;  // per-block posterior covariances
    std::vector<Scalar> cost_history;  // log det Sigma_y + y' Sigma_y^-1 y per iteration
};

template <class Scalar = double>
struct RecoveredEpochT {
    VectorX<Scalar> coeffs;  // z
    VectorX<Scalar> signal;  // x = D z
    int iterations = 0;
    bool converged = false;
    Scalar final_cost = 0;
    BsblStateT<Scalar> state;
};

using BsblOptions = BsblOptionsT<double>;
using BsblState = BsblStateT<double>;
using RecoveredEpoch = RecoveredEpochT<double>;

namespace detail {

// Sigma_y = lambda I + sum_i Theta_i (gamma_i B_i) Theta_i', assembled from
// the PSD factors Theta_i (sqrt(gamma_i) B_i^1/2) so the result is symmetric
// PSD by construction.
template <class Scalar>
MatrixX<Scalar> assemble_sigma_y(const MatrixX<Scalar>& theta, const BlockPartition& partition,
                                 const VectorX<Scalar>& gamma, Scalar corr, Scalar lambda,
                                 const std::map<Index, MatrixX<Scalar>>& sqrt_corr) {
    const Index m = theta.rows();
    MatrixX<Scalar> factor(m, theta.cols());
    for (Index i = 0; i < partition.num_blocks(); ++i) {
        const Index start = partition.block_start(i);
        const Index size = partition.block_size(i);
        const Scalar scale = std::sqrt(std::max(gamma[i], Scalar(0)));
        if (corr == Scalar(0))
            factor.middleCols(start, size) = theta.middleCols(start, size) * scale;
        else
            factor.middleCols(start, size).noalias() =
                theta.middleCols(start, size) * (scale * sqrt_corr.at(size));
    }
    MatrixX<Scalar> sigma_y = MatrixX<Scalar>::Zero(m, m);
    sigma_y.template selfadjointView<Eigen::Lower>().rankUpdate(factor);
    sigma_y.diagonal().array() += lambda;
    sigma_y = sigma_y.template selfadjointView<Eigen::Lower>();  // symmetrize
    return sigma_y;
}

// Cholesky with jitter escalation; throws CholeskyError when the ladder runs
// out.
template <class Scalar>
Eigen::LLT<MatrixX<Scalar>> cholesky_with_jitter(const MatrixX<Scalar>& sigma_y) {
    Eigen::LLT<MatrixX<Scalar>> llt(sigma_y);
    if (llt.info() == Eigen::Success) return llt;
    const Scalar mean_diag = sigma_y.trace() / Scalar(sigma_y.rows());
    for (Scalar eps : {Scalar(1e-12), Scalar(1e-10), Scalar(1e-8), Scalar(1e-6)}) {
        MatrixX<Scalar> jittered = sigma_y;
        jittered.diagonal().array() += eps * mean_diag;
        llt.compute(jittered);
        if (llt.info() == Eigen::Success) return llt;
    }
    throw CholeskyError("bsbl: Sigma_y not positive definite after jitter escalation");
}

template <class Scalar>
Scalar log_det_from_llt(const Eigen::LLT<MatrixX<Scalar>>& llt) {
    return Scalar(2) * llt.matrixLLT().diagonal().array().log().sum();
}

template <class Scalar>
std::map<Index, MatrixX<Scalar>> correlation_by_size(const BlockPartition& partition,
                                                     Scalar corr) {
    std::map<Index, MatrixX<Scalar>> by_size;
    for (Index i = 0; i < partition.num_blocks(); ++i) {
        const Index size = partition.block_size(i);
        if (!by_size.count(size)) by_size.emplace(size, toeplitz_correlation(corr, size));
    }
    return by_size;
}

// Size shared by the largest number of blocks; ties go to the size seen
// first in the partition.
inline Index modal_block_size(const BlockPartition& partition) {
    std::map<Index, Index> counts;
    for (Index i = 0; i < partition.num_blocks(); ++i) ++counts[partition.block_size(i)];
    Index best = partition.block_size(0), best_count = 0;
    for (Index i = 0; i < partition.num_blocks(); ++i) {
        const Index size = partition.block_size(i);
        if (counts[size] > best_count) {
            best = size;
            best_count = counts[size];
        }
    }
    return best;
}

}  // namespace detail

/// Negative log marginal likelihood log det Sigma_y + y' Sigma_y^-1 y for
/// the hyperparameters held in `state`.
template <class Scalar>
Scalar marginal_cost(const BsblStateT<Scalar>& state, const VectorX<Scalar>& y,
                     const MatrixX<Scalar>& theta) {
    if (theta.rows() != y.size() || theta.cols() != state.partition.total ||
        state.gamma.size() != state.partition.num_blocks())
        throw std::invalid_argument("marginal_cost: dimension mismatch");
    auto sqrt_corr = detail::correlation_by_size(state.partition, state.corr);
    for (auto& [size, b] : sqrt_corr) b = symmetric_sqrt(b);
    const MatrixX<Scalar> sigma_y = detail::assemble_sigma_y(
        theta, state.partition, state.gamma, state.corr, state.lambda, sqrt_corr);
    const auto llt = detail::cholesky_with_jitter(sigma_y);
    return detail::log_det_from_llt(llt) + y.dot(llt.solve(y));
}

/// BSBL-BO: bound-optimized evidence maximization over per-block variances
/// gamma_i, a shared Toeplitz intra-block correlation, and optionally the
/// noise variance. Pruning is disabled: gamma_i is floored, never zeroed, so
/// non-sparse signals keep support everywhere.
template <class Scalar>
RecoveredEpochT<Scalar> recover(const VectorX<Scalar>& y, const MatrixX<Scalar>& theta,
                                const BlockPartition& partition,
                                const BsblOptionsT<Scalar>& opts = {}) {
    const Index m = theta.rows();
    const Index n = theta.cols();
    if (y.size() != m)
        throw std::invalid_argument("recover: y has length " + std::to_string(y.size()) +
                                    " but Theta has M=" + std::to_string(m));
    if (partition.total != n || partition.num_blocks() < 1 || partition.starts[0] != 0)
        throw std::invalid_argument("recover: partition does not cover Theta's N=" +
                                    std::to_string(n));
    for (Index i = 0; i < partition.num_blocks(); ++i)
        if (partition.block_size(i) < 1)
            throw std::invalid_argument("recover: partition blocks must be non-empty and ascending");
    if (opts.max_iters < 1) throw std::invalid_argument("recover: max_iters must be >= 1");
    if (opts.lambda_init && *opts.lambda_init < Scalar(0))
        throw std::invalid_argument("recover: lambda_init must be nonnegative");

    const Index blocks = partition.num_blocks();
    const Index modal_size = detail::modal_block_size(partition);

    BsblStateT<Scalar> state;
    state.partition = partition;
    state.gamma = VectorX<Scalar>::Ones(blocks);
    state.corr = 0;
    state.lambda = opts.lambda_init.value_or(Scalar(1e-10) * y.squaredNorm() / Scalar(m));
    state.mu = VectorX<Scalar>::Zero(n);
    state.sigma_blocks.resize(static_cast<std::size_t>(blocks));

    // Theta_i' Theta_i, fixed across iterations (lambda update only).
    std::vector<MatrixX<Scalar>> gram_blocks;
    if (opts.learn_noise) {
        gram_blocks.resize(static_cast<std::size_t>(blocks));
        for (Index i = 0; i < blocks; ++i) {
            const auto theta_i = theta.middleCols(partition.block_start(i), partition.block_size(i));
            gram_blocks[static_cast<std::size_t>(i)].noalias() = theta_i.transpose() * theta_i;
        }
    }

    std::map<Index, MatrixX<Scalar>> corr_by_size = detail::correlation_by_size(partition, state.corr);
    std::map<Index, MatrixX<Scalar>> sqrt_by_size;
    for (const auto& [size, b] : corr_by_size) sqrt_by_size[size] = symmetric_sqrt(b);

    VectorX<Scalar> gamma_next(blocks);
    VectorX<Scalar> mu_prev = VectorX<Scalar>::Zero(n);
    RecoveredEpochT<Scalar> result;

    for (int iter = 0; iter < opts.max_iters; ++iter) {
        const MatrixX<Scalar> sigma_y = detail::assemble_sigma_y(
            theta, partition, state.gamma, state.corr, state.lambda, sqrt_by_size);
        const auto llt = detail::cholesky_with_jitter(sigma_y);

        const VectorX<Scalar> weighted_y = llt.solve(y);        // Sigma_y^-1 y
        state.cost_history.push_back(detail::log_det_from_llt(llt) + y.dot(weighted_y));

        // W = L^-1 Theta gives the data-side Gram blocks S_i = W_i' W_i.
        const MatrixX<Scalar> whitened = llt.matrixL().solve(theta);
        const VectorX<Scalar> back_projected = theta.transpose() * weighted_y;

        MatrixX<Scalar> corr_estimate = MatrixX<Scalar>::Zero(modal_size, modal_size);
        Index modal_count = 0;

        for (Index i = 0; i < blocks; ++i) {
            const Index start = partition.block_start(i);
            const Index size = partition.block_size(i);
            const Scalar gamma_i = state.gamma[i];
            const MatrixX<Scalar>& b = corr_by_size.at(size);

            const auto q_i = back_projected.segment(start, size);
            const VectorX<Scalar> bq = b * q_i;
            state.mu.segment(start, size) = gamma_i * bq;

            MatrixX<Scalar> s_i(size, size);
            s_i.noalias() = whitened.middleCols(start, size).transpose() *
                            whitened.middleCols(start, size);
            MatrixX<Scalar>& sigma_i = state.sigma_blocks[static_cast<std::size_t>(i)];
            sigma_i.noalias() = -(gamma_i * gamma_i) * (b * s_i * b);
            sigma_i += gamma_i * b;
            sigma_i = ((sigma_i + sigma_i.transpose()) / Scalar(2)).eval();

            if (opts.learn_correlation && size == modal_size && gamma_i > Scalar(0)) {
                corr_estimate.noalias() +=
                    (sigma_i + state.mu.segment(start, size) *
                                   state.mu.segment(start, size).transpose()) /
                    gamma_i;
                ++modal_count;
            }

            // Bound-optimization gamma rule:
            //   gamma <- gamma * ||B^1/2 q|| / sqrt(tr(S B)), floored.
            // S and B are symmetric, so tr(S B) = sum_jk S_jk B_jk.
            const Scalar numerator = std::sqrt(std::max(q_i.dot(bq), Scalar(0)));
            const Scalar denominator =
                std::sqrt(std::max(s_i.cwiseProduct(b).sum(), Scalar(0)));
            gamma_next[i] = denominator > Scalar(0)
                                ? std::max(gamma_i * numerator / denominator, opts.gamma_floor)
                                : std::max(gamma_i, opts.gamma_floor);
        }

        if (opts.iteration_callback) opts.iteration_callback(state);

        result.iterations = iter + 1;
        const Scalar change = (state.mu - mu_prev).norm() /
                              std::max(mu_prev.norm(), Scalar(1));
        if (change < opts.tol) {
            result.converged = true;
            break;
        }
        mu_prev = state.mu;

        state.gamma = gamma_next;

        if (opts.learn_correlation && modal_count > 0 && modal_size > 1) {
            corr_estimate /= Scalar(modal_count);
            const Scalar mean_diag = corr_estimate.diagonal().mean();
            const Scalar mean_super = corr_estimate.diagonal(1).mean();
            if (mean_diag > Scalar(0)) {
                Scalar r = mean_super / mean_diag;
                r = std::clamp(r, Scalar(-0.99), Scalar(0.99));
                if (r != state.corr) {
                    state.corr = r;
                    corr_by_size = detail::correlation_by_size(partition, state.corr);
                    for (const auto& [size, bmat] : corr_by_size)
                        sqrt_by_size[size] = symmetric_sqrt(bmat);
                }
            }
        }

        if (opts.learn_noise) {
            Scalar trace_term = 0;
            for (Index i = 0; i < blocks; ++i)
                trace_term += (state.sigma_blocks[static_cast<std::size_t>(i)] *
                               gram_blocks[static_cast<std::size_t>(i)])
                                  .trace();
            state.lambda = ((y - theta * state.mu).squaredNorm() + trace_term) / Scalar(m);
        }
    }

    result.coeffs = state.mu;
    result.signal = state.mu;
    result.final_cost = state.cost_history.back();
    result.state = std::move(state);
    return result;
}

/// Recovery followed by synthesis x = D z.
template <class Scalar>
RecoveredEpochT<Scalar> recover(const VectorX<Scalar>& y, const MatrixX<Scalar>& theta,
                                const BlockPartition& partition,
                                const BsblOptionsT<Scalar>& opts,
                                const DictionaryT<Scalar>& dict) {
    RecoveredEpochT<Scalar> result = recover(y, theta, partition, opts);
    result.signal = dict.synthesize(result.coeffs);
    return result;
}

/// Reference posterior mean through the other Woodbury route,
/// (Theta' Theta / lambda + Sigma0^-1)^-1 Theta' y / lambda, with a
/// pseudo-inverse fallback on the null space of Sigma0. Test oracle; kept
/// independent of the solver path.
template <class Scalar>
VectorX<Scalar> posterior_mean_oracle(const VectorX<Scalar>& y, const MatrixX<Scalar>& theta,
                                      const MatrixX<Scalar>& sigma0, Scalar lambda) {
    if (theta.rows() != y.size() || sigma0.rows() != theta.cols() ||
        sigma0.cols() != theta.cols())
        throw std::invalid_argument("posterior_mean_oracle: dimension mismatch");
    if (!(lambda > Scalar(0)))
        throw std::invalid_argument("posterior_mean_oracle: lambda must be positive");
    Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> eig(sigma0);
    const VectorX<Scalar>& values = eig.eigenvalues();
    const Scalar cutoff = values.cwiseAbs().maxCoeff() * Scalar(1e-12);
    std::vector<Index> kept;
    for (Index i = 0; i < values.size(); ++i)
        if (values[i] > cutoff) kept.push_back(i);
    if (kept.empty()) return VectorX<Scalar>::Zero(theta.cols());

    MatrixX<Scalar> basis(theta.cols(), static_cast<Index>(kept.size()));
    VectorX<Scalar> spectrum(static_cast<Index>(kept.size()));
    for (std::size_t k = 0; k < kept.size(); ++k) {
        basis.col(static_cast<Index>(k)) = eig.eigenvectors().col(kept[k]);
        spectrum[static_cast<Index>(k)] = values[kept[k]];
    }
    const MatrixX<Scalar> projected = theta * basis;
    MatrixX<Scalar> normal = projected.transpose() * projected / lambda;
    normal += spectrum.cwiseInverse().asDiagonal();
    const VectorX<Scalar> rhs = projected.transpose() * y / lambda;
    return basis * normal.ldlt().solve(rhs);
}

}  // namespace bcs
