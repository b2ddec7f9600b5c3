#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace bcs {

using Index = Eigen::Index;

template <class Scalar>
using VectorX = Eigen::Vector<Scalar, Eigen::Dynamic>;
template <class Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vec = VectorX<double>;
using Mat = MatrixX<double>;

/// Sigma_y stayed indefinite through the whole jitter escalation ladder.
struct CholeskyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace bcs
