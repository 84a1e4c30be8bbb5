#pragma once

#include <Eigen/Dense>

namespace abmc {

/// A parameter point in R^d. Samplers never change its length mid-chain.
using ParamVec = Eigen::VectorXd;

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline bool all_finite(const Eigen::Ref<const Eigen::VectorXd>& v) {
  return v.allFinite();
}

inline bool all_finite(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  return m.allFinite();
}

}  // namespace abmc
