#pragma once

#include <functional>
#include <vector>

#include "abmc/types.hpp"

namespace abmc {

/// Componentwise functionals whose posterior expectation the plain Monte
/// Carlo estimator targets.
struct Functional {
  enum class Kind { ComponentMean, ComponentSecondMoment, CdfAt };
  Kind kind = Kind::ComponentMean;
  Vector t;  // threshold for CdfAt, one entry per component

  static Functional component_mean() { return {Kind::ComponentMean, {}}; }
  static Functional component_second_moment() { return {Kind::ComponentSecondMoment, {}}; }
  static Functional cdf_at(Vector t) { return {Kind::CdfAt, std::move(t)}; }
};

/// Equal-weight Monte Carlo average of h over the samples, componentwise.
/// Throws std::invalid_argument on an empty sample list.
Vector mc_estimate(const std::vector<ParamVec>& samples, const Functional& h);

/// Generic overload for arbitrary vector-valued h.
Vector mc_estimate(const std::vector<ParamVec>& samples,
                   const std::function<Vector(const ParamVec&)>& h);

}  // namespace abmc
