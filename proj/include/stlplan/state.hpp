#pragma once

#include <Eigen/Core>

namespace stlplan {

// Full kinematic state of one agent at one instant.
struct KnotState {
  Eigen::Vector3d p{Eigen::Vector3d::Zero()};
  Eigen::Vector3d v{Eigen::Vector3d::Zero()};
  Eigen::Vector3d a{Eigen::Vector3d::Zero()};
};

}  // namespace stlplan
