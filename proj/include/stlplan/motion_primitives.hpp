#pragma once

#include <Eigen/Core>

#include <array>
#include <vector>

#include "stlplan/errors.hpp"
#include "stlplan/state.hpp"

namespace stlplan {

// One minimum-jerk motion primitive: per-axis quintic position polynomials
// over local time t in [0, tau]. coeffs(axis, i) multiplies t^i.
struct QuinticSegment {
  double tau = 0.0;  // s
  Eigen::Matrix<double, 3, 6> coeffs = Eigen::Matrix<double, 3, 6>::Zero();

  KnotState state_at(double t) const;
};

// Per-axis symmetric velocity/acceleration limits.
struct KinematicBounds {
  double vmax = 0.0;  // m/s
  double amax = 0.0;  // m/s^2
};

void validate_bounds(const KinematicBounds& b);

// Unique degree-<=5 interpolant of the six per-axis boundary conditions
// (p, v, a at both ends): the jerk-optimal segment for the triple-integrator
// model. The three free high-order coefficients come from a 3x3 linear solve.
QuinticSegment solve_segment(const KnotState& start, const KnotState& end, double tau);

// States at local times offset, offset + Ts, ... while <= tau (with 1e-9
// slack so an endpoint landing on the grid is kept). Exact polynomial
// evaluation; velocities and accelerations are the analytic derivatives.
std::vector<KnotState> sample_segment(const QuinticSegment& seg, double sampling_period,
                                      double offset = 0.0);

// Exact per-axis peaks of |velocity| and |acceleration| over [0, tau]:
// endpoints plus interior roots of the derivative polynomials.
struct SegmentExtrema {
  std::array<double, 3> peak_velocity{};      // m/s per axis
  std::array<double, 3> peak_acceleration{};  // m/s^2 per axis

  double max_velocity() const;
  double max_acceleration() const;
};

SegmentExtrema segment_extrema(const QuinticSegment& seg);

// Signed distance to the kinematic limits; feasible iff every margin >= 0.
struct FeasibilityReport {
  std::array<double, 3> velocity_margin{};      // vmax - peak |v| per axis
  std::array<double, 3> acceleration_margin{};  // amax - peak |a| per axis
  bool feasible = false;

  double worst_velocity_margin() const;
  double worst_acceleration_margin() const;
};

FeasibilityReport check_feasibility(const QuinticSegment& seg, const KinematicBounds& b);

}  // namespace stlplan
