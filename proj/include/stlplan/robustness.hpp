#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "stlplan/state.hpp"
#include "stlplan/stl_core.hpp"

namespace stlplan {

// Robustness of the True literal: large and finite so log-sum-exp smoothing
// stays finite. Excluded from smoothing-gap bounds.
inline constexpr double kTrueRobustness = 1e9;

// Regularizer inside the smoothed Euclidean norm sqrt(||d||^2 + eta^2) used by
// Separation predicates, meters.
inline constexpr double kSeparationEta = 1e-9;

// Uniformly sampled multi-agent state sequence. agents[a][s] is the state of
// agent_names[a] at time s * sampling_period.
struct Trace {
  double sampling_period = 0.1;  // s
  std::vector<std::string> agent_names;
  std::vector<std::vector<KnotState>> agents;

  std::size_t sample_count() const { return agents.empty() ? 0 : agents.front().size(); }
  double duration() const;
  std::size_t agent_index(const std::string& name) const;

  // All agents present, unique names, equal nonzero lengths, finite states,
  // positive sampling period. Throws InvalidSpecError otherwise.
  void validate() const;
};

// Smoothing sharpness of the log-sum-exp max/min approximations; larger k
// tracks the exact extrema more closely at the cost of steeper gradients.
struct Temperature {
  Temperature(double k_);
  double k;
};

// Inclusive, nonempty sample index range.
struct IndexWindow {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin + 1; }
};

// Discretizes a relative interval at sample `base` to absolute sample indices
// {base + ceil(lo/Ts), ..., base + floor(hi/Ts)}, clipped to [0, length-1].
// Rounding is inward with a 1e-9-step snap so exact multiples of Ts survive
// floating-point division. Throws EmptyWindowError when the rounded window is
// empty or starts past the trace end.
IndexWindow to_index_window(const Interval& iv, double sampling_period, std::size_t base,
                            std::size_t length);

// Max-shifted log-sum-exp extrema: max(v) <= softmax <= max(v) + ln(n)/k and
// min(v) - ln(n)/k <= softmin <= min(v). A single value passes through
// unchanged.
double softmax(std::span<const double> values, Temperature k);
double softmin(std::span<const double> values, Temperature k);

// Pointwise satisfaction at sample i. Until asks the right operand to hold at
// some window sample j while the left operand holds at every l in [i, j].
bool boolean_satisfaction(const Formula& f, const Trace& tr, std::size_t i);
bool boolean_satisfaction(const FormulaPtr& f, const Trace& tr, std::size_t i);

// Quantitative robustness, meters. Positive implies pointwise satisfaction,
// negative implies violation.
double robustness(const Formula& f, const Trace& tr, std::size_t i);
double robustness(const FormulaPtr& f, const Trace& tr, std::size_t i);

// Same recursion with softmax/softmin in place of max/min; Separation uses
// the eta-regularized norm so the result is differentiable everywhere.
double smooth_robustness(const Formula& f, const Trace& tr, std::size_t i, Temperature k);
double smooth_robustness(const FormulaPtr& f, const Trace& tr, std::size_t i, Temperature k);

// d(smooth robustness) / d(agent position), indexed [agent][sample];
// identically zero for samples outside every active window.
using PositionGradient = std::vector<std::vector<Eigen::Vector3d>>;

struct SmoothGradientResult {
  double value = 0.0;
  PositionGradient gradient;
};

SmoothGradientResult smooth_robustness_gradient(const Formula& f, const Trace& tr, std::size_t i,
                                                Temperature k);
SmoothGradientResult smooth_robustness_gradient(const FormulaPtr& f, const Trace& tr,
                                                std::size_t i, Temperature k);

}  // namespace stlplan
