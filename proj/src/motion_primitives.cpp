#include "stlplan/motion_primitives.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace stlplan {

namespace {

bool finite_state(const KnotState& s) {
  return s.p.allFinite() && s.v.allFinite() && s.a.allFinite();
}

// Real roots of b1*x + b0.
int linear_roots(double b0, double b1, double out[1]) {
  if (b1 == 0.0) return 0;
  out[0] = -b0 / b1;
  return 1;
}

// Real roots of b2*x^2 + b1*x + b0, via the cancellation-free form.
int quadratic_roots(double b0, double b1, double b2, double out[2]) {
  if (b2 == 0.0) return linear_roots(b0, b1, out);
  const double disc = b1 * b1 - 4.0 * b2 * b0;
  if (disc < 0.0) return 0;
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (b1 + (b1 >= 0.0 ? sq : -sq));
  int n = 0;
  if (q != 0.0) {
    out[n++] = b0 / q;
  }
  out[n++] = q != 0.0 ? q / b2 : 0.0;
  return n;
}

// Real roots of b3*x^3 + b2*x^2 + b1*x + b0: closed form on the depressed
// cubic, then a few Newton steps against the original polynomial to pin the
// residual down to rounding level.
int cubic_roots(double b0, double b1, double b2, double b3, double out[3]) {
  if (b3 == 0.0) return quadratic_roots(b0, b1, b2, out);
  const double p = b2 / b3;
  const double q = b1 / b3;
  const double r = b0 / b3;
  // x = y - p/3 turns it into y^3 + A*y + B.
  const double a3 = p / 3.0;
  const double A = q - p * a3;
  const double B = 2.0 * a3 * a3 * a3 - a3 * q + r;
  const double Q = A / 3.0;
  const double R = -B / 2.0;
  const double D = Q * Q * Q + R * R;
  int n = 0;
  if (D > 0.0) {
    const double sq = std::sqrt(D);
    out[n++] = std::cbrt(R + sq) + std::cbrt(R - sq) - a3;
  } else if (D == 0.0) {
    const double s = std::cbrt(R);
    out[n++] = 2.0 * s - a3;
    out[n++] = -s - a3;
  } else {
    const double rho = std::sqrt(-Q * Q * Q);
    const double theta = std::acos(std::clamp(R / rho, -1.0, 1.0));
    const double mag = 2.0 * std::sqrt(-Q);
    for (int k = 0; k < 3; ++k) {
      out[n++] = mag * std::cos((theta - 2.0 * M_PI * k) / 3.0) - a3;
    }
  }
  for (int i = 0; i < n; ++i) {
    double x = out[i];
    for (int it = 0; it < 3; ++it) {
      const double f = ((b3 * x + b2) * x + b1) * x + b0;
      const double df = (3.0 * b3 * x + 2.0 * b2) * x + b1;
      if (df == 0.0) break;
      x -= f / df;
    }
    out[i] = x;
  }
  return n;
}

}  // namespace

KnotState QuinticSegment::state_at(double t) const {
  KnotState s;
  for (int axis = 0; axis < 3; ++axis) {
    const auto& c = coeffs;
    double p = 0.0;
    for (int i = 5; i >= 0; --i) p = p * t + c(axis, i);
    double v = 0.0;
    for (int i = 5; i >= 1; --i) v = v * t + i * c(axis, i);
    double a = 0.0;
    for (int i = 5; i >= 2; --i) a = a * t + i * (i - 1) * c(axis, i);
    s.p[axis] = p;
    s.v[axis] = v;
    s.a[axis] = a;
  }
  return s;
}

void validate_bounds(const KinematicBounds& b) {
  if (!std::isfinite(b.vmax) || b.vmax <= 0.0 || !std::isfinite(b.amax) || b.amax <= 0.0) {
    throw InvalidSpecError("kinematic bounds must be positive and finite");
  }
}

QuinticSegment solve_segment(const KnotState& start, const KnotState& end, double tau) {
  if (!std::isfinite(tau) || tau <= 0.0) {
    throw InvalidSpecError("segment duration must be positive");
  }
  if (!finite_state(start) || !finite_state(end)) {
    throw InvalidSpecError("segment boundary states must be finite");
  }
  const double t2 = tau * tau;
  const double t3 = t2 * tau;
  const double t4 = t3 * tau;
  const double t5 = t4 * tau;
  Eigen::Matrix3d lhs;
  lhs << t3, t4, t5,                          //
      3.0 * t2, 4.0 * t3, 5.0 * t4,           //
      6.0 * tau, 12.0 * t2, 20.0 * t3;
  const auto lu = lhs.fullPivLu();

  QuinticSegment seg;
  seg.tau = tau;
  for (int axis = 0; axis < 3; ++axis) {
    const double c0 = start.p[axis];
    const double c1 = start.v[axis];
    const double c2 = 0.5 * start.a[axis];
    Eigen::Vector3d rhs(end.p[axis] - (c0 + c1 * tau + c2 * t2),
                        end.v[axis] - (c1 + 2.0 * c2 * tau),
                        end.a[axis] - 2.0 * c2);
    const Eigen::Vector3d high = lu.solve(rhs);
    seg.coeffs(axis, 0) = c0;
    seg.coeffs(axis, 1) = c1;
    seg.coeffs(axis, 2) = c2;
    seg.coeffs(axis, 3) = high[0];
    seg.coeffs(axis, 4) = high[1];
    seg.coeffs(axis, 5) = high[2];
  }
  return seg;
}

std::vector<KnotState> sample_segment(const QuinticSegment& seg, double sampling_period,
                                      double offset) {
  if (!std::isfinite(sampling_period) || sampling_period <= 0.0) {
    throw InvalidSpecError("sampling period must be positive");
  }
  if (offset < 0.0 || offset >= sampling_period) {
    throw InvalidSpecError("sample offset must lie in [0, Ts)");
  }
  std::vector<KnotState> out;
  for (std::size_t n = 0;; ++n) {
    const double t = offset + static_cast<double>(n) * sampling_period;
    if (t > seg.tau + 1e-9) break;
    out.push_back(seg.state_at(std::min(t, seg.tau)));
  }
  if (out.empty()) {
    throw InvalidSpecError("no sample time falls within the segment");
  }
  return out;
}

double SegmentExtrema::max_velocity() const {
  return *std::max_element(peak_velocity.begin(), peak_velocity.end());
}

double SegmentExtrema::max_acceleration() const {
  return *std::max_element(peak_acceleration.begin(), peak_acceleration.end());
}

SegmentExtrema segment_extrema(const QuinticSegment& seg) {
  SegmentExtrema out;
  for (int axis = 0; axis < 3; ++axis) {
    const auto& c = seg.coeffs;
    auto velocity_at = [&](double t) {
      double v = 0.0;
      for (int i = 5; i >= 1; --i) v = v * t + i * c(axis, i);
      return v;
    };
    auto acceleration_at = [&](double t) {
      double a = 0.0;
      for (int i = 5; i >= 2; --i) a = a * t + i * (i - 1) * c(axis, i);
      return a;
    };

    double pv = std::max(std::abs(velocity_at(0.0)), std::abs(velocity_at(seg.tau)));
    double roots[3];
    // |v| peaks where the acceleration cubic vanishes.
    int n = cubic_roots(2.0 * c(axis, 2), 6.0 * c(axis, 3), 12.0 * c(axis, 4),
                        20.0 * c(axis, 5), roots);
    for (int i = 0; i < n; ++i) {
      if (roots[i] > 0.0 && roots[i] < seg.tau) {
        pv = std::max(pv, std::abs(velocity_at(roots[i])));
      }
    }
    out.peak_velocity[axis] = pv;

    double pa = std::max(std::abs(acceleration_at(0.0)), std::abs(acceleration_at(seg.tau)));
    // |a| peaks where the jerk quadratic vanishes.
    n = quadratic_roots(6.0 * c(axis, 3), 24.0 * c(axis, 4), 60.0 * c(axis, 5), roots);
    for (int i = 0; i < n; ++i) {
      if (roots[i] > 0.0 && roots[i] < seg.tau) {
        pa = std::max(pa, std::abs(acceleration_at(roots[i])));
      }
    }
    out.peak_acceleration[axis] = pa;
  }
  return out;
}

double FeasibilityReport::worst_velocity_margin() const {
  return *std::min_element(velocity_margin.begin(), velocity_margin.end());
}

double FeasibilityReport::worst_acceleration_margin() const {
  return *std::min_element(acceleration_margin.begin(), acceleration_margin.end());
}

FeasibilityReport check_feasibility(const QuinticSegment& seg, const KinematicBounds& b) {
  validate_bounds(b);
  const SegmentExtrema ex = segment_extrema(seg);
  FeasibilityReport report;
  report.feasible = true;
  for (int axis = 0; axis < 3; ++axis) {
    report.velocity_margin[axis] = b.vmax - ex.peak_velocity[axis];
    report.acceleration_margin[axis] = b.amax - ex.peak_acceleration[axis];
    if (report.velocity_margin[axis] < 0.0 || report.acceleration_margin[axis] < 0.0) {
      report.feasible = false;
    }
  }
  return report;
}

}  // namespace stlplan
