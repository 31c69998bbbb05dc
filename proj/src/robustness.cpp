#include "stlplan/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace stlplan {

double Trace::duration() const {
  return sample_count() == 0 ? 0.0 : (sample_count() - 1) * sampling_period;
}

std::size_t Trace::agent_index(const std::string& name) const {
  for (std::size_t a = 0; a < agent_names.size(); ++a) {
    if (agent_names[a] == name) return a;
  }
  throw Error("unknown agent '" + name + "'");
}

void Trace::validate() const {
  if (!std::isfinite(sampling_period) || sampling_period <= 0.0) {
    throw InvalidSpecError("trace sampling period must be positive");
  }
  if (agent_names.empty()) throw InvalidSpecError("trace needs at least one agent");
  if (agent_names.size() != agents.size()) {
    throw InvalidSpecError("trace has " + std::to_string(agent_names.size()) + " agent names but " +
                           std::to_string(agents.size()) + " state sequences");
  }
  std::set<std::string> seen;
  for (const auto& name : agent_names) {
    if (name.empty()) throw InvalidSpecError("trace agent names must be nonempty");
    if (!seen.insert(name).second) throw InvalidSpecError("duplicate agent '" + name + "'");
  }
  const std::size_t n = agents.front().size();
  if (n == 0) throw InvalidSpecError("trace needs at least one sample");
  for (std::size_t a = 0; a < agents.size(); ++a) {
    if (agents[a].size() != n) {
      throw InvalidSpecError("agent '" + agent_names[a] + "' has " +
                             std::to_string(agents[a].size()) + " samples, expected " +
                             std::to_string(n));
    }
    for (const auto& s : agents[a]) {
      if (!s.p.allFinite() || !s.v.allFinite() || !s.a.allFinite()) {
        throw InvalidSpecError("agent '" + agent_names[a] + "' has a nonfinite state");
      }
    }
  }
}

Temperature::Temperature(double k_) : k(k_) {
  if (!std::isfinite(k) || k <= 0.0) {
    throw InvalidSpecError("temperature must be positive and finite");
  }
}

namespace {

// Inward rounding with a small snap so exact multiples of Ts survive the
// floating-point division.
long long snap_ceil(double x) { return static_cast<long long>(std::ceil(x - 1e-9)); }
long long snap_floor(double x) { return static_cast<long long>(std::floor(x + 1e-9)); }

std::string interval_text(const Interval& iv) {
  std::ostringstream os;
  os << "[" << iv.lo << ", " << iv.hi << "]";
  return os.str();
}

}  // namespace

IndexWindow to_index_window(const Interval& iv, double sampling_period, std::size_t base,
                            std::size_t length) {
  if (!std::isfinite(sampling_period) || sampling_period <= 0.0) {
    throw InvalidSpecError("sampling period must be positive");
  }
  const long long lo = snap_ceil(iv.lo / sampling_period);
  const long long hi = snap_floor(iv.hi / sampling_period);
  if (lo > hi) {
    throw EmptyWindowError("interval " + interval_text(iv) + " holds no sample at Ts=" +
                           std::to_string(sampling_period));
  }
  const long long begin = static_cast<long long>(base) + lo;
  long long end = static_cast<long long>(base) + hi;
  if (length == 0 || begin > static_cast<long long>(length) - 1) {
    throw EmptyWindowError("interval " + interval_text(iv) + " at sample " +
                           std::to_string(base) + " lies past the trace end");
  }
  end = std::min(end, static_cast<long long>(length) - 1);
  return IndexWindow{static_cast<std::size_t>(begin), static_cast<std::size_t>(end)};
}

double softmax(std::span<const double> values, Temperature k) {
  if (values.empty()) throw InvalidSpecError("softmax needs at least one value");
  if (values.size() == 1) return values[0];
  double m = values[0];
  for (double v : values) m = std::max(m, v);
  double sum = 0.0;
  for (double v : values) sum += std::exp(k.k * (v - m));
  return m + std::log(sum) / k.k;
}

double softmin(std::span<const double> values, Temperature k) {
  if (values.empty()) throw InvalidSpecError("softmin needs at least one value");
  if (values.size() == 1) return values[0];
  double m = values[0];
  for (double v : values) m = std::min(m, v);
  double sum = 0.0;
  for (double v : values) sum += std::exp(-k.k * (v - m));
  return m - std::log(sum) / k.k;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Kind { True, Pred, Not, And, Or, Implies, Always, Eventually, Until };

enum class PredKind { Halfspace, Inside, Outside, Sep };

struct CompiledPred {
  PredKind kind = PredKind::Halfspace;
  std::size_t agent_a = 0;
  std::size_t agent_b = 0;
  Eigen::Vector3d coeffs = Eigen::Vector3d::Zero();
  double offset = 0.0;
  Box box;
  double min_distance = 0.0;
};

struct CNode {
  Kind kind = Kind::True;
  std::vector<int> kids;
  long long lo = 0;      // window start, in samples
  long long hi = 0;      // window end, in samples
  std::size_t needed = 0;  // samples beyond t referenced by evaluation at t
  CompiledPred pred;
  std::vector<double> vals;
  std::vector<char> bits;
};

// Gradient of the box margin: unit vector along the axis of the tightest
// face, first minimum winning ties (mirrors the scan order of box_margin).
Eigen::Vector3d box_margin_gradient(const Box& box, const Eigen::Vector3d& p) {
  int axis = 0;
  double sign = 1.0;
  double best = kInf;
  for (int i = 0; i < 3; ++i) {
    const double lo_m = p[i] - box.lo[i];
    if (lo_m < best) {
      best = lo_m;
      axis = i;
      sign = 1.0;
    }
    const double hi_m = box.hi[i] - p[i];
    if (hi_m < best) {
      best = hi_m;
      axis = i;
      sign = -1.0;
    }
  }
  Eigen::Vector3d g = Eigen::Vector3d::Zero();
  g[axis] = sign;
  return g;
}

// Bottom-up evaluator over a post-order node table. Each node holds values
// for every start sample it can be evaluated at without running off the
// trace, so temporal windows index finished child rows directly.
class Evaluator {
 public:
  Evaluator(const Formula& f, const Trace& tr) : tr_(tr) {
    tr.validate();
    ts_ = tr.sampling_period;
    len_ = tr.sample_count();
    horizon_s_ = horizon(f);
    root_ = compile(f);
  }

  double exact_at(std::size_t i) {
    check_start(i);
    forward_exact();
    return nodes_[root_].vals[i];
  }

  bool boolean_at(std::size_t i) {
    check_start(i);
    forward_bool();
    return nodes_[root_].bits[i] != 0;
  }

  double smooth_at(std::size_t i, double k) {
    check_start(i);
    forward_smooth(k);
    return nodes_[root_].vals[i];
  }

  SmoothGradientResult gradient_at(std::size_t i, double k) {
    check_start(i);
    forward_smooth(k);
    SmoothGradientResult out;
    out.value = nodes_[root_].vals[i];
    out.gradient.assign(tr_.agents.size(),
                        std::vector<Eigen::Vector3d>(len_, Eigen::Vector3d::Zero()));
    backward(i, k, out.gradient);
    return out;
  }

 private:
  std::size_t valid(const CNode& n) const { return len_ - n.needed; }

  void check_start(std::size_t i) const {
    if (i >= len_) {
      throw InsufficientTraceError("sample " + std::to_string(i) + " is past the trace end (" +
                                   std::to_string(len_) + " samples)");
    }
    const double have = (len_ - 1) * ts_;
    const double need = i * ts_ + horizon_s_;
    if (need > have + 1e-9 || i + nodes_[root_].needed > len_ - 1) {
      std::ostringstream os;
      os << "trace covers " << have << " s but evaluation at sample " << i << " needs " << need
         << " s (formula horizon " << horizon_s_ << " s)";
      throw InsufficientTraceError(os.str());
    }
  }

  CompiledPred compile_pred(const Predicate& p) {
    validate_predicate(p);
    CompiledPred out;
    std::visit(
        [&](const auto& node) {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, Halfspace>) {
            out.kind = PredKind::Halfspace;
            out.agent_a = tr_.agent_index(node.agent);
            out.coeffs = node.coeffs;
            out.offset = node.offset;
          } else if constexpr (std::is_same_v<T, InsideBox> || std::is_same_v<T, OutsideBox>) {
            out.kind = std::is_same_v<T, InsideBox> ? PredKind::Inside : PredKind::Outside;
            if (!node.box) throw Error("region '" + node.region + "' is unresolved");
            out.agent_a = tr_.agent_index(node.agent);
            out.box = *node.box;
          } else {
            out.kind = PredKind::Sep;
            out.agent_a = tr_.agent_index(node.agent_a);
            out.agent_b = tr_.agent_index(node.agent_b);
            out.min_distance = node.min_distance;
          }
        },
        p);
    return out;
  }

  int push(CNode node) {
    nodes_.push_back(std::move(node));
    return static_cast<int>(nodes_.size()) - 1;
  }

  std::pair<long long, long long> window_steps(const Interval& iv) const {
    const long long lo = snap_ceil(iv.lo / ts_);
    const long long hi = snap_floor(iv.hi / ts_);
    if (lo > hi) {
      throw EmptyWindowError("interval " + interval_text(iv) + " holds no sample at Ts=" +
                             std::to_string(ts_));
    }
    return {lo, hi};
  }

  int compile(const Formula& f) {
    return std::visit(
        [this](const auto& n) -> int {
          using T = std::decay_t<decltype(n)>;
          CNode node;
          if constexpr (std::is_same_v<T, TrueNode>) {
            node.kind = Kind::True;
          } else if constexpr (std::is_same_v<T, PredNode>) {
            node.kind = Kind::Pred;
            node.pred = compile_pred(n.pred);
          } else if constexpr (std::is_same_v<T, NotNode>) {
            node.kind = Kind::Not;
            node.kids.push_back(compile(*n.child));
            node.needed = nodes_[node.kids[0]].needed;
          } else if constexpr (std::is_same_v<T, AndNode> || std::is_same_v<T, OrNode>) {
            node.kind = std::is_same_v<T, AndNode> ? Kind::And : Kind::Or;
            for (const auto& c : n.children) {
              node.kids.push_back(compile(*c));
              node.needed = std::max(node.needed, nodes_[node.kids.back()].needed);
            }
          } else if constexpr (std::is_same_v<T, ImpliesNode>) {
            node.kind = Kind::Implies;
            node.kids.push_back(compile(*n.lhs));
            node.kids.push_back(compile(*n.rhs));
            node.needed =
                std::max(nodes_[node.kids[0]].needed, nodes_[node.kids[1]].needed);
          } else if constexpr (std::is_same_v<T, AlwaysNode> ||
                               std::is_same_v<T, EventuallyNode>) {
            node.kind = std::is_same_v<T, AlwaysNode> ? Kind::Always : Kind::Eventually;
            node.kids.push_back(compile(*n.child));
            std::tie(node.lo, node.hi) = window_steps(n.window);
            node.needed = static_cast<std::size_t>(node.hi) + nodes_[node.kids[0]].needed;
          } else {
            node.kind = Kind::Until;
            node.kids.push_back(compile(*n.lhs));
            node.kids.push_back(compile(*n.rhs));
            std::tie(node.lo, node.hi) = window_steps(n.window);
            node.needed = static_cast<std::size_t>(node.hi) +
                          std::max(nodes_[node.kids[0]].needed, nodes_[node.kids[1]].needed);
          }
          return push(std::move(node));
        },
        f.node);
  }

  const Eigen::Vector3d& pos(std::size_t agent, std::size_t t) const {
    return tr_.agents[agent][t].p;
  }

  double mu(const CompiledPred& p, std::size_t t, bool smooth) const {
    switch (p.kind) {
      case PredKind::Halfspace:
        return halfspace_value(p.coeffs, p.offset, pos(p.agent_a, t));
      case PredKind::Inside:
        return box_margin(p.box, pos(p.agent_a, t));
      case PredKind::Outside:
        return -box_margin(p.box, pos(p.agent_a, t));
      case PredKind::Sep:
        if (smooth) {
          const Eigen::Vector3d d = pos(p.agent_a, t) - pos(p.agent_b, t);
          return std::sqrt(d.squaredNorm() + kSeparationEta * kSeparationEta) - p.min_distance;
        }
        return separation_value(pos(p.agent_a, t), pos(p.agent_b, t), p.min_distance);
    }
    return 0.0;
  }

  void forward_exact() {
    for (auto& n : nodes_) {
      const std::size_t m = valid(n);
      n.vals.assign(m, 0.0);
      switch (n.kind) {
        case Kind::True:
          std::fill(n.vals.begin(), n.vals.end(), kTrueRobustness);
          break;
        case Kind::Pred:
          for (std::size_t t = 0; t < m; ++t) n.vals[t] = mu(n.pred, t, false);
          break;
        case Kind::Not: {
          const auto& c = nodes_[n.kids[0]];
          for (std::size_t t = 0; t < m; ++t) n.vals[t] = -c.vals[t];
          break;
        }
        case Kind::And:
        case Kind::Or:
          for (std::size_t t = 0; t < m; ++t) {
            double v = nodes_[n.kids[0]].vals[t];
            for (std::size_t c = 1; c < n.kids.size(); ++c) {
              const double w = nodes_[n.kids[c]].vals[t];
              v = n.kind == Kind::And ? std::min(v, w) : std::max(v, w);
            }
            n.vals[t] = v;
          }
          break;
        case Kind::Implies: {
          const auto& l = nodes_[n.kids[0]];
          const auto& r = nodes_[n.kids[1]];
          for (std::size_t t = 0; t < m; ++t) n.vals[t] = std::max(-l.vals[t], r.vals[t]);
          break;
        }
        case Kind::Always:
        case Kind::Eventually: {
          const auto& c = nodes_[n.kids[0]];
          for (std::size_t t = 0; t < m; ++t) {
            double v = n.kind == Kind::Always ? kInf : -kInf;
            for (long long j = n.lo; j <= n.hi; ++j) {
              const double w = c.vals[t + static_cast<std::size_t>(j)];
              v = n.kind == Kind::Always ? std::min(v, w) : std::max(v, w);
            }
            n.vals[t] = v;
          }
          break;
        }
        case Kind::Until: {
          const auto& l = nodes_[n.kids[0]];
          const auto& r = nodes_[n.kids[1]];
          for (std::size_t t = 0; t < m; ++t) {
            double best = -kInf;
            double prefix = kInf;
            for (long long j = 0; j <= n.hi; ++j) {
              const std::size_t jj = t + static_cast<std::size_t>(j);
              prefix = std::min(prefix, l.vals[jj]);
              if (j >= n.lo) best = std::max(best, std::min(r.vals[jj], prefix));
            }
            n.vals[t] = best;
          }
          break;
        }
      }
    }
  }

  void forward_bool() {
    for (auto& n : nodes_) {
      const std::size_t m = valid(n);
      n.bits.assign(m, 0);
      switch (n.kind) {
        case Kind::True:
          std::fill(n.bits.begin(), n.bits.end(), 1);
          break;
        case Kind::Pred:
          for (std::size_t t = 0; t < m; ++t) n.bits[t] = mu(n.pred, t, false) >= 0.0 ? 1 : 0;
          break;
        case Kind::Not: {
          const auto& c = nodes_[n.kids[0]];
          for (std::size_t t = 0; t < m; ++t) n.bits[t] = c.bits[t] ? 0 : 1;
          break;
        }
        case Kind::And:
        case Kind::Or:
          for (std::size_t t = 0; t < m; ++t) {
            bool v = n.kind == Kind::And;
            for (int kid : n.kids) {
              const bool w = nodes_[kid].bits[t] != 0;
              v = n.kind == Kind::And ? (v && w) : (v || w);
            }
            n.bits[t] = v ? 1 : 0;
          }
          break;
        case Kind::Implies: {
          const auto& l = nodes_[n.kids[0]];
          const auto& r = nodes_[n.kids[1]];
          for (std::size_t t = 0; t < m; ++t) n.bits[t] = (!l.bits[t] || r.bits[t]) ? 1 : 0;
          break;
        }
        case Kind::Always:
        case Kind::Eventually: {
          const auto& c = nodes_[n.kids[0]];
          for (std::size_t t = 0; t < m; ++t) {
            bool v = n.kind == Kind::Always;
            for (long long j = n.lo; j <= n.hi; ++j) {
              const bool w = c.bits[t + static_cast<std::size_t>(j)] != 0;
              v = n.kind == Kind::Always ? (v && w) : (v || w);
            }
            n.bits[t] = v ? 1 : 0;
          }
          break;
        }
        case Kind::Until: {
          const auto& l = nodes_[n.kids[0]];
          const auto& r = nodes_[n.kids[1]];
          for (std::size_t t = 0; t < m; ++t) {
            bool ok = false;
            bool prefix = true;
            for (long long j = 0; j <= n.hi && !ok; ++j) {
              const std::size_t jj = t + static_cast<std::size_t>(j);
              prefix = prefix && l.bits[jj] != 0;
              if (j >= n.lo && r.bits[jj] != 0 && prefix) ok = true;
            }
            n.bits[t] = ok ? 1 : 0;
          }
          break;
        }
      }
    }
  }

  void forward_smooth(double k) {
    const Temperature temp(k);
    std::vector<double> buf;
    for (auto& n : nodes_) {
      const std::size_t m = valid(n);
      n.vals.assign(m, 0.0);
      switch (n.kind) {
        case Kind::True:
          std::fill(n.vals.begin(), n.vals.end(), kTrueRobustness);
          break;
        case Kind::Pred:
          for (std::size_t t = 0; t < m; ++t) n.vals[t] = mu(n.pred, t, true);
          break;
        case Kind::Not: {
          const auto& c = nodes_[n.kids[0]];
          for (std::size_t t = 0; t < m; ++t) n.vals[t] = -c.vals[t];
          break;
        }
        case Kind::And:
        case Kind::Or:
          for (std::size_t t = 0; t < m; ++t) {
            buf.clear();
            for (int kid : n.kids) buf.push_back(nodes_[kid].vals[t]);
            n.vals[t] = n.kind == Kind::And ? softmin(buf, temp) : softmax(buf, temp);
          }
          break;
        case Kind::Implies: {
          const auto& l = nodes_[n.kids[0]];
          const auto& r = nodes_[n.kids[1]];
          for (std::size_t t = 0; t < m; ++t) {
            const double two[2] = {-l.vals[t], r.vals[t]};
            n.vals[t] = softmax(two, temp);
          }
          break;
        }
        case Kind::Always:
        case Kind::Eventually: {
          const auto& c = nodes_[n.kids[0]];
          const std::size_t w = static_cast<std::size_t>(n.hi - n.lo) + 1;
          for (std::size_t t = 0; t < m; ++t) {
            std::span<const double> window(c.vals.data() + t + static_cast<std::size_t>(n.lo),
                                           w);
            n.vals[t] = n.kind == Kind::Always ? softmin(window, temp) : softmax(window, temp);
          }
          break;
        }
        case Kind::Until: {
          const auto& l = nodes_[n.kids[0]];
          const auto& r = nodes_[n.kids[1]];
          for (std::size_t t = 0; t < m; ++t) {
            buf.clear();
            for (long long j = n.lo; j <= n.hi; ++j) {
              const std::size_t jj = t + static_cast<std::size_t>(j);
              const std::span<const double> prefix(l.vals.data() + t,
                                                   static_cast<std::size_t>(j) + 1);
              const double two[2] = {r.vals[jj], softmin(prefix, temp)};
              buf.push_back(softmin(two, temp));
            }
            n.vals[t] = softmax(buf, temp);
          }
          break;
        }
      }
    }
  }

  // Reverse-mode pass over the stored smooth values. Every local weight is
  // exp of a nonpositive argument because softmin lies at or below its inputs
  // and softmax at or above, so nothing here can overflow.
  void backward(std::size_t start, double k, PositionGradient& grad) {
    const Temperature temp(k);
    std::vector<std::vector<double>> adj(nodes_.size());
    for (std::size_t idx = 0; idx < nodes_.size(); ++idx) {
      adj[idx].assign(valid(nodes_[idx]), 0.0);
    }
    adj[root_][start] = 1.0;
    for (int idx = root_; idx >= 0; --idx) {
      const CNode& n = nodes_[static_cast<std::size_t>(idx)];
      const std::size_t m = valid(n);
      for (std::size_t t = 0; t < m; ++t) {
        const double a = adj[static_cast<std::size_t>(idx)][t];
        if (a == 0.0) continue;
        const double out = n.vals[t];
        switch (n.kind) {
          case Kind::True:
            break;
          case Kind::Pred:
            accumulate_leaf(n.pred, t, a, grad);
            break;
          case Kind::Not:
            adj[n.kids[0]][t] -= a;
            break;
          case Kind::And:
            for (int kid : n.kids) {
              adj[kid][t] += a * std::exp(-k * (nodes_[kid].vals[t] - out));
            }
            break;
          case Kind::Or:
            for (int kid : n.kids) {
              adj[kid][t] += a * std::exp(k * (nodes_[kid].vals[t] - out));
            }
            break;
          case Kind::Implies:
            adj[n.kids[0]][t] -= a * std::exp(k * (-nodes_[n.kids[0]].vals[t] - out));
            adj[n.kids[1]][t] += a * std::exp(k * (nodes_[n.kids[1]].vals[t] - out));
            break;
          case Kind::Always: {
            const auto& c = nodes_[n.kids[0]];
            for (long long j = n.lo; j <= n.hi; ++j) {
              const std::size_t jj = t + static_cast<std::size_t>(j);
              adj[n.kids[0]][jj] += a * std::exp(-k * (c.vals[jj] - out));
            }
            break;
          }
          case Kind::Eventually: {
            const auto& c = nodes_[n.kids[0]];
            for (long long j = n.lo; j <= n.hi; ++j) {
              const std::size_t jj = t + static_cast<std::size_t>(j);
              adj[n.kids[0]][jj] += a * std::exp(k * (c.vals[jj] - out));
            }
            break;
          }
          case Kind::Until: {
            const auto& l = nodes_[n.kids[0]];
            const auto& r = nodes_[n.kids[1]];
            for (long long j = n.lo; j <= n.hi; ++j) {
              const std::size_t jj = t + static_cast<std::size_t>(j);
              const std::span<const double> prefix(l.vals.data() + t,
                                                   static_cast<std::size_t>(j) + 1);
              const double pm = softmin(prefix, temp);
              const double two[2] = {r.vals[jj], pm};
              const double cj = softmin(two, temp);
              const double wj = a * std::exp(k * (cj - out));
              adj[n.kids[1]][jj] += wj * std::exp(-k * (r.vals[jj] - cj));
              const double wpm = wj * std::exp(-k * (pm - cj));
              for (std::size_t ll = t; ll <= jj; ++ll) {
                adj[n.kids[0]][ll] += wpm * std::exp(-k * (l.vals[ll] - pm));
              }
            }
            break;
          }
        }
      }
    }
  }

  void accumulate_leaf(const CompiledPred& p, std::size_t t, double a,
                       PositionGradient& grad) const {
    switch (p.kind) {
      case PredKind::Halfspace:
        grad[p.agent_a][t] += a * p.coeffs;
        break;
      case PredKind::Inside:
        grad[p.agent_a][t] += a * box_margin_gradient(p.box, pos(p.agent_a, t));
        break;
      case PredKind::Outside:
        grad[p.agent_a][t] -= a * box_margin_gradient(p.box, pos(p.agent_a, t));
        break;
      case PredKind::Sep: {
        const Eigen::Vector3d d = pos(p.agent_a, t) - pos(p.agent_b, t);
        const Eigen::Vector3d g =
            d / std::sqrt(d.squaredNorm() + kSeparationEta * kSeparationEta);
        grad[p.agent_a][t] += a * g;
        grad[p.agent_b][t] -= a * g;
        break;
      }
    }
  }

  const Trace& tr_;
  double ts_ = 0.0;
  std::size_t len_ = 0;
  double horizon_s_ = 0.0;
  int root_ = -1;
  std::vector<CNode> nodes_;
};

}  // namespace

bool boolean_satisfaction(const Formula& f, const Trace& tr, std::size_t i) {
  return Evaluator(f, tr).boolean_at(i);
}

bool boolean_satisfaction(const FormulaPtr& f, const Trace& tr, std::size_t i) {
  return boolean_satisfaction(*f, tr, i);
}

double robustness(const Formula& f, const Trace& tr, std::size_t i) {
  return Evaluator(f, tr).exact_at(i);
}

double robustness(const FormulaPtr& f, const Trace& tr, std::size_t i) {
  return robustness(*f, tr, i);
}

double smooth_robustness(const Formula& f, const Trace& tr, std::size_t i, Temperature k) {
  return Evaluator(f, tr).smooth_at(i, k.k);
}

double smooth_robustness(const FormulaPtr& f, const Trace& tr, std::size_t i, Temperature k) {
  return smooth_robustness(*f, tr, i, k);
}

SmoothGradientResult smooth_robustness_gradient(const Formula& f, const Trace& tr, std::size_t i,
                                                Temperature k) {
  return Evaluator(f, tr).gradient_at(i, k.k);
}

SmoothGradientResult smooth_robustness_gradient(const FormulaPtr& f, const Trace& tr,
                                                std::size_t i, Temperature k) {
  return smooth_robustness_gradient(*f, tr, i, k);
}

}  // namespace stlplan
