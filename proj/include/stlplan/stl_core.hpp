#pragma once

#include <Eigen/Core>

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "stlplan/errors.hpp"

namespace stlplan {

// Closed time interval in seconds. lo == hi is permitted and degenerates to a
// single sample after discretization.
struct Interval {
  Interval(double lo_, double hi_);
  double lo;
  double hi;
};

// Axis-aligned box, meters. lo < hi componentwise for a valid region.
struct Box {
  Eigen::Vector3d lo{Eigen::Vector3d::Zero()};
  Eigen::Vector3d hi{Eigen::Vector3d::Zero()};

  Eigen::Vector3d center() const { return 0.5 * (lo + hi); }
  bool valid() const;
};

void validate_box(const Box& box, const std::string& what);

// Signed satisfaction margins, meters. All of these are >= 0 exactly when the
// corresponding predicate holds.
double box_margin(const Box& box, const Eigen::Vector3d& p);
double halfspace_value(const Eigen::Vector3d& coeffs, double offset, const Eigen::Vector3d& p);
double separation_value(const Eigen::Vector3d& pa, const Eigen::Vector3d& pb,
                        double min_distance);

// coeffs . p + offset >= 0
struct Halfspace {
  std::string agent;
  Eigen::Vector3d coeffs{Eigen::Vector3d::Zero()};  // 1/m per axis
  double offset = 0.0;                              // m
};

// Agent position inside the named box; margin is the L-inf signed distance to
// the nearest face. The box geometry is filled in by resolve_regions.
struct InsideBox {
  std::string agent;
  std::string region;
  std::optional<Box> box;
};

struct OutsideBox {
  std::string agent;
  std::string region;
  std::optional<Box> box;
};

// ||p_a - p_b|| >= min_distance
struct Separation {
  std::string agent_a;
  std::string agent_b;
  double min_distance = 0.0;  // m
};

using Predicate = std::variant<Halfspace, InsideBox, OutsideBox, Separation>;

void validate_predicate(const Predicate& p);

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct TrueNode {};
struct PredNode {
  Predicate pred;
};
struct NotNode {
  FormulaPtr child;
};
struct AndNode {
  std::vector<FormulaPtr> children;
};
struct OrNode {
  std::vector<FormulaPtr> children;
};
struct ImpliesNode {
  FormulaPtr lhs;
  FormulaPtr rhs;
};
struct AlwaysNode {
  Interval window;
  FormulaPtr child;
};
struct EventuallyNode {
  Interval window;
  FormulaPtr child;
};
struct UntilNode {
  Interval window;
  FormulaPtr lhs;
  FormulaPtr rhs;
};

struct Formula {
  std::variant<TrueNode, PredNode, NotNode, AndNode, OrNode, ImpliesNode, AlwaysNode,
               EventuallyNode, UntilNode>
      node;
};

// Constructors. f_and/f_or reject empty child lists and collapse a single
// child to the child itself, so every constructed formula prints and reparses
// to a structurally equal tree.
FormulaPtr f_true();
FormulaPtr f_pred(Predicate p);
FormulaPtr f_not(FormulaPtr child);
FormulaPtr f_and(std::vector<FormulaPtr> children);
FormulaPtr f_or(std::vector<FormulaPtr> children);
FormulaPtr f_implies(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr f_always(Interval window, FormulaPtr child);
FormulaPtr f_eventually(Interval window, FormulaPtr child);
FormulaPtr f_until(Interval window, FormulaPtr lhs, FormulaPtr rhs);

// Parses the mission DSL. Unknown agent/region names are not reported here;
// they are resolved later against the mission environment.
//
//   formula := "true" | pred | "!" formula | formula "&&" formula
//            | formula "||" formula | formula "=>" formula
//            | "G[" num "," num "]" formula | "F[" num "," num "]" formula
//            | formula "U[" num "," num "]" formula | "(" formula ")"
//   pred    := "in(" ident "," ident ")" | "out(" ident "," ident ")"
//            | "sep(" ident "," ident ")" ">=" num | affine ">=" num
//   affine  := signed sum of terms  coeff "*" ident "." axis,  axis in {px,py,pz}
//
// Precedence: unary (!, G, F) > && > || > U > =>. Until is non-associative;
// chains require parentheses.
FormulaPtr parse_formula(const std::string& text);

// Inverse of parse_formula up to whitespace and redundant parentheses.
std::string print_formula(const Formula& f);
std::string print_formula(const FormulaPtr& f);

// Latest future time (seconds) the formula can reference.
double horizon(const Formula& f);
double horizon(const FormulaPtr& f);

// Structural equality. Region names are compared; resolved box geometry is
// not part of the printed syntax and is ignored.
bool structurally_equal(const Formula& a, const Formula& b);
bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b);

std::set<std::string> agents_of(const Formula& f);
std::set<std::string> regions_of(const Formula& f);

using RegionMap = std::map<std::string, Box, std::less<>>;

// Returns a copy of f with every in/out predicate bound to its region's box.
// Throws Error naming the first region that is missing from the map.
FormulaPtr resolve_regions(const FormulaPtr& f, const RegionMap& regions);

// Multi-agent positions at one instant, keyed by agent name.
using InstantPositions = std::map<std::string, Eigen::Vector3d, std::less<>>;

// Satisfaction margin of one predicate, meters; >= 0 iff the predicate holds.
// Throws Error for unknown agents or unresolved regions.
double eval_predicate(const Predicate& p, const InstantPositions& state);

}  // namespace stlplan
