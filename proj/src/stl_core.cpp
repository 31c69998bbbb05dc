#include "stlplan/stl_core.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <utility>

namespace stlplan {

namespace {

bool finite3(const Eigen::Vector3d& v) {
  return std::isfinite(v.x()) && std::isfinite(v.y()) && std::isfinite(v.z());
}

// Shortest decimal form that parses back to exactly the same double.
std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  if (std::strtod(buf, nullptr) != v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
  }
  return buf;
}

const Eigen::Vector3d& position_of(const InstantPositions& state, const std::string& agent) {
  auto it = state.find(agent);
  if (it == state.end()) {
    throw Error("unknown agent '" + agent + "'");
  }
  return it->second;
}

}  // namespace

Interval::Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw InvalidSpecError("interval bounds must be finite");
  }
  if (lo < 0.0) {
    throw InvalidSpecError("interval lower bound must be nonnegative");
  }
  if (hi < lo) {
    throw InvalidSpecError("interval upper bound must not be below the lower bound");
  }
}

bool Box::valid() const {
  return finite3(lo) && finite3(hi) && (lo.array() < hi.array()).all();
}

void validate_box(const Box& box, const std::string& what) {
  if (!box.valid()) {
    throw InvalidSpecError(what + ": box needs finite bounds with lo < hi on every axis");
  }
}

double box_margin(const Box& box, const Eigen::Vector3d& p) {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    m = std::min(m, p[i] - box.lo[i]);
    m = std::min(m, box.hi[i] - p[i]);
  }
  return m;
}

double halfspace_value(const Eigen::Vector3d& coeffs, double offset, const Eigen::Vector3d& p) {
  return coeffs.dot(p) + offset;
}

double separation_value(const Eigen::Vector3d& pa, const Eigen::Vector3d& pb,
                        double min_distance) {
  return (pa - pb).norm() - min_distance;
}

void validate_predicate(const Predicate& p) {
  std::visit(
      [](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Halfspace>) {
          if (node.agent.empty()) throw InvalidSpecError("halfspace needs an agent name");
          if (!finite3(node.coeffs) || !std::isfinite(node.offset)) {
            throw InvalidSpecError("halfspace coefficients must be finite");
          }
          if (node.coeffs.isZero(0.0)) {
            throw InvalidSpecError("halfspace needs at least one nonzero coefficient");
          }
        } else if constexpr (std::is_same_v<T, InsideBox> || std::is_same_v<T, OutsideBox>) {
          if (node.agent.empty()) throw InvalidSpecError("region predicate needs an agent name");
          if (node.region.empty()) throw InvalidSpecError("region predicate needs a region name");
          if (node.box) validate_box(*node.box, "region '" + node.region + "'");
        } else if constexpr (std::is_same_v<T, Separation>) {
          if (node.agent_a.empty() || node.agent_b.empty()) {
            throw InvalidSpecError("separation needs two agent names");
          }
          if (node.agent_a == node.agent_b) {
            throw InvalidSpecError("separation needs two distinct agents, got '" + node.agent_a +
                                   "' twice");
          }
          if (!std::isfinite(node.min_distance) || node.min_distance <= 0.0) {
            throw InvalidSpecError("separation distance must be positive");
          }
        }
      },
      p);
}

FormulaPtr f_true() { return std::make_shared<const Formula>(Formula{TrueNode{}}); }

FormulaPtr f_pred(Predicate p) {
  return std::make_shared<const Formula>(Formula{PredNode{std::move(p)}});
}

namespace {
void require_operand(const FormulaPtr& f, const char* what) {
  if (!f) throw InvalidSpecError(std::string(what) + " needs a non-null operand");
}
}  // namespace

FormulaPtr f_not(FormulaPtr child) {
  require_operand(child, "negation");
  return std::make_shared<const Formula>(Formula{NotNode{std::move(child)}});
}

FormulaPtr f_and(std::vector<FormulaPtr> children) {
  if (children.empty()) throw InvalidSpecError("conjunction needs at least one operand");
  for (const auto& c : children) require_operand(c, "conjunction");
  if (children.size() == 1) return children.front();
  return std::make_shared<const Formula>(Formula{AndNode{std::move(children)}});
}

FormulaPtr f_or(std::vector<FormulaPtr> children) {
  if (children.empty()) throw InvalidSpecError("disjunction needs at least one operand");
  for (const auto& c : children) require_operand(c, "disjunction");
  if (children.size() == 1) return children.front();
  return std::make_shared<const Formula>(Formula{OrNode{std::move(children)}});
}

FormulaPtr f_implies(FormulaPtr lhs, FormulaPtr rhs) {
  require_operand(lhs, "implication");
  require_operand(rhs, "implication");
  return std::make_shared<const Formula>(Formula{ImpliesNode{std::move(lhs), std::move(rhs)}});
}

FormulaPtr f_always(Interval window, FormulaPtr child) {
  require_operand(child, "always");
  return std::make_shared<const Formula>(Formula{AlwaysNode{window, std::move(child)}});
}

FormulaPtr f_eventually(Interval window, FormulaPtr child) {
  require_operand(child, "eventually");
  return std::make_shared<const Formula>(Formula{EventuallyNode{window, std::move(child)}});
}

FormulaPtr f_until(Interval window, FormulaPtr lhs, FormulaPtr rhs) {
  require_operand(lhs, "until");
  require_operand(rhs, "until");
  return std::make_shared<const Formula>(
      Formula{UntilNode{window, std::move(lhs), std::move(rhs)}});
}

double horizon(const Formula& f) {
  return std::visit(
      [](const auto& node) -> double {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, TrueNode> || std::is_same_v<T, PredNode>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, NotNode>) {
          return horizon(*node.child);
        } else if constexpr (std::is_same_v<T, AndNode> || std::is_same_v<T, OrNode>) {
          double h = 0.0;
          for (const auto& c : node.children) h = std::max(h, horizon(*c));
          return h;
        } else if constexpr (std::is_same_v<T, ImpliesNode>) {
          return std::max(horizon(*node.lhs), horizon(*node.rhs));
        } else if constexpr (std::is_same_v<T, AlwaysNode> ||
                             std::is_same_v<T, EventuallyNode>) {
          return node.window.hi + horizon(*node.child);
        } else {
          return node.window.hi + std::max(horizon(*node.lhs), horizon(*node.rhs));
        }
      },
      f.node);
}

double horizon(const FormulaPtr& f) { return horizon(*f); }

namespace {

bool pred_equal(const Predicate& a, const Predicate& b) {
  if (a.index() != b.index()) return false;
  if (const auto* ha = std::get_if<Halfspace>(&a)) {
    const auto& hb = std::get<Halfspace>(b);
    return ha->agent == hb.agent && ha->coeffs == hb.coeffs && ha->offset == hb.offset;
  }
  if (const auto* ia = std::get_if<InsideBox>(&a)) {
    const auto& ib = std::get<InsideBox>(b);
    return ia->agent == ib.agent && ia->region == ib.region;
  }
  if (const auto* oa = std::get_if<OutsideBox>(&a)) {
    const auto& ob = std::get<OutsideBox>(b);
    return oa->agent == ob.agent && oa->region == ob.region;
  }
  const auto& sa = std::get<Separation>(a);
  const auto& sb = std::get<Separation>(b);
  return sa.agent_a == sb.agent_a && sa.agent_b == sb.agent_b &&
         sa.min_distance == sb.min_distance;
}

bool window_equal(const Interval& a, const Interval& b) { return a.lo == b.lo && a.hi == b.hi; }

}  // namespace

bool structurally_equal(const Formula& a, const Formula& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&b](const auto& na) -> bool {
        using T = std::decay_t<decltype(na)>;
        const auto& nb = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, TrueNode>) {
          return true;
        } else if constexpr (std::is_same_v<T, PredNode>) {
          return pred_equal(na.pred, nb.pred);
        } else if constexpr (std::is_same_v<T, NotNode>) {
          return structurally_equal(*na.child, *nb.child);
        } else if constexpr (std::is_same_v<T, AndNode> || std::is_same_v<T, OrNode>) {
          if (na.children.size() != nb.children.size()) return false;
          for (size_t i = 0; i < na.children.size(); ++i) {
            if (!structurally_equal(*na.children[i], *nb.children[i])) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, ImpliesNode>) {
          return structurally_equal(*na.lhs, *nb.lhs) && structurally_equal(*na.rhs, *nb.rhs);
        } else if constexpr (std::is_same_v<T, AlwaysNode> ||
                             std::is_same_v<T, EventuallyNode>) {
          return window_equal(na.window, nb.window) && structurally_equal(*na.child, *nb.child);
        } else {
          return window_equal(na.window, nb.window) && structurally_equal(*na.lhs, *nb.lhs) &&
                 structurally_equal(*na.rhs, *nb.rhs);
        }
      },
      a.node);
}

bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b) {
  return structurally_equal(*a, *b);
}

namespace {

template <typename Fn>
void visit_predicates(const Formula& f, Fn&& fn) {
  std::visit(
      [&fn](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, PredNode>) {
          fn(node.pred);
        } else if constexpr (std::is_same_v<T, NotNode>) {
          visit_predicates(*node.child, fn);
        } else if constexpr (std::is_same_v<T, AndNode> || std::is_same_v<T, OrNode>) {
          for (const auto& c : node.children) visit_predicates(*c, fn);
        } else if constexpr (std::is_same_v<T, ImpliesNode>) {
          visit_predicates(*node.lhs, fn);
          visit_predicates(*node.rhs, fn);
        } else if constexpr (std::is_same_v<T, AlwaysNode> ||
                             std::is_same_v<T, EventuallyNode>) {
          visit_predicates(*node.child, fn);
        } else if constexpr (std::is_same_v<T, UntilNode>) {
          visit_predicates(*node.lhs, fn);
          visit_predicates(*node.rhs, fn);
        }
      },
      f.node);
}

}  // namespace

std::set<std::string> agents_of(const Formula& f) {
  std::set<std::string> out;
  visit_predicates(f, [&out](const Predicate& p) {
    std::visit(
        [&out](const auto& node) {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, Separation>) {
            out.insert(node.agent_a);
            out.insert(node.agent_b);
          } else {
            out.insert(node.agent);
          }
        },
        p);
  });
  return out;
}

std::set<std::string> regions_of(const Formula& f) {
  std::set<std::string> out;
  visit_predicates(f, [&out](const Predicate& p) {
    if (const auto* in = std::get_if<InsideBox>(&p)) out.insert(in->region);
    if (const auto* o = std::get_if<OutsideBox>(&p)) out.insert(o->region);
  });
  return out;
}

FormulaPtr resolve_regions(const FormulaPtr& f, const RegionMap& regions) {
  auto lookup = [&regions](const std::string& region) -> Box {
    auto it = regions.find(region);
    if (it == regions.end()) throw InvalidSpecError("unknown region '" + region + "'");
    return it->second;
  };
  return std::visit(
      [&](const auto& node) -> FormulaPtr {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, TrueNode>) {
          return f_true();
        } else if constexpr (std::is_same_v<T, PredNode>) {
          Predicate p = node.pred;
          if (auto* in = std::get_if<InsideBox>(&p)) in->box = lookup(in->region);
          if (auto* out = std::get_if<OutsideBox>(&p)) out->box = lookup(out->region);
          return f_pred(std::move(p));
        } else if constexpr (std::is_same_v<T, NotNode>) {
          return f_not(resolve_regions(node.child, regions));
        } else if constexpr (std::is_same_v<T, AndNode> || std::is_same_v<T, OrNode>) {
          std::vector<FormulaPtr> kids;
          kids.reserve(node.children.size());
          for (const auto& c : node.children) kids.push_back(resolve_regions(c, regions));
          if constexpr (std::is_same_v<T, AndNode>) {
            return std::make_shared<const Formula>(Formula{AndNode{std::move(kids)}});
          } else {
            return std::make_shared<const Formula>(Formula{OrNode{std::move(kids)}});
          }
        } else if constexpr (std::is_same_v<T, ImpliesNode>) {
          return f_implies(resolve_regions(node.lhs, regions),
                           resolve_regions(node.rhs, regions));
        } else if constexpr (std::is_same_v<T, AlwaysNode>) {
          return f_always(node.window, resolve_regions(node.child, regions));
        } else if constexpr (std::is_same_v<T, EventuallyNode>) {
          return f_eventually(node.window, resolve_regions(node.child, regions));
        } else {
          return f_until(node.window, resolve_regions(node.lhs, regions),
                         resolve_regions(node.rhs, regions));
        }
      },
      f->node);
}

double eval_predicate(const Predicate& p, const InstantPositions& state) {
  return std::visit(
      [&state](const auto& node) -> double {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Halfspace>) {
          return halfspace_value(node.coeffs, node.offset, position_of(state, node.agent));
        } else if constexpr (std::is_same_v<T, InsideBox>) {
          if (!node.box) throw Error("region '" + node.region + "' is unresolved");
          return box_margin(*node.box, position_of(state, node.agent));
        } else if constexpr (std::is_same_v<T, OutsideBox>) {
          if (!node.box) throw Error("region '" + node.region + "' is unresolved");
          return -box_margin(*node.box, position_of(state, node.agent));
        } else {
          return separation_value(position_of(state, node.agent_a),
                                  position_of(state, node.agent_b), node.min_distance);
        }
      },
      p);
}

// ---------------------------------------------------------------------------
// Printer

namespace {

// True when the formula prints as a self-delimiting unit and never needs
// parentheses as an operand: literals plus the prefix operators.
bool prints_atomic(const Formula& f) {
  return std::holds_alternative<TrueNode>(f.node) || std::holds_alternative<PredNode>(f.node) ||
         std::holds_alternative<NotNode>(f.node) ||
         std::holds_alternative<AlwaysNode>(f.node) ||
         std::holds_alternative<EventuallyNode>(f.node);
}

std::string print_operand(const Formula& f) {
  std::string s = print_formula(f);
  if (prints_atomic(f)) return s;
  return "(" + s + ")";
}

std::string print_window(const Interval& w) {
  return "[" + fmt_num(w.lo) + "," + fmt_num(w.hi) + "]";
}

std::string print_pred(const Predicate& p) {
  return std::visit(
      [](const auto& node) -> std::string {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Halfspace>) {
          static const char* axes[3] = {"px", "py", "pz"};
          std::string out;
          for (int i = 0; i < 3; ++i) {
            double c = node.coeffs[i];
            if (c == 0.0) continue;
            if (out.empty()) {
              out += fmt_num(c);
            } else if (c < 0.0) {
              out += " - " + fmt_num(-c);
            } else {
              out += " + " + fmt_num(c);
            }
            out += "*" + node.agent + "." + axes[i];
          }
          if (out.empty()) out = "0*" + node.agent + ".px";
          return out + " >= " + fmt_num(-node.offset);
        } else if constexpr (std::is_same_v<T, InsideBox>) {
          return "in(" + node.agent + ", " + node.region + ")";
        } else if constexpr (std::is_same_v<T, OutsideBox>) {
          return "out(" + node.agent + ", " + node.region + ")";
        } else {
          return "sep(" + node.agent_a + ", " + node.agent_b + ") >= " +
                 fmt_num(node.min_distance);
        }
      },
      p);
}

std::string join_operands(const std::vector<FormulaPtr>& children, const char* sep) {
  std::string out;
  for (size_t i = 0; i < children.size(); ++i) {
    if (i > 0) out += sep;
    out += print_operand(*children[i]);
  }
  return out;
}

}  // namespace

std::string print_formula(const Formula& f) {
  return std::visit(
      [](const auto& node) -> std::string {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, TrueNode>) {
          return "true";
        } else if constexpr (std::is_same_v<T, PredNode>) {
          return print_pred(node.pred);
        } else if constexpr (std::is_same_v<T, NotNode>) {
          return "!" + print_operand(*node.child);
        } else if constexpr (std::is_same_v<T, AndNode>) {
          return join_operands(node.children, " && ");
        } else if constexpr (std::is_same_v<T, OrNode>) {
          return join_operands(node.children, " || ");
        } else if constexpr (std::is_same_v<T, ImpliesNode>) {
          return print_operand(*node.lhs) + " => " + print_operand(*node.rhs);
        } else if constexpr (std::is_same_v<T, AlwaysNode>) {
          return "G" + print_window(node.window) + " " + print_operand(*node.child);
        } else if constexpr (std::is_same_v<T, EventuallyNode>) {
          return "F" + print_window(node.window) + " " + print_operand(*node.child);
        } else {
          return print_operand(*node.lhs) + " U" + print_window(node.window) + " " +
                 print_operand(*node.rhs);
        }
      },
      f.node);
}

std::string print_formula(const FormulaPtr& f) { return print_formula(*f); }

// ---------------------------------------------------------------------------
// Lexer and parser

namespace {

enum class Tok {
  End,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Dot,
  Star,
  Plus,
  Minus,
  Bang,
  AndAnd,
  OrOr,
  Arrow,
  Ge,
  Number,
  Ident,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double value = 0.0;
  int line = 1;
  int column = 1;
};

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1;
  int column = 1;
  size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      column = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++column;
      ++i;
      continue;
    }
    size_t begin = i;
    int tok_line = line;
    int tok_column = column;
    auto simple = [&](Tok kind, size_t len) {
      i += len;
      column += static_cast<int>(len);
      out.push_back(Token{kind, text.substr(begin, len), 0.0, tok_line, tok_column});
    };
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < text.size() &&
         std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j < text.size() && text[j] == '.') {
        ++j;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      }
      if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
        size_t k = j + 1;
        if (k < text.size() && (text[k] == '+' || text[k] == '-')) ++k;
        if (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) {
          ++k;
          while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
          j = k;
        }
      }
      std::string raw = text.substr(i, j - i);
      double value = std::strtod(raw.c_str(), nullptr);
      out.push_back(Token{Tok::Number, raw, value, tok_line, tok_column});
      column += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) ||
                                 text[j] == '_')) {
        ++j;
      }
      out.push_back(Token{Tok::Ident, text.substr(i, j - i), 0.0, tok_line, tok_column});
      column += static_cast<int>(j - i);
      i = j;
      continue;
    }
    switch (c) {
      case '(': simple(Tok::LParen, 1); break;
      case ')': simple(Tok::RParen, 1); break;
      case '[': simple(Tok::LBracket, 1); break;
      case ']': simple(Tok::RBracket, 1); break;
      case ',': simple(Tok::Comma, 1); break;
      case '.': simple(Tok::Dot, 1); break;
      case '*': simple(Tok::Star, 1); break;
      case '+': simple(Tok::Plus, 1); break;
      case '-': simple(Tok::Minus, 1); break;
      case '!': simple(Tok::Bang, 1); break;
      case '&':
        if (i + 1 < text.size() && text[i + 1] == '&') {
          simple(Tok::AndAnd, 2);
        } else {
          throw ParseError("expected '&&'", tok_line, tok_column);
        }
        break;
      case '|':
        if (i + 1 < text.size() && text[i + 1] == '|') {
          simple(Tok::OrOr, 2);
        } else {
          throw ParseError("expected '||'", tok_line, tok_column);
        }
        break;
      case '=':
        if (i + 1 < text.size() && text[i + 1] == '>') {
          simple(Tok::Arrow, 2);
        } else {
          throw ParseError("expected '=>'", tok_line, tok_column);
        }
        break;
      case '>':
        if (i + 1 < text.size() && text[i + 1] == '=') {
          simple(Tok::Ge, 2);
        } else {
          throw ParseError("expected '>='", tok_line, tok_column);
        }
        break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", tok_line, tok_column);
    }
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.column = column;
  out.push_back(end);
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  FormulaPtr parse() {
    FormulaPtr f = parse_implies();
    expect(Tok::End, "unexpected trailing input");
    return f;
  }

 private:
  const Token& peek(size_t ahead = 0) const {
    size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }

  const Token& advance() { return toks_[pos_++]; }

  bool accept(Tok kind) {
    if (peek().kind == kind) {
      ++pos_;
      return true;
    }
    return false;
  }

  const Token& expect(Tok kind, const std::string& what) {
    if (peek().kind != kind) {
      throw ParseError(what, peek().line, peek().column);
    }
    return toks_[pos_++];
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, peek().line, peek().column);
  }

  bool at_temporal(const char* name) const {
    return peek().kind == Tok::Ident && peek().text == name && peek(1).kind == Tok::LBracket;
  }

  double parse_signed_number(const char* what) {
    double sign = 1.0;
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      if (advance().kind == Tok::Minus) sign = -sign;
    }
    const Token& tok = expect(Tok::Number, std::string("expected ") + what);
    return sign * tok.value;
  }

  Interval parse_window() {
    expect(Tok::LBracket, "expected '[' after temporal operator");
    const Token& lo_tok = peek();
    double lo = parse_signed_number("interval lower bound");
    expect(Tok::Comma, "expected ',' between interval bounds");
    const Token& hi_tok = peek();
    double hi = parse_signed_number("interval upper bound");
    expect(Tok::RBracket, "expected ']' after interval");
    if (lo < 0.0) {
      throw ParseError("interval lower bound must be nonnegative", lo_tok.line, lo_tok.column);
    }
    if (hi < lo) {
      throw ParseError("interval upper bound must not be below the lower bound", hi_tok.line,
                       hi_tok.column);
    }
    return Interval(lo, hi);
  }

  // implies := until ("=>" implies)?      right-associative
  FormulaPtr parse_implies() {
    FormulaPtr lhs = parse_until();
    if (accept(Tok::Arrow)) {
      return f_implies(std::move(lhs), parse_implies());
    }
    return lhs;
  }

  // until := or ("U[" num "," num "]" or)?   non-associative
  FormulaPtr parse_until() {
    FormulaPtr lhs = parse_or();
    if (!at_temporal("U")) return lhs;
    advance();
    Interval window = parse_window();
    FormulaPtr rhs = parse_or();
    if (at_temporal("U")) {
      fail("until does not chain; parenthesize one side");
    }
    return f_until(window, std::move(lhs), std::move(rhs));
  }

  FormulaPtr parse_or() {
    std::vector<FormulaPtr> children;
    children.push_back(parse_and());
    while (accept(Tok::OrOr)) children.push_back(parse_and());
    return f_or(std::move(children));
  }

  FormulaPtr parse_and() {
    std::vector<FormulaPtr> children;
    children.push_back(parse_unary());
    while (accept(Tok::AndAnd)) children.push_back(parse_unary());
    return f_and(std::move(children));
  }

  FormulaPtr parse_unary() {
    if (accept(Tok::Bang)) return f_not(parse_unary());
    if (at_temporal("G")) {
      advance();
      Interval window = parse_window();
      return f_always(window, parse_unary());
    }
    if (at_temporal("F")) {
      advance();
      Interval window = parse_window();
      return f_eventually(window, parse_unary());
    }
    return parse_primary();
  }

  FormulaPtr parse_primary() {
    if (accept(Tok::LParen)) {
      FormulaPtr f = parse_implies();
      expect(Tok::RParen, "expected ')'");
      return f;
    }
    if (peek().kind == Tok::Ident) {
      const std::string& name = peek().text;
      if (name == "true" && peek(1).kind != Tok::Dot) {
        advance();
        return f_true();
      }
      if ((name == "in" || name == "out") && peek(1).kind == Tok::LParen) {
        return parse_region_pred();
      }
      if (name == "sep" && peek(1).kind == Tok::LParen) {
        return parse_separation();
      }
      if (peek(1).kind == Tok::Dot) {
        return parse_halfspace();
      }
      fail("expected a formula, got '" + name + "'");
    }
    if (peek().kind == Tok::Number || peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      return parse_halfspace();
    }
    fail("expected a formula");
  }

  FormulaPtr parse_region_pred() {
    const Token& kw = advance();
    expect(Tok::LParen, "expected '(' after '" + kw.text + "'");
    std::string agent = expect(Tok::Ident, "expected agent name").text;
    expect(Tok::Comma, "expected ',' between agent and region");
    std::string region = expect(Tok::Ident, "expected region name").text;
    expect(Tok::RParen, "expected ')'");
    if (kw.text == "in") {
      return f_pred(InsideBox{std::move(agent), std::move(region), std::nullopt});
    }
    return f_pred(OutsideBox{std::move(agent), std::move(region), std::nullopt});
  }

  FormulaPtr parse_separation() {
    advance();
    expect(Tok::LParen, "expected '(' after 'sep'");
    std::string a = expect(Tok::Ident, "expected agent name").text;
    expect(Tok::Comma, "expected ',' between agents");
    std::string b = expect(Tok::Ident, "expected agent name").text;
    const Token& close = expect(Tok::RParen, "expected ')'");
    expect(Tok::Ge, "expected '>=' after sep(...)");
    const Token& num_tok = peek();
    double d = parse_signed_number("separation distance");
    if (d <= 0.0) {
      throw ParseError("separation distance must be positive", num_tok.line, num_tok.column);
    }
    if (a == b) {
      throw ParseError("separation needs two distinct agents", close.line, close.column);
    }
    return f_pred(Separation{std::move(a), std::move(b), d});
  }

  int axis_index(const Token& tok) {
    if (tok.text == "px") return 0;
    if (tok.text == "py") return 1;
    if (tok.text == "pz") return 2;
    throw ParseError("unknown axis '" + tok.text + "'; use px, py, or pz", tok.line, tok.column);
  }

  // signed sum of  coeff "*" agent "." axis  terms (coeff optional), then ">=" num
  FormulaPtr parse_halfspace() {
    Eigen::Vector3d coeffs = Eigen::Vector3d::Zero();
    std::string agent;
    while (true) {
      double sign = 1.0;
      while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
        if (advance().kind == Tok::Minus) sign = -sign;
      }
      double coeff = 1.0;
      if (peek().kind == Tok::Number) {
        coeff = advance().value;
        expect(Tok::Star, "expected '*' after coefficient");
      }
      const Token& agent_tok = expect(Tok::Ident, "expected agent name");
      if (agent.empty()) {
        agent = agent_tok.text;
      } else if (agent != agent_tok.text) {
        throw ParseError("linear predicate mixes agents '" + agent + "' and '" + agent_tok.text +
                             "'",
                         agent_tok.line, agent_tok.column);
      }
      expect(Tok::Dot, "expected '.' before axis");
      coeffs[axis_index(expect(Tok::Ident, "expected axis"))] += sign * coeff;
      if (peek().kind != Tok::Plus && peek().kind != Tok::Minus) break;
    }
    expect(Tok::Ge, "expected '>=' after linear expression");
    double rhs = parse_signed_number("threshold");
    return f_pred(Halfspace{std::move(agent), coeffs, -rhs});
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
};

}  // namespace

FormulaPtr parse_formula(const std::string& text) { return Parser(lex(text)).parse(); }

}  // namespace stlplan
