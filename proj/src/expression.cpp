#include "wbp/expression.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "wbp/error.hpp"

namespace wbp {

struct Expression::Node {
  std::function<double(const Eigen::VectorXd&)> eval;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Fn = std::function<double(const Eigen::VectorXd&)>;

NodePtr make(Fn f) { return std::make_shared<const Expression::Node>(Expression::Node{std::move(f)}); }

class Parser {
 public:
  Parser(const std::string& text, int n) : s_(text), n_(n) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw DomainError("expression column " + std::to_string(pos_ + 1) + ": " + what);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        NodePtr rhs = term();
        lhs = make([lhs, rhs](const Eigen::VectorXd& x) { return lhs->eval(x) + rhs->eval(x); });
      } else if (accept('-')) {
        NodePtr rhs = term();
        lhs = make([lhs, rhs](const Eigen::VectorXd& x) { return lhs->eval(x) - rhs->eval(x); });
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        NodePtr rhs = unary();
        lhs = make([lhs, rhs](const Eigen::VectorXd& x) { return lhs->eval(x) * rhs->eval(x); });
      } else if (accept('/')) {
        NodePtr rhs = unary();
        lhs = make([lhs, rhs](const Eigen::VectorXd& x) { return lhs->eval(x) / rhs->eval(x); });
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) {
      NodePtr a = unary();
      return make([a](const Eigen::VectorXd& x) { return -a->eval(x); });
    }
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) {
      NodePtr ex = unary();
      return make([base, ex](const Eigen::VectorXd& x) { return std::pow(base->eval(x), ex->eval(x)); });
    }
    return base;
  }

  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return name();
    if (accept('(')) {
      NodePtr e = expr();
      expect(')');
      return e;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    return make([value](const Eigen::VectorXd&) { return value; });
  }

  NodePtr name() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string id = s_.substr(start, pos_ - start);
    if (id == "r") return make([](const Eigen::VectorXd& x) { return x.norm(); });
    if (id == "rp") return make([](const Eigen::VectorXd& x) { return x.head(x.size() - 1).norm(); });
    if (id == "pi") return make([](const Eigen::VectorXd&) { return std::numbers::pi; });
    if (id.size() >= 2 && id[0] == 'x' && std::all_of(id.begin() + 1, id.end(), ::isdigit)) {
      const int k = std::stoi(id.substr(1));
      if (k < 1 || k > n_) fail("coordinate " + id + " out of range for n = " + std::to_string(n_));
      return make([k](const Eigen::VectorXd& x) { return x[k - 1]; });
    }
    static const std::vector<std::pair<std::string, double (*)(double)>> unary_fns = {
        {"exp", [](double a) { return std::exp(a); }},   {"log", [](double a) { return std::log(a); }},
        {"sqrt", [](double a) { return std::sqrt(a); }}, {"abs", [](double a) { return std::abs(a); }}};
    for (const auto& [fname, fn] : unary_fns) {
      if (id != fname) continue;
      expect('(');
      NodePtr a = expr();
      expect(')');
      return make([a, fn](const Eigen::VectorXd& x) { return fn(a->eval(x)); });
    }
    if (id == "pow") {
      expect('(');
      NodePtr a = expr();
      expect(',');
      NodePtr b = expr();
      expect(')');
      return make([a, b](const Eigen::VectorXd& x) { return std::pow(a->eval(x), b->eval(x)); });
    }
    pos_ = start;
    fail("unknown name '" + id + "'");
  }

  const std::string& s_;
  int n_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text, int n) {
  Expression e;
  e.text_ = text;
  e.root_ = Parser(text, n).parse();
  return e;
}

double Expression::operator()(const Eigen::VectorXd& x) const { return root_->eval(x); }

}  // namespace wbp
