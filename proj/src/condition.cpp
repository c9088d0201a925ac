#include "acas/condition.hpp"

#include <cctype>
#include <optional>
#include <vector>

namespace acas {

const char* to_string(CompareOp op) {
  switch (op) {
    case CompareOp::Eq: return "==";
    case CompareOp::Ne: return "!=";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
  }
  return "?";
}

namespace {

enum class TokenKind { Path, Number, String, True, False, And, Or, Not, Exists,
                       LParen, RParen, Compare, End };

struct Token {
  TokenKind kind;
  std::string text;
  CompareOp op = CompareOp::Eq;
  std::size_t offset = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    while (true) {
      skip_spaces();
      const std::size_t start = pos_;
      if (pos_ >= text_.size()) {
        tokens.push_back({TokenKind::End, "", CompareOp::Eq, start});
        return tokens;
      }
      const char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        tokens.push_back(identifier(start));
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '-' && pos_ + 1 < text_.size() &&
                  std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
        tokens.push_back(number(start));
      } else if (c == '\'') {
        tokens.push_back(string_literal(start));
      } else if (c == '(') {
        ++pos_;
        tokens.push_back({TokenKind::LParen, "(", CompareOp::Eq, start});
      } else if (c == ')') {
        ++pos_;
        tokens.push_back({TokenKind::RParen, ")", CompareOp::Eq, start});
      } else {
        tokens.push_back(comparison(start));
      }
    }
  }

 private:
  void skip_spaces() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  Token identifier(std::size_t start) {
    auto segment = [this] {
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
    };
    segment();
    while (pos_ < text_.size() && text_[pos_] == '.') {
      const std::size_t dot = pos_;
      ++pos_;
      if (pos_ >= text_.size() || !(std::isalpha(static_cast<unsigned char>(text_[pos_])) ||
                                    text_[pos_] == '_')) {
        throw SyntaxError("expected path segment after '.'", dot + 1);
      }
      segment();
    }
    const std::string word = text_.substr(start, pos_ - start);
    if (word == "and") return {TokenKind::And, word, CompareOp::Eq, start};
    if (word == "or") return {TokenKind::Or, word, CompareOp::Eq, start};
    if (word == "not") return {TokenKind::Not, word, CompareOp::Eq, start};
    if (word == "exists") return {TokenKind::Exists, word, CompareOp::Eq, start};
    if (word == "true") return {TokenKind::True, word, CompareOp::Eq, start};
    if (word == "false") return {TokenKind::False, word, CompareOp::Eq, start};
    return {TokenKind::Path, word, CompareOp::Eq, start};
  }

  Token number(std::size_t start) {
    if (text_[pos_] == '-') ++pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        throw SyntaxError("expected digits after decimal point", pos_);
      }
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    return {TokenKind::Number, text_.substr(start, pos_ - start), CompareOp::Eq, start};
  }

  Token string_literal(std::size_t start) {
    ++pos_;  // opening quote
    const std::size_t begin = pos_;
    while (pos_ < text_.size() && text_[pos_] != '\'') ++pos_;
    if (pos_ >= text_.size()) throw SyntaxError("unterminated string literal", start);
    const std::string content = text_.substr(begin, pos_ - begin);
    ++pos_;  // closing quote
    return {TokenKind::String, content, CompareOp::Eq, start};
  }

  Token comparison(std::size_t start) {
    auto two = [this](char a, char b) {
      return text_[pos_] == a && pos_ + 1 < text_.size() && text_[pos_ + 1] == b;
    };
    if (two('=', '=')) { pos_ += 2; return {TokenKind::Compare, "==", CompareOp::Eq, start}; }
    if (two('!', '=')) { pos_ += 2; return {TokenKind::Compare, "!=", CompareOp::Ne, start}; }
    if (two('<', '=')) { pos_ += 2; return {TokenKind::Compare, "<=", CompareOp::Le, start}; }
    if (two('>', '=')) { pos_ += 2; return {TokenKind::Compare, ">=", CompareOp::Ge, start}; }
    if (text_[pos_] == '<') { ++pos_; return {TokenKind::Compare, "<", CompareOp::Lt, start}; }
    if (text_[pos_] == '>') { ++pos_; return {TokenKind::Compare, ">", CompareOp::Gt, start}; }
    throw SyntaxError(std::string("unexpected character '") + text_[pos_] + "'", start);
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  ExprPtr run() {
    ExprPtr expr = or_expr();
    expect(TokenKind::End, "expected end of expression");
    return expr;
  }

 private:
  const Token& peek() const { return tokens_[index_]; }
  const Token& advance() { return tokens_[index_++]; }

  void expect(TokenKind kind, const char* message) {
    if (peek().kind != kind) throw SyntaxError(message, peek().offset);
    advance();
  }

  ExprPtr or_expr() {
    ExprPtr left = and_expr();
    while (peek().kind == TokenKind::Or) {
      advance();
      auto node = std::make_shared<ConditionExpr>();
      node->kind = ConditionExpr::Kind::Or;
      node->lhs = left;
      node->rhs = and_expr();
      left = node;
    }
    return left;
  }

  ExprPtr and_expr() {
    ExprPtr left = unary();
    while (peek().kind == TokenKind::And) {
      advance();
      auto node = std::make_shared<ConditionExpr>();
      node->kind = ConditionExpr::Kind::And;
      node->lhs = left;
      node->rhs = unary();
      left = node;
    }
    return left;
  }

  ExprPtr unary() {
    if (peek().kind == TokenKind::Not) {
      advance();
      auto node = std::make_shared<ConditionExpr>();
      node->kind = ConditionExpr::Kind::Not;
      node->lhs = unary();
      return node;
    }
    return primary();
  }

  ExprPtr primary() {
    if (peek().kind == TokenKind::LParen) {
      advance();
      ExprPtr inner = or_expr();
      expect(TokenKind::RParen, "expected ')'");
      return inner;
    }
    if (peek().kind == TokenKind::Exists) {
      advance();
      expect(TokenKind::LParen, "expected '(' after exists");
      if (peek().kind != TokenKind::Path) {
        throw SyntaxError("expected context path inside exists()", peek().offset);
      }
      auto node = std::make_shared<ConditionExpr>();
      node->kind = ConditionExpr::Kind::Exists;
      node->path = advance().text;
      expect(TokenKind::RParen, "expected ')'");
      return node;
    }
    return comparison();
  }

  ExprPtr comparison() {
    const std::size_t startOffset = peek().offset;
    Operand left = operand();
    if (peek().kind != TokenKind::Compare) {
      throw SyntaxError("expected comparison operator", peek().offset);
    }
    const CompareOp op = advance().op;
    Operand right = operand();
    if (!left.isPath && !right.isPath) {
      throw SyntaxError("comparison requires at least one context path", startOffset);
    }
    auto node = std::make_shared<ConditionExpr>();
    node->kind = ConditionExpr::Kind::Compare;
    node->op = op;
    node->left = std::move(left);
    node->right = std::move(right);
    return node;
  }

  Operand operand() {
    const Token& token = peek();
    switch (token.kind) {
      case TokenKind::Path:
        advance();
        return {true, token.text, Value()};
      case TokenKind::Number:
        advance();
        return {false, "", Value::parse(token.text)};
      case TokenKind::String:
        advance();
        return {false, "", Value(token.text)};
      case TokenKind::True:
        advance();
        return {false, "", Value(true)};
      case TokenKind::False:
        advance();
        return {false, "", Value(false)};
      default:
        throw SyntaxError("expected context path or literal", token.offset);
    }
  }

  std::vector<Token> tokens_;
  std::size_t index_ = 0;
};

int precedence(ConditionExpr::Kind kind) {
  switch (kind) {
    case ConditionExpr::Kind::Or: return 1;
    case ConditionExpr::Kind::And: return 2;
    case ConditionExpr::Kind::Not: return 3;
    default: return 4;
  }
}

std::string print_operand(const Operand& operand) {
  if (operand.isPath) return operand.path;
  if (operand.literal.is_string()) return "'" + operand.literal.get<std::string>() + "'";
  return operand.literal.dump();
}

void print(const ConditionExpr& expr, int parentPrecedence, std::string& out) {
  const int prec = precedence(expr.kind);
  const bool parens = prec < parentPrecedence;
  if (parens) out += "(";
  switch (expr.kind) {
    case ConditionExpr::Kind::Or:
      print(*expr.lhs, prec, out);
      out += " or ";
      print(*expr.rhs, prec + 1, out);
      break;
    case ConditionExpr::Kind::And:
      print(*expr.lhs, prec, out);
      out += " and ";
      print(*expr.rhs, prec + 1, out);
      break;
    case ConditionExpr::Kind::Not:
      out += "not ";
      print(*expr.lhs, prec, out);
      break;
    case ConditionExpr::Kind::Compare:
      out += print_operand(expr.left);
      out += " ";
      out += to_string(expr.op);
      out += " ";
      out += print_operand(expr.right);
      break;
    case ConditionExpr::Kind::Exists:
      out += "exists(" + expr.path + ")";
      break;
  }
  if (parens) out += ")";
}

// Cross-type equality is false, not an error; only ordering is restricted
// to numbers.
bool values_equal(const Value& a, const Value& b) {
  if (a.is_number() && b.is_number()) return a.get<double>() == b.get<double>();
  if (a.type() != b.type()) return false;
  return a == b;
}

bool evaluate_compare(const ConditionExpr& expr, const ContextAccessor& context) {
  auto resolve = [&context](const Operand& operand) -> Value {
    return operand.isPath ? context.resolve(operand.path) : operand.literal;
  };
  const Value left = resolve(expr.left);
  const Value right = resolve(expr.right);
  switch (expr.op) {
    case CompareOp::Eq: return values_equal(left, right);
    case CompareOp::Ne: return !values_equal(left, right);
    default: break;
  }
  if (!left.is_number() || !right.is_number()) {
    const auto& offender = !left.is_number() ? expr.left : expr.right;
    throw AcasError(ErrorCode::TypeMismatch,
                    std::string("ordering comparison '") + to_string(expr.op) +
                        "' requires numbers, got " +
                        (offender.isPath ? "path " + offender.path : offender.literal.dump()),
                    offender.isPath ? offender.path : "");
  }
  const double l = left.get<double>();
  const double r = right.get<double>();
  switch (expr.op) {
    case CompareOp::Lt: return l < r;
    case CompareOp::Le: return l <= r;
    case CompareOp::Gt: return l > r;
    case CompareOp::Ge: return l >= r;
    default: return false;
  }
}

bool evaluate(const ConditionExpr& expr, const ContextAccessor& context);

/// Evaluates a branch, capturing Unavailable/TypeMismatch instead of
/// propagating so the caller can apply the determination rule. The captured
/// exception keeps its concrete type.
std::optional<bool> try_evaluate(const ConditionExpr& expr, const ContextAccessor& context,
                                 std::exception_ptr& error) {
  try {
    return evaluate(expr, context);
  } catch (const AcasError&) {
    if (!error) error = std::current_exception();
    return std::nullopt;
  }
}

bool evaluate(const ConditionExpr& expr, const ContextAccessor& context) {
  switch (expr.kind) {
    case ConditionExpr::Kind::And: {
      std::exception_ptr error;
      const auto left = try_evaluate(*expr.lhs, context, error);
      if (left.has_value() && !*left) return false;  // short-circuit
      const auto right = try_evaluate(*expr.rhs, context, error);
      if (right.has_value() && !*right) return false;
      if (left.has_value() && right.has_value()) return true;
      std::rethrow_exception(error);
    }
    case ConditionExpr::Kind::Or: {
      std::exception_ptr error;
      const auto left = try_evaluate(*expr.lhs, context, error);
      if (left.has_value() && *left) return true;  // short-circuit
      const auto right = try_evaluate(*expr.rhs, context, error);
      if (right.has_value() && *right) return true;
      if (left.has_value() && right.has_value()) return false;
      std::rethrow_exception(error);
    }
    case ConditionExpr::Kind::Not:
      return !evaluate(*expr.lhs, context);
    case ConditionExpr::Kind::Compare:
      return evaluate_compare(expr, context);
    case ConditionExpr::Kind::Exists:
      return context.can_resolve(expr.path);
  }
  return false;
}

void collect_paths(const ConditionExpr& expr, bool includeExists, std::set<std::string>& out) {
  switch (expr.kind) {
    case ConditionExpr::Kind::And:
    case ConditionExpr::Kind::Or:
      collect_paths(*expr.lhs, includeExists, out);
      collect_paths(*expr.rhs, includeExists, out);
      break;
    case ConditionExpr::Kind::Not:
      collect_paths(*expr.lhs, includeExists, out);
      break;
    case ConditionExpr::Kind::Compare:
      if (expr.left.isPath) out.insert(expr.left.path);
      if (expr.right.isPath) out.insert(expr.right.path);
      break;
    case ConditionExpr::Kind::Exists:
      if (includeExists) out.insert(expr.path);
      break;
  }
}

}  // namespace

AdaptationCondition parse_condition(const std::string& text) {
  ExprPtr ast = Parser(Lexer(text).run()).run();
  return {text, std::move(ast)};
}

std::string pretty_print(const ConditionExpr& expr) {
  std::string out;
  print(expr, 0, out);
  return out;
}

bool evaluate_condition(const AdaptationCondition& condition, const ContextAccessor& context) {
  if (!condition.ast) {
    throw AcasError(ErrorCode::SyntaxError, "condition has no parsed expression");
  }
  return evaluate(*condition.ast, context);
}

bool structurally_equal(const ConditionExpr& a, const ConditionExpr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ConditionExpr::Kind::And:
    case ConditionExpr::Kind::Or:
      return structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
    case ConditionExpr::Kind::Not:
      return structurally_equal(*a.lhs, *b.lhs);
    case ConditionExpr::Kind::Compare: {
      auto operand_equal = [](const Operand& x, const Operand& y) {
        if (x.isPath != y.isPath) return false;
        return x.isPath ? x.path == y.path : x.literal == y.literal;
      };
      return a.op == b.op && operand_equal(a.left, b.left) && operand_equal(a.right, b.right);
    }
    case ConditionExpr::Kind::Exists:
      return a.path == b.path;
  }
  return false;
}

std::set<std::string> compared_paths(const ConditionExpr& expr) {
  std::set<std::string> out;
  collect_paths(expr, false, out);
  return out;
}

std::set<std::string> all_paths(const ConditionExpr& expr) {
  std::set<std::string> out;
  collect_paths(expr, true, out);
  return out;
}

}  // namespace acas
