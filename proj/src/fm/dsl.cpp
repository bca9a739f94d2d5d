// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#include "varitune/fm/dsl.hpp"

#include <fmt/format.h>

#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "varitune/error.hpp"

namespace varitune::fm {
namespace {

enum class Tok {
  kName,
  kString,
  kLBrace,
  kRBrace,
  kLParen,
  kRParen,
  kNot,
  kAnd,
  kOr,
  kImplies,
  kIff,
  kEquals,
  kEnd
};

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    for (;;) {
      skip_space();
      Token tok;
      tok.line = line_;
      tok.column = column_;
      if (pos_ >= text_.size()) {
        tokens.push_back(tok);
        return tokens;
      }
      const char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        tok.kind = Tok::kName;
        while (pos_ < text_.size() && is_name_char(text_[pos_])) {
          tok.text.push_back(text_[pos_]);
          advance();
        }
      } else if (c == '"') {
        tok.kind = Tok::kString;
        tok.text = read_string(tok);
      } else {
        tok.kind = punct(tok);
      }
      tokens.push_back(std::move(tok));
    }
  }

 private:
  static bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
           c == '.' || c == '-';
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  std::string read_string(const Token& start) {
    std::string out;
    advance();  // opening quote
    for (;;) {
      if (pos_ >= text_.size() || text_[pos_] == '\n') {
        throw ParseError("unterminated string", start.line, start.column);
      }
      char c = text_[pos_];
      if (c == '"') {
        advance();
        return out;
      }
      if (c == '\\') {
        advance();
        if (pos_ >= text_.size()) {
          throw ParseError("unterminated string", start.line, start.column);
        }
        c = text_[pos_];
        if (c != '"' && c != '\\') {
          throw ParseError("unknown escape sequence", line_, column_);
        }
      }
      out.push_back(c);
      advance();
    }
  }

  Tok punct(const Token& tok) {
    const std::string_view rest = text_.substr(pos_);
    auto take = [&](std::size_t n, Tok kind) {
      for (std::size_t i = 0; i < n; ++i) advance();
      return kind;
    };
    if (rest.starts_with("<=>")) return take(3, Tok::kIff);
    if (rest.starts_with("=>")) return take(2, Tok::kImplies);
    switch (rest.front()) {
      case '{': return take(1, Tok::kLBrace);
      case '}': return take(1, Tok::kRBrace);
      case '(': return take(1, Tok::kLParen);
      case ')': return take(1, Tok::kRParen);
      case '!': return take(1, Tok::kNot);
      case '&': return take(1, Tok::kAnd);
      case '|': return take(1, Tok::kOr);
      case '=': return take(1, Tok::kEquals);
      default:
        break;
    }
    throw ParseError(fmt::format("unexpected character '{}'", rest.front()),
                     tok.line, tok.column);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

const char* describe(Tok kind) {
  switch (kind) {
    case Tok::kName: return "name";
    case Tok::kString: return "string";
    case Tok::kLBrace: return "'{'";
    case Tok::kRBrace: return "'}'";
    case Tok::kLParen: return "'('";
    case Tok::kRParen: return "')'";
    case Tok::kNot: return "'!'";
    case Tok::kAnd: return "'&'";
    case Tok::kOr: return "'|'";
    case Tok::kImplies: return "'=>'";
    case Tok::kIff: return "'<=>'";
    case Tok::kEquals: return "'='";
    case Tok::kEnd: return "end of input";
  }
  return "token";
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  FeatureModel run() {
    feature_decl(std::nullopt, EdgeKind::kMandatory);
    std::vector<Formula> constraints;
    if (at_keyword("constraints")) {
      next();
      expect(Tok::kLBrace);
      while (peek().kind != Tok::kRBrace) {
        if (peek().kind == Tok::kEnd) fail("expected '}' closing constraints");
        constraints.push_back(formula());
      }
      next();
    }
    if (peek().kind != Tok::kEnd) {
      fail(fmt::format("unexpected {} after model", describe(peek().kind)));
    }
    return FeatureModel(std::move(features_), std::move(constraints));
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_ == tokens_.size() - 1 ? pos_ : pos_++]; }

  bool at_keyword(std::string_view word) const {
    return peek().kind == Tok::kName && peek().text == word;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, peek().line, peek().column);
  }

  const Token& expect(Tok kind) {
    if (peek().kind != kind) {
      fail(fmt::format("expected {}, found {}", describe(kind),
                       describe(peek().kind)));
    }
    return next();
  }

  void expect_keyword(std::string_view word) {
    if (!at_keyword(word)) fail(fmt::format("expected '{}'", word));
    next();
  }

  std::size_t feature_decl(std::optional<std::size_t> parent, EdgeKind edge) {
    expect_keyword("feature");
    const Token name = expect(Tok::kName);
    if (!by_name_.emplace(name.text, features_.size()).second) {
      throw ParseError(fmt::format("duplicate feature name '{}'", name.text),
                       name.line, name.column);
    }
    const std::size_t index = features_.size();
    Feature f;
    f.name = name.text;
    f.edge = edge;
    f.parent = parent;
    features_.push_back(std::move(f));
    if (parent) features_[*parent].children.push_back(index);

    if (at_keyword("abstract")) {
      next();
      features_[index].is_abstract = true;
    }
    if (at_keyword("attr")) {
      const Token attr_tok = next();
      if (features_[index].is_abstract) {
        throw ParseError(
            fmt::format("abstract feature '{}' cannot carry an attribute",
                        name.text),
            attr_tok.line, attr_tok.column);
      }
      Attribute attr;
      expect_keyword("param");
      expect(Tok::kEquals);
      attr.param = expect(Tok::kString).text;
      expect_keyword("value");
      expect(Tok::kEquals);
      attr.value = expect(Tok::kString).text;
      features_[index].attribute = std::move(attr);
    }
    if (at_keyword("or")) {
      next();
      features_[index].group = GroupKind::kOr;
    } else if (at_keyword("alternative")) {
      next();
      features_[index].group = GroupKind::kAlternative;
    }
    const bool grouped = features_[index].group != GroupKind::kNone;
    // Consecutive brace blocks continue the same child list.
    while (peek().kind == Tok::kLBrace) {
      next();
      while (peek().kind != Tok::kRBrace) {
        if (at_keyword("feature")) {
          if (!grouped) {
            fail(fmt::format(
                "feature '{}' has no group; wrap children in mandatory/optional",
                name.text));
          }
          feature_decl(index, EdgeKind::kGrouped);
        } else if (at_keyword("mandatory") || at_keyword("optional")) {
          if (grouped) {
            fail(fmt::format(
                "group feature '{}' takes feature declarations directly",
                name.text));
          }
          const EdgeKind kind = peek().text == "mandatory"
                                    ? EdgeKind::kMandatory
                                    : EdgeKind::kOptional;
          next();
          expect(Tok::kLBrace);
          while (peek().kind != Tok::kRBrace) feature_decl(index, kind);
          next();
        } else {
          fail("expected 'feature', 'mandatory', 'optional' or '}'");
        }
      }
      next();
    }
    if (grouped && features_[index].children.empty()) {
      throw ParseError(
          fmt::format("group feature '{}' has no children", name.text),
          name.line, name.column);
    }
    return index;
  }

  Formula formula() { return iff(); }

  Formula iff() {
    Formula lhs = imp();
    while (peek().kind == Tok::kIff) {
      next();
      lhs = Formula::iff(std::move(lhs), imp());
    }
    return lhs;
  }

  Formula imp() {
    Formula lhs = disjunction();
    while (peek().kind == Tok::kImplies) {
      next();
      lhs = Formula::implies(std::move(lhs), disjunction());
    }
    return lhs;
  }

  Formula disjunction() {
    std::vector<Formula> parts{conjunction()};
    while (peek().kind == Tok::kOr) {
      next();
      parts.push_back(conjunction());
    }
    return Formula::any_of(std::move(parts));
  }

  Formula conjunction() {
    std::vector<Formula> parts{negation()};
    while (peek().kind == Tok::kAnd) {
      next();
      parts.push_back(negation());
    }
    return Formula::all_of(std::move(parts));
  }

  Formula negation() {
    if (peek().kind == Tok::kNot) {
      next();
      return Formula::negate(atom());
    }
    return atom();
  }

  Formula atom() {
    if (peek().kind == Tok::kLParen) {
      next();
      Formula inner = formula();
      expect(Tok::kRParen);
      return inner;
    }
    const Token& name = expect(Tok::kName);
    auto it = by_name_.find(name.text);
    if (it == by_name_.end()) {
      throw ParseError(fmt::format("undeclared feature {}", name.text),
                       name.line, name.column);
    }
    return Formula::var(it->second);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::vector<Feature> features_;
  std::unordered_map<std::string, std::size_t> by_name_;
};

std::string quote(std::string_view raw) {
  std::string out = "\"";
  for (char c : raw) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

int precedence(Formula::Op op) {
  switch (op) {
    case Formula::Op::kIff: return 1;
    case Formula::Op::kImplies: return 2;
    case Formula::Op::kOr: return 3;
    case Formula::Op::kAnd: return 4;
    case Formula::Op::kNot: return 5;
    case Formula::Op::kVar: return 6;
  }
  return 0;
}

void write_formula(const FeatureModel& model, const Formula& f,
                   std::string& out) {
  auto operand = [&](const Formula& child, bool wrap) {
    if (wrap) out.push_back('(');
    write_formula(model, child, out);
    if (wrap) out.push_back(')');
  };
  const int own = precedence(f.op);
  switch (f.op) {
    case Formula::Op::kVar:
      out += model.feature(f.feature).name;
      return;
    case Formula::Op::kNot:
      out.push_back('!');
      operand(f.operands[0], f.operands[0].op != Formula::Op::kVar);
      return;
    case Formula::Op::kAnd:
    case Formula::Op::kOr: {
      const char* sep = f.op == Formula::Op::kAnd ? " & " : " | ";
      for (std::size_t i = 0; i < f.operands.size(); ++i) {
        if (i > 0) out += sep;
        operand(f.operands[i], precedence(f.operands[i].op) <= own);
      }
      return;
    }
    case Formula::Op::kImplies:
    case Formula::Op::kIff:
      // Left-associative binary operators.
      operand(f.operands[0], precedence(f.operands[0].op) < own);
      out += f.op == Formula::Op::kImplies ? " => " : " <=> ";
      operand(f.operands[1], precedence(f.operands[1].op) <= own);
      return;
  }
}

void write_feature(const FeatureModel& model, std::size_t index, int depth,
                   std::string& out) {
  const Feature& f = model.feature(index);
  const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
  out += indent + "feature " + f.name;
  if (f.is_abstract) out += " abstract";
  if (f.attribute) {
    out += " attr param=" + quote(f.attribute->param) +
           " value=" + quote(f.attribute->value);
  }
  if (f.group == GroupKind::kOr) out += " or";
  if (f.group == GroupKind::kAlternative) out += " alternative";
  if (f.children.empty()) {
    out += "\n";
    return;
  }
  out += " {\n";
  if (f.group != GroupKind::kNone) {
    for (std::size_t child : f.children) {
      write_feature(model, child, depth + 1, out);
    }
  } else {
    // Runs of equal edge kinds share one block, preserving child order.
    std::size_t i = 0;
    while (i < f.children.size()) {
      const EdgeKind kind = model.feature(f.children[i]).edge;
      out += indent + "  " +
             (kind == EdgeKind::kMandatory ? "mandatory" : "optional") +
             " {\n";
      while (i < f.children.size() &&
             model.feature(f.children[i]).edge == kind) {
        write_feature(model, f.children[i], depth + 2, out);
        ++i;
      }
      out += indent + "  }\n";
    }
  }
  out += indent + "}\n";
}

}  // namespace

FeatureModel parse_model(std::string_view text) {
  return Parser(Lexer(text).run()).run();
}

FeatureModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(fmt::format("cannot open model file '{}'", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_model(buffer.str());
}

std::string format_formula(const FeatureModel& model, const Formula& formula) {
  std::string out;
  write_formula(model, formula, out);
  return out;
}

std::string serialize_model(const FeatureModel& model) {
  std::string out;
  write_feature(model, 0, 0, out);
  if (!model.constraints().empty()) {
    out += "constraints {\n";
    for (const Formula& c : model.constraints()) {
      out += "  " + format_formula(model, c) + "\n";
    }
    out += "}\n";
  }
  return out;
}

}  // namespace varitune::fm
