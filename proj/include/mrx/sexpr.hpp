#pragma once

#include <cctype>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mrx {

struct SourcePos {
  int line = 1;
  int col = 1;
};

enum class PddlErrorKind { Syntax, Unsupported, Semantic, UndeclaredObject };

inline const char* to_string(PddlErrorKind k) {
  switch (k) {
    case PddlErrorKind::Syntax: return "syntax error";
    case PddlErrorKind::Unsupported: return "unsupported feature";
    case PddlErrorKind::Semantic: return "semantic error";
    case PddlErrorKind::UndeclaredObject: return "undeclared object";
  }
  return "error";
}

/// Error raised by the PDDL front-end. `what()` carries a `file:line:col:`
/// prefixed diagnostic; the structured fields are available separately.
class PddlError : public std::runtime_error {
 public:
  PddlError(PddlErrorKind kind, SourcePos pos, const std::string& message,
            const std::string& file = "<input>")
      : std::runtime_error(file + ":" + std::to_string(pos.line) + ":" +
                           std::to_string(pos.col) + ": " + to_string(kind) +
                           ": " + message),
        kind_(kind),
        pos_(pos),
        message_(message) {}

  PddlErrorKind kind() const noexcept { return kind_; }
  SourcePos pos() const noexcept { return pos_; }
  const std::string& message() const noexcept { return message_; }

 private:
  PddlErrorKind kind_;
  SourcePos pos_;
  std::string message_;
};

/// A parsed s-expression node. Atoms are lower-cased on read.
struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
  SourcePos pos;

  bool is_atom() const { return !is_list; }
  bool is_atom(std::string_view s) const { return !is_list && atom == s; }
  /// True when this is a list whose head atom equals `head`.
  bool headed(std::string_view head) const {
    return is_list && !items.empty() && items.front().is_atom(head);
  }
};

namespace detail {

class SExprReader {
 public:
  SExprReader(std::string_view text, std::string file)
      : text_(text), file_(std::move(file)) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    skip_ws();
    while (i_ < text_.size()) {
      out.push_back(read());
      skip_ws();
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, SourcePos p) const {
    throw PddlError(PddlErrorKind::Syntax, p, msg, file_);
  }

  void advance() {
    if (text_[i_] == '\n') {
      ++pos_.line;
      pos_.col = 1;
    } else {
      ++pos_.col;
    }
    ++i_;
  }

  void skip_ws() {
    while (i_ < text_.size()) {
      char c = text_[i_];
      if (c == ';') {
        while (i_ < text_.size() && text_[i_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read() {
    skip_ws();
    if (i_ >= text_.size()) fail("unexpected end of input", pos_);
    SExpr node;
    node.pos = pos_;
    char c = text_[i_];
    if (c == ')') fail("unbalanced ')'", pos_);
    if (c == '(') {
      node.is_list = true;
      advance();
      for (;;) {
        skip_ws();
        if (i_ >= text_.size()) fail("missing ')' for list opened here", node.pos);
        if (text_[i_] == ')') {
          advance();
          break;
        }
        node.items.push_back(read());
      }
      return node;
    }
    while (i_ < text_.size()) {
      char d = text_[i_];
      if (d == '(' || d == ')' || d == ';' ||
          std::isspace(static_cast<unsigned char>(d)))
        break;
      node.atom.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(d))));
      advance();
    }
    return node;
  }

  std::string_view text_;
  std::string file_;
  std::size_t i_ = 0;
  SourcePos pos_;
};

}  // namespace detail

/// Reads every top-level s-expression in `text`.
inline std::vector<SExpr> read_sexprs(std::string_view text,
                                      const std::string& file = "<input>") {
  return detail::SExprReader(text, file).read_all();
}

}  // namespace mrx
