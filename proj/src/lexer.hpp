#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "ctt/error.hpp"
#include "ctt/type.hpp"

namespace ctt::detail {

struct Token {
  enum class Kind { Ident, Number, Punct, End };
  Kind kind;
  std::string text;
  std::size_t pos;
};

/// Splits input into identifiers (letters, digits, `_`, trailing `'`),
/// numbers and punctuation. `#` directly followed by a letter is the mu
/// binder; any other `#` starts a line comment.
inline std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto ident_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#') {
      if (i + 1 < src.size() &&
          std::isalpha(static_cast<unsigned char>(src[i + 1]))) {
        out.push_back({Token::Kind::Punct, "#", i});
        ++i;
        continue;
      }
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
        ++j;
      out.push_back({Token::Kind::Number, std::string(src.substr(i, j - i)), i});
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      while (j < src.size() && src[j] == '\'') ++j;
      out.push_back({Token::Kind::Ident, std::string(src.substr(i, j - i)), i});
      i = j;
      continue;
    }
    if (src.substr(i, 2) == "->" || src.substr(i, 2) == "|-") {
      out.push_back({Token::Kind::Punct, std::string(src.substr(i, 2)), i});
      i += 2;
      continue;
    }
    static constexpr std::string_view kPunct = "()[]{},:@.\\~;";
    if (kPunct.find(c) != std::string_view::npos) {
      out.push_back({Token::Kind::Punct, std::string(1, c), i});
      ++i;
      continue;
    }
    throw Error(ErrorKind::Syntax, "unexpected character '" + std::string(1, c) +
                                       "' at offset " + std::to_string(i));
  }
  out.push_back({Token::Kind::End, "", src.size()});
  return out;
}

class TokenStream {
 public:
  explicit TokenStream(std::string_view src) : toks_(lex(src)) {}

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  Token next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool at(std::string_view punct, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::Punct && t.text == punct;
  }
  bool at_ident(std::string_view word, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::Ident && t.text == word;
  }
  bool done() const { return peek().kind == Token::Kind::End; }
  bool accept(std::string_view punct) {
    if (!at(punct)) return false;
    next();
    return true;
  }
  void expect(std::string_view punct) {
    if (!accept(punct)) fail("expected '" + std::string(punct) + "'");
  }
  std::string ident() {
    if (peek().kind != Token::Kind::Ident) fail("expected identifier");
    return next().text;
  }
  int number() {
    if (peek().kind != Token::Kind::Number) fail("expected number");
    return std::stoi(next().text);
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw Error(ErrorKind::Syntax,
                msg + " at offset " + std::to_string(t.pos) +
                    (t.kind == Token::Kind::End ? " (end of input)"
                                                : " near '" + t.text + "'"));
  }
  std::size_t mark() const { return pos_; }
  void reset(std::size_t m) { pos_ = m; }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

/// Type expression at the stream position (defined with the parsers).
Type parse_type_tokens(TokenStream& ts);

}  // namespace ctt::detail
