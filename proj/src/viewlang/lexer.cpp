#include <cctype>

#include "viz/viewlang.hpp"

namespace viz::lang {

namespace {

bool isWordStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool isWordChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool isDigit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  explicit Lexer(const std::string& text) : s_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (i_ < s_.size()) {
      const char c = s_[i_];
      if (c == ' ' || c == '\t' || c == '\f' || c == '\v') {
        advance();
      } else if (c == '\r') {
        advance();
      } else if (c == '\n') {
        out.push_back({Token::Kind::Newline, "\n", pos()});
        i_++;
        line_++;
        col_ = 1;
      } else if (c == '#') {
        while (i_ < s_.size() && s_[i_] != '\n') advance();
      } else if (c == '"') {
        out.push_back(string());
      } else if (startsNumber()) {
        out.push_back(number());
      } else if (isWordStart(c)) {
        const SourcePos p = pos();
        const std::size_t b = i_;
        while (i_ < s_.size() && isWordChar(s_[i_])) advance();
        out.push_back({Token::Kind::Word, s_.substr(b, i_ - b), p});
      } else if (c == '.' && peek(1) == '.') {
        out.push_back({Token::Kind::Symbol, "..", pos()});
        advance();
        advance();
      } else if (c == '=' || c == '(' || c == ')' || c == ',') {
        out.push_back({Token::Kind::Symbol, std::string(1, c), pos()});
        advance();
      } else {
        throw ParseError("unexpected character '" + std::string(1, c) + "'", pos(), std::string(1, c));
      }
    }
    out.push_back({Token::Kind::End, "", pos()});
    return out;
  }

 private:
  SourcePos pos() const { return {line_, col_}; }
  char peek(std::size_t k) const { return i_ + k < s_.size() ? s_[i_ + k] : '\0'; }
  void advance() {
    ++i_;
    ++col_;
  }

  bool startsNumber() const {
    const char c = s_[i_];
    if (isDigit(c)) return true;
    if (c == '-' || c == '+') return isDigit(peek(1)) || (peek(1) == '.' && isDigit(peek(2)));
    return c == '.' && isDigit(peek(1));
  }

  Token number() {
    const SourcePos p = pos();
    const std::size_t b = i_;
    if (s_[i_] == '-' || s_[i_] == '+') advance();
    while (isDigit(peek(0))) advance();
    // "1920x1200" pixel sizes lex as a single word.
    if (peek(0) == 'x' && isDigit(peek(1)) && isDigit(s_[b])) {
      advance();
      while (isDigit(peek(0))) advance();
      if (isWordChar(peek(0))) throw ParseError("malformed size", p, s_.substr(b, i_ - b + 1));
      return {Token::Kind::Word, s_.substr(b, i_ - b), p};
    }
    if (peek(0) == '.' && isDigit(peek(1))) {
      advance();
      while (isDigit(peek(0))) advance();
    }
    if ((peek(0) == 'e' || peek(0) == 'E') &&
        (isDigit(peek(1)) || ((peek(1) == '-' || peek(1) == '+') && isDigit(peek(2))))) {
      advance();
      if (peek(0) == '-' || peek(0) == '+') advance();
      while (isDigit(peek(0))) advance();
    }
    if (isWordChar(peek(0)) || (peek(0) == '.' && peek(1) != '.')) {
      throw ParseError("malformed number", p, s_.substr(b, i_ - b + 1));
    }
    return {Token::Kind::Number, s_.substr(b, i_ - b), p};
  }

  Token string() {
    const SourcePos open = pos();
    advance();
    std::string value;
    while (true) {
      if (i_ >= s_.size() || s_[i_] == '\n') throw ParseError("unterminated string", open, "\"");
      const char c = s_[i_];
      if (c == '"') {
        advance();
        break;
      }
      if (c == '\\') {
        const char e = peek(1);
        switch (e) {
          case '"': value += '"'; break;
          case '\\': value += '\\'; break;
          case 'n': value += '\n'; break;
          case 't': value += '\t'; break;
          default: throw ParseError("unknown escape \\" + std::string(1, e), pos(), std::string("\\") + e);
        }
        advance();
        advance();
        continue;
      }
      value += c;
      advance();
    }
    return {Token::Kind::String, value, open};
  }

  const std::string& s_;
  std::size_t i_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

}  // namespace

const char* tokenKindName(Token::Kind k) {
  switch (k) {
    case Token::Kind::Word: return "word";
    case Token::Kind::Number: return "number";
    case Token::Kind::String: return "string";
    case Token::Kind::Symbol: return "symbol";
    case Token::Kind::Newline: return "newline";
    case Token::Kind::End: return "end";
  }
  return "?";
}

std::vector<Token> tokenize(const std::string& text) { return Lexer(text).run(); }

}  // namespace viz::lang
