// Lexer and recursive-descent parser shared by expressions, sequents and proof files.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hxd/syntax.hpp"

namespace hxd::detail {

enum class Tok {
  Ident, False, True, Eps,
  Arrow, Iff, Bar, Amp, Tilde, At, Lt, Gt, LBrack, RBrack, LParen, RParen,
  Semi, Colon, Quest, Eq, Neq, Comma, Turnstile, End
};

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

std::vector<Token> lex(std::string_view text, bool allow_reserved);
const char* tok_name(Tok t);

class Parser {
 public:
  Parser(std::string_view text, ParseOptions opt);

  NodeP node();
  PathP path();

  const Token& peek(int ahead = 0) const;
  bool at(Tok t) const { return peek().kind == t; }
  bool accept(Tok t);
  const Token& expect(Tok t);
  const Token& expect_nominal();
  [[noreturn]] void fail(const Token& at, const std::string& msg) const;
  void expect_end();

  enum class Ns { Prop, Nom, Mod, Cmp };
  void declare(const Token& t, Ns ns);

 private:
  NodeP imp();
  NodeP disj_();
  NodeP conj_();
  NodeP unary();
  NodeP atom();
  PathP seg();
  std::optional<std::pair<CmpPolarity, Ident>> cmpop();

  struct Mark {
    std::size_t pos;
    std::map<std::string, Ns> ns;
  };
  Mark mark() const { return {pos_, ns_}; }
  void reset(const Mark& m) { pos_ = m.pos; ns_ = m.ns; }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::map<std::string, Ns> ns_;
};

bool is_nominal_text(const std::string& s);

}  // namespace hxd::detail
