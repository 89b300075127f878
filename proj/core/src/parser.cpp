#include <cctype>

#include "parse_impl.hpp"

namespace hxd::detail {

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::False: return "'false'";
    case Tok::True: return "'true'";
    case Tok::Eps: return "'eps'";
    case Tok::Arrow: return "'->'";
    case Tok::Iff: return "'<->'";
    case Tok::Bar: return "'|'";
    case Tok::Amp: return "'&'";
    case Tok::Tilde: return "'~'";
    case Tok::At: return "'@'";
    case Tok::Lt: return "'<'";
    case Tok::Gt: return "'>'";
    case Tok::LBrack: return "'['";
    case Tok::RBrack: return "']'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Semi: return "';'";
    case Tok::Colon: return "':'";
    case Tok::Quest: return "'?'";
    case Tok::Eq: return "'='";
    case Tok::Neq: return "'!='";
    case Tok::Comma: return "','";
    case Tok::Turnstile: return "'|-'";
    case Tok::End: return "end of input";
  }
  return "?";
}

bool is_nominal_text(const std::string& s) {
  return !s.empty() && (std::isupper(static_cast<unsigned char>(s[0])) || is_reserved(s));
}

std::vector<Token> lex(std::string_view text, bool allow_reserved) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t k = 0;
  auto adv = [&](std::size_t n) {
    for (std::size_t m = 0; m < n; ++m) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(text[k]) & 0xC0) != 0x80) {
        ++col;
      }
      ++k;
    }
  };
  auto push = [&](Tok t, std::size_t n) {
    out.push_back({t, std::string(text.substr(k, n)), line, col});
    adv(n);
  };
  while (k < text.size()) {
    char c = text[k];
    if (std::isspace(static_cast<unsigned char>(c))) {
      adv(1);
      continue;
    }
    if (c == '#') {
      while (k < text.size() && text[k] != '\n') adv(1);
      continue;
    }
    auto rest = text.substr(k);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t n = 1;
      while (n < rest.size() &&
             (std::isalnum(static_cast<unsigned char>(rest[n])) || rest[n] == '_'))
        ++n;
      std::string word(rest.substr(0, n));
      if (c == '_' && !(allow_reserved && is_reserved(word)))
        throw ParseError(line, col, "unexpected character '_'");
      Tok t = Tok::Ident;
      if (word == "false") t = Tok::False;
      else if (word == "true") t = Tok::True;
      else if (word == "eps") t = Tok::Eps;
      push(t, n);
      continue;
    }
    if (rest.starts_with("<->")) { push(Tok::Iff, 3); continue; }
    if (rest.starts_with("->")) { push(Tok::Arrow, 2); continue; }
    if (rest.starts_with("|-")) { push(Tok::Turnstile, 2); continue; }
    if (rest.starts_with("\xE2\x8A\xA2")) { push(Tok::Turnstile, 3); continue; }
    if (rest.starts_with("!=")) { push(Tok::Neq, 2); continue; }
    Tok t;
    switch (c) {
      case '|': t = Tok::Bar; break;
      case '&': t = Tok::Amp; break;
      case '~': t = Tok::Tilde; break;
      case '@': t = Tok::At; break;
      case '<': t = Tok::Lt; break;
      case '>': t = Tok::Gt; break;
      case '[': t = Tok::LBrack; break;
      case ']': t = Tok::RBrack; break;
      case '(': t = Tok::LParen; break;
      case ')': t = Tok::RParen; break;
      case ';': t = Tok::Semi; break;
      case ':': t = Tok::Colon; break;
      case '?': t = Tok::Quest; break;
      case '=': t = Tok::Eq; break;
      case ',': t = Tok::Comma; break;
      default:
        throw ParseError(line, col, std::string("unexpected character '") + c + "'");
    }
    push(t, 1);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

Parser::Parser(std::string_view text, ParseOptions opt) : toks_(lex(text, opt.allow_reserved)) {}

const Token& Parser::peek(int ahead) const {
  std::size_t p = pos_ + ahead;
  return p < toks_.size() ? toks_[p] : toks_.back();
}

bool Parser::accept(Tok t) {
  if (!at(t)) return false;
  ++pos_;
  return true;
}

void Parser::fail(const Token& t, const std::string& msg) const {
  throw ParseError(t.line, t.col, msg);
}

const Token& Parser::expect(Tok t) {
  if (!at(t))
    fail(peek(), std::string("expected ") + tok_name(t) + ", found " +
                     (peek().kind == Tok::End ? std::string("end of input") : "'" + peek().text + "'"));
  return toks_[pos_++];
}

const Token& Parser::expect_nominal() {
  if (!at(Tok::Ident) || !is_nominal_text(peek().text))
    fail(peek(), "expected nominal (uppercase identifier)");
  declare(peek(), Ns::Nom);
  return toks_[pos_++];
}

void Parser::expect_end() {
  if (!at(Tok::End)) fail(peek(), "unexpected '" + peek().text + "', expected end of input");
}

void Parser::declare(const Token& t, Ns ns) {
  static const char* names[] = {"proposition", "nominal", "modality", "comparison sort"};
  auto [it, fresh] = ns_.emplace(t.text, ns);
  if (!fresh && it->second != ns)
    fail(t, "namespace clash: '" + t.text + "' used as " + names[int(it->second)] + " and " +
                names[int(ns)]);
}

NodeP Parser::node() { return imp(); }

NodeP Parser::imp() {
  NodeP l = disj_();
  if (accept(Tok::Arrow)) return hxd::imp(l, imp());
  if (accept(Tok::Iff)) return iff(l, imp());
  return l;
}

NodeP Parser::disj_() {
  NodeP l = conj_();
  while (accept(Tok::Bar)) l = disj(l, conj_());
  return l;
}

NodeP Parser::conj_() {
  NodeP l = unary();
  while (accept(Tok::Amp)) l = conj(l, unary());
  return l;
}

std::optional<std::pair<CmpPolarity, Ident>> Parser::cmpop() {
  CmpPolarity pol;
  if (accept(Tok::Eq)) pol = CmpPolarity::Eq;
  else if (accept(Tok::Neq)) pol = CmpPolarity::Neq;
  else return std::nullopt;
  if (!at(Tok::Ident)) fail(peek(), "expected comparison sort after comparison operator");
  declare(peek(), Ns::Cmp);
  return std::make_pair(pol, toks_[pos_++].text);
}

NodeP Parser::unary() {
  if (accept(Tok::Tilde)) return neg(unary());
  if (accept(Tok::At)) {
    Ident i = expect_nominal().text;
    return hxd::at(i, unary());
  }
  if (at(Tok::Lt) || at(Tok::LBrack)) {
    bool angle = at(Tok::Lt);
    ++pos_;
    PathP l = path();
    if (auto op = cmpop()) {
      PathP r = path();
      expect(angle ? Tok::Gt : Tok::RBrack);
      return angle ? cmp(op->first, op->second, l, r) : box_cmp(op->first, op->second, l, r);
    }
    if (!at(angle ? Tok::Gt : Tok::RBrack))
      fail(peek(), std::string("expected ") + tok_name(angle ? Tok::Gt : Tok::RBrack) +
                       ", ';', '=' or '!='");
    ++pos_;
    NodeP body = unary();
    return angle ? diamond(l, body) : box(l, body);
  }
  return atom();
}

NodeP Parser::atom() {
  const Token& t = peek();
  switch (t.kind) {
    case Tok::False: ++pos_; return bot();
    case Tok::True: ++pos_; return top();
    case Tok::Ident:
      if (is_nominal_text(t.text)) {
        declare(t, Ns::Nom);
        ++pos_;
        return nom(t.text);
      }
      declare(t, Ns::Prop);
      ++pos_;
      return prop(t.text);
    case Tok::LParen: {
      ++pos_;
      NodeP e = node();
      expect(Tok::RParen);
      return e;
    }
    default:
      fail(t, "expected one of 'false', 'true', identifier, '(', '~', '@', '<', '[', found " +
                  (t.kind == Tok::End ? std::string("end of input") : "'" + t.text + "'"));
  }
}

PathP Parser::path() {
  PathP first = seg();
  if (!accept(Tok::Semi)) return first;
  return comp(first, path());
}

PathP Parser::seg() {
  Mark m = mark();
  std::optional<ParseError> node_err;
  try {
    NodeP cond = node();
    if (accept(Tok::Quest)) return test(cond);
  } catch (const ParseError& e) {
    node_err = e;
  }
  reset(m);
  const Token& t = peek();
  if (accept(Tok::Eps)) return eps();
  if (t.kind == Tok::Ident) {
    if (is_nominal_text(t.text) && peek(1).kind == Tok::Colon) {
      declare(t, Ns::Nom);
      pos_ += 2;
      return go(t.text);
    }
    if (!is_nominal_text(t.text)) {
      declare(t, Ns::Mod);
      ++pos_;
      return step(t.text);
    }
  }
  if (t.kind == Tok::LParen) {
    try {
      ++pos_;
      PathP p = path();
      expect(Tok::RParen);
      return p;
    } catch (const ParseError& e) {
      if (!node_err || std::pair(e.line, e.col) > std::pair(node_err->line, node_err->col)) throw;
      throw *node_err;
    }
  }
  if (node_err && (node_err->line > t.line || (node_err->line == t.line && node_err->col > t.col)))
    throw *node_err;
  fail(t, "expected path segment (modality, 'N:', 'phi?', 'eps' or '(')");
}

}  // namespace hxd::detail

namespace hxd {

NodeP parse_node(std::string_view text, ParseOptions opt) {
  detail::Parser p(text, opt);
  NodeP e = p.node();
  p.expect_end();
  return e;
}

PathP parse_path(std::string_view text, ParseOptions opt) {
  detail::Parser p(text, opt);
  PathP a = p.path();
  p.expect_end();
  return a;
}

}  // namespace hxd
