// Recursive-descent parser for the formula language.
//
//   imp   := or ('->' imp)?
//   or    := and ('|' and)*
//   and   := until ('&' until)*
//   until := unary ('U' until)?
//   unary := ('!' | 'X' | 'F' | 'G') unary | '(' imp ')' | 'true' | 'false' | atom
//   atom  := 't' digits op number      op in < <= > >=

#include <cctype>

#include "mplv/ltl.hpp"

namespace mplv::ltl {

namespace {

enum class Tok { End, LParen, RParen, Not, And, Or, Imp, Until, Next, Finally, Globally, True, False, Atom };

struct Token {
  Tok kind = Tok::End;
  std::size_t pos = 0;
  TimeDiff atom{};
};

class Lexer {
 public:
  Lexer(std::string_view text, Scale scale) : text_(text), scale_(scale) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      if (at_ >= text_.size()) break;
      const std::size_t start = at_;
      const char ch = text_[at_];
      switch (ch) {
        case '(': out.push_back({Tok::LParen, start}); ++at_; continue;
        case ')': out.push_back({Tok::RParen, start}); ++at_; continue;
        case '!': out.push_back({Tok::Not, start}); ++at_; continue;
        case '&': out.push_back({Tok::And, start}); at_ += peek_is(1, '&') ? 2 : 1; continue;
        case '|': out.push_back({Tok::Or, start}); at_ += peek_is(1, '|') ? 2 : 1; continue;
        case '-':
          if (peek_is(1, '>')) {
            out.push_back({Tok::Imp, start});
            at_ += 2;
            continue;
          }
          throw ParseError("expected '->'", start);
        default:
          break;
      }
      if (!std::isalpha(static_cast<unsigned char>(ch))) throw ParseError(std::string("unexpected character '") + ch + "'", start);
      std::size_t end = at_;
      while (end < text_.size() && std::isalnum(static_cast<unsigned char>(text_[end]))) ++end;
      const std::string_view word = text_.substr(at_, end - at_);
      if (word == "true") {
        out.push_back({Tok::True, start});
        at_ = end;
      } else if (word == "false") {
        out.push_back({Tok::False, start});
        at_ = end;
      } else if (word == "U") {
        out.push_back({Tok::Until, start});
        at_ = end;
      } else if (word.size() > 1 && word[0] == 't' && all_digits(word.substr(1))) {
        out.push_back(lex_atom(start, end));
      } else if (word.find_first_not_of("XFG") == std::string_view::npos) {
        // "GF" reads as G F
        for (std::size_t k = 0; k < word.size(); ++k) {
          const Tok t = word[k] == 'X' ? Tok::Next : word[k] == 'F' ? Tok::Finally : Tok::Globally;
          out.push_back({t, start + k});
        }
        at_ = end;
      } else {
        throw ParseError("unknown identifier '" + std::string(word) + "'", start);
      }
    }
    out.push_back({Tok::End, text_.size()});
    return out;
  }

 private:
  static bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
  }

  bool peek_is(std::size_t ahead, char c) const { return at_ + ahead < text_.size() && text_[at_ + ahead] == c; }

  void skip_space() {
    while (at_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[at_]))) ++at_;
  }

  Token lex_atom(std::size_t start, std::size_t end) {
    Token tok{Tok::Atom, start};
    const std::string digits(text_.substr(start + 1, end - start - 1));
    std::size_t index = 0;
    try {
      index = std::stoul(digits);
    } catch (const std::exception&) {
      throw ParseError("bad component index", start + 1);
    }
    if (index == 0) throw ParseError("component indices start at 1", start + 1);
    tok.atom.index = index - 1;
    at_ = end;
    skip_space();
    const std::size_t op_pos = at_;
    if (at_ >= text_.size()) throw ParseError("expected comparison operator", op_pos);
    const char c = text_[at_];
    const bool eq = peek_is(1, '=');
    if (c == '<') tok.atom.op = eq ? Cmp::Le : Cmp::Lt;
    else if (c == '>') tok.atom.op = eq ? Cmp::Ge : Cmp::Gt;
    else throw ParseError("expected comparison operator", op_pos);
    at_ += eq ? 2 : 1;
    skip_space();
    const std::size_t num_pos = at_;
    std::size_t num_end = at_;
    if (num_end < text_.size() && (text_[num_end] == '-' || text_[num_end] == '+')) ++num_end;
    while (num_end < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[num_end])) || text_[num_end] == '.' ||
            text_[num_end] == 'e' || text_[num_end] == 'E' ||
            ((text_[num_end] == '-' || text_[num_end] == '+') && (text_[num_end - 1] == 'e' || text_[num_end - 1] == 'E')))) {
      ++num_end;
    }
    if (num_end == num_pos) throw ParseError("expected a number", num_pos);
    try {
      tok.atom.alpha = parse_fixed(text_.substr(num_pos, num_end - num_pos), scale_);
    } catch (const ParseError& e) {
      throw ParseError("bad number '" + std::string(text_.substr(num_pos, num_end - num_pos)) + "'", num_pos);
    }
    at_ = num_end;
    return tok;
  }

  std::string_view text_;
  Scale scale_;
  std::size_t at_ = 0;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Formula run() {
    Formula f = imp();
    if (peek().kind != Tok::End) throw ParseError("unexpected trailing input", peek().pos);
    return normalize(f);
  }

 private:
  const Token& peek() const { return toks_[at_]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++at_;
    return true;
  }

  Formula imp() {
    Formula a = disjunction();
    if (accept(Tok::Imp)) return neg(conj(a, neg(imp())));
    return a;
  }

  Formula disjunction() {
    Formula a = conjunction();
    while (accept(Tok::Or)) a = neg(conj(neg(a), neg(conjunction())));
    return a;
  }

  Formula conjunction() {
    Formula a = until_expr();
    while (accept(Tok::And)) a = conj(a, until_expr());
    return a;
  }

  Formula until_expr() {
    Formula a = unary();
    if (accept(Tok::Until)) return until(a, until_expr());
    return a;
  }

  Formula unary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Not: ++at_; return neg(unary());
      case Tok::Next: ++at_; return next(unary());
      case Tok::Finally: ++at_; return eventually(unary());
      case Tok::Globally: ++at_; return always(unary());
      case Tok::True: ++at_; return tt();
      case Tok::False: ++at_; return neg(tt());
      case Tok::Atom: ++at_; return atom(t.atom);
      case Tok::LParen: {
        ++at_;
        Formula f = imp();
        if (!accept(Tok::RParen)) throw ParseError("expected ')'", peek().pos);
        return f;
      }
      case Tok::End:
        throw ParseError("unexpected end of input", t.pos);
      default:
        throw ParseError("expected a formula", t.pos);
    }
  }

  std::vector<Token> toks_;
  std::size_t at_ = 0;
};

}  // namespace

Formula parse(std::string_view text, Scale scale) { return Parser(Lexer(text, scale).run()).run(); }

}  // namespace mplv::ltl
