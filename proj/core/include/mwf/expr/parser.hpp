#pragma once

// Recursive-descent parser shared by scalar expressions and form literals.
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | base ('^' integer)?
//   base   := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
//
// A Builder supplies the semantics. Builders that set `kWedge` also accept
// `a ^ b` with a non-integer right operand, and `kJuxtapose` enables implicit
// multiplication ("x1 dx2").

#include "mwf/expr/errors.hpp"
#include "mwf/expr/rational.hpp"

#include <cctype>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mwf::expr::detail {

enum class Tok : std::uint8_t { Number, Ident, Op, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t offset = 0;
};

std::vector<Token> tokenize(std::string_view text);

template <class Builder>
class Parser {
 public:
  using Value = typename Builder::Value;

  Parser(std::string_view text, Builder& builder) : tokens_(tokenize(text)), b_(builder) {}

  Value parse() {
    Value v = expression();
    if (peek().kind != Tok::End) throw ParseError(peek().offset, "unexpected token '" + peek().text + "'");
    return v;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  bool at_op(char c) const { return peek().kind == Tok::Op && peek().text[0] == c; }
  const Token& advance() { return tokens_[pos_++]; }

  void expect_op(char c) {
    if (!at_op(c)) {
      throw ParseError(peek().offset, std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  Value expression() {
    Value v = term();
    while (at_op('+') || at_op('-')) {
      const Token& op = advance();
      Value rhs = term();
      v = op.text[0] == '+' ? b_.add(std::move(v), std::move(rhs), op.offset)
                            : b_.sub(std::move(v), std::move(rhs), op.offset);
    }
    return v;
  }

  bool starts_operand() const {
    return peek().kind == Tok::Ident || peek().kind == Tok::Number || at_op('(');
  }

  Value term() {
    Value v = factor();
    while (true) {
      if (at_op('*') || at_op('/')) {
        const Token& op = advance();
        Value rhs = factor();
        v = op.text[0] == '*' ? b_.mul(std::move(v), std::move(rhs), op.offset)
                              : b_.div(std::move(v), std::move(rhs), op.offset);
      } else if (Builder::kJuxtapose && starts_operand()) {
        const std::size_t at = peek().offset;
        Value rhs = factor();
        v = b_.mul(std::move(v), std::move(rhs), at);
      } else {
        return v;
      }
    }
  }

  Value factor() {
    if (at_op('-')) {
      const std::size_t at = advance().offset;
      return b_.neg(factor(), at);
    }
    Value base_value = base();
    if (!at_op('^')) return base_value;
    const std::size_t caret = advance().offset;
    const bool signed_int = at_op('-') && pos_ + 1 < tokens_.size() && tokens_[pos_ + 1].kind == Tok::Number;
    if (peek().kind == Tok::Number || signed_int) {
      bool negative = false;
      if (signed_int) {
        negative = true;
        ++pos_;
      }
      const Token& num = advance();
      const Rational r = parse_rational(num.text);
      if (!is_integer(r)) throw ParseError(num.offset, "exponent must be an integer");
      const BigInt limit = 1 << 20;
      if (boost::multiprecision::numerator(r) > limit) throw ParseError(num.offset, "exponent too large");
      const int n = static_cast<int>(boost::multiprecision::numerator(r));
      return b_.power(std::move(base_value), negative ? -n : n, caret);
    }
    if constexpr (Builder::kWedge) {
      Value rhs = factor();
      return b_.wedge(std::move(base_value), std::move(rhs), caret);
    } else {
      throw ParseError(peek().offset, "expected integer exponent");
    }
  }

  Value base() {
    const Token& tok = peek();
    switch (tok.kind) {
      case Tok::Number: {
        advance();
        return b_.number(parse_rational(tok.text), tok.offset);
      }
      case Tok::Ident: {
        const Token& ident = advance();
        if (!at_op('(')) return b_.identifier(ident.text, ident.offset);
        advance();
        std::vector<Value> args;
        std::vector<std::size_t> offsets;
        offsets.push_back(peek().offset);
        args.push_back(expression());
        while (at_op(',')) {
          advance();
          offsets.push_back(peek().offset);
          args.push_back(expression());
        }
        expect_op(')');
        return b_.call(ident.text, std::move(args), offsets, ident.offset);
      }
      case Tok::Op:
        if (tok.text[0] == '(') {
          advance();
          Value v = expression();
          expect_op(')');
          return v;
        }
        break;
      case Tok::End:
        break;
    }
    throw ParseError(tok.offset, "expected operand");
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  Builder& b_;
};

}  // namespace mwf::expr::detail
