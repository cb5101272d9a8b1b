#include "expr.hpp"

#include <cctype>
#include <sstream>
#include <vector>

namespace pa {

namespace {

class Parser {
 public:
  Parser(std::string_view text, const GroupDescriptor& group) : group_(group) {
    // Normalize to ASCII, remembering the character column of every byte kept.
    std::size_t column = 0;
    for (std::size_t i = 0; i < text.size();) {
      auto c = static_cast<unsigned char>(text[i]);
      if (c == 0xE2 && i + 2 < text.size() && static_cast<unsigned char>(text[i + 1]) == 0x88 &&
          static_cast<unsigned char>(text[i + 2]) == 0x92) {
        src_.push_back('-');
        cols_.push_back(column);
        i += 3;
      } else if (c >= 0x80) {
        std::size_t len = c >= 0xF0 ? 4 : c >= 0xE0 ? 3 : c >= 0xC0 ? 2 : 1;
        src_.push_back('\x01');  // never valid
        cols_.push_back(column);
        i += len;
      } else {
        src_.push_back(static_cast<char>(c));
        cols_.push_back(column);
        ++i;
      }
      ++column;
    }
    cols_.push_back(column);
  }

  ExactElement parse() {
    skip_ws();
    if (at_end()) fail("empty expression");
    ExactElement e = expr();
    skip_ws();
    if (!at_end()) fail(std::string("unexpected '") + peek() + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(cols_[pos_], msg); }
  bool at_end() const { return pos_ >= src_.size(); }
  char peek() const { return at_end() ? '\0' : src_[pos_]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool starts_factor() {
    skip_ws();
    char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) || c == 'u' || c == '(';
  }

  ExactElement expr() {
    ExactElement acc = term();
    while (true) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  ExactElement term() {
    ExactElement acc = unary();
    while (true) {
      if (accept('*')) {
        acc = convolve(acc, unary());
      } else if (accept('/')) {
        skip_ws();
        std::size_t at = pos_;
        mpz_class d = integer();
        if (d == 0) {
          pos_ = at;
          fail("division by zero");
        }
        acc *= mpq_class(1, 1) / mpq_class(d);
      } else if (starts_factor()) {
        acc = convolve(acc, unary());
      } else {
        return acc;
      }
    }
  }

  ExactElement unary() {
    if (accept('-')) return unary() * mpq_class(-1);
    if (accept('+')) return unary();
    return power();
  }

  ExactElement power() {
    std::size_t base_pos = pos_;
    ExactElement base = primary();
    if (!accept('^')) return base;
    bool paren = accept('(');
    bool negative = false;
    skip_ws();
    if (accept('-')) negative = true;
    skip_ws();
    std::size_t exp_pos = pos_;
    mpz_class n = integer();
    if (paren && !accept(')')) fail("expected ')' after exponent");
    if (n > 10000) {
      pos_ = exp_pos;
      fail("exponent too large");
    }
    long k = n.get_si();
    if (!negative) return pa::power(base, static_cast<int>(k));
    if (base.size() != 1) {
      pos_ = base_pos;
      fail("negative exponent needs a single-term base");
    }
    const auto& [g, c] = *base.terms().begin();
    ExactElement inverse = ExactElement::monomial(inv(g), mpq_class(1) / c);
    return pa::power(inverse, static_cast<int>(k));
  }

  mpz_class integer() {
    skip_ws();
    std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    return mpz_class(src_.substr(start, pos_ - start));
  }

  ExactElement primary() {
    skip_ws();
    if (at_end()) fail("unexpected end of expression");
    char c = peek();
    if (c == '(') {
      ++pos_;
      ExactElement e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      mpq_class value(mpz_class(src_.substr(start, pos_ - start)));
      if (peek() == '.') {
        ++pos_;
        std::size_t fs = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (fs == pos_) fail("expected digits after '.'");
        mpz_class num(src_.substr(fs, pos_ - fs));
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, pos_ - fs);
        mpq_class frac(num, den);
        frac.canonicalize();
        value += frac;
      }
      return ExactElement::constant(group_, value);
    }
    if (c == 'u') {
      std::size_t start = pos_;
      ++pos_;
      int index = 1;
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        index = peek() - '0';
        ++pos_;
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
          pos_ = start;
          fail("unknown generator");
        }
      }
      if (index < 1 || index > group_.rank) {
        pos_ = start;
        fail("generator u" + std::to_string(index) + " does not exist in " + group_.name());
      }
      return ExactElement::monomial(GroupElement::generator(group_, index));
    }
    fail(std::string("unexpected '") + (c == '\x01' ? std::string("non-ASCII character") : std::string(1, c)) + "'");
  }

  GroupDescriptor group_;
  std::string src_;
  std::vector<std::size_t> cols_;
  std::size_t pos_ = 0;
};

std::string monomial_text(const GroupElement& g) {
  std::vector<std::pair<int, std::int64_t>> parts;  // (generator index, exponent)
  if (g.group().is_heisenberg()) {
    // (x, y, z) = u2^x u1^y u3^(z - xy)
    parts = {{2, g[0]}, {1, g[1]}, {3, g[2] - g[0] * g[1]}};
  } else {
    for (int i = 0; i < g.rank(); ++i) parts.emplace_back(i + 1, g[i]);
  }
  std::ostringstream os;
  bool first = true;
  for (auto [i, e] : parts) {
    if (e == 0) continue;
    if (!first) os << '*';
    first = false;
    os << 'u' << i;
    if (e != 1) os << '^' << e;
  }
  return os.str();
}

}  // namespace

ExactElement parse_expression(std::string_view text, const GroupDescriptor& group) {
  return Parser(text, group).parse();
}

std::string format_expression(const ExactElement& e) {
  if (e.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [g, c] : e.terms()) {
    mpq_class mag = abs(c);
    if (first) {
      if (sgn(c) < 0) os << '-';
    } else {
      os << (sgn(c) < 0 ? " - " : " + ");
    }
    first = false;
    if (g.is_identity()) {
      os << mag.get_str();
    } else {
      if (mag != 1) os << (mag.get_den() == 1 ? mag.get_str() : "(" + mag.get_str() + ")") << '*';
      os << monomial_text(g);
    }
  }
  return os.str();
}

}  // namespace pa
