#include "flagcert/text.hpp"

#include <cctype>
#include <vector>

#include "flagcert/errors.hpp"

namespace flagcert {

namespace {

class Parser {
 public:
  Parser(std::string_view text, Ring ring) : text_(text), ring_(std::move(ring)) {}

  LaurentSeries parse_top_series() {
    LaurentSeries s = parse_sum(/*allow_t=*/true);
    expect_end();
    return s;
  }

  RingElement parse_top_element() {
    LaurentSeries s = parse_sum(/*allow_t=*/false);
    expect_end();
    return s.coefficient(0);
  }

  SeriesGrid parse_grid() {
    expect('[');
    auto row0 = parse_row();
    expect(',');
    auto row1 = parse_row();
    expect(']');
    expect_end();
    return SeriesGrid{row0, row1};
  }

 private:
  std::array<LaurentSeries, 2> parse_row() {
    expect('[');
    LaurentSeries a = parse_sum(true);
    expect(',');
    LaurentSeries b = parse_sum(true);
    expect(']');
    return {std::move(a), std::move(b)};
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void expect_end() {
    if (!at_end()) fail("unexpected character");
  }

  [[noreturn]] void fail(const std::string& what) { throw SyntaxError(what, pos_); }

  bool at_big_o() {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == 'O';
  }

  std::int64_t parse_big_o() {
    expect('O');
    expect('(');
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != 't') fail("expected 't' in O-term");
    ++pos_;
    expect('^');
    const std::int64_t p = parse_int(/*allow_sign=*/true);
    expect(')');
    return p;
  }

  std::int64_t parse_int(bool allow_sign) {
    skip_ws();
    const std::size_t start = pos_;
    bool negative = false;
    if (allow_sign && pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
      negative = text_[pos_] == '-';
      ++pos_;
      skip_ws();
    }
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      fail("expected integer");
    std::int64_t v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      const int d = text_[pos_] - '0';
      if (__builtin_mul_overflow(v, 10, &v) || __builtin_add_overflow(v, d, &v)) {
        pos_ = start;
        fail("integer out of range");
      }
      ++pos_;
    }
    return negative ? -v : v;
  }

  // Unbounded unsigned integer literal, returned as digits.
  std::string parse_digits() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    return std::string(text_.substr(start, pos_ - start));
  }

  LaurentSeries parse_sum(bool allow_t) {
    if (allow_t && at_big_o()) return LaurentSeries::big_o(ring_, parse_big_o());
    bool negate = false;
    if (peek() == '-') {
      negate = true;
      ++pos_;
    }
    LaurentSeries acc = parse_term(allow_t);
    if (negate) acc = -acc;
    while (true) {
      const char c = peek();
      if (c != '+' && c != '-') break;
      ++pos_;
      if (c == '+' && allow_t && at_big_o()) {
        acc = acc.truncated(parse_big_o());
        break;
      }
      LaurentSeries term = parse_term(allow_t);
      acc = c == '+' ? acc + term : acc - term;
    }
    return acc;
  }

  LaurentSeries parse_term(bool allow_t) {
    const char c = peek();
    RingElement coeff = RingElement::one(ring_);
    std::int64_t t_exp = 0;
    bool need_monom = false;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num = parse_digits();
      if (peek() == '/') {
        ++pos_;
        const std::size_t den_pos = pos_;
        std::string den = parse_digits();
        const Rational d = Rational::parse(den);
        if (d.is_zero()) {
          pos_ = den_pos;
          fail("zero denominator");
        }
        coeff = RingElement(ring_, Rational::parse(num) / d);
      } else {
        coeff = RingElement(ring_, Rational::parse(num));
      }
    } else if (c == '(') {
      ++pos_;
      RingElement num = parse_sum(false).coefficient(0);
      expect(')');
      if (peek() == '/') {
        ++pos_;
        expect('(');
        const std::size_t den_pos = pos_;
        RingElement den = parse_sum(false).coefficient(0);
        expect(')');
        if (!den.is_unit()) {
          pos_ = den_pos;
          fail("denominator is not a unit in " + ring_->name());
        }
        num = num * den.inverse();
      }
      coeff = num;
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      need_monom = true;
    } else {
      fail("expected term");
    }

    while (true) {
      if (need_monom) {
        need_monom = false;
      } else {
        if (peek() != '*') break;
        ++pos_;
      }
      parse_monom(allow_t, coeff, t_exp);
    }
    return LaurentSeries::monomial(coeff, t_exp);
  }

  void parse_monom(bool allow_t, RingElement& coeff, std::int64_t& t_exp) {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected symbol");
    const std::string name(text_.substr(start, pos_ - start));
    std::int64_t power = 1;
    if (peek() == '^') {
      ++pos_;
      power = parse_int(/*allow_sign=*/true);
    }
    if (name == "t") {
      if (!allow_t) {
        pos_ = start;
        fail("'t' is not allowed inside a coefficient");
      }
      t_exp = detail::checked_add(t_exp, power);
      return;
    }
    auto idx = ring_->index_of(name);
    if (!idx)
      throw UnknownSymbol("unknown symbol '" + name + "' at offset " + std::to_string(start) +
                          " for ring " + ring_->name());
    if (power < 0 && !ring_->generator(*idx).invertible && !ring_->is_fraction_field()) {
      pos_ = start;
      fail("negative power of non-invertible generator " + name);
    }
    coeff = coeff * RingElement::generator(ring_, name, 1).pow(power);
  }

  std::string_view text_;
  Ring ring_;
  std::size_t pos_ = 0;
};

// A single printed term: sign plus body.
struct PrintedTerm {
  bool negative;
  std::string body;
};

std::string power_factor(const std::string& name, std::int64_t e) {
  return e == 1 ? name : name + "^" + std::to_string(e);
}

PrintedTerm monomial_term(const Rational& c, const RingDescriptor& ring, const Exponents& e,
                          std::int64_t t_exp) {
  std::vector<std::string> factors;
  for (std::size_t i = 0; i < e.size(); ++i)
    if (e[i] != 0) factors.push_back(power_factor(ring.generator(i).name, e[i]));
  if (t_exp != 0) factors.push_back(power_factor("t", t_exp));
  const Rational mag = c.abs();
  std::string body;
  if (factors.empty()) {
    body = mag.to_string();
  } else {
    if (!mag.is_one()) body = mag.to_string() + "*";
    for (std::size_t i = 0; i < factors.size(); ++i) body += (i ? "*" : "") + factors[i];
  }
  return {c.sign() < 0, body};
}

void append_terms(const RingElement& c, std::int64_t t_exp, std::vector<PrintedTerm>& out) {
  const auto& ring = *c.ring();
  const Exponents zero(ring.rank(), 0);
  const bool plain_den = c.denominator().size() == 1 && c.denominator().begin()->first == zero;
  if (plain_den) {
    for (const auto& [e, v] : c.terms()) out.push_back(monomial_term(v, ring, e, t_exp));
    return;
  }
  const RingElement num(c.ring(), c.terms());
  const RingElement den(c.ring(), c.denominator());
  std::string body = "(" + ring_print(num) + ")/(" + ring_print(den) + ")";
  if (t_exp != 0) body += "*" + power_factor("t", t_exp);
  out.push_back({false, body});
}

std::string join_terms(const std::vector<PrintedTerm>& terms) {
  std::string s;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i == 0)
      s += terms[i].negative ? "-" : "";
    else
      s += terms[i].negative ? " - " : " + ";
    s += terms[i].body;
  }
  return s;
}

}  // namespace

LaurentSeries series_parse(std::string_view text, const Ring& ring) {
  return Parser(text, ring).parse_top_series();
}

RingElement ring_parse(std::string_view text, const Ring& ring) {
  return Parser(text, ring).parse_top_element();
}

SeriesGrid grid_parse(std::string_view text, const Ring& ring) { return Parser(text, ring).parse_grid(); }

std::string ring_print(const RingElement& a) {
  std::vector<PrintedTerm> terms;
  append_terms(a, 0, terms);
  return terms.empty() ? "0" : join_terms(terms);
}

std::string series_print(const LaurentSeries& a) {
  std::vector<PrintedTerm> terms;
  for (const auto& [k, c] : a.terms()) append_terms(c, k, terms);
  std::string s = join_terms(terms);
  if (a.precision()) {
    const std::string o = "O(t^" + std::to_string(*a.precision()) + ")";
    s = s.empty() ? o : s + " + " + o;
  }
  return s.empty() ? "0" : s;
}

std::string grid_print(const SeriesGrid& g) {
  return "[[" + series_print(g[0][0]) + ", " + series_print(g[0][1]) + "], [" +
         series_print(g[1][0]) + ", " + series_print(g[1][1]) + "]]";
}

}  // namespace flagcert
