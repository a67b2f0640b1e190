#include "mplectic/syntax.hpp"

#include <cctype>
#include <map>
#include <sstream>

namespace mplectic {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

/// Cursor over the text with whitespace removed; positions refer to the original.
class Cursor {
 public:
  explicit Cursor(std::string_view text) : end_pos_(text.size()) {
    for (std::size_t i = 0; i < text.size(); ++i)
      if (!is_space(text[i])) {
        chars_.push_back(text[i]);
        pos_.push_back(i);
      }
  }
  bool done() const { return at_ >= chars_.size(); }
  char peek(std::size_t ahead = 0) const { return at_ + ahead < chars_.size() ? chars_[at_ + ahead] : '\0'; }
  char get() { return chars_[at_++]; }
  bool accept(char c) {
    if (peek() != c) return false;
    ++at_;
    return true;
  }
  void expect(char c, const std::string& what) {
    if (!accept(c)) fail("expected " + what);
  }
  std::size_t position() const { return at_ < pos_.size() ? pos_[at_] : end_pos_; }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, position()); }

  std::string digits() {
    std::string out;
    while (is_digit(peek())) out.push_back(get());
    if (out.empty()) fail("expected digits");
    return out;
  }
  int small_int() {
    const std::size_t where = position();
    const std::string d = digits();
    if (d.size() > 6) throw ParseError("integer too large", where);
    return std::stoi(d);
  }
  Rational rational() {
    std::string text = digits();
    if (accept('/')) text += "/" + digits();
    try {
      return parse_rational(text);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }

 private:
  std::string chars_;
  std::vector<std::size_t> pos_;
  std::size_t at_ = 0;
  std::size_t end_pos_;
};

struct Term {
  Rational coeff;
  Poly::Exponent exponent;
  std::vector<int> indices;  // zero-based, as written
  std::size_t position = 0;
};

// Variable index after 'x': one number, 1-based, optionally bracketed.
int variable_index(Cursor& cur, int n) {
  const std::size_t where = cur.position();
  int i = 0;
  if (cur.accept('[')) {
    i = cur.small_int();
    cur.expect(']', "']'");
  } else {
    i = cur.small_int();
  }
  if (i < 1 || i > n) throw ParseError("variable index out of range 1.." + std::to_string(n), where);
  return i - 1;
}

void differential(Cursor& cur, int n, std::vector<int>& indices) {
  auto push = [&](int i, std::size_t where) {
    if (i < 1 || i > n) throw ParseError("index out of range 1.." + std::to_string(n), where);
    indices.push_back(i - 1);
  };
  if (cur.accept('[')) {
    do {
      const std::size_t where = cur.position();
      push(cur.small_int(), where);
    } while (cur.accept(','));
    cur.expect(']', "']'");
    return;
  }
  if (!is_digit(cur.peek())) cur.fail("expected index digits or '[' after dx");
  if (n > 9) cur.fail("digit-string indices need n <= 9; use dx[i,j,...]");
  while (is_digit(cur.peek())) {
    const std::size_t where = cur.position();
    push(cur.get() - '0', where);
  }
}

Term parse_term(Cursor& cur, int n, bool negative) {
  Term t;
  t.position = cur.position();
  t.coeff = Rational(negative ? -1 : 1);
  t.exponent.assign(static_cast<std::size_t>(n), 0);
  if (is_digit(cur.peek())) {
    t.coeff *= cur.rational();
    cur.accept('*');
  }
  // monomial factors
  while (cur.peek() == 'x') {
    cur.get();
    const int i = variable_index(cur, n);
    int e = 1;
    if (cur.accept('^')) e = cur.small_int();
    t.exponent[static_cast<std::size_t>(i)] += e;
    cur.accept('*');
  }
  // differentials, possibly several groups joined by '^'
  while (cur.peek() == 'd') {
    cur.get();
    cur.expect('x', "'x' after 'd'");
    differential(cur, n, t.indices);
    if (!cur.accept('^')) break;
    if (cur.peek() != 'd') cur.fail("expected dx after '^'");
  }
  if (cur.position() == t.position) cur.fail("expected a term");
  return t;
}

std::string monomial_text(const Poly::Exponent& e, bool bracketed) {
  std::string out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!out.empty()) out += ' ';
    out += 'x';
    out += bracketed ? "[" + std::to_string(i + 1) + "]" : std::to_string(i + 1);
    if (e[i] > 1) out += "^" + std::to_string(e[i]);
  }
  return out;
}

}  // namespace

PolyForm parse_poly_form(std::string_view text, int n, std::optional<int> degree) {
  if (n < 1 || n > kMaxDimension) throw std::invalid_argument("dimension must be in 1.." + std::to_string(kMaxDimension));
  Cursor cur(text);
  if (cur.done()) cur.fail("empty form");
  std::vector<Term> terms;
  if (cur.peek() == '0' && !is_digit(cur.peek(1)) && cur.peek(1) != '/' && cur.peek(1) != 'x' && cur.peek(1) != 'd' &&
      cur.peek(1) != '*') {
    cur.get();
    if (!cur.done()) cur.fail("unexpected text after 0");
    if (!degree) throw ParseError("the zero form needs an explicit degree", 0);
  } else {
    bool first = true;
    while (!cur.done()) {
      bool negative = false;
      if (cur.accept('-'))
        negative = true;
      else if (!cur.accept('+') && !first)
        cur.fail("expected '+' or '-'");
      terms.push_back(parse_term(cur, n, negative));
      first = false;
    }
  }
  if (!degree) degree = static_cast<int>(terms.front().indices.size());
  if (*degree < 0 || *degree > n) throw std::invalid_argument("degree out of range");
  PolyForm out(n, *degree);
  for (Term& t : terms) {
    if (static_cast<int>(t.indices.size()) != *degree)
      throw ParseError("term has degree " + std::to_string(t.indices.size()) + ", expected " + std::to_string(*degree),
                       t.position);
    const int sign = sort_with_sign(t.indices);
    if (sign == 0) throw ParseError("repeated index in a term", t.position);
    if (sign < 0) t.coeff = -t.coeff;
    Poly p(n);
    p.add_term(t.exponent, t.coeff);
    out.coeff_ref(MultiIndex(t.indices)) += p;
  }
  return out;
}

AltFormQ parse_form(std::string_view text, int n, std::optional<int> degree) {
  const PolyForm p = parse_poly_form(text, n, degree);
  if (!p.is_constant()) {
    std::size_t at = 0;
    while (at < text.size() && !(text[at] == 'x' && (at == 0 || text[at - 1] != 'd'))) ++at;
    throw ParseError("expected constant coefficients", at);
  }
  AltFormQ out(n, p.degree());
  for (std::size_t r = 0; r < p.size(); ++r) out[static_cast<Eigen::Index>(r)] = p[r].constant_term();
  return out;
}

std::string print_form(const PolyForm& a) {
  const bool bracketed = a.dim() > 9;
  std::string out;
  const auto idx = a.indices();
  for (std::size_t r = 0; r < idx.size(); ++r) {
    for (const auto& [e, c] : a[r].terms()) {
      const bool negative = c < 0;
      const Rational mag = negative ? Rational(-c) : c;
      if (out.empty())
        out += negative ? "-" : "";
      else
        out += negative ? " - " : " + ";
      const std::string mono = monomial_text(e, bracketed);
      std::string body;
      if (mag != 1 || (mono.empty() && idx[r].empty())) body = to_string(mag);
      if (!mono.empty()) body += (body.empty() ? "" : " ") + mono;
      if (!idx[r].empty()) body += (body.empty() ? "" : " ") + std::string("dx") + idx[r].to_string(bracketed);
      out += body;
    }
  }
  return out.empty() ? "0" : out;
}

std::string print_form(const AltFormQ& a) { return print_form(PolyForm::from_alt(a)); }

SubspaceQ parse_subspace(std::string_view text, int n) {
  Cursor cur(text);
  if (cur.done()) cur.fail("empty subspace");
  if (cur.peek() == '0' && cur.peek(1) == '\0') return SubspaceQ::zero(n);
  std::vector<VectorQ> rows;
  if (cur.peek() == 'e') {
    do {
      cur.expect('e', "'e'");
      const std::size_t where = cur.position();
      const int i = cur.small_int();
      if (i < 1 || i > n) throw ParseError("index out of range 1.." + std::to_string(n), where);
      rows.push_back(unit_vector<Rational>(n, i - 1));
    } while (cur.accept(','));
  } else {
    do {
      cur.expect('(', "'('");
      VectorQ v(n);
      for (int i = 0; i < n; ++i) {
        if (i > 0) cur.expect(',', "','");
        const bool negative = cur.accept('-');
        if (!negative) cur.accept('+');
        Rational q = cur.rational();
        v(i) = negative ? Rational(-q) : q;
      }
      cur.expect(')', "')' after " + std::to_string(n) + " entries");
      rows.push_back(v);
    } while (cur.accept(';'));
  }
  if (!cur.done()) cur.fail("unexpected text");
  return SubspaceQ::span(n, rows);
}

std::string print_vector(const VectorQ& v) {
  std::string out = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) out += (i ? "," : "") + to_string(v(i));
  return out + ")";
}

MoserProblem parse_problem(std::string_view text) {
  std::map<std::string, std::string> values;
  std::map<std::string, int> lines;
  std::string last;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  auto error = [&](const std::string& what) { throw std::invalid_argument("problem file line " + std::to_string(number) + ": " + what); };
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (is_space(line.front())) {
      if (last.empty()) error("continuation line without a key");
      values[last] += " " + line;
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string::npos) error("expected 'key: value'");
    std::string key = line.substr(0, colon);
    while (!key.empty() && is_space(key.back())) key.pop_back();
    static const char* known[] = {"n", "k", "split", "box", "step", "samples", "seed", "omega", "omega_tilde"};
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) error("unknown key '" + key + "'");
    if (values.count(key)) error("duplicate key '" + key + "'");
    values[key] = line.substr(colon + 1);
    lines[key] = number;
    last = key;
  }
  auto require = [&](const std::string& key) -> const std::string& {
    auto it = values.find(key);
    if (it == values.end()) throw std::invalid_argument("problem file: missing key '" + key + "'");
    return it->second;
  };
  auto numbers = [&](const std::string& key) {
    std::istringstream s(require(key));
    std::vector<Rational> out;
    std::string word;
    while (s >> word) {
      try {
        out.push_back(parse_rational(word));
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("problem file line " + std::to_string(lines[key]) + ": " + e.what());
      }
    }
    return out;
  };
  auto integer = [&](const std::string& key) {
    const auto v = numbers(key);
    if (v.size() != 1 || denominator(v[0]) != 1)
      throw std::invalid_argument("problem file: '" + key + "' must be one integer");
    return numerator(v[0]).convert_to<int>();
  };

  const int n = integer("n");
  const int k = integer("k");
  if (n < 2 || n > kMaxDimension) throw std::invalid_argument("problem file: n out of range");
  MoserProblem p;
  const auto split = numbers("split");
  if (split.size() != 2) throw std::invalid_argument("problem file: split needs 'base fiber'");
  p.split = FiberSplit{numerator(split[0]).convert_to<int>(), numerator(split[1]).convert_to<int>()};
  if (p.split.n() != n) throw std::invalid_argument("problem file: split does not add up to n");
  const auto box = numbers("box");
  if (box.size() == 1) {
    p.box = Box::symmetric(n, box[0].convert_to<double>());
  } else if (box.size() == 2 && box[0] < box[1]) {
    p.box = Box{std::vector<double>(static_cast<std::size_t>(n), box[0].convert_to<double>()),
                std::vector<double>(static_cast<std::size_t>(n), box[1].convert_to<double>())};
  } else {
    throw std::invalid_argument("problem file: box needs 'half_width' or 'lower upper'");
  }
  if (values.count("step")) {
    const auto s = numbers("step");
    if (s.size() != 1) throw std::invalid_argument("problem file: step must be one number");
    p.step = s[0].convert_to<double>();
  }
  int on_L = 20, off_L = 30;
  if (values.count("samples")) {
    const auto s = numbers("samples");
    if (s.size() != 2) throw std::invalid_argument("problem file: samples needs 'on_L off_L'");
    on_L = numerator(s[0]).convert_to<int>();
    off_L = numerator(s[1]).convert_to<int>();
  }
  const unsigned seed = values.count("seed") ? static_cast<unsigned>(integer("seed")) : 2024u;
  auto form = [&](const std::string& key) {
    std::string body = require(key);
    const auto first = body.find_first_not_of(" \t");
    const auto last_char = body.find_last_not_of(" \t\r");
    body = first == std::string::npos ? "" : body.substr(first, last_char - first + 1);
    if (body == "tautological") {
      if (n != p.split.base_dim + static_cast<int>(binomial(p.split.base_dim, k)))
        throw std::invalid_argument("problem file: tautological form needs n = c + C(c, k)");
      return tautological_setup(p.split.base_dim, k).omega;
    }
    try {
      return parse_poly_form(body, n, k + 1);
    } catch (const ParseError& e) {
      throw std::invalid_argument("problem file '" + key + "' (line " + std::to_string(lines[key]) + "): " + e.what());
    }
  };
  p.omega = form("omega");
  p.omega_tilde = form("omega_tilde");
  p.samples = moser_samples(p.box, p.split, on_L, off_L, seed);
  return p;
}

}  // namespace mplectic
