#pragma once

// Text formats. Forms: sums of terms [sign][coefficient][monomial] dx<indices>,
// e.g. "dx145 + dx246", "-3/2 x1^2 x4 dx[1,12]". Indices are 1-based; digit
// strings after dx are one index per digit and need n <= 9, the bracketed
// list works for any n. Whitespace is ignored.

#include "mplectic/moser.hpp"
#include "mplectic/polyforms.hpp"
#include "mplectic/subspace.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mplectic {

class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::invalid_argument(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Parses a form on R^n. When `degree` is absent it is read off the terms;
/// the text "0" then needs an explicit degree.
PolyForm parse_poly_form(std::string_view text, int n, std::optional<int> degree = std::nullopt);
/// Constant-coefficient variant; rejects monomials.
AltFormQ parse_form(std::string_view text, int n, std::optional<int> degree = std::nullopt);

/// Canonical text, terms ordered by multi-index then monomial.
std::string print_form(const PolyForm& a);
std::string print_form(const AltFormQ& a);

/// "e2,e5" (coordinate vectors, 1-based), "(1,0,1/2);(0,1,0)" (rows) or "0".
SubspaceQ parse_subspace(std::string_view text, int n);
std::string print_vector(const VectorQ& v);

/// moser-demo problem file: "key: value" lines, '#' comments, indented lines
/// continue the previous value. Keys: n, k, split, box, step, samples, seed,
/// omega, omega_tilde. A form value may be the word "tautological".
MoserProblem parse_problem(std::string_view text);

}  // namespace mplectic
