#pragma once

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>
#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mplectic {

/// Arbitrary precision rational. Expression templates are disabled so the
/// type behaves like an ordinary value inside Eigen expressions.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

template <class T>
using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <class T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

using VectorQ = Vector<Rational>;
using MatrixQ = Matrix<Rational>;
using VectorD = Vector<double>;
using MatrixD = Matrix<double>;

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Per-scalar policy: exact rationals compare with zero exactly, doubles use
/// a relative threshold.
template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr const char* name = "exact";
  static bool is_zero(const Rational& x, const Rational& /*scale*/ = Rational(1)) {
    return x.is_zero();
  }
  static Rational abs(const Rational& x) { return boost::multiprecision::abs(x); }
  static double to_double(const Rational& x) { return x.convert_to<double>(); }
  static Rational from_rational(const Rational& q) { return q; }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr const char* name = "float";
  /// Relative threshold for rank decisions and pivot selection.
  static constexpr double rank_tolerance = 1e-9;
  static bool is_zero(double x, double scale = 1.0) {
    return std::abs(x) <= rank_tolerance * std::max(1.0, std::abs(scale));
  }
  static double abs(double x) { return std::abs(x); }
  static double to_double(double x) { return x; }
  static double from_rational(const Rational& q) { return q.convert_to<double>(); }
};

/// Extended precision, used internally where cancellation needs extra digits.
template <>
struct ScalarTraits<long double> {
  static constexpr bool exact = false;
  static constexpr const char* name = "extended";
  static constexpr long double rank_tolerance = 1e-9L;
  static bool is_zero(long double x, long double scale = 1.0L) {
    return std::abs(x) <= rank_tolerance * std::max(1.0L, std::abs(scale));
  }
  static long double abs(long double x) { return std::abs(x); }
  static double to_double(long double x) { return static_cast<double>(x); }
  static long double from_rational(const Rational& q) { return q.convert_to<long double>(); }
};

template <class T>
Matrix<T> cast_matrix(const MatrixQ& m) {
  return m.unaryExpr([](const Rational& q) { return ScalarTraits<T>::from_rational(q); });
}

template <class T>
Vector<T> cast_vector(const VectorQ& v) {
  return v.unaryExpr([](const Rational& q) { return ScalarTraits<T>::from_rational(q); });
}

/// Parses "a", "-a", "a/b" with decimal integers. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// "p/q" or "p"; used by the printers.
std::string to_string(const Rational& q);

}  // namespace mplectic
