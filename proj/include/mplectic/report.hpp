#pragma once

// Machine-readable command reports (JSON) with a plain-text rendering.

#include "mplectic/subspace.hpp"

#include <json.hpp>

#include <string>

namespace mplectic {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "mplectic-report/1";

/// Exact scalars are written as strings ("-3/2"), floats as numbers.
Json to_json(const Rational& q);
Json to_json(double x);
template <class T>
Json to_json(const Vector<T>& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}
template <class T>
Json to_json(const Matrix<T>& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(to_json(Vector<T>(m.row(r).transpose())));
  return out;
}
template <class T>
Json to_json(const Subspace<T>& s) {
  return Json{{"dim", s.dim()}, {"basis", to_json(s.basis())}};
}

enum class ReportFormat { Json, Text };

struct Report {
  Json doc;

  explicit Report(const std::string& command);
  Json& inputs() { return doc["inputs"]; }
  Json& result() { return doc["result"]; }
  std::string render(ReportFormat format) const;
};

/// Indented "key: value" rendering; short scalar arrays stay on one line.
std::string render_text(const Json& j);

}  // namespace mplectic
