#include "mplectic/report.hpp"

#include <sstream>

namespace mplectic {

Json to_json(const Rational& q) { return to_string(q); }
Json to_json(double x) { return x; }

Report::Report(const std::string& command) {
  doc["schema"] = kReportSchema;
  doc["command"] = command;
  doc["inputs"] = Json::object();
  doc["result"] = Json::object();
}

std::string Report::render(ReportFormat format) const {
  return format == ReportFormat::Json ? doc.dump(2) + "\n" : render_text(doc);
}

namespace {

bool is_flat(const Json& j) {
  if (!j.is_array()) return false;
  for (const auto& e : j)
    if (e.is_structured()) return false;
  return true;
}

std::string scalar_text(const Json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

std::string flat_text(const Json& j) {
  std::string out = "[";
  bool first = true;
  for (const auto& e : j) {
    out += (first ? "" : ", ") + scalar_text(e);
    first = false;
  }
  return out + "]";
}

void render(const Json& j, int indent, std::ostringstream& out) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      out << pad << key << ":";
      if (value.is_structured() && !is_flat(value) && !value.empty()) {
        out << "\n";
        render(value, indent + 2, out);
      } else if (value.is_array()) {
        out << " " << flat_text(value) << "\n";
      } else if (value.is_object()) {
        out << " {}\n";
      } else {
        out << " " << scalar_text(value) << "\n";
      }
    }
  } else if (j.is_array()) {
    for (const auto& e : j) {
      if (is_flat(e)) {
        out << pad << "- " << flat_text(e) << "\n";
      } else if (e.is_structured()) {
        out << pad << "-\n";
        render(e, indent + 2, out);
      } else {
        out << pad << "- " << scalar_text(e) << "\n";
      }
    }
  } else {
    out << pad << scalar_text(j) << "\n";
  }
}

}  // namespace

std::string render_text(const Json& j) {
  std::ostringstream out;
  render(j, 0, out);
  return out.str();
}

}  // namespace mplectic
