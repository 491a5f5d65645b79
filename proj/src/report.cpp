#include "avgq/report.hpp"

#include <map>
#include <set>
#include <sstream>

namespace avgq {

using nlohmann::json;

json ExperimentReport::to_json() const {
  json j;
  j["experiment"] = experiment;
  j["schema_version"] = kReportSchemaVersion;
  j["params"] = params;
  j["seed"] = seed;
  j["trials"] = trials;
  j["statistics"] = statistics;
  j["bound"] = {{"formula", bound_formula}, {"value", bound_value ? json(*bound_value) : json(nullptr)}};
  j["verdict"] = verdict;
  return j;
}

std::string ExperimentReport::dump() const { return to_json().dump(2) + "\n"; }

namespace {

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  if (v.is_array()) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ';';
      out += scalar_text(v[i]);
    }
    return out;
  }
  return v.dump();
}

void flatten(const json& v, const std::string& prefix, std::map<std::string, std::string>& out) {
  if (v.is_object()) {
    for (const auto& [k, child] : v.items()) flatten(child, prefix.empty() ? k : prefix + "." + k, out);
  } else {
    out[prefix] = scalar_text(v);
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

std::string ExperimentReport::to_csv() const {
  json base = to_json();
  json rows = json::array();
  if (base["statistics"].contains("rows") && base["statistics"]["rows"].is_array()) {
    rows = base["statistics"]["rows"];
    base["statistics"].erase("rows");
  }
  std::map<std::string, std::string> common;
  flatten(base, "", common);

  std::vector<std::map<std::string, std::string>> lines;
  if (rows.empty()) {
    lines.push_back(common);
  } else {
    for (const auto& row : rows) {
      auto line = common;
      flatten(row, "rows", line);
      lines.push_back(std::move(line));
    }
  }
  std::set<std::string> columns;
  for (const auto& line : lines)
    for (const auto& [k, v] : line) columns.insert(k);

  std::ostringstream os;
  bool first = true;
  for (const auto& c : columns) {
    os << (first ? "" : ",") << csv_field(c);
    first = false;
  }
  os << '\n';
  for (const auto& line : lines) {
    first = true;
    for (const auto& c : columns) {
      auto it = line.find(c);
      os << (first ? "" : ",") << (it == line.end() ? "" : csv_field(it->second));
      first = false;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace avgq
