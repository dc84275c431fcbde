#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "singspec/harness/harness.hpp"

namespace singspec {

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

// JSON has no inf/nan
nlohmann::json finite_or_null(double x) {
  return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

}  // namespace

void write_report(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);

  nlohmann::json j;
  j["id"] = report.id;
  j["anchors"] = nlohmann::json::array();
  for (const auto& r : report.rows) {
    j["anchors"].push_back({{"assertion", r.assertion},
                            {"anchor", r.anchor},
                            {"pass", r.pass},
                            {"lhs", finite_or_null(r.lhs)},
                            {"rhs", finite_or_null(r.rhs)},
                            {"tol", finite_or_null(r.tol)}});
  }
  j["timing"] = {{"seconds", report.seconds}};
  open_out(dir / "report.json") << j.dump(2) << "\n";

  auto csv = open_out(dir / "table.csv");
  for (std::size_t i = 0; i < report.table_header.size(); ++i)
    csv << (i ? "," : "") << report.table_header[i];
  csv << "\n";
  for (const auto& row : report.table) {
    for (std::size_t i = 0; i < row.size(); ++i) csv << (i ? "," : "") << fmt(row[i]);
    csv << "\n";
  }

  for (const auto& c : report.curves) {
    auto dat = open_out(dir / (c.name + ".dat"));
    for (std::size_t i = 0; i < c.x.size(); ++i) dat << fmt(c.x[i]) << " " << fmt(c.y[i]) << "\n";
  }
}

void merge_config_file(ExperimentSpec& spec, const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::invalid_argument("cannot read config " + file.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("bad config " + file.string() + ": " + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  // either {"params": {...}, "seed": n} or a flat parameter object
  const nlohmann::json& params = j.contains("params") ? j["params"] : j;
  for (const auto& [k, v] : params.items()) {
    if (k == "seed" || k == "params") continue;
    std::string value;
    if (v.is_string()) value = v.get<std::string>();
    else if (v.is_number()) value = fmt(v.get<double>());
    else if (v.is_array()) {
      for (const auto& e : v) value += (value.empty() ? "" : ",") + (e.is_string() ? e.get<std::string>() : fmt(e.get<double>()));
    } else throw std::invalid_argument("config value for '" + k + "' must be a number, string or list");
    spec.params.emplace(k, value);  // keeps values set from flags
  }
  if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
}

}  // namespace singspec
