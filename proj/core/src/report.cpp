#include "rys/report.hpp"

#include <cmath>
#include <fstream>
#include <system_error>

#include <nlohmann/json.hpp>
#include <unistd.h>

#include "rys/error.hpp"

#ifndef RYS_VERSION
#define RYS_VERSION "0.0.0"
#endif

namespace rys::app {

using json = nlohmann::ordered_json;

std::string_view tool_version() noexcept { return RYS_VERSION; }

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Skip: return "skip";
  }
  return "unknown";
}

namespace {

/// JSON has no inf/nan; those become strings.
json number(double v) {
  if (v == 0.0) return 0.0;
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

json config_value(const ConfigValue& v) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) {
          return number(x);
        } else {
          return x;
        }
      },
      v);
}

}  // namespace

Summary CheckReport::summary() const {
  Summary s;
  s.total = records.size();
  for (const auto& r : records) {
    switch (r.verdict) {
      case Verdict::Pass: ++s.passed; break;
      case Verdict::Fail: ++s.failed; break;
      case Verdict::Skip: ++s.skipped; break;
    }
  }
  return s;
}

bool CheckReport::all_passed() const { return summary().failed == 0; }

std::string CheckReport::to_json() const {
  json doc;
  doc["schema"] = kReportSchema;
  doc["tool"] = "rys_lab";
  doc["version"] = tool_version();
  doc["command"] = command;
  json cfg = json::object();
  for (const auto& [key, value] : config) cfg[key] = config_value(value);
  doc["config"] = cfg;
  doc["cases"] = cases;

  json recs = json::array();
  for (const auto& r : records) {
    json j;
    j["case"] = r.case_name;
    j["name"] = r.name;
    j["anchor"] = r.anchor;
    json pt = json::array();
    for (double v : r.point) pt.push_back(number(v));
    j["point"] = pt;
    j["lhs"] = number(r.lhs);
    j["rhs"] = number(r.rhs);
    j["abs_gap"] = number(r.abs_gap);
    j["gap"] = number(r.gap);
    j["tol"] = number(r.tol);
    j["verdict"] = to_string(r.verdict);
    j["samples"] = r.samples;
    if (!r.note.empty()) j["note"] = r.note;
    recs.push_back(std::move(j));
  }
  doc["records"] = recs;
  doc["warnings"] = warnings;

  const Summary s = summary();
  doc["summary"] = {{"total", s.total}, {"passed", s.passed}, {"failed", s.failed}, {"skipped", s.skipped}};
  if (wall_seconds) doc["wall_seconds"] = *wall_seconds;
  return doc.dump(2) + "\n";
}

CheckRecord make_record(std::string case_name, std::string name, std::string anchor, std::vector<double> point,
                        double lhs, double rhs, double gap, double tol, std::size_t samples) {
  CheckRecord r;
  r.case_name = std::move(case_name);
  r.name = std::move(name);
  r.anchor = std::move(anchor);
  r.point = std::move(point);
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs_gap = std::abs(lhs - rhs);
  r.gap = gap;
  r.tol = tol;
  r.samples = samples;
  r.verdict = gap <= tol ? Verdict::Pass : Verdict::Fail;
  return r;
}

CheckRecord skipped_record(std::string case_name, std::string name, std::string anchor, std::string note) {
  CheckRecord r;
  r.case_name = std::move(case_name);
  r.name = std::move(name);
  r.anchor = std::move(anchor);
  r.verdict = Verdict::Skip;
  r.note = std::move(note);
  return r;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  const fs::path tmp = dir / ("." + path.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error(ErrorCode::InvalidArgument, "failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::InvalidArgument, "cannot move report into place at '" + path.string() + "'");
  }
}

}  // namespace rys::app
