#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace rys::app {

inline constexpr std::string_view kReportSchema = "rys-lab-report/1";

std::string_view tool_version() noexcept;

enum class Verdict { Pass, Fail, Skip };

std::string_view to_string(Verdict v) noexcept;

/// One named comparison, usually the worst of several sample points.
struct CheckRecord {
  std::string case_name;
  std::string name;
  /// The identity being checked, as plain formula text.
  std::string anchor;
  std::vector<double> point;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_gap = 0.0;
  /// The quantity compared with tol (relative or absolute, per check).
  double gap = 0.0;
  double tol = 0.0;
  Verdict verdict = Verdict::Skip;
  std::size_t samples = 0;
  std::string note;
};

using ConfigValue = std::variant<bool, long long, double, std::string, std::vector<std::string>>;

struct Summary {
  std::size_t total = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;
};

struct CheckReport {
  std::string command;
  std::vector<std::pair<std::string, ConfigValue>> config;
  std::vector<std::string> cases;
  std::vector<CheckRecord> records;
  std::vector<std::string> warnings;
  /// Only serialized when set (--timing); keeps default reports byte-stable.
  std::optional<double> wall_seconds;

  Summary summary() const;
  bool all_passed() const;
  /// Pretty-printed JSON with a trailing newline.
  std::string to_json() const;
};

/// Builds a record and sets verdict = (gap <= tol).
CheckRecord make_record(std::string case_name, std::string name, std::string anchor, std::vector<double> point,
                        double lhs, double rhs, double gap, double tol, std::size_t samples);
CheckRecord skipped_record(std::string case_name, std::string name, std::string anchor, std::string note);

/// Writes through a temporary file in the same directory and renames it over
/// the target.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace rys::app
