#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace spinsim::cli {

/// One CSV table: header + rows of preformatted cells. Numeric cells should
/// be formatted with format_value so every file carries 12 significant
/// digits.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string format_value(double v);

/// File-name stem "<command>-<timestamp>" (UTC, millisecond resolution), or
/// the user-provided override.
std::string make_stem(const std::string& command, const std::string& override_stem);

/// Collects everything one command produced and writes it out together.
class OutputWriter {
 public:
  OutputWriter(std::filesystem::path out_dir, std::string stem);

  /// Paths derived from the stem.
  std::filesystem::path csv_path() const;
  std::filesystem::path manifest_path() const;
  std::filesystem::path gnuplot_path() const;

  void write_csv(const Table& table);
  void write_gnuplot(const std::string& script);
  /// Writes the manifest last, recording all artifact paths plus the full
  /// parameter set and wall-clock duration.
  void write_manifest(const std::string& command, const nlohmann::json& params,
                      std::uint64_t master_seed, double duration_seconds);

  /// Removes everything written so far (used on failure so no partial
  /// outputs survive).
  void discard();

 private:
  std::filesystem::path out_dir_;
  std::string stem_;
  std::vector<std::filesystem::path> written_;
};

}  // namespace spinsim::cli
