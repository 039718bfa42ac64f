#include "output.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#ifndef SPINSIM_VERSION
#define SPINSIM_VERSION "unknown"
#endif

namespace spinsim::cli {

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string make_stem(const std::string& command,
                      const std::string& override_stem) {
  if (!override_stem.empty()) return override_stem;
  using namespace std::chrono;
  const auto now = system_clock::now();
  const auto ms = duration_cast<milliseconds>(now.time_since_epoch()) % 1000;
  const std::time_t tt = system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s-%04d%02d%02dT%02d%02d%02d%03d",
                command.c_str(), tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                tm.tm_hour, tm.tm_min, tm.tm_sec,
                static_cast<int>(ms.count()));
  return buf;
}

OutputWriter::OutputWriter(std::filesystem::path out_dir, std::string stem)
    : out_dir_(std::move(out_dir)), stem_(std::move(stem)) {
  std::filesystem::create_directories(out_dir_);
}

std::filesystem::path OutputWriter::csv_path() const {
  return out_dir_ / (stem_ + ".csv");
}

std::filesystem::path OutputWriter::manifest_path() const {
  return out_dir_ / (stem_ + ".manifest.json");
}

std::filesystem::path OutputWriter::gnuplot_path() const {
  return out_dir_ / (stem_ + ".gnuplot");
}

void OutputWriter::write_csv(const Table& table) {
  std::ofstream os(csv_path());
  if (!os) {
    throw std::runtime_error("cannot open output file " + csv_path().string());
  }
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c) os << ',';
    os << table.header[c];
  }
  os << "\r\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ',';
      os << row[c];
    }
    os << "\r\n";
  }
  os.close();
  if (!os) {
    throw std::runtime_error("failed writing " + csv_path().string());
  }
  written_.push_back(csv_path());
}

void OutputWriter::write_gnuplot(const std::string& script) {
  std::ofstream os(gnuplot_path());
  if (!os) {
    throw std::runtime_error("cannot open output file " +
                             gnuplot_path().string());
  }
  os << script;
  os.close();
  written_.push_back(gnuplot_path());
}

void OutputWriter::write_manifest(const std::string& command,
                                  const nlohmann::json& params,
                                  std::uint64_t master_seed,
                                  double duration_seconds) {
  nlohmann::json manifest;
  manifest["command"] = command;
  manifest["parameters"] = params;
  manifest["master_seed"] = master_seed;
  manifest["version"] = SPINSIM_VERSION;
  manifest["duration_seconds"] = duration_seconds;
  std::vector<std::string> outputs;
  outputs.reserve(written_.size());
  for (const auto& p : written_) outputs.push_back(p.string());
  manifest["outputs"] = outputs;
  std::ofstream os(manifest_path());
  if (!os) {
    throw std::runtime_error("cannot open output file " +
                             manifest_path().string());
  }
  os << manifest.dump(2) << '\n';
  os.close();
  written_.push_back(manifest_path());
}

void OutputWriter::discard() {
  std::error_code ec;
  for (const auto& p : written_) std::filesystem::remove(p, ec);
  written_.clear();
}

}  // namespace spinsim::cli
