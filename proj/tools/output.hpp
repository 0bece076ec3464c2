#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

#include "cbp/analyze.hpp"
#include "cbp/infinite.hpp"
#include "cbp/model.hpp"
#include "cbp/reflection.hpp"
#include "cbp/simulate.hpp"
#include "config.hpp"

namespace cbp::cli {

/// CSV dialect: comma separator, one header row, LF endings, C locale,
/// floats at 17 significant digits. Content is buffered and written on
/// flush() or destruction.
class CsvWriter {
 public:
  CsvWriter(std::filesystem::path path, const std::vector<std::string>& header);
  ~CsvWriter();
  void row(const std::vector<std::string>& cells);
  void number_row(const std::vector<double>& cells);
  void flush();

 private:
  std::filesystem::path path_;
  std::string buffer_;
  bool flushed_ = false;
};

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j);

/// Trajectory as long-format CSV: time, series (z|l|y1), k, value.
void write_trajectory_csv(const std::filesystem::path& path, const GapTrajectory& traj);
void write_trajectory_csv(const std::filesystem::path& path, const NamedTrajectory& traj);

/// Compact dump: "CBPBIN01" magic, u32 column count, u32 flags, u64 row
/// count, then row-major little-endian doubles (time, z_1..z_d, l_1..l_d, y1).
void write_trajectory_binary(const std::filesystem::path& path, const GapTrajectory& traj);

nlohmann::ordered_json validation_to_json(const ValidationReport& report);
nlohmann::ordered_json law_to_json(const StationaryLaw& law);
nlohmann::ordered_json reflection_to_json(const ReflectionData& rd);
nlohmann::ordered_json ladder_to_json(const LambdaLadder& ladder);
nlohmann::ordered_json gap_stats_to_json(const GapStats& stats, const StationaryLaw& law);
nlohmann::ordered_json coupling_to_json(const CouplingReport& rep);
nlohmann::ordered_json collisions_to_json(const CollisionConditions& cond,
                                          const std::vector<CollisionReport>& reports,
                                          const std::vector<double>& dts);

void write_ladder_csv(const std::filesystem::path& path, const LambdaLadder& ladder);
void write_rates_csv(const std::filesystem::path& path, const StationaryLaw& law);
/// Plot-ready: series, x, y rows with empirical ECDF points and the fitted
/// exponential CDF for each gap.
void write_gap_stats_csv(const std::filesystem::path& path, const GapStats& stats,
                         const StationaryLaw& law);

}  // namespace cbp::cli
