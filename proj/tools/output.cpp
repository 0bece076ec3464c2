#include "output.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

namespace cbp::cli {

using json = nlohmann::ordered_json;

CsvWriter::CsvWriter(std::filesystem::path path, const std::vector<std::string>& header)
    : path_(std::move(path)) {
  row(header);
}

CsvWriter::~CsvWriter() {
  try {
    flush();
  } catch (...) {
  }
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += cells[i];
  }
  buffer_ += '\n';
}

void CsvWriter::number_row(const std::vector<double>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += format_double(cells[i]);
  }
  buffer_ += '\n';
}

void CsvWriter::flush() {
  if (flushed_) return;
  write_text(path_, buffer_);
  flushed_ = true;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_json(const std::filesystem::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

void write_trajectory_csv(const std::filesystem::path& path, const GapTrajectory& traj) {
  CsvWriter csv(path, {"time", "series", "k", "value"});
  for (std::size_t row = 0; row < traj.rows(); ++row) {
    const std::string t = format_double(traj.times[row]);
    for (std::size_t k = 0; k < traj.n_gaps; ++k)
      csv.row({t, "z", std::to_string(k + 1), format_double(traj.gap(row, k))});
    for (std::size_t k = 0; k < traj.n_gaps; ++k)
      csv.row({t, "l", std::to_string(k + 1), format_double(traj.local(row, k))});
    csv.row({t, "y1", "0", format_double(traj.bottom[row])});
  }
  csv.flush();
}

void write_trajectory_csv(const std::filesystem::path& path, const NamedTrajectory& traj) {
  CsvWriter csv(path, {"time", "series", "k", "value"});
  for (std::size_t row = 0; row < traj.rows(); ++row) {
    const std::string t = format_double(traj.times[row]);
    for (std::size_t i = 0; i < traj.n_particles; ++i)
      csv.row({t, "x", std::to_string(i + 1), format_double(traj.position(row, i))});
  }
  csv.flush();
}

void write_trajectory_binary(const std::filesystem::path& path, const GapTrajectory& traj) {
  static_assert(std::endian::native == std::endian::little,
                "binary dump assumes a little-endian host");
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const char magic[8] = {'C', 'B', 'P', 'B', 'I', 'N', '0', '1'};
  out.write(magic, 8);
  const std::uint32_t cols = static_cast<std::uint32_t>(2 * traj.n_gaps + 2);
  const std::uint32_t flags = 0;
  const std::uint64_t rows = traj.rows();
  out.write(reinterpret_cast<const char*>(&cols), 4);
  out.write(reinterpret_cast<const char*>(&flags), 4);
  out.write(reinterpret_cast<const char*>(&rows), 8);
  std::vector<double> rowbuf(cols);
  for (std::size_t row = 0; row < traj.rows(); ++row) {
    std::size_t c = 0;
    rowbuf[c++] = traj.times[row];
    for (std::size_t k = 0; k < traj.n_gaps; ++k) rowbuf[c++] = traj.gap(row, k);
    for (std::size_t k = 0; k < traj.n_gaps; ++k) rowbuf[c++] = traj.local(row, k);
    rowbuf[c++] = traj.bottom[row];
    out.write(reinterpret_cast<const char*>(rowbuf.data()),
              static_cast<std::streamsize>(sizeof(double) * cols));
  }
}

json validation_to_json(const ValidationReport& report) {
  json j;
  j["pass"] = report.pass();
  json entries = json::array();
  for (const auto& e : report.entries) {
    json item;
    item["id"] = e.id;
    item["pass"] = e.pass;
    item["detail"] = e.detail;
    entries.push_back(item);
  }
  j["conditions"] = entries;
  return j;
}

json law_to_json(const StationaryLaw& law) {
  json j;
  j["n_particles"] = law.n_particles;
  j["tight"] = law.tight;
  j["skew_symmetric"] = law.skew_symmetric;
  j["neg_r_inv_mu"] = law.neg_r_inv_mu;
  if (law.defined()) j["rates"] = law.rates;
  return j;
}

json reflection_to_json(const ReflectionData& rd) {
  json j;
  j["n_particles"] = rd.n_particles;
  j["dim"] = rd.dim();
  j["reflection_row_major"] = rd.reflection.dense_row_major();
  j["mu"] = rd.mu;
  j["covariance_row_major"] = rd.covariance.dense_row_major();
  return j;
}

namespace {
const char* column_status_name(LambdaLadder::ColumnStatus s) {
  switch (s) {
    case LambdaLadder::ColumnStatus::Converged: return "converged";
    case LambdaLadder::ColumnStatus::Extrapolated: return "extrapolated";
    case LambdaLadder::ColumnStatus::Increasing: return "increasing";
  }
  return "unknown";
}
}  // namespace

json ladder_to_json(const LambdaLadder& ladder) {
  json j;
  j["truncation_sizes"] = ladder.truncation_sizes;
  j["limits"] = ladder.limit;
  json st = json::array();
  for (auto s : ladder.status) st.push_back(column_status_name(s));
  j["status"] = st;
  return j;
}

json gap_stats_to_json(const GapStats& stats, const StationaryLaw& law) {
  json j;
  json gaps = json::array();
  for (std::size_t k = 0; k < stats.mean.size(); ++k) {
    json g;
    g["k"] = k + 1;
    g["rate"] = law.rates[k];
    g["target_mean"] = 1.0 / law.rates[k];
    g["count"] = stats.count[k];
    g["mean"] = stats.mean[k];
    g["variance"] = stats.variance[k];
    g["ks"] = stats.ks[k];
    g["stride_steps"] = stats.stride_steps[k];
    gaps.push_back(g);
  }
  j["gaps"] = gaps;
  return j;
}

json coupling_to_json(const CouplingReport& rep) {
  json j;
  j["inequality"] = rep.inequality;
  j["slack"] = rep.slack;
  j["violation_fraction"] = rep.violation_fraction;
  j["max_violation"] = rep.max_violation;
  j["worst_fraction"] = rep.worst_fraction();
  return j;
}

json collisions_to_json(const CollisionConditions& cond,
                        const std::vector<CollisionReport>& reports,
                        const std::vector<double>& dts) {
  json j;
  json table = json::array();
  for (std::size_t i = 0; i < cond.ranks.size(); ++i) {
    json row;
    row["k"] = cond.ranks[i];
    row["holds"] = static_cast<bool>(cond.holds[i]);
    table.push_back(row);
  }
  j["condition"] = table;
  j["all_hold"] = cond.all_hold();
  json runs = json::array();
  for (std::size_t r = 0; r < reports.size(); ++r) {
    json run;
    run["dt"] = dts[r];
    run["deltas"] = reports[r].deltas;
    run["rows_scanned"] = reports[r].rows_scanned;
    json counts = json::array();
    for (std::size_t k = 0; k < reports[r].ranks.size(); ++k) {
      json c;
      c["k"] = reports[r].ranks[k];
      c["counts"] = reports[r].counts[k];
      counts.push_back(c);
    }
    run["near_triples"] = counts;
    runs.push_back(run);
  }
  j["runs"] = runs;
  return j;
}

void write_ladder_csv(const std::filesystem::path& path, const LambdaLadder& ladder) {
  CsvWriter csv(path, {"N", "k", "lambda"});
  for (std::size_t j = 0; j < ladder.truncation_sizes.size(); ++j)
    for (std::size_t k = 0; k < ladder.table[j].size(); ++k)
      csv.row({std::to_string(ladder.truncation_sizes[j]), std::to_string(k + 1),
               format_double(ladder.table[j][k])});
  csv.flush();
}

void write_rates_csv(const std::filesystem::path& path, const StationaryLaw& law) {
  CsvWriter csv(path, {"k", "lambda"});
  for (std::size_t k = 0; k < law.rates.size(); ++k)
    csv.row({std::to_string(k + 1), format_double(law.rates[k])});
  csv.flush();
}

void write_gap_stats_csv(const std::filesystem::path& path, const GapStats& stats,
                         const StationaryLaw& law) {
  CsvWriter csv(path, {"series", "x", "y"});
  for (std::size_t k = 0; k < stats.ecdf.size(); ++k) {
    for (std::size_t j = 0; j < stats.grid.size(); ++j) {
      const double x = -std::log(1.0 - stats.grid[j]) / law.rates[k];
      csv.row({"ecdf_" + std::to_string(k + 1), format_double(x),
               format_double(stats.ecdf[k][j])});
      csv.row({"target_" + std::to_string(k + 1), format_double(x),
               format_double(stats.grid[j])});
    }
  }
  csv.flush();
}

}  // namespace cbp::cli
