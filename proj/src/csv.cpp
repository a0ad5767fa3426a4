#include "leadfollow/csv.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "leadfollow/errors.hpp"

namespace leadfollow {

std::vector<std::string> csv_columns(int agents, int dimension) {
  std::vector<std::string> cols{"t"};
  for (int d = 1; d <= dimension; ++d) cols.push_back("x0_" + std::to_string(d));
  for (int d = 1; d <= dimension; ++d) cols.push_back("v0_" + std::to_string(d));
  for (int i = 1; i <= agents; ++i) {
    for (int d = 1; d <= dimension; ++d) {
      const std::string suffix = std::to_string(i) + "_" + std::to_string(d);
      cols.push_back("x_" + suffix);
      cols.push_back("v_" + suffix);
      cols.push_back("vhat_" + suffix);
    }
  }
  for (int i = 1; i <= agents; ++i) {
    cols.push_back("err_x_" + std::to_string(i));
    cols.push_back("err_v_" + std::to_string(i));
  }
  cols.push_back("V");
  return cols;
}

namespace {

void put(std::ostream& out, double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  out << buf;
}

}  // namespace

void emit_csv(const Trajectory& traj, std::ostream& out) {
  if (traj.samples.empty()) throw InvalidInput("cannot write an empty trajectory");
  const auto& first = traj.samples.front();
  const int n = first.agents();
  const int m = first.dimension();
  const auto cols = csv_columns(n, m);
  for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c];
  out << "\n";
  for (std::size_t s = 0; s < traj.samples.size(); ++s) {
    const auto& st = traj.samples[s];
    const auto cell = [&](double value) {
      out << ',';
      put(out, value);
    };
    put(out, st.t);
    for (int d = 0; d < m; ++d) cell(st.x0(d));
    for (int d = 0; d < m; ++d) cell(st.v0(d));
    for (int i = 0; i < n; ++i) {
      for (int d = 0; d < m; ++d) {
        cell(st.x(i, d));
        cell(st.v(i, d));
        cell(st.vhat(i, d));
      }
    }
    for (int i = 0; i < n; ++i) {
      cell(traj.err_x[s](i));
      cell(traj.err_v[s](i));
    }
    cell(traj.lyapunov ? (*traj.lyapunov)[s] : std::numeric_limits<double>::quiet_NaN());
    out << "\n";
  }
}

void emit_csv(const Trajectory& traj, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  emit_csv(traj, out);
  out.flush();
  if (!out) throw Error("failed writing " + path.string());
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == name) return c;
  }
  throw InvalidInput("no column named " + name);
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw Error(path.string() + ": empty CSV");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) table.header.push_back(cell);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    if (row.size() != table.header.size()) {
      throw Error(path.string() + ": row " + std::to_string(table.rows.size() + 1) +
                  " has " + std::to_string(row.size()) + " cells");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace leadfollow
