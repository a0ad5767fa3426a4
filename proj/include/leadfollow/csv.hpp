#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "leadfollow/dynamics.hpp"

namespace leadfollow {

// t, x0_d, v0_d, then x_i_d, v_i_d, vhat_i_d for each agent i and coordinate d,
// then err_x_i, err_v_i for each agent, then V. Indices are 1-based.
std::vector<std::string> csv_columns(int agents, int dimension);

// One row per sample, 12 significant digits. V is "nan" without a certificate.
void emit_csv(const Trajectory& traj, const std::filesystem::path& path);
void emit_csv(const Trajectory& traj, std::ostream& out);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace leadfollow
