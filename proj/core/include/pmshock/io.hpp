#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "pmshock/profile.hpp"

namespace pmshock {

// Full-precision deterministic formatting; identical configs must produce
// byte-identical artifacts.
std::string format_double(double v);

struct CsvTable {
  std::string manifest;  // optional '#'-prefixed first line
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

// Profile export: CSV (xi, U, dU) plus a JSON sidecar with
// {gamma, u_minus, m, x_R, tol}; x_R is null when the profile has no free
// boundary (m = 1).
void write_profile(const ShockProfile& profile,
                   const std::filesystem::path& csv_path,
                   const std::filesystem::path& json_path,
                   const std::string& manifest);

// Sectioned key = value configs; '#' and ';' start comments. Keys are
// addressed as "section.key".
struct ConfigFile {
  std::map<std::string, std::string> entries;

  bool has(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int64_t get_int(const std::string& key, int64_t fallback) const;
  std::vector<double> get_list(const std::string& key,
                               const std::vector<double>& fallback) const;
};

ConfigFile parse_config_text(const std::string& text);
ConfigFile parse_config_file(const std::filesystem::path& path);

}  // namespace pmshock
