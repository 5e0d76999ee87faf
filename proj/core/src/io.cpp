#include "pmshock/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

namespace pmshock {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  if (!table.manifest.empty()) out << "# " << table.manifest << "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    out << (c ? "," : "") << table.columns[c];
  out << "\n";
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size())
      throw std::runtime_error("csv row width mismatch in " + path.string());
    for (std::size_t c = 0; c < row.size(); ++c)
      out << (c ? "," : "") << format_double(row[c]);
    out << "\n";
  }
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  CsvTable t;
  std::string line;
  bool header_done = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (!header_done) t.manifest = line.substr(line.find_first_not_of("# "));
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!header_done) {
      t.columns = cells;
      header_done = true;
      continue;
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(std::strtod(c.c_str(), nullptr));
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_profile(const ShockProfile& profile,
                   const std::filesystem::path& csv_path,
                   const std::filesystem::path& json_path,
                   const std::string& manifest) {
  CsvTable t;
  t.manifest = manifest;
  t.columns = {"xi", "U", "dU"};
  for (std::size_t i = 0; i < profile.knots().size(); ++i)
    t.rows.push_back(
        {profile.knots()[i], profile.values()[i], profile.slopes()[i]});
  write_csv(csv_path, t);

  nlohmann::ordered_json j;
  j["manifest"] = manifest;
  j["gamma"] = profile.gamma();
  j["u_minus"] = profile.u_minus();
  j["m"] = profile.exponent();
  if (profile.has_free_boundary())
    j["x_R"] = profile.x_right();
  else
    j["x_R"] = nullptr;
  j["tol"] = profile.tol();
  std::ofstream out(json_path);
  if (!out) throw std::runtime_error("cannot open " + json_path.string());
  out << j.dump(2) << "\n";
}

bool ConfigFile::has(const std::string& key) const {
  return entries.count(key) != 0;
}

std::string ConfigFile::get(const std::string& key,
                            const std::string& fallback) const {
  auto it = entries.find(key);
  return it == entries.end() ? fallback : it->second;
}

double ConfigFile::get_double(const std::string& key, double fallback) const {
  auto it = entries.find(key);
  if (it == entries.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw std::runtime_error("config key '" + key + "': cannot parse '" +
                             it->second + "' as a number");
  }
}

int64_t ConfigFile::get_int(const std::string& key, int64_t fallback) const {
  auto it = entries.find(key);
  if (it == entries.end()) return fallback;
  try {
    return std::stoll(it->second);
  } catch (const std::exception&) {
    throw std::runtime_error("config key '" + key + "': cannot parse '" +
                             it->second + "' as an integer");
  }
}

std::vector<double> ConfigFile::get_list(
    const std::string& key, const std::vector<double>& fallback) const {
  auto it = entries.find(key);
  if (it == entries.end()) return fallback;
  std::vector<double> out;
  std::stringstream ss(it->second);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      out.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw std::runtime_error("config key '" + key + "': cannot parse '" +
                               cell + "' as a number");
    }
  }
  return out;
}

ConfigFile parse_config_text(const std::string& text) {
  ConfigFile cfg;
  std::stringstream in(text);
  std::string line, section;
  int lineno = 0;
  auto trim = [](std::string s) {
    auto begin = s.find_first_not_of(" \t\r");
    auto end = s.find_last_not_of(" \t\r");
    return begin == std::string::npos ? std::string()
                                      : s.substr(begin, end - begin + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error("config line " + std::to_string(lineno) +
                                 ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": empty key");
    cfg.entries[section.empty() ? key : section + "." + key] = value;
  }
  return cfg;
}

ConfigFile parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace pmshock
