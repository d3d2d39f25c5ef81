#include "parset/pointset_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace parset::io {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& cell, std::size_t line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != cell.size()) {
    throw std::invalid_argument("line " + std::to_string(line_no) + ": not a number: '" + cell + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

PointSet read_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  const auto header = split_commas(trim(line));
  if (header.empty() || header.front().empty()) throw std::invalid_argument("CSV: missing header");
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] != "x" + std::to_string(k)) {
      throw std::invalid_argument("CSV: header column " + std::to_string(k) + " is '" + header[k] +
                                  "', expected 'x" + std::to_string(k) + "'");
    }
  }
  dim = header.size();

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty()) continue;
    const auto cells = split_commas(t);
    if (cells.size() != dim) {
      throw std::invalid_argument("CSV line " + std::to_string(line_no) + ": ragged row with " +
                                  std::to_string(cells.size()) + " columns, expected " +
                                  std::to_string(dim));
    }
    std::vector<double> row;
    row.reserve(dim);
    for (const auto& c : cells) row.push_back(parse_number(c, line_no));
    rows.push_back(std::move(row));
  }
  return PointSet::from_rows(rows);
}

void write_csv(std::ostream& out, const PointSet& points) {
  for (Eigen::Index k = 0; k < points.dim(); ++k) out << (k ? "," : "") << 'x' << k;
  out << '\n';
  for (Eigen::Index i = 0; i < points.size(); ++i) {
    for (Eigen::Index k = 0; k < points.dim(); ++k) {
      out << (k ? "," : "") << format_double(points.coords()(k, i));
    }
    out << '\n';
  }
}

PointSet read_json(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("JSON parse error: ") + e.what());
  }
  if (!doc.is_array()) throw std::invalid_argument("JSON point set must be an array of arrays");
  std::vector<std::vector<double>> rows;
  for (const auto& p : doc) {
    if (!p.is_array()) throw std::invalid_argument("JSON point set must be an array of arrays");
    std::vector<double> row;
    for (const auto& c : p) {
      if (!c.is_number()) throw std::invalid_argument("JSON point coordinate is not a number");
      row.push_back(c.get<double>());
    }
    rows.push_back(std::move(row));
  }
  return PointSet::from_rows(rows);
}

PointSet load_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open point file '" + path + "'");
  const bool json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
  return json ? read_json(in) : read_csv(in);
}

}  // namespace parset::io
