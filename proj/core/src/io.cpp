// Copyright 2026 The CrowdSense Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "crowdsense/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "crowdsense/error.hpp"

namespace crowdsense {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) {
    // trim surrounding spaces
    const auto first = field.find_first_not_of(" \t\r");
    const auto last = field.find_last_not_of(" \t\r");
    fields.push_back(first == std::string::npos
                         ? std::string()
                         : field.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

bool parse_double(const std::string& field, double& out) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::vector<double>> read_numeric_rows(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open file: " + path.string());
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first_line = true;
  while (std::getline(in, line)) {
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    const auto fields = split_fields(line);
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t i = 0; i < fields.size() && numeric; ++i) {
      numeric = parse_double(fields[i], row[i]);
    }
    if (!numeric) {
      if (first_line) {
        first_line = false;
        continue;  // header row
      }
      throw IoError("non-numeric field in " + path.string() + ": " + line);
    }
    first_line = false;
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_lines(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write file: " + path.string());
  }
  out << body;
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

Eigen::MatrixXd read_csv_matrix(const std::filesystem::path& path) {
  const auto rows = read_numeric_rows(path);
  if (rows.empty()) {
    throw IoError("empty matrix file: " + path.string());
  }
  const std::size_t cols = rows.front().size();
  for (const auto& row : rows) {
    if (row.size() != cols) {
      throw IoError("ragged rows in " + path.string());
    }
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return m;
}

void write_csv_matrix(const std::filesystem::path& path,
                      const Eigen::MatrixXd& matrix) {
  std::string body;
  for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
    body += (c == 0 ? "c" : ",c") + std::to_string(c);
  }
  body += '\n';
  for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
      if (c > 0) body += ',';
      body += format_double(matrix(r, c));
    }
    body += '\n';
  }
  write_lines(path, body);
}

ObservationMask read_csv_mask(const std::filesystem::path& path,
                              Eigen::Index rows, Eigen::Index cols) {
  const auto table = read_numeric_rows(path);
  std::vector<ObservationMask::Entry> entries;
  entries.reserve(table.size());
  for (const auto& row : table) {
    if (row.size() != 2) {
      throw IoError("mask rows must be `row,col` pairs in " + path.string());
    }
    entries.emplace_back(static_cast<Eigen::Index>(row[0]),
                         static_cast<Eigen::Index>(row[1]));
  }
  return ObservationMask(rows, cols, std::move(entries));
}

void write_csv_mask(const std::filesystem::path& path,
                    const ObservationMask& mask) {
  std::string body = "row,col\n";
  for (const auto& [r, c] : mask.entries()) {
    body += std::to_string(r) + ',' + std::to_string(c) + '\n';
  }
  write_lines(path, body);
}

void write_csv_columns(const std::filesystem::path& path,
                       const std::vector<std::string>& headers,
                       const std::vector<std::vector<double>>& columns) {
  if (headers.size() != columns.size()) {
    throw std::invalid_argument("write_csv_columns: header/column mismatch");
  }
  const std::size_t length = columns.empty() ? 0 : columns.front().size();
  for (const auto& col : columns) {
    if (col.size() != length) {
      throw std::invalid_argument("write_csv_columns: ragged columns");
    }
  }
  std::string body;
  for (std::size_t i = 0; i < headers.size(); ++i) {
    if (i > 0) body += ',';
    body += headers[i];
  }
  body += '\n';
  for (std::size_t r = 0; r < length; ++r) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i > 0) body += ',';
      body += format_double(columns[i][r]);
    }
    body += '\n';
  }
  write_lines(path, body);
}

}  // namespace crowdsense
