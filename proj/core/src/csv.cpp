// Copyright 2026 The ganlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ganlab/csv.hpp"

#include <sstream>

#include "ganlab/error.hpp"
#include "ganlab/format.hpp"

namespace ganlab {

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
    : out_(path, std::ios::binary | std::ios::trunc), columns_(header.size()) {
  if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
  pending_ = std::move(header);
  end_row();
}

CsvWriter& CsvWriter::cell(const std::string& text) {
  if (text.find_first_of(",\"\n") != std::string::npos) {
    throw UsageError("CSV cells may not contain commas, quotes or newlines: " + text);
  }
  pending_.push_back(text);
  return *this;
}

CsvWriter& CsvWriter::cell(double value) { return cell(format_double(value)); }
CsvWriter& CsvWriter::cell(std::uint64_t value) { return cell(std::to_string(value)); }
CsvWriter& CsvWriter::cell(int value) { return cell(std::to_string(value)); }

void CsvWriter::end_row() {
  if (pending_.size() != columns_) {
    throw UsageError("CSV row has " + std::to_string(pending_.size()) + " cells, header has " +
                     std::to_string(columns_));
  }
  for (std::size_t i = 0; i < pending_.size(); ++i) {
    if (i) out_ << ',';
    out_ << pending_[i];
  }
  out_ << '\n';
  pending_.clear();
  if (!out_) throw std::runtime_error("CSV write failed");
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw UsageError("CSV has no column '" + name + "'");
}

bool CsvTable::has_column(const std::string& name) const {
  for (const auto& h : header) {
    if (h == name) return true;
  }
  return false;
}

double CsvTable::number(std::size_t row, const std::string& name) const {
  return parse_double(rows.at(row).at(column(name)));
}

std::vector<double> CsvTable::numbers(const std::string& name) const {
  const std::size_t c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(parse_double(r.at(c)));
  return out;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path.string());
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (first) {
      table.header = std::move(cells);
      first = false;
    } else {
      if (cells.size() != table.header.size()) {
        throw UsageError(path.string() + ": row width differs from header");
      }
      table.rows.push_back(std::move(cells));
    }
  }
  if (first) throw UsageError(path.string() + " is empty");
  return table;
}

}  // namespace ganlab
