// Copyright 2026 The clocksim authors
// SPDX-License-Identifier: MIT

#include "clocksim/table.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

namespace clocksim {

bool Cell::operator==(const Cell &other) const {
  if (is_number != other.is_number) return false;
  if (is_number) {
    // Bit-equality (not ==) so NaN-safe and distinguishing -0.0 from 0.0 is
    // not needed for our data; the serialized form is what must round-trip.
    return number == other.number ||
           (std::isnan(number) && std::isnan(other.number));
  }
  return text == other.text;
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw domain_error("table row width does not match the column count");
  }
  rows.push_back(std::move(row));
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string to_csv(const Table &table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (const auto &row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += row[c].is_number ? format_double(row[c].number) : row[c].text;
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table &table, const nlohmann::json &config_echo) {
  nlohmann::json doc;
  doc["config"] = config_echo;
  doc["columns"] = table.columns;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto &row : table.rows) {
    nlohmann::json jrow = nlohmann::json::array();
    for (const auto &cell : row) {
      if (cell.is_number) {
        jrow.push_back(cell.number);
      } else {
        jrow.push_back(cell.text);
      }
    }
    rows.push_back(std::move(jrow));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

Table table_from_json(const std::string &text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error &err) {
    throw domain_error(std::string("invalid JSON table: ") + err.what());
  }
  Table table;
  if (!doc.contains("columns") || !doc.contains("rows")) {
    throw domain_error("JSON table lacks columns/rows");
  }
  table.columns = doc["columns"].get<std::vector<std::string>>();
  for (const auto &jrow : doc["rows"]) {
    std::vector<Cell> row;
    row.reserve(jrow.size());
    for (const auto &cell : jrow) {
      if (cell.is_string()) {
        row.emplace_back(cell.get<std::string>());
      } else {
        row.emplace_back(cell.get<double>());
      }
    }
    table.add_row(std::move(row));
  }
  return table;
}

void write_output(const std::string &path, const std::string &content) {
  if (path.empty()) {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw domain_error("cannot open output file: " + path);
  }
  file << content;
  if (!file) {
    throw domain_error("failed while writing output file: " + path);
  }
}

}  // namespace clocksim
