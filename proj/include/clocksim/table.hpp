// Copyright 2026 The clocksim authors
// SPDX-License-Identifier: MIT

#ifndef CLOCKSIM_TABLE_HPP
#define CLOCKSIM_TABLE_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "clocksim/common.hpp"

namespace clocksim {

/// One table cell: either a number (serialized with 17 significant digits,
/// enough to round-trip a double exactly) or a short label.
struct Cell {
  bool is_number = true;
  double number = 0.0;
  std::string text;

  Cell() = default;
  Cell(double v) : is_number(true), number(v) {}           // NOLINT(runtime/explicit)
  Cell(int v) : is_number(true), number(v) {}              // NOLINT(runtime/explicit)
  Cell(std::int64_t v)                                     // NOLINT(runtime/explicit)
      : is_number(true), number(static_cast<double>(v)) {}
  Cell(std::string v) : is_number(false), text(std::move(v)) {}  // NOLINT
  Cell(const char *v) : is_number(false), text(v) {}       // NOLINT(runtime/explicit)

  bool operator==(const Cell &other) const;
};

/// Rectangular results table with named columns.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);

  bool operator==(const Table &other) const {
    return columns == other.columns && rows == other.rows;
  }
};

/// Formats a double with 17 significant digits (%.17g): deterministic and
/// lossless for round-tripping.
std::string format_double(double v);

/// CSV serialization: header line + one line per row, LF line endings.
std::string to_csv(const Table &table);

/// JSON serialization with the same content plus a configuration echo:
///   {"config": ..., "columns": [...], "rows": [[...], ...]}.
std::string to_json(const Table &table, const nlohmann::json &config_echo);

/// Parses the JSON produced by to_json back into a table (losslessly).
Table table_from_json(const std::string &text);

/// Writes content to path, or to stdout when path is empty.
void write_output(const std::string &path, const std::string &content);

}  // namespace clocksim

#endif  // CLOCKSIM_TABLE_HPP
