#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

namespace optstop::cli {

/// A blank cell renders as an empty CSV field and as JSON null.
using Cell = std::variant<std::monostate, std::int64_t, double, std::string, bool>;

enum class TableFormat { Csv, Json };

TableFormat parse_format(std::string_view name);

class OutputTable {
 public:
  explicit OutputTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  /// Throws std::invalid_argument if the row width does not match.
  void add_row(std::vector<Cell> row);

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }
  std::size_t column_index(std::string_view name) const;

  /// Header row plus one line per row; '.' decimal point, 17 significant
  /// digits for doubles, independent of the global locale.
  std::string to_csv() const;
  /// Array of row objects keyed by column name.
  nlohmann::ordered_json to_json() const;
  std::string render(TableFormat format) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

/// 17 significant digits; "nan" and "inf" for non-finite values.
std::string format_double(double value);

/// Fixed-point rendering with `decimals` digits after the point.
std::string format_fixed(double value, int decimals);

}  // namespace optstop::cli
