#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace gpcbo {

/// Shortest round-trippable decimal form (printf %.17g).
std::string csv_num(double v);
/// Same, but NaN becomes the empty cell used for "not applicable".
std::string csv_opt(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index for a header name; throws IoError when absent.
  std::size_t column(const std::string& name) const;
  /// Numeric cell; empty cells parse as NaN.
  double number(std::size_t row, std::size_t col) const;
};

/// Minimal reader for the files this tool writes itself: comma separation,
/// no quoting, first row is the header. Throws IoError on missing files.
CsvTable read_csv(const std::filesystem::path& path);

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace gpcbo
