#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace cavityj::cli {

// Comma-separated table with '#' comment header, LF endings, %.12g numbers.
class CsvTable {
 public:
  using Cell = std::variant<double, long long, std::string>;

  void comment(const std::string& line) { comments_.push_back(line); }
  void columns(std::vector<std::string> names) { columns_ = std::move(names); }
  void row(std::vector<Cell> cells);
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> comments_;
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

std::string format_number(double v);

// Rewrites argv so that keys of the JSON object in `--config path` become flags placed ahead
// of the explicit ones; keys given explicitly on the command line are dropped.
std::vector<std::string> merge_config_args(const std::vector<std::string>& args);

std::string sha256_hex(const std::string& data);

// Writes bytes exactly (binary mode); throws std::runtime_error on failure.
void write_file(const std::string& path, const std::string& data);

}  // namespace cavityj::cli
