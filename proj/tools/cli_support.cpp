#include "cli_support.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "cavityj/errors.hpp"

namespace cavityj::cli {

std::string format_number(double v) {
  if (v == 0.0) return "0";
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void CsvTable::row(std::vector<Cell> cells) {
  if (cells.size() != columns_.size()) throw std::logic_error("CsvTable: row width mismatch");
  rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
  std::ostringstream os;
  for (const auto& c : comments_) os << "# " << c << '\n';
  for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
  os << '\n';
  for (const auto& r : rows_) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) os << ',';
      if (const double* d = std::get_if<double>(&r[i])) os << format_number(*d);
      else if (const long long* n = std::get_if<long long>(&r[i])) os << *n;
      else os << std::get<std::string>(r[i]);
    }
    os << '\n';
  }
  return os.str();
}

namespace {

std::string scalar_token(const nlohmann::json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return v.dump();  // shortest round-trip form
  throw ConfigError("config key '" + key + "': unsupported value type");
}

}  // namespace

std::vector<std::string> merge_config_args(const std::vector<std::string>& args) {
  std::string path;
  std::set<std::string> explicit_keys;
  for (std::size_t i = 1; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) != 0) continue;
    std::string key = a.substr(2);
    const auto eq = key.find('=');
    if (eq != std::string::npos) key = key.substr(0, eq);
    explicit_keys.insert(key);
    if (key == "config") {
      if (eq != std::string::npos) path = a.substr(a.find('=') + 1);
      else if (i + 1 < args.size()) path = args[i + 1];
    }
  }
  if (path.empty() || args.size() < 2) return args;
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  std::vector<std::string> out{args[0], args[1]};
  for (const auto& [key, v] : j.items()) {
    if (explicit_keys.count(key)) continue;
    const std::string flag = "--" + key;
    if (v.is_boolean()) {
      if (v.get<bool>()) out.push_back(flag);
    } else if (v.is_array()) {
      for (const auto& e : v) {
        out.push_back(flag);
        out.push_back(scalar_token(e, key));
      }
    } else if (v.is_null() || v.is_object()) {
      throw ConfigError("config key '" + key + "': unsupported value type");
    } else {
      out.push_back(flag);
      out.push_back(scalar_token(v, key));
    }
  }
  out.insert(out.end(), args.begin() + 2, args.end());
  return out;
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (unsigned int i = 0; i < len; ++i) {
    s += hex[md[i] >> 4];
    s += hex[md[i] & 15];
  }
  return s;
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace cavityj::cli
