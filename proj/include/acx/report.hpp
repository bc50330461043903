#pragma once

// JSON and CSV report serialization.  Floats are written with %.17g so equal
// inputs give byte-identical files.

#include "acx/config.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace acx {

inline constexpr int kReportSchema = 1;

inline std::string format_double(double v) {
  if (std::isnan(v)) return "null";
  if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace detail {

inline void dump_json(const ordered_json& j, std::string& out, int indent, int depth) {
  const auto pad = [&](int d) { out.append(std::size_t(indent * d), ' '); };
  switch (j.type()) {
    case ordered_json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      std::size_t i = 0;
      for (const auto& [k, v] : j.items()) {
        pad(depth + 1);
        out += ordered_json(k).dump() + ": ";
        dump_json(v, out, indent, depth + 1);
        out += ++i < j.size() ? ",\n" : "\n";
      }
      pad(depth);
      out += "}";
      return;
    }
    case ordered_json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Short numeric arrays stay on one line.
      const bool flat = j.size() <= 8 && std::all_of(j.begin(), j.end(), [](const auto& e) { return e.is_primitive(); });
      out += flat ? "[" : "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (!flat) pad(depth + 1);
        dump_json(j[i], out, indent, depth + 1);
        if (i + 1 < j.size()) out += flat ? ", " : ",\n";
      }
      if (!flat) {
        out += "\n";
        pad(depth);
      }
      out += "]";
      return;
    }
    case ordered_json::value_t::number_float: out += format_double(j.get<double>()); return;
    default: out += j.dump(); return;
  }
}

}  // namespace detail

inline std::string dump_fixed(const ordered_json& j, int indent = 2) {
  std::string out;
  detail::dump_json(j, out, indent, 0);
  out += "\n";
  return out;
}

inline std::string config_hash(const RunConfig& c) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a(dump_fixed(to_json(c))));
  return std::string("fnv1a64:") + buf;
}

// Pass means value <= tolerance unless lower_bound, then value >= tolerance.
struct CheckRow {
  std::string name;
  std::string tag;
  double value = 0.0;
  double tolerance = 0.0;
  bool lower_bound = false;
  bool informational = false;
  bool pass() const { return informational || (lower_bound ? value >= tolerance : value <= tolerance); }
};

struct CsvRow {
  Vec4 x = Vec4::Zero();
  std::string quantity;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

class Report {
 public:
  Report(std::string command, const RunConfig& c) : command_(std::move(command)), config_(acx::to_json(c)), hash_(config_hash(c)) {}
  Report(std::string command, ordered_json raw_config) : command_(std::move(command)), config_(std::move(raw_config)) {}

  void check(CheckRow r) { checks_.push_back(std::move(r)); }
  void check(const std::string& name, const std::string& tag, double value, double tol) { check(CheckRow{name, tag, value, tol}); }
  void check_at_least(const std::string& name, const std::string& tag, double value, double tol) {
    check(CheckRow{name, tag, value, tol, true});
  }
  void info(const std::string& name, const std::string& tag, double value) { check(CheckRow{name, tag, value, 0.0, false, true}); }
  void flag(const std::string& name, const std::string& tag, bool ok) { check(CheckRow{name, tag, ok ? 1.0 : 0.0, 1.0, true}); }
  void row(CsvRow r) { rows_.push_back(std::move(r)); }
  void row(const Vec4& x, const std::string& q, double v, double tol = 0.0, bool pass = true) { rows_.push_back({x, q, v, tol, pass}); }
  ordered_json& data() { return data_; }
  void error(const std::string& kind, const std::string& message) {
    error_kind_ = kind;
    error_message_ = message;
  }

  bool all_pass() const {
    return error_kind_.empty() && std::all_of(checks_.begin(), checks_.end(), [](const CheckRow& c) { return c.pass(); });
  }
  const std::vector<CheckRow>& checks() const { return checks_; }
  const std::vector<CsvRow>& rows() const { return rows_; }

  ordered_json to_json() const {
    ordered_json j;
    j["schema"] = kReportSchema;
    j["command"] = command_;
    j["config_hash"] = hash_.empty() ? ordered_json(nullptr) : ordered_json(hash_);
    j["config"] = config_;
    j["status"] = !error_kind_.empty() ? "error" : (all_pass() ? "pass" : "fail");
    j["error"] = error_kind_.empty() ? ordered_json(nullptr) : ordered_json{{"kind", error_kind_}, {"message", error_message_}};
    ordered_json cs = ordered_json::array();
    for (const auto& c : checks_) {
      ordered_json e;
      e["name"] = c.name;
      e["tag"] = c.tag;
      e["value"] = c.value;
      e["tolerance"] = c.informational ? ordered_json(nullptr) : ordered_json(c.tolerance);
      e["bound"] = c.informational ? "none" : (c.lower_bound ? "min" : "max");
      e["pass"] = c.pass();
      cs.push_back(e);
    }
    j["checks"] = cs;
    j["data"] = data_.is_null() ? ordered_json::object() : data_;
    return j;
  }

  std::string csv() const {
    std::string out = "x1,y1,x2,y2,quantity,value,tolerance,pass\n";
    for (const auto& r : rows_) {
      for (int k = 0; k < 4; ++k) out += format_double(r.x(k)) + ",";
      out += r.quantity + "," + format_double(r.value) + "," + format_double(r.tolerance) + "," + (r.pass ? "1" : "0") + "\n";
    }
    return out;
  }

  // Writes <dir>/<command>.json and <dir>/<command>.csv.
  void write(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    std::ofstream(dir / (command_ + ".json")) << dump_fixed(to_json());
    std::ofstream(dir / (command_ + ".csv")) << csv();
  }

 private:
  std::string command_;
  ordered_json config_;
  std::string hash_;
  std::vector<CheckRow> checks_;
  std::vector<CsvRow> rows_;
  ordered_json data_;
  std::string error_kind_, error_message_;
};

}  // namespace acx
