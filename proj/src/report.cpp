#include "brw/report.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "brw/errors.hpp"

namespace brw {

namespace {

nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

std::string check_row_name(const CheckResult& c) { return "check." + c.name; }

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string to_csv(const ExperimentReport& report) {
  std::string out = "name,d,n,k,M,replicas,seed,stat,value,stderr\n";
  auto line = [&](const ReportRow& r) {
    out += r.name;
    out += ',' + std::to_string(r.d) + ',' + std::to_string(r.n) + ',' + std::to_string(r.k) + ',' + r.M + ',' +
           std::to_string(r.replicas) + ',' + std::to_string(r.seed) + ',' + r.stat + ',' + format_double(r.value) +
           ',';
    if (!std::isnan(r.stderr_)) out += format_double(r.stderr_);
    out += '\n';
  };
  for (const auto& r : report.rows) line(r);
  const auto& c = report.config;
  for (const auto& chk : report.checks) {
    ReportRow r;
    r.name = check_row_name(chk);
    r.d = c.dim;
    r.M = c.past_auto ? "auto" : std::to_string(c.past);
    r.replicas = c.replicas;
    r.seed = c.seed;
    r.stat = "passed";
    r.value = chk.passed ? 1.0 : 0.0;
    line(r);
  }
  return out;
}

nlohmann::json config_json(const RunConfig& c) {
  nlohmann::json j;
  j["experiment"] = c.experiment;
  j["dim"] = c.dim;
  j["n_grid"] = c.n_grid;
  j["k"] = c.k;
  j["past"] = c.past_auto ? nlohmann::json("auto") : nlohmann::json(c.past);
  j["replicas"] = c.replicas;
  j["seed"] = c.seed;
  j["format"] = c.format;
  return j;
}

nlohmann::json to_json(const ExperimentReport& report) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["experiment"] = report.experiment;
  j["config"] = config_json(report.config);
  auto rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"name", r.name},
                    {"d", r.d},
                    {"n", r.n},
                    {"k", r.k},
                    {"M", r.M},
                    {"replicas", r.replicas},
                    {"seed", r.seed},
                    {"stat", r.stat},
                    {"value", number_or_null(r.value)},
                    {"stderr", number_or_null(r.stderr_)}});
  }
  j["rows"] = std::move(rows);
  auto checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"value", number_or_null(c.value)},
                      {"threshold", c.threshold},
                      {"relation", c.relation}});
  }
  j["checks"] = std::move(checks);
  return j;
}

std::string render(const ExperimentReport& report, std::string_view format) {
  if (format == "csv") return to_csv(report);
  if (format == "json") return to_json(report).dump(2) + "\n";
  throw UsageError("unknown format " + std::string(format));
}

std::string git_blob_sha1(std::string_view content) {
  std::string blob = "blob " + std::to_string(content.size());
  blob.push_back('\0');
  blob.append(content);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(blob.data(), blob.size(), md, &len, EVP_sha1(), nullptr) != 1)
    throw std::runtime_error("SHA-1 digest failed");
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return hex.str();
}

void write_text(const std::string& path, std::string_view body) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f.write(body.data(), static_cast<std::streamsize>(body.size()));
  f.close();
  if (!f) throw std::runtime_error("failed writing " + path);
}

nlohmann::json make_manifest(const RunConfig& cfg, const std::string& report_path, std::string_view body,
                             double wall_seconds, int threads) {
  const auto cj = config_json(cfg);
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::ostringstream ts;
  ts << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
  nlohmann::json m;
  m["schema_version"] = kSchemaVersion;
  m["config"] = cj;
  m["config_sha1"] = git_blob_sha1(cj.dump());
  m["report"] = report_path;
  m["report_sha1"] = git_blob_sha1(body);
  m["threads"] = threads;
  m["finished_utc"] = ts.str();
  m["wall_clock_seconds"] = wall_seconds;
  return m;
}

std::vector<std::string> validate_report_json(const nlohmann::json& j) {
  std::vector<std::string> errs;
  auto need = [&](const nlohmann::json& obj, const char* key, auto pred, const char* what, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) {
      errs.push_back(where + ": missing '" + key + "'");
      return;
    }
    if (!pred(obj.at(key))) errs.push_back(where + ": '" + key + "' must be " + what);
  };
  auto is_num_or_null = [](const nlohmann::json& v) { return v.is_number() || v.is_null(); };
  auto is_str = [](const nlohmann::json& v) { return v.is_string(); };
  auto is_uint = [](const nlohmann::json& v) { return v.is_number_unsigned(); };
  auto is_int = [](const nlohmann::json& v) { return v.is_number_integer(); };

  if (!j.is_object()) return {"report must be a JSON object"};
  need(j, "schema_version", [](const nlohmann::json& v) { return v.is_number_integer() && v.get<int>() == kSchemaVersion; },
       "1", "report");
  need(j, "experiment", is_str, "a string", "report");
  need(j, "config", [](const nlohmann::json& v) { return v.is_object(); }, "an object", "report");
  if (j.contains("config") && j["config"].is_object()) {
    const auto& c = j["config"];
    need(c, "experiment", is_str, "a string", "config");
    need(c, "dim", is_uint, "a nonnegative integer", "config");
    need(c, "n_grid", [](const nlohmann::json& v) { return v.is_array(); }, "an array", "config");
    need(c, "k", is_int, "an integer", "config");
    need(c, "past", [](const nlohmann::json& v) { return v == "auto" || v.is_number_unsigned(); },
         "\"auto\" or a nonnegative integer", "config");
    need(c, "replicas", is_uint, "a positive integer", "config");
    need(c, "seed", is_uint, "an unsigned integer", "config");
  }
  need(j, "rows", [](const nlohmann::json& v) { return v.is_array(); }, "an array", "report");
  if (j.contains("rows") && j["rows"].is_array()) {
    std::size_t i = 0;
    for (const auto& r : j["rows"]) {
      const auto where = "rows[" + std::to_string(i++) + "]";
      need(r, "name", is_str, "a string", where);
      need(r, "d", is_uint, "a nonnegative integer", where);
      need(r, "n", is_int, "an integer", where);
      need(r, "k", is_int, "an integer", where);
      need(r, "M", is_str, "a string", where);
      need(r, "replicas", is_uint, "a nonnegative integer", where);
      need(r, "seed", is_uint, "an unsigned integer", where);
      need(r, "stat", is_str, "a string", where);
      need(r, "value", is_num_or_null, "a number or null", where);
      need(r, "stderr", is_num_or_null, "a number or null", where);
    }
  }
  need(j, "checks", [](const nlohmann::json& v) { return v.is_array(); }, "an array", "report");
  if (j.contains("checks") && j["checks"].is_array()) {
    std::size_t i = 0;
    for (const auto& c : j["checks"]) {
      const auto where = "checks[" + std::to_string(i++) + "]";
      need(c, "name", is_str, "a string", where);
      need(c, "passed", [](const nlohmann::json& v) { return v.is_boolean(); }, "a boolean", where);
      need(c, "value", is_num_or_null, "a number or null", where);
      need(c, "threshold", [](const nlohmann::json& v) { return v.is_number(); }, "a number", where);
      need(c, "relation", [](const nlohmann::json& v) {
        return v == "<=" || v == "<" || v == ">=" || v == ">" || v == "==";
      }, "a comparison operator", where);
    }
  }
  return errs;
}

}  // namespace brw
