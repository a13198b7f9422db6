// Checks a JSON report against the schema; exit 0 if valid, 1 otherwise.

#include <fstream>
#include <iostream>

#include <json.hpp>

#include "brw/report.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: validate_report <report.json>\n";
    return 1;
  }
  std::ifstream f(argv[1]);
  if (!f) {
    std::cerr << "cannot open " << argv[1] << '\n';
    return 1;
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << "invalid JSON: " << e.what() << '\n';
    return 1;
  }
  const auto errs = brw::validate_report_json(j);
  for (const auto& e : errs) std::cerr << e << '\n';
  if (errs.empty()) std::cout << "ok: " << j["rows"].size() << " rows, " << j["checks"].size() << " checks\n";
  return errs.empty() ? 0 : 1;
}
