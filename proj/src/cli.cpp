#include "brw/cli.hpp"

#include <charconv>
#include <chrono>
#include <ostream>

#include <CLI11.hpp>

#include "brw/errors.hpp"
#include "brw/replicas.hpp"
#include "brw/report.hpp"

namespace brw {

namespace {

template <typename T>
T parse_integer(std::string_view s, const char* flag) {
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty())
    throw UsageError(std::string(flag) + ": '" + std::string(s) + "' is not an integer");
  return v;
}

std::vector<Index> parse_grid(const std::string& s) {
  std::vector<Index> grid;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    grid.push_back(parse_integer<Index>(std::string_view(s).substr(start, comma - start), "--n-grid"));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return grid;
}

std::string experiment_list() {
  std::string s;
  for (const auto& e : experiment_names()) s += (s.empty() ? "" : ", ") + e;
  return s;
}

}  // namespace

RunConfig parse_args(int argc, const char* const* argv) {
  CLI::App app{"Monte Carlo laboratory for the range of a branching random walk on Z^d"};
  app.name(argc > 0 ? argv[0] : "brw_lab");
  RunConfig c;
  std::string n_grid, past = "auto";
  std::optional<Index> n;
  std::optional<std::size_t> dim, replicas;
  std::optional<std::int64_t> k;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;

  app.add_option("--experiment", c.experiment, "One of: " + experiment_list())->required();
  app.add_option("--dim", dim, "Lattice dimension d (default depends on the experiment)");
  auto* n_opt = app.add_option("--n", n, "Single window length n");
  app.add_option("--n-grid", n_grid, "Comma-separated increasing n values")->excludes(n_opt);
  app.add_option("--k", k, "Truncation radius k (k_max for truncation, largest ball radius for contour)");
  app.add_option("--past", past, "Past window M: integer or 'auto'")->default_val("auto");
  app.add_option("--replicas", replicas, "Replica count; sub-parts scale proportionally");
  app.add_option("--seed", seed, "Base seed")->default_val(kDefaultSeed);
  app.add_option("--out", c.out, "Report path (default brw_<experiment>.<format>)");
  app.add_option("--format", c.format, "csv or json")->default_val("csv");
  app.add_flag("--check", c.check, "Exit 2 if any acceptance check fails");
  app.add_option("--threads", threads, "Worker threads (default BRW_THREADS or all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (dim) {
    if (*dim < 1) throw UsageError("--dim must be at least 1");
    c.dim = *dim;
  }
  if (n) c.n_grid = {*n};
  if (!n_grid.empty()) c.n_grid = parse_grid(n_grid);
  if (k) {
    if (*k < 0) throw UsageError("--k must be nonnegative");
    c.k = *k;
  }
  if (past != "auto") {
    c.past_auto = false;
    c.past = parse_integer<Index>(past, "--past");
    if (c.past < 0) throw UsageError("--past must be nonnegative");
  }
  if (replicas) {
    if (*replicas < 1) throw UsageError("--replicas must be at least 1");
    c.replicas = *replicas;
  }
  if (seed) c.seed = *seed;
  if (threads) {
    if (*threads < 1) throw UsageError("--threads must be at least 1");
    c.threads = *threads;
  }
  return resolve_defaults(c);
}

int run(const RunConfig& cfg, std::ostream& out) {
  RunConfig c = resolve_defaults(cfg);
  if (c.threads <= 0) c.threads = default_threads();
  const auto t0 = std::chrono::steady_clock::now();
  const auto report = run_experiment(c);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto body = render(report, c.format);
  write_text(c.out, body);
  write_text(c.out + ".manifest.json", make_manifest(report.config, c.out, body, wall, c.threads).dump(2) + "\n");
  for (const auto& chk : report.checks) {
    out << (chk.passed ? "PASS " : "FAIL ") << chk.name << ' ' << format_double(chk.value) << ' ' << chk.relation
        << ' ' << format_double(chk.threshold) << '\n';
  }
  out << "wrote " << c.out << '\n';
  return c.check && !report.all_passed() ? 2 : 0;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    return run(parse_args(argc, argv), out);
  } catch (const HelpRequested& h) {
    out << h.what();
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nrun with --help for the flag list\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace brw
