// unidym <experiment-id> --config <path> [--out <dir>] [--format csv|jsonl] [--seed N] [--plot kind]
//
// Exit codes: 0 ran (records may carry fail/flag), 2 usage, 3 I/O, 4 internal invariant breach.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "unidym/unidym.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitInternal = 4;

int run(int argc, char** argv) {
  CLI::App app{"Numerical experiments for one-dimensional interval and circle maps"};
  std::string id, config_path, out_dir, format, plot_kind;
  std::optional<std::uint64_t> seed;
  bool list = false;
  app.add_option("experiment", id, "experiment id (see --list)");
  app.add_option("--config", config_path, "flat key-value config file");
  app.add_option("--out", out_dir, "output directory (default harness.out or ./results)");
  app.add_option("--format", format, "csv or jsonl (default harness.format or csv)")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  app.add_option("--seed", seed, "64-bit seed overriding harness.seed");
  app.add_option("--plot", plot_kind, "margin-histogram, census-vs-parameter or rho-envelope")
      ->check(CLI::IsMember({"margin-histogram", "census-vs-parameter", "rho-envelope"}));
  app.add_flag("--list", list, "list experiment ids and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (list) {
    for (const auto& e : unidym::registry())
      std::printf("%-22s [%s] %s\n", e.id.c_str(), e.module.c_str(), e.summary.c_str());
    return kExitOk;
  }
  if (id.empty()) throw unidym::UsageError("missing experiment id");
  if (config_path.empty()) throw unidym::UsageError("--config is required");

  const auto& info = unidym::find_experiment(id);
  const unidym::Config cfg = unidym::Config::from_file(config_path);
  const unidym::Format fmt = unidym::parse_format(format.empty() ? cfg.get_string("harness.format", "csv") : format);
  const std::filesystem::path dir = out_dir.empty() ? cfg.get_string("harness.out", "results") : out_dir;
  std::optional<unidym::PlotKind> plot;
  if (!plot_kind.empty()) plot = unidym::parse_plot_kind(plot_kind);
  const std::uint64_t s = unidym::resolve_seed(cfg, seed);

  const auto records = unidym::run_experiment(info.id, cfg, s);

  unidym::EmitMeta meta;
  meta.experiment = info.id;
  meta.seed = s;
  meta.config = config_path;
  const auto path = unidym::emit(records, fmt, dir, meta);

  int pass = 0, fail = 0, flag = 0;
  for (const auto& r : records) {
    if (r.status == unidym::RecordStatus::pass) ++pass;
    else if (r.status == unidym::RecordStatus::fail) ++fail;
    else ++flag;
  }
  std::printf("%s: %zu records (%d pass, %d fail, %d flag) -> %s\n", info.id.c_str(), records.size(), pass,
              fail, flag, path.string().c_str());
  if (plot) {
    const auto svg = unidym::plot(records, *plot, dir);
    std::printf("plot -> %s\n", svg.string().c_str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const unidym::UsageError& e) {
    std::fprintf(stderr, "unidym: %s\n", e.what());
    return kExitUsage;
  } catch (const unidym::IoError& e) {
    std::fprintf(stderr, "unidym: %s\n", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unidym: internal error: %s\n", e.what());
    return kExitInternal;
  }
}
