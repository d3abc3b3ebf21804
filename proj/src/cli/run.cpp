#include "optstop/cli/run.hpp"

#include <charconv>
#include <chrono>
#include <ostream>
#include <stdexcept>

#include "CLI11.hpp"
#include "optstop/cli/commands.hpp"
#include "optstop/cli/manifest.hpp"
#include "optstop/errors.hpp"

#ifndef OPTSTOP_VERSION
#define OPTSTOP_VERSION "0.0.0"
#endif

namespace optstop::cli {

namespace {

struct Flags {
  std::string family = "gauss";
  std::int64_t n = 100;
  std::int64_t k = 1;
  double alpha = 0.05;
  std::vector<std::string> alphas;
  std::uint64_t reps = 1'000'000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::string mode = "sum";
  std::string esl_source = "closed";
  std::string format = "csv";
  std::string out;
  double tol = 1e-12;
  std::vector<std::int64_t> n_grid;
  std::vector<std::int64_t> k_grid;
  std::int64_t ell_max = 20;
  int k_max = 10;
  std::string dist = "fair";
  double p = 1.5;
  int vbe_n = 10;
  std::uint64_t esl_reps = 0;  // closed forms only unless asked
  std::uint64_t vbe_reps = 100'000;
};

PredictionMode parse_mode(const std::string& s) {
  if (s == "sum") return PredictionMode::SumFormula;
  if (s == "sqrt") return PredictionMode::SqrtLimit;
  throw UsageError("unknown mode '" + s + "' (expected sum or sqrt)");
}

TestFamily family_flag(const std::string& s) {
  try {
    return parse_family(s);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::vector<double> parse_alphas(const std::vector<std::string>& items) {
  std::vector<double> out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].empty()) continue;
    double v = 0.0;
    const char* end = items[i].data() + items[i].size();
    auto [ptr, ec] = std::from_chars(items[i].data(), end, v);
    if (ec != std::errc() || ptr != end) {
      throw UsageError("alpha #" + std::to_string(out.size() + 1) + " ('" + items[i] +
                       "') is not a number");
    }
    out.push_back(v);
  }
  return out;
}

void add_output_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--format", f.format, "csv or json")->capture_default_str();
  sub->add_option("--out", f.out, "output file; a manifest is written next to it");
}

void add_sim_flags(CLI::App* sub, Flags& f, std::uint64_t& reps) {
  sub->add_option("--reps", reps, "Monte Carlo replications")->capture_default_str();
  sub->add_option("--seed", f.seed, "master seed")->capture_default_str();
  sub->add_option("--workers", f.workers, "worker threads (does not change results)")
      ->capture_default_str();
}

void add_test_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--family", f.family, "gauss, exp or t")->capture_default_str();
  sub->add_option("--n", f.n, "planned sample size")->capture_default_str();
  sub->add_option("--k", f.k, "optional extra observations")->capture_default_str();
  sub->add_option("--alpha", f.alpha, "nominal level")->capture_default_str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Level inflation of tests under optional stopping", "optstop"};
  app.set_version_flag("--version", std::string(OPTSTOP_VERSION));
  app.require_subcommand(1);
  Flags f;

  auto* h_table = app.add_subcommand("h-table", "table of the inflation constant h(alpha)");
  h_table->add_option("--alphas", f.alphas, "comma-separated levels")
      ->delimiter(',')
      ->expected(0, CLI::detail::expected_max_vector_size);
  add_output_flags(h_table, f);

  auto* predict = app.add_subcommand("predict", "asymptotic prediction of rho_{n,k}");
  add_test_flags(predict, f);
  predict->add_option("--mode", f.mode, "sum or sqrt")->capture_default_str();
  predict->add_option("--esl-source", f.esl_source, "closed, closed-gauss, closed-exp or mc")
      ->capture_default_str();
  add_sim_flags(predict, f, f.reps);
  add_output_flags(predict, f);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of alpha_{n,k}");
  add_test_flags(simulate, f);
  add_sim_flags(simulate, f, f.reps);
  add_output_flags(simulate, f);

  auto* compare = app.add_subcommand("compare", "simulation against predictors over a grid");
  compare->add_option("--family", f.family, "gauss, exp or t")->capture_default_str();
  compare->add_option("--alpha", f.alpha, "nominal level")->capture_default_str();
  compare->add_option("--n-grid", f.n_grid, "comma-separated n values")->delimiter(',');
  compare->add_option("--k-grid", f.k_grid, "comma-separated k values")->delimiter(',');
  compare->add_option("--tol", f.tol, "quadrature tolerance")->capture_default_str();
  add_sim_flags(compare, f, f.reps);
  add_output_flags(compare, f);

  auto* kac = app.add_subcommand("kac-check", "exact rational check of Kac's identity");
  kac->add_option("--k-max", f.k_max, "largest walk length")->capture_default_str();
  kac->add_option("--dist", f.dist, "fair or skew")->capture_default_str();
  add_output_flags(kac, f);

  auto* esl = app.add_subcommand("esl", "E(S_l)_+ closed forms and Monte Carlo estimates");
  esl->add_option("--family", f.family, "gauss, exp or t")->capture_default_str();
  esl->add_option("--ell-max", f.ell_max, "largest l")->capture_default_str();
  add_sim_flags(esl, f, f.esl_reps);
  add_output_flags(esl, f);

  auto* vbe = app.add_subcommand("vbe-check", "von Bahr-Esseen bound for product kernels");
  vbe->add_option("--family", f.family, "gauss or exp kernel")->capture_default_str();
  vbe->add_option("--n", f.vbe_n, "sample size")->capture_default_str();
  vbe->add_option("--p", f.p, "moment order in [1, 2]")->capture_default_str();
  add_sim_flags(vbe, f, f.vbe_reps);
  add_output_flags(vbe, f);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitSuccess : kExitUsage;
  }

  const auto started = std::chrono::steady_clock::now();
  CommandResult result{OutputTable({})};
  std::string command;
  try {
    const TableFormat format = [&] {
      try {
        return parse_format(f.format);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    }();

    if (app.got_subcommand(h_table)) {
      command = "h-table";
      result = cmd_h_table(h_table->count("--alphas") ? parse_alphas(f.alphas)
                                                      : default_h_table_alphas());
    } else if (app.got_subcommand(predict)) {
      command = "predict";
      result = cmd_predict({family_flag(f.family), f.n, f.k, f.alpha, parse_mode(f.mode),
                            f.esl_source, f.reps, f.seed, f.workers});
    } else if (app.got_subcommand(simulate)) {
      command = "simulate";
      result = cmd_simulate({family_flag(f.family), f.n, f.k, f.alpha, f.reps, f.seed, f.workers});
    } else if (app.got_subcommand(compare)) {
      command = "compare";
      result = cmd_compare({family_flag(f.family), f.n_grid, f.k_grid, f.alpha, f.reps, f.seed,
                            f.workers, f.tol});
    } else if (app.got_subcommand(kac)) {
      command = "kac-check";
      result = cmd_kac_check(f.k_max, f.dist);
    } else if (app.got_subcommand(esl)) {
      command = "esl";
      result = cmd_esl({family_flag(f.family), f.ell_max, f.esl_reps, f.seed, f.workers});
    } else {
      command = "vbe-check";
      result = cmd_vbe_check({family_flag(f.family), f.vbe_n, f.p, f.vbe_reps, f.seed, f.workers});
    }
    result.parameters["format"] = f.format;

    const std::string rendered = result.table.render(format);
    RunManifest manifest;
    manifest.command = command;
    manifest.parameters = result.parameters;
    manifest.master_seed = result.master_seed;
    manifest.tool_version = OPTSTOP_VERSION;
    manifest.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    manifest.output_digest = "sha256:" + sha256_hex(rendered);

    if (f.out.empty()) {
      out << rendered;
      err << manifest.to_json().dump() << "\n";
    } else {
      write_file_atomically(f.out, rendered);
      write_file_atomically(manifest_path_for(f.out), manifest.to_json().dump(2) + "\n");
    }
    if (result.exit_code == kExitInvariant) {
      err << "optstop: invariant violated, see output\n";
    }
    return result.exit_code;
  } catch (const NumericalFailure& e) {
    err << "optstop: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "optstop: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "optstop: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "optstop: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace optstop::cli
