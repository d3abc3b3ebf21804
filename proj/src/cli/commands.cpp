#include "optstop/cli/commands.hpp"

#include <cmath>
#include <stdexcept>

#include "optstop/kac.hpp"
#include "optstop/monte_carlo.hpp"

namespace optstop::cli {

namespace {

Probability checked_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw UsageError("alpha must lie strictly between 0 and 1, got " + format_double(alpha));
  }
  return Probability(alpha);
}

void require_positive_reps(std::uint64_t reps) {
  if (reps == 0) throw UsageError("reps must be positive");
}

TestConfig make_config(TestFamily family, std::int64_t n, std::int64_t k, double alpha) {
  TestConfig config{family, checked_alpha(alpha), n, k};
  config.validate();
  return config;
}

Cell cell(std::int64_t v) { return v; }
Cell cell(std::uint64_t v) { return static_cast<std::int64_t>(v); }

}  // namespace

std::string render_percent(double rho) { return format_fixed(100.0 * rho, 2) + " per cent"; }

std::vector<double> default_h_table_alphas() { return {0.05, 0.025, 0.01, 0.005, 0.001, 0.0005}; }

CommandResult cmd_h_table(const std::vector<double>& alphas) {
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] > 0.0 && alphas[i] < 1.0)) {
      throw UsageError("alpha #" + std::to_string(i + 1) + " (" + format_double(alphas[i]) +
                       ") is not strictly between 0 and 1");
    }
  }
  CommandResult result{OutputTable({"alpha", "h", "h_rounded_2dp"})};
  for (double a : alphas) {
    const double h = special::h_alpha(Probability(a)).value();
    result.table.add_row({a, h, std::round(h * 100.0) / 100.0});
  }
  result.parameters["alphas"] = alphas;
  return result;
}

CommandResult cmd_predict(const PredictOptions& o) {
  const TestConfig config = make_config(o.family, o.n, o.k, o.alpha);
  if (o.k < 1) throw UsageError("predict needs k >= 1");

  CommandResult result{OutputTable({"row", "ell", "esl_plus", "term", "rho", "percent_of_alpha",
                                    "rendered", "alpha_nk_implied", "mode", "esl_source",
                                    "outside_validity"})};
  result.parameters["family"] = family_name(o.family);
  result.parameters["n"] = o.n;
  result.parameters["k"] = o.k;
  result.parameters["alpha"] = o.alpha;
  result.parameters["mode"] = mode_name(o.mode);
  result.parameters["esl_source"] = o.esl_source;

  PredictionBreakdown b;
  std::vector<double> esl;
  if (o.mode == PredictionMode::SqrtLimit) {
    b = predict_rho_sqrt(o.n, o.k, config.alpha);
  } else {
    EslSource source;
    const EslSource natural = closed_form_source(o.family);
    if (o.esl_source == "closed") {
      source = natural;
    } else if (o.esl_source == "closed-gauss" || o.esl_source == "closed-exp") {
      source = o.esl_source == "closed-gauss" ? EslSource::ClosedFormGauss
                                              : EslSource::ClosedFormExponential;
      if (source != natural) {
        throw UsageError("esl source " + o.esl_source + " does not match the scores of the " +
                         std::string(family_name(o.family)) + " family");
      }
    } else if (o.esl_source == "mc") {
      source = EslSource::MonteCarlo;
    } else {
      throw UsageError("unknown esl source '" + o.esl_source +
                       "' (expected closed, closed-gauss, closed-exp or mc)");
    }

    if (source == EslSource::MonteCarlo) {
      require_positive_reps(o.reps);
      if (o.k > 100'000) throw UsageError("Monte Carlo esl source needs k <= 100000");
      esl = estimate_esl_plus(o.family, static_cast<int>(o.k), o.reps, RngSpec{o.seed}, o.workers)
                .mean;
      result.parameters["reps"] = o.reps;
      result.parameters["seed"] = o.seed;
      result.master_seed = o.seed;
    } else {
      esl = esl_plus_closed_form_table(o.family, o.k);
    }
    b = predict_rho_sum(o.n, o.k, config.alpha, esl, source);
  }

  const double scale = b.h.value() / std::sqrt(static_cast<double>(o.n)) * special::kSqrt2Pi;
  double total_term = 0.0;
  for (std::size_t i = 0; i < b.terms.size(); ++i) {
    const double rho_i = scale * b.terms[i];
    total_term += b.terms[i];
    result.table.add_row({std::string("term"), cell(static_cast<std::int64_t>(i + 1)), esl[i],
                          b.terms[i], rho_i, 100.0 * rho_i, {}, {}, {}, {}, {}});
  }
  Cell term_cell = b.terms.empty() ? Cell{} : Cell{total_term};
  result.table.add_row({std::string("total"), cell(o.k), {}, term_cell, b.rho, b.percent(),
                        render_percent(b.rho), b.implied_alpha_nk(config.alpha),
                        std::string(mode_name(b.mode)),
                        b.mode == PredictionMode::SqrtLimit ? Cell{}
                                                            : Cell{std::string(esl_source_name(b.esl_source))},
                        b.outside_validity});
  return result;
}

CommandResult cmd_simulate(const SimulateOptions& o) {
  const TestConfig config = make_config(o.family, o.n, o.k, o.alpha);
  require_positive_reps(o.reps);
  const InflationEstimate est = simulate_alpha_nk(config, o.reps, RngSpec{o.seed}, o.workers);

  CommandResult result{OutputTable({"kind", "family", "n", "k", "alpha", "reps", "seed", "m",
                                    "count", "alpha_hat_nk", "alpha_hat_n", "rho_hat",
                                    "rho_percent", "se", "ci95_lower", "ci95_upper"})};
  const std::string fam(family_name(o.family));
  result.table.add_row({std::string("summary"), fam, cell(o.n), cell(o.k), o.alpha, cell(o.reps),
                        cell(o.seed), {}, cell(est.rejections), est.alpha_hat_nk, est.alpha_hat_n,
                        est.rho_hat, 100.0 * est.rho_hat, est.se, est.ci95.lower, est.ci95.upper});
  for (std::size_t j = 0; j < est.first_rejection_histogram.size(); ++j) {
    result.table.add_row({std::string("first_rejection"), fam, cell(o.n), cell(o.k), o.alpha,
                          cell(o.reps), cell(o.seed), cell(o.n + static_cast<std::int64_t>(j)),
                          cell(est.first_rejection_histogram[j]), {}, {}, {}, {}, {}, {}, {}});
  }
  result.parameters["family"] = fam;
  result.parameters["n"] = o.n;
  result.parameters["k"] = o.k;
  result.parameters["alpha"] = o.alpha;
  result.parameters["reps"] = o.reps;
  result.parameters["seed"] = o.seed;
  result.parameters["workers"] = o.workers;
  result.master_seed = o.seed;
  return result;
}

CommandResult cmd_compare(const CompareOptions& o) {
  if (o.n_grid.empty() || o.k_grid.empty()) throw UsageError("compare needs non-empty n and k grids");
  if (o.n_grid.size() * o.k_grid.size() > kMaxCompareCells) {
    throw UsageError("compare grid has " + std::to_string(o.n_grid.size() * o.k_grid.size()) +
                     " cells, more than the limit of " + std::to_string(kMaxCompareCells));
  }
  require_positive_reps(o.reps);
  for (auto k : o.k_grid) {
    if (k < 1) throw UsageError("compare needs every k >= 1");
  }
  for (auto n : o.n_grid) make_config(o.family, n, 1, o.alpha);
  const Probability alpha = checked_alpha(o.alpha);

  CommandResult result{OutputTable({"n", "k", "rho_sim", "rho_sum_pred", "rho_sqrt_pred",
                                    "rho_exact_quad_or_blank", "sim_se"})};
  for (auto n : o.n_grid) {
    for (auto k : o.k_grid) {
      const TestConfig config = make_config(o.family, n, k, o.alpha);
      const auto est = simulate_alpha_nk(config, o.reps, RngSpec{o.seed}, o.workers);
      const auto esl = esl_plus_closed_form_table(o.family, k);
      const double sum_pred = predict_rho_sum(n, k, alpha, esl, closed_form_source(o.family)).rho;
      const double sqrt_pred = predict_rho_sqrt(n, k, alpha).rho;
      Cell quad;
      if (o.family == TestFamily::GaussKnownVariance && k == 1) {
        quad = exact_gauss_k1(n, alpha, o.tol).value / o.alpha - 1.0;
      }
      result.table.add_row({cell(n), cell(k), est.rho_hat, sum_pred, sqrt_pred, quad, est.rho_se()});
    }
  }
  result.parameters["family"] = family_name(o.family);
  result.parameters["n_grid"] = o.n_grid;
  result.parameters["k_grid"] = o.k_grid;
  result.parameters["alpha"] = o.alpha;
  result.parameters["reps"] = o.reps;
  result.parameters["seed"] = o.seed;
  result.parameters["tol"] = o.tol;
  result.parameters["workers"] = o.workers;
  result.master_seed = o.seed;
  return result;
}

CommandResult cmd_kac_check(int k_max, const std::string& preset) {
  if (k_max < 0) throw UsageError("k_max must be nonnegative");
  const WalkDistribution dist = WalkDistribution::preset(preset);
  if (k_max > 0) check_kac_budget(dist, k_max);
  CommandResult result{OutputTable({"k", "lhs", "rhs", "equal"})};
  for (int k = 1; k <= k_max; ++k) {
    const KacSides sides = kac_both_sides_exact(dist, k);
    const bool equal = sides.lhs == sides.rhs;
    if (!equal) result.exit_code = kExitInvariant;
    result.table.add_row({cell(static_cast<std::int64_t>(k)), to_string(sides.lhs),
                          to_string(sides.rhs), equal});
  }
  result.parameters["k_max"] = k_max;
  result.parameters["dist"] = preset;
  return result;
}

CommandResult cmd_esl(const EslOptions& o) {
  if (o.ell_max < 1) throw UsageError("ell_max must be at least 1");
  if (o.ell_max > 100'000) throw UsageError("ell_max must be at most 100000");
  const auto rows = esl_lower_bound_check(o.family, o.ell_max);

  EslEstimate mc;
  if (o.reps > 0) {
    mc = estimate_esl_plus(o.family, static_cast<int>(o.ell_max), o.reps, RngSpec{o.seed}, o.workers);
  }
  CommandResult result{OutputTable({"ell", "closed_form", "lower_bound", "bound_holds", "mc_mean",
                                    "mc_se", "mc_max_mean", "mc_max_se", "kac_sum",
                                    "mc_kac_gap", "mc_kac_gap_se"})};
  double kac_sum = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    kac_sum += r.esl / static_cast<double>(r.ell);
    const bool have_mc = o.reps > 0;
    result.table.add_row({cell(r.ell), r.esl, r.bound, r.esl >= r.bound,
                          have_mc ? Cell{mc.mean[i]} : Cell{}, have_mc ? Cell{mc.se[i]} : Cell{},
                          have_mc ? Cell{mc.max_mean[i]} : Cell{},
                          have_mc ? Cell{mc.max_se[i]} : Cell{}, kac_sum,
                          have_mc ? Cell{mc.kac_gap_mean[i]} : Cell{},
                          have_mc ? Cell{mc.kac_gap_se[i]} : Cell{}});
  }
  result.parameters["family"] = family_name(o.family);
  result.parameters["ell_max"] = o.ell_max;
  result.parameters["reps"] = o.reps;
  if (o.reps > 0) {
    result.parameters["seed"] = o.seed;
    result.parameters["workers"] = o.workers;
    result.master_seed = o.seed;
  }
  return result;
}

CommandResult cmd_vbe_check(const VbeOptions& o) {
  if (o.family == TestFamily::StudentT) throw UsageError("vbe-check kernels: gauss or exp");
  require_positive_reps(o.reps);
  const VbeKernel kernel = o.family == TestFamily::GaussKnownVariance
                               ? VbeKernel::ProductNormal
                               : VbeKernel::ProductCenteredExponential;
  const VbeCheck c = vbe_bound_check(kernel, o.n, o.p, o.reps, RngSpec{o.seed}, o.workers);
  CommandResult result{OutputTable({"family", "n", "p", "reps", "lhs", "lhs_se", "rhs", "rhs_se",
                                    "margin", "margin_se", "margin_in_se", "holds"})};
  result.table.add_row({std::string(family_name(o.family)), cell(static_cast<std::int64_t>(o.n)),
                        o.p, cell(o.reps), c.lhs, c.lhs_se, c.rhs, c.rhs_se, c.margin, c.margin_se,
                        c.margin_in_se(), c.holds()});
  if (!c.holds()) result.exit_code = kExitInvariant;
  result.parameters["family"] = family_name(o.family);
  result.parameters["n"] = o.n;
  result.parameters["p"] = o.p;
  result.parameters["reps"] = o.reps;
  result.parameters["seed"] = o.seed;
  result.parameters["workers"] = o.workers;
  result.master_seed = o.seed;
  return result;
}

}  // namespace optstop::cli
