#pragma once

// Randomized property battery behind `ucorr verify`: every identity the
// library relies on, checked on seeded random complex instances.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "correlators.hpp"
#include "instances.hpp"
#include "monte_carlo.hpp"
#include "oracles.hpp"
#include "resolvent.hpp"

namespace ucorr {

struct VerifyOptions {
  std::size_t n = 3;
  std::size_t trials = 25;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  std::size_t points_per_pair = 4;
  double row_sum_tol = kDefaultRowSumTol;
  Precision precision = Precision::automatic;
  unsigned threads = 1;
};

struct CheckResult {
  std::string name;
  double max_error = 0.0;
  double tolerance = 0.0;
  std::size_t evaluations = 0;
  bool skipped = false;

  bool passed() const { return skipped || max_error <= tolerance; }
  void record(double err) {
    // NaN must fail
    max_error = std::isnan(err) ? std::numeric_limits<double>::infinity() : std::max(max_error, err);
    ++evaluations;
  }
};

struct VerifyReport {
  VerifyOptions options;
  std::vector<CheckResult> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
  }
};

inline double relative_gap(cdouble value, cdouble reference) {
  return std::abs(value - reference) / std::max(std::abs(reference), 1e-300);
}

inline VerifyReport run_verification(const VerifyOptions& opts) {
  if (opts.n == 0) throw InvalidArgument("verify needs n >= 1");
  VerifyReport report{opts, {}};
  auto make = [&](std::string name, double tol, bool skip = false) {
    CheckResult c;
    c.name = std::move(name);
    c.tolerance = tol;
    c.skipped = skip;
    return c;
  };
  const bool subset_ok = opts.n <= kSubsetSumMaxN;
  const bool perm_ok = opts.n <= kPermutationProductMaxN;
  CheckResult w_vs_subset = make("oracle_triangle.resolvent_vs_subset_sum", opts.tol, !subset_ok);
  CheckResult w_vs_perm = make("oracle_triangle.resolvent_vs_permutation_product", opts.tol, !perm_ok);
  CheckResult subset_vs_perm =
      make("oracle_triangle.subset_sum_vs_permutation_product", opts.tol, !subset_ok);
  CheckResult forms = make("resolvent.identity_vs_ratio_form", opts.tol);
  CheckResult exchange = make("symmetry.resolvent_exchange", opts.tol);
  CheckResult sums = make("sum_rules.row_and_column_sums", opts.row_sum_tol);
  CheckResult transpose = make("symmetry.correlator_transpose", opts.tol);
  CheckResult poles = make("pole_reconstruction", opts.tol);

  const ResolventOptions ropts{opts.precision, kDefaultPoleTol};
  CorrelatorOptions copts{opts.precision, std::numeric_limits<double>::infinity(), opts.threads};

  for (std::size_t t = 0; t < opts.trials; ++t) {
    Rng rng = derive_stream(opts.seed, t);
    const ProblemPair pair = random_pair(opts.n, rng);
    const ProblemPair swapped = pair.swapped();

    const CorrelatorMatrix p = correlator_matrix(pair, copts);
    const CorrelatorMatrix q = correlator_matrix(swapped, copts);
    sums.record(p.max_sum_deviation());
    double tr = 0.0;
    for (std::size_t i = 0; i < opts.n; ++i)
      for (std::size_t j = 0; j < opts.n; ++j) tr = std::max(tr, std::abs(p.p(i, j) - q.p(j, i)));
    transpose.record(tr);

    for (std::size_t k = 0; k < opts.points_per_pair; ++k) {
      const ResolventPoint pt = random_point(pair, rng);
      const cdouble w = resolvent_w(pair, pt, ropts).w;
      forms.record(relative_gap(resolvent_w_ratio_form(pair, pt, ropts).w, w));
      exchange.record(relative_gap(resolvent_w(swapped, {pt.y, pt.x}, ropts).w, w));
      poles.record(pole_expansion_check(pair, p, pt, ropts));
      cdouble subset{}, perm{};
      if (subset_ok) {
        subset = morozov_subset_sum(pair, pt);
        w_vs_subset.record(relative_gap(w, subset));
      }
      if (perm_ok) {
        perm = permutation_product_form(pair, pt);
        w_vs_perm.record(relative_gap(w, perm));
      }
      if (subset_ok) subset_vs_perm.record(relative_gap(subset, perm));
    }
  }
  report.checks = {w_vs_subset, w_vs_perm, subset_vs_perm, forms, exchange, sums, transpose, poles};
  return report;
}

}  // namespace ucorr
