// ucorr: command-line front end. Flags build a JobSpec; ucorr::run does the rest.

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ucorr/job.hpp"

namespace {

template <class E>
CLI::CheckedTransformer enum_choice(const std::map<std::string, E>& m) {
  return CLI::CheckedTransformer(m, CLI::ignore_case);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace ucorr;
  CLI::App app{"Exact unitary-group correlators under the Itzykson-Zuber weight"};
  app.require_subcommand(1);

  JobSpec job;
  job.threads = default_thread_count();
  std::string x_text, y_text, input_path, job_path, precision_text = "auto";
  std::vector<std::string> at_points;
  bool dump_job = false;

  const std::map<std::string, OutputFormat> formats{{"json", OutputFormat::json},
                                                    {"csv", OutputFormat::csv}};

  auto common = [&](CLI::App* sub, bool spectra) {
    if (spectra) {
      sub->add_option("--x", x_text, "spectrum of X, e.g. \"0,1\" or \"0+0i,1+2i\"");
      sub->add_option("--y", y_text, "spectrum of Y");
      sub->add_option("--input", input_path, "JSON file {\"x\": [[re,im],...], \"y\": [[re,im],...]}");
      sub->add_option("--separation-tol", job.separation_tol, "minimum eigenvalue gap");
    }
    sub->add_option("--format", job.format, "json|csv")->transform(enum_choice(formats));
    sub->add_option("--precision", precision_text, "auto|binary64|binary128|multiprecision")
        ->check(CLI::IsMember({"auto", "binary64", "binary128", "multiprecision"}, CLI::ignore_case));
    sub->add_option("--threads", job.threads, "worker threads (default: $UCORR_THREADS or 1)")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--dump-job", dump_job, "print the parsed job as JSON and exit");
  };

  auto* hciz = app.add_subcommand("hciz", "HCIZ integral as log-magnitude and phase");
  common(hciz, true);
  hciz->add_option("--normalization", job.normalization, "paper|haar")
      ->transform(enum_choice(std::map<std::string, Normalization>{{"paper", Normalization::paper},
                                                                   {"haar", Normalization::haar}}));

  auto* corr = app.add_subcommand("correlators", "matrix of <|U_ij|^2> correlators");
  common(corr, true);
  corr->add_option("--method", job.method, "affine|quadrature")
      ->transform(enum_choice(std::map<std::string, CorrelatorMethod>{
          {"affine", CorrelatorMethod::affine}, {"quadrature", CorrelatorMethod::quadrature}}));
  corr->add_option("--nodes", job.nodes, "quadrature nodes per circle")->check(CLI::PositiveNumber);
  corr->add_option("--radius-fraction", job.radius_fraction, "contour radius / nearest gap")
      ->check(CLI::Range(0.0, 0.5));
  corr->add_option("--row-sum-tol", job.row_sum_tol, "sum-rule tolerance");

  auto* res = app.add_subcommand("resolvent", "two-point resolvent W(x, y)");
  common(res, true);
  res->add_option("--at", at_points, "evaluation point \"x,y\" (repeatable)")->required();
  res->add_option("--form", job.form, "identity|ratio")
      ->transform(enum_choice(std::map<std::string, ResolventForm>{
          {"identity", ResolventForm::identity}, {"ratio", ResolventForm::ratio}}));
  res->add_option("--pole-tol", job.pole_tol, "minimum distance to a pole");

  auto* ver = app.add_subcommand("verify", "randomized property battery");
  common(ver, false);
  ver->add_option("--n", job.n, "matrix size")->check(CLI::PositiveNumber);
  ver->add_option("--trials", job.trials, "random instances");
  ver->add_option("--seed", job.seed, "master seed");
  ver->add_option("--tol", job.tol, "relative tolerance");
  ver->add_option("--points", job.points_per_pair, "resolvent points per instance");
  ver->add_option("--row-sum-tol", job.row_sum_tol, "sum-rule tolerance");

  auto* mc = app.add_subcommand("mc", "Monte Carlo Haar reference");
  common(mc, true);
  mc->add_option("--seed", job.seed, "master seed");
  mc->add_option("--samples", job.samples, "number of Haar samples");
  mc->add_option("--blocks", job.blocks, "jackknife blocks (fixed stream per block)");
  mc->add_option("--quantity", job.quantity, "hciz|correlators|both")
      ->transform(enum_choice(std::map<std::string, McQuantity>{{"hciz", McQuantity::hciz},
                                                                {"correlators", McQuantity::correlators},
                                                                {"both", McQuantity::both}}));

  auto* runjob = app.add_subcommand("run", "execute a job file written by --dump-job");
  runjob->add_option("job", job_path, "job JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (runjob->parsed()) {
      std::ifstream in(job_path);
      if (!in) throw InvalidArgument("cannot open job file '" + job_path + "'");
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("job file is not valid JSON: ") + e.what());
      }
      return run(job_from_json(j), std::cout, std::cerr);
    }

    if (hciz->parsed()) job.command = Command::hciz;
    if (corr->parsed()) job.command = Command::correlators;
    if (res->parsed()) job.command = Command::resolvent;
    if (ver->parsed()) job.command = Command::verify;
    if (mc->parsed()) job.command = Command::mc;

    if (!parse_precision(precision_text, job.precision))
      throw InvalidArgument("unknown precision '" + precision_text + "'");
    if (job.command != Command::verify) {
      if (!input_path.empty()) {
        if (!x_text.empty() || !y_text.empty())
          throw InvalidArgument("use either --input or --x/--y, not both");
        std::tie(job.x, job.y) = read_spectra_file(input_path);
      } else {
        if (x_text.empty() || y_text.empty()) throw InvalidArgument("--x and --y are required");
        job.x = parse_complex_list(x_text);
        job.y = parse_complex_list(y_text);
      }
    }
    for (const auto& p : at_points) job.points.push_back(parse_point(p));
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  if (dump_job) {
    std::cout << to_json(job).dump(2) << "\n";
    return kExitOk;
  }
  return run(job, std::cout, std::cerr);
}
