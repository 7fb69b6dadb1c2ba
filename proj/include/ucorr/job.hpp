#pragma once

// Batch front end: a JobSpec describes one CLI invocation, run() executes it
// and renders JSON or CSV. The `ucorr` executable is a thin flag parser over
// this header, so everything the CLI does is testable in-process.
//
// Exit codes: 0 success, 2 invalid input (degenerate spectra, singular
// kernel, pole hits, malformed arguments), 3 a verification check or sum
// rule failed, 4 Monte Carlo statistics unusable.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include <json.hpp>

#include "correlators.hpp"
#include "errors.hpp"
#include "hciz.hpp"
#include "monte_carlo.hpp"
#include "resolvent.hpp"
#include "spectra.hpp"
#include "verify.hpp"

namespace ucorr {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 2,
  kExitVerification = 3,
  kExitMonteCarlo = 4,
};

enum class Command { hciz, correlators, resolvent, verify, mc };
enum class OutputFormat { json, csv };
enum class Normalization { paper, haar };
enum class CorrelatorMethod { affine, quadrature };
enum class ResolventForm { identity, ratio };
enum class McQuantity { hciz, correlators, both };

NLOHMANN_JSON_SERIALIZE_ENUM(Command, {{Command::hciz, "hciz"},
                                       {Command::correlators, "correlators"},
                                       {Command::resolvent, "resolvent"},
                                       {Command::verify, "verify"},
                                       {Command::mc, "mc"}})
NLOHMANN_JSON_SERIALIZE_ENUM(OutputFormat, {{OutputFormat::json, "json"}, {OutputFormat::csv, "csv"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Normalization,
                             {{Normalization::paper, "paper"}, {Normalization::haar, "haar"}})
NLOHMANN_JSON_SERIALIZE_ENUM(CorrelatorMethod, {{CorrelatorMethod::affine, "affine"},
                                                {CorrelatorMethod::quadrature, "quadrature"}})
NLOHMANN_JSON_SERIALIZE_ENUM(ResolventForm,
                             {{ResolventForm::identity, "identity"}, {ResolventForm::ratio, "ratio"}})
NLOHMANN_JSON_SERIALIZE_ENUM(McQuantity, {{McQuantity::hciz, "hciz"},
                                          {McQuantity::correlators, "correlators"},
                                          {McQuantity::both, "both"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Precision, {{Precision::automatic, "auto"},
                                         {Precision::binary64, "binary64"},
                                         {Precision::binary128, "binary128"},
                                         {Precision::multiprecision, "multiprecision"}})

struct JobSpec {
  Command command = Command::hciz;
  std::vector<cdouble> x;
  std::vector<cdouble> y;
  OutputFormat format = OutputFormat::json;
  Precision precision = Precision::automatic;
  double separation_tol = kDefaultSeparationTol;
  unsigned threads = 1;

  Normalization normalization = Normalization::paper;  // hciz

  CorrelatorMethod method = CorrelatorMethod::affine;  // correlators
  double radius_fraction = 0.25;
  std::size_t nodes = 64;
  double row_sum_tol = kDefaultRowSumTol;

  std::vector<ResolventPoint> points;  // resolvent
  ResolventForm form = ResolventForm::identity;
  double pole_tol = kDefaultPoleTol;

  std::size_t n = 3;  // verify
  std::size_t trials = 25;
  double tol = 1e-9;
  std::size_t points_per_pair = 4;

  std::uint64_t seed = 0;  // verify, mc
  std::size_t samples = 200000;
  std::size_t blocks = 100;
  McQuantity quantity = McQuantity::both;

  bool operator==(const JobSpec& o) const {
    auto same_points = [](const std::vector<ResolventPoint>& a, const std::vector<ResolventPoint>& b) {
      if (a.size() != b.size()) return false;
      for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k].x != b[k].x || a[k].y != b[k].y) return false;
      return true;
    };
    return command == o.command && x == o.x && y == o.y && format == o.format &&
           precision == o.precision && separation_tol == o.separation_tol &&
           threads == o.threads && normalization == o.normalization && method == o.method &&
           radius_fraction == o.radius_fraction && nodes == o.nodes &&
           row_sum_tol == o.row_sum_tol && same_points(points, o.points) && form == o.form &&
           pole_tol == o.pole_tol && n == o.n && trials == o.trials && tol == o.tol &&
           points_per_pair == o.points_per_pair && seed == o.seed && samples == o.samples &&
           blocks == o.blocks && quantity == o.quantity;
  }
};

// ---------------------------------------------------------------- parsing --

/// Parses "1", "-2.5", "1+2i", "0.5-1e-3i", "3i", "-i". Returns nullopt on
/// anything else.
inline std::optional<cdouble> parse_complex(std::string_view text) {
  std::string s;
  for (char c : text)
    if (c != ' ' && c != '\t') s.push_back(c);
  if (s.empty()) return std::nullopt;
  auto is_unit = [](char c) { return c == 'i' || c == 'j'; };

  const char* begin = s.c_str();
  const char* end = begin + s.size();
  if (is_unit(s.back())) {
    // imaginary part present: split at the last sign that is not an exponent sign
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size() - 1; k-- > 0;)
      if ((s[k] == '+' || s[k] == '-') && (k == 0 || (s[k - 1] != 'e' && s[k - 1] != 'E'))) {
        split = k;
        break;
      }
    double re = 0.0;
    std::string imag_text;
    if (split == std::string::npos || split == 0) {
      imag_text = s.substr(0, s.size() - 1);
    } else {
      char* stop = nullptr;
      const std::string real_text = s.substr(0, split);
      re = std::strtod(real_text.c_str(), &stop);
      if (stop != real_text.c_str() + real_text.size()) return std::nullopt;
      imag_text = s.substr(split, s.size() - 1 - split);
    }
    double im = 0.0;
    if (imag_text.empty() || imag_text == "+") {
      im = 1.0;
    } else if (imag_text == "-") {
      im = -1.0;
    } else {
      char* stop = nullptr;
      im = std::strtod(imag_text.c_str(), &stop);
      if (stop != imag_text.c_str() + imag_text.size()) return std::nullopt;
    }
    return cdouble{re, im};
  }
  char* stop = nullptr;
  const double re = std::strtod(begin, &stop);
  if (stop != end) return std::nullopt;
  return cdouble{re, 0.0};
}

/// Comma-separated list of complex numbers.
inline std::vector<cdouble> parse_complex_list(std::string_view text) {
  std::vector<cdouble> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const auto token = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    const auto z = parse_complex(token);
    if (!z) throw InvalidArgument("cannot parse complex number '" + std::string(token) + "'");
    out.push_back(*z);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

/// "x,y" with both entries complex.
inline ResolventPoint parse_point(std::string_view text) {
  const auto v = parse_complex_list(text);
  if (v.size() != 2) throw InvalidArgument("a point is written 'x,y'");
  return {v[0], v[1]};
}

inline nlohmann::json complex_to_json(cdouble z) {
  auto clean = [](double v) { return v == 0.0 ? 0.0 : v; };  // no "-0.0" in output
  return nlohmann::json::array({clean(z.real()), clean(z.imag())});
}

inline cdouble complex_from_json(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw InvalidArgument("complex numbers are written [re, im]");
}

inline std::vector<cdouble> complex_list_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw InvalidArgument("spectrum must be a JSON array");
  std::vector<cdouble> out;
  for (const auto& e : j) out.push_back(complex_from_json(e));
  return out;
}

inline nlohmann::json complex_list_to_json(const std::vector<cdouble>& v) {
  auto j = nlohmann::json::array();
  for (const auto& z : v) j.push_back(complex_to_json(z));
  return j;
}

/// Reads {"x": [[re, im], ...], "y": [[re, im], ...]}.
inline std::pair<std::vector<cdouble>, std::vector<cdouble>> read_spectra_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open input file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("input file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.contains("x") || !j.contains("y")) throw InvalidArgument("input file needs \"x\" and \"y\"");
  return {complex_list_from_json(j["x"]), complex_list_from_json(j["y"])};
}

inline nlohmann::json to_json(const JobSpec& job) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : job.points) pts.push_back({complex_to_json(p.x), complex_to_json(p.y)});
  return {{"command", job.command},
          {"x", complex_list_to_json(job.x)},
          {"y", complex_list_to_json(job.y)},
          {"format", job.format},
          {"precision", job.precision},
          {"separation_tol", job.separation_tol},
          {"threads", job.threads},
          {"normalization", job.normalization},
          {"method", job.method},
          {"radius_fraction", job.radius_fraction},
          {"nodes", job.nodes},
          {"row_sum_tol", job.row_sum_tol},
          {"points", pts},
          {"form", job.form},
          {"pole_tol", job.pole_tol},
          {"n", job.n},
          {"trials", job.trials},
          {"tol", job.tol},
          {"points_per_pair", job.points_per_pair},
          {"seed", job.seed},
          {"samples", job.samples},
          {"blocks", job.blocks},
          {"quantity", job.quantity}};
}

/// Inverse of to_json; absent keys keep their defaults.
inline JobSpec job_from_json(const nlohmann::json& j) {
  JobSpec job;
  try {
    auto get = [&](const char* key, auto& field) {
      if (!j.contains(key)) return;
      j.at(key).get_to(field);
      // unknown enum names would otherwise decay to the first enumerator
      if constexpr (std::is_enum_v<std::remove_reference_t<decltype(field)>>)
        if (nlohmann::json(field) != j.at(key))
          throw InvalidArgument(std::string("unknown value for \"") + key + "\": " + j.at(key).dump());
    };
    get("command", job.command);
    if (j.contains("x")) job.x = complex_list_from_json(j["x"]);
    if (j.contains("y")) job.y = complex_list_from_json(j["y"]);
    get("format", job.format);
    get("precision", job.precision);
    get("separation_tol", job.separation_tol);
    get("threads", job.threads);
    get("normalization", job.normalization);
    get("method", job.method);
    get("radius_fraction", job.radius_fraction);
    get("nodes", job.nodes);
    get("row_sum_tol", job.row_sum_tol);
    if (j.contains("points"))
      for (const auto& p : j["points"]) {
        if (!p.is_array() || p.size() != 2) throw InvalidArgument("points are [x, y] pairs");
        job.points.push_back({complex_from_json(p[0]), complex_from_json(p[1])});
      }
    get("form", job.form);
    get("pole_tol", job.pole_tol);
    get("n", job.n);
    get("trials", job.trials);
    get("tol", job.tol);
    get("points_per_pair", job.points_per_pair);
    get("seed", job.seed);
    get("samples", job.samples);
    get("blocks", job.blocks);
    get("quantity", job.quantity);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed job: ") + e.what());
  }
  return job;
}

// ---------------------------------------------------------------- output --

namespace job_detail {

/// %.17g: enough digits to round-trip every double.
inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

inline std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

inline ProblemPair make_pair(const JobSpec& job) {
  return {validate_spectrum(job.x, job.separation_tol), validate_spectrum(job.y, job.separation_tol)};
}

inline void warn_conditioning(const ProblemPair& pair, Precision requested, std::ostream& err) {
  double condition = 0.0;
  try {
    condition = KernelFactorization<double>(pair).condition_estimate();
  } catch (const SingularKernel&) {
    condition = std::numeric_limits<double>::infinity();
  }
  const Precision used = resolve_precision(pair, requested);
  if (condition > 1e6 || used != Precision::binary64)
    err << "note: kernel condition estimate " << num(condition) << ", computing in "
        << to_string(used) << "\n";
}

inline std::string run_hciz(const JobSpec& job, std::ostream& err) {
  const ProblemPair pair = make_pair(job);
  warn_conditioning(pair, job.precision, err);
  const LogComplex v = job.normalization == Normalization::haar
                           ? hciz_probability_normalized(pair, job.precision)
                           : hciz_value(pair, job.precision);
  if (job.format == OutputFormat::csv)
    return "log_magnitude,phase_re,phase_im\n" + num(v.log_magnitude()) + "," +
           num(v.phase().real()) + "," + num(v.phase().imag()) + "\n";
  return dump({{"log_magnitude", v.log_magnitude()}, {"phase", complex_to_json(v.phase())}});
}

inline std::string run_correlators(const JobSpec& job, std::ostream& err) {
  const ProblemPair pair = make_pair(job);
  warn_conditioning(pair, job.precision, err);
  const std::size_t n = pair.size();
  CorrelatorMatrix p;
  if (job.method == CorrelatorMethod::affine) {
    p = correlator_matrix(pair, {job.precision, job.row_sum_tol, job.threads});
  } else {
    p = CorrelatorMatrix{n, Matrix<cdouble>(n, n), resolve_precision(pair, job.precision)};
    const QuadratureOptions q{job.radius_fraction, job.nodes, job.precision};
    parallel_for(n * n, job.threads,
                 [&](std::size_t k) { p.p(k / n, k % n) = correlator_entry_quadrature(pair, k / n, k % n, q); });
    const double deviation = p.max_sum_deviation();
    if (!(deviation <= job.row_sum_tol))
      throw StochasticityViolation(deviation, KernelFactorization<double>(pair).condition_estimate());
  }

  if (job.format == OutputFormat::csv) {
    std::string out;
    for (std::size_t j = 0; j < n; ++j)
      out += (j ? "," : "") + ("j" + std::to_string(j) + "_re,j" + std::to_string(j) + "_im");
    out += "\n";
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j)
        out += (j ? "," : "") + num(p.p(i, j).real()) + "," + num(p.p(i, j).imag());
      out += "\n";
    }
    return out;
  }
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < n; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < n; ++j) row.push_back(complex_to_json(p.p(i, j)));
    rows.push_back(row);
  }
  return dump({{"n", n}, {"method", job.method}, {"precision", to_string(p.precision)}, {"p", rows}});
}

inline std::string run_resolvent(const JobSpec& job, std::ostream& err) {
  const ProblemPair pair = make_pair(job);
  if (job.points.empty()) throw InvalidArgument("resolvent needs at least one --at x,y point");
  warn_conditioning(pair, job.precision, err);
  const ResolventOptions ropts{job.precision, job.pole_tol};
  std::vector<cdouble> values;
  for (const auto& pt : job.points) {
    const double d = std::min(pair.x().distance_to(pt.x), pair.y().distance_to(pt.y));
    if (d < 1e-2)
      err << "warning: point within " << num(d) << " of a pole; expect about 1e-7 relative accuracy\n";
    values.push_back(job.form == ResolventForm::ratio ? resolvent_w_ratio_form(pair, pt, ropts).w
                                                      : resolvent_w(pair, pt, ropts).w);
  }
  if (job.format == OutputFormat::csv) {
    std::string out = "x_re,x_im,y_re,y_im,w_re,w_im\n";
    for (std::size_t k = 0; k < values.size(); ++k) {
      const auto& pt = job.points[k];
      out += num(pt.x.real()) + "," + num(pt.x.imag()) + "," + num(pt.y.real()) + "," +
             num(pt.y.imag()) + "," + num(values[k].real()) + "," + num(values[k].imag()) + "\n";
    }
    return out;
  }
  nlohmann::json pts = nlohmann::json::array();
  for (std::size_t k = 0; k < values.size(); ++k)
    pts.push_back({{"x", complex_to_json(job.points[k].x)},
                   {"y", complex_to_json(job.points[k].y)},
                   {"w", complex_to_json(values[k])}});
  return dump({{"form", job.form}, {"points", pts}});
}

inline std::string run_mc(const JobSpec& job, std::ostream& err) {
  const ProblemPair pair = make_pair(job);
  const MCOptions mopts{job.seed, job.samples, job.blocks, job.threads};
  err << "note: Monte Carlo seed " << job.seed << ", " << job.samples << " samples in "
      << job.blocks << " blocks (stream k = block k)\n";
  nlohmann::json j{{"seed", job.seed}, {"samples", job.samples}, {"blocks", job.blocks}};
  std::string csv = "quantity,i,j,mean_re,mean_im,std_error,samples,exact_re,exact_im\n";
  auto csv_row = [&](const std::string& q, const std::string& i, const std::string& jj,
                     const MCEstimate& e, cdouble exact) {
    csv += q + "," + i + "," + jj + "," + num(e.mean.real()) + "," + num(e.mean.imag()) + "," +
           num(e.std_error) + "," + std::to_string(e.samples) + "," + num(exact.real()) + "," +
           num(exact.imag()) + "\n";
  };
  if (job.quantity != McQuantity::correlators) {
    const MCEstimate e = mc_hciz(pair, mopts);
    const cdouble exact = hciz_probability_normalized(pair, job.precision).value();
    j["hciz"] = {{"mean", complex_to_json(e.mean)},
                 {"std_error", e.std_error},
                 {"samples", e.samples},
                 {"exact", complex_to_json(exact)}};
    csv_row("hciz", "", "", e, exact);
  }
  if (job.quantity != McQuantity::hciz) {
    const auto est = mc_correlator_matrix(pair, mopts);
    const auto exact = correlator_matrix(pair, {job.precision, job.row_sum_tol, job.threads});
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < pair.size(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (std::size_t k = 0; k < pair.size(); ++k) {
        const auto& e = est(i, k);
        row.push_back({{"mean", complex_to_json(e.mean)},
                       {"std_error", e.std_error},
                       {"exact", complex_to_json(exact.p(i, k))}});
        csv_row("correlator", std::to_string(i), std::to_string(k), e, exact.p(i, k));
      }
      rows.push_back(row);
    }
    j["correlators"] = rows;
  }
  return job.format == OutputFormat::csv ? csv : dump(j);
}

inline std::string run_verify(const JobSpec& job, bool& passed) {
  VerifyOptions v;
  v.n = job.n;
  v.trials = job.trials;
  v.seed = job.seed;
  v.tol = job.tol;
  v.points_per_pair = job.points_per_pair;
  v.row_sum_tol = job.row_sum_tol;
  v.precision = job.precision;
  v.threads = job.threads;
  const VerifyReport report = run_verification(v);
  passed = report.passed();
  if (job.format == OutputFormat::csv) {
    std::string out = "name,max_error,tolerance,evaluations,skipped,passed\n";
    for (const auto& c : report.checks)
      out += c.name + "," + num(c.max_error) + "," + num(c.tolerance) + "," +
             std::to_string(c.evaluations) + "," + (c.skipped ? "true" : "false") + "," +
             (c.passed() ? "true" : "false") + "\n";
    return out;
  }
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks)
    checks.push_back({{"name", c.name},
                      {"max_error", c.max_error},
                      {"tolerance", c.tolerance},
                      {"evaluations", c.evaluations},
                      {"skipped", c.skipped},
                      {"passed", c.passed()}});
  return dump({{"n", job.n},
               {"trials", job.trials},
               {"seed", job.seed},
               {"tol", job.tol},
               {"points_per_pair", job.points_per_pair},
               {"passed", passed},
               {"checks", checks}});
}

}  // namespace job_detail

/// Executes `job`. Results go to `out` only when complete; diagnostics go to `err`.
inline int run(const JobSpec& job, std::ostream& out, std::ostream& err) {
  try {
    std::string text;
    int code = kExitOk;
    switch (job.command) {
      case Command::hciz: text = job_detail::run_hciz(job, err); break;
      case Command::correlators: text = job_detail::run_correlators(job, err); break;
      case Command::resolvent: text = job_detail::run_resolvent(job, err); break;
      case Command::mc: text = job_detail::run_mc(job, err); break;
      case Command::verify: {
        bool passed = false;
        text = job_detail::run_verify(job, passed);
        if (!passed) code = kExitVerification;
        break;
      }
    }
    out << text;
    return code;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalBreakdown& e) {
    err << "error: " << e.what() << "\n";
    return kExitVerification;
  } catch (const MonteCarloError& e) {
    err << "error: " << e.what() << "\n";
    return kExitMonteCarlo;
  }
}

}  // namespace ucorr
