#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "test_support.hpp"
#include "ucorr/job.hpp"

using namespace ucorr;

TEST(Parse, ComplexForms) {
  EXPECT_EQ(*parse_complex("1"), cdouble(1, 0));
  EXPECT_EQ(*parse_complex("-2.5"), cdouble(-2.5, 0));
  EXPECT_EQ(*parse_complex("1+2i"), cdouble(1, 2));
  EXPECT_EQ(*parse_complex("0+0i"), cdouble(0, 0));
  EXPECT_EQ(*parse_complex("0.5-1e-3i"), cdouble(0.5, -1e-3));
  EXPECT_EQ(*parse_complex("1e-3-2e+2i"), cdouble(1e-3, -200));
  EXPECT_EQ(*parse_complex("3i"), cdouble(0, 3));
  EXPECT_EQ(*parse_complex("-i"), cdouble(0, -1));
  EXPECT_EQ(*parse_complex(" 2 - i "), cdouble(2, -1));
  EXPECT_FALSE(parse_complex(""));
  EXPECT_FALSE(parse_complex("abc"));
  EXPECT_FALSE(parse_complex("1+xi"));
  EXPECT_FALSE(parse_complex("1+2"));
}

TEST(Parse, Lists) {
  const auto v = parse_complex_list("0+0i,1+2i");
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[1], cdouble(1, 2));
  EXPECT_THROW(parse_complex_list("0,,1"), InvalidArgument);
  const auto p = parse_point("2+0.5i,-1");
  EXPECT_EQ(p.x, cdouble(2, 0.5));
  EXPECT_EQ(p.y, cdouble(-1, 0));
  EXPECT_THROW(parse_point("1,2,3"), InvalidArgument);
}

TEST(JobSpecTest, JsonRoundTrip) {
  JobSpec job;
  job.command = Command::resolvent;
  job.x = {{0, 0}, {1, 2}};
  job.y = {{0.5, -1}, {3, 0}};
  job.points = {{{2, 0.5}, {-1, 0}}};
  job.format = OutputFormat::csv;
  job.precision = Precision::binary128;
  job.seed = 12345678901234ull;
  job.quantity = McQuantity::hciz;
  job.radius_fraction = 0.1;
  const JobSpec back = job_from_json(nlohmann::json::parse(to_json(job).dump()));
  EXPECT_TRUE(back == job);
}

TEST(JobSpecTest, MalformedJobIsValidationError) {
  EXPECT_THROW(job_from_json(nlohmann::json{{"command", 3}}), InvalidArgument);
  EXPECT_THROW(job_from_json(nlohmann::json{{"x", "zero"}}), InvalidArgument);
}

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result exec(const JobSpec& job) {
  std::ostringstream out, err;
  const int code = run(job, out, err);
  return {code, out.str(), err.str()};
}

JobSpec two_by_two(Command c) {
  JobSpec job;
  job.command = c;
  job.x = {0.0, 1.0};
  job.y = {0.0, 1.0};
  return job;
}

}  // namespace

TEST(Run, HcizJson) {
  const auto r = exec(two_by_two(Command::hciz));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.size(), 2u);
  EXPECT_NEAR(j["log_magnitude"].get<double>(), 0.5413248546129181, 1e-15);
  EXPECT_EQ(j["phase"][0].get<double>(), 1.0);
  EXPECT_EQ(j["phase"][1].get<double>(), 0.0);
}

TEST(Run, HcizHaarNormalizationAndCsv) {
  JobSpec job = two_by_two(Command::hciz);
  job.x = {0.0, 1.0, 2.0};
  job.y = {0.0, 1.0, 2.0};
  job.format = OutputFormat::csv;
  const auto paper = exec(job);
  job.normalization = Normalization::haar;
  const auto haar = exec(job);
  ASSERT_EQ(paper.code, 0);
  ASSERT_EQ(haar.code, 0);
  double lp, lh;
  std::sscanf(paper.out.c_str() + paper.out.find('\n') + 1, "%lf", &lp);
  std::sscanf(haar.out.c_str() + haar.out.find('\n') + 1, "%lf", &lh);
  EXPECT_NEAR(lh - lp, std::log(2.0), 1e-14);
}

TEST(Run, CorrelatorsCsvRowsSumToOne) {
  JobSpec job = two_by_two(Command::correlators);
  job.format = OutputFormat::csv;
  const auto r = exec(job);
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "j0_re,j0_im,j1_re,j1_im");
  for (int row = 0; row < 2; ++row) {
    ASSERT_TRUE(std::getline(in, line));
    double a, b, c, d;
    ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &a, &b, &c, &d), 4);
    EXPECT_NEAR(a + c, 1.0, 1e-12);
    if (row == 1) {
      EXPECT_NEAR(c, 0.5819767068693265, 1e-10);
    }
  }
}

TEST(Run, CorrelatorsQuadrature) {
  JobSpec job = two_by_two(Command::correlators);
  job.method = CorrelatorMethod::quadrature;
  const auto r = exec(job);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["p"][1][1][0].get<double>(), 0.5819767068693265, 1e-8);
}

TEST(Run, ResolventPoints) {
  JobSpec job = two_by_two(Command::resolvent);
  job.points = {{{2.0, 0.5}, {-1.0, 0.0}}, {{3.0, 0.0}, {3.0, 0.0}}};
  const auto r = exec(job);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["points"].size(), 2u);
  const auto pair = testref::real_pair({0.0, 1.0}, {0.0, 1.0});
  const cdouble w = testref::resolvent_reference(pair, {3.0, 0.0}, {3.0, 0.0});
  EXPECT_NEAR(j["points"][1]["w"][0].get<double>(), w.real(), 1e-13);
}

TEST(Run, ResolventNearPoleWarns) {
  JobSpec job = two_by_two(Command::resolvent);
  job.points = {{{1.0 + 1e-4, 0.0}, {3.0, 0.0}}};
  const auto r = exec(job);
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("pole"), std::string::npos);
}

TEST(Run, ValidationErrorsExitTwo) {
  JobSpec job = two_by_two(Command::hciz);
  job.x = {0.0, 0.0};
  const auto r = exec(job);
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("separated"), std::string::npos);

  JobSpec res = two_by_two(Command::resolvent);
  res.points = {{{1.0, 0.0}, {3.0, 0.0}}};
  EXPECT_EQ(exec(res).code, kExitValidation);

  JobSpec mismatch = two_by_two(Command::correlators);
  mismatch.y = {0.0};
  EXPECT_EQ(exec(mismatch).code, kExitValidation);
}

TEST(Run, SumRuleFailureExitsThree) {
  JobSpec job = two_by_two(Command::correlators);
  Rng rng = derive_stream(57, 0);
  const auto pair = random_pair(8, rng);
  job.x.assign(pair.x().begin(), pair.x().end());
  job.y.assign(pair.y().begin(), pair.y().end());
  job.precision = Precision::binary64;
  job.row_sum_tol = 1e-300;
  const auto r = exec(job);
  EXPECT_EQ(r.code, kExitVerification);
  EXPECT_TRUE(r.out.empty());
}

TEST(Run, MonteCarloJsonIsDeterministic) {
  JobSpec job = two_by_two(Command::mc);
  job.samples = 2000;
  job.blocks = 10;
  job.seed = 4;
  const auto a = exec(job);
  job.threads = 3;
  const auto b = exec(job);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto j = nlohmann::json::parse(a.out);
  EXPECT_TRUE(j.contains("hciz"));
  EXPECT_TRUE(j.contains("correlators"));
}

TEST(Run, VerifyReport) {
  JobSpec job;
  job.command = Command::verify;
  job.n = 3;
  job.trials = 5;
  job.seed = 42;
  const auto r = exec(job);
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_EQ(j["checks"].size(), 8u);

  job.tol = 1e-300;  // impossible tolerance fails the report, exit 3
  const auto f = exec(job);
  EXPECT_EQ(f.code, kExitVerification);
  EXPECT_FALSE(nlohmann::json::parse(f.out)["passed"].get<bool>());
}

TEST(Run, ExactCommandsAreByteIdentical) {
  JobSpec job = two_by_two(Command::correlators);
  job.x = {{0.1, 0.2}, {0.7, -0.3}, {0.4, 0.9}};
  job.y = {{0.3, 0.3}, {-0.2, 0.5}, {0.9, 0.1}};
  EXPECT_EQ(exec(job).out, exec(job).out);
}

TEST(Input, ReadsSpectraFile) {
  const std::string path = testing::TempDir() + "ucorr_input.json";
  std::ofstream(path) << R"({"x": [[0, 0], [1, 0]], "y": [[0, 0], [1, 2]]})";
  const auto [x, y] = read_spectra_file(path);
  EXPECT_EQ(y[1], cdouble(1, 2));
  EXPECT_THROW(read_spectra_file(path + ".missing"), InvalidArgument);
  std::ofstream(path) << "{not json";
  EXPECT_THROW(read_spectra_file(path), InvalidArgument);
}
