#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <sstream>

#include "fonrev/error.hpp"
#include "fonrev/pwlfit.hpp"

using namespace fonrev;

namespace {

double h(double x) { return std::log((x + 1) / (x - 1)); }

}  // namespace

TEST(LogTerm, Values) {
  EXPECT_NEAR(xci_log_term(10), 0.2006706954621511, 1e-15);
  EXPECT_NEAR(xci_log_term(3), std::log(2.0), 1e-15);
}

TEST(Pwl, SingleSegmentIsOneLine) {
  auto fit = fit_pwl(2, 3, 1);
  ASSERT_EQ(fit.q_segments(), 1);
  for (double x = 2; x <= 3; x += 0.01) EXPECT_GE(eval_upper(fit, x), h(x) - 1e-12);
}

TEST(Pwl, ErrorBoundsAtTwentyAndForty) {
  auto t0 = std::chrono::steady_clock::now();
  auto f20 = fit_pwl(1.001, 200, 20);
  auto f40 = fit_pwl(1.001, 200, 40);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  double e20 = max_rel_error(f20, 100000);
  double e40 = max_rel_error(f40, 100000);
  EXPECT_LT(e20, 0.05);
  EXPECT_LE(e40, e20);
  EXPECT_LT(secs, 10.0);
  EXPECT_LT(max_rel_error_log(f20, 100000), 0.05);
}

TEST(Pwl, UpperBoundEverywhere) {
  auto fit = fit_pwl(1.001, 200, 20);
  const int n = 200000;
  for (int k = 0; k <= n; ++k) {
    double x = 1.001 + (200 - 1.001) * k / n;
    ASSERT_GE(eval_upper(fit, x), h(x) - 1e-12) << x;
  }
  for (int k = 0; k <= n; ++k) {
    double x = 1 + 0.001 * std::pow(199.0 / 0.001, double(k) / n);
    ASSERT_GE(eval_upper(fit, x), h(x) - 1e-12) << x;
  }
}

TEST(Pwl, WithinFivePercentAtTen) {
  auto fit = fit_pwl(1.001, 200, 20);
  double v = eval_upper(fit, 10);
  EXPECT_GE(v, 0.2006706954621511 - 1e-12);
  EXPECT_LE(v, 1.05 * 0.2006706954621511);
}

TEST(Pwl, FiniteAtLowerEnd) {
  auto fit = fit_pwl(1.001, 200, 20);
  double v = eval_upper(fit, 1.001);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_GE(v, h(1.001) - 1e-12);
}

TEST(Pwl, EnvelopeIsConvex) {
  auto fit = fit_pwl(1.001, 200, 20);
  const double d = 0.05;
  for (double x = 1.001 + d; x + d <= 200; x += d) {
    double s = eval_upper(fit, x + d) - 2 * eval_upper(fit, x) + eval_upper(fit, x - d);
    ASSERT_GE(s, -1e-9) << x;
  }
}

TEST(Pwl, SlopesAscendAndPiecesAreActive) {
  auto fit = fit_pwl(1.001, 200, 20);
  for (std::size_t k = 1; k < fit.lines.size(); ++k)
    EXPECT_GT(fit.lines[k].slope, fit.lines[k - 1].slope);
  // Midpoint of each piece's active interval evaluates to that piece.
  std::vector<double> breaks{fit.x1};
  for (std::size_t k = 0; k + 1 < fit.lines.size(); ++k) {
    const auto& a = fit.lines[k];
    const auto& b = fit.lines[k + 1];
    breaks.push_back((b.intercept - a.intercept) / (a.slope - b.slope));
  }
  breaks.push_back(fit.x2);
  for (std::size_t k = 0; k < fit.lines.size(); ++k) {
    double mid = 0.5 * (breaks[k] + breaks[k + 1]);
    double line = fit.lines[k].slope * mid + fit.lines[k].intercept;
    EXPECT_NEAR(eval_upper(fit, mid), line, 1e-12);
  }
}

TEST(Pwl, DomainChecks) {
  EXPECT_THROW(fit_pwl(1.0, 200, 20), DomainError);
  EXPECT_THROW(fit_pwl(0.5, 200, 20), DomainError);
  EXPECT_THROW(fit_pwl(5, 3, 20), DomainError);
  EXPECT_THROW(fit_pwl(1.001, 200, 0), DomainError);
  auto fit = fit_pwl(1.001, 200, 20);
  EXPECT_TRUE(eval_upper_checked(fit, 300).outside_domain);
  EXPECT_TRUE(eval_upper_checked(fit, 1.0005).outside_domain);
  EXPECT_FALSE(eval_upper_checked(fit, 50).outside_domain);
}

TEST(Pwl, CsvTable) {
  auto fit = fit_pwl(1.001, 200, 20);
  std::istringstream in(pwl_to_csv(fit));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "k,o1,o0");
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  EXPECT_EQ(rows, 20);
}
