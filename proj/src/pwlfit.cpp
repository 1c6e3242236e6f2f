#include "fonrev/pwlfit.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

#include "fonrev/error.hpp"

namespace fonrev {

namespace {

constexpr int kGridPoints = 100000;
constexpr int kMaxIterations = 500;

std::vector<double> log_grid(double x1, double x2, int n) {
  std::vector<double> x(n);
  double a = std::log(x1 - 1.0), b = std::log(x2 - 1.0);
  for (int i = 0; i < n; ++i) x[i] = 1.0 + std::exp(a + (b - a) * i / (n - 1));
  x.front() = x1;
  x.back() = x2;
  return x;
}

// Weighted least squares line through (x, h) with weights 1/h^2 on the
// squared residual, i.e. minimizing relative error.
bool lsq_line(const std::vector<double>& x, const std::vector<double>& h, int lo, int hi,
              PwlLine& out) {
  if (hi - lo < 2) return false;
  double sw = 0, sx = 0, sxx = 0, sy = 0, sxy = 0;
  for (int i = lo; i < hi; ++i) {
    double w = 1.0 / (h[i] * h[i]);
    sw += w;
    sx += w * x[i];
    sxx += w * x[i] * x[i];
    sy += w * h[i];
    sxy += w * x[i] * h[i];
  }
  double det = sw * sxx - sx * sx;
  if (!(std::abs(det) > 0)) return false;
  out.slope = (sw * sxy - sx * sy) / det;
  out.intercept = (sxx * sy - sx * sxy) / det;
  return true;
}

// Assigns each (sorted) grid point to the line attaining the max, returning
// region start indices. Lines sorted by slope ascending; on a decreasing x
// sweep the maximizer moves monotonically, so an upper-hull walk suffices.
std::vector<int> partition(const std::vector<double>& x, std::vector<PwlLine>& lines) {
  std::sort(lines.begin(), lines.end(), [](const PwlLine& a, const PwlLine& b) {
    return a.slope < b.slope || (a.slope == b.slope && a.intercept > b.intercept);
  });
  // Upper hull for max queries.
  std::vector<PwlLine> hull;
  auto bad = [](const PwlLine& l1, const PwlLine& l2, const PwlLine& l3) {
    // l2 is never strictly above both neighbours
    return (l3.intercept - l1.intercept) * (l2.slope - l1.slope) >=
           (l2.intercept - l1.intercept) * (l3.slope - l1.slope);
  };
  for (const auto& l : lines) {
    if (!hull.empty() && hull.back().slope == l.slope) continue;
    while (hull.size() >= 2 && bad(hull[hull.size() - 2], hull.back(), l)) hull.pop_back();
    hull.push_back(l);
  }
  lines = hull;
  std::vector<int> start(lines.size(), -1);
  std::size_t k = 0;
  for (int i = 0; i < static_cast<int>(x.size()); ++i) {
    while (k + 1 < lines.size() &&
           lines[k + 1].slope * x[i] + lines[k + 1].intercept >=
               lines[k].slope * x[i] + lines[k].intercept)
      ++k;
    if (start[k] < 0) start[k] = i;
  }
  return start;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

double xci_log_term(double x) {
  if (!(x > 1)) throw DomainError("h(x) needs x > 1");
  return std::log((x + 1.0) / (x - 1.0));
}

namespace {

PwlFit fit_uncached(double x1, double x2, int q) {

  const auto x = log_grid(x1, x2, kGridPoints);
  std::vector<double> h(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) h[i] = xci_log_term(x[i]);

  // Regions as [start_k, start_{k+1}), initially log-uniform breakpoints.
  std::vector<int> start;
  for (int k = 0; k < q; ++k) start.push_back(static_cast<int>(std::llround(
                                  static_cast<double>(kGridPoints - 1) * k / q)));
  start.erase(std::unique(start.begin(), start.end()), start.end());

  PwlFit fit;
  fit.x1 = x1;
  fit.x2 = x2;
  int it = 0;
  for (; it < kMaxIterations; ++it) {
    std::vector<PwlLine> lines;
    for (std::size_t k = 0; k < start.size(); ++k) {
      int lo = start[k];
      int hi = k + 1 < start.size() ? start[k + 1] : kGridPoints;
      PwlLine l;
      if (lsq_line(x, h, lo, hi, l)) lines.push_back(l);
    }
    auto next = partition(x, lines);
    std::vector<int> compact;
    for (int s : next)
      if (s >= 0) compact.push_back(s);
    std::sort(compact.begin(), compact.end());
    if (compact == start) break;
    start = compact;
  }
  fit.iterations = it;

  // Replace each piece by the chord between the knots it shares with its
  // neighbours. The result is the linear interpolant of h at the knots,
  // which lies above h on the whole interval since h is convex.
  std::vector<double> knots;
  for (int s : start) knots.push_back(x[s]);
  knots.push_back(x2);
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    double a = knots[k], b = knots[k + 1];
    if (!(b > a)) continue;
    double ha = xci_log_term(a), hb = xci_log_term(b);
    double s = (hb - ha) / (b - a);
    fit.lines.push_back({s, ha - s * a});
  }
  return fit;
}

}  // namespace

PwlFit fit_pwl(double x1, double x2, int q) {
  if (!(x1 > 1)) throw DomainError("fit domain must start above 1");
  if (!(x2 > x1)) throw DomainError("fit domain is empty");
  if (q < 1) throw DomainError("segment count must be positive");
  // A fit costs a few hundred ms and every planning run asks for one.
  static std::mutex mu;
  static std::map<std::tuple<double, double, int>, PwlFit> cache;
  auto key = std::make_tuple(x1, x2, q);
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  PwlFit fit = fit_uncached(x1, x2, q);
  std::lock_guard<std::mutex> lock(mu);
  if (cache.size() > 256) cache.clear();
  cache.emplace(key, fit);
  return fit;
}

double eval_upper(const PwlFit& fit, double x) {
  double v = -std::numeric_limits<double>::infinity();
  for (const auto& l : fit.lines) v = std::max(v, l.slope * x + l.intercept);
  return v;
}

PwlEval eval_upper_checked(const PwlFit& fit, double x) {
  return {eval_upper(fit, x), x < fit.x1 || x > fit.x2};
}

namespace {

double max_rel_error_on(const PwlFit& fit, const std::vector<double>& grid) {
  double worst = 0;
  for (double x : grid) {
    double hv = xci_log_term(x);
    double r = (eval_upper(fit, x) - hv) / hv;
    if (r < -1e-12) {
      std::ostringstream os;
      os << "envelope below h at x=" << std::setprecision(17) << x << " (relative " << r << ")";
      throw DomainError(os.str());
    }
    worst = std::max(worst, r);
  }
  return worst;
}

}  // namespace

double max_rel_error(const PwlFit& fit, int grid_points) {
  if (grid_points < 2) throw DomainError("grid needs at least two points");
  std::vector<double> g(grid_points);
  for (int i = 0; i < grid_points; ++i)
    g[i] = fit.x1 + (fit.x2 - fit.x1) * i / (grid_points - 1);
  g.back() = fit.x2;
  return max_rel_error_on(fit, g);
}

double max_rel_error_log(const PwlFit& fit, int grid_points) {
  if (grid_points < 2) throw DomainError("grid needs at least two points");
  return max_rel_error_on(fit, log_grid(fit.x1, fit.x2, grid_points));
}

std::string pwl_to_csv(const PwlFit& fit) {
  std::ostringstream os;
  os << "k,o1,o0\n";
  for (std::size_t k = 0; k < fit.lines.size(); ++k)
    os << k + 1 << "," << fmt(fit.lines[k].slope) << "," << fmt(fit.lines[k].intercept) << "\n";
  return os.str();
}

}  // namespace fonrev
