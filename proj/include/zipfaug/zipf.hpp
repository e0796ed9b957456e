#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "zipfaug/corpus.hpp"

namespace zipfaug {

struct InsufficientData : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InfeasibleBetaGrid : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoTurningPoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RankRange {
  std::size_t lo = 0;
  std::size_t hi = 0;  // inclusive
};

struct ClassicalFit {
  double alpha = 0;      // exponent of f = c / r^alpha
  double c = 0;
  double r_squared = 0;
  RankRange fit_domain;
};

struct ExtendedFit {
  double alpha = 0;      // f = c / (r + beta)^alpha
  double c = 0;
  double beta = 0;
  double r_squared = 0;
  RankRange fit_domain;
};

enum class SplitMethod { ClassicalCurvature, ExtendedBeta, Manual };

inline const char* to_string(SplitMethod m) {
  switch (m) {
    case SplitMethod::ClassicalCurvature: return "classical-curvature";
    case SplitMethod::ExtendedBeta: return "extended-beta";
    case SplitMethod::Manual: return "manual";
  }
  return "?";
}

struct SplitPoint {
  std::size_t r0 = 0;
  SplitMethod method = SplitMethod::Manual;
};

struct FitReport {
  std::string group;
  ClassicalFit fit;
  std::size_t observations = 0;
};

struct ExclusionPoint {
  std::size_t excluded = 0;  // n lowest distinct frequency values dropped
  double r_squared = 0;
  std::size_t survivors = 0;
};

struct ExclusionCurve {
  std::vector<ExclusionPoint> points;
};

namespace detail {

struct OlsResult {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
};

// Unweighted OLS of log10(f) on log10(x) over (x, f) points with x, f > 0.
inline OlsResult loglog_ols(const std::vector<std::pair<double, double>>& points) {
  const std::size_t n = points.size();
  if (n < 2) throw InsufficientData("log-log regression needs at least 2 points");
  double sx = 0, sy = 0;
  for (const auto& [x, f] : points) {
    sx += std::log10(x);
    sy += std::log10(f);
  }
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [x, f] : points) {
    const double dx = std::log10(x) - mx;
    const double dy = std::log10(f) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0) throw InsufficientData("log-log regression needs distinct x values");
  OlsResult out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  double ss_res = 0;
  for (const auto& [x, f] : points) {
    const double resid = std::log10(f) - (out.intercept + out.slope * std::log10(x));
    ss_res += resid * resid;
  }
  out.r_squared = syy > 0 ? 1.0 - ss_res / syy : (ss_res == 0 ? 1.0 : 0.0);
  return out;
}

inline std::vector<std::pair<double, double>> rank_points(const FrequencyTable& table,
                                                          std::size_t from_rank) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& e : table.entries())
    if (e.rank >= from_rank) pts.emplace_back(static_cast<double>(e.rank), e.frequency);
  return pts;
}

}  // namespace detail

inline ClassicalFit fit_classical(const FrequencyTable& table) {
  if (table.total_rank() < 2)
    throw InsufficientData("classical fit needs a table with r_t >= 2");
  auto ols = detail::loglog_ols(detail::rank_points(table, 1));
  ClassicalFit fit;
  fit.alpha = -ols.slope;
  fit.c = std::pow(10.0, ols.intercept);
  fit.r_squared = ols.r_squared;
  fit.fit_domain = RankRange{1, table.total_rank()};
  return fit;
}

// Curvature of f(r) = c / r^alpha:
//   kappa(r) = c*alpha*(alpha+1) * r^(-alpha-2) / [1 + (c*alpha*r^(-alpha-1))^2]^(3/2)
inline double curvature(const ClassicalFit& fit, double r) {
  if (r <= 0) throw std::domain_error("curvature is defined for r > 0");
  const double ca = fit.c * fit.alpha;
  const double numer = ca * (fit.alpha + 1.0) * std::pow(r, -fit.alpha - 2.0);
  const double slope = ca * std::pow(r, -fit.alpha - 1.0);
  return numer / std::pow(1.0 + slope * slope, 1.5);
}

// r0 = argmax of the curvature over integer ranks 1..r_t (first maximum wins).
inline SplitPoint find_r0_classical(const ClassicalFit& fit, std::size_t r_t) {
  if (r_t < 2) throw InsufficientData("r0 search needs r_t >= 2");
  std::size_t best_rank = 1;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 1; r <= r_t; ++r) {
    const double k = curvature(fit, static_cast<double>(r));
    if (k > best) {
      best = k;
      best_rank = r;
    }
  }
  return SplitPoint{best_rank, SplitMethod::ClassicalCurvature};
}

// Integer grid search over beta maximizing R^2 of log10(f) ~ log10(r + beta),
// restricted to ranks r > max(1, -beta). Ties prefer the beta closest to zero.
// Candidates whose fitted exponent is not positive are skipped: the extended
// law is a decreasing curve, so alpha <= 0 never describes a turning point.
inline ExtendedFit fit_extended(const FrequencyTable& table, long beta_lo, long beta_hi) {
  if (table.total_rank() < 3)
    throw InsufficientData("extended fit needs a table with r_t >= 3");
  if (beta_lo > beta_hi) throw std::invalid_argument("beta grid is empty");
  const long r_t = static_cast<long>(table.total_rank());

  std::vector<long> candidates;
  for (long b = beta_lo; b <= beta_hi; ++b)
    if (-b < r_t) candidates.push_back(b);
  std::sort(candidates.begin(), candidates.end(), [](long a, long b) {
    if (std::labs(a) != std::labs(b)) return std::labs(a) < std::labs(b);
    return a < b;
  });

  bool found = false;
  ExtendedFit best;
  for (long beta : candidates) {
    const long min_rank = std::max(1L, -beta) + 1;  // r > max(1, -beta)
    if (r_t - min_rank + 1 < 2) continue;
    std::vector<std::pair<double, double>> pts;
    for (const auto& e : table.entries())
      if (static_cast<long>(e.rank) >= min_rank)
        pts.emplace_back(static_cast<double>(e.rank) + static_cast<double>(beta), e.frequency);
    detail::OlsResult ols;
    try {
      ols = detail::loglog_ols(pts);
    } catch (const InsufficientData&) {
      continue;
    }
    if (-ols.slope <= 0) continue;
    if (!found || ols.r_squared > best.r_squared) {
      found = true;
      best.alpha = -ols.slope;
      best.c = std::pow(10.0, ols.intercept);
      best.beta = static_cast<double>(beta);
      best.r_squared = ols.r_squared;
      best.fit_domain = RankRange{static_cast<std::size_t>(min_rank), table.total_rank()};
    }
  }
  if (!found) throw InfeasibleBetaGrid("no feasible beta in grid [" + std::to_string(beta_lo) +
                                       ".." + std::to_string(beta_hi) + "]");
  return best;
}

inline std::pair<long, long> default_beta_grid(const FrequencyTable& table) {
  const long r_t = static_cast<long>(table.total_rank());
  return {-(r_t - 3), 0};
}

// Turning point of the extended law: r0 = round(-beta), clamped to [1, r_t].
inline SplitPoint find_r0_extended(const ExtendedFit& fit) {
  if (fit.beta >= 0)
    throw NoTurningPoint("extended fit has beta >= 0, no turning point");
  long r0 = std::lround(-fit.beta);
  const long r_t = static_cast<long>(fit.fit_domain.hi);
  r0 = std::clamp(r0, 1L, std::max(1L, r_t));
  return SplitPoint{static_cast<std::size_t>(r0), SplitMethod::ExtendedBeta};
}

// Splits the table into four contiguous rank groups of (near) equal entry
// count and fits each group separately, keeping global ranks.
inline std::vector<FitReport> quartile_analysis(const FrequencyTable& table) {
  const std::size_t n = table.total_rank();
  if (n < 8) throw InsufficientData("quartile analysis needs r_t >= 8");
  static const char* kLabels[4] = {"top", "second", "third", "bottom"};
  std::vector<FitReport> reports;
  for (std::size_t g = 0; g < 4; ++g) {
    const std::size_t begin = g * n / 4;
    const std::size_t end = (g + 1) * n / 4;
    if (end - begin < 2)
      throw InsufficientData(std::string("quartile group '") + kLabels[g] +
                             "' has fewer than 2 entries");
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = begin; i < end; ++i) {
      const auto& e = table.entries()[i];
      pts.emplace_back(static_cast<double>(e.rank), e.frequency);
    }
    auto ols = detail::loglog_ols(pts);
    FitReport rep;
    rep.group = kLabels[g];
    rep.fit.alpha = -ols.slope;
    rep.fit.c = std::pow(10.0, ols.intercept);
    rep.fit.r_squared = ols.r_squared;
    rep.fit.fit_domain = RankRange{begin + 1, end};
    rep.observations = end - begin;
    reports.push_back(std::move(rep));
  }
  return reports;
}

// For n = 0..n_max, drops every entry whose frequency is among the n smallest
// distinct frequency values, refits on the survivors (re-ranked 1..), and
// records (n, R^2). Stops once fewer than 3 entries survive.
inline ExclusionCurve progressive_exclusion(const FrequencyTable& table, long n_max) {
  if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
  std::vector<double> distinct_asc;
  for (auto it = table.entries().rbegin(); it != table.entries().rend(); ++it)
    if (distinct_asc.empty() || it->frequency != distinct_asc.back())
      distinct_asc.push_back(it->frequency);

  ExclusionCurve curve;
  for (long n = 0; n <= n_max; ++n) {
    std::size_t keep = table.total_rank();
    if (n > 0) {
      if (static_cast<std::size_t>(n) > distinct_asc.size()) break;
      const double threshold = distinct_asc[static_cast<std::size_t>(n) - 1];
      while (keep > 0 && table.entries()[keep - 1].frequency <= threshold) --keep;
    }
    if (keep < 3) break;
    std::vector<std::pair<double, double>> pts;
    pts.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i)
      pts.emplace_back(static_cast<double>(i + 1), table.entries()[i].frequency);
    auto ols = detail::loglog_ols(pts);
    curve.points.push_back(
        ExclusionPoint{static_cast<std::size_t>(n), ols.r_squared, keep});
  }
  return curve;
}

inline void exclusion_to_csv(const ExclusionCurve& curve, std::ostream& os) {
  os << "n,r_squared\n";
  for (const auto& p : curve.points) os << p.excluded << ',' << p.r_squared << "\n";
}

}  // namespace zipfaug
