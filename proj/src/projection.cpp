#include "parrot/projection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "parrot/error.hpp"

namespace parrot {

namespace {

struct LineFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
};

// Ordinary least squares of v on u, centred for numerical stability.
LineFit fit_line(std::span<const double> u, std::span<const double> v) {
  const double n = static_cast<double>(u.size());
  const double mu = std::accumulate(u.begin(), u.end(), 0.0) / n;
  const double mv = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double suu = 0, suv = 0, svv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    suu += (u[i] - mu) * (u[i] - mu);
    suv += (u[i] - mu) * (v[i] - mv);
    svv += (v[i] - mv) * (v[i] - mv);
  }
  LineFit f;
  f.slope = suv / suu;
  f.intercept = mv - f.slope * mu;
  double ssr = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r = v[i] - f.slope * u[i] - f.intercept;
    ssr += r * r;
  }
  f.r2 = svv == 0 ? 1.0 : std::clamp(1.0 - ssr / svv, 0.0, 1.0);
  return f;
}

double r2_of(std::span<const TrendPoint> points, auto&& model) {
  double mean = 0;
  for (const auto& p : points) mean += p.repetitionPct;
  mean /= static_cast<double>(points.size());
  double ssr = 0, sst = 0;
  for (const auto& p : points) {
    const double r = p.repetitionPct - model(p.textCharacters);
    ssr += r * r;
    sst += (p.repetitionPct - mean) * (p.repetitionPct - mean);
  }
  return sst == 0 ? 1.0 : std::clamp(1.0 - ssr / sst, 0.0, 1.0);
}

void check_points(std::span<const TrendPoint> points) {
  if (points.size() < 2) throw Error(ErrorCode::degenerate_fit, "at least two points are required");
  for (const auto& p : points) {
    if (!(p.textCharacters > 0) || !std::isfinite(p.textCharacters)) {
      throw Error(ErrorCode::validation_failed, "text characters must be positive",
                  {{"x", std::to_string(p.textCharacters)}});
    }
    if (!std::isfinite(p.repetitionPct)) throw Error(ErrorCode::validation_failed, "non-finite percentage");
  }
  const auto [lo, hi] = std::minmax_element(points.begin(), points.end(), [](const auto& l, const auto& r) {
    return l.textCharacters < r.textCharacters;
  });
  if (lo->textCharacters == hi->textCharacters) {
    throw Error(ErrorCode::degenerate_fit, "all points share the same x value");
  }
}

}  // namespace

LogTrend fit_log_trend(std::span<const TrendPoint> points) {
  check_points(points);
  std::vector<double> u, v;
  for (const auto& p : points) {
    u.push_back(std::log(p.textCharacters));
    v.push_back(p.repetitionPct);
  }
  const auto f = fit_line(u, v);
  LogTrend t;
  t.a = f.slope;
  t.b = f.intercept;
  t.r2 = f.r2;
  t.pointCount = points.size();
  const auto [lo, hi] = std::minmax_element(points.begin(), points.end(), [](const auto& l, const auto& r) {
    return l.textCharacters < r.textCharacters;
  });
  t.minX = lo->textCharacters;
  t.maxX = hi->textCharacters;
  return t;
}

Prediction predict(const LogTrend& trend, double x) {
  if (!(x > 0)) throw Error(ErrorCode::validation_failed, "text characters must be positive");
  return {trend.a * std::log(x) + trend.b, x < trend.minX || x > trend.maxX};
}

double Magnitude::log10() const { return std::log10(mantissa) + static_cast<double>(exponent); }

std::string Magnitude::to_string() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2fE%+03lld", mantissa, static_cast<long long>(exponent));
  // 9.995 rounds to 10.00
  if (std::string(buf).rfind("10.00", 0) == 0) {
    std::snprintf(buf, sizeof buf, "%.2fE%+03lld", 1.0, static_cast<long long>(exponent + 1));
  }
  return buf;
}

std::string Magnitude::decimal_string() const {
  char buf[64];
  if (exponent < 15) {
    std::snprintf(buf, sizeof buf, "%.0f", mantissa * std::pow(10.0, static_cast<double>(exponent)));
    return buf;
  }
  // A double carries 15 significant digits; the rest are zeros.
  std::snprintf(buf, sizeof buf, "%.14e", mantissa);
  std::string digits;
  for (const char* c = buf; *c && *c != 'e'; ++c)
    if (*c >= '0' && *c <= '9') digits.push_back(*c);
  digits.append(static_cast<std::size_t>(exponent) + 1 - digits.size(), '0');
  return digits;
}

Magnitude magnitude_from_ln(double lnValue) {
  if (!std::isfinite(lnValue)) throw Error(ErrorCode::validation_failed, "magnitude out of range");
  const double l10 = lnValue / std::log(10.0);
  auto e = static_cast<std::int64_t>(std::floor(l10));
  double m = std::pow(10.0, l10 - static_cast<double>(e));
  if (m >= 10.0) {
    m /= 10.0;
    ++e;
  }
  return {m, e};
}

VolumeProjection required_volume(const LogTrend& trend, double targetPct) {
  if (!(trend.a > 0)) {
    throw Error(ErrorCode::non_invertible_trend, "trend slope must be positive to invert",
                {{"a", std::to_string(trend.a)}});
  }
  VolumeProjection p;
  p.targetPct = targetPct;
  const double lnx = (targetPct - trend.b) / trend.a;
  p.textCharacters = magnitude_from_ln(lnx);
  p.extrapolated = lnx < std::log(trend.minX) || lnx > std::log(trend.maxX);
  return p;
}

std::vector<CurveFit> compare_curve_families(std::span<const TrendPoint> points) {
  check_points(points);
  std::vector<double> x, lx, y;
  bool positiveY = true;
  for (const auto& p : points) {
    x.push_back(p.textCharacters);
    lx.push_back(std::log(p.textCharacters));
    y.push_back(p.repetitionPct);
    positiveY = positiveY && p.repetitionPct > 0;
  }
  std::vector<CurveFit> fits;
  {
    const auto f = fit_line(x, y);
    fits.push_back({"linear", f.r2, {f.slope, f.intercept}});
  }
  {
    const auto f = fit_line(lx, y);
    fits.push_back({"logarithmic", f.r2, {f.slope, f.intercept}});
  }
  if (positiveY) {
    std::vector<double> ly;
    for (double v : y) ly.push_back(std::log(v));
    // R² is reported on the original scale so families compare fairly.
    const auto e = fit_line(x, ly);
    const double ea = std::exp(e.intercept), eb = e.slope;
    fits.push_back({"exponential", r2_of(points, [&](double v) { return ea * std::exp(eb * v); }), {ea, eb}});
    const auto p = fit_line(lx, ly);
    const double pa = std::exp(p.intercept), pb = p.slope;
    fits.push_back({"power", r2_of(points, [&](double v) { return pa * std::pow(v, pb); }), {pa, pb}});
  }
  if (points.size() >= 3) {
    // quadratic in scaled x via normal equations
    const double scale = *std::max_element(x.begin(), x.end());
    double s[5] = {}, t[3] = {};
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double u = x[i] / scale;
      double pw = 1;
      for (int k = 0; k < 5; ++k) {
        s[k] += pw;
        if (k < 3) t[k] += pw * y[i];
        pw *= u;
      }
    }
    double m[3][4] = {{s[0], s[1], s[2], t[0]}, {s[1], s[2], s[3], t[1]}, {s[2], s[3], s[4], t[2]}};
    bool singular = false;
    for (int c = 0; c < 3 && !singular; ++c) {
      int piv = c;
      for (int r = c + 1; r < 3; ++r)
        if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
      if (std::abs(m[piv][c]) < 1e-300) {
        singular = true;
        break;
      }
      std::swap(m[c], m[piv]);
      for (int r = 0; r < 3; ++r) {
        if (r == c) continue;
        const double f = m[r][c] / m[c][c];
        for (int k = c; k < 4; ++k) m[r][k] -= f * m[c][k];
      }
    }
    if (!singular) {
      const double c0 = m[0][3] / m[0][0], c1 = m[1][3] / m[1][1] / scale,
                   c2 = m[2][3] / m[2][2] / (scale * scale);
      fits.push_back(
          {"quadratic", r2_of(points, [&](double v) { return c0 + c1 * v + c2 * v * v; }), {c2, c1, c0}});
    }
  }
  std::stable_sort(fits.begin(), fits.end(), [](const auto& l, const auto& r) { return l.r2 > r.r2; });
  return fits;
}

std::vector<TrendPoint> parse_trend_points(std::istream& in) {
  std::vector<TrendPoint> points;
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    TrendPoint p;
    if (!(fields >> p.textCharacters)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw Error(ErrorCode::validation_failed, "trend points line " + std::to_string(lineNo) + ": expected x and y");
    }
    std::string extra;
    if (!(fields >> p.repetitionPct) || (fields >> extra)) {
      throw Error(ErrorCode::validation_failed, "trend points line " + std::to_string(lineNo) + ": expected x and y");
    }
    points.push_back(p);
  }
  return points;
}

std::vector<TrendPoint> load_trend_points(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::not_found, "cannot open trend points file " + path.string());
  return parse_trend_points(in);
}

SnapshotSeries snapshot_series(Repository& repo, std::span<const std::vector<DocumentId>> groups,
                               const MetricsOptions& options) {
  SnapshotSeries series;
  DocumentSet acc;
  for (std::size_t k = 0; k < groups.size(); ++k) {
    acc.ids.insert(acc.ids.end(), groups[k].begin(), groups[k].end());
    std::sort(acc.ids.begin(), acc.ids.end());
    acc.ids.erase(std::unique(acc.ids.begin(), acc.ids.end()), acc.ids.end());
    if (acc.ids.empty()) {
      series.warnings.push_back("snapshot " + std::to_string(k + 1) + " has no documents; skipped");
      continue;
    }
    auto m = compute_metrics(repo, acc, options);
    if (!m.withRepetitionsPct) {
      series.warnings.push_back("snapshot " + std::to_string(k + 1) + " has no sentences; skipped");
      continue;
    }
    series.points.push_back({static_cast<double>(m.textCharacters), *m.withRepetitionsPct});
    series.metrics.push_back(std::move(m));
  }
  return series;
}

std::vector<std::vector<DocumentId>> split_groups(std::span<const DocumentId> ids, std::size_t count) {
  if (count == 0) throw Error(ErrorCode::validation_failed, "group count must be positive");
  std::vector<std::vector<DocumentId>> groups(count);
  for (std::size_t i = 0; i < ids.size(); ++i) groups[i * count / ids.size()].push_back(ids[i]);
  return groups;
}

}  // namespace parrot
