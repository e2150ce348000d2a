#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "parrot/metrics.hpp"
#include "parrot/store.hpp"

namespace parrot {

struct TrendPoint {
  double textCharacters = 0;  // x > 0
  double repetitionPct = 0;   // y
};

// y = a·ln(x) + b
struct LogTrend {
  double a = 0;
  double b = 0;
  double r2 = 0;
  std::size_t pointCount = 0;
  double minX = 0;
  double maxX = 0;
};

LogTrend fit_log_trend(std::span<const TrendPoint> points);

struct Prediction {
  double repetitionPct = 0;
  bool extrapolated = false;  // x outside the fitted range
};

Prediction predict(const LogTrend& trend, double textCharacters);

// A positive real too large for a double's integer range to be exact,
// kept as mantissa × 10^exponent with mantissa in [1, 10).
struct Magnitude {
  double mantissa = 0;
  std::int64_t exponent = 0;

  double log10() const;
  std::string decimal_string() const;  // digits of the rounded integer value
  std::string to_string() const;       // "3.77E+13"
};

Magnitude magnitude_from_ln(double lnValue);

struct VolumeProjection {
  double targetPct = 0;
  Magnitude textCharacters;
  bool extrapolated = false;
};

// x = exp((y − b)/a); a ≤ 0 is non_invertible_trend.
VolumeProjection required_volume(const LogTrend& trend, double targetPct);

inline constexpr double kDefaultProjectionTargets[] = {5, 25, 50, 75, 100};

struct CurveFit {
  std::string family;  // linear, logarithmic, exponential, power, quadratic
  double r2 = 0;
  std::vector<double> coefficients;
};

// Comparative diagnostics only; sorted by r2, best first. Families whose
// domain excludes the data (exponential/power with y ≤ 0) are omitted.
std::vector<CurveFit> compare_curve_families(std::span<const TrendPoint> points);

// Lines "x<TAB>y" (any whitespace or a comma also separates); '#' starts a
// comment.
std::vector<TrendPoint> parse_trend_points(std::istream& in);
std::vector<TrendPoint> load_trend_points(const std::filesystem::path& path);

struct SnapshotSeries {
  std::vector<TrendPoint> points;
  std::vector<CorpusMetrics> metrics;
  std::vector<std::string> warnings;
};

// Point k is computed over the union of groups[0..k]. A cumulative subset
// with no documents is skipped with a warning.
SnapshotSeries snapshot_series(Repository& repo, std::span<const std::vector<DocumentId>> groups,
                               const MetricsOptions& options = {});

// Splits document ids (ascending) into `count` consecutive groups of
// near-equal size.
std::vector<std::vector<DocumentId>> split_groups(std::span<const DocumentId> ids, std::size_t count);

}  // namespace parrot
