#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "parrot/error.hpp"
#include "parrot/memory_repository.hpp"
#include "parrot/projection.hpp"
#include "synthetic.hpp"

using namespace parrot;

namespace {

// Independent oracle: raw-sum normal equations in long double.
struct Oracle {
  long double a, b, r2;
};

Oracle oracle_fit(const std::vector<TrendPoint>& pts) {
  long double n = pts.size(), su = 0, sv = 0, suu = 0, suv = 0;
  for (const auto& p : pts) {
    const long double u = std::log(static_cast<long double>(p.textCharacters));
    su += u;
    sv += p.repetitionPct;
    suu += u * u;
    suv += u * p.repetitionPct;
  }
  const long double a = (n * suv - su * sv) / (n * suu - su * su);
  const long double b = (sv - a * su) / n;
  long double ssr = 0, sst = 0, mean = sv / n;
  for (const auto& p : pts) {
    const long double r = p.repetitionPct - (a * std::log(static_cast<long double>(p.textCharacters)) + b);
    ssr += r * r;
    sst += (p.repetitionPct - mean) * (p.repetitionPct - mean);
  }
  return {a, b, 1 - ssr / sst};
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::internal;
}

}  // namespace

TEST_CASE("published trend points") {
  const auto t5 = load_trend_points(PARROT_TEST_DATA "/trend_all.tsv");
  REQUIRE(t5.size() == 5);
  const auto fit = fit_log_trend(t5);
  const auto o = oracle_fit(t5);
  CHECK(fit.a == doctest::Approx(static_cast<double>(o.a)).epsilon(1e-9));
  CHECK(fit.b == doctest::Approx(static_cast<double>(o.b)).epsilon(1e-9));
  CHECK(fit.r2 == doctest::Approx(static_cast<double>(o.r2)).epsilon(1e-9));
  CHECK(fit.a == doctest::Approx(0.2431).epsilon(1e-3));
  CHECK(fit.b == doctest::Approx(-2.614).epsilon(1e-3));
  CHECK(fit.r2 == doctest::Approx(0.983).epsilon(1e-3));
  const auto p = predict(fit, 80399442210.0);
  CHECK(p.repetitionPct == doctest::Approx(3.49).epsilon(0.02 / 3.49));
  CHECK(p.extrapolated);
  CHECK_FALSE(predict(fit, 2e10).extrapolated);
  const auto v = required_volume(fit, 5.0);
  CHECK(v.textCharacters.exponent == 13);
  CHECK(v.textCharacters.mantissa == doctest::Approx(4.03).epsilon(0.01));
  CHECK(v.extrapolated);

  const auto t8 = fit_log_trend(load_trend_points(PARROT_TEST_DATA "/trend_valid.tsv"));
  CHECK(predict(t8, 8.0399e10).repetitionPct == doctest::Approx(5.33).epsilon(0.03 / 5.33));
  const auto v8 = required_volume(t8, 5.0);
  CHECK(v8.textCharacters.exponent == 10);
  CHECK(v8.textCharacters.mantissa == doctest::Approx(3.96).epsilon(0.01));
  // far extrapolations stay finite through the mantissa/exponent form
  const auto far = required_volume(fit, 100.0);
  CHECK(far.textCharacters.exponent > 170);
  CHECK(far.textCharacters.decimal_string().size() == static_cast<std::size_t>(far.textCharacters.exponent) + 1);
}

TEST_CASE("exact fits") {
  std::vector<TrendPoint> pts;
  for (double x : {1.0, 10.0, 100.0, 5000.0}) pts.push_back({x, 2 * std::log(x) + 1});
  const auto f = fit_log_trend(pts);
  CHECK(f.a == doctest::Approx(2));
  CHECK(f.b == doctest::Approx(1));
  CHECK(f.r2 == doctest::Approx(1));
  CHECK(fit_log_trend(std::vector<TrendPoint>{{2, 5}, {9, 1}}).r2 == doctest::Approx(1));
  std::vector<TrendPoint> q;
  for (double x : {10.0, 100.0, 1e4}) q.push_back({x, 2 * std::log(x)});
  const auto v = required_volume(fit_log_trend(q), 2 * std::log(1000.0));
  CHECK(std::pow(10.0, v.textCharacters.log10()) == doctest::Approx(1000));
  CHECK(v.textCharacters.decimal_string() == "1000");
  CHECK(v.textCharacters.to_string() == "1.00E+03");
}

TEST_CASE("fit errors") {
  CHECK(code_of([] { fit_log_trend(std::vector<TrendPoint>{{1, 1}}); }) == ErrorCode::degenerate_fit);
  CHECK(code_of([] { fit_log_trend(std::vector<TrendPoint>{{5, 1}, {5, 2}}); }) == ErrorCode::degenerate_fit);
  CHECK(code_of([] { fit_log_trend(std::vector<TrendPoint>{{0, 1}, {5, 2}}); }) == ErrorCode::validation_failed);
  const auto down = fit_log_trend(std::vector<TrendPoint>{{1, 5}, {10, 4}});
  CHECK(code_of([&] { required_volume(down, 6); }) == ErrorCode::non_invertible_trend);
  CHECK(code_of([&] { predict(down, -1); }) == ErrorCode::validation_failed);
}

TEST_CASE("fit properties on random data") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> lx(0, 30), y(-5, 50), k(0.1, 10), c(0.01, 100);
  std::uniform_int_distribution<int> n(2, 12);
  for (int iter = 0; iter < 500; ++iter) {
    std::vector<TrendPoint> pts;
    for (int i = n(rng); i > 0; --i) pts.push_back({std::exp(lx(rng)), y(rng)});
    const auto f = fit_log_trend(pts);
    CHECK(f.r2 >= 0);
    CHECK(f.r2 <= 1);
    // residuals are orthogonal to 1 and ln x
    double s0 = 0, s1 = 0, scale = 0;
    for (const auto& p : pts) {
      const double r = p.repetitionPct - f.a * std::log(p.textCharacters) - f.b;
      s0 += r;
      s1 += r * std::log(p.textCharacters);
      scale += std::abs(p.repetitionPct) * (1 + std::log(p.textCharacters));
    }
    CHECK(std::abs(s0) <= 1e-9 * scale);
    CHECK(std::abs(s1) <= 1e-9 * scale * 30);
    // y scaling and x relabelling
    const double kk = k(rng), cc = c(rng);
    auto scaled = pts, shifted = pts;
    for (auto& p : scaled) p.repetitionPct *= kk;
    for (auto& p : shifted) p.textCharacters *= cc;
    const auto fs = fit_log_trend(scaled);
    const auto fx = fit_log_trend(shifted);
    CHECK(fs.a == doctest::Approx(kk * f.a).epsilon(1e-7));
    CHECK(fs.r2 == doctest::Approx(f.r2).epsilon(1e-7));
    CHECK(fx.a == doctest::Approx(f.a).epsilon(1e-7));
    CHECK(fx.b == doctest::Approx(f.b - f.a * std::log(cc)).epsilon(1e-6).scale(std::abs(f.a) + 1));
    CHECK(fx.r2 == doctest::Approx(f.r2).epsilon(1e-7));
    if (f.a > 1e-6) {
      const double target = y(rng);
      const auto v = required_volume(f, target);
      const double lnx = v.textCharacters.log10() * std::log(10.0);
      CHECK(f.a * lnx + f.b == doctest::Approx(target).epsilon(1e-9).scale(std::abs(f.b) + 1));
    }
  }
}

TEST_CASE("curve family diagnostics") {
  const auto t5 = load_trend_points(PARROT_TEST_DATA "/trend_all.tsv");
  const auto fits = compare_curve_families(t5);
  REQUIRE(fits.size() == 5);
  CHECK(std::is_sorted(fits.begin(), fits.end(), [](const auto& l, const auto& r) { return l.r2 > r.r2; }));
  std::vector<TrendPoint> lin{{1, 1}, {2, 3}, {3, 5}, {4, 7}};
  CHECK(compare_curve_families(lin).front().family == "linear");
  std::vector<TrendPoint> neg{{1, -1}, {2, 3}, {3, 5}};
  for (const auto& f : compare_curve_families(neg)) CHECK(f.family != "power");
}

TEST_CASE("trend point parsing") {
  std::istringstream in("# header\n1\t2\n\n3 4.5  # trailing\n5,6\n");
  const auto pts = parse_trend_points(in);
  REQUIRE(pts.size() == 3);
  CHECK(pts[1].repetitionPct == 4.5);
  std::istringstream bad("1\n");
  CHECK_THROWS_AS(parse_trend_points(bad), Error);
  CHECK_THROWS_AS(load_trend_points("/nonexistent/file.tsv"), Error);
}

TEST_CASE("snapshot series over cumulative groups") {
  MemoryRepository repo;
  // group k adds documents with known repetition structure
  std::vector<std::vector<DocumentId>> groups(3);
  groups[0].push_back(ingest_document(repo, {"s", "a"}, PlainText{"One here. Two here. One here."}).first);
  groups[2].push_back(ingest_document(repo, {"s", "b"}, PlainText{"Two here. Three here. Four here."}).first);
  const auto series = snapshot_series(repo, groups);
  REQUIRE(series.points.size() == 3);
  CHECK(series.warnings.empty());
  CHECK(series.points[0].repetitionPct == doctest::Approx(50.0));  // 1 of 2
  CHECK(series.points[1].textCharacters == series.points[0].textCharacters);
  CHECK(series.points[2].repetitionPct == doctest::Approx(50.0));  // 2 of 4
  CHECK(series.points[2].textCharacters > series.points[0].textCharacters);

  std::vector<std::vector<DocumentId>> leading_empty{{}, groups[0]};
  const auto s2 = snapshot_series(repo, leading_empty);
  CHECK(s2.points.size() == 1);
  CHECK(s2.warnings.size() == 1);
  CHECK_THROWS_AS(fit_log_trend(s2.points), Error);

  const std::vector<DocumentId> ids{DocumentId{1}, DocumentId{2}, DocumentId{3}, DocumentId{4}, DocumentId{5}};
  const auto split = split_groups(ids, 2);
  CHECK(split[0].size() + split[1].size() == 5);
}
