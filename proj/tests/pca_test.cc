#include <doctest.h>

#include <cmath>

#include "subgram/error.h"
#include "subgram/pca.h"
#include "subgram/rng.h"

using namespace subgram;

namespace {

std::vector<std::string> labels_of(const std::vector<LabeledVector>& v) {
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(x.label);
  return out;
}

}  // namespace

TEST_CASE("power_iteration on a diagonal matrix") {
  const std::vector<double> m = {1, 0, 0, 0, 5, 0, 0, 0, 2};
  std::vector<double> v;
  CHECK(power_iteration(m, 3, v) == doctest::Approx(5.0));
  CHECK(std::abs(v[1]) == doctest::Approx(1.0));
}

TEST_CASE("pca2 hand-computed axis case") {
  const double eps = 0.3;
  const std::vector<LabeledVector> points = {
      {"a", {1, 0}}, {"b", {-1, 0}}, {"c", {0, eps}}, {"d", {0, -eps}}};
  const auto proj = pca2(points, labels_of(points));
  REQUIRE(proj.size() == 4);
  // First component is axis 1 with a positive loading, second is axis 2.
  CHECK(proj[0].x == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(proj[1].x == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(std::abs(proj[2].x) < 1e-6);
  CHECK(proj[2].y == doctest::Approx(eps).epsilon(1e-9));
  CHECK(proj[3].y == doctest::Approx(-eps).epsilon(1e-9));
  CHECK(std::abs(proj[0].y) < 1e-6);
}

TEST_CASE("pca2 of collinear points has no second component") {
  std::vector<LabeledVector> points;
  for (int i = 0; i < 6; ++i) {
    const double t = i * 0.7 - 1.0;
    points.push_back({"p" + std::to_string(i), {t, 2 * t, -t, 0.5}});
  }
  for (const auto& p : pca2(points, labels_of(points))) CHECK(std::abs(p.y) < 1e-6);
}

TEST_CASE("pca2 projections are centered and ordered by variance") {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<LabeledVector> points;
    for (int i = 0; i < 12; ++i) {
      std::vector<double> v(6);
      for (std::size_t d = 0; d < v.size(); ++d) v[d] = rng.uniform(-1, 1) * (1.0 + static_cast<double>(d));
      points.push_back({"p" + std::to_string(i), v});
    }
    const auto proj = pca2(points, labels_of(points));
    double sx = 0, sy = 0, vx = 0, vy = 0;
    for (const auto& p : proj) {
      sx += p.x;
      sy += p.y;
      vx += p.x * p.x;
      vy += p.y * p.y;
    }
    CHECK(std::abs(sx) < 1e-9);
    CHECK(std::abs(sy) < 1e-9);
    CHECK(vx >= vy);
  }
}

TEST_CASE("pca2 sign convention is reproducible") {
  const std::vector<LabeledVector> points = {{"a", {2, 1}}, {"b", {-2, -1.2}}, {"c", {0.1, 0.3}}};
  const auto first = pca2(points, labels_of(points));
  std::vector<LabeledVector> flipped = points;
  for (auto& p : flipped) {
    for (auto& x : p.values) x = -x;
  }
  const auto second = pca2(flipped, labels_of(flipped));
  for (std::size_t i = 0; i < 3; ++i) CHECK(second[i].x == doctest::Approx(-first[i].x));
}

TEST_CASE("pca2 error paths") {
  const std::vector<LabeledVector> same = {{"a", {1, 1}}, {"b", {1, 1}}, {"c", {1, 1}}};
  try {
    pca2(same, labels_of(same));
    FAIL("expected DegenerateVariance");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegenerateVariance);
  }
  const std::vector<std::string> two = {"a", "b"};
  CHECK_THROWS_AS(pca2(same, two), Error);
  const std::vector<std::string> unknown = {"a", "b", "zz"};
  CHECK_THROWS_AS(pca2(same, unknown), Error);
}

TEST_CASE("projection TSV") {
  const std::vector<Projection> p = {{"kitab", 1.5, -0.25}};
  CHECK(format_projection_tsv(p) == "kitab\t1.500000\t-0.250000\n");
}
