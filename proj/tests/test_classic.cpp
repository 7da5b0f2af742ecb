#include <doctest.h>

#include <random>
#include <sstream>

#include "emx/classic.hpp"
#include "emx/errors.hpp"
#include "oracles/bounding_box.hpp"
#include "oracles/closed_forms.hpp"

using namespace emx;

TEST_CASE("rectangle kernel rebuilds the bounding box of the sample") {
  std::mt19937_64 rng(31);
  for (int round = 0; round < 200; ++round) {
    std::vector<PlanePoint> sample;
    const std::size_t n = 1 + rng() % 15;
    for (std::size_t i = 0; i < n; ++i) {
      // a coarse grid forces ties
      sample.push_back({make_point(i), Rational(rng() % 6, 5), Rational(rng() % 6, 5)});
    }
    const auto kernel = rect_compress(sample);
    CHECK(kernel.size() >= 1);
    CHECK(kernel.size() <= 4);
    for (std::size_t i = 1; i < kernel.size(); ++i) CHECK(to_index(kernel[i - 1].id) < to_index(kernel[i].id));
    const Rectangle box = rect_reconstruct(kernel);
    const Rectangle expected = oracle::scan_bounding_box(sample);
    CHECK(box.x_min == expected.x_min);
    CHECK(box.x_max == expected.x_max);
    CHECK(box.y_min == expected.y_min);
    CHECK(box.y_max == expected.y_max);
    for (const auto& p : sample) CHECK(box.contains(p));
  }
}

TEST_CASE("rectangle extremes break ties toward the lowest id") {
  const std::vector<PlanePoint> pts{{make_point(0), Rational(0), Rational(1, 2)},
                                    {make_point(1), Rational(0), Rational(1, 2)},
                                    {make_point(2), Rational(1), Rational(0)},
                                    {make_point(3), Rational(1), Rational(1)}};
  const auto kernel = rect_compress(pts);
  REQUIRE(kernel.size() == 3);
  CHECK(kernel[0].id == make_point(0));
  CHECK(kernel[1].id == make_point(2));
  CHECK(kernel[2].id == make_point(3));
  CHECK_THROWS_AS(rect_compress(std::vector<PlanePoint>{}), PreconditionError);
  CHECK_THROWS_AS(rect_reconstruct(std::vector<PlanePoint>{}), PreconditionError);
}

TEST_CASE("plane CSV loader accepts a header and exact numbers") {
  std::istringstream in("x,y\n0.5,1/3\n1,0\n");
  const auto pts = load_plane_csv(in);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].id == make_point(0));
  CHECK(pts[0].x == Rational(1, 2));
  CHECK(pts[0].y == Rational(1, 3));
  CHECK(pts[1].x == 1);

  std::istringstream out_of_range("0.5,1.5\n");
  CHECK_THROWS_AS(load_plane_csv(out_of_range), PreconditionError);
  std::istringstream bad_row("0.1,0.2\nfoo,0.3\n");
  try {
    load_plane_csv(bad_row);
    FAIL("expected an error");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("max estimator returns every serial up to the largest seen") {
  const std::vector<std::uint64_t> serials{4, 17, 9};
  CHECK(max_estimator(serials).members() == PointSet::range(1, 17));
  CHECK_THROWS_AS(max_estimator(std::vector<std::uint64_t>{}), PreconditionError);
  CHECK_THROWS_AS(max_estimator(std::vector<std::uint64_t>{3, 0}), PreconditionError);
}

TEST_CASE("max estimator mass matches its closed-form expectation") {
  const auto dist = FiniteSupportDistribution::uniform(PointSet::range(1, 100));
  const int trials = 20000;
  double total = 0;
  for (int t = 0; t < trials; ++t) {
    const Sample s = draw_sample(dist, 10, 1000 + t);
    std::vector<std::uint64_t> serials;
    for (PointId p : s.points) serials.push_back(to_index(p));
    total += to_double(expectation(dist, max_estimator(serials)));
  }
  const double mean = total / trials;
  const double expected = oracle::german_tank_expected_mass(100, 10);
  CHECK(expected == doctest::Approx(0.9140075857565758).epsilon(1e-12));
  CHECK(mean == doctest::Approx(expected).epsilon(0.003));
}
