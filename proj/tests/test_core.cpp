#include <doctest.h>

#include <map>
#include <random>

#include "emx/core.hpp"
#include "emx/errors.hpp"
#include "oracles/newman.hpp"
#include "support.hpp"

using namespace emx;

TEST_CASE("rationals parse to lowest terms and print as n/d") {
  CHECK(format_rational(parse_rational("3/6")) == "1/2");
  CHECK(format_rational(parse_rational("0.25")) == "1/4");
  CHECK(format_rational(parse_rational(" -7 ")) == "-7/1");
  CHECK(format_rational(parse_rational("-1.5")) == "-3/2");
  CHECK(parse_rational("99/100") == Rational(99, 100));
  CHECK(parse_rational("010/08") == Rational(5, 4));
  CHECK(parse_rational("0.05") == Rational(1, 20));
  CHECK(parse_rational(".5") == Rational(1, 2));
  for (const char* bad : {"", "1/0", "a/2", "1//2", "1.2.3", "/3", "."}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_rational(bad), std::invalid_argument);
  }
}

TEST_CASE("calkin-wilf enumeration matches Newman's successor formula") {
  const auto expected = oracle::newman_sequence(5000);
  for (std::uint64_t i = 0; i < expected.size(); ++i) {
    const Rational q = calkin_wilf_at(i);
    REQUIRE(boost::multiprecision::numerator(q) == expected[i].first);
    REQUIRE(boost::multiprecision::denominator(q) == expected[i].second);
    REQUIRE(calkin_wilf_index(q) == i);
  }
}

TEST_CASE("calkin-wilf index rejects non-positive input and overlong paths") {
  CHECK_THROWS_AS(calkin_wilf_index(Rational(0)), PreconditionError);
  CHECK_THROWS_AS(calkin_wilf_index(Rational(-1, 2)), PreconditionError);
  CHECK_THROWS_AS(calkin_wilf_index(Rational(1, 70)), ResourceLimitError);
  CHECK(calkin_wilf_index(Rational(1, 63)) == (std::uint64_t{1} << 62) - 1);
}

TEST_CASE("point sets stay sorted and unique") {
  const PointSet a{5, 1, 3, 3};
  CHECK(a.size() == 3);
  CHECK(a.to_string() == "1 3 5");
  CHECK(a.with(make_point(2)).to_string() == "1 2 3 5");
  CHECK(a.without(make_point(3)).to_string() == "1 5");
  CHECK(a.united(PointSet{0, 5, 9}).to_string() == "0 1 3 5 9");
  CHECK(a.minus(PointSet{1, 9}).to_string() == "3 5");
  CHECK(a.includes(PointSet{1, 5}));
  CHECK_FALSE(a.includes(PointSet{1, 2}));
  CHECK(PointSet::range(4, 2).empty());
  CHECK(PointSet{1, 2} < PointSet{1, 3});
  CHECK(PointSet{1, 2} < PointSet{1, 2, 3});
}

TEST_CASE("subset enumeration is complete and canonical") {
  CHECK(binomial(30, 2) == 435);
  CHECK(binomial(60, 4) == 487635);
  CHECK(binomial(5, 7) == 0);
  CHECK_THROWS(binomial(200, 100));
  const PointSet pool = PointSet::range(0, 7);
  for (std::size_t k = 0; k <= 8; ++k) {
    const auto subsets = all_subsets(pool, k);
    CHECK(subsets.size() == binomial(8, k));
    for (std::size_t i = 1; i < subsets.size(); ++i) CHECK(subsets[i - 1] < subsets[i]);
    for (const auto& s : subsets) CHECK(s.size() == k);
  }
}

TEST_CASE("random subsets are reproducible from the seed") {
  const PointSet pool = PointSet::range(0, 59);
  const auto a = random_subsets(pool, 4, 100, 9);
  CHECK(a == random_subsets(pool, 4, 100, 9));
  CHECK(a != random_subsets(pool, 4, 100, 10));
  for (const auto& s : a) {
    CHECK(s.size() == 4);
    CHECK(pool.includes(s));
  }
}

TEST_CASE("domains map ids to payloads and back") {
  const Domain fin = Domain::finite(10);
  CHECK(fin.size() == 10);
  CHECK(fin.contains(make_point(9)));
  CHECK_FALSE(fin.contains(make_point(10)));
  CHECK(fin.all_points() == PointSet::range(0, 9));

  const Domain nat = Domain::naturals();
  CHECK_FALSE(nat.is_finite());
  CHECK_THROWS_AS(nat.size(), PreconditionError);
  CHECK(nat.find(Payload{std::int64_t{17}}) == make_point(17));

  const Domain cw = Domain::calkin_wilf();
  const auto p = cw.find(Payload{Rational(3, 2)});
  REQUIRE(p);
  CHECK(to_index(*p) == 4);
  CHECK(std::get<Rational>(cw.point(4).payload) == Rational(3, 2));
  for (std::uint64_t i = 0; i < 200; ++i) CHECK(cw.index(*cw.find(cw.point(i).payload)) == i);
}

TEST_CASE("distributions must carry exact unit mass on distinct positive entries") {
  using E = FiniteSupportDistribution::Entry;
  CHECK_THROWS_AS(FiniteSupportDistribution({{make_point(1), Rational(1, 2)}}), PreconditionError);
  CHECK_THROWS_AS(FiniteSupportDistribution({E{make_point(1), Rational(1, 2)}, E{make_point(1), Rational(1, 2)}}),
                  PreconditionError);
  CHECK_THROWS_AS(FiniteSupportDistribution({E{make_point(1), Rational(3, 2)}, E{make_point(2), Rational(-1, 2)}}),
                  PreconditionError);
  CHECK_THROWS_AS(FiniteSupportDistribution::uniform(PointSet{}), PreconditionError);
  const FiniteSupportDistribution d({E{make_point(4), Rational(1, 3)}, E{make_point(2), Rational(2, 3)}});
  CHECK(d.support() == PointSet{2, 4});
  CHECK(d.mass(make_point(4)) == Rational(1, 3));
  CHECK(d.mass(make_point(7)) == 0);
}

TEST_CASE("expectation agrees with a direct sum over the support") {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 50; ++round) {
    const PointSet support = testing::random_points(rng, 40, 1 + rng() % 10);
    std::vector<FiniteSupportDistribution::Entry> entries;
    std::uint64_t total = 0;
    std::vector<std::uint64_t> weights;
    for (std::size_t i = 0; i < support.size(); ++i) {
      weights.push_back(1 + rng() % 9);
      total += weights.back();
    }
    for (std::size_t i = 0; i < support.size(); ++i) {
      entries.push_back({support[i], Rational(weights[i], total)});
    }
    const FiniteSupportDistribution dist(entries);
    const PointSet h = testing::random_points(rng, 40, rng() % 20);
    std::uint64_t covered = 0;
    for (std::size_t i = 0; i < support.size(); ++i) {
      if (h.contains(support[i])) covered += weights[i];
    }
    CHECK(expectation(dist, Hypothesis(h)) == Rational(covered, total));
    CHECK(emx_gap(dist, Hypothesis(h)) == 1 - Rational(covered, total));
  }
}

TEST_CASE("locate splits the 64-bit range at the cumulative thresholds") {
  const auto d = FiniteSupportDistribution::uniform(PointSet{10, 20});
  CHECK(d.locate(0) == 0);
  CHECK(d.locate((std::uint64_t{1} << 63) - 1) == 0);
  CHECK(d.locate(std::uint64_t{1} << 63) == 1);
  CHECK(d.locate(~std::uint64_t{0}) == 1);
  CHECK(FiniteSupportDistribution::point_mass(make_point(3)).locate(12345) == 0);
}

TEST_CASE("draw_sample is a pure function of the seed") {
  const auto dist = FiniteSupportDistribution::uniform(PointSet::range(1, 20));
  const Sample s = draw_sample(dist, 10, 42);
  CHECK(s.seed == 42);
  CHECK(s.points.size() == 10);
  CHECK(s.points == draw_sample(dist, 10, 42).points);
  std::vector<std::uint64_t> ids;
  for (PointId p : s.points) ids.push_back(to_index(p));
  // recorded from the first run; guards the sampling convention against drift
  const std::vector<std::uint64_t> golden{16, 13, 16, 3, 19, 2, 12, 8, 6, 8};
  CHECK(ids == golden);

  // same draws by hand: point 1+i is chosen iff u < ceil((i+1)/20 * 2^64)
  std::mt19937_64 rng(42);
  for (std::size_t j = 0; j < 10; ++j) {
    const unsigned __int128 u = rng();
    std::uint64_t i = 0;
    while (!(u * 20 < (static_cast<unsigned __int128>(i + 1) << 64))) ++i;
    CHECK(ids[j] == i + 1);
  }
}

TEST_CASE("draw_sample frequencies track the masses") {
  using E = FiniteSupportDistribution::Entry;
  const FiniteSupportDistribution d({E{make_point(0), Rational(1, 10)}, E{make_point(1), Rational(3, 10)},
                                     E{make_point(2), Rational(6, 10)}});
  const Sample s = draw_sample(d, 60000, 3);
  std::map<std::uint64_t, double> freq;
  for (PointId p : s.points) freq[to_index(p)] += 1.0 / 60000;
  CHECK(freq[0] == doctest::Approx(0.1).epsilon(0.05));
  CHECK(freq[1] == doctest::Approx(0.3).epsilon(0.03));
  CHECK(freq[2] == doctest::Approx(0.6).epsilon(0.02));
}

TEST_CASE("ERM on the ad table picks the ad covering the most visitors") {
  // ads as sets of visitors p1..p4
  const std::vector<Hypothesis> ads{Hypothesis(PointSet{1, 4}), Hypothesis(PointSet{2, 3, 4}),
                                    Hypothesis(PointSet{2, 3})};
  const Sample training{{make_point(2), make_point(3), make_point(3), make_point(4)}, 0};
  std::size_t best = 0;
  std::size_t best_hits = 0;
  for (std::size_t i = 0; i < ads.size(); ++i) {
    std::size_t hits = 0;
    for (PointId p : training.points) hits += ads[i].contains(p) ? 1 : 0;
    if (hits > best_hits) {
      best = i;
      best_hits = hits;
    }
  }
  CHECK(best == 1);
  CHECK(erm_max_coverage(training, ads) == best);
}

TEST_CASE("ERM ties go to the first candidate") {
  const std::vector<Hypothesis> hs{Hypothesis(PointSet{1}), Hypothesis(PointSet{2})};
  CHECK(erm_max_coverage(Sample{{make_point(1), make_point(2)}, 0}, hs) == 0);
  CHECK(erm_max_coverage(Sample{{make_point(2), make_point(2), make_point(1)}, 0}, hs) == 1);
}
