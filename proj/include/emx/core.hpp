#pragma once

// Domains, finite-support distributions, hypotheses and the EMX objective.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "emx/point_set.hpp"
#include "emx/rational.hpp"

namespace emx {

/// Optional semantic value attached to a point.
using Payload = std::variant<std::monostate, std::int64_t, Rational>;

std::string format_payload(const Payload& payload);

struct Point {
  PointId id;
  Payload payload;

  friend bool operator==(const Point& a, const Point& b) { return a.id == b.id; }
};

/// Countable enumeration index -> payload, with an optional inverse.
class Enumerator {
 public:
  virtual ~Enumerator() = default;
  virtual std::string name() const = 0;
  virtual Payload payload(std::uint64_t index) const = 0;
  virtual std::optional<std::uint64_t> index_of(const Payload& payload) const = 0;
};

/// n-th positive rational of the Calkin-Wilf sequence (0-based: 1/1, 1/2, 2/1, 1/3, 3/2, ...).
Rational calkin_wilf_at(std::uint64_t index);
/// Inverse of calkin_wilf_at. Throws PreconditionError for non-positive
/// input and ResourceLimitError when the index does not fit in 63 bits.
std::uint64_t calkin_wilf_index(const Rational& q);

std::shared_ptr<const Enumerator> naturals_enumerator();
std::shared_ptr<const Enumerator> calkin_wilf_enumerator();

/// Universe of points. In both kinds a point's id is its registry index, so
/// index(point) and point(index) are mutually inverse by construction.
class Domain {
 public:
  enum class Kind { kFinite, kEnumerated };

  static Domain finite(std::size_t size);
  static Domain finite(std::vector<Payload> payloads);
  static Domain enumerated(std::shared_ptr<const Enumerator> enumerator);
  static Domain naturals() { return enumerated(naturals_enumerator()); }
  static Domain calkin_wilf() { return enumerated(calkin_wilf_enumerator()); }

  Kind kind() const noexcept { return kind_; }
  bool is_finite() const noexcept { return kind_ == Kind::kFinite; }
  /// Exact size; throws PreconditionError for enumerated domains.
  std::size_t size() const;
  bool contains(PointId id) const;
  Point point(std::uint64_t index) const;
  std::uint64_t index(PointId id) const;
  std::optional<PointId> find(const Payload& payload) const;
  /// Every point of a finite domain.
  PointSet all_points() const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::kFinite;
  std::shared_ptr<const std::vector<Payload>> registry_;
  std::shared_ptr<const Enumerator> enumerator_;
};

/// A member of the concept class of finite subsets, read as its indicator.
class Hypothesis {
 public:
  Hypothesis() = default;
  explicit Hypothesis(PointSet members) : members_(std::move(members)) {}

  const PointSet& members() const noexcept { return members_; }
  bool contains(PointId p) const { return members_.contains(p); }
  std::size_t size() const noexcept { return members_.size(); }

  friend bool operator==(const Hypothesis&, const Hypothesis&) = default;

 private:
  PointSet members_;
};

/// Exact probability masses on finitely many points. Construction rejects
/// non-positive masses, duplicate points and totals other than exactly 1.
class FiniteSupportDistribution {
 public:
  struct Entry {
    PointId id;
    Rational mass;
  };

  explicit FiniteSupportDistribution(std::vector<Entry> entries);
  static FiniteSupportDistribution uniform(const PointSet& support);
  static FiniteSupportDistribution point_mass(PointId p);

  std::span<const Entry> entries() const noexcept { return entries_; }
  const PointSet& support() const noexcept { return support_; }
  Rational mass(PointId p) const;

  /// Index into entries() selected by a raw 64-bit draw u: the first entry
  /// whose cumulative mass C satisfies u < ceil(C * 2^64).
  std::size_t locate(std::uint64_t u) const;

 private:
  std::vector<Entry> entries_;  // sorted by id
  PointSet support_;
  std::vector<unsigned __int128> thresholds_;
};

/// A drawn sample: the raw sequence (repeats kept) and the seed that made it.
struct Sample {
  std::vector<PointId> points;
  std::uint64_t seed = 0;

  PointSet distinct() const { return PointSet::from(points); }
};

/// Sum of the masses of support points in h. Exact.
Rational expectation(const FiniteSupportDistribution& dist, const Hypothesis& h);

/// sup over finite hypotheses of the expectation, minus expectation(dist, h).
/// The support is itself a finite hypothesis of mass 1, so this is 1 - E(h).
Rational emx_gap(const FiniteSupportDistribution& dist, const Hypothesis& h);

/// m i.i.d. draws from dist with an mt19937_64 seeded by `seed`. Each draw
/// consumes exactly one 64-bit output (see FiniteSupportDistribution::locate).
Sample draw_sample(const FiniteSupportDistribution& dist, std::size_t m, std::uint64_t seed);

/// Candidate covering the most sample entries, counting repeats. Ties go to
/// the lowest candidate index.
std::size_t erm_max_coverage(const Sample& sample, std::span<const Hypothesis> candidates);

}  // namespace emx
