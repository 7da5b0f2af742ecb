#pragma once

// Scheme reduction (arity m on X -> arity m-1 on a finite Y ⊂ X) and
// exhaustive existence search for bounded selection schemes.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "emx/point_set.hpp"
#include "emx/scheme.hpp"

namespace emx {

/// Which images make up Z, the set the witness point x must avoid.
enum class ZReading {
  /// eta(t) over m-subsets t of Y, plus Y itself and eta(sigma(beta)) over
  /// (m+1)-subsets beta of Y.
  kSuperset,
  /// eta(t) over m-subsets t of Y only.
  kDirect,
};

const char* to_string(ZReading reading);

struct DescendOptions {
  ZReading reading = ZReading::kSuperset;
  /// Upper bound on the number of subsets of Y enumerated (building Z and
  /// verifying the result). Larger problems raise GuardError.
  std::uint64_t max_subsets = 1'000'000;
};

/// Reduced scheme on Y: sigma_Y(s) = sigma(s ∪ {x}) \ {x} and
/// eta_Y(t) = eta(t ∪ {x}) \ {x}. Inputs must lie in Y.
class ReducedScheme final : public MonotoneScheme {
 public:
  ReducedScheme(SchemePtr base, PointId x, PointSet y);

  PointId witness() const noexcept { return x_; }
  const PointSet& sub_domain() const noexcept { return y_; }
  std::string describe() const override;

 protected:
  PointSet do_compress(const PointSet& s) const override;
  PointSet do_reconstruct(const PointSet& t) const override;

 private:
  SchemePtr base_;
  PointId x_;
  PointSet y_;
};

struct ReductionWitness {
  PointId x;
  PointSet z;
  std::size_t z_size = 0;
  ZReading reading = ZReading::kSuperset;
  std::shared_ptr<const ReducedScheme> reduced;
  /// Exhaustive check of the reduced scheme over every m-subset of Y.
  SoundnessReport verification;
};

/// Z covers every point of X, so no witness exists at this scale.
class DescentError : public std::runtime_error {
 public:
  DescentError(const std::string& what, std::size_t z_size) : std::runtime_error(what), z_size_(z_size) {}
  std::size_t z_size() const noexcept { return z_size_; }

 private:
  std::size_t z_size_;
};

/// The reduced scheme failed its exhaustive check on `subset`.
class VerificationError : public std::runtime_error {
 public:
  VerificationError(const std::string& what, PointSet subset) : std::runtime_error(what), subset_(std::move(subset)) {}
  const PointSet& subset() const noexcept { return subset_; }

 private:
  PointSet subset_;
};

/// Builds Z from the images of subsets of Y, picks the smallest-id x in
/// X \ (Z ∪ Y) and returns the reduced scheme after verifying it on every m-subset
/// of Y. Requires arity m >= 1, Y ⊆ X and |Y| >= m.
ReductionWitness descend(SchemePtr scheme, const PointSet& x_domain, const PointSet& y, DescendOptions options = {});

/// Text dump: witness point, Z, reduced sigma/eta tables, verification summary.
std::string format_witness(const ReductionWitness& witness);

struct SearchProblem {
  std::size_t n = 0;       // domain {0, ..., n-1}
  std::size_t m = 0;       // looking for (m+1) -> m schemes
  std::size_t budget = 0;  // max |eta(t)|
};

enum class Verdict { kSat, kUnsat, kUndecided };

const char* to_string(Verdict verdict);

struct SearchLimits {
  std::size_t exhaustive_max_n = 8;
  std::uint64_t node_limit = 50'000'000;
  /// Answer UNSAT straight from the counting bound when it refutes.
  bool use_counting = true;
};

struct SearchResult {
  Verdict verdict = Verdict::kUndecided;
  /// Set iff SAT; already verified on every (m+1)-subset.
  std::shared_ptr<const TableScheme> witness;
  std::uint64_t nodes = 0;
  bool refuted_by_counting = false;
};

/// Validates n >= 2, n >= m+1 and budget >= 1; throws PreconditionError otherwise.
void validate(const SearchProblem& problem);

/// Every m-subset t used as a compression target must hold t and each point
/// compressed onto it, so at most budget - m inputs can share a target:
/// refutes when C(n, m+1) > C(n, m) * max(0, budget - m).
bool counting_refutes(const SearchProblem& problem);

/// Backtracking search over drop choices with eta(t) = t ∪ {points dropped
/// onto t}. Problems with n above limits.exhaustive_max_n are only answered
/// when the counting bound refutes them; otherwise GuardError. Hitting the
/// node limit yields kUndecided, never kUnsat.
SearchResult search_schemes(const SearchProblem& problem, const SearchLimits& limits = {});

/// "sigma <beta> | <kept>" and "eta <t> | <image>" lines.
std::string format_scheme_tables(const TableScheme& scheme);

}  // namespace emx
