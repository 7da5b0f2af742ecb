#pragma once

// Monotone compression schemes: sigma maps (m+1)-sets to m-subsets of
// themselves, eta maps m-sets to finite sets, and a scheme is sound when
// every input set is recovered inside eta(sigma(input)).

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "emx/point_set.hpp"
#include "emx/tower.hpp"

namespace emx {

class MonotoneScheme {
 public:
  MonotoneScheme(std::size_t arity, std::optional<std::size_t> budget) : arity_(arity), budget_(budget) {}
  virtual ~MonotoneScheme() = default;

  /// m: the scheme compresses (m+1)-sets to m-sets.
  std::size_t arity() const noexcept { return arity_; }
  std::optional<std::size_t> budget() const noexcept { return budget_; }

  /// sigma. Throws PreconditionError unless |beta| == m+1; throws
  /// ContractViolation if the implementation does not drop exactly one
  /// point of beta.
  PointSet compress(const PointSet& beta) const;
  /// The single point compress() removes from beta.
  PointId ejected(const PointSet& beta) const;
  /// eta. Throws PreconditionError unless |kernel| == m; throws
  /// ContractViolation when the image exceeds the budget.
  PointSet reconstruct(const PointSet& kernel) const;

  virtual std::string describe() const = 0;

 protected:
  virtual PointSet do_compress(const PointSet& beta) const = 0;
  virtual PointSet do_reconstruct(const PointSet& kernel) const = 0;

 private:
  std::size_t arity_;
  std::optional<std::size_t> budget_;
};

using SchemePtr = std::shared_ptr<const MonotoneScheme>;

/// 2 -> 1 scheme over a depth-0 tower: keep the point of larger index,
/// reconstruct every point of index <= the kept one.
SchemePtr enumeration_scheme(std::shared_ptr<const OrderTower> tower, std::optional<std::size_t> budget = {});

/// (k+2) -> (k+1) scheme over a depth-k tower. sigma peels off the maximum
/// at levels k..1, each time conditioning on the chain extracted so far,
/// then drops the smaller of the last two under the level-0 order. eta
/// replays the peeling on its input to recover the chain and the survivor s'
/// and returns the input together with every point keyed <= s'.
SchemePtr tower_scheme(std::shared_ptr<const OrderTower> tower, std::optional<std::size_t> budget = {});

/// Deliberately unsound: sigma drops the largest id and eta returns its
/// input unchanged.
SchemePtr identity_scheme(std::size_t arity);

/// Scheme given by explicit tables. Inputs missing from the sigma table are
/// a PreconditionError; kernels missing from the eta table map to themselves.
class TableScheme final : public MonotoneScheme {
 public:
  TableScheme(std::size_t arity, std::optional<std::size_t> budget, std::map<PointSet, PointSet> sigma,
              std::map<PointSet, PointSet> eta);

  const std::map<PointSet, PointSet>& sigma_table() const noexcept { return sigma_; }
  const std::map<PointSet, PointSet>& eta_table() const noexcept { return eta_; }
  std::string describe() const override;

 protected:
  PointSet do_compress(const PointSet& beta) const override;
  PointSet do_reconstruct(const PointSet& kernel) const override;

 private:
  std::map<PointSet, PointSet> sigma_;
  std::map<PointSet, PointSet> eta_;
};

enum class SoundnessStatus { kOk, kViolation, kMalformed, kError };

const char* to_string(SoundnessStatus status);

struct SoundnessRecord {
  PointSet subset;
  SoundnessStatus status = SoundnessStatus::kOk;
  std::string detail;  // empty for kOk
};

/// Per-subset results sorted by canonical subset order (ties keep input
/// order). `checked` counts well-formed subsets whose containment was tested.
struct SoundnessReport {
  std::size_t checked = 0;
  std::vector<SoundnessRecord> records;

  std::vector<PointSet> violations() const;
  std::size_t count(SoundnessStatus status) const;
  bool sound() const { return count(SoundnessStatus::kViolation) == 0 && count(SoundnessStatus::kError) == 0; }
  /// "subset,status,detail" header plus one row per record.
  std::string to_csv() const;
};

/// Checks beta ⊆ eta(sigma(beta)) for every subset. Malformed sizes and
/// scheme exceptions are reported per item, never thrown. Subsets are
/// checked concurrently; the report is identical to the serial reference.
SoundnessReport verify_soundness(const MonotoneScheme& scheme, std::span<const PointSet> subsets);

namespace reference {
SoundnessReport verify_soundness(const MonotoneScheme& scheme, std::span<const PointSet> subsets);
}  // namespace reference

}  // namespace emx
