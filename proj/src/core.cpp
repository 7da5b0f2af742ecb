#include "emx/core.hpp"

#include <algorithm>
#include <bit>
#include <limits>

#include "emx/errors.hpp"

namespace emx {

std::string format_payload(const Payload& payload) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(const Rational& q) const { return format_rational(q); }
  };
  return std::visit(Visitor{}, payload);
}

// Calkin-Wilf tree in breadth-first order: node n (1-based) has children
// 2n (a/(a+b)) and 2n+1 ((a+b)/b). The binary digits of n below its leading
// one spell the root-to-node path.
Rational calkin_wilf_at(std::uint64_t index) {
  if (index == std::numeric_limits<std::uint64_t>::max()) {
    throw ResourceLimitError("Calkin-Wilf index out of range");
  }
  const std::uint64_t node = index + 1;
  const int top = 63 - std::countl_zero(node);
  BigInt a = 1;
  BigInt b = 1;
  for (int bit = top - 1; bit >= 0; --bit) {
    if ((node >> bit) & 1U) {
      a += b;
    } else {
      b += a;
    }
  }
  return Rational(a, b);
}

std::uint64_t calkin_wilf_index(const Rational& q) {
  if (q <= 0) throw PreconditionError("Calkin-Wilf enumerates positive rationals only");
  BigInt a = boost::multiprecision::numerator(q);
  BigInt b = boost::multiprecision::denominator(q);
  std::vector<bool> path;  // leaf to root
  while (!(a == 1 && b == 1)) {
    if (path.size() >= 63) {
      throw ResourceLimitError("Calkin-Wilf index of " + format_rational(q) + " exceeds 63 bits");
    }
    if (a < b) {
      path.push_back(false);
      b -= a;
    } else {
      path.push_back(true);
      a -= b;
    }
  }
  std::uint64_t node = 1;
  for (auto it = path.rbegin(); it != path.rend(); ++it) node = node * 2 + (*it ? 1 : 0);
  return node - 1;
}

namespace {

class NaturalsEnumerator final : public Enumerator {
 public:
  std::string name() const override { return "naturals"; }
  Payload payload(std::uint64_t index) const override { return static_cast<std::int64_t>(index); }
  std::optional<std::uint64_t> index_of(const Payload& payload) const override {
    if (const auto* v = std::get_if<std::int64_t>(&payload); v && *v >= 0) return static_cast<std::uint64_t>(*v);
    if (const auto* q = std::get_if<Rational>(&payload);
        q && *q >= 0 && boost::multiprecision::denominator(*q) == 1) {
      return boost::multiprecision::numerator(*q).convert_to<std::uint64_t>();
    }
    return std::nullopt;
  }
};

class CalkinWilfEnumerator final : public Enumerator {
 public:
  std::string name() const override { return "calkin-wilf"; }
  Payload payload(std::uint64_t index) const override { return calkin_wilf_at(index); }
  std::optional<std::uint64_t> index_of(const Payload& payload) const override {
    Rational q;
    if (const auto* v = std::get_if<std::int64_t>(&payload)) {
      q = *v;
    } else if (const auto* r = std::get_if<Rational>(&payload)) {
      q = *r;
    } else {
      return std::nullopt;
    }
    if (q <= 0) return std::nullopt;
    return calkin_wilf_index(q);
  }
};

}  // namespace

std::shared_ptr<const Enumerator> naturals_enumerator() {
  static const auto instance = std::make_shared<const NaturalsEnumerator>();
  return instance;
}

std::shared_ptr<const Enumerator> calkin_wilf_enumerator() {
  static const auto instance = std::make_shared<const CalkinWilfEnumerator>();
  return instance;
}

Domain Domain::finite(std::size_t size) { return finite(std::vector<Payload>(size)); }

Domain Domain::finite(std::vector<Payload> payloads) {
  Domain d;
  d.kind_ = Kind::kFinite;
  d.registry_ = std::make_shared<const std::vector<Payload>>(std::move(payloads));
  return d;
}

Domain Domain::enumerated(std::shared_ptr<const Enumerator> enumerator) {
  if (!enumerator) throw PreconditionError("enumerated domain needs an enumerator");
  Domain d;
  d.kind_ = Kind::kEnumerated;
  d.enumerator_ = std::move(enumerator);
  return d;
}

std::size_t Domain::size() const {
  if (!is_finite()) throw PreconditionError("enumerated domains have no finite size");
  return registry_->size();
}

bool Domain::contains(PointId id) const { return !is_finite() || to_index(id) < registry_->size(); }

Point Domain::point(std::uint64_t index) const {
  if (is_finite()) {
    if (index >= registry_->size()) {
      throw PreconditionError("point index " + std::to_string(index) + " outside finite domain of size " +
                              std::to_string(registry_->size()));
    }
    return Point{make_point(index), (*registry_)[index]};
  }
  return Point{make_point(index), enumerator_->payload(index)};
}

std::uint64_t Domain::index(PointId id) const {
  if (!contains(id)) throw PreconditionError("point " + std::to_string(to_index(id)) + " is not in the domain");
  return to_index(id);
}

std::optional<PointId> Domain::find(const Payload& payload) const {
  if (is_finite()) {
    for (std::size_t i = 0; i < registry_->size(); ++i) {
      if ((*registry_)[i] == payload) return make_point(i);
    }
    return std::nullopt;
  }
  if (auto idx = enumerator_->index_of(payload)) return make_point(*idx);
  return std::nullopt;
}

PointSet Domain::all_points() const {
  const std::size_t n = size();
  return n == 0 ? PointSet{} : PointSet::range(0, n - 1);
}

std::string Domain::describe() const {
  if (is_finite()) return "finite(" + std::to_string(registry_->size()) + ")";
  return enumerator_->name();
}

FiniteSupportDistribution::FiniteSupportDistribution(std::vector<Entry> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw PreconditionError("distribution needs a non-empty support");
  std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) { return a.id < b.id; });
  Rational total = 0;
  std::vector<PointId> ids;
  ids.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i > 0 && entries_[i].id == entries_[i - 1].id) {
      throw PreconditionError("point " + std::to_string(to_index(entries_[i].id)) + " listed twice in distribution");
    }
    if (entries_[i].mass <= 0) {
      throw PreconditionError("mass of point " + std::to_string(to_index(entries_[i].id)) + " is not positive");
    }
    total += entries_[i].mass;
    ids.push_back(entries_[i].id);
  }
  if (total != 1) throw PreconditionError("masses sum to " + format_rational(total) + ", not 1");
  support_ = PointSet::from(std::move(ids));

  // ceil(C_i * 2^64) for each cumulative mass C_i; the last one is 2^64.
  const BigInt two64 = BigInt(1) << 64;
  Rational cumulative = 0;
  thresholds_.reserve(entries_.size());
  for (const auto& e : entries_) {
    cumulative += e.mass;
    BigInt num = boost::multiprecision::numerator(cumulative) * two64;
    const BigInt& den = boost::multiprecision::denominator(cumulative);
    BigInt t = (num + den - 1) / den;
    thresholds_.push_back(static_cast<unsigned __int128>(t >> 64) << 64 |
                          static_cast<unsigned __int128>((t & ((BigInt(1) << 64) - 1)).convert_to<std::uint64_t>()));
  }
}

FiniteSupportDistribution FiniteSupportDistribution::uniform(const PointSet& support) {
  if (support.empty()) throw PreconditionError("uniform distribution over an empty set");
  std::vector<Entry> entries;
  entries.reserve(support.size());
  const Rational mass(1, static_cast<long long>(support.size()));
  for (auto p : support) entries.push_back({p, mass});
  return FiniteSupportDistribution(std::move(entries));
}

FiniteSupportDistribution FiniteSupportDistribution::point_mass(PointId p) {
  return FiniteSupportDistribution({Entry{p, Rational(1)}});
}

Rational FiniteSupportDistribution::mass(PointId p) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), p, [](const Entry& e, PointId id) { return e.id < id; });
  if (it != entries_.end() && it->id == p) return it->mass;
  return 0;
}

std::size_t FiniteSupportDistribution::locate(std::uint64_t u) const {
  auto it = std::upper_bound(thresholds_.begin(), thresholds_.end(), static_cast<unsigned __int128>(u));
  return static_cast<std::size_t>(it - thresholds_.begin());
}

Rational expectation(const FiniteSupportDistribution& dist, const Hypothesis& h) {
  Rational total = 0;
  auto member = h.members().begin();
  const auto last = h.members().end();
  for (const auto& e : dist.entries()) {
    member = std::lower_bound(member, last, e.id);
    if (member == last) break;
    if (*member == e.id) total += e.mass;
  }
  return total;
}

Rational emx_gap(const FiniteSupportDistribution& dist, const Hypothesis& h) { return Rational(1) - expectation(dist, h); }

Sample draw_sample(const FiniteSupportDistribution& dist, std::size_t m, std::uint64_t seed) {
  Sample s;
  s.seed = seed;
  s.points.reserve(m);
  Rng rng(seed);
  const auto entries = dist.entries();
  for (std::size_t i = 0; i < m; ++i) s.points.push_back(entries[dist.locate(rng())].id);
  return s;
}

std::size_t erm_max_coverage(const Sample& sample, std::span<const Hypothesis> candidates) {
  if (candidates.empty()) throw PreconditionError("erm_max_coverage needs at least one candidate");
  std::size_t best = 0;
  std::size_t best_cover = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    std::size_t cover = 0;
    for (auto p : sample.points) cover += candidates[i].contains(p) ? 1 : 0;
    if (i == 0 || cover > best_cover) {
      best = i;
      best_cover = cover;
    }
  }
  return best;
}

}  // namespace emx
