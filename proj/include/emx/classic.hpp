#pragma once

// Two textbook compression learners: axis-aligned rectangles (kernel of at
// most four extreme points) and the max estimator for serial numbers
// (kernel of one point).

#include <cstdint>
#include <istream>
#include <span>
#include <vector>

#include "emx/core.hpp"
#include "emx/rational.hpp"

namespace emx {

struct PlanePoint {
  PointId id;
  Rational x;
  Rational y;

  friend bool operator==(const PlanePoint&, const PlanePoint&) = default;
};

/// Closed axis-aligned rectangle.
struct Rectangle {
  Rational x_min;
  Rational x_max;
  Rational y_min;
  Rational y_max;

  bool contains(const PlanePoint& p) const {
    return x_min <= p.x && p.x <= x_max && y_min <= p.y && p.y <= y_max;
  }
};

/// The leftmost, rightmost, lowest and highest points (ties to the lowest
/// id), deduplicated and sorted by id. Throws PreconditionError when empty.
std::vector<PlanePoint> rect_compress(std::span<const PlanePoint> sample);

/// Bounding box of the kernel. Throws PreconditionError when empty.
Rectangle rect_reconstruct(std::span<const PlanePoint> kernel);

/// {1, ..., max(sample)} as point ids. Serial numbers start at 1; throws
/// PreconditionError for an empty sample or a zero entry.
Hypothesis max_estimator(std::span<const std::uint64_t> sample);

/// Rows of "x,y" with exact decimals or n/d fractions in [0,1]; ids are row
/// numbers from 0. A first row that does not parse as numbers is taken as a
/// header. Throws PreconditionError naming the line on bad input.
std::vector<PlanePoint> load_plane_csv(std::istream& in);

}  // namespace emx
