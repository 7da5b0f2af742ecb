#pragma once

// Chained M -> d compression and its finite-union decompression.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "emx/point_set.hpp"
#include "emx/scheme.hpp"

namespace emx {

struct CompressionStep {
  PointSet input;  // d+1 live points handed to sigma
  PointId ejected;

  friend bool operator==(const CompressionStep&, const CompressionStep&) = default;
};

struct CompressionTrace {
  PointSet original;
  std::vector<CompressionStep> steps;
  PointSet kernel;

  friend bool operator==(const CompressionTrace&, const CompressionTrace&) = default;
};

/// Repeatedly compresses the d+1 smallest-id live points until d remain,
/// where d is the scheme's arity. Throws PreconditionError if fewer than d
/// points are given.
CompressionTrace compress_chain(const PointSet& points, const MonotoneScheme& scheme);

/// Checks the structural invariants of a trace for kernel size d: M - d
/// steps, inputs drawn from the live set, ejected points in their inputs,
/// kernel equal to what is left. Returns an empty string when valid, else a
/// description of the first problem.
std::string check_trace(const CompressionTrace& trace, std::size_t d);

/// R_0 = eta(kernel); R_{i+1} = R_i ∪ eta(t) over all d-subsets t of R_i.
/// Returns R_iterations (or the fixpoint, if reached first). Throws
/// ResourceLimitError naming the iteration and size as soon as a set or the
/// number of fresh d-subsets in one round exceeds `cap`. Fresh subsets of a
/// round are expanded concurrently.
PointSet decompress_chain(const PointSet& kernel, const MonotoneScheme& scheme, std::size_t iterations,
                          std::size_t cap = 1'000'000);

namespace reference {
/// Literal serial version: no memoisation, no early exit.
PointSet decompress_chain(const PointSet& kernel, const MonotoneScheme& scheme, std::size_t iterations,
                          std::size_t cap = 1'000'000);
}  // namespace reference

/// Line format:
///   original <ids>
///   step <input ids> | <ejected id>
///   kernel <ids>
std::string format_trace(const CompressionTrace& trace);
/// Inverse of format_trace. Blank lines and '#' comments are ignored.
/// Throws PreconditionError with the offending line number.
CompressionTrace parse_trace(std::string_view text);

}  // namespace emx
