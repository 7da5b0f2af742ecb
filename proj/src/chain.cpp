#include "emx/chain.hpp"

#include <algorithm>
#include <exception>
#include <sstream>

#include "emx/errors.hpp"

namespace emx {

CompressionTrace compress_chain(const PointSet& points, const MonotoneScheme& scheme) {
  const std::size_t d = scheme.arity();
  if (points.size() < d) {
    throw PreconditionError("chain compression to " + std::to_string(d) + " points given only " +
                            std::to_string(points.size()));
  }
  CompressionTrace trace{points, {}, {}};
  trace.steps.reserve(points.size() - d);
  PointSet live = points;
  while (live.size() > d) {
    PointSet input = PointSet::from(std::vector<PointId>(live.begin(), live.begin() + static_cast<long>(d + 1)));
    const PointId out = scheme.ejected(input);
    live = live.without(out);
    trace.steps.push_back({std::move(input), out});
  }
  trace.kernel = std::move(live);
  return trace;
}

std::string check_trace(const CompressionTrace& trace, std::size_t d) {
  if (trace.original.size() < d) return "original has fewer than d points";
  if (trace.steps.size() != trace.original.size() - d) {
    return "expected " + std::to_string(trace.original.size() - d) + " steps, found " +
           std::to_string(trace.steps.size());
  }
  PointSet live = trace.original;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& step = trace.steps[i];
    if (step.input.size() != d + 1) return "step " + std::to_string(i) + " input does not have d+1 points";
    if (!live.includes(step.input)) return "step " + std::to_string(i) + " input is not live";
    if (!step.input.contains(step.ejected)) return "step " + std::to_string(i) + " ejects a point outside its input";
    live = live.without(step.ejected);
  }
  if (trace.kernel != live) return "kernel differs from the surviving points";
  return {};
}

namespace {

[[noreturn]] void over_cap(std::size_t iteration, std::size_t size, std::size_t cap, const char* what) {
  throw ResourceLimitError("decompression iteration " + std::to_string(iteration) + ": " + what + " reached " +
                           std::to_string(size) + " (cap " + std::to_string(cap) + ")");
}

// d-subsets of `pool` whose largest position is at or after `first_fresh`,
// i.e. every subset touching a point not present in the previous round.
std::vector<PointSet> fresh_subsets(const std::vector<PointId>& pool, std::size_t first_fresh, std::size_t d) {
  std::vector<PointSet> out;
  std::vector<std::size_t> idx(d);
  std::vector<PointId> buf(d);
  for (std::size_t top = first_fresh; top < pool.size(); ++top) {
    const std::size_t k = d - 1;  // choose the rest from positions [0, top)
    if (k > top) continue;
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
      for (std::size_t i = 0; i < k; ++i) buf[i] = pool[idx[i]];
      buf[k] = pool[top];
      out.push_back(PointSet::from(buf));
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == top - k + (i - 1)) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return out;
}

}  // namespace

PointSet decompress_chain(const PointSet& kernel, const MonotoneScheme& scheme, std::size_t iterations,
                          std::size_t cap) {
  const std::size_t d = scheme.arity();
  PointSet result = scheme.reconstruct(kernel);
  if (result.size() > cap) over_cap(0, result.size(), cap, "set size");
  // eta(empty) is the only 0-subset and it is already in R_0
  if (d == 0) return result;

  std::vector<PointId> pool(result.begin(), result.end());  // old points first, then fresh ones
  std::size_t first_fresh = 0;
  for (std::size_t it = 1; it <= iterations; ++it) {
    std::uint64_t fresh_count = 0;
    for (std::size_t top = first_fresh; top < pool.size(); ++top) fresh_count += binomial(top, d - 1);
    if (fresh_count > cap) over_cap(it, static_cast<std::size_t>(fresh_count), cap, "fresh d-subsets");

    const std::vector<PointSet> subsets = fresh_subsets(pool, first_fresh, d);
    std::vector<PointSet> images(subsets.size());
    const auto n = static_cast<std::ptrdiff_t>(subsets.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      try {
        images[static_cast<std::size_t>(i)] = scheme.reconstruct(subsets[static_cast<std::size_t>(i)]);
      } catch (...) {
#pragma omp critical(emx_decompress_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<PointId> added;
    for (const auto& img : images) {
      for (auto p : img) {
        if (!result.contains(p)) added.push_back(p);
      }
    }
    const PointSet fresh = PointSet::from(std::move(added));
    if (fresh.empty()) break;
    result.merge(fresh);
    if (result.size() > cap) over_cap(it, result.size(), cap, "set size");
    first_fresh = pool.size();
    pool.insert(pool.end(), fresh.begin(), fresh.end());
  }
  return result;
}

std::string format_trace(const CompressionTrace& trace) {
  std::string out = "original " + trace.original.to_string() + "\n";
  for (const auto& step : trace.steps) {
    out += "step " + step.input.to_string() + " | " + std::to_string(to_index(step.ejected)) + "\n";
  }
  out += "kernel " + trace.kernel.to_string() + "\n";
  return out;
}

namespace {

PointSet parse_ids(std::string_view text, std::size_t line_no) {
  std::vector<PointId> ids;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    if (token.empty() || !std::all_of(token.begin(), token.end(), [](unsigned char c) { return c >= '0' && c <= '9'; })) {
      throw PreconditionError("trace line " + std::to_string(line_no) + ": bad point id '" + token + "'");
    }
    ids.push_back(make_point(std::stoull(token)));
  }
  return PointSet::from(std::move(ids));
}

}  // namespace

CompressionTrace parse_trace(std::string_view text) {
  CompressionTrace trace;
  bool seen_original = false;
  bool seen_kernel = false;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto space = line.find(' ');
    const std::string tag = line.substr(0, space);
    const std::string_view rest = space == std::string::npos ? std::string_view{} : std::string_view(line).substr(space + 1);
    if (tag == "original") {
      trace.original = parse_ids(rest, line_no);
      seen_original = true;
    } else if (tag == "step") {
      const auto bar = rest.find('|');
      if (bar == std::string_view::npos) {
        throw PreconditionError("trace line " + std::to_string(line_no) + ": step without '|'");
      }
      const PointSet ejected = parse_ids(rest.substr(bar + 1), line_no);
      if (ejected.size() != 1) {
        throw PreconditionError("trace line " + std::to_string(line_no) + ": step must eject exactly one point");
      }
      trace.steps.push_back({parse_ids(rest.substr(0, bar), line_no), ejected.front()});
    } else if (tag == "kernel") {
      trace.kernel = parse_ids(rest, line_no);
      seen_kernel = true;
    } else {
      throw PreconditionError("trace line " + std::to_string(line_no) + ": unknown record '" + tag + "'");
    }
  }
  if (!seen_original || !seen_kernel) throw PreconditionError("trace needs both an original and a kernel line");
  return trace;
}

}  // namespace emx
