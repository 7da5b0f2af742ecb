#include "emx/classic.hpp"

#include <algorithm>
#include <string>

#include "emx/errors.hpp"

namespace emx {

std::vector<PlanePoint> rect_compress(std::span<const PlanePoint> sample) {
  if (sample.empty()) throw PreconditionError("rect_compress needs a non-empty sample");
  // each extreme is strictly better, or equal with a lower id
  auto pick = [&](auto better) {
    const PlanePoint* best = &sample.front();
    for (const auto& p : sample) {
      if (better(p, *best) || (!better(*best, p) && p.id < best->id)) best = &p;
    }
    return *best;
  };
  std::vector<PlanePoint> kernel{
      pick([](const PlanePoint& a, const PlanePoint& b) { return a.x < b.x; }),
      pick([](const PlanePoint& a, const PlanePoint& b) { return a.x > b.x; }),
      pick([](const PlanePoint& a, const PlanePoint& b) { return a.y < b.y; }),
      pick([](const PlanePoint& a, const PlanePoint& b) { return a.y > b.y; }),
  };
  std::sort(kernel.begin(), kernel.end(), [](const PlanePoint& a, const PlanePoint& b) { return a.id < b.id; });
  kernel.erase(std::unique(kernel.begin(), kernel.end(),
                           [](const PlanePoint& a, const PlanePoint& b) { return a.id == b.id; }),
               kernel.end());
  return kernel;
}

Rectangle rect_reconstruct(std::span<const PlanePoint> kernel) {
  if (kernel.empty()) throw PreconditionError("rect_reconstruct needs a non-empty kernel");
  Rectangle r{kernel.front().x, kernel.front().x, kernel.front().y, kernel.front().y};
  for (const auto& p : kernel) {
    r.x_min = std::min(r.x_min, p.x);
    r.x_max = std::max(r.x_max, p.x);
    r.y_min = std::min(r.y_min, p.y);
    r.y_max = std::max(r.y_max, p.y);
  }
  return r;
}

Hypothesis max_estimator(std::span<const std::uint64_t> sample) {
  if (sample.empty()) throw PreconditionError("max_estimator needs a non-empty sample");
  if (std::find(sample.begin(), sample.end(), 0) != sample.end()) {
    throw PreconditionError("serial numbers start at 1");
  }
  const std::uint64_t top = *std::max_element(sample.begin(), sample.end());
  return Hypothesis(PointSet::range(1, top));
}

std::vector<PlanePoint> load_plane_csv(std::istream& in) {
  std::vector<PlanePoint> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw PreconditionError("plane csv line " + std::to_string(line_no) + ": expected 'x,y'");
    }
    Rational x;
    Rational y;
    try {
      x = parse_rational(std::string_view(line).substr(0, comma));
      y = parse_rational(std::string_view(line).substr(comma + 1));
    } catch (const std::invalid_argument& e) {
      if (out.empty() && line_no == 1) continue;  // header
      throw PreconditionError("plane csv line " + std::to_string(line_no) + ": " + e.what());
    }
    if (x < 0 || x > 1 || y < 0 || y > 1) {
      throw PreconditionError("plane csv line " + std::to_string(line_no) + ": coordinates must lie in [0,1]");
    }
    out.push_back({make_point(out.size()), std::move(x), std::move(y)});
  }
  return out;
}

}  // namespace emx
