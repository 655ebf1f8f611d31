#include "lamina/lamination.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "lamina/errors.hpp"

namespace lamina {

namespace {

constexpr double kPi = 3.141592653589793238462643383279;

struct BuildNode {
  std::int32_t left = -1;
  std::int32_t right = -1;
};

}  // namespace

DislocationTree::DislocationTree(std::int64_t n,
                                 std::vector<DislocationRecord> records,
                                 std::vector<double> values)
    : n_(n), records_(std::move(records)), values_(std::move(values)) {}

DislocationTree extract_dislocations(const ExcursionPath& path) {
  const std::int64_t n = path.n;
  if (n < 2 || path.values.size() != static_cast<std::size_t>(n) + 1) {
    throw std::logic_error("extract_dislocations: malformed excursion path");
  }
  if (n > std::numeric_limits<std::int32_t>::max()) {
    throw config_error("grid resolution exceeds 2^31-1 cells");
  }
  const std::vector<double>& v = path.values;

  // Min-Cartesian tree over interior indices 1..n-1. Equal values compare by
  // index, earlier index smaller; with continuous draws ties never occur.
  const auto less_at = [&v](std::int64_t a, std::int64_t b) {
    const double va = v[static_cast<std::size_t>(a)];
    const double vb = v[static_cast<std::size_t>(b)];
    return va < vb || (va == vb && a < b);
  };

  std::vector<BuildNode> nodes(static_cast<std::size_t>(n - 1));
  std::vector<std::int32_t> stack;
  stack.reserve(64);
  for (std::int64_t k = 1; k < n; ++k) {
    const std::int32_t id = static_cast<std::int32_t>(k);
    std::int32_t last = -1;
    while (!stack.empty() && less_at(k, stack.back())) {
      last = stack.back();
      stack.pop_back();
    }
    nodes[static_cast<std::size_t>(id - 1)].left = last;
    if (!stack.empty()) {
      nodes[static_cast<std::size_t>(stack.back() - 1)].right = id;
    }
    stack.push_back(id);
  }
  const std::int32_t root = stack.front();

  // Pre-order interval assignment. Each frame carries the interval the node
  // splits and its parent's record id / level.
  struct Frame {
    std::int32_t node;
    std::int32_t lo, hi;
    std::int32_t parent;
    double birth;
  };
  std::vector<DislocationRecord> records;
  records.reserve(static_cast<std::size_t>(n - 1));
  std::vector<Frame> todo;
  todo.reserve(64);
  todo.push_back(Frame{root, 0, static_cast<std::int32_t>(n), -1, 0.0});
  const double inv_n = 1.0 / static_cast<double>(n);
  while (!todo.empty()) {
    const Frame fr = todo.back();
    todo.pop_back();
    const std::int32_t split = fr.node;
    const std::int32_t cl = split - fr.lo;
    const std::int32_t cr = fr.hi - split;

    DislocationRecord rec;
    rec.lo = fr.lo;
    rec.hi = fr.hi;
    rec.split = split;
    rec.parent = fr.parent;
    rec.x = static_cast<double>(fr.hi - fr.lo) * inv_n;
    const double len = static_cast<double>(fr.hi - fr.lo);
    rec.s1 = static_cast<double>(std::max(cl, cr)) / len;
    rec.s2 = static_cast<double>(std::min(cl, cr)) / len;
    rec.level = v[static_cast<std::size_t>(split)];
    rec.birth_level = fr.birth;

    const std::int32_t rec_id = static_cast<std::int32_t>(records.size());
    if (fr.parent >= 0) {
      DislocationRecord& par = records[static_cast<std::size_t>(fr.parent)];
      if (split < par.split) {
        par.left = rec_id;
      } else {
        par.right = rec_id;
      }
    }
    records.push_back(rec);

    const BuildNode& bn = nodes[static_cast<std::size_t>(split - 1)];
    // Push right before left so the left subtree is emitted first (pre-order).
    if (cr >= 2) {
      todo.push_back(Frame{bn.right, split, fr.hi, rec_id, rec.level});
    }
    if (cl >= 2) {
      todo.push_back(Frame{bn.left, fr.lo, split, rec_id, rec.level});
    }
  }

  return DislocationTree(n, std::move(records), path.values);
}

TriangleMetrics triangle_metrics(const DislocationRecord& rec) {
  TriangleMetrics m;
  m.edges[0] = 2.0 * std::sin(kPi * rec.x);
  m.edges[1] = 2.0 * std::sin(kPi * rec.x * rec.s1);
  m.edges[2] = 2.0 * std::sin(kPi * rec.x * rec.s2);
  m.shortest = std::min({m.edges[0], m.edges[1], m.edges[2]});
  m.area = 0.25 * m.edges[0] * m.edges[1] * m.edges[2];
  return m;
}

double shortest_edge_functional(double x, double s1, double s2) {
  return std::min({2.0 * std::sin(kPi * x), 2.0 * std::sin(kPi * x * s1),
                   2.0 * std::sin(kPi * x * s2)});
}

double area_functional(double x, double s1, double s2) {
  return 2.0 * std::sin(kPi * x * s1) * std::sin(kPi * x * s2) *
         std::sin(kPi * x);
}

SizeKind parse_size_kind(const std::string& name) {
  if (name == "edge") return SizeKind::shortest_edge;
  if (name == "area") return SizeKind::area;
  if (name == "psi1" || name == "small-child") return SizeKind::small_child;
  throw config_error("unknown size kind '" + name +
                     "' (expected edge|area|psi1)");
}

double size_functional(SizeKind kind, double x, double s1, double s2) {
  switch (kind) {
    case SizeKind::shortest_edge:
      return shortest_edge_functional(x, s1, s2);
    case SizeKind::area:
      return area_functional(x, s1, s2);
    case SizeKind::small_child:
      return x * s2;
  }
  throw config_error("unknown size kind");
}

std::int64_t count_large(const DislocationTree& tree, SizeKind kind,
                         double eps) {
  const double grid[1] = {eps};
  return count_large_sweep(tree, kind, grid)[0];
}

std::vector<std::int64_t> count_large_sweep(const DislocationTree& tree,
                                            SizeKind kind,
                                            std::span<const double> eps_grid) {
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] > 0.0)) {
      throw config_error("count_large thresholds must be positive");
    }
    if (i > 0 && !(eps_grid[i] > eps_grid[i - 1])) {
      throw config_error("eps grid must be strictly ascending");
    }
  }
  std::vector<std::int64_t> counts(eps_grid.size(), 0);
  for (const DislocationRecord& rec : tree.records()) {
    const double value = size_functional(kind, rec.x, rec.s1, rec.s2);
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
      if (value > eps_grid[i]) {
        ++counts[i];
      } else {
        break;  // ascending grid
      }
    }
  }
  return counts;
}

CentroidResult find_centroid(const DislocationTree& tree) {
  const std::int64_t n = tree.n();
  CentroidResult result;
  std::int32_t id = 0;
  for (;;) {
    const DislocationRecord& rec = tree.record(id);
    const std::int64_t cl = rec.split - rec.lo;
    const std::int64_t cr = rec.hi - rec.split;
    if (2 * cl > n) {
      id = rec.left;
    } else if (2 * cr > n) {
      id = rec.right;
    } else {
      result.record_id = id;
      result.degenerate = (2 * cl == n) || (2 * cr == n) ||
                          (2 * (n - (rec.hi - rec.lo)) == n);
      return result;
    }
    // A child strictly larger than n/2 cells has at least 2 cells, so the
    // descent always lands on an existing record.
  }
}

LongestChord longest_chord_fraction(const DislocationTree& tree,
                                    std::int32_t centroid_id) {
  const DislocationRecord& rec = tree.record(centroid_id);
  const std::int64_t n = tree.n();
  const std::int64_t len = rec.hi - rec.lo;
  const std::int64_t cl = rec.split - rec.lo;
  const std::int64_t cr = rec.hi - rec.split;
  const std::int64_t largest_child = std::max(cl, cr);
  if (!(2 * len > n) || 2 * largest_child > n) {
    throw std::logic_error(
        "longest_chord_fraction: record does not satisfy the centroid "
        "condition");
  }
  const std::int64_t arc_cells = std::max(n - len, largest_child);
  LongestChord chord;
  chord.fraction = static_cast<double>(arc_cells) / static_cast<double>(n);
  chord.length = 2.0 * std::sin(kPi * chord.fraction);
  return chord;
}

double level_functional(const DislocationTree& tree,
                        const std::function<double(double)>& w) {
  const std::vector<double>& v = tree.values();
  const double w_cell = w(1.0 / static_cast<double>(tree.n()));
  double sum = 0.0;
  for (const DislocationRecord& rec : tree.records()) {
    sum += w(rec.x) * (rec.level - rec.birth_level);
    if (rec.left < 0) {
      const double lo_val = v[static_cast<std::size_t>(rec.lo)];
      sum += w_cell * (std::min(lo_val, rec.level) - rec.level);
    }
    if (rec.right < 0) {
      const double hi_val = v[static_cast<std::size_t>(rec.hi)];
      sum += w_cell * (std::min(hi_val, rec.level) - rec.level);
    }
  }
  return sum;
}

void write_records_csv(const DislocationTree& tree, std::ostream& os) {
  os << "lo,hi,split,x,s1,s2,level,birth_level,shortest_edge,area\n";
  char buf[256];
  for (const DislocationRecord& rec : tree.records()) {
    const TriangleMetrics m = triangle_metrics(rec);
    std::snprintf(buf, sizeof(buf),
                  "%d,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  rec.lo, rec.hi, rec.split, rec.x, rec.s1, rec.s2, rec.level,
                  rec.birth_level, m.shortest, m.area);
    os << buf;
  }
}

}  // namespace lamina
