#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lamina/excursion.hpp"

namespace lamina {

// One dislocation of the interval fragmentation encoded by an excursion: the
// interval of cells [lo,hi] splits at its interior argmin. Fractions are
// stored both as cell counts (exact) and as doubles. s1 >= s2 and s1+s2 = 1.
struct DislocationRecord {
  std::int32_t lo = 0;
  std::int32_t hi = 0;
  std::int32_t split = 0;
  std::int32_t parent = -1;
  std::int32_t left = -1;   // child record on [lo,split], -1 if unit cell
  std::int32_t right = -1;  // child record on [split,hi], -1 if unit cell
  double x = 0.0;           // (hi-lo)/n
  double s1 = 0.0;
  double s2 = 0.0;
  double level = 0.0;        // excursion value at the split
  double birth_level = 0.0;  // parent level, 0 at the root
};

// Binary min-split tree over an n-cell excursion: exactly n-1 records stored
// in pre-order (root first), record 0 the root. Keeps a copy of the grid
// values for leaf-level queries.
class DislocationTree {
 public:
  DislocationTree(std::int64_t n, std::vector<DislocationRecord> records,
                  std::vector<double> values);

  std::int64_t n() const { return n_; }
  std::span<const DislocationRecord> records() const { return records_; }
  const DislocationRecord& record(std::int32_t id) const {
    return records_[static_cast<std::size_t>(id)];
  }
  const std::vector<double>& values() const { return values_; }

 private:
  std::int64_t n_;
  std::vector<DislocationRecord> records_;
  std::vector<double> values_;
};

// Stack-based O(n) construction: every integer interval of length >= 2 splits
// at its interior argmin (ties by smaller index), recursion bottoms out at
// unit cells.
DislocationTree extract_dislocations(const ExcursionPath& path);

struct TriangleMetrics {
  double edges[3];  // 2 sin(pi x), 2 sin(pi x s1), 2 sin(pi x s2)
  double shortest;
  double area;
};

// Chord-length edge triple, shortest edge and Euclidean area of the inscribed
// triangle whose vertices cut the circle into arcs (1-x, x s1, x s2).
TriangleMetrics triangle_metrics(const DislocationRecord& rec);

double shortest_edge_functional(double x, double s1, double s2);
double area_functional(double x, double s1, double s2);

enum class SizeKind { shortest_edge, area, small_child };

SizeKind parse_size_kind(const std::string& name);  // "edge"|"area"|"psi1"

double size_functional(SizeKind kind, double x, double s1, double s2);

// Number of records whose selected size functional exceeds eps.
// Throws config_error for eps <= 0.
std::int64_t count_large(const DislocationTree& tree, SizeKind kind, double eps);

// One pass over the tree for an ascending eps grid; counts are non-increasing
// along the grid.
std::vector<std::int64_t> count_large_sweep(const DislocationTree& tree,
                                            SizeKind kind,
                                            std::span<const double> eps_grid);

struct CentroidResult {
  std::int32_t record_id = 0;
  // Set when one of the three arcs is exactly 1/2 (possible on the grid,
  // probability zero in the continuum).
  bool degenerate = false;
};

// Descend from the root into the child whose absolute interval fraction
// exceeds 1/2; stop when both children are at or below 1/2. The returned
// record r satisfies min(x, 1 - x*s1) > 1/2 unless flagged degenerate.
CentroidResult find_centroid(const DislocationTree& tree);

struct LongestChord {
  double fraction = 0.0;  // L = largest arc fraction, in [1/3, 1/2]
  double length = 0.0;    // 2 sin(pi L)
};

// Largest of the three arc fractions of the centroid record. Throws
// std::logic_error when the record does not satisfy the centroid condition.
LongestChord longest_chord_fraction(const DislocationTree& tree,
                                    std::int32_t centroid_id);

// sum over records of w(x) * (level - birth_level), plus each unit cell's
// w(1/n) * (min of endpoint values - birth level). Approximates the integral
// over all levels of sum_i w(|I_i|) with an O(w(1/n)) leaf bias.
double level_functional(const DislocationTree& tree,
                        const std::function<double(double)>& w);

// Records CSV in pre-order:
// lo,hi,split,x,s1,s2,level,birth_level,shortest_edge,area
void write_records_csv(const DislocationTree& tree, std::ostream& os);

}  // namespace lamina
