#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "hsolve/grid_fem.hpp"
#include "hsolve/sparse.hpp"

namespace hsolve {

/// Half-open index range [begin, end) along one axis, 0-based.
struct Range {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
  bool contains(std::size_t i) const { return i >= begin && i < end; }
  friend bool operator==(const Range&, const Range&) = default;
};

struct Subdomain {
  std::size_t id = 0;
  Range owned_x, owned_y;
  Range overlap_x, overlap_y;
  /// Global flat indices in local lexicographic order (x fastest).
  std::vector<std::size_t> global_indices;
  /// One flag per local index: the restricted prolongation keeps these.
  std::vector<unsigned char> owned;

  std::size_t nx() const { return overlap_x.size(); }
  std::size_t ny() const { return overlap_y.size(); }
  std::size_t size() const { return global_indices.size(); }
};

/// Overlapping Cartesian decomposition of the interior grid into
/// sqrt(N) x sqrt(N) blocks. Subdomain j sits at block (j % sqrt(N), j / sqrt(N)).
class Partition {
 public:
  /// Throws SizingError when N is not a perfect square or an owned block has
  /// fewer than 2 nodes.
  Partition(std::size_t n_glob, std::size_t n_subdomains, std::size_t overlap = 1);

  std::size_t n_glob() const { return n_glob_; }
  std::size_t size() const { return subdomains_.size(); }
  std::size_t blocks_per_axis() const { return blocks_.size(); }
  std::size_t overlap() const { return overlap_; }
  /// Owned ranges along one axis (same on both axes).
  std::span<const Range> blocks() const { return blocks_; }
  const Subdomain& operator[](std::size_t j) const { return subdomains_.at(j); }
  std::span<const Subdomain> subdomains() const { return subdomains_; }

  Vector restrict_to(std::size_t j, std::span<const double> global) const;
  /// Adds D_j v_j into `global`; only owned entries are touched.
  void prolong_weighted_add(std::size_t j, std::span<const double> local,
                            std::span<double> global) const;
  /// R_j^T D_j v_j as a fresh global vector.
  Vector prolong_weighted(std::size_t j, std::span<const double> local) const;

  /// Text dump of boxes and ownership counts.
  void dump(std::ostream& out) const;

 private:
  std::size_t n_glob_;
  std::size_t overlap_;
  std::vector<Range> blocks_;
  std::vector<Subdomain> subdomains_;
};

inline Partition build_partition(const GridSpec& grid, std::size_t n_subdomains,
                                 std::size_t overlap = 1) {
  return Partition(grid.n_glob, n_subdomains, overlap);
}

struct LocalSystem {
  std::size_t id = 0;
  SparseMatrix matrix;
  std::size_t nx = 0;
  std::size_t ny = 0;
};

/// A_j = R_j A R_j^T.
LocalSystem extract_local_matrix(const SparseMatrix& a, const Partition& p, std::size_t j);

}  // namespace hsolve
