#include "hsolve/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "hsolve/error.hpp"

namespace hsolve {

namespace {

std::size_t exact_sqrt(std::size_t n) {
  auto r = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

Partition::Partition(std::size_t n_glob, std::size_t n_subdomains, std::size_t overlap)
    : n_glob_(n_glob), overlap_(overlap) {
  const std::size_t per_axis = exact_sqrt(n_subdomains);
  if (n_subdomains == 0 || per_axis * per_axis != n_subdomains) {
    throw SizingError("Partition: N = " + std::to_string(n_subdomains) +
                      " is not a perfect square");
  }
  const std::size_t base = n_glob / per_axis;
  const std::size_t extra = n_glob % per_axis;
  if (base < 2) {
    throw SizingError("Partition: owned blocks smaller than 2 nodes (n_glob = " +
                      std::to_string(n_glob) + ", N = " + std::to_string(n_subdomains) +
                      ")");
  }
  // Larger blocks first.
  std::size_t start = 0;
  for (std::size_t b = 0; b < per_axis; ++b) {
    const std::size_t len = base + (b < extra ? 1 : 0);
    blocks_.push_back({start, start + len});
    start += len;
  }

  auto dilate = [&](Range r) {
    return Range{r.begin >= overlap ? r.begin - overlap : 0,
                 std::min(n_glob, r.end + overlap)};
  };
  for (std::size_t by = 0; by < per_axis; ++by) {
    for (std::size_t bx = 0; bx < per_axis; ++bx) {
      Subdomain s;
      s.id = by * per_axis + bx;
      s.owned_x = blocks_[bx];
      s.owned_y = blocks_[by];
      s.overlap_x = dilate(s.owned_x);
      s.overlap_y = dilate(s.owned_y);
      s.global_indices.reserve(s.overlap_x.size() * s.overlap_y.size());
      for (std::size_t iy = s.overlap_y.begin; iy < s.overlap_y.end; ++iy) {
        for (std::size_t ix = s.overlap_x.begin; ix < s.overlap_x.end; ++ix) {
          s.global_indices.push_back(iy * n_glob + ix);
          s.owned.push_back(s.owned_x.contains(ix) && s.owned_y.contains(iy) ? 1 : 0);
        }
      }
      subdomains_.push_back(std::move(s));
    }
  }
}

Vector Partition::restrict_to(std::size_t j, std::span<const double> global) const {
  if (global.size() != n_glob_ * n_glob_) {
    throw DimensionError("restrict: global vector has wrong size");
  }
  const Subdomain& s = subdomains_.at(j);
  Vector local(s.size());
  for (std::size_t l = 0; l < s.size(); ++l) local[l] = global[s.global_indices[l]];
  return local;
}

void Partition::prolong_weighted_add(std::size_t j, std::span<const double> local,
                                     std::span<double> global) const {
  const Subdomain& s = subdomains_.at(j);
  if (local.size() != s.size() || global.size() != n_glob_ * n_glob_) {
    throw DimensionError("prolong_weighted: dimension mismatch");
  }
  for (std::size_t l = 0; l < s.size(); ++l) {
    if (s.owned[l]) global[s.global_indices[l]] += local[l];
  }
}

Vector Partition::prolong_weighted(std::size_t j, std::span<const double> local) const {
  Vector global(n_glob_ * n_glob_, 0.0);
  prolong_weighted_add(j, local, global);
  return global;
}

void Partition::dump(std::ostream& out) const {
  out << "partition n_glob " << n_glob_ << " subdomains " << size() << " overlap "
      << overlap_ << '\n';
  for (const auto& s : subdomains_) {
    const auto owned = std::count(s.owned.begin(), s.owned.end(), 1);
    out << "subdomain " << s.id << " owned_x " << s.owned_x.begin << ' '
        << s.owned_x.end << " owned_y " << s.owned_y.begin << ' ' << s.owned_y.end
        << " overlap_x " << s.overlap_x.begin << ' ' << s.overlap_x.end
        << " overlap_y " << s.overlap_y.begin << ' ' << s.overlap_y.end << " local "
        << s.nx() << 'x' << s.ny() << " owned " << owned << '\n';
  }
}

LocalSystem extract_local_matrix(const SparseMatrix& a, const Partition& p,
                                 std::size_t j) {
  if (a.rows() != p.n_glob() * p.n_glob()) {
    throw DimensionError("extract_local_matrix: matrix and partition disagree");
  }
  const Subdomain& s = p[j];
  return {s.id, principal_submatrix(a, s.global_indices), s.nx(), s.ny()};
}

}  // namespace hsolve
