#pragma once

#include <optional>
#include <vector>

#include "causnet/core_data.hpp"

namespace causnet {

struct KnnConfig {
  int k = 10;
  double jitter = 1e-10;  // amplitude of the deterministic tie-breaking noise
};

/// Static kd-tree over row-major points under the maximum norm.
class ChebyshevTree {
 public:
  /// `points` is n x d row-major (point p occupies [p*d, p*d + d)).
  ChebyshevTree(const double* points, Index n, int d);

  Index size() const noexcept { return n_; }
  int dim() const noexcept { return d_; }

  /// Distance from point `self` to its k-th nearest other point.
  double kth_neighbor_distance(Index self, int k) const;
  /// Number of points other than `self` at distance strictly below `radius`.
  Index count_within(Index self, double radius) const;

 private:
  struct Node {
    Index begin, end;  // range in order_
    int left = -1, right = -1;
  };

  int build(Index begin, Index end);
  const double* point(Index p) const noexcept { return pts_ + p * d_; }
  const double* slot(Index s) const noexcept { return sorted_.data() + s * d_; }

  const double* pts_;
  Index n_;
  int d_;
  std::vector<Index> order_;
  std::vector<double> sorted_;  // points copied in tree order for contiguous leaf scans
  std::vector<Node> nodes_;
  std::vector<double> lo_, hi_;  // node bounding boxes, d per node
};

/// psi(n) for integer n >= 1.
double digamma_int(Index n);

/// Kraskov (first algorithm) mutual information in nats; x and y are n x dx, n x dy.
double knn_mi(const Matrix& x, const Matrix& y, const KnnConfig& cfg = {});
/// Frenzel-Pompe conditional mutual information I(x; y | z); z may have zero columns.
double knn_cmi(const Matrix& x, const Matrix& y, const Matrix& z, const KnnConfig& cfg = {});

/// Row-major sample with deterministic jitter, blocks laid out as given.
/// Exposed so that callers evaluating many estimates on overlapping blocks
/// (mixed embedding search) can reuse the preprocessing.
class JointSample {
 public:
  JointSample(std::initializer_list<const Matrix*> blocks, const KnnConfig& cfg);

  Index n() const noexcept { return n_; }
  int dim() const noexcept { return d_; }
  const std::vector<double>& data() const noexcept { return data_; }
  /// Row-major copy of the selected columns.
  std::vector<double> columns(const std::vector<int>& cols) const;

 private:
  Index n_ = 0;
  int d_ = 0;
  std::vector<double> data_;
};

/// Reusable strict-radius neighbour counter over a fixed point set (sorted
/// array in one dimension, kd-tree otherwise).
class NeighborCounter {
 public:
  NeighborCounter(std::vector<double> rowmajor, Index n, int d);
  // The tree points into data_, whose buffer survives moves but not copies.
  NeighborCounter(const NeighborCounter&) = delete;
  NeighborCounter& operator=(const NeighborCounter&) = delete;
  NeighborCounter(NeighborCounter&&) = default;
  NeighborCounter& operator=(NeighborCounter&&) = default;

  /// Points other than `self` at distance strictly below `radius`.
  Index count(Index self, double radius) const;

 private:
  std::vector<double> data_;
  Index n_;
  int d_;
  std::vector<double> sorted_;
  std::optional<ChebyshevTree> tree_;
};

/// Counts of neighbours strictly inside `radius[p]` in a subspace, excluding p.
std::vector<Index> subspace_counts(const std::vector<double>& rowmajor, Index n, int d, const std::vector<double>& radius);

/// Joint-space k-th neighbour distances for every point.
std::vector<double> kth_distances(const std::vector<double>& rowmajor, Index n, int d, int k);

}  // namespace causnet
