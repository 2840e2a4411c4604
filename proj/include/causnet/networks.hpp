#pragma once

#include <limits>
#include <string>

#include "causnet/core_data.hpp"

namespace causnet {

using IntMatrix = Eigen::MatrixXi;

/// Weighted directed network: values(i, j) is the strength of i -> j.
/// The diagonal holds NaN and is never read.
struct CausalityMatrix {
  Matrix values;
  std::string measure;  // e.g. "TE(m=2,tau=1)"

  static CausalityMatrix zeros(Index k, std::string measure = {});

  Index k() const noexcept { return values.rows(); }
  double operator()(Index i, Index j) const { return values(i, j); }
  double& operator()(Index i, Index j) { return values(i, j); }
};

inline constexpr double kDiagonal = std::numeric_limits<double>::quiet_NaN();

/// Binary directed network with a zero diagonal.
class AdjacencyNetwork {
 public:
  AdjacencyNetwork() = default;
  explicit AdjacencyNetwork(IntMatrix adjacency, std::string criterion = {});

  static AdjacencyNetwork empty(Index k, std::string criterion = {});

  const IntMatrix& adjacency() const noexcept { return adj_; }
  const std::string& criterion() const noexcept { return criterion_; }
  Index k() const noexcept { return adj_.rows(); }
  bool edge(Index i, Index j) const { return adj_(i, j) != 0; }
  void set_edge(Index i, Index j, bool on);
  /// Number of directed edges (the density rho in edge-count form).
  int edge_count() const;
  int density() const { return edge_count(); }

  bool operator==(const AdjacencyNetwork& other) const { return adj_ == other.adj_; }

 private:
  IntMatrix adj_;
  std::string criterion_;
};

/// Ground-truth coupling network of a simulated system.
using CouplingGraph = AdjacencyNetwork;

}  // namespace causnet
