#include "causnet/knn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "causnet/random.hpp"

namespace causnet {
namespace {

constexpr Index kLeafSize = 16;
constexpr double kEulerGamma = 0.57721566490153286061;
constexpr Index kDigammaTable = Index{1} << 16;

const std::vector<double>& digamma_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(static_cast<std::size_t>(kDigammaTable));
    t[0] = 0.0;  // unused
    t[1] = -kEulerGamma;
    for (std::size_t n = 2; n < t.size(); ++n) t[n] = t[n - 1] + 1.0 / static_cast<double>(n - 1);
    return t;
  }();
  return table;
}

// Uniform in [-0.5, 0.5) from a (column, row) coordinate.
double jitter_unit(std::uint64_t col, std::uint64_t row) {
  const std::uint64_t h = mix64(mix64(col * 0x9e3779b97f4a7c15ULL + 0x7f4a7c15ULL) ^ row);
  return static_cast<double>(h >> 11) * 0x1.0p-53 - 0.5;
}

}  // namespace

double digamma_int(Index n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "digamma argument must be a positive integer");
  if (n < kDigammaTable) return digamma_table()[static_cast<std::size_t>(n)];
  const double x = static_cast<double>(n);
  const double x2 = 1.0 / (x * x);
  return std::log(x) - 0.5 / x - x2 * (1.0 / 12.0 - x2 * (1.0 / 120.0 - x2 / 252.0));
}

// ---------------------------------------------------------------------------
// kd-tree

ChebyshevTree::ChebyshevTree(const double* points, Index n, int d) : pts_(points), n_(n), d_(d) {
  if (n < 1 || d < 1) throw Error(ErrorCode::InvalidArgument, "tree needs at least one point and one dimension");
  order_.resize(static_cast<std::size_t>(n));
  std::iota(order_.begin(), order_.end(), Index{0});
  nodes_.reserve(static_cast<std::size_t>(2 * (n / kLeafSize + 1)));
  build(0, n);
  sorted_.resize(static_cast<std::size_t>(n * d));
  for (Index s = 0; s < n; ++s) std::copy_n(point(order_[static_cast<std::size_t>(s)]), d, sorted_.data() + s * d);
}

int ChebyshevTree::build(Index begin, Index end) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back({begin, end});
  const auto base = static_cast<std::size_t>(id) * static_cast<std::size_t>(d_);
  lo_.resize(base + static_cast<std::size_t>(d_));
  hi_.resize(base + static_cast<std::size_t>(d_));
  for (int c = 0; c < d_; ++c) {
    lo_[base + c] = hi_[base + c] = point(order_[static_cast<std::size_t>(begin)])[c];
  }
  for (Index q = begin + 1; q < end; ++q) {
    const double* x = point(order_[static_cast<std::size_t>(q)]);
    for (int c = 0; c < d_; ++c) {
      lo_[base + c] = std::min(lo_[base + c], x[c]);
      hi_[base + c] = std::max(hi_[base + c], x[c]);
    }
  }
  if (end - begin <= kLeafSize) return id;

  int axis = 0;
  double spread = -1.0;
  for (int c = 0; c < d_; ++c) {
    const double s = hi_[base + c] - lo_[base + c];
    if (s > spread) spread = s, axis = c;
  }
  if (spread <= 0.0) return id;  // all points coincide

  const Index mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](Index a, Index b) { return point(a)[axis] < point(b)[axis]; });
  const int left = build(begin, mid);
  const int right = build(mid, end);
  nodes_[static_cast<std::size_t>(id)].left = left;
  nodes_[static_cast<std::size_t>(id)].right = right;
  return id;
}

double ChebyshevTree::kth_neighbor_distance(Index self, int k) const {
  if (k < 1 || k >= n_) throw Error(ErrorCode::TooFewSamples, "k must lie in [1, n-1]");
  const double* q = point(self);
  // Sorted ascending list of the best k distances so far.
  std::array<double, 64> small{};
  std::vector<double> large;
  double* best = small.data();
  if (k > static_cast<int>(small.size())) {
    large.resize(static_cast<std::size_t>(k));
    best = large.data();
  }
  std::fill(best, best + k, std::numeric_limits<double>::infinity());

  auto box_dist = [&](int node) {
    const auto base = static_cast<std::size_t>(node) * static_cast<std::size_t>(d_);
    double m = 0.0;
    for (int c = 0; c < d_; ++c) {
      const double v = std::max(lo_[base + c] - q[c], q[c] - hi_[base + c]);
      m = std::max(m, v);
    }
    return m;
  };

  std::array<int, 128> stack{};
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const int id = stack[--top];
    if (box_dist(id) >= best[k - 1]) continue;
    const Node& node = nodes_[static_cast<std::size_t>(id)];
    if (node.left < 0) {
      for (Index s = node.begin; s < node.end; ++s) {
        if (order_[static_cast<std::size_t>(s)] == self) continue;
        const double* x = slot(s);
        double dist = 0.0;
        for (int c = 0; c < d_; ++c) dist = std::max(dist, std::abs(x[c] - q[c]));
        if (dist < best[k - 1]) {
          int pos = k - 1;
          while (pos > 0 && best[pos - 1] > dist) {
            best[pos] = best[pos - 1];
            --pos;
          }
          best[pos] = dist;
        }
      }
      continue;
    }
    const double dl = box_dist(node.left);
    const double dr = box_dist(node.right);
    // Push the farther child first so the nearer one is visited next.
    if (dl <= dr) {
      stack[top++] = node.right;
      stack[top++] = node.left;
    } else {
      stack[top++] = node.left;
      stack[top++] = node.right;
    }
  }
  return best[k - 1];
}

Index ChebyshevTree::count_within(Index self, double radius) const {
  const double* q = point(self);
  Index count = 0;
  std::array<int, 128> stack{};
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const int id = stack[--top];
    const auto base = static_cast<std::size_t>(id) * static_cast<std::size_t>(d_);
    double near = 0.0, far = 0.0;
    for (int c = 0; c < d_; ++c) {
      const double a = lo_[base + c] - q[c];
      const double b = q[c] - hi_[base + c];
      near = std::max(near, std::max(a, b));
      far = std::max(far, std::max(-a, -b));
    }
    if (near >= radius) continue;
    const Node& node = nodes_[static_cast<std::size_t>(id)];
    if (far < radius) {
      count += node.end - node.begin;
      continue;
    }
    if (node.left < 0) {
      for (Index s = node.begin; s < node.end; ++s) {
        const double* x = slot(s);
        double dist = 0.0;
        for (int c = 0; c < d_ && dist < radius; ++c) dist = std::max(dist, std::abs(x[c] - q[c]));
        if (dist < radius) ++count;
      }
      continue;
    }
    stack[top++] = node.left;
    stack[top++] = node.right;
  }
  // The query point itself is at distance 0 and counted whenever radius > 0.
  return radius > 0.0 ? count - 1 : count;
}

// ---------------------------------------------------------------------------
// samples and counts

JointSample::JointSample(std::initializer_list<const Matrix*> blocks, const KnnConfig& cfg) {
  for (const Matrix* b : blocks) {
    if (b->cols() == 0) continue;
    if (n_ == 0) n_ = b->rows();
    if (b->rows() != n_) throw Error(ErrorCode::DimensionMismatch, "sample blocks differ in length");
    d_ += static_cast<int>(b->cols());
  }
  data_.resize(static_cast<std::size_t>(n_ * d_));
  int col = 0;
  for (const Matrix* b : blocks) {
    for (Index c = 0; c < b->cols(); ++c, ++col) {
      for (Index t = 0; t < n_; ++t) {
        data_[static_cast<std::size_t>(t * d_ + col)] =
            (*b)(t, c) + cfg.jitter * jitter_unit(static_cast<std::uint64_t>(col), static_cast<std::uint64_t>(t));
      }
    }
  }
}

std::vector<double> JointSample::columns(const std::vector<int>& cols) const {
  const auto q = cols.size();
  std::vector<double> out(static_cast<std::size_t>(n_) * q);
  for (Index t = 0; t < n_; ++t) {
    for (std::size_t c = 0; c < q; ++c) out[static_cast<std::size_t>(t) * q + c] = data_[static_cast<std::size_t>(t * d_ + cols[c])];
  }
  return out;
}

NeighborCounter::NeighborCounter(std::vector<double> rowmajor, Index n, int d) : data_(std::move(rowmajor)), n_(n), d_(d) {
  if (d == 1) {
    sorted_.assign(data_.begin(), data_.begin() + n);
    std::sort(sorted_.begin(), sorted_.end());
  } else {
    tree_.emplace(data_.data(), n, d);
  }
}

Index NeighborCounter::count(Index self, double radius) const {
  if (tree_) return tree_->count_within(self, radius);
  const double v = data_[static_cast<std::size_t>(self)];
  // Values strictly inside (v - r, v + r), minus the point itself.
  const auto lo = std::upper_bound(sorted_.begin(), sorted_.end(), v - radius);
  const auto hi = std::lower_bound(sorted_.begin(), sorted_.end(), v + radius);
  const Index c = hi > lo ? static_cast<Index>(hi - lo) : 0;
  return radius > 0.0 ? c - 1 : c;
}

std::vector<Index> subspace_counts(const std::vector<double>& rowmajor, Index n, int d, const std::vector<double>& radius) {
  const NeighborCounter counter(rowmajor, n, d);
  std::vector<Index> counts(static_cast<std::size_t>(n));
  for (Index p = 0; p < n; ++p) counts[static_cast<std::size_t>(p)] = counter.count(p, radius[static_cast<std::size_t>(p)]);
  return counts;
}

std::vector<double> kth_distances(const std::vector<double>& rowmajor, Index n, int d, int k) {
  const ChebyshevTree tree(rowmajor.data(), n, d);
  std::vector<double> eps(static_cast<std::size_t>(n));
  for (Index p = 0; p < n; ++p) eps[static_cast<std::size_t>(p)] = tree.kth_neighbor_distance(p, k);
  return eps;
}

namespace {

void check_sample(Index n, const KnnConfig& cfg) {
  if (cfg.k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  if (n < 50 || n <= cfg.k) throw Error(ErrorCode::TooFewSamples, "nearest-neighbour estimates need at least 50 samples");
}

std::vector<int> range(int begin, int end) {
  std::vector<int> out(static_cast<std::size_t>(end - begin));
  std::iota(out.begin(), out.end(), begin);
  return out;
}

}  // namespace

double knn_mi(const Matrix& x, const Matrix& y, const KnnConfig& cfg) {
  if (x.rows() != y.rows()) throw Error(ErrorCode::DimensionMismatch, "x and y differ in length");
  if (x.cols() < 1 || y.cols() < 1) throw Error(ErrorCode::InvalidArgument, "x and y need at least one column");
  const Index n = x.rows();
  check_sample(n, cfg);
  const JointSample joint({&x, &y}, cfg);
  const int dx = static_cast<int>(x.cols()), dy = static_cast<int>(y.cols());
  const auto eps = kth_distances(joint.data(), n, joint.dim(), cfg.k);
  const auto nx = subspace_counts(joint.columns(range(0, dx)), n, dx, eps);
  const auto ny = subspace_counts(joint.columns(range(dx, dx + dy)), n, dy, eps);
  double acc = 0.0;
  for (Index p = 0; p < n; ++p) {
    acc += digamma_int(nx[static_cast<std::size_t>(p)] + 1) + digamma_int(ny[static_cast<std::size_t>(p)] + 1);
  }
  return digamma_int(cfg.k) + digamma_int(n) - acc / static_cast<double>(n);
}

double knn_cmi(const Matrix& x, const Matrix& y, const Matrix& z, const KnnConfig& cfg) {
  if (z.cols() == 0) return knn_mi(x, y, cfg);
  if (x.rows() != y.rows() || x.rows() != z.rows()) throw Error(ErrorCode::DimensionMismatch, "x, y and z differ in length");
  if (x.cols() < 1 || y.cols() < 1) throw Error(ErrorCode::InvalidArgument, "x and y need at least one column");
  const Index n = x.rows();
  check_sample(n, cfg);
  const JointSample joint({&x, &y, &z}, cfg);
  const int dx = static_cast<int>(x.cols()), dy = static_cast<int>(y.cols()), dz = static_cast<int>(z.cols());
  const auto eps = kth_distances(joint.data(), n, joint.dim(), cfg.k);

  std::vector<int> xz = range(0, dx), yz = range(dx, dx + dy);
  const auto zc = range(dx + dy, dx + dy + dz);
  xz.insert(xz.end(), zc.begin(), zc.end());
  yz.insert(yz.end(), zc.begin(), zc.end());
  const auto nxz = subspace_counts(joint.columns(xz), n, dx + dz, eps);
  const auto nyz = subspace_counts(joint.columns(yz), n, dy + dz, eps);
  const auto nz = subspace_counts(joint.columns(zc), n, dz, eps);
  double acc = 0.0;
  for (Index p = 0; p < n; ++p) {
    const auto s = static_cast<std::size_t>(p);
    acc += digamma_int(nxz[s] + 1) + digamma_int(nyz[s] + 1) - digamma_int(nz[s] + 1);
  }
  return digamma_int(cfg.k) - acc / static_cast<double>(n);
}

}  // namespace causnet
