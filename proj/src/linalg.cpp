#include "hhf/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

namespace hhf {

namespace {

CVec random_unit(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  CVec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = cplx(normal(rng), normal(rng));
  return v / v.norm();
}

struct UnionFind {
  std::vector<Eigen::Index> parent;
  explicit UnionFind(Eigen::Index n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  }
  Eigen::Index find(Eigen::Index x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(Eigen::Index a, Eigen::Index b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
};

void check_dense(double sparse_value, double dense_value, const char* what) {
  if (std::abs(sparse_value - dense_value) > 1e-8 * std::max(1.0, std::abs(dense_value))) {
    std::ostringstream s;
    s.precision(17);
    s << what << ": iterative value " << sparse_value << " disagrees with dense value " << dense_value;
    throw std::runtime_error(s.str());
  }
}

SpMat restrict_to(const SpMat& a, const std::vector<Eigen::Index>& idx) {
  std::vector<Eigen::Index> pos(static_cast<std::size_t>(a.rows()), -1);
  for (std::size_t i = 0; i < idx.size(); ++i) pos[static_cast<std::size_t>(idx[i])] = static_cast<Eigen::Index>(i);
  std::vector<Eigen::Triplet<cplx>> t;
  for (Eigen::Index r : idx)
    for (SpMat::InnerIterator it(a, r); it; ++it) {
      const auto c = pos[static_cast<std::size_t>(it.col())];
      if (c >= 0) t.emplace_back(pos[static_cast<std::size_t>(r)], c, it.value());
    }
  SpMat out(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
  out.setFromTriplets(t.begin(), t.end());
  out.makeCompressed();
  return out;
}

// Diagonal blocks of A over a partition of its coordinates.
std::vector<SpMat> split_blocks(const SpMat& a, const std::vector<std::vector<Eigen::Index>>& comps) {
  std::vector<Eigen::Index> local(static_cast<std::size_t>(a.rows()), -1);
  for (const auto& c : comps)
    for (std::size_t i = 0; i < c.size(); ++i) local[static_cast<std::size_t>(c[i])] = static_cast<Eigen::Index>(i);
  std::vector<SpMat> out;
  out.reserve(comps.size());
  std::vector<Eigen::Triplet<cplx>> t;
  for (const auto& c : comps) {
    t.clear();
    for (Eigen::Index r : c)
      for (SpMat::InnerIterator it(a, r); it; ++it)
        t.emplace_back(local[static_cast<std::size_t>(r)], local[static_cast<std::size_t>(it.col())], it.value());
    SpMat b(static_cast<Eigen::Index>(c.size()), static_cast<Eigen::Index>(c.size()));
    b.setFromTriplets(t.begin(), t.end());
    b.makeCompressed();
    out.push_back(std::move(b));
  }
  return out;
}

// lambda_max(Re(e^{i theta} B)) on one block, dense or iterative.
class Block {
 public:
  explicit Block(SpMat b, Eigen::Index dense_limit) : sparse_(std::move(b)) {
    if (sparse_.rows() <= dense_limit) {
      dense_ = CMat(sparse_);
      is_dense_ = true;
    } else {
      adj_ = sparse_.adjoint();
    }
  }

  Eigen::Index size() const { return sparse_.rows(); }

  double value(double theta, std::uint64_t seed) {
    const cplx ph = std::polar(1.0, theta);
    if (size() == 1) return (ph * sparse_.coeff(0, 0)).real();
    if (is_dense_) {
      const CMat h = 0.5 * (ph * dense_ + std::conj(ph) * dense_.adjoint());
      return Eigen::SelfAdjointEigenSolver<CMat>(h, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
    }
    const MatVec op = [&](const CVec& x, CVec& y) {
      y = 0.5 * (ph * (sparse_ * x) + std::conj(ph) * (adj_ * x));
    };
    CVec start = random_unit(size(), seed);
    if (warm_.size() == size()) start = (warm_ + 1e-3 * start).normalized();
    auto est = lanczos_largest(op, size(), {}, &start);
    warm_ = est.vector;
    return est.value;
  }

 private:
  SpMat sparse_;
  SpMat adj_;
  CMat dense_;
  bool is_dense_ = false;
  CVec warm_;
};

struct BlockRadius {
  double grid_max = -1e300;
  double grid_theta = 0.0;
  double refined = -1e300;
  double refined_theta = 0.0;
};

BlockRadius grid_then_refine(Block& blk, int theta_points, bool refine, std::uint64_t seed,
                             const BlockRadius* coarse = nullptr) {
  BlockRadius r;
  const double step = 2.0 * std::numbers::pi / theta_points;
  if (coarse) r = *coarse;
  for (int i = 0; i < theta_points && !coarse; ++i) {
    const double th = step * i;
    const double v = blk.value(th, seed + static_cast<std::uint64_t>(i));
    if (v > r.grid_max) {
      r.grid_max = v;
      r.grid_theta = th;
    }
  }
  r.refined = r.grid_max;
  r.refined_theta = r.grid_theta;
  if (!refine) return r;
  // golden-section search around the grid maximiser
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = r.grid_theta - step;
  double b = r.grid_theta + step;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = blk.value(c, seed + 1001);
  double fd = blk.value(d, seed + 1002);
  for (int it = 0; it < 30; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = blk.value(c, seed + 1003 + static_cast<std::uint64_t>(it));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = blk.value(d, seed + 1003 + static_cast<std::uint64_t>(it));
    }
  }
  const double best = std::max(fc, fd);
  if (best > r.refined) {
    r.refined = best;
    r.refined_theta = fc > fd ? c : d;
  }
  return r;
}

RadiusResult radius_over_blocks(std::vector<Block>& blocks, int theta_points) {
  RadiusResult res;
  res.components = static_cast<int>(blocks.size());
  std::vector<BlockRadius> coarse(blocks.size());
  double grid_max = 0.0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    coarse[i] = grid_then_refine(blocks[i], theta_points, false, 17 + 7919 * i);
    grid_max = std::max(grid_max, coarse[i].grid_max);
  }
  // refine the blocks whose grid bound could still carry the maximum
  std::vector<std::size_t> order(blocks.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return coarse[a].grid_max > coarse[b].grid_max; });
  const double sec = 1.0 / std::cos(std::numbers::pi / theta_points);
  double best = 0.0;
  double best_theta = 0.0;
  for (std::size_t i : order) {
    if (coarse[i].grid_max * sec < best) break;
    const auto r = grid_then_refine(blocks[i], theta_points, true, 17 + 7919 * i, &coarse[i]);
    if (r.refined > best) {
      best = r.refined;
      best_theta = r.refined_theta;
    }
  }
  res.estimate = best;
  res.theta = best_theta;
  res.upper_bound = std::max(best, grid_max * sec);
  return res;
}

}  // namespace

EigEstimate lanczos_largest(const MatVec& op, Eigen::Index n, const LanczosOptions& opt, const CVec* start) {
  if (n < 1) throw std::invalid_argument("empty operator");
  EigEstimate out;
  CVec v = start ? CVec(*start) : random_unit(n, opt.seed);
  if (v.norm() == 0.0) v = random_unit(n, opt.seed);
  v.normalize();
  const Eigen::Index k = std::min<Eigen::Index>(opt.krylov, n);
  CMat basis(n, k);
  CVec w(n);
  double last = 0.0;
  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    std::vector<double> alpha, beta;
    basis.col(0) = v;
    Eigen::Index m = 0;
    bool invariant = false;
    for (Eigen::Index i = 0; i < k; ++i) {
      op(basis.col(i), w);
      ++out.matvecs;
      alpha.push_back(basis.col(i).dot(w).real());
      for (int pass = 0; pass < 2; ++pass) {
        const CVec proj = basis.leftCols(i + 1).adjoint() * w;
        w -= basis.leftCols(i + 1) * proj;
      }
      const double b = w.norm();
      m = i + 1;
      const double scale = std::max(1.0, std::abs(alpha.back()));
      if (b <= 1e-13 * scale) {
        invariant = true;
        beta.push_back(0.0);
        break;
      }
      beta.push_back(b);
      if (i + 1 < k) basis.col(i + 1) = w / b;
    }
    RMat t = RMat::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      t(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    const Eigen::SelfAdjointEigenSolver<RMat> es(t);
    const double theta = es.eigenvalues()(m - 1);
    const RVec s = es.eigenvectors().col(m - 1);
    last = theta;
    const double resid = invariant ? 0.0 : std::abs(beta.back() * s(m - 1));
    v = basis.leftCols(m) * s.cast<cplx>();
    v.normalize();
    if (invariant || m == n || resid <= opt.tol * std::max(1.0, std::abs(theta))) {
      out.value = theta;
      out.vector = v;
      return out;
    }
  }
  throw NonConvergence("Lanczos did not converge; last Rayleigh quotient " + std::to_string(last), last);
}

namespace {

constexpr Eigen::Index kDenseBlock = 512;

// Largest |eigenvalue| (Hermitian) or largest singular value of one block.
double block_norm(const SpMat& b, bool hermitian, double tol) {
  const auto n = b.rows();
  if (b.nonZeros() == 0) return 0.0;
  if (n == 1) return std::abs(b.coeff(0, 0));
  if (n <= kDenseBlock) {
    const CMat d(b);
    if (hermitian) return Eigen::SelfAdjointEigenSolver<CMat>(d, Eigen::EigenvaluesOnly).eigenvalues().cwiseAbs().maxCoeff();
    return Eigen::BDCSVD<CMat>(d).singularValues()(0);
  }
  LanczosOptions opt;
  opt.tol = tol;
  if (hermitian) {
    const MatVec plus = [&](const CVec& x, CVec& y) { y = b * x; };
    const MatVec minus = [&](const CVec& x, CVec& y) { y = -(b * x); };
    return std::max(std::abs(lanczos_largest(plus, n, opt).value), std::abs(lanczos_largest(minus, n, opt).value));
  }
  const SpMat adj = b.adjoint();
  const MatVec gram = [&](const CVec& x, CVec& y) { y = adj * (b * x); };
  return std::sqrt(std::max(0.0, lanczos_largest(gram, n, opt).value));
}

}  // namespace

NormResult operator_norm_detailed(const SparseOperator& a, double tol) {
  NormResult r;
  const auto n = a.dim();
  // A maps each connected component of the graph of A + A* into itself.
  for (const auto& b : split_blocks(a.matrix, sparsity_components({&a.matrix}, n)))
    r.value = std::max(r.value, block_norm(b, a.hermitian, tol));
  if (n <= kDenseCheckDim) {
    const CMat d(a.matrix);
    if (a.hermitian)
      r.dense = Eigen::SelfAdjointEigenSolver<CMat>(d, Eigen::EigenvaluesOnly).eigenvalues().cwiseAbs().maxCoeff();
    else
      r.dense = Eigen::BDCSVD<CMat>(d).singularValues()(0);
    check_dense(r.value, *r.dense, "operator norm");
  }
  return r;
}

double operator_norm(const SparseOperator& a, double tol) { return operator_norm_detailed(a, tol).value; }

double min_eigenvalue(const SparseOperator& a, double tol) {
  LanczosOptions opt;
  opt.tol = tol;
  const MatVec minus = [&](const CVec& x, CVec& y) { y = -(a.matrix * x); };
  const double v = a.matrix.nonZeros() ? -lanczos_largest(minus, a.dim(), opt).value : 0.0;
  if (a.dim() <= kDenseCheckDim) {
    const double d = Eigen::SelfAdjointEigenSolver<CMat>(CMat(a.matrix), Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
    check_dense(v, d, "smallest eigenvalue");
  }
  return v;
}

std::vector<std::vector<Eigen::Index>> sparsity_components(const std::vector<const SpMat*>& mats, Eigen::Index n) {
  UnionFind uf(n);
  for (const SpMat* m : mats)
    for (Eigen::Index r = 0; r < m->outerSize(); ++r)
      for (SpMat::InnerIterator it(*m, r); it; ++it) uf.unite(it.row(), it.col());
  std::vector<std::vector<Eigen::Index>> comps;
  std::vector<Eigen::Index> slot(static_cast<std::size_t>(n), -1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto root = uf.find(i);
    auto& s = slot[static_cast<std::size_t>(root)];
    if (s < 0) {
      s = static_cast<Eigen::Index>(comps.size());
      comps.emplace_back();
    }
    comps[static_cast<std::size_t>(s)].push_back(i);
  }
  return comps;
}

RadiusResult numerical_radius(const SparseOperator& a, const std::vector<char>& keep, int theta_points) {
  if (theta_points < 16) throw std::invalid_argument("at least 16 angles required");
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < a.dim(); ++i)
    if (keep.empty() || keep[static_cast<std::size_t>(i)]) idx.push_back(i);
  if (idx.empty()) throw std::invalid_argument("empty restriction");
  const SpMat b = restrict_to(a.matrix, idx);
  const auto comps = sparsity_components({&b}, b.rows());
  auto parts = split_blocks(b, comps);

  RadiusResult res;
  if (a.hermitian) {
    // w(A) = ||A|| for Hermitian A; no angular search needed
    res.components = static_cast<int>(parts.size());
    for (const auto& p : parts) res.estimate = std::max(res.estimate, block_norm(p, true, 1e-11));
    res.upper_bound = res.estimate;
  } else {
    std::vector<Block> blocks;
    blocks.reserve(parts.size());
    for (auto& p : parts) blocks.emplace_back(std::move(p), 256);
    res = radius_over_blocks(blocks, theta_points);
  }

  if (b.rows() <= kDenseCheckDim) {
    std::vector<Block> whole;
    whole.emplace_back(b, kDenseCheckDim);
    const auto dense = radius_over_blocks(whole, theta_points);
    res.dense = dense.estimate;
    check_dense(res.estimate, dense.estimate, "numerical radius");
  }
  return res;
}

SandwichedOperator sandwich(const SparseOperator& a, const SparseOperator& w, double zero_tol) {
  const auto n = w.dim();
  if (a.dim() != n) throw std::invalid_argument("dimension mismatch");
  std::vector<Eigen::Triplet<cplx>> t;
  SandwichedOperator out;
  for (const auto& c : sparsity_components({&w.matrix}, n)) {
    if (c.size() == 1) {
      const double v = w.matrix.coeff(c[0], c[0]).real();
      if (v < -zero_tol) throw std::invalid_argument("weight operator is not positive semidefinite");
      if (v > zero_tol) {
        t.emplace_back(c[0], c[0], cplx(1.0 / std::sqrt(v)));
        out.basis.push_back(c[0]);
      }
      continue;
    }
    const CMat blk(restrict_to(w.matrix, c));
    const Eigen::SelfAdjointEigenSolver<CMat> es(blk);
    if (es.eigenvalues().minCoeff() < -zero_tol) throw std::invalid_argument("weight operator is not positive semidefinite");
    CMat s = CMat::Zero(blk.rows(), blk.cols());
    bool any = false;
    for (Eigen::Index k = 0; k < blk.rows(); ++k) {
      const double lam = es.eigenvalues()(k);
      if (lam <= zero_tol) continue;
      any = true;
      s += (1.0 / std::sqrt(lam)) * es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
    }
    if (!any) continue;
    for (std::size_t i = 0; i < c.size(); ++i) {
      out.basis.push_back(c[i]);
      for (std::size_t j = 0; j < c.size(); ++j) {
        const cplx v = s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (std::abs(v) > 1e-15) t.emplace_back(c[i], c[j], v);
      }
    }
  }
  std::sort(out.basis.begin(), out.basis.end());
  SpMat s(n, n);
  s.setFromTriplets(t.begin(), t.end());
  SpMat full = (s * a.matrix).pruned();
  full = (full * s).pruned();
  out.op.matrix = restrict_to(full, out.basis);
  out.op.hermitian = a.hermitian;
  return out;
}

}  // namespace hhf
