#include "msalab/spectral.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>

#include "msalab/rng.hpp"

namespace msalab {

double SpectrumWindow::dist(double energy) const {
  if (energy >= cutoff)
    throw std::invalid_argument("SpectrumWindow::dist: energy must lie below the cutoff");
  double d = cutoff - energy;
  for (double v : values) d = std::min(d, std::abs(v - energy));
  return d;
}

int eigenvalue_count_below(const FiniteVolumeOperator& op, double c) {
  // Sylvester inertia: negative pivots of LDLT(H - cI). The factorization has
  // no pivoting, so nudge the shift when it lands on a degenerate pivot; the
  // callers only need the count at an uncritical cutoff.
  double shift = c;
  for (int attempt = 0; attempt < 6; ++attempt) {
    Eigen::SparseMatrix<double> m = op.shifted(shift);
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    ldlt.compute(m);
    if (ldlt.info() == Eigen::Success) {
      const auto& d = ldlt.vectorD();
      bool degenerate = false;
      const double floor = 1e-13 * std::max(1.0, op.norm_bound());
      int count = 0;
      for (int i = 0; i < d.size(); ++i) {
        if (std::abs(d[i]) < floor) degenerate = true;
        if (d[i] < 0) ++count;
      }
      if (!degenerate) return count;
    }
    shift = c + (attempt + 1) * 1e-9 * std::max(1.0, std::abs(c));
  }
  throw SolverError("eigenvalue_count_below: inertia factorization failed");
}

DenseEigs dense_eigensystem(const FiniteVolumeOperator& op, int size_limit) {
  if (op.size() > size_limit)
    throw std::invalid_argument("dense_eigensystem: problem too large for the dense path");
  Eigen::MatrixXd dense = Eigen::MatrixXd(op.matrix());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
  if (es.info() != Eigen::Success) throw SolverError("dense_eigensystem: solver failed");
  DenseEigs out;
  out.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + op.size());
  out.vectors = es.eigenvectors();
  return out;
}

namespace {

struct RitzPair {
  double value;
  Eigen::VectorXd vector;
};

// Shift-invert Lanczos with full reorthogonalization against both the current
// basis and previously converged (deflated) vectors. Returns residual-checked
// eigenpairs of H below `upper`, smallest first.
class ShiftInvertLanczos {
 public:
  ShiftInvertLanczos(const FiniteVolumeOperator& op, const SpectralOptions& opts)
      : op_(op), opts_(opts) {
    // definite shift: H + sigma I with sigma pushing the whole spectrum above 1
    double lower = 0.0;
    {
      // crude Gershgorin lower bound
      lower = -op.norm_bound();
    }
    sigma_ = 1.0 - std::min(0.0, lower);
    Eigen::SparseMatrix<double> m = op.shifted(-sigma_);
    ldlt_.compute(m);
    if (ldlt_.info() != Eigen::Success)
      throw SolverError("lanczos: definite factorization failed");
  }

  // Gather eigenpairs with value < upper until `needed` of them converge (or
  // the iteration budget runs out). Converged pairs accumulate in found_.
  void run(double upper, int needed, std::uint64_t seed_salt) {
    for (int round = 0; round < opts_.deflation_rounds; ++round) {
      if (static_cast<int>(found_.size()) >= needed) return;
      iterate(upper, needed, rng::derive(0x9ddfea08eb382d69ULL, "lanczos-start", seed_salt, round));
    }
  }

  std::vector<RitzPair>& found() { return found_; }

 private:
  void iterate(double upper, int needed, std::uint64_t key) {
    const int n = op_.size();
    const int maxdim = std::min(n, opts_.max_lanczos_dim);
    std::vector<Eigen::VectorXd> basis;
    std::vector<double> alpha, beta;

    Eigen::VectorXd v(n);
    rng::Stream st(key);
    for (int i = 0; i < n; ++i) v[i] = st.next_uniform(-1.0, 1.0);
    orthogonalize(v, basis);
    double nv = v.norm();
    if (nv < 1e-300) return;
    v /= nv;
    basis.push_back(v);

    const double restol = opts_.residual_tol * std::max(1.0, op_.norm_bound());
    Eigen::VectorXd w;
    for (int j = 0; j < maxdim; ++j) {
      w = ldlt_.solve(basis.back());
      const double a = basis.back().dot(w);
      alpha.push_back(a);
      orthogonalize(w, basis);
      orthogonalize(w, basis);  // second pass keeps the basis clean
      const double b = w.norm();
      // check convergence every few steps once the subspace can hold the answer
      if ((j >= 8 && j % 4 == 0) || b < 1e-300 || j == maxdim - 1) {
        if (extract(basis, alpha, beta, upper, needed, restol)) return;
      }
      if (b < 1e-300) return;  // invariant subspace exhausted
      beta.push_back(b);
      basis.push_back(w / b);
    }
  }

  // Rayleigh-Ritz on the tridiagonal; harvest pairs below `upper` whose true
  // residual passes. Returns true when enough pairs are in hand.
  bool extract(const std::vector<Eigen::VectorXd>& basis, const std::vector<double>& alpha,
               const std::vector<double>& beta, double upper, int needed, double restol) {
    const int m = static_cast<int>(alpha.size());
    if (m == 0) return false;
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      tri(i, i) = alpha[i];
      if (i + 1 < m && i < static_cast<int>(beta.size())) {
        tri(i, i + 1) = beta[i];
        tri(i + 1, i) = beta[i];
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    if (es.info() != Eigen::Success) return false;

    // largest Ritz values of (H + sigma)^{-1} map to the smallest of H
    std::vector<RitzPair> fresh;
    for (int i = m - 1; i >= 0; --i) {
      const double mu = es.eigenvalues()[i];
      if (mu <= 0) continue;
      const double lam = 1.0 / mu - sigma_;
      if (lam >= upper) break;  // descending mu means ascending lambda
      Eigen::VectorXd y(op_.size());
      y.setZero();
      for (int jj = 0; jj < m; ++jj) y += es.eigenvectors()(jj, i) * basis[jj];
      const double ny = y.norm();
      if (ny < 1e-300) continue;
      y /= ny;
      const double resid = (op_.matrix() * y - lam * y).norm();
      if (resid <= restol) fresh.push_back({lam, std::move(y)});
    }
    if (fresh.empty()) return false;

    // merge with previously found pairs, dropping duplicates of the same value
    // and direction
    for (auto& p : fresh) {
      bool dup = false;
      for (const auto& q : found_) {
        if (std::abs(q.value - p.value) < 1e-7 * std::max(1.0, op_.norm_bound()) &&
            std::abs(q.vector.dot(p.vector)) > 0.9)
          dup = true;
      }
      if (!dup) found_.push_back(std::move(p));
    }
    std::sort(found_.begin(), found_.end(),
              [](const RitzPair& a, const RitzPair& b) { return a.value < b.value; });
    return static_cast<int>(found_.size()) >= needed;
  }

  void orthogonalize(Eigen::VectorXd& w, const std::vector<Eigen::VectorXd>& basis) {
    for (const auto& q : found_) w -= q.vector.dot(w) * q.vector;
    for (const auto& b : basis) w -= b.dot(w) * b;
  }

  const FiniteVolumeOperator& op_;
  const SpectralOptions& opts_;
  double sigma_ = 1.0;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
  std::vector<RitzPair> found_;
};

}  // namespace

SpectrumWindow spectrum_window(const FiniteVolumeOperator& op, double cutoff,
                               bool want_vectors, const SpectralOptions& opts) {
  SpectrumWindow win;
  win.cutoff = cutoff;
  win.certified_count = eigenvalue_count_below(op, cutoff);

  if (win.certified_count == 0) {
    win.certified = true;
    win.vectors_available = want_vectors;
    return win;
  }

  if (op.size() <= opts.dense_cutoff) {
    DenseEigs d = dense_eigensystem(op, opts.dense_cutoff);
    std::vector<int> keep;
    for (int i = 0; i < static_cast<int>(d.values.size()); ++i)
      if (d.values[i] < cutoff) keep.push_back(i);
    win.values.reserve(keep.size());
    for (int i : keep) win.values.push_back(d.values[i]);
    if (want_vectors) {
      win.vectors.resize(op.size(), static_cast<int>(keep.size()));
      for (std::size_t j = 0; j < keep.size(); ++j) win.vectors.col(j) = d.vectors.col(keep[j]);
      win.vectors_available = true;
    }
    win.certified = static_cast<int>(win.values.size()) == win.certified_count;
    return win;
  }

  ShiftInvertLanczos lan(op, opts);
  lan.run(cutoff, win.certified_count, rng::combine(0x51ed270b3a4b1c2dULL, op.size()));
  auto& pairs = lan.found();
  win.values.reserve(pairs.size());
  for (auto& p : pairs)
    if (p.value < cutoff) win.values.push_back(p.value);
  if (want_vectors) {
    int cols = 0;
    for (auto& p : pairs)
      if (p.value < cutoff) ++cols;
    win.vectors.resize(op.size(), cols);
    int j = 0;
    for (auto& p : pairs)
      if (p.value < cutoff) win.vectors.col(j++) = p.vector;
    win.vectors_available = true;
  }
  win.certified = static_cast<int>(win.values.size()) == win.certified_count;
  return win;
}

SmallestEigs smallest_eigenvalues(const FiniteVolumeOperator& op, int k, bool want_vectors,
                                  const SpectralOptions& opts) {
  if (k < 1 || k > op.size()) throw std::invalid_argument("smallest_eigenvalues: bad k");
  SmallestEigs out;
  if (op.size() <= opts.dense_cutoff) {
    DenseEigs d = dense_eigensystem(op, opts.dense_cutoff);
    out.values.assign(d.values.begin(), d.values.begin() + k);
    if (want_vectors) {
      out.vectors = d.vectors.leftCols(k);
      out.vectors_available = true;
    }
    return out;
  }
  // bracket the k-th eigenvalue by inertia bisection, then harvest the window
  double lo = -op.norm_bound() - 1.0, hi = op.norm_bound() + 1.0;
  for (int it = 0; it < 60 && hi - lo > 1e-10 * std::max(1.0, op.norm_bound()); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (eigenvalue_count_below(op, mid) >= k)
      hi = mid;
    else
      lo = mid;
  }
  SpectrumWindow win = spectrum_window(op, hi + 1e-8 * std::max(1.0, std::abs(hi)),
                                       want_vectors, opts);
  if (static_cast<int>(win.values.size()) < k)
    throw SolverError("smallest_eigenvalues: window harvest came up short");
  out.values.assign(win.values.begin(), win.values.begin() + k);
  if (want_vectors) {
    out.vectors = win.vectors.leftCols(k);
    out.vectors_available = true;
  }
  return out;
}

}  // namespace msalab
