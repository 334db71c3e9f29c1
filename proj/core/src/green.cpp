#include "msalab/green.hpp"

#include <cmath>

#include "msalab/rng.hpp"

namespace msalab {

GreenSolver::GreenSolver(const FiniteVolumeOperator& op, double energy)
    : op_(op), energy_(energy), shifted_(op.shifted(energy)) {
  lu_.compute(shifted_);
  if (lu_.info() != Eigen::Success)
    throw NearSingularError("green: factorization of H - E failed");

  // inverse power probe for 1/dist(E, spectrum)
  const int n = op.size();
  Eigen::VectorXd v(n);
  rng::Stream st(rng::combine(0x6a09e667f3bcc909ULL, static_cast<std::uint64_t>(n)));
  for (int i = 0; i < n; ++i) v[i] = st.next_uniform(-1.0, 1.0);
  v.normalize();
  double growth = 0.0;
  for (int it = 0; it < 3; ++it) {
    Eigen::VectorXd w = lu_.solve(v);
    growth = w.norm();
    if (!std::isfinite(growth) || growth < 1e-300) break;
    v = w / growth;
  }
  inv_norm_ = growth;
  if (!std::isfinite(inv_norm_) || inv_norm_ > 1e12)
    throw NearSingularError("green: energy within ~1e-12 of the spectrum");
}

const std::vector<int>& GreenSolver::cell(const Point& v) {
  auto it = cell_cache_.find(v);
  if (it == cell_cache_.end()) it = cell_cache_.emplace(v, op_.cell_indices(v)).first;
  return it->second;
}

const Eigen::MatrixXd& GreenSolver::cell_columns(const Point& v) {
  auto it = columns_.find(v);
  if (it != columns_.end()) return it->second;

  const std::vector<int>& cols = cell(v);
  if (cols.empty()) throw std::invalid_argument("green: source cell misses the grid");
  const int n = op_.size();
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, static_cast<int>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) rhs(cols[j], static_cast<int>(j)) = 1.0;

  Eigen::MatrixXd x = lu_.solve(rhs);
  // one refinement pass; the factorization is good but E can sit close to
  // the spectrum where the first solve loses digits
  Eigen::MatrixXd resid = rhs - shifted_ * x;
  x += lu_.solve(resid);
  resid = rhs - shifted_ * x;
  const double rel = resid.norm() / std::max(1e-300, rhs.norm());
  if (!(rel < 1e-6) || !x.allFinite())
    throw SolverError("green: cell solve failed the 1e-6 residual target");
  return columns_.emplace(v, std::move(x)).first->second;
}

double GreenSolver::block_norm(const Point& w, const Point& v) {
  const Eigen::MatrixXd& x = cell_columns(v);
  const std::vector<int>& rows = cell(w);
  if (rows.empty()) return 0.0;
  Eigen::MatrixXd block(static_cast<int>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) block.row(static_cast<int>(i)) = x.row(rows[i]);
  return spectral_norm(block);
}

std::vector<double> GreenSolver::norms_against(const std::vector<Point>& targets,
                                               const Point& v) {
  std::vector<double> out;
  out.reserve(targets.size());
  for (const Point& w : targets) out.push_back(block_norm(w, v));
  return out;
}

double spectral_norm(const Eigen::MatrixXd& block) {
  if (block.rows() == 0 || block.cols() == 0) return 0.0;
  if (block.rows() == 1 && block.cols() == 1) return std::abs(block(0, 0));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(block);
  return svd.singularValues()[0];
}

std::vector<double> dense_cell_norms(const FiniteVolumeOperator& op, double energy,
                                     const std::vector<Point>& targets, const Point& source,
                                     int size_limit) {
  if (op.size() > size_limit)
    throw std::invalid_argument("dense_cell_norms: oracle limited to small problems");
  Eigen::MatrixXd dense = Eigen::MatrixXd(op.matrix());
  dense.diagonal().array() -= energy;
  Eigen::MatrixXd inv = dense.inverse();
  const std::vector<int> src = op.cell_indices(source);
  std::vector<double> out;
  out.reserve(targets.size());
  for (const Point& w : targets) {
    const std::vector<int> rows = op.cell_indices(w);
    Eigen::MatrixXd block(static_cast<int>(rows.size()), static_cast<int>(src.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < src.size(); ++j) block(i, j) = inv(rows[i], src[j]);
    out.push_back(spectral_norm(block));
  }
  return out;
}

std::vector<double> cell_norm_profile(const FiniteVolumeOperator& op,
                                      const Eigen::VectorXd& psi) {
  if (psi.size() != op.size())
    throw std::invalid_argument("cell_norm_profile: vector length mismatch");
  const double w = op.quadrature_weight();
  std::vector<double> out;
  const std::vector<Point> cells = lattice_points(op.box());
  out.reserve(cells.size());
  for (const Point& v : cells) {
    double mass = 0.0;
    for (int idx : op.cell_indices(v)) mass += psi[idx] * psi[idx];
    out.push_back(std::sqrt(w * mass));
  }
  return out;
}

}  // namespace msalab
