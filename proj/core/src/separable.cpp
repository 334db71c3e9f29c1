#include "msalab/separable.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "msalab/green.hpp"
#include "msalab/spectral.hpp"

namespace msalab {

namespace {

Point slice(const Point& p, int from, int count) {
  return Point(p.begin() + from, p.begin() + from + count);
}

Eigen::VectorXd restrict_vector(const Eigen::VectorXd& v, const std::vector<int>& idx) {
  Eigen::VectorXd out(static_cast<int>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out[static_cast<int>(i)] = v[idx[i]];
  return out;
}

Eigen::MatrixXd restrict_rows(const Eigen::MatrixXd& m, const std::vector<int>& idx) {
  Eigen::MatrixXd out(static_cast<int>(idx.size()), m.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<int>(i)) = m.row(idx[i]);
  return out;
}

}  // namespace

SeparableGreenResult separable_green_norm(const FiniteVolumeOperator& factor1,
                                          const FiniteVolumeOperator& factor2, double energy,
                                          const Point& source, const Point& target,
                                          double mode_cutoff) {
  if (factor1.box().particles != 1 || factor2.box().particles != 1) {
    throw std::invalid_argument("separable_green_norm: factors must be single-particle operators");
  }
  const int d1 = factor1.box().dim();
  const int d2 = factor2.box().dim();
  if (static_cast<int>(source.size()) != d1 + d2 || static_cast<int>(target.size()) != d1 + d2) {
    throw std::invalid_argument("separable_green_norm: points must concatenate both factors' coordinates");
  }
  if (!(mode_cutoff >= 0.0)) throw std::invalid_argument("separable_green_norm: mode cutoff must be nonnegative");

  const DenseEigs e1 = dense_eigensystem(factor1);
  const DenseEigs e2 = dense_eigensystem(factor2);

  const auto retained_below = [&](const DenseEigs& e) {
    int c = 0;
    for (int a = 0; a < e.values.size(); ++a) {
      if (e.values[a] <= energy + mode_cutoff) ++c;
    }
    return c;
  };

  // Expand along the cheaper side; the Kronecker order does not matter for
  // the block's spectral norm.
  const bool along_first = retained_below(e1) <= retained_below(e2);
  const FiniteVolumeOperator& fa = along_first ? factor1 : factor2;
  const FiniteVolumeOperator& fb = along_first ? factor2 : factor1;
  const DenseEigs& ea = along_first ? e1 : e2;
  const DenseEigs& eb = along_first ? e2 : e1;
  const Point sa = along_first ? slice(source, 0, d1) : slice(source, d1, d2);
  const Point sb = along_first ? slice(source, d1, d2) : slice(source, 0, d1);
  const Point ta = along_first ? slice(target, 0, d1) : slice(target, d1, d2);
  const Point tb = along_first ? slice(target, d1, d2) : slice(target, 0, d1);

  const std::vector<int> ca_s = fa.cell_indices(sa);
  const std::vector<int> ca_t = fa.cell_indices(ta);
  const std::vector<int> cb_s = fb.cell_indices(sb);
  const std::vector<int> cb_t = fb.cell_indices(tb);
  if (ca_s.empty() || ca_t.empty() || cb_s.empty() || cb_t.empty()) {
    throw std::invalid_argument("separable_green_norm: a cell misses the grid");
  }

  const Eigen::MatrixXd psi_s = restrict_rows(eb.vectors, cb_s);
  const Eigen::MatrixXd psi_t = restrict_rows(eb.vectors, cb_t);

  const int ra = static_cast<int>(ca_s.size());
  const int ca = static_cast<int>(ca_t.size());
  const int rb = static_cast<int>(cb_s.size());
  const int cb = static_cast<int>(cb_t.size());

  SeparableGreenResult res;
  res.side = along_first ? 1 : 2;
  res.total_modes = static_cast<int>(ea.values.size());

  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(ra * rb, ca * cb);
  for (int a = 0; a < ea.values.size(); ++a) {
    const double shifted = energy - ea.values[a];
    if (ea.values[a] <= energy + mode_cutoff) {
      // Exact resolvent of the other factor at the shifted energy,
      // restricted to the source/target cells.
      Eigen::VectorXd inv_den(eb.values.size());
      for (int b = 0; b < eb.values.size(); ++b) {
        const double den = eb.values[b] - shifted;
        if (std::abs(den) < 1e-12)
          throw NearSingularError("separable_green_norm: shifted energy hits the factor spectrum");
        inv_den[b] = 1.0 / den;
      }
      const Eigen::MatrixXd b_block = psi_s * inv_den.asDiagonal() * psi_t.transpose();
      const Eigen::VectorXd p = restrict_vector(ea.vectors.col(a), ca_s);
      const Eigen::VectorXd q = restrict_vector(ea.vectors.col(a), ca_t);
      for (int i = 0; i < ra; ++i) {
        for (int j = 0; j < ca; ++j) {
          block.block(i * rb, j * cb, rb, cb) += p[i] * q[j] * b_block;
        }
      }
      ++res.retained;
    } else {
      double dist = std::abs(eb.values[0] - shifted);
      for (int b = 1; b < eb.values.size(); ++b) dist = std::min(dist, std::abs(eb.values[b] - shifted));
      if (dist < 1e-12)
        throw NearSingularError("separable_green_norm: discarded mode sits on the factor spectrum");
      const double pnorm = restrict_vector(ea.vectors.col(a), ca_s).norm();
      const double qnorm = restrict_vector(ea.vectors.col(a), ca_t).norm();
      res.tail_bound += pnorm * qnorm / dist;
    }
  }

  res.value = spectral_norm(block);
  return res;
}

}  // namespace msalab
