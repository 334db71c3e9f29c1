#include "msalab/operator.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace msalab {

void validate(const Mesh& mesh) {
  if (mesh.spacing <= 0) throw std::invalid_argument("Mesh: spacing h must be positive");
  const double ratio = 2.0 / mesh.spacing;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 || rounded < 2 ||
      std::fmod(rounded, 2.0) != 0.0)
    throw std::invalid_argument("Mesh: 2/h must be an even positive integer");
  if (mesh.mode == MeshMode::TightBinding && mesh.spacing != 1.0)
    throw std::invalid_argument("Mesh: tight-binding mode fixes h = 1");
}

int Mesh::points_per_axis(int radius) const {
  if (mode == MeshMode::TightBinding) return 2 * radius + 1;
  const int per_unit = static_cast<int>(std::round(1.0 / spacing));
  return 2 * radius * per_unit - 1;
}

double Mesh::axis_offset(int radius, int j) const {
  if (mode == MeshMode::TightBinding) return static_cast<double>(j - radius);
  return -radius + (j + 1) * spacing;
}

FiniteVolumeOperator FiniteVolumeOperator::assemble(const LatticeBox& box, const Mesh& mesh,
                                                    const PotentialFn& potential) {
  validate(mesh);
  FiniteVolumeOperator op;
  op.box_ = box;
  op.mesh_ = mesh;

  const int dim = box.dim();
  const int per_axis = mesh.points_per_axis(box.radius);
  op.per_axis_ = per_axis;
  std::int64_t total = 1;
  for (int i = 0; i < dim; ++i) total *= per_axis;
  if (total > (1 << 24)) throw std::invalid_argument("assemble: grid too large");
  const int n = static_cast<int>(total);

  const double h = mesh.spacing;
  const double hop = -1.0 / (2.0 * h * h);
  const double diag_kin = static_cast<double>(dim) / (h * h);

  op.potential_.resize(n);
  std::vector<double> x(dim);
  std::vector<int> idx(dim, 0);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(n) * (2 * dim + 1));

  std::vector<std::int64_t> stride(dim);
  stride[dim - 1] = 1;
  for (int i = dim - 2; i >= 0; --i) stride[i] = stride[i + 1] * per_axis;

  for (int row = 0; row < n; ++row) {
    for (int i = 0; i < dim; ++i)
      x[i] = box.center[i] + mesh.axis_offset(box.radius, idx[i]);
    const double v = potential(x);
    op.potential_[row] = v;
    trip.emplace_back(row, row, diag_kin + v);
    for (int i = 0; i < dim; ++i) {
      if (idx[i] > 0) trip.emplace_back(row, row - static_cast<int>(stride[i]), hop);
      if (idx[i] < per_axis - 1) trip.emplace_back(row, row + static_cast<int>(stride[i]), hop);
    }
    int axis = dim - 1;
    while (axis >= 0) {
      if (idx[axis] < per_axis - 1) {
        ++idx[axis];
        break;
      }
      idx[axis] = 0;
      --axis;
    }
    if (axis < 0 && row != n - 1) throw std::logic_error("assemble: index walk out of sync");
  }

  op.matrix_.resize(n, n);
  op.matrix_.setFromTriplets(trip.begin(), trip.end());
  op.matrix_.makeCompressed();

  double bound = 0.0;
  for (int row = 0; row < n; ++row) {
    double s = std::abs(diag_kin + op.potential_[row]);
    s += 2.0 * dim * std::abs(hop);
    bound = std::max(bound, s);
  }
  op.norm_bound_ = bound;
  return op;
}

double FiniteVolumeOperator::quadrature_weight() const {
  return std::pow(mesh_.spacing, box_.dim());
}

std::vector<double> FiniteVolumeOperator::grid_coords(int idx) const {
  const int dim = box_.dim();
  std::vector<double> x(dim);
  int rem = idx;
  for (int i = dim - 1; i >= 0; --i) {
    const int j = rem % per_axis_;
    rem /= per_axis_;
    x[i] = box_.center[i] + mesh_.axis_offset(box_.radius, j);
  }
  return x;
}

std::vector<int> FiniteVolumeOperator::cell_indices(const Point& v) const {
  if (v.size() != box_.center.size())
    throw std::invalid_argument("cell_indices: dimension mismatch");
  const int dim = box_.dim();
  // per-axis ranges of grid indices with |x_i - v_i| <= 1
  std::vector<std::vector<int>> axis_hits(dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < per_axis_; ++j) {
      const double xi = box_.center[i] + mesh_.axis_offset(box_.radius, j);
      if (std::abs(xi - v[i]) <= 1.0 + 1e-12) axis_hits[i].push_back(j);
    }
    if (axis_hits[i].empty()) return {};
  }
  std::vector<int> out;
  std::vector<std::size_t> pos(dim, 0);
  while (true) {
    int idx = 0;
    for (int i = 0; i < dim; ++i) idx = idx * per_axis_ + axis_hits[i][pos[i]];
    out.push_back(idx);
    int axis = dim - 1;
    while (axis >= 0) {
      if (pos[axis] + 1 < axis_hits[axis].size()) {
        ++pos[axis];
        break;
      }
      pos[axis] = 0;
      --axis;
    }
    if (axis < 0) break;
  }
  return out;
}

Eigen::SparseMatrix<double> FiniteVolumeOperator::shifted(double energy) const {
  Eigen::SparseMatrix<double> m = matrix_;
  for (int k = 0; k < m.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it)
      if (it.row() == it.col()) it.valueRef() -= energy;
  return m;
}

void FiniteVolumeOperator::dump_coordinate(std::ostream& os) const {
  char buf[64];
  for (int k = 0; k < matrix_.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(matrix_, k); it; ++it) {
      std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", static_cast<int>(it.row()) + 1,
                    static_cast<int>(it.col()) + 1, it.value());
      os << buf;
    }
}

PotentialFn alloy_potential(const AmplitudeField& field, const BumpProfile& profile,
                            const InteractionPotential& interaction, int dim_per_particle,
                            int particles) {
  if (particles == 1) {
    return [field, profile](const std::vector<double>& x) {
      return potential_value(field, profile, x);
    };
  }
  return [field, profile, interaction, dim_per_particle](const std::vector<double>& x) {
    std::vector<double> x1(x.begin(), x.begin() + dim_per_particle);
    std::vector<double> x2(x.begin() + dim_per_particle, x.end());
    double v = potential_value(field, profile, x1) + potential_value(field, profile, x2);
    if (interaction.strength > 0) v += interaction.value(x1, x2);
    return v;
  };
}

}  // namespace msalab
