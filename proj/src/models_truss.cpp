#include "uq/models/truss.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <stdexcept>

namespace uq {

TrussGeometry default_truss_geometry() {
  TrussGeometry g;
  g.nodes.resize(13, 2);
  // bottom chord 0..6 at y=0, top chord 7..12 at y=2
  for (int i = 0; i <= 6; ++i) g.nodes.row(i) << 4.0 * i, 0.0;
  for (int i = 0; i <= 5; ++i) g.nodes.row(7 + i) << 2.0 + 4.0 * i, 2.0;

  for (int i = 0; i < 6; ++i) g.elements.push_back({i, i + 1, 0});          // bottom chord
  for (int i = 0; i < 5; ++i) g.elements.push_back({7 + i, 8 + i, 0});      // top chord
  for (int i = 0; i < 6; ++i) {                                             // diagonals
    g.elements.push_back({i, 7 + i, 1});
    g.elements.push_back({7 + i, i + 1, 1});
  }

  g.fixed_dofs = {{0, 0}, {0, 1}, {6, 1}};  // pin left, roller right
  g.load_nodes = {7, 8, 9, 10, 11, 12};     // P1..P6 on the top chord
  g.monitored_node = 3;                     // bottom chord midspan
  return g;
}

TrussModel::TrussModel(TrussGeometry geometry) : geometry_(std::move(geometry)) {
  const Index n = geometry_.nodes.rows();
  if (n < 2) throw std::invalid_argument("truss: need at least two nodes");
  elems_.reserve(geometry_.elements.size());
  for (const auto& e : geometry_.elements) {
    if (e[0] < 0 || e[1] < 0 || e[0] >= n || e[1] >= n || e[0] == e[1])
      throw std::invalid_argument("truss: element references invalid nodes");
    if (e[2] != 0 && e[2] != 1) throw std::invalid_argument("truss: element group must be 0 or 1");
    ElementData d;
    d.i = e[0];
    d.j = e[1];
    d.group = e[2];
    const double dx = geometry_.nodes(e[1], 0) - geometry_.nodes(e[0], 0);
    const double dy = geometry_.nodes(e[1], 1) - geometry_.nodes(e[0], 1);
    d.length = std::hypot(dx, dy);
    if (!(d.length > 0.0)) throw std::invalid_argument("truss: zero-length element");
    d.c = dx / d.length;
    d.s = dy / d.length;
    elems_.push_back(d);
  }

  dof_map_.assign(static_cast<std::size_t>(2 * n), 0);
  for (const auto& f : geometry_.fixed_dofs) {
    if (f[0] < 0 || f[0] >= n || f[1] < 0 || f[1] > 1)
      throw std::invalid_argument("truss: invalid support specification");
    dof_map_[static_cast<std::size_t>(2 * f[0] + f[1])] = -1;
  }
  n_free_ = 0;
  for (auto& d : dof_map_)
    if (d != -1) d = n_free_++;
  if (geometry_.monitored_node < 0 || geometry_.monitored_node >= n)
    throw std::invalid_argument("truss: invalid monitored node");
}

Vector TrussModel::solve_displacements(const Vector& x) const {
  if (x.size() != input_dimension())
    throw std::invalid_argument("truss: expects (A1, A2, E1, E2, P1..Pk)");
  const double area[2] = {x[0], x[1]};
  const double modulus[2] = {x[2] * 1e3, x[3] * 1e3};  // MPa -> KN/m^2
  for (int gidx = 0; gidx < 2; ++gidx)
    if (!(area[gidx] > 0.0) || !(modulus[gidx] > 0.0))
      throw std::domain_error("truss: sections and moduli must be positive");

  Matrix k = Matrix::Zero(n_free_, n_free_);
  for (const auto& e : elems_) {
    const double ea = area[e.group] * modulus[e.group] / e.length;
    const double kl[3] = {e.c * e.c, e.c * e.s, e.s * e.s};
    const Index dofs[4] = {dof_map_[static_cast<std::size_t>(2 * e.i)],
                           dof_map_[static_cast<std::size_t>(2 * e.i + 1)],
                           dof_map_[static_cast<std::size_t>(2 * e.j)],
                           dof_map_[static_cast<std::size_t>(2 * e.j + 1)]};
    // 4x4 axial stiffness in global coordinates, +/- block pattern
    const double local[4][4] = {{kl[0], kl[1], -kl[0], -kl[1]},
                                {kl[1], kl[2], -kl[1], -kl[2]},
                                {-kl[0], -kl[1], kl[0], kl[1]},
                                {-kl[1], -kl[2], kl[1], kl[2]}};
    for (int a = 0; a < 4; ++a) {
      if (dofs[a] < 0) continue;
      for (int b = 0; b < 4; ++b) {
        if (dofs[b] < 0) continue;
        k(dofs[a], dofs[b]) += ea * local[a][b];
      }
    }
  }

  Vector f = Vector::Zero(n_free_);
  for (std::size_t li = 0; li < geometry_.load_nodes.size(); ++li) {
    const Index dof = dof_map_[static_cast<std::size_t>(2 * geometry_.load_nodes[li] + 1)];
    if (dof >= 0) f[dof] -= x[4 + static_cast<Index>(li)];  // downward
  }

  Eigen::LDLT<Matrix> ldlt(k);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("truss: singular stiffness matrix (mechanism)");
  Vector d = ldlt.solve(f);
  // LDLT does not flag semidefinite factorizations, so verify equilibrium
  const double fnorm = f.norm();
  if (!d.allFinite() || (fnorm > 0.0 && (k * d - f).norm() > 1e-8 * fnorm))
    throw std::runtime_error("truss: stiffness matrix is singular (mechanism)");
  return d;
}

double TrussModel::deflection(const Vector& x) const {
  const Vector d = solve_displacements(x);
  const Index dof = dof_map_[static_cast<std::size_t>(2 * geometry_.monitored_node + 1)];
  if (dof < 0) throw std::invalid_argument("truss: monitored dof is constrained");
  return std::abs(d[dof]);
}

double TrussModel::equilibrium_residual(const Vector& x) const {
  const Vector d = solve_displacements(x);
  const double area[2] = {x[0], x[1]};
  const double modulus[2] = {x[2] * 1e3, x[3] * 1e3};
  Matrix k = Matrix::Zero(n_free_, n_free_);
  for (const auto& e : elems_) {
    const double ea = area[e.group] * modulus[e.group] / e.length;
    const double kl[3] = {e.c * e.c, e.c * e.s, e.s * e.s};
    const Index dofs[4] = {dof_map_[static_cast<std::size_t>(2 * e.i)],
                           dof_map_[static_cast<std::size_t>(2 * e.i + 1)],
                           dof_map_[static_cast<std::size_t>(2 * e.j)],
                           dof_map_[static_cast<std::size_t>(2 * e.j + 1)]};
    const double local[4][4] = {{kl[0], kl[1], -kl[0], -kl[1]},
                                {kl[1], kl[2], -kl[1], -kl[2]},
                                {-kl[0], -kl[1], kl[0], kl[1]},
                                {-kl[1], -kl[2], kl[1], kl[2]}};
    for (int a = 0; a < 4; ++a) {
      if (dofs[a] < 0) continue;
      for (int b = 0; b < 4; ++b)
        if (dofs[b] >= 0) k(dofs[a], dofs[b]) += ea * local[a][b];
    }
  }
  Vector f = Vector::Zero(n_free_);
  for (std::size_t li = 0; li < geometry_.load_nodes.size(); ++li) {
    const Index dof = dof_map_[static_cast<std::size_t>(2 * geometry_.load_nodes[li] + 1)];
    if (dof >= 0) f[dof] -= x[4 + static_cast<Index>(li)];
  }
  return (k * d - f).norm() / std::max(f.norm(), 1e-300);
}

std::shared_ptr<const InputModel> truss_input_model() {
  std::vector<Marginal> marginals{
      Marginal::lognormal_moments(0.002, 0.10),     // A1 [m^2]
      Marginal::lognormal_moments(0.001, 0.10),     // A2 [m^2]
      Marginal::lognormal_moments(210000.0, 0.10),  // E1 [MPa]
      Marginal::lognormal_moments(210000.0, 0.10),  // E2 [MPa]
  };
  for (int i = 0; i < 6; ++i) marginals.push_back(Marginal::gumbel_moments(50.0, 0.15));  // P1..P6 [KN]
  return std::make_shared<InputModel>(std::move(marginals));
}

}  // namespace uq
