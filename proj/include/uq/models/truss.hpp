#pragma once

#include "uq/input_model.hpp"
#include "uq/types.hpp"

#include <array>
#include <memory>
#include <vector>

namespace uq {

/// Pin-jointed 2-D truss layout. Elements carry a section group index:
/// group 0 draws (area, modulus) = (A1, E1), group 1 draws (A2, E2).
struct TrussGeometry {
  Matrix nodes;                               // n x 2 coordinates [m]
  std::vector<std::array<int, 3>> elements;   // (node i, node j, group)
  std::vector<std::array<int, 2>> fixed_dofs; // (node, direction 0=x/1=y)
  std::vector<int> load_nodes;                // downward point loads, in input order
  int monitored_node = 0;                     // vertical deflection read here
};

/// Bundled layout: 2 m tall, six 4 m bays, eleven chord bars (group 0) and
/// twelve diagonals (group 1), loads on the six top-chord nodes, midspan
/// bottom-chord deflection monitored.
TrussGeometry default_truss_geometry();

/// Linear-elastic static truss solver for a fixed geometry.
class TrussModel {
 public:
  explicit TrussModel(TrussGeometry geometry);

  /// x = (A1, A2, E1, E2, P1..Pk): areas [m^2], moduli [MPa -> KN/m^2
  /// conversion applied internally], loads [KN]. Returns the magnitude of
  /// the monitored vertical deflection [m].
  double deflection(const Vector& x) const;

  Index input_dimension() const { return 4 + static_cast<Index>(geometry_.load_nodes.size()); }
  const TrussGeometry& geometry() const { return geometry_; }

  /// Static equilibrium residual ||K d - f|| / ||f|| of the last solve path,
  /// recomputed for the given input (diagnostic).
  double equilibrium_residual(const Vector& x) const;

 private:
  struct ElementData {
    int i, j, group;
    double length, c, s;
  };
  Vector solve_displacements(const Vector& x) const;

  TrussGeometry geometry_;
  std::vector<ElementData> elems_;
  std::vector<Index> dof_map_;  // global dof -> free index or -1
  Index n_free_ = 0;
};

/// Table of marginals for the bundled truss: lognormal sections/moduli and
/// six Gumbel loads, all independent.
std::shared_ptr<const InputModel> truss_input_model();

}  // namespace uq
