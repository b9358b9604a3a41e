#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "eigencert/kernels.hpp"
#include "eigencert/mesh.hpp"

namespace eigencert {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

enum class ElementKind { p1, cr };

/// Stiffness (energy inner product) and consistent mass (L2 inner product)
/// matrices over the free degrees of freedom, after deleting Dirichlet rows
/// and columns.
struct AssembledSystem {
  ElementKind element = ElementKind::p1;
  SparseMatrix stiffness;
  SparseMatrix mass;
  /// free dof -> global dof (vertex index for P1, edge index for CR).
  std::vector<int> dof_map;
  /// global dof -> free dof, or -1 when eliminated.
  std::vector<int> global_to_free;
  /// A priori constant; unset until attached by the caller.
  std::optional<double> ch;

  int size() const noexcept { return static_cast<int>(dof_map.size()); }
};

/// Matrices over every global dof, before boundary elimination.
struct FullSystem {
  SparseMatrix stiffness;
  SparseMatrix mass;
};

FullSystem assemble_p1_full(const Triangulation& t);
FullSystem assemble_cr_full(const Triangulation& t);

/// P1 conforming elements. Throws EmptySystem without interior vertices.
AssembledSystem assemble_p1(const Triangulation& t);

/// Crouzeix-Raviart elements (edge-midpoint dofs, boundary edges eliminated).
AssembledSystem assemble_cr(const Triangulation& t);

/// Load vector (f, phi_m) over the free P1 dofs, integrated with the
/// degree-14 triangle rule.
Eigen::VectorXd assemble_p1_load(const Triangulation& t, const AssembledSystem& sys,
                                 const std::function<double(double, double)>& f);

/// Zero-copy CSR view of a compressed row-major sparse matrix.
kernels::CsrView csr_view(const SparseMatrix& a);

/// y = A x through the SIMD kernels.
void apply(const SparseMatrix& a, std::span<const double> x, std::span<double> y);
Eigen::MatrixXd apply(const SparseMatrix& a, const Eigen::MatrixXd& x);

/// C_h values keyed by refinement level (file lines: `level value`).
class ChTable {
 public:
  ChTable() = default;
  explicit ChTable(std::map<int, double> values);

  /// Values reported for linear elements on the dumbbell, levels 0-5.
  static ChTable dumbbell_reference();
  static ChTable read(const std::filesystem::path& path);

  /// Throws MissingConstant when the level is absent.
  double at(int level) const;
  const std::map<int, double>& values() const noexcept { return values_; }

 private:
  std::map<int, double> values_;
};

/// Uniform right-triangle square meshes get 0.493 h. Other domains need a
/// table and a refinement level; a missing entry is an error.
double compute_ch(const Triangulation& t, const DomainSpec& domain, std::optional<int> level = std::nullopt,
                  const ChTable* table = nullptr);

}  // namespace eigencert
