#ifndef PHFEM_IO_HPP
#define PHFEM_IO_HPP

#include "phfem/assembly.hpp"
#include "phfem/mesh.hpp"

#include <string>
#include <utility>
#include <vector>

namespace phfem {

// Shortest round-trip decimal representation, locale independent.
std::string format_double(double x);

// Comma-separated table with a mandatory header row; column names carry
// units as a bracketed suffix, e.g. "t [s]". An empty row set produces a
// header-only file.
void write_csv(const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows, const std::string& path);

struct VtkFields {
  // per-node vectors (n_nodes x d), written as 3-component VECTORS
  std::vector<std::pair<std::string, Eigen::MatrixXd>> point_vectors;
  // per-cell arrays (n_cells x k), written as CELL_DATA FIELD arrays
  std::vector<std::pair<std::string, Eigen::MatrixXd>> cell_arrays;
};

// Legacy-VTK ASCII unstructured grid (line cells in 1D, triangles in 2D).
void write_vtk(const Mesh& mesh, const VtkFields& fields, const std::string& path,
               const std::string& title = "phfem");

// Matrix Market coordinate format (1-based, general real).
void write_matrix_market(const SparseMat& A, const std::string& path);

}  // namespace phfem

#endif
