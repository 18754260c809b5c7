#include "phfem/io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace phfem {

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

}  // namespace

void write_csv(const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows, const std::string& path) {
  std::ofstream out = open_output(path);
  for (size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
  out << "\n";
  for (const auto& row : rows) {
    if (row.size() != columns.size())
      throw std::invalid_argument("write_csv: row length does not match the header");
    for (size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_vtk(const Mesh& mesh, const VtkFields& fields, const std::string& path,
               const std::string& title) {
  std::ofstream out = open_output(path);
  const int n = mesh.node_count();
  const int ncells = mesh.cell_count();
  const int nper = mesh.dim() == 1 ? 2 : 3;
  const int vtk_type = mesh.dim() == 1 ? 3 : 5;  // VTK_LINE / VTK_TRIANGLE

  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << n << " double\n";
  for (const auto& x : mesh.nodes()) {
    out << format_double(x(0)) << " " << format_double(mesh.dim() > 1 ? x(1) : 0.0) << " 0\n";
  }
  out << "CELLS " << ncells << " " << ncells * (nper + 1) << "\n";
  for (const auto& c : mesh.cells()) {
    out << nper;
    for (int v : c) out << " " << v;
    out << "\n";
  }
  out << "CELL_TYPES " << ncells << "\n";
  for (int c = 0; c < ncells; ++c) out << vtk_type << "\n";

  if (!fields.point_vectors.empty()) {
    out << "POINT_DATA " << n << "\n";
    for (const auto& [name, data] : fields.point_vectors) {
      if (data.rows() != n)
        throw std::invalid_argument("write_vtk: point field '" + name + "' has wrong size");
      out << "VECTORS " << name << " double\n";
      for (int i = 0; i < n; ++i) {
        out << format_double(data(i, 0)) << " "
            << format_double(data.cols() > 1 ? data(i, 1) : 0.0) << " 0\n";
      }
    }
  }
  if (!fields.cell_arrays.empty()) {
    out << "CELL_DATA " << ncells << "\n";
    out << "FIELD cell_fields " << fields.cell_arrays.size() << "\n";
    for (const auto& [name, data] : fields.cell_arrays) {
      if (data.rows() != ncells)
        throw std::invalid_argument("write_vtk: cell field '" + name + "' has wrong size");
      out << name << " " << data.cols() << " " << ncells << " double\n";
      for (int i = 0; i < ncells; ++i) {
        for (int k = 0; k < data.cols(); ++k) out << (k ? " " : "") << format_double(data(i, k));
        out << "\n";
      }
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_matrix_market(const SparseMat& A, const std::string& path) {
  std::ofstream out = open_output(path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << A.rows() << " " << A.cols() << " " << A.nonZeros() << "\n";
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseMat::InnerIterator it(A, k); it; ++it)
      out << it.row() + 1 << " " << it.col() + 1 << " " << format_double(it.value()) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace phfem
