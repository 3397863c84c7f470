#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace supgmg {

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

/// Compressed sparse row matrix. Column indices are sorted and unique within
/// each row.
class CsrMatrix {
 public:
  CsrMatrix() = default;
  CsrMatrix(int rows, int cols, std::vector<std::size_t> row_offsets,
            std::vector<int> col_indices, std::vector<double> values);

  /// Duplicates are summed.
  static CsrMatrix from_triplets(int rows, int cols, std::vector<Triplet> entries);
  static CsrMatrix identity(int n);
  static CsrMatrix from_dense(int rows, int cols, std::span<const double> row_major);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  const std::vector<std::size_t>& row_offsets() const { return offsets_; }
  const std::vector<int>& col_indices() const { return cols_idx_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  /// Position of (row, col) in the value array, or -1 if not stored.
  std::ptrdiff_t find(int row, int col) const;
  double at(int row, int col) const;

  std::vector<double> to_dense() const;
  CsrMatrix transposed() const;

  /// A(idx, idx) with local numbering following `idx`.
  CsrMatrix submatrix(std::span<const int> idx) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<int> cols_idx_;
  std::vector<double> values_;
};

/// y = A x.
void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);
std::vector<double> spmv(const CsrMatrix& a, std::span<const double> x);

/// y = A^T x.
void spmv_transposed(const CsrMatrix& a, std::span<const double> x,
                     std::span<double> y);

/// r = b - A x.
void residual(const CsrMatrix& a, std::span<const double> x,
              std::span<const double> b, std::span<double> r);

double norm2(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);
/// y += alpha x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

/// Matrix Market coordinate real general format.
void write_matrix_market(const CsrMatrix& a, std::ostream& out);
void write_matrix_market(const CsrMatrix& a, const std::string& path);
CsrMatrix read_matrix_market(std::istream& in);
CsrMatrix read_matrix_market(const std::string& path);

}  // namespace supgmg
