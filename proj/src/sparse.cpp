#include "supgmg/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "supgmg/error.hpp"

namespace supgmg {

CsrMatrix::CsrMatrix(int rows, int cols, std::vector<std::size_t> row_offsets,
                     std::vector<int> col_indices, std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      offsets_(std::move(row_offsets)),
      cols_idx_(std::move(col_indices)),
      values_(std::move(values)) {
  require(rows >= 0 && cols >= 0, "negative matrix dimension");
  require(offsets_.size() == static_cast<std::size_t>(rows) + 1,
          "row offset array has wrong length");
  require(offsets_.front() == 0 && offsets_.back() == cols_idx_.size() &&
              cols_idx_.size() == values_.size(),
          "inconsistent CSR arrays");
  for (int r = 0; r < rows; ++r) {
    require(offsets_[r] <= offsets_[r + 1], "row offsets must be nondecreasing");
    for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k) {
      require(cols_idx_[k] >= 0 && cols_idx_[k] < cols, "column index out of range");
      require(k == offsets_[r] || cols_idx_[k] > cols_idx_[k - 1],
              "column indices must be sorted and unique within a row");
    }
  }
}

CsrMatrix CsrMatrix::from_triplets(int rows, int cols, std::vector<Triplet> entries) {
  for (const auto& t : entries) {
    require(t.row >= 0 && t.row < rows && t.col >= 0 && t.col < cols,
            "triplet index out of range");
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<std::size_t> offsets(static_cast<std::size_t>(rows) + 1, 0);
  std::vector<int> ci;
  std::vector<double> v;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& t = entries[k];
    if (!ci.empty() && k > 0 && entries[k - 1].row == t.row &&
        entries[k - 1].col == t.col) {
      v.back() += t.value;
      continue;
    }
    ci.push_back(t.col);
    v.push_back(t.value);
    ++offsets[t.row + 1];
  }
  for (int r = 0; r < rows; ++r) offsets[r + 1] += offsets[r];
  return CsrMatrix(rows, cols, std::move(offsets), std::move(ci), std::move(v));
}

CsrMatrix CsrMatrix::identity(int n) {
  std::vector<std::size_t> off(static_cast<std::size_t>(n) + 1);
  std::vector<int> ci(n);
  for (int i = 0; i <= n; ++i) off[i] = i;
  for (int i = 0; i < n; ++i) ci[i] = i;
  return CsrMatrix(n, n, std::move(off), std::move(ci), std::vector<double>(n, 1.0));
}

CsrMatrix CsrMatrix::from_dense(int rows, int cols, std::span<const double> a) {
  require(a.size() == static_cast<std::size_t>(rows) * cols, "dense size mismatch");
  std::vector<Triplet> t;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double v = a[static_cast<std::size_t>(r) * cols + c];
      if (v != 0.0) t.push_back({r, c, v});
    }
  }
  return from_triplets(rows, cols, std::move(t));
}

std::ptrdiff_t CsrMatrix::find(int row, int col) const {
  const auto first = cols_idx_.begin() + offsets_[row];
  const auto last = cols_idx_.begin() + offsets_[row + 1];
  const auto it = std::lower_bound(first, last, col);
  if (it == last || *it != col) return -1;
  return it - cols_idx_.begin();
}

double CsrMatrix::at(int row, int col) const {
  const auto k = find(row, col);
  return k < 0 ? 0.0 : values_[k];
}

std::vector<double> CsrMatrix::to_dense() const {
  std::vector<double> d(static_cast<std::size_t>(rows_) * cols_, 0.0);
  for (int r = 0; r < rows_; ++r) {
    for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k) {
      d[static_cast<std::size_t>(r) * cols_ + cols_idx_[k]] = values_[k];
    }
  }
  return d;
}

CsrMatrix CsrMatrix::transposed() const {
  std::vector<std::size_t> off(static_cast<std::size_t>(cols_) + 1, 0);
  for (int c : cols_idx_) ++off[c + 1];
  for (int c = 0; c < cols_; ++c) off[c + 1] += off[c];
  std::vector<int> ci(nnz());
  std::vector<double> v(nnz());
  std::vector<std::size_t> next(off.begin(), off.end() - 1);
  for (int r = 0; r < rows_; ++r) {
    for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k) {
      const std::size_t p = next[cols_idx_[k]]++;
      ci[p] = r;
      v[p] = values_[k];
    }
  }
  return CsrMatrix(cols_, rows_, std::move(off), std::move(ci), std::move(v));
}

CsrMatrix CsrMatrix::submatrix(std::span<const int> idx) const {
  require(rows_ == cols_, "submatrix extraction needs a square matrix");
  std::vector<int> local(cols_, -1);
  for (std::size_t a = 0; a < idx.size(); ++a) {
    require(idx[a] >= 0 && idx[a] < cols_, "submatrix index out of range");
    local[idx[a]] = static_cast<int>(a);
  }
  std::vector<Triplet> t;
  for (std::size_t a = 0; a < idx.size(); ++a) {
    const int r = idx[a];
    for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k) {
      const int lc = local[cols_idx_[k]];
      if (lc >= 0) t.push_back({static_cast<int>(a), lc, values_[k]});
    }
  }
  const int n = static_cast<int>(idx.size());
  return from_triplets(n, n, std::move(t));
}

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  require(x.size() == static_cast<std::size_t>(a.cols()) &&
              y.size() == static_cast<std::size_t>(a.rows()),
          "spmv dimension mismatch");
  const auto& off = a.row_offsets();
  const auto& ci = a.col_indices();
  const auto& v = a.values();
  for (int r = 0; r < a.rows(); ++r) {
    double s = 0.0;
    for (std::size_t k = off[r]; k < off[r + 1]; ++k) s += v[k] * x[ci[k]];
    y[r] = s;
  }
}

std::vector<double> spmv(const CsrMatrix& a, std::span<const double> x) {
  std::vector<double> y(a.rows());
  spmv(a, x, y);
  return y;
}

void spmv_transposed(const CsrMatrix& a, std::span<const double> x,
                     std::span<double> y) {
  require(x.size() == static_cast<std::size_t>(a.rows()) &&
              y.size() == static_cast<std::size_t>(a.cols()),
          "spmv dimension mismatch");
  std::fill(y.begin(), y.end(), 0.0);
  const auto& off = a.row_offsets();
  const auto& ci = a.col_indices();
  const auto& v = a.values();
  for (int r = 0; r < a.rows(); ++r) {
    const double xr = x[r];
    if (xr == 0.0) continue;
    for (std::size_t k = off[r]; k < off[r + 1]; ++k) y[ci[k]] += v[k] * xr;
  }
}

void residual(const CsrMatrix& a, std::span<const double> x,
              std::span<const double> b, std::span<double> r) {
  require(b.size() == static_cast<std::size_t>(a.rows()), "residual dimension mismatch");
  spmv(a, x, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void write_matrix_market(const CsrMatrix& a, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
  out << std::setprecision(17);
  const auto& off = a.row_offsets();
  for (int r = 0; r < a.rows(); ++r) {
    for (std::size_t k = off[r]; k < off[r + 1]; ++k) {
      out << r + 1 << ' ' << a.col_indices()[k] + 1 << ' ' << a.values()[k] << '\n';
    }
  }
}

void write_matrix_market(const CsrMatrix& a, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIo, "cannot open " + path + " for writing");
  write_matrix_market(a, out);
  if (!out) fail(ErrorCode::kIo, "failed writing " + path);
}

CsrMatrix read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0) {
    fail(ErrorCode::kIo, "missing Matrix Market banner");
  }
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (object != "matrix" || format != "coordinate" ||
      (field != "real" && field != "integer") ||
      (symmetry != "general" && symmetry != "symmetric")) {
    fail(ErrorCode::kIo, "unsupported Matrix Market header: " + line);
  }
  while (std::getline(in, line) && (line.empty() || line[0] == '%')) {
  }
  std::istringstream sizes(line);
  long rows = 0, cols = 0, nnz = 0;
  if (!(sizes >> rows >> cols >> nnz)) fail(ErrorCode::kIo, "bad size line");
  std::vector<Triplet> t;
  t.reserve(nnz);
  for (long k = 0; k < nnz; ++k) {
    long r = 0, c = 0;
    double v = 0.0;
    if (!(in >> r >> c >> v)) fail(ErrorCode::kIo, "truncated Matrix Market data");
    t.push_back({static_cast<int>(r - 1), static_cast<int>(c - 1), v});
    if (symmetry == "symmetric" && r != c) {
      t.push_back({static_cast<int>(c - 1), static_cast<int>(r - 1), v});
    }
  }
  return CsrMatrix::from_triplets(static_cast<int>(rows), static_cast<int>(cols),
                                  std::move(t));
}

CsrMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path);
  return read_matrix_market(in);
}

}  // namespace supgmg
