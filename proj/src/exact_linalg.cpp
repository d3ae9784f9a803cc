#include "orbitspace/exact_linalg.hpp"

namespace orbitspace {

namespace {

struct Reduction {
  RationalMatrix m;  // reduced row echelon form of [A | b] (b optional)
  std::vector<int> pivot_columns;
  int rank = 0;
};

// RREF over the first `cols` columns; extra columns ride along as rhs.
Reduction rref(RationalMatrix m, int cols) {
  Reduction out;
  const int rows = static_cast<int>(m.rows());
  int row = 0;
  for (int col = 0; col < cols && row < rows; ++col) {
    int pivot = -1;
    for (int r = row; r < rows; ++r) {
      if (!m(r, col).is_zero()) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != row) {
      for (int c = 0; c < m.cols(); ++c) std::swap(m(pivot, c), m(row, c));
    }
    const Rational inv = m(row, col).inverse();
    for (int c = 0; c < m.cols(); ++c) m(row, c) *= inv;
    for (int r = 0; r < rows; ++r) {
      if (r == row || m(r, col).is_zero()) continue;
      const Rational factor = m(r, col);
      for (int c = 0; c < m.cols(); ++c) m(r, c) -= factor * m(row, c);
    }
    out.pivot_columns.push_back(col);
    ++row;
  }
  out.rank = row;
  out.m = std::move(m);
  return out;
}

std::vector<RationalVector> kernel_from_rref(const Reduction& red, int cols) {
  std::vector<bool> is_pivot(cols, false);
  for (int c : red.pivot_columns) is_pivot[c] = true;
  std::vector<RationalVector> kernel;
  for (int c = 0; c < cols; ++c) {
    if (is_pivot[c]) continue;
    RationalVector v = RationalVector::Constant(cols, Rational(0));
    v(c) = Rational(1);
    for (int r = 0; r < red.rank; ++r) {
      v(red.pivot_columns[r]) = -red.m(r, c);
    }
    kernel.push_back(std::move(v));
  }
  return kernel;
}

}  // namespace

ExactLinearSolution solve_exact(const RationalMatrix& A, const RationalVector& b) {
  const int rows = static_cast<int>(A.rows());
  const int cols = static_cast<int>(A.cols());
  RationalMatrix aug(rows, cols + 1);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) aug(r, c) = A(r, c);
    aug(r, cols) = b(r);
  }
  Reduction red = rref(std::move(aug), cols);

  ExactLinearSolution out;
  out.pivot_columns = red.pivot_columns;
  out.kernel = kernel_from_rref(red, cols);
  for (int r = red.rank; r < rows; ++r) {
    if (!red.m(r, cols).is_zero()) {
      out.consistent = false;
      return out;
    }
  }
  out.consistent = true;
  out.particular = RationalVector::Constant(cols, Rational(0));
  for (int r = 0; r < red.rank; ++r) out.particular(red.pivot_columns[r]) = red.m(r, cols);
  return out;
}

std::vector<RationalVector> nullspace_exact(const RationalMatrix& A) {
  const int cols = static_cast<int>(A.cols());
  Reduction red = rref(A, cols);
  return kernel_from_rref(red, cols);
}

}  // namespace orbitspace
