#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace mgwb {

// Dense row-major matrix of doubles. The whole workbench runs in 64-bit
// precision. Scalars are represented as 1x1 matrices where needed.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(size_t(r) * size_t(c), 0.0) {}
  Matrix(int r, int c, double fill)
      : rows(r), cols(c), data(size_t(r) * size_t(c), fill) {}

  static Matrix zeros(int r, int c) { return Matrix(r, c); }
  static Matrix scalar(double v) {
    Matrix m(1, 1);
    m.data[0] = v;
    return m;
  }
  static Matrix from_rows(const std::vector<std::vector<double>>& rows_in);

  double& operator()(int r, int c) { return data[size_t(r) * cols + c]; }
  double operator()(int r, int c) const { return data[size_t(r) * cols + c]; }

  double* row(int r) { return data.data() + size_t(r) * cols; }
  const double* row(int r) const { return data.data() + size_t(r) * cols; }

  size_t size() const { return data.size(); }
  bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }
  std::string shape_str() const;

  bool all_finite() const;
  double as_scalar() const;  // requires 1x1
};

// ---- dense kernels (also used outside the tape) ----

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix matmul_nt(const Matrix& a, const Matrix& b);  // a * b^T
Matrix matmul_tn(const Matrix& a, const Matrix& b);  // a^T * b
Matrix transpose(const Matrix& a);
Matrix add(const Matrix& a, const Matrix& b);
Matrix sub(const Matrix& a, const Matrix& b);
Matrix hadamard(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, double s);

Matrix relu(const Matrix& a);
Matrix sigmoid(const Matrix& a);
Matrix exp_elem(const Matrix& a);
Matrix log_elem(const Matrix& a);

// column means, 1 x cols
Matrix mean_rows(const Matrix& a);
// concatenate the rows of a and b side by side (same row count)
Matrix hconcat(const Matrix& a, const Matrix& b);
Matrix gather_rows(const Matrix& a, const std::vector<int>& idx);

double sum_all(const Matrix& a);
double l2_norm(const Matrix& a);
double dot_all(const Matrix& a, const Matrix& b);

// rows scaled to unit L2 norm; rows with norm < 1e-12 are left at zero
Matrix l2_normalize_rows(const Matrix& a);

// per-row mean/variance normalization with affine gain and bias (1 x cols each)
Matrix layer_norm_rows(const Matrix& a, const Matrix& gain, const Matrix& bias,
                       double eps = 1e-5);

// softmax over a column vector (n x 1) with temperature tau
Matrix softmax_temp(const Matrix& scores, double tau);

// throws std::invalid_argument naming the op when shapes are incompatible
void check_same_shape(const char* op, const Matrix& a, const Matrix& b);

}  // namespace mgwb
