#include "mgwb/numcore/matrix.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace mgwb {

namespace {
using EMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CMap = Eigen::Map<const EMat>;
using MMap = Eigen::Map<EMat>;
}  // namespace

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows_in) {
  if (rows_in.empty()) return Matrix();
  Matrix m(int(rows_in.size()), int(rows_in[0].size()));
  for (int r = 0; r < m.rows; ++r) {
    if (int(rows_in[r].size()) != m.cols)
      throw std::invalid_argument("from_rows: ragged rows");
    for (int c = 0; c < m.cols; ++c) m(r, c) = rows_in[r][c];
  }
  return m;
}

std::string Matrix::shape_str() const {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

bool Matrix::all_finite() const {
  for (double v : data)
    if (!std::isfinite(v)) return false;
  return true;
}

double Matrix::as_scalar() const {
  if (rows != 1 || cols != 1)
    throw std::invalid_argument("as_scalar: matrix is " + shape_str());
  return data[0];
}

void check_same_shape(const char* op, const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b))
    throw std::invalid_argument(std::string(op) + ": shape mismatch " +
                                a.shape_str() + " vs " + b.shape_str());
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows)
    throw std::invalid_argument("matmul: shape mismatch " + a.shape_str() +
                                " * " + b.shape_str());
  Matrix out(a.rows, b.cols);
  MMap(out.data.data(), out.rows, out.cols).noalias() =
      CMap(a.data.data(), a.rows, a.cols) * CMap(b.data.data(), b.rows, b.cols);
  return out;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols != b.cols)
    throw std::invalid_argument("matmul_nt: shape mismatch " + a.shape_str() +
                                " * " + b.shape_str() + "^T");
  Matrix out(a.rows, b.rows);
  MMap(out.data.data(), out.rows, out.cols).noalias() =
      CMap(a.data.data(), a.rows, a.cols) *
      CMap(b.data.data(), b.rows, b.cols).transpose();
  return out;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows != b.rows)
    throw std::invalid_argument("matmul_tn: shape mismatch " + a.shape_str() +
                                "^T * " + b.shape_str());
  Matrix out(a.cols, b.cols);
  MMap(out.data.data(), out.rows, out.cols).noalias() =
      CMap(a.data.data(), a.rows, a.cols).transpose() *
      CMap(b.data.data(), b.rows, b.cols);
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix out(a.cols, a.rows);
  for (int r = 0; r < a.rows; ++r)
    for (int c = 0; c < a.cols; ++c) out(c, r) = a(r, c);
  return out;
}

Matrix add(const Matrix& a, const Matrix& b) {
  check_same_shape("add", a, b);
  Matrix out(a.rows, a.cols);
  for (size_t i = 0; i < a.size(); ++i) out.data[i] = a.data[i] + b.data[i];
  return out;
}

Matrix sub(const Matrix& a, const Matrix& b) {
  check_same_shape("sub", a, b);
  Matrix out(a.rows, a.cols);
  for (size_t i = 0; i < a.size(); ++i) out.data[i] = a.data[i] - b.data[i];
  return out;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  check_same_shape("hadamard", a, b);
  Matrix out(a.rows, a.cols);
  for (size_t i = 0; i < a.size(); ++i) out.data[i] = a.data[i] * b.data[i];
  return out;
}

Matrix scale(const Matrix& a, double s) {
  Matrix out(a.rows, a.cols);
  for (size_t i = 0; i < a.size(); ++i) out.data[i] = a.data[i] * s;
  return out;
}

Matrix relu(const Matrix& a) {
  Matrix out(a.rows, a.cols);
  for (size_t i = 0; i < a.size(); ++i) out.data[i] = a.data[i] > 0.0 ? a.data[i] : 0.0;
  return out;
}

Matrix sigmoid(const Matrix& a) {
  Matrix out(a.rows, a.cols);
  for (size_t i = 0; i < a.size(); ++i) out.data[i] = 1.0 / (1.0 + std::exp(-a.data[i]));
  return out;
}

Matrix exp_elem(const Matrix& a) {
  Matrix out(a.rows, a.cols);
  for (size_t i = 0; i < a.size(); ++i) out.data[i] = std::exp(a.data[i]);
  return out;
}

Matrix log_elem(const Matrix& a) {
  Matrix out(a.rows, a.cols);
  for (size_t i = 0; i < a.size(); ++i) out.data[i] = std::log(a.data[i]);
  return out;
}

Matrix mean_rows(const Matrix& a) {
  Matrix out(1, a.cols);
  if (a.rows == 0) return out;
  for (int r = 0; r < a.rows; ++r)
    for (int c = 0; c < a.cols; ++c) out(0, c) += a(r, c);
  for (int c = 0; c < a.cols; ++c) out(0, c) /= a.rows;
  return out;
}

Matrix hconcat(const Matrix& a, const Matrix& b) {
  if (a.rows != b.rows)
    throw std::invalid_argument("hconcat: row mismatch " + a.shape_str() +
                                " vs " + b.shape_str());
  Matrix out(a.rows, a.cols + b.cols);
  for (int r = 0; r < a.rows; ++r) {
    for (int c = 0; c < a.cols; ++c) out(r, c) = a(r, c);
    for (int c = 0; c < b.cols; ++c) out(r, a.cols + c) = b(r, c);
  }
  return out;
}

Matrix gather_rows(const Matrix& a, const std::vector<int>& idx) {
  Matrix out(int(idx.size()), a.cols);
  for (size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] < 0 || idx[i] >= a.rows)
      throw std::invalid_argument("gather_rows: index out of range");
    for (int c = 0; c < a.cols; ++c) out(int(i), c) = a(idx[i], c);
  }
  return out;
}

double sum_all(const Matrix& a) {
  double s = 0.0;
  for (double v : a.data) s += v;
  return s;
}

double l2_norm(const Matrix& a) {
  double s = 0.0;
  for (double v : a.data) s += v * v;
  return std::sqrt(s);
}

double dot_all(const Matrix& a, const Matrix& b) {
  check_same_shape("dot_all", a, b);
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a.data[i] * b.data[i];
  return s;
}

Matrix l2_normalize_rows(const Matrix& a) {
  Matrix out(a.rows, a.cols);
  for (int r = 0; r < a.rows; ++r) {
    double s = 0.0;
    for (int c = 0; c < a.cols; ++c) s += a(r, c) * a(r, c);
    double n = std::sqrt(s);
    if (n < 1e-12) continue;  // zero-norm row stays zero
    for (int c = 0; c < a.cols; ++c) out(r, c) = a(r, c) / n;
  }
  return out;
}

Matrix layer_norm_rows(const Matrix& a, const Matrix& gain, const Matrix& bias,
                       double eps) {
  if (gain.cols != a.cols || bias.cols != a.cols || gain.rows != 1 || bias.rows != 1)
    throw std::invalid_argument("layer_norm_rows: affine shape mismatch");
  Matrix out(a.rows, a.cols);
  for (int r = 0; r < a.rows; ++r) {
    double mean = 0.0;
    for (int c = 0; c < a.cols; ++c) mean += a(r, c);
    mean /= a.cols;
    double var = 0.0;
    for (int c = 0; c < a.cols; ++c) {
      double d = a(r, c) - mean;
      var += d * d;
    }
    var /= a.cols;
    double inv = 1.0 / std::sqrt(var + eps);
    for (int c = 0; c < a.cols; ++c)
      out(r, c) = (a(r, c) - mean) * inv * gain(0, c) + bias(0, c);
  }
  return out;
}

Matrix softmax_temp(const Matrix& scores, double tau) {
  if (scores.cols != 1)
    throw std::invalid_argument("softmax_temp: expected column vector, got " +
                                scores.shape_str());
  Matrix out(scores.rows, 1);
  double mx = -1e308;
  for (int r = 0; r < scores.rows; ++r) mx = std::max(mx, scores(r, 0) / tau);
  double z = 0.0;
  for (int r = 0; r < scores.rows; ++r) {
    out(r, 0) = std::exp(scores(r, 0) / tau - mx);
    z += out(r, 0);
  }
  for (int r = 0; r < scores.rows; ++r) out(r, 0) /= z;
  return out;
}

}  // namespace mgwb
