#include "mgwb/numcore/tape.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <memory>
#include <stdexcept>

// Squared MMD with a bank of RBF kernels, as a single fused tape primitive.
// The V-statistic touches every pair of rows, so the kernel matrices are
// computed once in forward, transformed in place into backward weights, and
// reused by the gradient gemms.

namespace mgwb {

namespace {

using EMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CMap = Eigen::Map<const EMat>;
using MMap = Eigen::Map<EMat>;
using Arr = Eigen::ArrayXd;

struct MmdWork {
  // weight matrices W(t) = mean_sigma k_sigma(t) / sigma^2, reused as the
  // gradient gemm operands
  EMat w_aa, w_bb, w_ab;
  Arr rs_aa, rs_bb, rs_ab, cs_ab;
};

bool is_default_sigmas(const std::vector<double>& s) {
  return s.size() == 3 && s[0] == 0.5 && s[1] == 1.0 && s[2] == 2.0;
}

// Transforms a Gram-matrix block in place: entry g becomes the backward
// weight, returns the kernel-mean sum of the block. ra/rb are squared row
// norms of the two sides.
double transform_block(EMat& gram, const Arr& ra, const Arr& rb,
                       const std::vector<double>& sigmas, bool fast) {
  const int rows = int(gram.rows());
  const int cols = int(gram.cols());
  double ksum = 0.0;
  Arr t(cols), e(cols), k(cols), w(cols);
  for (int i = 0; i < rows; ++i) {
    auto row = gram.row(i).array();
    t = (ra[i] + rb - 2.0 * row.transpose()).max(0.0);
    if (fast) {
      // sigma in {0.5, 1, 2}: exponents are 16x, 4x, 1x of exp(-t/8)
      e = (-0.125 * t).exp();
      Arr e4 = (e * e).square();
      Arr e16 = (e4 * e4).square();
      k = (e + e4 + e16) * (1.0 / 3.0);
      w = (0.25 * e + e4 + 4.0 * e16) * (1.0 / 3.0);
    } else {
      k.setZero();
      w.setZero();
      for (double s : sigmas) {
        Arr ks = (-t / (2.0 * s * s)).exp();
        k += ks;
        w += ks / (s * s);
      }
      k /= double(sigmas.size());
      w /= double(sigmas.size());
    }
    ksum += k.sum();
    gram.row(i) = w.matrix().transpose();
  }
  return ksum;
}

}  // namespace

Var Tape::mmd_rbf(Var a, Var b, const std::vector<double>& sigmas) {
  int ai = check(a), bi = check(b);
  const Matrix& A = value(a);
  const Matrix& B = value(b);
  if (A.cols != B.cols)
    throw std::invalid_argument("mmd_rbf: dim mismatch " + A.shape_str() +
                                " vs " + B.shape_str());
  if (A.rows < 1 || B.rows < 1)
    throw std::invalid_argument("mmd_rbf: empty side");
  if (sigmas.empty()) throw std::invalid_argument("mmd_rbf: no bandwidths");

  const int m = A.rows, n = B.rows, d = A.cols;
  const bool fast = is_default_sigmas(sigmas);
  CMap Am(A.data.data(), m, d);
  CMap Bm(B.data.data(), n, d);

  auto work = std::make_shared<MmdWork>();
  Arr ra = Am.rowwise().squaredNorm();
  Arr rb = Bm.rowwise().squaredNorm();

  work->w_aa.noalias() = Am * Am.transpose();
  double s_aa = transform_block(work->w_aa, ra, ra, sigmas, fast);
  work->w_bb.noalias() = Bm * Bm.transpose();
  double s_bb = transform_block(work->w_bb, rb, rb, sigmas, fast);
  work->w_ab.noalias() = Am * Bm.transpose();
  double s_ab = transform_block(work->w_ab, ra, rb, sigmas, fast);

  double val = s_aa / (double(m) * m) + s_bb / (double(n) * n) -
               2.0 * s_ab / (double(m) * n);

  bool rg = nodes_[ai].requires_grad || nodes_[bi].requires_grad;
  if (rg) {
    work->rs_aa = work->w_aa.rowwise().sum();
    work->rs_bb = work->w_bb.rowwise().sum();
    work->rs_ab = work->w_ab.rowwise().sum();
    work->cs_ab = work->w_ab.colwise().sum();
  } else {
    work.reset();  // eval pass keeps nothing
  }

  Var o = push(Matrix::scalar(val), rg, nullptr);
  if (rg) {
    int oi = o.id;
    nodes_[oi].backprop = [ai, bi, oi, work, m, n, d](Tape& t) {
      double g = t.nodes_[oi].grad.data[0];
      const Matrix& A2 = t.nodes_[ai].value;
      const Matrix& B2 = t.nodes_[bi].value;
      CMap Am2(A2.data.data(), m, d);
      CMap Bm2(B2.data.data(), n, d);
      double c_aa = 2.0 * g / (double(m) * m);
      double c_bb = 2.0 * g / (double(n) * n);
      double c_ab = 2.0 * g / (double(m) * n);
      if (t.nodes_[ai].requires_grad) {
        EMat da = c_aa * (work->w_aa * Am2);
        da.noalias() -= c_ab * (work->w_ab * Bm2);
        Arr diag = c_ab * work->rs_ab - c_aa * work->rs_aa;
        Matrix dm(m, d);
        for (int r = 0; r < m; ++r)
          for (int c = 0; c < d; ++c) dm(r, c) = da(r, c) + diag[r] * A2(r, c);
        t.accumulate(ai, dm);
      }
      if (t.nodes_[bi].requires_grad) {
        EMat db = c_bb * (work->w_bb * Bm2);
        db.noalias() -= c_ab * (work->w_ab.transpose() * Am2);
        Arr diag = c_ab * work->cs_ab - c_bb * work->rs_bb;
        Matrix dm(n, d);
        for (int r = 0; r < n; ++r)
          for (int c = 0; c < d; ++c) dm(r, c) = db(r, c) + diag[r] * B2(r, c);
        t.accumulate(bi, dm);
      }
    };
  }
  return o;
}

}  // namespace mgwb
