#include "mgwb/numcore/tape.hpp"

#include <cmath>
#include <stdexcept>

namespace mgwb {

int Tape::check(Var v) const {
  if (v.id < 0 || v.id >= int(nodes_.size()))
    throw std::invalid_argument("tape: handle not on this tape");
  return v.id;
}

Var Tape::push(Matrix value, bool requires_grad,
               std::function<void(Tape&)> backprop) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = requires_grad;
  n.backprop = requires_grad ? std::move(backprop) : nullptr;
  nodes_.push_back(std::move(n));
  return Var{int(nodes_.size()) - 1};
}

Matrix& Tape::grad_buf(int id) {
  Node& n = nodes_[id];
  if (!n.grad_touched) {
    n.grad = Matrix::zeros(n.value.rows, n.value.cols);
    n.grad_touched = true;
  }
  return n.grad;
}

void Tape::accumulate(int id, const Matrix& delta) {
  if (!nodes_[id].requires_grad) return;
  Matrix& g = grad_buf(id);
  check_same_shape("grad accumulate", g, delta);
  for (size_t i = 0; i < g.size(); ++i) g.data[i] += delta.data[i];
}

void Tape::add_into(int id, const double* src, size_t n) {
  if (!nodes_[id].requires_grad) return;
  Matrix& g = grad_buf(id);
  for (size_t i = 0; i < n; ++i) g.data[i] += src[i];
}

Var Tape::leaf(const Matrix& value) { return push(value, true, nullptr); }

Var Tape::constant(Matrix value) { return push(std::move(value), false, nullptr); }

const Matrix& Tape::grad(Var v) {
  int id = check(v);
  return grad_buf(id);
}

void Tape::backward(Var loss) {
  int id = check(loss);
  const Node& ln = nodes_[id];
  if (ln.value.rows != 1 || ln.value.cols != 1)
    throw std::invalid_argument("backward: loss must be scalar, got " +
                                ln.value.shape_str());
  if (backward_done_)
    throw std::logic_error("backward: tape already swept");
  backward_done_ = true;
  grad_buf(id).data[0] = 1.0;
  for (int i = id; i >= 0; --i) {
    Node& n = nodes_[i];
    if (n.grad_touched && n.backprop) n.backprop(*this);
  }
}

// ---- primitives ----

Var Tape::matmul(Var a, Var b) {
  int ai = check(a), bi = check(b);
  Matrix out = mgwb::matmul(value(a), value(b));
  bool rg = nodes_[ai].requires_grad || nodes_[bi].requires_grad;
  Var o = push(std::move(out), rg, nullptr);
  if (rg) {
    int oi = o.id;
    nodes_[oi].backprop = [ai, bi, oi](Tape& t) {
      const Matrix& g = t.nodes_[oi].grad;
      if (t.nodes_[ai].requires_grad)
        t.accumulate(ai, matmul_nt(g, t.nodes_[bi].value));
      if (t.nodes_[bi].requires_grad)
        t.accumulate(bi, matmul_tn(t.nodes_[ai].value, g));
    };
  }
  return o;
}

Var Tape::transpose(Var a) {
  int ai = check(a);
  Matrix out = mgwb::transpose(value(a));
  bool rg = nodes_[ai].requires_grad;
  Var o = push(std::move(out), rg, nullptr);
  if (rg) {
    int oi = o.id;
    nodes_[oi].backprop = [ai, oi](Tape& t) {
      t.accumulate(ai, mgwb::transpose(t.nodes_[oi].grad));
    };
  }
  return o;
}

Var Tape::add(Var a, Var b) {
  int ai = check(a), bi = check(b);
  Matrix out = mgwb::add(value(a), value(b));
  bool rg = nodes_[ai].requires_grad || nodes_[bi].requires_grad;
  Var o = push(std::move(out), rg, nullptr);
  if (rg) {
    int oi = o.id;
    nodes_[oi].backprop = [ai, bi, oi](Tape& t) {
      const Matrix& g = t.nodes_[oi].grad;
      t.add_into(ai, g.data.data(), g.size());
      t.add_into(bi, g.data.data(), g.size());
    };
  }
  return o;
}

Var Tape::sub(Var a, Var b) {
  int ai = check(a), bi = check(b);
  Matrix out = mgwb::sub(value(a), value(b));
  bool rg = nodes_[ai].requires_grad || nodes_[bi].requires_grad;
  Var o = push(std::move(out), rg, nullptr);
  if (rg) {
    int oi = o.id;
    nodes_[oi].backprop = [ai, bi, oi](Tape& t) {
      const Matrix& g = t.nodes_[oi].grad;
      t.add_into(ai, g.data.data(), g.size());
      t.accumulate(bi, mgwb::scale(g, -1.0));
    };
  }
  return o;
}

Var Tape::hadamard(Var a, Var b) {
  int ai = check(a), bi = check(b);
  Matrix out = mgwb::hadamard(value(a), value(b));
  bool rg = nodes_[ai].requires_grad || nodes_[bi].requires_grad;
  Var o = push(std::move(out), rg, nullptr);
  if (rg) {
    int oi = o.id;
    nodes_[oi].backprop = [ai, bi, oi](Tape& t) {
      const Matrix& g = t.nodes_[oi].grad;
      t.accumulate(ai, mgwb::hadamard(g, t.nodes_[bi].value));
      t.accumulate(bi, mgwb::hadamard(g, t.nodes_[ai].value));
    };
  }
  return o;
}

Var Tape::scale(Var a, double s) { return affine(a, s, 0.0); }

Var Tape::affine(Var a, double mul, double shift) {
  int ai = check(a);
  const Matrix& x = value(a);
  Matrix out(x.rows, x.cols);
  for (size_t i = 0; i < x.size(); ++i) out.data[i] = mul * x.data[i] + shift;
  bool rg = nodes_[ai].requires_grad;
  Var o = push(std::move(out), rg, nullptr);
  if (rg) {
    int oi = o.id;
    nodes_[oi].backprop = [ai, oi, mul](Tape& t) {
      t.accumulate(ai, mgwb::scale(t.nodes_[oi].grad, mul));
    };
  }
  return o;
}

Var Tape::relu(Var a) {
  int ai = check(a);
  const Matrix& x = value(a);
  Matrix out(x.rows, x.cols);
  uint64_t word = 0;
  int nbits = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    bool pos = x.data[i] > 0.0;
    out.data[i] = pos ? x.data[i] : 0.0;
    word = (word << 1) | uint64_t(pos);
    if (++nbits == 64) {
      relu_hash_ = (relu_hash_ ^ word) * 0x100000001b3ULL;
      word = 0;
      nbits = 0;
    }
  }
  if (nbits) relu_hash_ = (relu_hash_ ^ (word | (uint64_t(nbits) << 57))) * 0x100000001b3ULL;
  bool rg = nodes_[ai].requires_grad;
  Var o = push(std::move(out), rg, nullptr);
  if (rg) {
    int oi = o.id;
    nodes_[oi].backprop = [ai, oi](Tape& t) {
      const Matrix& g = t.nodes_[oi].grad;
      const Matrix& xin = t.nodes_[ai].value;
      Matrix d(g.rows, g.cols);
      for (size_t i = 0; i < g.size(); ++i)
        d.data[i] = xin.data[i] > 0.0 ? g.data[i] : 0.0;
      t.accumulate(ai, d);
    };
  }
  return o;
}

Var Tape::sigmoid(Var a) {
  int ai = check(a);
  Matrix out = mgwb::sigmoid(value(a));
  bool rg = nodes_[ai].requires_grad;
  Var o = push(std::move(out), rg, nullptr);
  if (rg) {
    int oi = o.id;
    nodes_[oi].backprop = [ai, oi](Tape& t) {
      const Matrix& g = t.nodes_[oi].grad;
      const Matrix& y = t.nodes_[oi].value;
      Matrix d(g.rows, g.cols);
      for (size_t i = 0; i < g.size(); ++i)
        d.data[i] = g.data[i] * y.data[i] * (1.0 - y.data[i]);
      t.accumulate(ai, d);
    };
  }
  return o;
}

Var Tape::exp_elem(Var a) {
  int ai = check(a);
  Matrix out = mgwb::exp_elem(value(a));
  bool rg = nodes_[ai].requires_grad;
  Var o = push(std::move(out), rg, nullptr);
  if (rg) {
    int oi = o.id;
    nodes_[oi].backprop = [ai, oi](Tape& t) {
      t.accumulate(ai, mgwb::hadamard(t.nodes_[oi].grad, t.nodes_[oi].value));
    };
  }
  return o;
}

Var Tape::log_elem(Var a) {
  int ai = check(a);
  Matrix out = mgwb::log_elem(value(a));
  bool rg = nodes_[ai].requires_grad;
  Var o = push(std::move(out), rg, nullptr);
  if (rg) {
    int oi = o.id;
    nodes_[oi].backprop = [ai, oi](Tape& t) {
      const Matrix& g = t.nodes_[oi].grad;
      const Matrix& x = t.nodes_[ai].value;
      Matrix d(g.rows, g.cols);
      for (size_t i = 0; i < g.size(); ++i) d.data[i] = g.data[i] / x.data[i];
      t.accumulate(ai, d);
    };
  }
  return o;
}

Var Tape::sqrt_elem(Var a) {
  int ai = check(a);
  const Matrix& x = value(a);
  Matrix out(x.rows, x.cols);
  for (size_t i = 0; i < x.size(); ++i) out.data[i] = std::sqrt(x.data[i]);
  bool rg = nodes_[ai].requires_grad;
  Var o = push(std::move(out), rg, nullptr);
  if (rg) {
    int oi = o.id;
    nodes_[oi].backprop = [ai, oi](Tape& t) {
      const Matrix& g = t.nodes_[oi].grad;
      const Matrix& y = t.nodes_[oi].value;
      Matrix d(g.rows, g.cols);
      for (size_t i = 0; i < g.size(); ++i) d.data[i] = 0.5 * g.data[i] / y.data[i];
      t.accumulate(ai, d);
    };
  }
  return o;
}

Var Tape::mean_rows(Var a) {
  int ai = check(a);
  const Matrix& x = value(a);
  Matrix out = mgwb::mean_rows(x);
  bool rg = nodes_[ai].requires_grad;
  int nrows = x.rows;
  Var o = push(std::move(out), rg, nullptr);
  if (rg) {
    int oi = o.id;
    nodes_[oi].backprop = [ai, oi, nrows](Tape& t) {
      const Matrix& g = t.nodes_[oi].grad;
      const Matrix& x2 = t.nodes_[ai].value;
      Matrix d(x2.rows, x2.cols);
      for (int r = 0; r < x2.rows; ++r)
        for (int c = 0; c < x2.cols; ++c) d(r, c) = g(0, c) / nrows;
      t.accumulate(ai, d);
    };
  }
  return o;
}

Var Tape::sum_to_scalar(Var a) {
  int ai = check(a);
  Matrix out = Matrix::scalar(sum_all(value(a)));
  bool rg = nodes_[ai].requires_grad;
  Var o = push(std::move(out), rg, nullptr);
  if (rg) {
    int oi = o.id;
    nodes_[oi].backprop = [ai, oi](Tape& t) {
      double g = t.nodes_[oi].grad.data[0];
      const Matrix& x = t.nodes_[ai].value;
      Matrix d(x.rows, x.cols, g);
      t.accumulate(ai, d);
    };
  }
  return o;
}

Var Tape::mean_all(Var a) {
  const Matrix& x = value(a);
  double inv = 1.0 / double(x.size());
  return scale(sum_to_scalar(a), inv);
}

Var Tape::add_rowvec(Var a, Var row) {
  int ai = check(a), ri = check(row);
  const Matrix& x = value(a);
  const Matrix& v = value(row);
  if (v.rows != 1 || v.cols != x.cols)
    throw std::invalid_argument("add_rowvec: shape mismatch " + x.shape_str() +
                                " + " + v.shape_str());
  Matrix out(x.rows, x.cols);
  for (int r = 0; r < x.rows; ++r)
    for (int c = 0; c < x.cols; ++c) out(r, c) = x(r, c) + v(0, c);
  bool rg = nodes_[ai].requires_grad || nodes_[ri].requires_grad;
  Var o = push(std::move(out), rg, nullptr);
  if (rg) {
    int oi = o.id;
    nodes_[oi].backprop = [ai, ri, oi](Tape& t) {
      const Matrix& g = t.nodes_[oi].grad;
      t.add_into(ai, g.data.data(), g.size());
      Matrix dv(1, g.cols);
      for (int r = 0; r < g.rows; ++r)
        for (int c = 0; c < g.cols; ++c) dv(0, c) += g(r, c);
      t.accumulate(ri, dv);
    };
  }
  return o;
}

Var Tape::sub_rowvec(Var a, Var row) {
  Var neg = scale(row, -1.0);
  return add_rowvec(a, neg);
}

Var Tape::hconcat(Var a, Var b) {
  int ai = check(a), bi = check(b);
  const Matrix& x = value(a);
  const Matrix& y = value(b);
  Matrix out = mgwb::hconcat(x, y);
  bool rg = nodes_[ai].requires_grad || nodes_[bi].requires_grad;
  int ac = x.cols;
  Var o = push(std::move(out), rg, nullptr);
  if (rg) {
    int oi = o.id;
    nodes_[oi].backprop = [ai, bi, oi, ac](Tape& t) {
      const Matrix& g = t.nodes_[oi].grad;
      Matrix da(g.rows, ac), db(g.rows, g.cols - ac);
      for (int r = 0; r < g.rows; ++r) {
        for (int c = 0; c < ac; ++c) da(r, c) = g(r, c);
        for (int c = ac; c < g.cols; ++c) db(r, c - ac) = g(r, c);
      }
      t.accumulate(ai, da);
      t.accumulate(bi, db);
    };
  }
  return o;
}

Var Tape::gather_rows(Var a, std::vector<int> idx) {
  int ai = check(a);
  Matrix out = mgwb::gather_rows(value(a), idx);
  bool rg = nodes_[ai].requires_grad;
  Var o = push(std::move(out), rg, nullptr);
  if (rg) {
    int oi = o.id;
    auto ix = std::make_shared<std::vector<int>>(std::move(idx));
    nodes_[oi].backprop = [ai, oi, ix](Tape& t) {
      const Matrix& g = t.nodes_[oi].grad;
      Matrix& acc = t.grad_buf(ai);
      for (size_t i = 0; i < ix->size(); ++i) {
        const double* src = g.row(int(i));
        double* dst = acc.row((*ix)[i]);
        for (int c = 0; c < g.cols; ++c) dst[c] += src[c];
      }
    };
  }
  return o;
}

Var Tape::neighbor_mean(Var h, const Csr* adj) {
  int hi = check(h);
  const Matrix& x = value(h);
  if (adj->node_count() != x.rows)
    throw std::invalid_argument("neighbor_mean: adjacency rows " +
                                std::to_string(adj->node_count()) +
                                " vs features " + x.shape_str());
  Matrix out(x.rows, x.cols);
  for (int v = 0; v < x.rows; ++v) {
    int deg = adj->degree(v);
    if (deg == 0) continue;  // isolated node keeps zero neighbor mean
    double* dst = out.row(v);
    for (int e = adj->offsets[v]; e < adj->offsets[v + 1]; ++e) {
      const double* src = x.row(adj->targets[e]);
      for (int c = 0; c < x.cols; ++c) dst[c] += src[c];
    }
    double inv = 1.0 / deg;
    for (int c = 0; c < x.cols; ++c) dst[c] *= inv;
  }
  bool rg = nodes_[hi].requires_grad;
  Var o = push(std::move(out), rg, nullptr);
  if (rg) {
    int oi = o.id;
    nodes_[oi].backprop = [hi, oi, adj](Tape& t) {
      const Matrix& g = t.nodes_[oi].grad;
      Matrix& acc = t.grad_buf(hi);
      for (int v = 0; v < g.rows; ++v) {
        int deg = adj->degree(v);
        if (deg == 0) continue;
        double inv = 1.0 / deg;
        const double* src = g.row(v);
        for (int e = adj->offsets[v]; e < adj->offsets[v + 1]; ++e) {
          double* dst = acc.row(adj->targets[e]);
          for (int c = 0; c < g.cols; ++c) dst[c] += src[c] * inv;
        }
      }
    };
  }
  return o;
}

Var Tape::layer_norm(Var a, Var gain, Var bias, double eps) {
  int ai = check(a), gi = check(gain), bi = check(bias);
  const Matrix& x = value(a);
  const Matrix& gn = value(gain);
  const Matrix& bs = value(bias);
  if (gn.cols != x.cols || bs.cols != x.cols)
    throw std::invalid_argument("layer_norm: affine shape mismatch");
  auto cache = std::make_shared<std::pair<Matrix, std::vector<double>>>();
  Matrix& xhat = cache->first;
  std::vector<double>& inv_std = cache->second;
  xhat = Matrix(x.rows, x.cols);
  inv_std.resize(x.rows);
  Matrix out(x.rows, x.cols);
  for (int r = 0; r < x.rows; ++r) {
    double mean = 0.0;
    for (int c = 0; c < x.cols; ++c) mean += x(r, c);
    mean /= x.cols;
    double var = 0.0;
    for (int c = 0; c < x.cols; ++c) {
      double d = x(r, c) - mean;
      var += d * d;
    }
    var /= x.cols;
    double inv = 1.0 / std::sqrt(var + eps);
    inv_std[r] = inv;
    for (int c = 0; c < x.cols; ++c) {
      xhat(r, c) = (x(r, c) - mean) * inv;
      out(r, c) = xhat(r, c) * gn(0, c) + bs(0, c);
    }
  }
  bool rg = nodes_[ai].requires_grad || nodes_[gi].requires_grad ||
            nodes_[bi].requires_grad;
  Var o = push(std::move(out), rg, nullptr);
  if (rg) {
    int oi = o.id;
    nodes_[oi].backprop = [ai, gi, bi, oi, cache](Tape& t) {
      const Matrix& g = t.nodes_[oi].grad;
      const Matrix& gn2 = t.nodes_[gi].value;
      const Matrix& xh = cache->first;
      const std::vector<double>& inv = cache->second;
      int C = g.cols;
      Matrix dgain(1, C), dbias(1, C), dx(g.rows, C);
      for (int r = 0; r < g.rows; ++r) {
        double sum_dxh = 0.0, sum_dxh_xh = 0.0;
        for (int c = 0; c < C; ++c) {
          double dxh = g(r, c) * gn2(0, c);
          sum_dxh += dxh;
          sum_dxh_xh += dxh * xh(r, c);
          dgain(0, c) += g(r, c) * xh(r, c);
          dbias(0, c) += g(r, c);
        }
        for (int c = 0; c < C; ++c) {
          double dxh = g(r, c) * gn2(0, c);
          dx(r, c) = inv[r] * (dxh - (sum_dxh + xh(r, c) * sum_dxh_xh) / C);
        }
      }
      t.accumulate(ai, dx);
      t.accumulate(gi, dgain);
      t.accumulate(bi, dbias);
    };
  }
  return o;
}

Var Tape::l2_normalize_rows(Var a) {
  int ai = check(a);
  const Matrix& x = value(a);
  auto norms = std::make_shared<std::vector<double>>(x.rows);
  Matrix out(x.rows, x.cols);
  for (int r = 0; r < x.rows; ++r) {
    double s = 0.0;
    for (int c = 0; c < x.cols; ++c) s += x(r, c) * x(r, c);
    double n = std::sqrt(s);
    (*norms)[r] = n;
    if (n < 1e-12) continue;
    for (int c = 0; c < x.cols; ++c) out(r, c) = x(r, c) / n;
  }
  bool rg = nodes_[ai].requires_grad;
  Var o = push(std::move(out), rg, nullptr);
  if (rg) {
    int oi = o.id;
    nodes_[oi].backprop = [ai, oi, norms](Tape& t) {
      const Matrix& g = t.nodes_[oi].grad;
      const Matrix& y = t.nodes_[oi].value;  // normalized rows
      Matrix d(g.rows, g.cols);
      for (int r = 0; r < g.rows; ++r) {
        double n = (*norms)[r];
        if (n < 1e-12) continue;
        double dot = 0.0;
        for (int c = 0; c < g.cols; ++c) dot += g(r, c) * y(r, c);
        for (int c = 0; c < g.cols; ++c)
          d(r, c) = (g(r, c) - y(r, c) * dot) / n;
      }
      t.accumulate(ai, d);
    };
  }
  return o;
}

Var Tape::softmax_temp(Var scores, double tau) {
  int si = check(scores);
  Matrix out = mgwb::softmax_temp(value(scores), tau);
  bool rg = nodes_[si].requires_grad;
  Var o = push(std::move(out), rg, nullptr);
  if (rg) {
    int oi = o.id;
    nodes_[oi].backprop = [si, oi, tau](Tape& t) {
      const Matrix& g = t.nodes_[oi].grad;
      const Matrix& w = t.nodes_[oi].value;
      double s = 0.0;
      for (int r = 0; r < g.rows; ++r) s += g(r, 0) * w(r, 0);
      Matrix d(g.rows, 1);
      for (int r = 0; r < g.rows; ++r) d(r, 0) = w(r, 0) * (g(r, 0) - s) / tau;
      t.accumulate(si, d);
    };
  }
  return o;
}

Var Tape::normalize_sum(Var col) {
  int ci = check(col);
  const Matrix& x = value(col);
  if (x.cols != 1)
    throw std::invalid_argument("normalize_sum: expected column vector, got " +
                                x.shape_str());
  double s = sum_all(x);
  Matrix out = mgwb::scale(x, 1.0 / s);
  bool rg = nodes_[ci].requires_grad;
  Var o = push(std::move(out), rg, nullptr);
  if (rg) {
    int oi = o.id;
    nodes_[oi].backprop = [ci, oi, s](Tape& t) {
      const Matrix& g = t.nodes_[oi].grad;
      const Matrix& y = t.nodes_[oi].value;
      double dot = 0.0;
      for (int r = 0; r < g.rows; ++r) dot += g(r, 0) * y(r, 0);
      Matrix d(g.rows, 1);
      for (int r = 0; r < g.rows; ++r) d(r, 0) = (g(r, 0) - dot) / s;
      t.accumulate(ci, d);
    };
  }
  return o;
}

Var Tape::stop_gradient(Var a, SgFreeze* ctx) {
  check(a);
  Matrix v;
  if (ctx && ctx->replay) {
    if (ctx->cursor >= ctx->values.size())
      throw std::logic_error("stop_gradient: replay past recorded values");
    v = ctx->values[ctx->cursor++];
  } else {
    v = value(a);
    if (ctx) ctx->values.push_back(v);
  }
  return push(std::move(v), false, nullptr);
}

Var Tape::mse(Var a, Var b) {
  int ai = check(a), bi = check(b);
  const Matrix& x = value(a);
  const Matrix& y = value(b);
  check_same_shape("mse", x, y);
  double s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    double d = x.data[i] - y.data[i];
    s += d * d;
  }
  double inv = 1.0 / double(x.size());
  bool rg = nodes_[ai].requires_grad || nodes_[bi].requires_grad;
  Var o = push(Matrix::scalar(s * inv), rg, nullptr);
  if (rg) {
    int oi = o.id;
    nodes_[oi].backprop = [ai, bi, oi, inv](Tape& t) {
      double g = t.nodes_[oi].grad.data[0];
      const Matrix& x2 = t.nodes_[ai].value;
      const Matrix& y2 = t.nodes_[bi].value;
      Matrix d(x2.rows, x2.cols);
      for (size_t i = 0; i < x2.size(); ++i)
        d.data[i] = 2.0 * g * inv * (x2.data[i] - y2.data[i]);
      t.accumulate(ai, d);
      t.accumulate(bi, mgwb::scale(d, -1.0));
    };
  }
  return o;
}

Var Tape::softmax_cross_entropy(Var logits, std::vector<int> labels) {
  int li = check(logits);
  const Matrix& x = value(logits);
  if (int(labels.size()) != x.rows)
    throw std::invalid_argument("softmax_cross_entropy: label count mismatch");
  auto probs = std::make_shared<Matrix>(x.rows, x.cols);
  double loss = 0.0;
  for (int r = 0; r < x.rows; ++r) {
    double mx = x(r, 0);
    for (int c = 1; c < x.cols; ++c) mx = std::max(mx, x(r, c));
    double z = 0.0;
    for (int c = 0; c < x.cols; ++c) {
      (*probs)(r, c) = std::exp(x(r, c) - mx);
      z += (*probs)(r, c);
    }
    for (int c = 0; c < x.cols; ++c) (*probs)(r, c) /= z;
    loss -= std::log(std::max((*probs)(r, labels[r]), 1e-300));
  }
  loss /= x.rows;
  bool rg = nodes_[li].requires_grad;
  Var o = push(Matrix::scalar(loss), rg, nullptr);
  if (rg) {
    int oi = o.id;
    auto lab = std::make_shared<std::vector<int>>(std::move(labels));
    nodes_[oi].backprop = [li, oi, probs, lab](Tape& t) {
      double g = t.nodes_[oi].grad.data[0];
      Matrix d = *probs;
      int R = d.rows;
      for (int r = 0; r < R; ++r) d(r, (*lab)[r]) -= 1.0;
      for (size_t i = 0; i < d.size(); ++i) d.data[i] *= g / R;
      t.accumulate(li, d);
    };
  }
  return o;
}

Var Tape::binary_cross_entropy_logits(Var scores, std::vector<int> labels) {
  int si = check(scores);
  const Matrix& x = value(scores);
  if (x.cols != 1 || int(labels.size()) != x.rows)
    throw std::invalid_argument("binary_cross_entropy_logits: shape mismatch");
  double loss = 0.0;
  for (int r = 0; r < x.rows; ++r) {
    double s = x(r, 0);
    // softplus(s) - y*s, stable form
    loss += std::max(s, 0.0) + std::log1p(std::exp(-std::fabs(s))) -
            double(labels[r]) * s;
  }
  loss /= x.rows;
  bool rg = nodes_[si].requires_grad;
  Var o = push(Matrix::scalar(loss), rg, nullptr);
  if (rg) {
    int oi = o.id;
    auto lab = std::make_shared<std::vector<int>>(std::move(labels));
    nodes_[oi].backprop = [si, oi, lab](Tape& t) {
      double g = t.nodes_[oi].grad.data[0];
      const Matrix& x2 = t.nodes_[si].value;
      int R = x2.rows;
      Matrix d(R, 1);
      for (int r = 0; r < R; ++r) {
        double p = 1.0 / (1.0 + std::exp(-x2(r, 0)));
        d(r, 0) = g * (p - double((*lab)[r])) / R;
      }
      t.accumulate(si, d);
    };
  }
  return o;
}

}  // namespace mgwb
