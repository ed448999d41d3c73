#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "mgwb/numcore/matrix.hpp"
#include "mgwb/rng.hpp"

namespace mgwb {

// Handle to a value recorded on a Tape.
struct Var {
  int id = -1;
  bool valid() const { return id >= 0; }
};

// Compressed adjacency used by the neighbor-mean primitive.
struct Csr {
  std::vector<int> offsets;  // size n+1
  std::vector<int> targets;
  int node_count() const { return int(offsets.size()) - 1; }
  int degree(int v) const { return offsets[v + 1] - offsets[v]; }
};

// Freeze/replay support for stop-gradient under finite differencing. A
// directional numeric derivative must hold the stop-gradient branch at its
// base-point value, otherwise it measures a different function than the one
// the tape differentiates.
struct SgFreeze {
  bool replay = false;
  size_t cursor = 0;
  std::vector<Matrix> values;
  void start_record() {
    replay = false;
    cursor = 0;
    values.clear();
  }
  void start_replay() {
    replay = true;
    cursor = 0;
  }
};

// Reverse-mode tape. Rebuilt on every forward pass (define-by-run); single
// writer. Each primitive records a closure that routes the output gradient
// to its inputs.
class Tape {
 public:
  Tape() { nodes_.reserve(256); }

  // gradient-tracked leaf (parameters)
  Var leaf(const Matrix& value);
  // untracked input (data)
  Var constant(Matrix value);

  const Matrix& value(Var v) const { return nodes_[check(v)].value; }
  // gradient of the last backward() pass; zeros if the leaf was unused
  const Matrix& grad(Var v);

  // ---- primitives ----
  Var matmul(Var a, Var b);
  Var transpose(Var a);
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var hadamard(Var a, Var b);
  Var scale(Var a, double s);
  Var affine(Var a, double mul, double shift);  // mul*x + shift
  Var relu(Var a);
  Var sigmoid(Var a);
  Var exp_elem(Var a);
  Var log_elem(Var a);
  Var sqrt_elem(Var a);
  Var mean_rows(Var a);                 // 1 x cols
  Var sum_to_scalar(Var a);             // 1x1
  Var mean_all(Var a);                  // 1x1
  Var add_rowvec(Var a, Var row);       // broadcast add over rows
  Var sub_rowvec(Var a, Var row);
  Var hconcat(Var a, Var b);
  Var gather_rows(Var a, std::vector<int> idx);
  Var neighbor_mean(Var h, const Csr* adj);  // adj must outlive backward
  Var layer_norm(Var a, Var gain, Var bias, double eps = 1e-5);
  Var l2_normalize_rows(Var a);
  Var softmax_temp(Var scores, double tau);  // column vector
  Var normalize_sum(Var col);                // x / sum(x), column vector
  Var stop_gradient(Var a, SgFreeze* ctx = nullptr);
  Var mse(Var a, Var b);  // mean over entries of squared difference, 1x1

  // mean cross-entropy of row-wise softmax vs integer labels, 1x1
  Var softmax_cross_entropy(Var logits, std::vector<int> labels);
  // mean binary cross-entropy of sigmoid(scores) vs 0/1 labels, 1x1
  Var binary_cross_entropy_logits(Var scores, std::vector<int> labels);

  // Biased V-statistic of squared MMD with RBF kernels averaged over the
  // bandwidths. Subsampling to a row cap happens outside (gather_rows), so
  // gradients flow to the sampled rows only.
  Var mmd_rbf(Var a, Var b, const std::vector<double>& sigmas);

  // Runs the backward sweep from a scalar loss. May be called once per tape.
  void backward(Var loss);

  // Order-sensitive hash of all ReLU activation signs seen on this tape;
  // used by grad_check to detect kink crossings between perturbed passes.
  uint64_t relu_sign_hash() const { return relu_hash_; }

  size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;  // allocated lazily
    bool requires_grad = false;
    bool grad_touched = false;
    std::function<void(Tape&)> backprop;
  };

  std::vector<Node> nodes_;
  uint64_t relu_hash_ = 0xcbf29ce484222325ULL;
  bool backward_done_ = false;

  int check(Var v) const;
  Var push(Matrix value, bool requires_grad, std::function<void(Tape&)> backprop);
  Matrix& grad_buf(int id);
  void accumulate(int id, const Matrix& delta);
  // direct in-place accumulation helper for hot paths
  void add_into(int id, const double* src, size_t n);

  friend struct TapeTestAccess;
};

}  // namespace mgwb
