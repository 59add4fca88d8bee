#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace clsgen::tc {

using Mat = Eigen::MatrixXd;

// Handle into a Tape node.
struct Var {
  int i = -1;
  bool valid() const { return i >= 0; }
};

// Define-by-run reverse-mode tape over dense matrices. One tape per training
// iteration; parameters enter as tracked leaves and their gradients are read
// back after backward(). Node order is creation order, which is a valid
// topological order for backpropagation.
class Tape {
 public:
  Var leaf(const Mat& value, bool track = false);

  const Mat& val(Var v) const { return nodes_[v.i].value; }
  const Mat& grad(Var v) const { return nodes_[v.i].grad; }

  // Seeds d(root)/d(root) = 1 and accumulates gradients into every tracked
  // node. root must be 1x1.
  void backward(Var root);

  size_t node_count() const { return nodes_.size(); }

  // --- arithmetic ---
  Var matmul(Var a, Var b);
  Var add(Var a, Var b);          // same shape
  Var sub(Var a, Var b);          // same shape
  Var add_rowvec(Var a, Var b);   // b: 1 x cols(a), broadcast over rows
  Var cmul(Var a, Var b);         // elementwise
  Var affine(Var a, double k, double c);  // k*a + c
  Var square(Var a);

  // --- nonlinearities ---
  Var tanh_op(Var a);
  Var sigmoid(Var a);
  Var cos_op(Var a);
  Var exp_op(Var a);
  Var softplus(Var a);  // log(1 + e^x), overflow-safe
  Var clamp(Var a, double lo, double hi);  // zero gradient outside [lo, hi]

  // --- structure ---
  Var concat_cols(Var a, Var b);
  Var slice_cols(Var a, int from, int n);
  Var mul_mask(Var a, const Mat& mask);  // elementwise by a constant
  Var rows(Var table, const std::vector<int>& ids);  // embedding lookup; scatter-add backward

  // --- reductions ---
  Var sum(Var a);       // 1x1
  Var mean(Var a);      // 1x1
  Var row_sum(Var a);   // n x 1
  Var col_mean(Var a);  // 1 x m
  Var weighted_sum(Var a, const Mat& w);  // 1x1, sum(a .* w)

  // Softmax cross-entropy, summed over rows with per-row weights:
  //   loss = sum_i w_i * (-log softmax(logits_i)[target_i])
  // Numerically stable (max-shifted). Returns 1x1.
  Var softmax_xent(Var logits, const std::vector<int>& targets, const Eigen::VectorXd& row_weights);

  // Row-wise log-softmax of a value (no gradient; decode-time scoring).
  static Mat log_softmax(const Mat& logits);

 private:
  struct Node {
    Mat value;
    Mat grad;
    bool track = false;
    std::function<void()> backprop;  // empty for leaves
  };

  Var emplace(Mat value, bool track, std::function<void()> backprop = {});
  Mat& grad_ref(int i);
  void accumulate(int i, const Mat& g);

  std::vector<Node> nodes_;
};

}  // namespace clsgen::tc
