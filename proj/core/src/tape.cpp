#include "clsgen/tape.hpp"

#include <cmath>

#include "clsgen/errors.hpp"

namespace clsgen::tc {

Var Tape::emplace(Mat value, bool track, std::function<void()> backprop) {
  Node n;
  n.value = std::move(value);
  n.track = track;
  n.backprop = std::move(backprop);
  nodes_.push_back(std::move(n));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Var Tape::leaf(const Mat& value, bool track) { return emplace(value, track); }

Mat& Tape::grad_ref(int i) {
  Node& n = nodes_[static_cast<size_t>(i)];
  if (n.grad.size() == 0) n.grad = Mat::Zero(n.value.rows(), n.value.cols());
  return n.grad;
}

void Tape::accumulate(int i, const Mat& g) {
  if (!nodes_[static_cast<size_t>(i)].track) return;
  grad_ref(i) += g;
}

void Tape::backward(Var root) {
  if (val(root).rows() != 1 || val(root).cols() != 1) throw ModelError("backward: root must be scalar");
  grad_ref(root.i) = Mat::Ones(1, 1);
  for (int i = root.i; i >= 0; --i) {
    Node& n = nodes_[static_cast<size_t>(i)];
    if (!n.track || !n.backprop) continue;
    if (n.grad.size() == 0) continue;  // not on any path to root
    n.backprop();
  }
}

Var Tape::matmul(Var a, Var b) {
  const bool track = nodes_[a.i].track || nodes_[b.i].track;
  Mat v = val(a) * val(b);
  Var out = emplace(std::move(v), track);
  if (track) {
    int ai = a.i, bi = b.i, oi = out.i;
    nodes_[out.i].backprop = [this, ai, bi, oi] {
      const Mat& g = nodes_[oi].grad;
      accumulate(ai, g * nodes_[bi].value.transpose());
      accumulate(bi, nodes_[ai].value.transpose() * g);
    };
  }
  return out;
}

Var Tape::add(Var a, Var b) {
  const bool track = nodes_[a.i].track || nodes_[b.i].track;
  Var out = emplace(val(a) + val(b), track);
  if (track) {
    int ai = a.i, bi = b.i, oi = out.i;
    nodes_[out.i].backprop = [this, ai, bi, oi] {
      const Mat& g = nodes_[oi].grad;
      accumulate(ai, g);
      accumulate(bi, g);
    };
  }
  return out;
}

Var Tape::sub(Var a, Var b) {
  const bool track = nodes_[a.i].track || nodes_[b.i].track;
  Var out = emplace(val(a) - val(b), track);
  if (track) {
    int ai = a.i, bi = b.i, oi = out.i;
    nodes_[out.i].backprop = [this, ai, bi, oi] {
      const Mat& g = nodes_[oi].grad;
      accumulate(ai, g);
      accumulate(bi, -g);
    };
  }
  return out;
}

Var Tape::add_rowvec(Var a, Var b) {
  if (val(b).rows() != 1 || val(b).cols() != val(a).cols()) throw ModelError("add_rowvec: shape mismatch");
  const bool track = nodes_[a.i].track || nodes_[b.i].track;
  Mat v = val(a).rowwise() + val(b).row(0);
  Var out = emplace(std::move(v), track);
  if (track) {
    int ai = a.i, bi = b.i, oi = out.i;
    nodes_[out.i].backprop = [this, ai, bi, oi] {
      const Mat& g = nodes_[oi].grad;
      accumulate(ai, g);
      accumulate(bi, g.colwise().sum());
    };
  }
  return out;
}

Var Tape::cmul(Var a, Var b) {
  const bool track = nodes_[a.i].track || nodes_[b.i].track;
  Var out = emplace(val(a).cwiseProduct(val(b)), track);
  if (track) {
    int ai = a.i, bi = b.i, oi = out.i;
    nodes_[out.i].backprop = [this, ai, bi, oi] {
      const Mat& g = nodes_[oi].grad;
      accumulate(ai, g.cwiseProduct(nodes_[bi].value));
      accumulate(bi, g.cwiseProduct(nodes_[ai].value));
    };
  }
  return out;
}

Var Tape::affine(Var a, double k, double c) {
  const bool track = nodes_[a.i].track;
  Var out = emplace((val(a).array() * k + c).matrix(), track);
  if (track) {
    int ai = a.i, oi = out.i;
    nodes_[out.i].backprop = [this, ai, oi, k] { accumulate(ai, nodes_[oi].grad * k); };
  }
  return out;
}

Var Tape::square(Var a) {
  const bool track = nodes_[a.i].track;
  Var out = emplace(val(a).cwiseProduct(val(a)), track);
  if (track) {
    int ai = a.i, oi = out.i;
    nodes_[out.i].backprop = [this, ai, oi] {
      accumulate(ai, 2.0 * nodes_[oi].grad.cwiseProduct(nodes_[ai].value));
    };
  }
  return out;
}

Var Tape::tanh_op(Var a) {
  const bool track = nodes_[a.i].track;
  Var out = emplace(val(a).array().tanh().matrix(), track);
  if (track) {
    int ai = a.i, oi = out.i;
    nodes_[out.i].backprop = [this, ai, oi] {
      const Mat& y = nodes_[oi].value;
      accumulate(ai, nodes_[oi].grad.cwiseProduct((1.0 - y.array().square()).matrix()));
    };
  }
  return out;
}

Var Tape::sigmoid(Var a) {
  const bool track = nodes_[a.i].track;
  Mat v = (0.5 * (val(a).array() * 0.5).tanh() + 0.5).matrix();  // stable logistic
  Var out = emplace(std::move(v), track);
  if (track) {
    int ai = a.i, oi = out.i;
    nodes_[out.i].backprop = [this, ai, oi] {
      const Mat& y = nodes_[oi].value;
      accumulate(ai, nodes_[oi].grad.cwiseProduct((y.array() * (1.0 - y.array())).matrix()));
    };
  }
  return out;
}

Var Tape::cos_op(Var a) {
  const bool track = nodes_[a.i].track;
  Var out = emplace(val(a).array().cos().matrix(), track);
  if (track) {
    int ai = a.i, oi = out.i;
    nodes_[out.i].backprop = [this, ai, oi] {
      accumulate(ai, -nodes_[oi].grad.cwiseProduct(nodes_[ai].value.array().sin().matrix()));
    };
  }
  return out;
}

Var Tape::exp_op(Var a) {
  const bool track = nodes_[a.i].track;
  Var out = emplace(val(a).array().exp().matrix(), track);
  if (track) {
    int ai = a.i, oi = out.i;
    nodes_[out.i].backprop = [this, ai, oi] {
      accumulate(ai, nodes_[oi].grad.cwiseProduct(nodes_[oi].value));
    };
  }
  return out;
}

Var Tape::softplus(Var a) {
  const bool track = nodes_[a.i].track;
  Mat v = val(a).unaryExpr([](double x) { return x > 30.0 ? x : std::log1p(std::exp(x)); });
  Var out = emplace(std::move(v), track);
  if (track) {
    int ai = a.i, oi = out.i;
    nodes_[out.i].backprop = [this, ai, oi] {
      const Mat s = (0.5 * (nodes_[ai].value.array() * 0.5).tanh() + 0.5).matrix();
      accumulate(ai, nodes_[oi].grad.cwiseProduct(s));
    };
  }
  return out;
}

Var Tape::clamp(Var a, double lo, double hi) {
  const bool track = nodes_[a.i].track;
  Mat v = val(a).array().max(lo).min(hi).matrix();
  Var out = emplace(std::move(v), track);
  if (track) {
    int ai = a.i, oi = out.i;
    nodes_[out.i].backprop = [this, ai, oi, lo, hi] {
      const Mat& x = nodes_[ai].value;
      Mat inside = ((x.array() >= lo) && (x.array() <= hi)).cast<double>().matrix();
      accumulate(ai, nodes_[oi].grad.cwiseProduct(inside));
    };
  }
  return out;
}

Var Tape::concat_cols(Var a, Var b) {
  if (val(a).rows() != val(b).rows()) throw ModelError("concat_cols: row mismatch");
  const bool track = nodes_[a.i].track || nodes_[b.i].track;
  Mat v(val(a).rows(), val(a).cols() + val(b).cols());
  v << val(a), val(b);
  Var out = emplace(std::move(v), track);
  if (track) {
    int ai = a.i, bi = b.i, oi = out.i;
    const Eigen::Index ac = val(a).cols(), bc = val(b).cols();
    nodes_[out.i].backprop = [this, ai, bi, oi, ac, bc] {
      const Mat& g = nodes_[oi].grad;
      accumulate(ai, g.leftCols(ac));
      accumulate(bi, g.rightCols(bc));
    };
  }
  return out;
}

Var Tape::slice_cols(Var a, int from, int n) {
  const bool track = nodes_[a.i].track;
  Var out = emplace(val(a).middleCols(from, n), track);
  if (track) {
    int ai = a.i, oi = out.i;
    nodes_[out.i].backprop = [this, ai, oi, from, n] {
      Mat g = Mat::Zero(nodes_[ai].value.rows(), nodes_[ai].value.cols());
      g.middleCols(from, n) = nodes_[oi].grad;
      accumulate(ai, g);
    };
  }
  return out;
}

Var Tape::mul_mask(Var a, const Mat& mask) {
  const bool track = nodes_[a.i].track;
  Var out = emplace(val(a).cwiseProduct(mask), track);
  if (track) {
    int ai = a.i, oi = out.i;
    Mat m = mask;
    nodes_[out.i].backprop = [this, ai, oi, m] { accumulate(ai, nodes_[oi].grad.cwiseProduct(m)); };
  }
  return out;
}

Var Tape::rows(Var table, const std::vector<int>& ids) {
  const bool track = nodes_[table.i].track;
  const Mat& t = val(table);
  Mat v(static_cast<Eigen::Index>(ids.size()), t.cols());
  for (size_t r = 0; r < ids.size(); ++r) {
    if (ids[r] < 0 || ids[r] >= t.rows()) throw ModelError("rows: id out of range");
    v.row(static_cast<Eigen::Index>(r)) = t.row(ids[r]);
  }
  Var out = emplace(std::move(v), track);
  if (track) {
    int ti = table.i, oi = out.i;
    std::vector<int> idcopy = ids;
    nodes_[out.i].backprop = [this, ti, oi, idcopy] {
      Mat g = Mat::Zero(nodes_[ti].value.rows(), nodes_[ti].value.cols());
      const Mat& og = nodes_[oi].grad;
      for (size_t r = 0; r < idcopy.size(); ++r) g.row(idcopy[r]) += og.row(static_cast<Eigen::Index>(r));
      accumulate(ti, g);
    };
  }
  return out;
}

Var Tape::sum(Var a) {
  const bool track = nodes_[a.i].track;
  Mat v(1, 1);
  v(0, 0) = val(a).sum();
  Var out = emplace(std::move(v), track);
  if (track) {
    int ai = a.i, oi = out.i;
    nodes_[out.i].backprop = [this, ai, oi] {
      double g = nodes_[oi].grad(0, 0);
      accumulate(ai, Mat::Constant(nodes_[ai].value.rows(), nodes_[ai].value.cols(), g));
    };
  }
  return out;
}

Var Tape::mean(Var a) {
  double n = static_cast<double>(val(a).size());
  return affine(sum(a), 1.0 / n, 0.0);
}

Var Tape::row_sum(Var a) {
  const bool track = nodes_[a.i].track;
  Var out = emplace(val(a).rowwise().sum(), track);
  if (track) {
    int ai = a.i, oi = out.i;
    nodes_[out.i].backprop = [this, ai, oi] {
      const Mat& g = nodes_[oi].grad;  // n x 1
      accumulate(ai, g * Mat::Ones(1, nodes_[ai].value.cols()));
    };
  }
  return out;
}

Var Tape::col_mean(Var a) {
  const bool track = nodes_[a.i].track;
  double n = static_cast<double>(val(a).rows());
  Var out = emplace(val(a).colwise().mean(), track);
  if (track) {
    int ai = a.i, oi = out.i;
    nodes_[out.i].backprop = [this, ai, oi, n] {
      const Mat& g = nodes_[oi].grad;  // 1 x m
      accumulate(ai, Mat::Ones(nodes_[ai].value.rows(), 1) * (g / n));
    };
  }
  return out;
}

Var Tape::weighted_sum(Var a, const Mat& w) {
  if (w.rows() != val(a).rows() || w.cols() != val(a).cols()) throw ModelError("weighted_sum: shape mismatch");
  const bool track = nodes_[a.i].track;
  Mat v(1, 1);
  v(0, 0) = val(a).cwiseProduct(w).sum();
  Var out = emplace(std::move(v), track);
  if (track) {
    int ai = a.i, oi = out.i;
    Mat wc = w;
    nodes_[out.i].backprop = [this, ai, oi, wc] { accumulate(ai, nodes_[oi].grad(0, 0) * wc); };
  }
  return out;
}

Var Tape::softmax_xent(Var logits, const std::vector<int>& targets, const Eigen::VectorXd& row_weights) {
  const Mat& z = val(logits);
  if (static_cast<Eigen::Index>(targets.size()) != z.rows() || row_weights.size() != z.rows())
    throw ModelError("softmax_xent: row count mismatch");
  Mat probs(z.rows(), z.cols());
  double loss = 0.0;
  for (Eigen::Index r = 0; r < z.rows(); ++r) {
    double mx = z.row(r).maxCoeff();
    Eigen::RowVectorXd e = (z.row(r).array() - mx).exp();
    double s = e.sum();
    probs.row(r) = e / s;
    int t = targets[static_cast<size_t>(r)];
    if (t < 0 || t >= z.cols()) throw ModelError("softmax_xent: target out of range");
    loss += row_weights(r) * (std::log(s) - (z(r, t) - mx));
  }
  Mat v(1, 1);
  v(0, 0) = loss;
  const bool track = nodes_[logits.i].track;
  Var out = emplace(std::move(v), track);
  if (track) {
    int li = logits.i, oi = out.i;
    std::vector<int> tg = targets;
    Eigen::VectorXd wts = row_weights;
    nodes_[out.i].backprop = [this, li, oi, probs, tg, wts] {
      double g = nodes_[oi].grad(0, 0);
      Mat d = probs;
      for (Eigen::Index r = 0; r < d.rows(); ++r) {
        d(r, tg[static_cast<size_t>(r)]) -= 1.0;
        d.row(r) *= g * wts(r);
      }
      accumulate(li, d);
    };
  }
  return out;
}

Mat Tape::log_softmax(const Mat& logits) {
  Mat out(logits.rows(), logits.cols());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    double mx = logits.row(r).maxCoeff();
    double lse = std::log((logits.row(r).array() - mx).exp().sum()) + mx;
    out.row(r) = logits.row(r).array() - lse;
  }
  return out;
}

}  // namespace clsgen::tc
