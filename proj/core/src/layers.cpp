#include "clsgen/layers.hpp"

#include <cmath>

#include "clsgen/errors.hpp"

namespace clsgen::tc {

Mat& ParameterSet::create(const std::string& name, int rows, int cols) {
  if (entries_.count(name)) throw ModelError("parameter already exists: " + name);
  Entry e;
  e.value = Mat::Zero(rows, cols);
  e.m = Mat::Zero(rows, cols);
  e.v = Mat::Zero(rows, cols);
  auto [it, ok] = entries_.emplace(name, std::move(e));
  (void)ok;
  return it->second.value;
}

Mat& ParameterSet::value(const std::string& name) {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw ModelError("unknown parameter: " + name);
  return it->second.value;
}

const Mat& ParameterSet::value(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw ModelError("unknown parameter: " + name);
  return it->second.value;
}

ParameterSet::Entry& ParameterSet::entry(const std::string& name) {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw ModelError("unknown parameter: " + name);
  return it->second;
}

std::vector<std::string> ParameterSet::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [k, _] : entries_) out.push_back(k);
  return out;
}

std::map<std::string, Var> ParameterSet::bind(Tape& tape, bool track) const {
  std::map<std::string, Var> out;
  for (const auto& [k, e] : entries_) out.emplace(k, tape.leaf(e.value, track));
  return out;
}

Checkpoint ParameterSet::to_checkpoint(std::map<std::string, std::string> metadata) const {
  Checkpoint ck;
  ck.metadata = std::move(metadata);
  ck.metadata["step"] = std::to_string(step_);
  for (const auto& [k, e] : entries_) ck.tensors.emplace(k, Tensor::from_matrix(e.value));
  return ck;
}

ParameterSet ParameterSet::from_checkpoint(const Checkpoint& ck, const std::string& tensor_prefix) {
  ParameterSet ps;
  for (const auto& [name, t] : ck.tensors) {
    if (name.rfind(tensor_prefix, 0) != 0) continue;
    std::string local = name.substr(tensor_prefix.size());
    if (t.shape.size() != 2) throw DataError("parameter tensor must be rank 2: " + name);
    Mat v = t.to_matrix();
    ps.create(local, static_cast<int>(v.rows()), static_cast<int>(v.cols())) = v;
  }
  auto it = ck.metadata.find("step");
  if (it != ck.metadata.end()) ps.step_ = std::stoll(it->second);
  return ps;
}

Var bound_at(const BoundParams& b, const std::string& name) {
  auto it = b.find(name);
  if (it == b.end()) throw ModelError("unbound parameter: " + name);
  return it->second;
}

void init_xavier(Mat& w, Rng& rng) {
  double a = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
  for (Eigen::Index r = 0; r < w.rows(); ++r)
    for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = rng.uniform(-a, a);
}

void init_zero(Mat& w) { w.setZero(); }

void GruCell::init(ParameterSet& ps, Rng& rng) const {
  init_xavier(ps.create(prefix + ".W", input_dim, 3 * hidden), rng);
  init_xavier(ps.create(prefix + ".U_ru", hidden, 2 * hidden), rng);
  init_xavier(ps.create(prefix + ".U_n", hidden, hidden), rng);
  init_zero(ps.create(prefix + ".b", 1, 3 * hidden));
}

Var GruCell::step(Tape& t, const BoundParams& p, Var x, Var h) const {
  const int H = hidden;
  Var px = t.add_rowvec(t.matmul(x, bound_at(p, prefix + ".W")), bound_at(p, prefix + ".b"));
  Var ph = t.matmul(h, bound_at(p, prefix + ".U_ru"));
  Var r = t.sigmoid(t.add(t.slice_cols(px, 0, H), t.slice_cols(ph, 0, H)));
  Var u = t.sigmoid(t.add(t.slice_cols(px, H, H), t.slice_cols(ph, H, H)));
  Var n = t.tanh_op(t.add(t.slice_cols(px, 2 * H, H), t.matmul(t.cmul(r, h), bound_at(p, prefix + ".U_n"))));
  // (1-u).*n + u.*h  ==  n - u.*n + u.*h
  return t.add(t.sub(n, t.cmul(u, n)), t.cmul(u, h));
}

void LstmCell::init(ParameterSet& ps, Rng& rng) const {
  init_xavier(ps.create(prefix + ".W", input_dim, 4 * hidden), rng);
  init_xavier(ps.create(prefix + ".U", hidden, 4 * hidden), rng);
  Mat& b = ps.create(prefix + ".b", 1, 4 * hidden);
  b.setZero();
  b.middleCols(hidden, hidden).setOnes();  // forget gate bias
}

std::pair<Var, Var> LstmCell::step(Tape& t, const BoundParams& p, Var x, Var c, Var h) const {
  const int H = hidden;
  Var pre = t.add(t.add_rowvec(t.matmul(x, bound_at(p, prefix + ".W")), bound_at(p, prefix + ".b")),
                  t.matmul(h, bound_at(p, prefix + ".U")));
  Var i = t.sigmoid(t.slice_cols(pre, 0, H));
  Var f = t.sigmoid(t.slice_cols(pre, H, H));
  Var g = t.tanh_op(t.slice_cols(pre, 2 * H, H));
  Var o = t.sigmoid(t.slice_cols(pre, 3 * H, H));
  Var c2 = t.add(t.cmul(f, c), t.cmul(i, g));
  Var h2 = t.cmul(o, t.tanh_op(c2));
  return {h2, c2};
}

void Linear::init(ParameterSet& ps, Rng& rng) const {
  init_xavier(ps.create(prefix + ".W", input_dim, output_dim), rng);
  init_zero(ps.create(prefix + ".b", 1, output_dim));
}

Var Linear::apply(Tape& t, const BoundParams& p, Var x) const {
  return t.add_rowvec(t.matmul(x, bound_at(p, prefix + ".W")), bound_at(p, prefix + ".b"));
}

namespace {

Mat step_mask_matrix(const Mat& mask, Eigen::Index t, int hidden) {
  return mask.col(t).replicate(1, hidden);
}

}  // namespace

std::vector<Var> run_gru(Tape& t, const BoundParams& p, const GruCell& cell, const std::vector<Var>& x_steps,
                         const Mat& mask, bool reverse, Var h0) {
  const Eigen::Index B = mask.rows();
  const Eigen::Index T = static_cast<Eigen::Index>(x_steps.size());
  Var h = h0.valid() ? h0 : t.leaf(Mat::Zero(B, cell.hidden));
  std::vector<Var> out(static_cast<size_t>(T));
  for (Eigen::Index k = 0; k < T; ++k) {
    Eigen::Index ti = reverse ? T - 1 - k : k;
    Var hn = cell.step(t, p, x_steps[static_cast<size_t>(ti)], h);
    Mat m = step_mask_matrix(mask, ti, cell.hidden);
    // h <- m .* hn + (1-m) .* h
    h = t.add(t.mul_mask(hn, m), t.mul_mask(h, Mat::Ones(B, cell.hidden) - m));
    out[static_cast<size_t>(ti)] = h;
  }
  return out;
}

std::vector<Var> run_lstm(Tape& t, const BoundParams& p, const LstmCell& cell, const std::vector<Var>& x_steps,
                          const Mat& mask, bool reverse) {
  const Eigen::Index B = mask.rows();
  const Eigen::Index T = static_cast<Eigen::Index>(x_steps.size());
  Var h = t.leaf(Mat::Zero(B, cell.hidden));
  Var c = t.leaf(Mat::Zero(B, cell.hidden));
  std::vector<Var> out(static_cast<size_t>(T));
  for (Eigen::Index k = 0; k < T; ++k) {
    Eigen::Index ti = reverse ? T - 1 - k : k;
    auto [hn, cn] = cell.step(t, p, x_steps[static_cast<size_t>(ti)], c, h);
    Mat m = step_mask_matrix(mask, ti, cell.hidden);
    Mat im = Mat::Ones(B, cell.hidden) - m;
    h = t.add(t.mul_mask(hn, m), t.mul_mask(h, im));
    c = t.add(t.mul_mask(cn, m), t.mul_mask(c, im));
    out[static_cast<size_t>(ti)] = h;
  }
  return out;
}

std::vector<Mat> gru_forward(const ParameterSet& ps, const IMat& tokens, RnnDirection direction, int hidden_size,
                             int pad_id) {
  if (hidden_size <= 0) throw ModelError("gru_forward: hidden_size must be positive");
  const Eigen::Index B = tokens.rows();
  const Eigen::Index T = tokens.cols();
  const Mat& emb = ps.value("emb");

  Tape tape;
  BoundParams bound = ps.bind(tape, /*track=*/false);

  Mat mask(B, T);
  for (Eigen::Index r = 0; r < B; ++r)
    for (Eigen::Index c = 0; c < T; ++c) {
      int id = tokens(r, c);
      if (id < 0 || id >= emb.rows()) throw ModelError("gru_forward: token id outside vocabulary");
      mask(r, c) = id == pad_id ? 0.0 : 1.0;
    }

  std::vector<Var> x_steps(static_cast<size_t>(T));
  for (Eigen::Index c = 0; c < T; ++c) {
    std::vector<int> ids(static_cast<size_t>(B));
    for (Eigen::Index r = 0; r < B; ++r) ids[static_cast<size_t>(r)] = tokens(r, c);
    x_steps[static_cast<size_t>(c)] = tape.rows(bound_at(bound, "emb"), ids);
  }

  GruCell fwd{"gru_fwd", static_cast<int>(emb.cols()), hidden_size};
  std::vector<std::vector<Var>> streams;
  if (direction == RnnDirection::kForward || direction == RnnDirection::kBidirectional)
    streams.push_back(run_gru(tape, bound, fwd, x_steps, mask, /*reverse=*/false));
  if (direction == RnnDirection::kBackward || direction == RnnDirection::kBidirectional) {
    GruCell bwd{"gru_bwd", static_cast<int>(emb.cols()), hidden_size};
    // A pure backward RNN reuses the fwd parameters when only one direction
    // is requested but gru_bwd is absent.
    const std::string prefix = ps.has("gru_bwd.W") ? "gru_bwd" : "gru_fwd";
    GruCell cell{prefix, static_cast<int>(emb.cols()), hidden_size};
    streams.push_back(run_gru(tape, bound, cell, x_steps, mask, /*reverse=*/true));
  }

  std::vector<Mat> out(static_cast<size_t>(T));
  for (Eigen::Index c = 0; c < T; ++c) {
    if (streams.size() == 1) {
      out[static_cast<size_t>(c)] = tape.val(streams[0][static_cast<size_t>(c)]);
    } else {
      Var cat = tape.concat_cols(streams[0][static_cast<size_t>(c)], streams[1][static_cast<size_t>(c)]);
      out[static_cast<size_t>(c)] = tape.val(cat);
    }
  }
  return out;
}

}  // namespace clsgen::tc
