#pragma once

#include <map>
#include <string>
#include <vector>

#include "clsgen/checkpoint.hpp"
#include "clsgen/rng.hpp"
#include "clsgen/tape.hpp"

namespace clsgen::tc {

using IMat = Eigen::MatrixXi;  // token-id batches, rows = batch

// Named parameters with persistent Adam moments. Ordered map so that
// iteration (and therefore updates, serialization, gradient clipping) is
// deterministic.
class ParameterSet {
 public:
  struct Entry {
    Mat value;
    Mat m;  // first moment
    Mat v;  // second moment
  };

  Mat& create(const std::string& name, int rows, int cols);
  bool has(const std::string& name) const { return entries_.count(name) > 0; }
  Mat& value(const std::string& name);
  const Mat& value(const std::string& name) const;
  Entry& entry(const std::string& name);

  std::vector<std::string> names() const;
  int64_t step() const { return step_; }
  void set_step(int64_t s) { step_ = s; }

  // Registers every parameter as a tracked leaf on the tape.
  std::map<std::string, Var> bind(Tape& tape, bool track = true) const;

  Checkpoint to_checkpoint(std::map<std::string, std::string> metadata) const;
  static ParameterSet from_checkpoint(const Checkpoint& ck, const std::string& tensor_prefix = "");

 private:
  std::map<std::string, Entry> entries_;
  int64_t step_ = 0;
  friend struct AdamConfig;
  friend void adam_apply(ParameterSet&, const std::map<std::string, Mat>&, const struct AdamConfig&);
};

using BoundParams = std::map<std::string, Var>;

Var bound_at(const BoundParams& b, const std::string& name);

// Xavier-uniform init in place.
void init_xavier(Mat& w, Rng& rng);
void init_zero(Mat& w);

// GRU cell, original formulation (reset gate applied to the previous state
// before the candidate transform):
//   r = sigmoid(x Wr + h Ur + br)
//   u = sigmoid(x Wu + h Uu + bu)
//   n = tanh(x Wn + (r .* h) Un + bn)
//   h' = (1 - u) .* n + u .* h
// Parameters live under "<prefix>." in a ParameterSet: W (E x 3H, gate order
// r|u|n), U_ru (H x 2H), U_n (H x H), b (1 x 3H).
struct GruCell {
  std::string prefix;
  int input_dim = 0;
  int hidden = 0;

  void init(ParameterSet& ps, Rng& rng) const;
  Var step(Tape& t, const BoundParams& p, Var x, Var h) const;
};

// LSTM cell, standard formulation, gate order i|f|g|o. Parameters:
// W (E x 4H), U (H x 4H), b (1 x 4H). Forget-gate bias initialized to 1.
struct LstmCell {
  std::string prefix;
  int input_dim = 0;
  int hidden = 0;

  void init(ParameterSet& ps, Rng& rng) const;
  // Returns (h', c').
  std::pair<Var, Var> step(Tape& t, const BoundParams& p, Var x, Var c, Var h) const;
};

struct Linear {
  std::string prefix;
  int input_dim = 0;
  int output_dim = 0;

  void init(ParameterSet& ps, Rng& rng) const;
  Var apply(Tape& t, const BoundParams& p, Var x) const;
};

enum class RnnDirection { kForward, kBackward, kBidirectional };

// Embeds a token batch and runs a (possibly bidirectional) masked GRU over
// time. PAD positions (token id == pad_id) carry the previous hidden state
// through unchanged, so padding never influences the result. Returns one
// (batch x hidden*dirs) matrix per timestep.
// Expects parameters "emb" (vocab x emb_dim), "gru_fwd.*" and, for the
// bidirectional case, "gru_bwd.*".
std::vector<Mat> gru_forward(const ParameterSet& ps, const IMat& tokens, RnnDirection direction, int hidden_size,
                             int pad_id);

// Per-step masked recurrence helpers used by the models; x_steps[t] is the
// already-embedded input at step t. mask is (batch x T) of 0/1.
std::vector<Var> run_gru(Tape& t, const BoundParams& p, const GruCell& cell, const std::vector<Var>& x_steps,
                         const Mat& mask, bool reverse, Var h0 = Var{});
std::vector<Var> run_lstm(Tape& t, const BoundParams& p, const LstmCell& cell, const std::vector<Var>& x_steps,
                          const Mat& mask, bool reverse);

}  // namespace clsgen::tc
