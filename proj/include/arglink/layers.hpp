#pragma once

#include <string>
#include <utility>
#include <vector>

#include "arglink/autograd.hpp"
#include "arglink/rng.hpp"
#include "arglink/tensor.hpp"

namespace arglink {

enum class Activation { none, sigmoid };

/// Fully-connected transform y = activation(W x + b).
struct FcParams {
  Tensor weight;  // [out x in]
  Tensor bias;    // [out]
  Activation activation = Activation::sigmoid;

  std::size_t out_size() const { return weight.dim(0); }
  std::size_t in_size() const { return weight.dim(1); }

  void validate() const {
    require_rank(weight, 2, "fc weight");
    require_rank(bias, 1, "fc bias");
    if (weight.dim(0) != bias.dim(0)) {
      throw DimensionError("fc: weight rows " + weight.shape_str() + " vs bias " +
                           bias.shape_str());
    }
  }
};

inline FcParams make_fc(std::size_t out, std::size_t in, Activation act, Rng& rng) {
  FcParams p;
  p.weight = init_param({out, in}, InitScheme::uniform_scaled, rng);
  p.bias = init_param({out}, InitScheme::zeros, rng);
  p.activation = act;
  return p;
}

/// Standard LSTM cell with a forget gate. Gate order everywhere is
/// input, forget, cell candidate, output.
struct LstmParams {
  Tensor w_input, u_input, b_input;
  Tensor w_forget, u_forget, b_forget;
  Tensor w_cell, u_cell, b_cell;
  Tensor w_output, u_output, b_output;

  std::size_t hidden_size() const { return b_input.dim(0); }
  std::size_t input_size() const { return w_input.dim(1); }

  void validate() const {
    const std::size_t h = hidden_size(), k = input_size();
    auto check = [&](const Tensor& w, const Tensor& u, const Tensor& b, const char* gate) {
      if (w.rank() != 2 || w.dim(0) != h || w.dim(1) != k || u.rank() != 2 || u.dim(0) != h ||
          u.dim(1) != h || b.rank() != 1 || b.dim(0) != h) {
        throw DimensionError(std::string("lstm gate '") + gate + "' inconsistent with h=" +
                             std::to_string(h) + " k=" + std::to_string(k));
      }
    };
    check(w_input, u_input, b_input, "input");
    check(w_forget, u_forget, b_forget, "forget");
    check(w_cell, u_cell, b_cell, "cell");
    check(w_output, u_output, b_output, "output");
  }
};

inline LstmParams make_lstm(std::size_t hidden, std::size_t input, Rng& rng,
                            double forget_bias_init = 1.0) {
  LstmParams p;
  auto gate = [&](Tensor& w, Tensor& u, Tensor& b) {
    w = init_param({hidden, input}, InitScheme::uniform_scaled, rng);
    u = init_param({hidden, hidden}, InitScheme::uniform_scaled, rng);
    b = init_param({hidden}, InitScheme::zeros, rng);
  };
  gate(p.w_input, p.u_input, p.b_input);
  gate(p.w_forget, p.u_forget, p.b_forget);
  gate(p.w_cell, p.u_cell, p.b_cell);
  gate(p.w_output, p.u_output, p.b_output);
  for (double& v : p.b_forget.data()) v = forget_bias_init;
  return p;
}

/// Additive attention scorer: score_j = score_vec . tanh(enc_proj e_j + query_proj q).
struct AttentionParams {
  Tensor enc_proj;    // [a x e_dim]
  Tensor query_proj;  // [a x q_dim]
  Tensor score_vec;   // [a]

  std::size_t attn_size() const { return score_vec.dim(0); }

  void validate() const {
    require_rank(enc_proj, 2, "attention enc_proj");
    require_rank(query_proj, 2, "attention query_proj");
    require_rank(score_vec, 1, "attention score_vec");
    if (enc_proj.dim(0) != score_vec.dim(0) || query_proj.dim(0) != score_vec.dim(0)) {
      throw DimensionError("attention: projection rows " + enc_proj.shape_str() + ", " +
                           query_proj.shape_str() + " must match score_vec " +
                           score_vec.shape_str());
    }
  }
};

inline AttentionParams make_attention(std::size_t attn, std::size_t enc_dim, std::size_t query_dim,
                                      Rng& rng) {
  AttentionParams p;
  p.enc_proj = init_param({attn, enc_dim}, InitScheme::uniform_scaled, rng);
  p.query_proj = init_param({attn, query_dim}, InitScheme::uniform_scaled, rng);
  p.score_vec = init_param({attn}, InitScheme::uniform_scaled, rng);
  return p;
}

// --- tape-level application -------------------------------------------------

struct FcVars {
  Var weight;
  Var bias;
  Activation activation;
};

inline FcVars lift(Tape& t, const FcParams& p, bool needs_grad = true) {
  p.validate();
  return {t.leaf(p.weight, needs_grad), t.leaf(p.bias, needs_grad), p.activation};
}

inline Var fc_apply(Tape& t, const FcVars& p, Var x) {
  Var y = t.add(t.matvec(p.weight, x), p.bias);
  return p.activation == Activation::sigmoid ? t.sigmoid(y) : y;
}

struct LstmVars {
  Var w_input, u_input, b_input;
  Var w_forget, u_forget, b_forget;
  Var w_cell, u_cell, b_cell;
  Var w_output, u_output, b_output;
};

inline LstmVars lift(Tape& t, const LstmParams& p, bool needs_grad = true) {
  p.validate();
  auto L = [&](const Tensor& v) { return t.leaf(v, needs_grad); };
  return {L(p.w_input),  L(p.u_input),  L(p.b_input),  L(p.w_forget),
          L(p.u_forget), L(p.b_forget), L(p.w_cell),   L(p.u_cell),
          L(p.b_cell),   L(p.w_output), L(p.u_output), L(p.b_output)};
}

struct LstmState {
  Var h;
  Var c;
};

inline LstmState lstm_apply(Tape& t, const LstmVars& p, Var x, LstmState prev) {
  auto gate = [&](Var w, Var u, Var b) { return t.add(t.add(t.matvec(w, x), t.matvec(u, prev.h)), b); };
  Var gate_in = t.sigmoid(gate(p.w_input, p.u_input, p.b_input));
  Var gate_forget = t.sigmoid(gate(p.w_forget, p.u_forget, p.b_forget));
  Var candidate = t.tanh_op(gate(p.w_cell, p.u_cell, p.b_cell));
  Var gate_out = t.sigmoid(gate(p.w_output, p.u_output, p.b_output));
  Var c = t.add(t.mul(gate_forget, prev.c), t.mul(gate_in, candidate));
  Var h = t.mul(gate_out, t.tanh_op(c));
  return {h, c};
}

inline LstmState lstm_zero_state(Tape& t, std::size_t hidden) {
  return {t.constant(Tensor::zeros({hidden})), t.constant(Tensor::zeros({hidden}))};
}

/// Bidirectional pass: output i is concat(forward state at i, backward state
/// produced while consuming input i from the right).
inline std::vector<Var> blstm_apply(Tape& t, const std::vector<Var>& inputs, const LstmVars& fwd,
                                    const LstmVars& bwd, std::size_t hidden) {
  if (inputs.empty()) throw std::invalid_argument("blstm: empty input sequence");
  const std::size_t n = inputs.size();
  std::vector<Var> forward(n), backward(n);
  LstmState state = lstm_zero_state(t, hidden);
  for (std::size_t i = 0; i < n; ++i) {
    state = lstm_apply(t, fwd, inputs[i], state);
    forward[i] = state.h;
  }
  state = lstm_zero_state(t, hidden);
  for (std::size_t i = n; i-- > 0;) {
    state = lstm_apply(t, bwd, inputs[i], state);
    backward[i] = state.h;
  }
  std::vector<Var> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = t.concat(forward[i], backward[i]);
  return out;
}

struct AttnVars {
  Var enc_proj;
  Var query_proj;
  Var score_vec;
};

inline AttnVars lift(Tape& t, const AttentionParams& p, bool needs_grad = true) {
  p.validate();
  return {t.leaf(p.enc_proj, needs_grad), t.leaf(p.query_proj, needs_grad),
          t.leaf(p.score_vec, needs_grad)};
}

/// One score per encoder position for a fixed query.
inline Var attention_scores(Tape& t, const AttnVars& p, const std::vector<Var>& enc, Var query) {
  if (enc.empty()) throw std::invalid_argument("attention_scores: empty encoder sequence");
  Var projected_query = t.matvec(p.query_proj, query);
  std::vector<Var> scores(enc.size());
  for (std::size_t j = 0; j < enc.size(); ++j) {
    Var joint = t.tanh_op(t.add(t.matvec(p.enc_proj, enc[j]), projected_query));
    scores[j] = t.dot(p.score_vec, joint);
  }
  return t.stack(scores);
}

// --- value-level entry points (single implementation: a throwaway tape) -----

inline Tensor fc_forward(const Tensor& x, const FcParams& p) {
  Tape t;
  return fc_apply(t, lift(t, p, false), t.constant(x))->value;
}

inline std::pair<Tensor, Tensor> lstm_step(const Tensor& x, const Tensor& h_prev,
                                           const Tensor& c_prev, const LstmParams& p) {
  Tape t;
  LstmState out = lstm_apply(t, lift(t, p, false), t.constant(x),
                             {t.constant(h_prev), t.constant(c_prev)});
  return {out.h->value, out.c->value};
}

inline std::vector<Tensor> blstm_encode(const std::vector<Tensor>& inputs, const LstmParams& fwd,
                                        const LstmParams& bwd) {
  Tape t;
  std::vector<Var> in;
  in.reserve(inputs.size());
  for (const Tensor& x : inputs) in.push_back(t.constant(x));
  std::vector<Var> out =
      blstm_apply(t, in, lift(t, fwd, false), lift(t, bwd, false), fwd.hidden_size());
  std::vector<Tensor> values;
  values.reserve(out.size());
  for (Var v : out) values.push_back(v->value);
  return values;
}

inline Tensor pointer_scores(const std::vector<Tensor>& enc, const Tensor& query,
                             const AttentionParams& p) {
  Tape t;
  std::vector<Var> e;
  e.reserve(enc.size());
  for (const Tensor& x : enc) e.push_back(t.constant(x));
  return attention_scores(t, lift(t, p, false), e, t.constant(query))->value;
}

}  // namespace arglink
