#pragma once

#include "shiftlab/rng.hpp"
#include "shiftlab/tape.hpp"
#include "shiftlab/types.hpp"

#include <vector>

namespace shiftlab {

enum class Activation { Tanh, Relu };

// How the conditioning block enters the network input:
//   OneHot  - one label column expanded over label_values
//   Numeric - conditioning columns pass through unchanged (parents, raw labels)
enum class LabelEmbedding { OneHot, Numeric };

// Feed-forward map x = g(cond, e; theta). The input row is the concatenation
// [embedded cond | e | theta]; hidden layers use one activation, the output
// layer is linear.
struct GeneratorNet {
  LabelEmbedding embedding = LabelEmbedding::OneHot;
  std::vector<Scalar> label_values;  // OneHot class codes
  Index cond_dim = 1;                // Numeric conditioning width
  Index noise_dim = 20;
  Index theta_dim = 1;
  Index out_dim = 1;
  std::vector<Index> hidden{128};
  Activation activation = Activation::Tanh;

  std::vector<Matrix> weights;
  std::vector<RowVector> biases;

  Index embed_dim() const;
  Index input_dim() const;
  Index param_count() const;
  std::vector<Index> layer_widths() const;  // input, hidden..., output

  // Fan-in-scaled uniform init for weights, zero biases.
  void init_params(Rng& rng);

  Vector flatten_params() const;
  void unflatten_params(const VectorRef& flat);

  // [embedded cond | noise]; the theta block is appended by the caller.
  Matrix embed_inputs(const MatrixRef& cond, const MatrixRef& noise) const;

  Matrix forward(const MatrixRef& base_input, const RowVector& theta) const;
};

// Network parameters staged as tape leaves for one forward/backward pass.
struct TapedGenerator {
  const GeneratorNet* net = nullptr;
  std::vector<Var> weights;
  std::vector<Var> biases;

  Var forward(Tape& tape, const Matrix& base_input, Var theta_row) const;
  // Gradients in flatten_params() order.
  Vector collect_grads(const Tape& tape) const;
};

TapedGenerator stage_generator(Tape& tape, const GeneratorNet& net);

// Row view of Theta column s via the one-hot product Theta * 1_s.
Var theta_column_row(Tape& tape, Var theta_matrix, Index s);

// One X row per label, fresh noise per row; pairing preserved.
std::pair<Matrix, Vector> generate_labeled(const GeneratorNet& net, const RowVector& theta,
                                           const Vector& labels, Rng& rng);

// Label-generating distribution shared by every domain: class probabilities
// for categorical labels, an empirical pool otherwise.
struct LabelPrior {
  bool categorical = true;
  std::vector<Scalar> values;
  std::vector<Scalar> probs;
  Vector pool;

  static LabelPrior from_class_counts(const std::vector<Vector>& label_columns);
  static LabelPrior from_pool(const std::vector<Vector>& label_columns);

  void validate() const;
  Vector sample(Index n, Rng& rng) const;
};

}  // namespace shiftlab
