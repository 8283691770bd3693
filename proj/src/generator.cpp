#include "shiftlab/generator.hpp"

#include "shiftlab/errors.hpp"

#include <cmath>
#include <sstream>

namespace shiftlab {

Index GeneratorNet::embed_dim() const {
  return embedding == LabelEmbedding::OneHot ? static_cast<Index>(label_values.size())
                                             : cond_dim;
}

Index GeneratorNet::input_dim() const { return embed_dim() + noise_dim + theta_dim; }

std::vector<Index> GeneratorNet::layer_widths() const {
  std::vector<Index> widths;
  widths.push_back(input_dim());
  for (const Index h : hidden) widths.push_back(h);
  widths.push_back(out_dim);
  return widths;
}

Index GeneratorNet::param_count() const {
  const auto widths = layer_widths();
  Index count = 0;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l)
    count += widths[l] * widths[l + 1] + widths[l + 1];
  return count;
}

void GeneratorNet::init_params(Rng& rng) {
  const auto widths = layer_widths();
  weights.clear();
  biases.clear();
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    const Index fan_in = widths[l];
    const Index fan_out = widths[l + 1];
    const Scalar bound = 1.0 / std::sqrt(static_cast<Scalar>(fan_in));
    Matrix w(fan_in, fan_out);
    for (Index i = 0; i < fan_in; ++i)
      for (Index j = 0; j < fan_out; ++j) w(i, j) = bound * (2.0 * rng.uniform() - 1.0);
    weights.push_back(std::move(w));
    biases.push_back(RowVector::Zero(fan_out));
  }
}

Vector GeneratorNet::flatten_params() const {
  Vector flat(param_count());
  Index at = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    const Matrix& w = weights[l];
    for (Index i = 0; i < w.rows(); ++i)
      for (Index j = 0; j < w.cols(); ++j) flat(at++) = w(i, j);
    for (Index j = 0; j < biases[l].cols(); ++j) flat(at++) = biases[l](0, j);
  }
  return flat;
}

void GeneratorNet::unflatten_params(const VectorRef& flat) {
  if (flat.size() != param_count())
    throw ContractError("unflatten_params: flat vector length mismatch");
  Index at = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    Matrix& w = weights[l];
    for (Index i = 0; i < w.rows(); ++i)
      for (Index j = 0; j < w.cols(); ++j) w(i, j) = flat(at++);
    for (Index j = 0; j < biases[l].cols(); ++j) biases[l](0, j) = flat(at++);
  }
}

Matrix GeneratorNet::embed_inputs(const MatrixRef& cond, const MatrixRef& noise) const {
  if (noise.cols() != noise_dim) throw ShapeError("embed_inputs: noise width mismatch");
  if (cond.rows() != noise.rows()) throw ShapeError("embed_inputs: cond/noise row mismatch");
  Matrix emb;
  if (embedding == LabelEmbedding::OneHot) {
    if (cond.cols() != 1) throw ShapeError("embed_inputs: one-hot expects a single label column");
    emb = Matrix::Zero(cond.rows(), static_cast<Index>(label_values.size()));
    for (Index i = 0; i < cond.rows(); ++i) {
      Index slot = -1;
      for (std::size_t c = 0; c < label_values.size(); ++c)
        if (label_values[c] == cond(i, 0)) slot = static_cast<Index>(c);
      if (slot < 0) {
        std::ostringstream os;
        os << "embed_inputs: label " << cond(i, 0) << " not in the declared label set";
        throw ContractError(os.str());
      }
      emb(i, slot) = 1.0;
    }
  } else {
    if (cond.cols() != cond_dim) throw ShapeError("embed_inputs: conditioning width mismatch");
    emb = cond;
  }
  Matrix base(emb.rows(), emb.cols() + noise.cols());
  base << emb, noise;
  return base;
}

Matrix GeneratorNet::forward(const MatrixRef& base_input, const RowVector& theta) const {
  if (theta.cols() != theta_dim)
    throw ContractError("forward: theta length mismatch");
  if (base_input.cols() + theta_dim != input_dim())
    throw ShapeError("forward: input block width mismatch");
  Matrix z(base_input.rows(), input_dim());
  if (theta_dim > 0)
    z << base_input, theta.replicate(base_input.rows(), 1);
  else
    z = base_input;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    z = (z * weights[l]).rowwise() + biases[l].row(0);
    if (l + 1 < weights.size()) {
      if (activation == Activation::Tanh)
        z = z.array().tanh().matrix();
      else
        z = z.cwiseMax(0.0);
    }
  }
  return z;
}

Var TapedGenerator::forward(Tape& tape, const Matrix& base_input, Var theta_row) const {
  Var z;
  if (net->theta_dim > 0) {
    if (!theta_row.valid()) throw ContractError("taped forward: missing theta row");
    const Var base = tape.constant(base_input);
    z = tape.hcat(base, tape.replicate_row(theta_row, base_input.rows()));
  } else {
    z = tape.constant(base_input);
  }
  for (std::size_t l = 0; l < weights.size(); ++l) {
    z = tape.add_row(tape.matmul(z, weights[l]), biases[l]);
    if (l + 1 < weights.size())
      z = net->activation == Activation::Tanh ? tape.tanh(z) : tape.relu(z);
  }
  return z;
}

Vector TapedGenerator::collect_grads(const Tape& tape) const {
  Vector flat(net->param_count());
  Index at = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    const Matrix& gw = tape.grad(weights[l]);
    for (Index i = 0; i < gw.rows(); ++i)
      for (Index j = 0; j < gw.cols(); ++j) flat(at++) = gw(i, j);
    const Matrix& gb = tape.grad(biases[l]);
    for (Index j = 0; j < gb.cols(); ++j) flat(at++) = gb(0, j);
  }
  return flat;
}

TapedGenerator stage_generator(Tape& tape, const GeneratorNet& net) {
  TapedGenerator staged;
  staged.net = &net;
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    staged.weights.push_back(tape.parameter(net.weights[l]));
    staged.biases.push_back(tape.parameter(net.biases[l]));
  }
  return staged;
}

Var theta_column_row(Tape& tape, Var theta_matrix, Index s) {
  const Index cols = tape.value(theta_matrix).cols();
  if (s < 0 || s >= cols) throw ContractError("theta_column_row: column out of range");
  Matrix onehot = Matrix::Zero(cols, 1);
  onehot(s, 0) = 1.0;
  return tape.transpose(tape.matmul(theta_matrix, tape.constant(onehot)));
}

std::pair<Matrix, Vector> generate_labeled(const GeneratorNet& net, const RowVector& theta,
                                           const Vector& labels, Rng& rng) {
  if (theta.cols() != net.theta_dim)
    throw ContractError("generate_labeled: theta length mismatch");
  if (labels.size() < 1) throw ContractError("generate_labeled: empty label list");
  Matrix cond(labels.size(), 1);
  cond.col(0) = labels;
  const Matrix noise = rng.gaussian_matrix(labels.size(), net.noise_dim);
  const Matrix base = net.embed_inputs(cond, noise);
  return {net.forward(base, theta), labels};
}

LabelPrior LabelPrior::from_class_counts(const std::vector<Vector>& label_columns) {
  std::vector<Scalar> values;
  std::vector<Index> counts;
  Index total = 0;
  for (const Vector& col : label_columns)
    for (Index i = 0; i < col.size(); ++i) {
      const Scalar v = col(i);
      bool found = false;
      for (std::size_t c = 0; c < values.size(); ++c)
        if (values[c] == v) {
          ++counts[c];
          found = true;
          break;
        }
      if (!found) {
        values.push_back(v);
        counts.push_back(1);
      }
      ++total;
    }
  if (total == 0) throw ContractError("LabelPrior: no labels supplied");

  // Sort classes by code for a stable layout.
  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  LabelPrior prior;
  prior.categorical = true;
  for (const std::size_t i : order) {
    prior.values.push_back(values[i]);
    prior.probs.push_back(static_cast<Scalar>(counts[i]) / static_cast<Scalar>(total));
  }
  prior.validate();
  return prior;
}

LabelPrior LabelPrior::from_pool(const std::vector<Vector>& label_columns) {
  Index total = 0;
  for (const Vector& col : label_columns) total += col.size();
  if (total == 0) throw ContractError("LabelPrior: no labels supplied");
  LabelPrior prior;
  prior.categorical = false;
  prior.pool.resize(total);
  Index at = 0;
  for (const Vector& col : label_columns)
    for (Index i = 0; i < col.size(); ++i) prior.pool(at++) = col(i);
  return prior;
}

void LabelPrior::validate() const {
  if (!categorical) {
    if (pool.size() == 0) throw ContractError("LabelPrior: empty pool");
    return;
  }
  if (values.empty() || values.size() != probs.size())
    throw ContractError("LabelPrior: class/probability size mismatch");
  Scalar sum = 0.0;
  for (const Scalar p : probs) {
    if (p < 0.0) throw ContractError("LabelPrior: negative class probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw ContractError("LabelPrior: probabilities do not sum to 1");
}

Vector LabelPrior::sample(Index n, Rng& rng) const {
  if (n < 1) throw ContractError("LabelPrior: sample size must be >= 1");
  Vector out(n);
  if (categorical) {
    for (Index i = 0; i < n; ++i) {
      const Scalar u = rng.uniform();
      Scalar acc = 0.0;
      Scalar value = values.back();
      for (std::size_t c = 0; c < values.size(); ++c) {
        acc += probs[c];
        if (u < acc) {
          value = values[c];
          break;
        }
      }
      out(i) = value;
    }
  } else {
    for (Index i = 0; i < n; ++i) out(i) = pool(rng.uniform_index(pool.size()));
  }
  return out;
}

}  // namespace shiftlab
