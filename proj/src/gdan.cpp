#include "shiftlab/gdan.hpp"

#include "shiftlab/errors.hpp"
#include "shiftlab/rmsprop.hpp"

#include <cmath>
#include <sstream>

namespace shiftlab {

KernelConfig KernelSettings::resolve(const MatrixRef& pooled_features) const {
  if (median_mode) return median_heuristic(pooled_features, multipliers);
  KernelConfig cfg;
  cfg.mode = KernelConfig::Mode::FixedList;
  cfg.sigmas = fixed;
  return cfg;
}

void TrainConfig::validate() const {
  if (alpha < 0.0) throw ContractError("train config: alpha must be >= 0");
  if (batch < 2) throw ContractError("train config: batch size must be >= 2");
  if (iterations < 1) throw ContractError("train config: iterations must be >= 1");
  if (!(learning_rate > 0.0)) throw ContractError("train config: learning rate must be > 0");
  if (!(rho > 0.0 && rho < 1.0)) throw ContractError("train config: rho must lie in (0,1)");
  if (!(epsilon > 0.0)) throw ContractError("train config: epsilon must be > 0");
}

RowVector ThetaMatrix::domain_row(Index s) const {
  if (s < 0 || s >= domain_count()) throw ContractError("ThetaMatrix: domain index out of range");
  return columns.col(s).transpose();
}

namespace {

Matrix sample_rows(const MatrixRef& data, Index batch, Rng& rng) {
  Matrix out(batch, data.cols());
  for (Index i = 0; i < batch; ++i) out.row(i) = data.row(rng.uniform_index(data.rows()));
  return out;
}

void sample_pairs(const MatrixRef& x, const Vector& y, Index batch, Rng& rng, Matrix& bx,
                  Vector& by) {
  bx.resize(batch, x.cols());
  by.resize(batch);
  for (Index i = 0; i < batch; ++i) {
    const Index r = rng.uniform_index(x.rows());
    bx.row(i) = x.row(r);
    by(i) = y(r);
  }
}

}  // namespace

GdanFit train_gdan(const std::vector<DomainDataset>& sources, const MatrixRef& target_features,
                   const GeneratorNet& arch, const TrainConfig& cfg) {
  cfg.validate();
  if (sources.empty()) throw ContractError("train_gdan: need at least one labeled source domain");
  if (target_features.rows() == 0) throw ContractError("train_gdan: target features are empty");
  const Index dim = sources.front().dim();
  for (const auto& s : sources) {
    if (!s.labeled()) throw ContractError("train_gdan: source domain '" + s.domain +
                                          "' has no labels");
    if (s.dim() != dim) throw ShapeError("train_gdan: inconsistent feature dimension");
    if (s.rows() == 0) throw ContractError("train_gdan: empty source domain");
  }
  if (target_features.cols() != dim)
    throw ShapeError("train_gdan: target feature dimension mismatch");

  const Index m = static_cast<Index>(sources.size());

  GdanModel model;
  model.net = arch;
  model.net.out_dim = dim;
  model.feature_names = sources.front().feature_names;

  std::vector<Vector> label_columns;
  for (const auto& s : sources) label_columns.push_back(*s.y);
  Matrix pooled_x(0, dim);
  {
    Index total = 0;
    for (const auto& s : sources) total += s.rows();
    pooled_x.resize(total, dim);
    Index at = 0;
    for (const auto& s : sources) {
      pooled_x.middleRows(at, s.rows()) = s.X;
      at += s.rows();
    }
  }

  if (model.net.embedding == LabelEmbedding::OneHot) {
    model.prior = LabelPrior::from_class_counts(label_columns);
    if (model.net.label_values.empty()) model.net.label_values = model.prior.values;
    model.kernel_y.kind = LabelKernel::Kind::Delta;
    model.kernel_y.label_set = model.prior.values;
  } else {
    model.prior = LabelPrior::from_pool(label_columns);
    model.kernel_y.kind = LabelKernel::Kind::Rbf;
    Vector pooled_y(pooled_x.rows());
    Index at = 0;
    for (const auto& col : label_columns) {
      pooled_y.segment(at, col.size()) = col;
      at += col.size();
    }
    model.kernel_y.sigma = median_pairwise_1d(pooled_y);
  }
  model.kernel_x = cfg.kernel.resolve(pooled_x);

  for (const auto& s : sources) model.domain_names.push_back(s.domain);
  model.domain_names.push_back("target");

  Rng init_rng = Rng(cfg.seed).split(0x1217);
  model.net.init_params(init_rng);
  ThetaMatrix theta;
  if (model.net.theta_dim > 0)
    theta.columns = 0.1 * init_rng.gaussian_matrix(model.net.theta_dim, m + 1);
  else
    theta.columns = Matrix::Zero(0, m + 1);

  const Index net_params = model.net.param_count();
  const Index theta_params = theta.columns.size();
  Vector flat(net_params + theta_params);
  flat.head(net_params) = model.net.flatten_params();
  for (Index j = 0, at = net_params; j < theta.columns.cols(); ++j)
    for (Index i = 0; i < theta.columns.rows(); ++i) flat(at++) = theta.columns(i, j);

  RmsPropState opt = RmsPropState::zeros(flat.size(), cfg.learning_rate, cfg.rho, cfg.epsilon);
  Rng data_rng = Rng(cfg.seed).split(0x2113);
  Rng gen_rng = Rng(cfg.seed).split(0x3719);

  LossTrace trace;
  trace.total.reserve(cfg.iterations);

  for (Index iter = 0; iter < cfg.iterations; ++iter) {
    model.net.unflatten_params(flat.head(net_params));
    for (Index j = 0, at = net_params; j < theta.columns.cols(); ++j)
      for (Index i = 0; i < theta.columns.rows(); ++i) theta.columns(i, j) = flat(at++);

    Tape tape;
    TapedGenerator staged = stage_generator(tape, model.net);
    Var theta_leaf;
    if (theta_params > 0) theta_leaf = tape.parameter(theta.columns);

    Var total;
    Scalar source_loss = 0.0;
    for (Index s = 0; s < m; ++s) {
      Matrix data_x;
      Vector data_y;
      sample_pairs(sources[static_cast<std::size_t>(s)].X,
                   *sources[static_cast<std::size_t>(s)].y, cfg.batch, data_rng, data_x, data_y);
      const Vector gen_y = model.prior.sample(cfg.batch, gen_rng);
      Matrix cond(cfg.batch, 1);
      cond.col(0) = gen_y;
      const Matrix noise = gen_rng.gaussian_matrix(cfg.batch, model.net.noise_dim);
      const Matrix base = model.net.embed_inputs(cond, noise);

      Var theta_row;
      if (theta_params > 0) theta_row = theta_column_row(tape, theta_leaf, s);
      const Var gen_x = staged.forward(tape, base, theta_row);
      const Var data_var = tape.constant(data_x);

      const Matrix lpp = label_gram(data_y, data_y, model.kernel_y);
      const Matrix lpq = label_gram(data_y, gen_y, model.kernel_y);
      const Matrix lqq = label_gram(gen_y, gen_y, model.kernel_y);
      const Var j_s = mmd2_joint_op(tape, data_var, gen_x, model.kernel_x, lpp, lpq, lqq);
      total = total.valid() ? tape.add(total, j_s) : j_s;
    }
    source_loss = tape.value_scalar(total);

    Scalar target_loss = 0.0;
    if (cfg.alpha > 0.0) {
      const Matrix data_x = sample_rows(target_features, cfg.batch, data_rng);
      const Vector gen_y = model.prior.sample(cfg.batch, gen_rng);
      Matrix cond(cfg.batch, 1);
      cond.col(0) = gen_y;
      const Matrix noise = gen_rng.gaussian_matrix(cfg.batch, model.net.noise_dim);
      const Matrix base = model.net.embed_inputs(cond, noise);

      Var theta_row;
      if (theta_params > 0) theta_row = theta_column_row(tape, theta_leaf, m);
      const Var gen_x = staged.forward(tape, base, theta_row);
      const Var m_t = mmd2_marginal_op(tape, tape.constant(data_x), gen_x, model.kernel_x);
      target_loss = tape.value_scalar(m_t);
      total = tape.add(total, tape.scale(m_t, cfg.alpha));
    }

    const Scalar loss = tape.value_scalar(total);
    if (!std::isfinite(loss)) {
      std::ostringstream os;
      os << "train_gdan: loss diverged (non-finite) at iteration " << iter;
      throw TrainingDivergedError(os.str(), iter);
    }
    trace.total.push_back(loss);
    trace.source.push_back(source_loss);
    trace.target.push_back(target_loss);

    tape.backward(total);
    Vector grads(flat.size());
    grads.head(net_params) = staged.collect_grads(tape);
    if (theta_params > 0) {
      const Matrix& gt = tape.grad(theta_leaf);
      for (Index j = 0, at = net_params; j < gt.cols(); ++j)
        for (Index i = 0; i < gt.rows(); ++i) grads(at++) = gt(i, j);
    }
    if (!grads.allFinite()) {
      std::ostringstream os;
      os << "train_gdan: gradient diverged (non-finite) at iteration " << iter;
      throw TrainingDivergedError(os.str(), iter);
    }
    rmsprop_step(opt, flat, grads);
  }

  model.net.unflatten_params(flat.head(net_params));
  for (Index j = 0, at = net_params; j < theta.columns.cols(); ++j)
    for (Index i = 0; i < theta.columns.rows(); ++i) theta.columns(i, j) = flat(at++);

  GdanFit fit;
  fit.model = std::move(model);
  fit.model.theta = std::move(theta);
  fit.trace = std::move(trace);
  return fit;
}

std::vector<RowVector> interpolate_domains(const RowVector& a, const RowVector& b, Index count) {
  if (a.cols() != b.cols()) throw ShapeError("interpolate_domains: length mismatch");
  if (count < 2) throw ContractError("interpolate_domains: count must be >= 2");
  std::vector<RowVector> out;
  out.reserve(count);
  for (Index k = 0; k < count; ++k) {
    if (k == 0) {
      out.push_back(a);
    } else if (k == count - 1) {
      out.push_back(b);
    } else {
      const Scalar t = static_cast<Scalar>(k) / static_cast<Scalar>(count - 1);
      out.push_back(a + t * (b - a));
    }
  }
  return out;
}

}  // namespace shiftlab
