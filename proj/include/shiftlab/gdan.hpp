#pragma once

#include "shiftlab/dataset.hpp"
#include "shiftlab/generator.hpp"
#include "shiftlab/kernels.hpp"
#include "shiftlab/types.hpp"

#include <string>
#include <vector>

namespace shiftlab {

// Bandwidth policy for training: median-scaled multipliers (default) or the
// fixed list.
struct KernelSettings {
  bool median_mode = true;
  std::vector<Scalar> multipliers = median_multipliers();
  std::vector<Scalar> fixed = fixed_bandwidths();

  KernelConfig resolve(const MatrixRef& pooled_features) const;
};

struct TrainConfig {
  Scalar alpha = 1.0;  // source/target balance
  Index batch = 128;
  Index iterations = 2000;
  Scalar learning_rate = 1e-3;
  Scalar rho = 0.9;
  Scalar epsilon = 1e-8;
  KernelSettings kernel;
  std::uint64_t seed = 0;

  void validate() const;
};

// Latent column per domain: m source columns then one target column.
struct ThetaMatrix {
  Matrix columns;  // d x (m+1)

  Index latent_dim() const { return columns.rows(); }
  Index domain_count() const { return columns.cols(); }
  RowVector domain_row(Index s) const;
  RowVector target_row() const { return domain_row(domain_count() - 1); }
};

struct GdanModel {
  GeneratorNet net;
  ThetaMatrix theta;
  LabelPrior prior;
  KernelConfig kernel_x;
  LabelKernel kernel_y;
  std::vector<std::string> domain_names;  // sources..., then target
  std::vector<std::string> feature_names;
};

struct LossTrace {
  std::vector<Scalar> total;
  std::vector<Scalar> source;
  std::vector<Scalar> target;
};

struct GdanFit {
  GdanModel model;
  LossTrace trace;
};

// Joint minimization of sum_s joint-MMD(source s) + alpha * marginal-MMD(target)
// over the generator parameters and all Theta columns.
GdanFit train_gdan(const std::vector<DomainDataset>& sources, const MatrixRef& target_features,
                   const GeneratorNet& arch, const TrainConfig& cfg);

// Evenly spaced convex combinations, endpoints included.
std::vector<RowVector> interpolate_domains(const RowVector& a, const RowVector& b, Index count);

}  // namespace shiftlab
