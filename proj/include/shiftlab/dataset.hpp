#pragma once

#include "shiftlab/rng.hpp"
#include "shiftlab/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace shiftlab {

// One domain's sample: n x D features, optional label column, stable feature
// names. Target domains carry no labels.
struct DomainDataset {
  std::string domain;
  Matrix X;
  std::optional<Vector> y;
  std::vector<std::string> feature_names;

  Index rows() const { return X.rows(); }
  Index dim() const { return X.cols(); }
  bool labeled() const { return y.has_value(); }
};

struct CsvSchema {
  std::vector<std::string> feature_columns;
  std::optional<std::string> label_column;
  std::string domain_column;
};

struct CsvLoadResult {
  std::vector<DomainDataset> datasets;
  // 1-based data row numbers dropped for unparseable numerics.
  std::vector<Index> rejected_rows;
};

// UTF-8, header row, comma separator; missing label cell = empty string.
// Datasets come back ordered by first appearance of their domain value.
CsvLoadResult load_csv(const std::string& path, const CsvSchema& schema);

// Inverse of load_csv; numerics rendered with 17 significant digits so the
// round trip is exact.
void save_csv(const std::string& path, const std::vector<DomainDataset>& datasets,
              const std::string& label_column = "label",
              const std::string& domain_column = "domain");

// Seed-deterministic disjoint split; stratified by class for labeled data.
std::pair<DomainDataset, DomainDataset> split(const DomainDataset& dataset, Scalar fraction,
                                              std::uint64_t seed);

// Sorted distinct label values of a labeled dataset.
std::vector<Scalar> class_values(const Vector& labels);

}  // namespace shiftlab
