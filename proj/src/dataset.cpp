#include "shiftlab/dataset.hpp"

#include "shiftlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

namespace shiftlab {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

bool parse_number(const std::string& text, Scalar& out) {
  if (text.empty()) return false;
  const char* begin = text.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  if (end == begin) return false;
  while (*end == ' ' || *end == '\r' || *end == '\t') ++end;
  return *end == '\0' && std::isfinite(out);
}

std::string render_number(Scalar v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trim_cr(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == '\n')) s.pop_back();
  return s;
}

}  // namespace

CsvLoadResult load_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw DataError("load_csv: cannot open " + path);

  std::string header_line;
  if (!std::getline(in, header_line)) throw SchemaError("load_csv: empty file " + path);
  const std::vector<std::string> header = split_line(trim_cr(header_line));

  auto column_of = [&](const std::string& name) -> Index {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<Index>(i);
    throw SchemaError("load_csv: missing column '" + name + "' in " + path);
  };

  std::vector<Index> feature_idx;
  feature_idx.reserve(schema.feature_columns.size());
  for (const auto& f : schema.feature_columns) feature_idx.push_back(column_of(f));
  const Index domain_idx = column_of(schema.domain_column);
  const Index label_idx = schema.label_column ? column_of(*schema.label_column) : -1;

  struct Bucket {
    std::vector<std::vector<Scalar>> rows;
    std::vector<Scalar> labels;
    Index missing_labels = 0;
  };
  std::vector<std::string> domain_order;
  std::unordered_map<std::string, Bucket> buckets;
  std::vector<Index> rejected;

  std::string line;
  Index row_number = 0;
  while (std::getline(in, line)) {
    ++row_number;
    line = trim_cr(line);
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_line(line);
    if (static_cast<Index>(cells.size()) < static_cast<Index>(header.size())) {
      rejected.push_back(row_number);
      continue;
    }

    std::vector<Scalar> features(feature_idx.size());
    bool ok = true;
    for (std::size_t k = 0; k < feature_idx.size(); ++k)
      ok = ok && parse_number(cells[static_cast<std::size_t>(feature_idx[k])], features[k]);

    Scalar label = 0.0;
    bool has_label = false;
    if (label_idx >= 0) {
      const std::string& cell = cells[static_cast<std::size_t>(label_idx)];
      if (!cell.empty()) {
        has_label = parse_number(cell, label);
        if (!has_label) ok = false;
      }
    }
    if (!ok) {
      rejected.push_back(row_number);
      continue;
    }

    const std::string domain = cells[static_cast<std::size_t>(domain_idx)];
    if (domain.empty()) throw DataError("load_csv: empty domain value at data row " +
                                        std::to_string(row_number));
    auto it = buckets.find(domain);
    if (it == buckets.end()) {
      domain_order.push_back(domain);
      it = buckets.emplace(domain, Bucket{}).first;
    }
    it->second.rows.push_back(std::move(features));
    if (has_label)
      it->second.labels.push_back(label);
    else
      ++it->second.missing_labels;
  }

  CsvLoadResult result;
  result.rejected_rows = std::move(rejected);
  for (const auto& name : domain_order) {
    Bucket& b = buckets[name];
    if (b.rows.empty()) continue;
    if (!b.labels.empty() && b.missing_labels > 0)
      throw DataError("load_csv: domain '" + name + "' mixes labeled and unlabeled rows");

    DomainDataset d;
    d.domain = name;
    d.feature_names = schema.feature_columns;
    d.X.resize(static_cast<Index>(b.rows.size()), static_cast<Index>(feature_idx.size()));
    for (Index i = 0; i < d.X.rows(); ++i)
      for (Index j = 0; j < d.X.cols(); ++j)
        d.X(i, j) = b.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    if (!b.labels.empty()) {
      Vector y(static_cast<Index>(b.labels.size()));
      for (Index i = 0; i < y.size(); ++i) y(i) = b.labels[static_cast<std::size_t>(i)];
      d.y = std::move(y);
    }
    result.datasets.push_back(std::move(d));
  }
  if (result.datasets.empty()) throw DataError("load_csv: no usable rows in " + path);
  return result;
}

void save_csv(const std::string& path, const std::vector<DomainDataset>& datasets,
              const std::string& label_column, const std::string& domain_column) {
  if (datasets.empty()) throw ContractError("save_csv: nothing to write");
  const std::vector<std::string>& names = datasets.front().feature_names;
  for (const auto& d : datasets)
    if (d.feature_names != names)
      throw SchemaError("save_csv: datasets disagree on feature names");

  std::ofstream out(path);
  if (!out) throw DataError("save_csv: cannot open " + path + " for writing");
  for (const auto& f : names) out << f << ",";
  out << label_column << "," << domain_column << "\n";
  for (const auto& d : datasets) {
    for (Index i = 0; i < d.rows(); ++i) {
      for (Index j = 0; j < d.dim(); ++j) out << render_number(d.X(i, j)) << ",";
      if (d.y) out << render_number((*d.y)(i));
      out << "," << d.domain << "\n";
    }
  }
}

std::pair<DomainDataset, DomainDataset> split(const DomainDataset& dataset, Scalar fraction,
                                              std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw ContractError("split: fraction must lie in (0,1)");
  const Index n = dataset.rows();

  // Per-stratum shuffled index lists; unlabeled data is a single stratum.
  std::map<Scalar, std::vector<Index>> strata;
  if (dataset.y) {
    for (Index i = 0; i < n; ++i) strata[(*dataset.y)(i)].push_back(i);
  } else {
    auto& all = strata[0.0];
    for (Index i = 0; i < n; ++i) all.push_back(i);
  }

  Rng rng(seed);
  std::vector<Index> train_rows, test_rows;
  for (auto& [value, idx] : strata) {
    for (Index i = static_cast<Index>(idx.size()) - 1; i > 0; --i)
      std::swap(idx[static_cast<std::size_t>(i)],
                idx[static_cast<std::size_t>(rng.uniform_index(i + 1))]);
    const Index take = static_cast<Index>(
        std::llround(fraction * static_cast<Scalar>(idx.size())));
    for (std::size_t k = 0; k < idx.size(); ++k)
      (static_cast<Index>(k) < take ? train_rows : test_rows).push_back(idx[k]);
  }
  if (train_rows.empty() || test_rows.empty())
    throw ContractError("split: fraction leaves one side empty");
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());

  auto take_rows = [&](const std::vector<Index>& rows) {
    DomainDataset out;
    out.domain = dataset.domain;
    out.feature_names = dataset.feature_names;
    out.X.resize(static_cast<Index>(rows.size()), dataset.dim());
    if (dataset.y) out.y = Vector(static_cast<Index>(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k) {
      out.X.row(static_cast<Index>(k)) = dataset.X.row(rows[k]);
      if (dataset.y) (*out.y)(static_cast<Index>(k)) = (*dataset.y)(rows[k]);
    }
    return out;
  };
  return {take_rows(train_rows), take_rows(test_rows)};
}

std::vector<Scalar> class_values(const Vector& labels) {
  std::vector<Scalar> vals(labels.data(), labels.data() + labels.size());
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  return vals;
}

}  // namespace shiftlab
