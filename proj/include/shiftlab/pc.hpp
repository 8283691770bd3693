#pragma once

#include "shiftlab/citest.hpp"
#include "shiftlab/dataset.hpp"
#include "shiftlab/graph.hpp"
#include "shiftlab/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace shiftlab {

// PC skeleton plus the separating sets found during edge removal.
struct Skeleton {
  MixedGraph graph;
  // Key (i,j) with i < j; value is the conditioning set that separated them.
  std::map<std::pair<Index, Index>, std::vector<Index>> sepsets;

  bool has_sepset(Index a, Index b) const;
  const std::vector<Index>& sepset(Index a, Index b) const;
};

// Classic PC edge removal with conditioning sets of increasing size drawn
// from current adjacencies; deterministic for a fixed variable order.
Skeleton pc_skeleton(const std::vector<std::string>& names, const CiTest& test);
Skeleton pc_skeleton(const MatrixRef& data, const std::vector<std::string>& names, Scalar alpha);

// Orient v-structures from separating sets, force every edge at each root
// outward (earlier roots win root-to-root edges), then close under Meek
// rules. Throws InconsistencyError on contradictory demands.
MixedGraph orient_with_root(const Skeleton& skeleton, const std::vector<std::string>& roots);

struct CdnodResult {
  MixedGraph graph;  // over features + Y + S
  std::vector<std::string> changing_modules;
  Skeleton skeleton;
};

// Domain-index-augmented PC: pool the labeled domains, append an integer
// surrogate column S, run skeleton + orientation with S and Y as roots.
// Variables adjacent to S are the changing modules.
CdnodResult cdnod_lite(const std::vector<DomainDataset>& domains, Scalar alpha);

inline const char* domain_index_name() { return "S"; }
inline const char* label_name() { return "Y"; }

}  // namespace shiftlab
