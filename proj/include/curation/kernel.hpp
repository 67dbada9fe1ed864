#pragma once

#include "curation/types.hpp"

namespace curation {

// Symmetric Gram matrix; "augmented" means every entry carries the +1 of the
// constant-feature mapping (K~ = K + 11').
struct GramMatrix {
  Mat entries;
  bool augmented = false;

  int n() const { return static_cast<int>(entries.rows()); }
};

GramMatrix gram_matrix(const std::vector<Vec>& instances, const KernelSpec& spec);
GramMatrix augment(const GramMatrix& gram);

double kernel_value(const Vec& a, const Vec& b, const KernelSpec& spec);

// Fills in the default rbf bandwidth (gamma = 1/D) when none was given.
KernelSpec resolve_kernel(KernelSpec spec, int dim);

}  // namespace curation
