#include "curation/kernel.hpp"

#include <cmath>

namespace curation {

double kernel_value(const Vec& a, const Vec& b, const KernelSpec& spec) {
  if (a.size() != b.size()) throw InputError("kernel: dimension mismatch");
  switch (spec.kind) {
    case KernelSpec::Kind::linear:
      return a.dot(b);
    case KernelSpec::Kind::rbf: {
      if (!(spec.gamma > 0.0)) throw InputError("kernel: rbf requires gamma > 0");
      return std::exp(-spec.gamma * (a - b).squaredNorm());
    }
  }
  throw InputError("kernel: unknown kind");
}

GramMatrix gram_matrix(const std::vector<Vec>& instances, const KernelSpec& spec) {
  const int n = static_cast<int>(instances.size());
  GramMatrix gram;
  gram.entries = Mat(n, n);
  for (int i = 0; i < n; ++i) {
    if (instances[i].size() != instances[0].size())
      throw InputError("gram_matrix: non-uniform dimension at row " + std::to_string(i));
    for (int j = 0; j <= i; ++j) {
      double v = kernel_value(instances[i], instances[j], spec);
      if (!std::isfinite(v))
        throw Error("gram_matrix: non-finite entry at (" + std::to_string(i) + "," +
                    std::to_string(j) + ")");
      gram.entries(i, j) = v;
      gram.entries(j, i) = v;
    }
  }
  return gram;
}

KernelSpec resolve_kernel(KernelSpec spec, int dim) {
  if (spec.kind == KernelSpec::Kind::rbf && !(spec.gamma > 0.0))
    spec.gamma = 1.0 / std::max(1, dim);
  return spec;
}

GramMatrix augment(const GramMatrix& gram) {
  if (gram.augmented) throw StateError("augment: gram matrix is already augmented");
  GramMatrix out;
  out.entries = gram.entries.array() + 1.0;
  out.augmented = true;
  return out;
}

}  // namespace curation
