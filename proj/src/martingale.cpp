#include "freenorm/js.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "freenorm/free_family.hpp"

namespace freenorm {

namespace {

void check_partition(int dim, const std::vector<std::vector<int>>& partition) {
  std::vector<bool> seen(dim, false);
  for (const std::vector<int>& group : partition) {
    if (group.empty()) throw std::invalid_argument("partition groups must be non-empty");
    for (int index : group) {
      if (index < 0 || index >= dim || seen[index])
        throw std::invalid_argument("partition must cover each basis index exactly once");
      seen[index] = true;
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end())
    throw std::invalid_argument("partition must cover each basis index exactly once");
}

void check_coarsening(int dim, const std::vector<std::vector<int>>& fine,
                      const std::vector<std::vector<int>>& coarse) {
  std::vector<int> label(dim, -1);
  for (int g = 0; g < static_cast<int>(coarse.size()); ++g)
    for (int index : coarse[g]) label[index] = g;
  for (const std::vector<int>& group : fine)
    for (int index : group)
      if (label[index] != label[group.front()])
        throw std::invalid_argument("each level must coarsen the previous partition");
}

}  // namespace

MatrixFiltration::MatrixFiltration(AlgebraPtr algebra,
                                   std::vector<ConditionalExpectation> levels)
    : algebra_(std::move(algebra)), levels_(std::move(levels)) {
  if (levels_.empty()) throw std::invalid_argument("filtration needs at least one level");
}

MatrixFiltration MatrixFiltration::from_partitions(
    int dim, const std::vector<std::vector<std::vector<int>>>& partitions, bool scalar_root) {
  if (dim < 1) throw std::invalid_argument("dimension must be positive");
  if (partitions.empty()) throw std::invalid_argument("filtration needs at least one partition");
  for (const auto& partition : partitions) check_partition(dim, partition);
  for (std::size_t k = 0; k + 1 < partitions.size(); ++k)
    check_coarsening(dim, partitions[k], partitions[k + 1]);
  if (partitions.back().size() != 1)
    throw std::invalid_argument("the last partition must be the full block");

  std::vector<ConditionalExpectation> levels;
  if (scalar_root) levels.push_back(ConditionalExpectation::scalar());
  for (const auto& partition : partitions)
    levels.push_back(ConditionalExpectation::pinching({partition}));
  return MatrixFiltration(make_single_block(dim, 1.0), std::move(levels));
}

std::vector<Operator> martingale_differences(const MatrixFiltration& filtration,
                                             const Operator& x) {
  std::vector<Operator> differences;
  Operator previous = filtration.apply(0, x);
  differences.push_back(previous);
  for (int k = 1; k < filtration.levels(); ++k) {
    const Operator current = filtration.apply(k, x);
    differences.push_back(current - previous);
    previous = current;
  }
  return differences;
}

BurkholderNorms burkholder_norms(const MatrixFiltration& filtration, const Operator& x,
                                 const SymmetricSpace& space) {
  const std::vector<Operator> d = martingale_differences(filtration, x);
  Operator column = d.front().adjoint() * d.front();
  Operator row = d.front() * d.front().adjoint();
  for (std::size_t k = 1; k < d.size(); ++k) {
    column += filtration.apply(static_cast<int>(k) - 1, d[k].adjoint() * d[k]);
    row += filtration.apply(static_cast<int>(k) - 1, d[k] * d[k].adjoint());
  }
  BurkholderNorms norms;
  norms.column = operator_norm(space, sqrt_psd(column));
  norms.row = operator_norm(space, sqrt_psd(row));
  norms.diagonal = space.norm(diagonal_mu(d));
  return norms;
}

}  // namespace freenorm
