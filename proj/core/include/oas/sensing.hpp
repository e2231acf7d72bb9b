#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

#include "oas/random.hpp"

namespace oas {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Indices of the samples sensed in one subframe, kept sorted ascending.
///
/// Stands in for the diagonal 0/1 adaptation matrix: entry n of the diagonal
/// is one exactly when n is in the set.
class SelectionSet {
 public:
  SelectionSet() = default;

  /// Canonicalizes order. Throws InputError on duplicates or an index >= n.
  static SelectionSet from_indices(std::vector<std::size_t> indices, std::size_t n);

  const std::vector<std::size_t>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  bool contains(std::size_t index) const;

  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

  friend bool operator==(const SelectionSet&, const SelectionSet&) = default;

 private:
  explicit SelectionSet(std::vector<std::size_t> sorted) : indices_(std::move(sorted)) {}
  std::vector<std::size_t> indices_;
};

/// Haar-distributed k x k orthogonal matrix: QR of an i.i.d. N(0, 1) matrix
/// with the columns of Q multiplied by sign(diag(R)).
Matrix haar_orthogonal(std::size_t k, Rng& rng);

/// k x n matrix with i.i.d. N(0, 1/k) entries, filled column by column.
Matrix iid_gaussian(std::size_t k, std::size_t n, Rng& rng);

/// k x n matrix whose column sel[j] (j-th smallest selected index) is u's
/// column j; every other column is zero. Requires u.cols() == sel.size().
Matrix embed_columns(const Matrix& u, const SelectionSet& sel, std::size_t n);

/// Indices of the k largest distortions, ties to the lowest index.
SelectionSet adapt_topk(std::span<const double> distortions, std::size_t k);

/// Indices whose distortion is >= d_th. May be empty.
SelectionSet adapt_threshold(std::span<const double> distortions, double d_th);

}  // namespace oas
