#include "oas/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "oas/errors.hpp"

namespace oas {

SelectionSet SelectionSet::from_indices(std::vector<std::size_t> indices, std::size_t n) {
  std::sort(indices.begin(), indices.end());
  if (std::adjacent_find(indices.begin(), indices.end()) != indices.end()) {
    throw InputError("SelectionSet: duplicate index");
  }
  if (!indices.empty() && indices.back() >= n) {
    std::ostringstream msg;
    msg << "SelectionSet: index " << indices.back() << " out of range for " << n << " samples";
    throw InputError(msg.str());
  }
  return SelectionSet(std::move(indices));
}

bool SelectionSet::contains(std::size_t index) const {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

Matrix haar_orthogonal(std::size_t k, Rng& rng) {
  if (k == 0) {
    throw InputError("haar_orthogonal: dimension must be positive");
  }
  const auto dim = static_cast<Eigen::Index>(k);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      g(i, j) = normal(rng);
    }
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
  const auto& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < dim; ++j) {
    if (r(j, j) < 0.0) {
      q.col(j) = -q.col(j);
    }
  }
  return q;
}

Matrix iid_gaussian(std::size_t k, std::size_t n, Rng& rng) {
  if (k == 0 || n == 0) {
    throw InputError("iid_gaussian: dimensions must be positive");
  }
  const auto rows = static_cast<Eigen::Index>(k);
  const auto cols = static_cast<Eigen::Index>(n);
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(k)));
  Matrix a(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      a(i, j) = normal(rng);
    }
  }
  return a;
}

Matrix embed_columns(const Matrix& u, const SelectionSet& sel, std::size_t n) {
  if (static_cast<std::size_t>(u.cols()) != sel.size()) {
    throw InputError("embed_columns: selection size does not match the number of columns");
  }
  if (!sel.empty() && sel.indices().back() >= n) {
    throw InputError("embed_columns: selected index out of range");
  }
  Matrix a = Matrix::Zero(u.rows(), static_cast<Eigen::Index>(n));
  Eigen::Index j = 0;
  for (const auto index : sel) {
    a.col(static_cast<Eigen::Index>(index)) = u.col(j++);
  }
  return a;
}

namespace {

void reject_nan(std::span<const double> d, const char* who) {
  if (std::any_of(d.begin(), d.end(), [](double v) { return std::isnan(v); })) {
    throw InputError(std::string(who) + ": distortion vector contains NaN");
  }
}

}  // namespace

SelectionSet adapt_topk(std::span<const double> distortions, std::size_t k) {
  reject_nan(distortions, "adapt_topk");
  const std::size_t n = distortions.size();
  if (k > n) {
    throw InputError("adapt_topk: k exceeds the number of samples");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto before = [&](std::size_t a, std::size_t b) {
    if (distortions[a] != distortions[b]) {
      return distortions[a] > distortions[b];
    }
    return a < b;
  };
  std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                   before);
  order.resize(k);
  return SelectionSet::from_indices(std::move(order), n);
}

SelectionSet adapt_threshold(std::span<const double> distortions, double d_th) {
  reject_nan(distortions, "adapt_threshold");
  if (!(d_th > 0.0)) {
    throw InputError("adapt_threshold: threshold must be positive");
  }
  std::vector<std::size_t> picked;
  for (std::size_t i = 0; i < distortions.size(); ++i) {
    if (distortions[i] >= d_th) {
      picked.push_back(i);
    }
  }
  return SelectionSet::from_indices(std::move(picked), distortions.size());
}

}  // namespace oas
