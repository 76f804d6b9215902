#pragma once

#include "hdlp/core.hpp"
#include "hdlp/data.hpp"

#include <cstdint>
#include <random>

namespace test {

using hdlp::Index;
using hdlp::Matrix;
using hdlp::Vector;

// Test data comes from the standard library engine, not the library's own
// generator, so fixtures do not share code with what they check.
inline Matrix gaussian_matrix(std::mt19937_64& g, Index rows, Index cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = n(g);
  return m;
}

inline Vector gaussian_vector(std::mt19937_64& g, Index n) { return gaussian_matrix(g, n, 1).col(0); }

inline Matrix gaussian_matrix(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  return gaussian_matrix(g, rows, cols);
}

inline Vector gaussian_vector(Index n, std::uint64_t seed) { return gaussian_matrix(n, 1, seed).col(0); }

inline hdlp::PenalizedProblem problem(Matrix X, Vector y, Index S) {
  hdlp::PenalizedProblem p;
  p.X = std::move(X);
  p.y = std::move(y);
  p.n_unpenalized = S;
  for (Index j = 0; j < S; ++j) p.of_interest.push_back(j);
  for (Index t = 0; t < p.X.rows(); ++t) p.rows.push_back(t);
  for (Index j = 0; j < p.X.cols(); ++j) p.column_labels.push_back("c" + std::to_string(j));
  return p;
}

// Columns centred, as the LP designs are.
inline Matrix centred(Matrix X) {
  X.rowwise() -= X.colwise().mean();
  return X;
}

}  // namespace test
