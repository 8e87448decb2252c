#pragma once
// Pure-state ensemble decompositions of density operators, generated either
// from isometries applied to a fixed family of subnormalized vectors or from
// rank-1 measurements on a purifying party. Every valid decomposition arises
// both ways, which is exactly the search space of the assisted-entanglement
// optimizer.

#include <cstddef>
#include <string>
#include <vector>

#include "entkit/measures.hpp"
#include "entkit/qmath.hpp"
#include "entkit/states.hpp"

namespace entkit {

struct WeightedState {
  double weight = 0.0;
  Vec state;  // normalized
};

class Ensemble {
 public:
  // Validates: weights positive and summing to 1 within 1e-9, entries
  // normalized, weighted projectors reproducing target within 1e-8 entrywise.
  static Ensemble checked(Mat target, std::vector<WeightedState> entries);

  const Mat& target() const { return target_; }
  const std::vector<WeightedState>& entries() const { return entries_; }

  // Weighted average of the measure with entries read as dim_a x dim_b.
  double average(const RootMeasure& measure, std::size_t dim_a,
                 std::size_t dim_b) const;

 private:
  Ensemble() = default;
  Mat target_;
  std::vector<WeightedState> entries_;
};

// V^dagger V = I within tol; throws otherwise.
void validate_isometry(const Mat& v, double tol = 1e-9);

struct PovmElement {
  std::string label;
  Mat matrix;
};
using Povm = std::vector<PovmElement>;

// Elements Hermitian and PSD (eigenvalues >= -1e-10), summing to identity
// within tol on a dim-dimensional space.
void validate_povm(const Povm& povm, std::size_t dim, double tol = 1e-9);

// Subnormalized vectors u_j with sum_j |u_j><u_j| = rho: the eigenvalue form
// sqrt(p_j) v_j over eigenvalues above 1e-10. Any other valid family differs
// by an r x r unitary, which the isometry search absorbs.
std::vector<Vec> canonical_vectors(const Mat& rho);
// Overload accepting a caller-supplied family, validated against rho within
// 1e-9 entrywise.
std::vector<Vec> canonical_vectors(const Mat& rho, std::vector<Vec> given);

// Entry i is v~_i = sum_j V[i,j] u_j, weight ||v~_i||^2, state normalized.
// Rows with squared norm below 1e-14 are dropped. V is m x r with m >= r.
Ensemble ensemble_from_isometry(const std::vector<Vec>& us, const Mat& v);

// Born-rule ensemble over the remaining parties when the named party of a
// tripartite (or larger) pure state is measured with a rank-1 POVM: weight_i
// is the outcome probability and state_i the collapsed pure state. Elements
// of rank > 1 must be refined first (second eigenvalue above 1e-10 throws).
Ensemble ensemble_from_charlie_povm(const PureState& psi,
                                    const std::string& measured_label,
                                    const Povm& povm);

// Splits each element along its eigenbasis into rank-1 pieces (eigenvalues
// above 1e-12). Completeness is preserved; labels gain ".k" suffixes.
Povm refine_povm(const Povm& povm);

class Prng;

// Random complete POVM: Wishart samples A_i whitened by their sum,
// E_i = S^{-1/2} A_i S^{-1/2}. Elements are full rank almost surely; labels
// are "0", "1", ...
Povm random_povm(Prng& rng, std::size_t dim, std::size_t elements);

}  // namespace entkit
