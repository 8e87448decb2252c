#pragma once
// Party-labeled state types plus the fixed catalog of concrete states the
// library's reproduction claims are built on. Catalog amplitudes are entered
// as exact closed-form constants, term by term, so each definition can be
// audited against its defining expression.

#include <cstddef>
#include <string>
#include <vector>

#include "entkit/qmath.hpp"

namespace entkit {

struct PartySpace {
  std::string label;
  std::size_t dim = 0;
};

std::vector<std::size_t> dims_of(const std::vector<PartySpace>& parties);
std::size_t total_dim(const std::vector<PartySpace>& parties);
// Index of the party with the given label; throws if absent.
std::size_t party_index(const std::vector<PartySpace>& parties,
                        const std::string& label);
// Validates labels (nonempty, unique) and dims (all >= 1).
void validate_parties(const std::vector<PartySpace>& parties);

// Normalized pure state over labeled parties.
class PureState {
 public:
  PureState(std::vector<PartySpace> parties, Vec amplitudes);

  const std::vector<PartySpace>& parties() const { return parties_; }
  const Vec& amplitudes() const { return amp_; }
  std::vector<std::size_t> dims() const { return dims_of(parties_); }
  std::size_t dim() const { return amp_.size(); }
  std::size_t party_index(const std::string& label) const {
    return entkit::party_index(parties_, label);
  }

 private:
  std::vector<PartySpace> parties_;
  Vec amp_;
};

// Unit-trace Hermitian operator over labeled parties. Positivity is checked
// where the spectrum is actually computed, not at construction.
class DensityOperator {
 public:
  DensityOperator(std::vector<PartySpace> parties, Mat matrix);

  const std::vector<PartySpace>& parties() const { return parties_; }
  const Mat& matrix() const { return m_; }
  std::vector<std::size_t> dims() const { return dims_of(parties_); }
  std::size_t dim() const { return m_.rows(); }
  std::size_t party_index(const std::string& label) const {
    return entkit::party_index(parties_, label);
  }

 private:
  std::vector<PartySpace> parties_;
  Mat m_;
};

// Reduced operator on the listed parties, in the listed order.
DensityOperator reduce_to(const PureState& psi,
                          const std::vector<std::string>& keep);
DensityOperator reduce_to(const DensityOperator& rho,
                          const std::vector<std::string>& keep);

// --- Catalog -------------------------------------------------------------

// The 8x4x2 tripartite state whose collaborative entanglement exceeds its
// assisted entanglement. Built from four amplitude groups, two keyed to the
// computational C basis and two to (|0> +- i|1>)/sqrt(2).
PureState make_phi();

// Sub-normalized 8x4 components of make_phi() along Charlie's computational
// basis: make_phi amplitudes at C = b. Squared norms are 5/8 and 3/8.
Vec make_u(int b);

// Bell states: k = 0..3 -> (|00>+|11>, |00>-|11>, |01>+|10>, |01>-|10>)/sqrt2.
PureState make_bell(int k);

// Sum_k |kk>/sqrt(dim_b) embedded in dim_a x dim_b; requires dim_b <= dim_a.
PureState make_max_entangled(std::size_t dim_a, std::size_t dim_b);

// The 4x2x2 mixed catalog state: an equal mixture of four maximally entangled
// AB states, each tagged by a distinct C flag state. make_mixed_ab(i) is the
// i-th AB component (i in 1..4) and make_mixed_flag(i) its C flag, drawn from
// {|0>, |1>, |+>, |->}.
Vec make_mixed_ab(int i);
Vec make_mixed_flag(int i);
DensityOperator make_mixed_example();

// Purification via the eigendecomposition: sum_j sqrt(p_j) |v_j>|j>, keeping
// eigenvalues above 1e-10. The ancilla dimension equals that count. With
// ancilla_label empty, the first unused capital letter is chosen.
PureState purify(const DensityOperator& rho, std::string ancilla_label = "");

}  // namespace entkit
