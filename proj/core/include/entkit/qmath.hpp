#pragma once
// Dense complex linear algebra for small multipartite systems: tensor
// products, partial traces, a Jacobi Hermitian eigensolver, Schmidt
// decompositions and von Neumann entropy (base 2).
//
// Index convention used everywhere: a multi-index (i0, i1, ..., ik) over
// subsystem dimensions (d0, d1, ..., dk) flattens to
// ((i0*d1 + i1)*d2 + ...) + ik, so the first-listed subsystem varies slowest.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace entkit {

using cplx = std::complex<double>;
using Vec = std::vector<cplx>;

// Row-major dense complex matrix.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, cplx{0.0, 0.0}) {}

  static Mat identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const {
    return a_[i * cols_ + j];
  }

  std::vector<cplx>& data() { return a_; }
  const std::vector<cplx>& data() const { return a_; }

  Mat& operator+=(const Mat& o);
  Mat& operator-=(const Mat& o);
  Mat& operator*=(cplx s);

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<cplx> a_;
};

Mat operator+(Mat a, const Mat& b);
Mat operator-(Mat a, const Mat& b);
Mat operator*(const Mat& a, const Mat& b);
Mat operator*(cplx s, Mat a);

// Vector helpers. inner() is conjugate-linear in its first argument.
double norm_sq(const Vec& v);
cplx inner(const Vec& a, const Vec& b);
Vec mat_vec(const Mat& m, const Vec& v);

Vec tensor(const Vec& a, const Vec& b);
Mat tensor(const Mat& a, const Mat& b);
Mat outer(const Vec& v);  // |v><v|
Mat adjoint(const Mat& m);
cplx trace(const Mat& m);
double max_abs(const Mat& m);
double max_abs_diff(const Mat& a, const Mat& b);
bool is_hermitian(const Mat& m, double tol = 1e-9);

// Gram-Schmidt on the columns; throws if they are linearly dependent.
Mat orthonormal_columns(Mat g);

// Partial trace over the subsystems not listed in `keep`. `keep` must be a
// strictly increasing, nonempty, proper subset of subsystem indices; kept
// subsystems stay in their original relative order. Trace is preserved.
Mat partial_trace(const Mat& rho, const std::vector<std::size_t>& dims,
                  const std::vector<std::size_t>& keep);

// Reduced density operator of a (not necessarily normalized) state vector,
// formed without materializing the full projector.
Mat reduced_density(const Vec& psi, const std::vector<std::size_t>& dims,
                    const std::vector<std::size_t>& keep);

// Applies a one-subsystem operator: (I x op x I) |psi>.
Vec apply_local(const Mat& op, const Vec& psi,
                const std::vector<std::size_t>& dims, std::size_t target);

// (I x K x I) rho (I x K x I)^dagger for a one-subsystem Kraus operator K.
Mat sandwich_local(const Mat& k, const Mat& rho,
                   const std::vector<std::size_t>& dims, std::size_t target);

// Reorders subsystems: order[p] names the old subsystem placed at new
// position p; `order` must be a permutation of 0..dims.size()-1.
Vec permute_subsystems(const Vec& psi, const std::vector<std::size_t>& dims,
                       const std::vector<std::size_t>& order);
Mat permute_subsystems(const Mat& rho, const std::vector<std::size_t>& dims,
                       const std::vector<std::size_t>& order);

// Tr(rho^2) for Hermitian rho; equals the squared Frobenius norm.
double purity(const Mat& rho);

struct EigResult {
  std::vector<double> values;  // descending
  Mat vectors;                 // orthonormal eigenvector columns, same order
};

// Cyclic complex Jacobi eigensolver for Hermitian input. Converges when the
// off-diagonal Frobenius norm drops below 1e-12; throws after 100 sweeps.
// Input must be Hermitian within 1e-9 entrywise.
EigResult hermitian_eig(const Mat& m);

struct SchmidtDecomposition {
  // min(dimA, dimB) probabilities, descending, clamped to >= 0.
  std::vector<double> probabilities;
  // One vector pair per probability above 1e-14, aligned with the leading
  // probabilities. Each list is orthonormal.
  std::vector<Vec> left;
  std::vector<Vec> right;
};

// Schmidt decomposition of psi across dimA x dimB, computed from the reduced
// operator on the smaller side. Subnormalized input is accepted; the
// probabilities then sum to its squared norm. Throws on a zero vector or a
// size mismatch.
SchmidtDecomposition schmidt(const Vec& psi, std::size_t dim_a,
                             std::size_t dim_b);
Vec schmidt_reconstruct(const SchmidtDecomposition& sd, std::size_t dim_a,
                        std::size_t dim_b);

// Shannon entropy of a spectrum in bits; 0*log 0 := 0. Entries in
// [-1e-10, 0) are clamped to zero, anything lower throws.
double entropy_bits(std::span<const double> spectrum);

// Von Neumann entropy in bits. Throws if an eigenvalue is below -1e-10.
double vn_entropy(const Mat& rho);

}  // namespace entkit
