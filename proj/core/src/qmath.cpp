#include "entkit/qmath.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace entkit {

namespace {

std::size_t product(const std::vector<std::size_t>& dims) {
  std::size_t n = 1;
  for (std::size_t d : dims) {
    if (d == 0) throw std::invalid_argument("subsystem dimension is zero");
    n *= d;
  }
  return n;
}

void check_dims_match(const std::vector<std::size_t>& dims, std::size_t n,
                      const char* who) {
  if (product(dims) != n)
    throw std::invalid_argument(std::string(who) +
                                ": dimension list does not match object size");
}

// Digit decomposition of a flat index, slowest digit first.
void decompose(std::size_t flat, const std::vector<std::size_t>& dims,
               std::vector<std::size_t>& digits) {
  for (std::size_t p = dims.size(); p-- > 0;) {
    digits[p] = flat % dims[p];
    flat /= dims[p];
  }
}

}  // namespace

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat& Mat::operator+=(const Mat& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw std::invalid_argument("matrix shape mismatch");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

Mat& Mat::operator-=(const Mat& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw std::invalid_argument("matrix shape mismatch");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

Mat& Mat::operator*=(cplx s) {
  for (auto& x : a_) x *= s;
  return *this;
}

Mat operator+(Mat a, const Mat& b) { return a += b; }
Mat operator-(Mat a, const Mat& b) { return a -= b; }

Mat operator*(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix shape mismatch");
  Mat c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Mat operator*(cplx s, Mat a) { return a *= s; }

double norm_sq(const Vec& v) {
  double s = 0.0;
  for (const cplx& x : v) s += std::norm(x);
  return s;
}

cplx inner(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector size mismatch");
  cplx s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

Vec mat_vec(const Mat& m, const Vec& v) {
  if (m.cols() != v.size()) throw std::invalid_argument("matrix/vector size mismatch");
  Vec out(m.rows(), cplx{});
  for (std::size_t i = 0; i < m.rows(); ++i) {
    cplx s{};
    for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

Vec tensor(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  std::size_t p = 0;
  for (const cplx& x : a)
    for (const cplx& y : b) out[p++] = x * y;
  return out;
}

Mat tensor(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

Mat outer(const Vec& v) {
  Mat out(v.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j)
      out(i, j) = v[i] * std::conj(v[j]);
  return out;
}

Mat adjoint(const Mat& m) {
  Mat out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = std::conj(m(i, j));
  return out;
}

cplx trace(const Mat& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("trace of non-square matrix");
  cplx s{};
  for (std::size_t i = 0; i < m.rows(); ++i) s += m(i, i);
  return s;
}

double max_abs(const Mat& m) {
  double v = 0.0;
  for (const cplx& x : m.data()) v = std::max(v, std::abs(x));
  return v;
}

double max_abs_diff(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("matrix shape mismatch");
  double v = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    v = std::max(v, std::abs(a.data()[i] - b.data()[i]));
  return v;
}

double purity(const Mat& rho) {
  double s = 0.0;
  for (const cplx& x : rho.data()) s += std::norm(x);
  return s;
}

bool is_hermitian(const Mat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j)
      if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) return false;
  return true;
}

Mat orthonormal_columns(Mat g) {
  const std::size_t r = g.cols();
  // Two modified Gram-Schmidt passes keep orthogonality near machine epsilon.
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t j = 0; j < r; ++j) {
      for (std::size_t k = 0; k < j; ++k) {
        cplx proj{};
        for (std::size_t i = 0; i < g.rows(); ++i)
          proj += std::conj(g(i, k)) * g(i, j);
        for (std::size_t i = 0; i < g.rows(); ++i) g(i, j) -= proj * g(i, k);
      }
      double n2 = 0.0;
      for (std::size_t i = 0; i < g.rows(); ++i) n2 += std::norm(g(i, j));
      if (n2 < 1e-24)
        throw std::runtime_error("orthonormal_columns: columns are linearly dependent");
      const double inv = 1.0 / std::sqrt(n2);
      for (std::size_t i = 0; i < g.rows(); ++i) g(i, j) *= inv;
    }
  }
  return g;
}

Mat partial_trace(const Mat& rho, const std::vector<std::size_t>& dims,
                  const std::vector<std::size_t>& keep) {
  if (rho.rows() != rho.cols())
    throw std::invalid_argument("partial_trace: non-square matrix");
  check_dims_match(dims, rho.rows(), "partial_trace");
  if (keep.empty() || keep.size() >= dims.size())
    throw std::invalid_argument("partial_trace: keep set must be a nonempty proper subset");
  for (std::size_t p = 0; p < keep.size(); ++p) {
    if (keep[p] >= dims.size() || (p > 0 && keep[p] <= keep[p - 1]))
      throw std::invalid_argument("partial_trace: keep indices must be strictly increasing and in range");
  }

  const std::size_t n = rho.rows();
  // Split each flat index into a kept part and a traced part.
  std::vector<bool> kept_flag(dims.size(), false);
  for (std::size_t p : keep) kept_flag[p] = true;
  std::size_t kept_total = 1;
  for (std::size_t p : keep) kept_total *= dims[p];

  std::vector<std::size_t> kept_part(n), traced_part(n), digits(dims.size());
  for (std::size_t f = 0; f < n; ++f) {
    decompose(f, dims, digits);
    std::size_t kf = 0, tf = 0;
    for (std::size_t p = 0; p < dims.size(); ++p) {
      if (kept_flag[p])
        kf = kf * dims[p] + digits[p];
      else
        tf = tf * dims[p] + digits[p];
    }
    kept_part[f] = kf;
    traced_part[f] = tf;
  }

  Mat out(kept_total, kept_total);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (traced_part[i] == traced_part[j])
        out(kept_part[i], kept_part[j]) += rho(i, j);
  return out;
}

Mat reduced_density(const Vec& psi, const std::vector<std::size_t>& dims,
                    const std::vector<std::size_t>& keep) {
  check_dims_match(dims, psi.size(), "reduced_density");
  if (keep.empty() || keep.size() > dims.size())
    throw std::invalid_argument("reduced_density: bad keep set");
  for (std::size_t p = 0; p < keep.size(); ++p) {
    if (keep[p] >= dims.size() || (p > 0 && keep[p] <= keep[p - 1]))
      throw std::invalid_argument("reduced_density: keep indices must be strictly increasing and in range");
  }
  if (keep.size() == dims.size()) return outer(psi);

  const std::size_t n = psi.size();
  std::vector<bool> kept_flag(dims.size(), false);
  for (std::size_t p : keep) kept_flag[p] = true;
  std::size_t kept_total = 1;
  for (std::size_t p : keep) kept_total *= dims[p];

  std::vector<std::size_t> kept_part(n), traced_part(n), digits(dims.size());
  for (std::size_t f = 0; f < n; ++f) {
    decompose(f, dims, digits);
    std::size_t kf = 0, tf = 0;
    for (std::size_t p = 0; p < dims.size(); ++p) {
      if (kept_flag[p])
        kf = kf * dims[p] + digits[p];
      else
        tf = tf * dims[p] + digits[p];
    }
    kept_part[f] = kf;
    traced_part[f] = tf;
  }

  Mat out(kept_total, kept_total);
  for (std::size_t i = 0; i < n; ++i) {
    if (psi[i] == cplx{}) continue;
    for (std::size_t j = 0; j < n; ++j)
      if (traced_part[i] == traced_part[j])
        out(kept_part[i], kept_part[j]) += psi[i] * std::conj(psi[j]);
  }
  return out;
}

Vec apply_local(const Mat& op, const Vec& psi,
                const std::vector<std::size_t>& dims, std::size_t target) {
  check_dims_match(dims, psi.size(), "apply_local");
  if (target >= dims.size())
    throw std::invalid_argument("apply_local: target subsystem out of range");
  const std::size_t d = dims[target];
  if (op.rows() != d || op.cols() != d)
    throw std::invalid_argument("apply_local: operator does not match subsystem dimension");

  std::size_t inner_stride = 1;
  for (std::size_t p = target + 1; p < dims.size(); ++p) inner_stride *= dims[p];
  const std::size_t outer_count = psi.size() / (d * inner_stride);

  Vec out(psi.size(), cplx{});
  for (std::size_t o = 0; o < outer_count; ++o) {
    const std::size_t base = o * d * inner_stride;
    for (std::size_t b = 0; b < inner_stride; ++b) {
      for (std::size_t xo = 0; xo < d; ++xo) {
        cplx s{};
        for (std::size_t xi = 0; xi < d; ++xi)
          s += op(xo, xi) * psi[base + xi * inner_stride + b];
        out[base + xo * inner_stride + b] = s;
      }
    }
  }
  return out;
}

Mat sandwich_local(const Mat& k, const Mat& rho,
                   const std::vector<std::size_t>& dims, std::size_t target) {
  if (rho.rows() != rho.cols())
    throw std::invalid_argument("sandwich_local: non-square state");
  check_dims_match(dims, rho.rows(), "sandwich_local");
  if (target >= dims.size())
    throw std::invalid_argument("sandwich_local: target subsystem out of range");
  const std::size_t d = dims[target];
  if (k.rows() != d || k.cols() != d)
    throw std::invalid_argument("sandwich_local: operator does not match subsystem dimension");

  const std::size_t n = rho.rows();
  std::size_t inner_stride = 1;
  for (std::size_t p = target + 1; p < dims.size(); ++p) inner_stride *= dims[p];
  const std::size_t outer_count = n / (d * inner_stride);

  // Row pass: tmp = (I x K x I) rho.
  Mat tmp(n, n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t o = 0; o < outer_count; ++o) {
      const std::size_t base = o * d * inner_stride;
      for (std::size_t b = 0; b < inner_stride; ++b)
        for (std::size_t xo = 0; xo < d; ++xo) {
          cplx s{};
          for (std::size_t xi = 0; xi < d; ++xi)
            s += k(xo, xi) * rho(base + xi * inner_stride + b, c);
          tmp(base + xo * inner_stride + b, c) = s;
        }
    }

  // Column pass: out = tmp (I x K x I)^dagger.
  Mat out(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t o = 0; o < outer_count; ++o) {
      const std::size_t base = o * d * inner_stride;
      for (std::size_t b = 0; b < inner_stride; ++b)
        for (std::size_t xo = 0; xo < d; ++xo) {
          cplx s{};
          for (std::size_t xi = 0; xi < d; ++xi)
            s += tmp(r, base + xi * inner_stride + b) * std::conj(k(xo, xi));
          out(r, base + xo * inner_stride + b) = s;
        }
    }
  return out;
}

Vec permute_subsystems(const Vec& psi, const std::vector<std::size_t>& dims,
                       const std::vector<std::size_t>& order) {
  check_dims_match(dims, psi.size(), "permute_subsystems");
  if (order.size() != dims.size())
    throw std::invalid_argument("permute_subsystems: order size mismatch");
  std::vector<bool> seen(dims.size(), false);
  for (std::size_t p : order) {
    if (p >= dims.size() || seen[p])
      throw std::invalid_argument("permute_subsystems: order is not a permutation");
    seen[p] = true;
  }

  std::vector<std::size_t> new_dims(dims.size());
  for (std::size_t p = 0; p < order.size(); ++p) new_dims[p] = dims[order[p]];

  // new_stride_of_old[q]: stride in the new layout of old subsystem q.
  std::vector<std::size_t> new_strides(dims.size());
  std::size_t s = 1;
  for (std::size_t p = dims.size(); p-- > 0;) {
    new_strides[p] = s;
    s *= new_dims[p];
  }
  std::vector<std::size_t> new_stride_of_old(dims.size());
  for (std::size_t p = 0; p < order.size(); ++p)
    new_stride_of_old[order[p]] = new_strides[p];

  Vec out(psi.size());
  std::vector<std::size_t> digits(dims.size());
  for (std::size_t f = 0; f < psi.size(); ++f) {
    decompose(f, dims, digits);
    std::size_t nf = 0;
    for (std::size_t q = 0; q < dims.size(); ++q)
      nf += digits[q] * new_stride_of_old[q];
    out[nf] = psi[f];
  }
  return out;
}

Mat permute_subsystems(const Mat& rho, const std::vector<std::size_t>& dims,
                       const std::vector<std::size_t>& order) {
  if (rho.rows() != rho.cols())
    throw std::invalid_argument("permute_subsystems: non-square matrix");
  check_dims_match(dims, rho.rows(), "permute_subsystems");
  if (order.size() != dims.size())
    throw std::invalid_argument("permute_subsystems: order size mismatch");
  std::vector<bool> seen(dims.size(), false);
  for (std::size_t p : order) {
    if (p >= dims.size() || seen[p])
      throw std::invalid_argument("permute_subsystems: order is not a permutation");
    seen[p] = true;
  }

  std::vector<std::size_t> new_dims(dims.size());
  for (std::size_t p = 0; p < order.size(); ++p) new_dims[p] = dims[order[p]];
  std::vector<std::size_t> new_strides(dims.size());
  std::size_t s = 1;
  for (std::size_t p = dims.size(); p-- > 0;) {
    new_strides[p] = s;
    s *= new_dims[p];
  }
  std::vector<std::size_t> new_stride_of_old(dims.size());
  for (std::size_t p = 0; p < order.size(); ++p)
    new_stride_of_old[order[p]] = new_strides[p];

  std::vector<std::size_t> remap(rho.rows());
  std::vector<std::size_t> digits(dims.size());
  for (std::size_t f = 0; f < rho.rows(); ++f) {
    decompose(f, dims, digits);
    std::size_t nf = 0;
    for (std::size_t q = 0; q < dims.size(); ++q)
      nf += digits[q] * new_stride_of_old[q];
    remap[f] = nf;
  }

  Mat out(rho.rows(), rho.cols());
  for (std::size_t i = 0; i < rho.rows(); ++i)
    for (std::size_t j = 0; j < rho.cols(); ++j)
      out(remap[i], remap[j]) = rho(i, j);
  return out;
}

EigResult hermitian_eig(const Mat& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("hermitian_eig: non-square matrix");
  if (!is_hermitian(m, 1e-9))
    throw std::invalid_argument("hermitian_eig: matrix is not Hermitian within 1e-9");

  const std::size_t n = m.rows();
  // Work on the exactly Hermitian average to keep rotations consistent.
  Mat a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  Mat v = Mat::identity(n);

  constexpr double kOffTol = 1e-12;
  constexpr int kMaxSweeps = 100;

  auto off_norm = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * std::norm(a(i, j));
    return std::sqrt(s);
  };

  bool converged = n < 2 || off_norm() <= kOffTol;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double g = std::abs(apq);
        if (g < 1e-300) continue;
        const cplx u = apq / g;  // phase of the pivot entry
        const double alpha = a(p, p).real();
        const double beta = a(q, q).real();
        const double tau = (beta - alpha) / (2.0 * g);
        // Smaller-magnitude root of t^2 - 2*tau*t - 1 = 0 keeps the rotation
        // angle below pi/4 for stability.
        const double t = tau >= 0.0 ? -1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                    : 1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // Unitary on the (p, q) plane: column p -> c|p> + s*conj(u)|q>,
        // column q -> -s|p> + c*conj(u)|q>.
        const cplx up = u;           // used on row updates
        const cplx ubar = std::conj(u);

        for (std::size_t j = 0; j < n; ++j) {  // A <- U^dagger A
          const cplx apj = a(p, j), aqj = a(q, j);
          a(p, j) = c * apj + s * up * aqj;
          a(q, j) = -s * apj + c * up * aqj;
        }
        for (std::size_t i = 0; i < n; ++i) {  // A <- A U
          const cplx aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip + s * ubar * aiq;
          a(i, q) = -s * aip + c * ubar * aiq;
        }
        for (std::size_t i = 0; i < n; ++i) {  // V <- V U
          const cplx vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip + s * ubar * viq;
          v(i, q) = -s * vip + c * ubar * viq;
        }
        a(p, q) = 0.0;  // rotation zeroes the pivot by construction
        a(q, p) = 0.0;
      }
    }
    converged = off_norm() <= kOffTol;
  }
  if (!converged)
    throw std::runtime_error("hermitian_eig: no convergence within 100 sweeps");

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() > a(j, j).real();
  });

  EigResult out;
  out.values.resize(n);
  out.vectors = Mat(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(idx[k], idx[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, idx[k]);
  }
  return out;
}

SchmidtDecomposition schmidt(const Vec& psi, std::size_t dim_a,
                             std::size_t dim_b) {
  if (psi.size() != dim_a * dim_b || dim_a == 0 || dim_b == 0)
    throw std::invalid_argument("schmidt: dimension mismatch");
  if (norm_sq(psi) < 1e-24)
    throw std::invalid_argument("schmidt: zero input vector");

  const bool b_smaller = dim_b <= dim_a;
  const std::size_t small = b_smaller ? dim_b : dim_a;
  auto at = [&](std::size_t a, std::size_t b) { return psi[a * dim_b + b]; };

  // Reduced operator on the smaller side.
  Mat red(small, small);
  if (b_smaller) {
    for (std::size_t b = 0; b < small; ++b)
      for (std::size_t b2 = 0; b2 < small; ++b2) {
        cplx s{};
        for (std::size_t a = 0; a < dim_a; ++a)
          s += at(a, b) * std::conj(at(a, b2));
        red(b, b2) = s;
      }
  } else {
    for (std::size_t a = 0; a < small; ++a)
      for (std::size_t a2 = 0; a2 < small; ++a2) {
        cplx s{};
        for (std::size_t b = 0; b < dim_b; ++b)
          s += at(a, b) * std::conj(at(a2, b));
        red(a, a2) = s;
      }
  }

  EigResult eig = hermitian_eig(red);

  SchmidtDecomposition sd;
  sd.probabilities.resize(small);
  for (std::size_t k = 0; k < small; ++k) {
    double p = eig.values[k];
    if (p < -1e-10)
      throw std::runtime_error("schmidt: reduced operator has a negative eigenvalue");
    sd.probabilities[k] = std::max(p, 0.0);
  }

  constexpr double kBranchTol = 1e-14;
  for (std::size_t k = 0; k < small; ++k) {
    const double p = sd.probabilities[k];
    if (p <= kBranchTol) break;  // descending order: rest are negligible
    Vec small_vec(small);
    for (std::size_t i = 0; i < small; ++i) small_vec[i] = eig.vectors(i, k);
    const double inv = 1.0 / std::sqrt(p);
    if (b_smaller) {
      // Partner on A: |l_k> = M conj(|r_k>) / sqrt(p).
      Vec l(dim_a, cplx{});
      for (std::size_t a = 0; a < dim_a; ++a) {
        cplx s{};
        for (std::size_t b = 0; b < dim_b; ++b)
          s += at(a, b) * std::conj(small_vec[b]);
        l[a] = s * inv;
      }
      sd.left.push_back(std::move(l));
      sd.right.push_back(std::move(small_vec));
    } else {
      // Partner on B: r_k[b] = sum_a conj(l_k[a]) psi[a,b] / sqrt(p).
      Vec r(dim_b, cplx{});
      for (std::size_t b = 0; b < dim_b; ++b) {
        cplx s{};
        for (std::size_t a = 0; a < dim_a; ++a)
          s += std::conj(small_vec[a]) * at(a, b);
        r[b] = s * inv;
      }
      sd.left.push_back(std::move(small_vec));
      sd.right.push_back(std::move(r));
    }
  }

  // The recovered partners inherit the eigensolver's off-diagonal residue;
  // one modified Gram-Schmidt pass in descending-probability order restores
  // orthonormality without disturbing the reconstruction.
  auto orthonormalize = [](std::vector<Vec>& vs) {
    for (std::size_t j = 0; j < vs.size(); ++j) {
      for (std::size_t k = 0; k < j; ++k) {
        const cplx proj = inner(vs[k], vs[j]);
        for (std::size_t i = 0; i < vs[j].size(); ++i)
          vs[j][i] -= proj * vs[k][i];
      }
      const double n2 = norm_sq(vs[j]);
      if (n2 > 0.0) {
        const double inv = 1.0 / std::sqrt(n2);
        for (auto& x : vs[j]) x *= inv;
      }
    }
  };
  if (b_smaller)
    orthonormalize(sd.left);
  else
    orthonormalize(sd.right);

  return sd;
}

Vec schmidt_reconstruct(const SchmidtDecomposition& sd, std::size_t dim_a,
                        std::size_t dim_b) {
  Vec out(dim_a * dim_b, cplx{});
  for (std::size_t k = 0; k < sd.left.size(); ++k) {
    const double w = std::sqrt(sd.probabilities[k]);
    for (std::size_t a = 0; a < dim_a; ++a) {
      const cplx la = w * sd.left[k][a];
      if (la == cplx{}) continue;
      for (std::size_t b = 0; b < dim_b; ++b)
        out[a * dim_b + b] += la * sd.right[k][b];
    }
  }
  return out;
}

double entropy_bits(std::span<const double> spectrum) {
  double h = 0.0;
  for (double p : spectrum) {
    if (p < -1e-10)
      throw std::domain_error("entropy_bits: negative probability below tolerance");
    if (p <= 0.0) continue;
    h -= p * std::log2(p);
  }
  return std::max(h, 0.0);
}

double vn_entropy(const Mat& rho) {
  EigResult eig = hermitian_eig(rho);
  for (double& p : eig.values) {
    if (p < -1e-10)
      throw std::domain_error("vn_entropy: operator is not positive semidefinite");
    if (p < 0.0) p = 0.0;
  }
  return entropy_bits(eig.values);
}

}  // namespace entkit
