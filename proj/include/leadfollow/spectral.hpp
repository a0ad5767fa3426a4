#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "leadfollow/errors.hpp"

namespace leadfollow {

// Absolute tolerance on the smallest eigenvalue used by every definiteness check.
inline constexpr double kPdTolerance = 1e-9;

// Dense real symmetric matrix. Symmetry is checked once on construction:
// |m_ij - m_ji| <= 1e-12 * max(1, |m_ij|).
class SymMatrix {
 public:
  explicit SymMatrix(Eigen::MatrixXd m);

  static SymMatrix identity(int order);
  static SymMatrix zero(int order);

  int order() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  bool operator==(const SymMatrix& other) const { return m_ == other.m_; }

 private:
  Eigen::MatrixXd m_;
};

struct EigenDecomposition {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // column i pairs with values(i)
};

// Cyclic Jacobi. Sweeps until the off-diagonal Frobenius norm drops to
// 1e-12 * ||M||_F.
std::vector<double> eigenvalues_sym(const SymMatrix& m);
EigenDecomposition eigen_sym(const SymMatrix& m);

double min_eigenvalue(const SymMatrix& m);
double max_eigenvalue(const SymMatrix& m);

bool is_positive_definite(const SymMatrix& m, double tol = kPdTolerance);

// D = [[a, e], [e^T, c]].
SymMatrix assemble_blocks(const SymMatrix& a, const Eigen::MatrixXd& e,
                          const SymMatrix& c);

// Block criterion: D > 0 iff a > 0 and c - e^T a^{-1} e > 0. The inverse is
// applied through a Cholesky solve. Returns false (never throws) when a is
// not positive definite.
bool schur_positive_definite(const SymMatrix& a, const Eigen::MatrixXd& e,
                             const SymMatrix& c, double tol = kPdTolerance);

struct SpectralBounds {
  double lambda_min;
  double lambda_max;
};

// Thrown by spectral_bounds when a family member is not positive definite.
class IndefiniteMember : public InvalidInput {
 public:
  IndefiniteMember(std::size_t index, double min_eig);
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

// Smallest of the per-member minimum eigenvalues and largest of the maxima.
SpectralBounds spectral_bounds(std::span<const SymMatrix> family);

}  // namespace leadfollow
