#include "leadfollow/spectral.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Cholesky>

namespace leadfollow {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagonalTolerance = 1e-12;

double off_diagonal_norm(const Eigen::MatrixXd& a) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (i != j) sum += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(sum);
}

EigenDecomposition jacobi(const Eigen::MatrixXd& m, bool want_vectors) {
  const Eigen::Index n = m.rows();
  Eigen::MatrixXd a = m;
  Eigen::MatrixXd v;
  if (want_vectors) v = Eigen::MatrixXd::Identity(n, n);

  const double scale = m.norm();
  int sweep = 0;
  while (off_diagonal_norm(a) > kOffDiagonalTolerance * scale) {
    if (++sweep > kMaxSweeps) {
      throw Error("Jacobi eigenvalue iteration did not converge");
    }
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 1.0 / (2.0 * theta);
        } else {
          t = std::copysign(1.0, theta) /
              (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Eigen::Index r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a(r, p);
          const double arq = a(r, q);
          a(r, p) = c * arp - s * arq;
          a(p, r) = a(r, p);
          a(r, q) = c * arq + s * arp;
          a(q, r) = a(r, q);
        }
        if (want_vectors) {
          for (Eigen::Index r = 0; r < n; ++r) {
            const double vrp = v(r, p);
            const double vrq = v(r, q);
            v(r, p) = c * vrp - s * vrq;
            v(r, q) = s * vrp + c * vrq;
          }
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });

  EigenDecomposition out;
  out.values.resize(n);
  if (want_vectors) out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]);
    if (want_vectors) out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

}  // namespace

SymMatrix::SymMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) {
    throw InvalidInput("symmetric matrix must be square and non-empty");
  }
  for (Eigen::Index i = 0; i < m_.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < m_.cols(); ++j) {
      if (!std::isfinite(m_(i, j)) || !std::isfinite(m_(j, i))) {
        throw InvalidInput("symmetric matrix has non-finite entries");
      }
      if (std::abs(m_(i, j) - m_(j, i)) > 1e-12 * std::max(1.0, std::abs(m_(i, j)))) {
        std::ostringstream msg;
        msg << "matrix is not symmetric at (" << i << ", " << j << "): " << m_(i, j)
            << " vs " << m_(j, i);
        throw InvalidInput(msg.str());
      }
    }
  }
}

SymMatrix SymMatrix::identity(int order) {
  return SymMatrix(Eigen::MatrixXd::Identity(order, order));
}

SymMatrix SymMatrix::zero(int order) {
  return SymMatrix(Eigen::MatrixXd::Zero(order, order));
}

std::vector<double> eigenvalues_sym(const SymMatrix& m) {
  const auto d = jacobi(m.matrix(), false);
  return {d.values.data(), d.values.data() + d.values.size()};
}

EigenDecomposition eigen_sym(const SymMatrix& m) { return jacobi(m.matrix(), true); }

double min_eigenvalue(const SymMatrix& m) { return eigenvalues_sym(m).front(); }

double max_eigenvalue(const SymMatrix& m) { return eigenvalues_sym(m).back(); }

bool is_positive_definite(const SymMatrix& m, double tol) {
  if (tol < 0.0) throw InvalidInput("definiteness tolerance must be >= 0");
  return min_eigenvalue(m) > tol;
}

SymMatrix assemble_blocks(const SymMatrix& a, const Eigen::MatrixXd& e,
                          const SymMatrix& c) {
  if (e.rows() != a.order() || e.cols() != c.order()) {
    throw InvalidInput("off-diagonal block is not conformal with the diagonal blocks");
  }
  const int na = a.order();
  const int nc = c.order();
  Eigen::MatrixXd d(na + nc, na + nc);
  d.topLeftCorner(na, na) = a.matrix();
  d.topRightCorner(na, nc) = e;
  d.bottomLeftCorner(nc, na) = e.transpose();
  d.bottomRightCorner(nc, nc) = c.matrix();
  return SymMatrix(std::move(d));
}

bool schur_positive_definite(const SymMatrix& a, const Eigen::MatrixXd& e,
                             const SymMatrix& c, double tol) {
  if (e.rows() != a.order() || e.cols() != c.order()) {
    throw InvalidInput("off-diagonal block is not conformal with the diagonal blocks");
  }
  if (!is_positive_definite(a, tol)) return false;
  Eigen::LLT<Eigen::MatrixXd> llt(a.matrix());
  if (llt.info() != Eigen::Success) return false;
  Eigen::MatrixXd schur = c.matrix() - e.transpose() * llt.solve(e);
  schur = 0.5 * (schur + schur.transpose()).eval();
  return is_positive_definite(SymMatrix(std::move(schur)), tol);
}

IndefiniteMember::IndefiniteMember(std::size_t index, double min_eig)
    : InvalidInput("family member " + std::to_string(index) +
                   " is not positive definite (min eigenvalue " +
                   std::to_string(min_eig) +
                   "); its mode is not jointly connected and must be excluded"),
      index_(index) {}

SpectralBounds spectral_bounds(std::span<const SymMatrix> family) {
  if (family.empty()) throw InvalidInput("spectral_bounds needs a non-empty family");
  SpectralBounds b{std::numeric_limits<double>::infinity(),
                   -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto ev = eigenvalues_sym(family[i]);
    if (!(ev.front() > kPdTolerance)) throw IndefiniteMember(i, ev.front());
    b.lambda_min = std::min(b.lambda_min, ev.front());
    b.lambda_max = std::max(b.lambda_max, ev.back());
  }
  return b;
}

}  // namespace leadfollow
