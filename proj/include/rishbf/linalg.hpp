#ifndef RISHBF_LINALG_HPP
#define RISHBF_LINALG_HPP

// Small dense helpers shared by the beamforming and cut-generation code.

#include <Eigen/Dense>
#include <complex>

namespace rishbf {

using cdouble = std::complex<double>;

template <typename Scalar>
using ComplexMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using RealMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Real symmetric embedding [[Re Z, -Im Z], [Im Z, Re Z]] of a complex matrix.
/// For Hermitian Z each eigenvalue of Z appears twice in the embedding, and
/// u^T R(Z) u = Re(zeta^H Z zeta) with zeta = u.head(n) + j u.tail(n).
template <typename Derived>
RealMatrix<typename Derived::RealScalar> real_embedding(const Eigen::MatrixBase<Derived>& z)
{
    using Real = typename Derived::RealScalar;
    const Eigen::Index r = z.rows();
    const Eigen::Index c = z.cols();
    RealMatrix<Real> out(2 * r, 2 * c);
    out.topLeftCorner(r, c) = z.real();
    out.topRightCorner(r, c) = -z.imag();
    out.bottomLeftCorner(r, c) = z.imag();
    out.bottomRightCorner(r, c) = z.real();
    return out;
}

/// Inverse of the embedding map for vectors: (ur; ui) -> ur + j ui.
template <typename Derived>
Eigen::Matrix<std::complex<typename Derived::Scalar>, Eigen::Dynamic, 1>
complex_from_embedding(const Eigen::MatrixBase<Derived>& u)
{
    using Real = typename Derived::Scalar;
    const Eigen::Index n = u.size() / 2;
    Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1> zeta(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        zeta(i) = std::complex<Real>(u(i), u(n + i));
    }
    return zeta;
}

/// Smallest eigenvalue of a Hermitian matrix (lower triangle is read).
template <typename Derived>
typename Derived::RealScalar min_eigenvalue(const Eigen::MatrixBase<Derived>& h)
{
    using Plain = typename Derived::PlainObject;
    Eigen::SelfAdjointEigenSolver<Plain> es(h.derived(), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

template <typename Derived>
typename Derived::RealScalar max_eigenvalue(const Eigen::MatrixBase<Derived>& h)
{
    using Plain = typename Derived::PlainObject;
    Eigen::SelfAdjointEigenSolver<Plain> es(h.derived(), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(es.eigenvalues().size() - 1);
}

/// M + M^H.
template <typename Derived>
typename Derived::PlainObject hermitian_sum(const Eigen::MatrixBase<Derived>& m)
{
    return m + m.adjoint();
}

}  // namespace rishbf

#endif  // RISHBF_LINALG_HPP
