#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/SparseCore>

namespace cimfem {

using cplx = std::complex<double>;
using ComplexVector = std::vector<cplx>;

/// Tridiagonal matrix by bands: lower[i] couples rows i+1 and i, upper[i]
/// couples rows i and i+1.
struct ComplexTridiag {
    ComplexVector lower;
    ComplexVector diag;
    ComplexVector upper;

    [[nodiscard]] std::size_t size() const { return diag.size(); }
    [[nodiscard]] bool strictly_diagonally_dominant() const;
    [[nodiscard]] ComplexVector multiply(std::span<const cplx> x) const;
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double residual = 0.0)
        : std::runtime_error(what), residual_(residual) {}
    [[nodiscard]] double residual() const { return residual_; }

private:
    double residual_;
};

/// Thomas elimination without pivoting, O(n). Throws SolverError when a
/// pivot falls below 1e-300 in magnitude.
[[nodiscard]] ComplexVector thomas_solve(const ComplexTridiag& t, std::span<const cplx> rhs);

using SparseComplex = Eigen::SparseMatrix<cplx>;

/// Sparse LU solve; throws SolverError if the factorization fails or the
/// normwise backward error exceeds tol.
[[nodiscard]] ComplexVector sparse_solve(const SparseComplex& a, std::span<const cplx> rhs,
                                         double tol = 1e-13);

[[nodiscard]] double relative_residual(const SparseComplex& a, std::span<const cplx> x,
                                       std::span<const cplx> rhs);

/// ||Ax - b||_inf / (||A||_inf ||x||_inf + ||b||_inf); scale and conditioning invariant.
[[nodiscard]] double backward_error(const SparseComplex& a, std::span<const cplx> x,
                                    std::span<const cplx> rhs);

/// Sparse LDL^T for complex symmetric (A = A^T, not Hermitian) matrices,
/// without pivoting. The symbolic analysis (AMD ordering, elimination tree,
/// column counts) is done once per sparsity pattern; solve() factorizes
/// afresh and keeps no state, so it may be called concurrently.
class ComplexSymmetricLDLT {
public:
    explicit ComplexSymmetricLDLT(const SparseComplex& pattern);

    /// a must have exactly the analysed pattern. Throws SolverError on a
    /// vanishing pivot.
    [[nodiscard]] ComplexVector solve(const SparseComplex& a, std::span<const cplx> rhs) const;

    [[nodiscard]] std::size_t size() const { return n_; }
    [[nodiscard]] std::size_t factor_nonzeros() const { return col_start_.empty() ? 0 : col_start_.back(); }

private:
    std::size_t n_ = 0;
    std::vector<int> perm_;       ///< new -> old
    std::vector<int> perm_inv_;   ///< old -> new
    std::vector<int> parent_;     ///< elimination tree
    std::vector<std::size_t> col_start_;
    std::vector<Eigen::Index> outer_;  ///< pattern signature
    std::vector<Eigen::Index> inner_;
};

/// LDL^T solve with a backward-error check at tol; falls back to sparse LU
/// (with a warning) when the unpivoted factorization is not accurate enough.
[[nodiscard]] ComplexVector symmetric_solve(const ComplexSymmetricLDLT& ldlt, const SparseComplex& a,
                                            std::span<const cplx> rhs, double tol = 1e-13);

}  // namespace cimfem
