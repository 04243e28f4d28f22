#include "cimfem/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>

#include "cimfem/diagnostics.hpp"

namespace cimfem {

bool ComplexTridiag::strictly_diagonally_dominant() const {
    const std::size_t n = diag.size();
    for (std::size_t i = 0; i < n; ++i) {
        double off = 0.0;
        if (i > 0) off += std::abs(lower[i - 1]);
        if (i + 1 < n) off += std::abs(upper[i]);
        if (!(std::abs(diag[i]) > off)) return false;
    }
    return true;
}

ComplexVector ComplexTridiag::multiply(std::span<const cplx> x) const {
    const std::size_t n = diag.size();
    ComplexVector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        cplx s = diag[i] * x[i];
        if (i > 0) s += lower[i - 1] * x[i - 1];
        if (i + 1 < n) s += upper[i] * x[i + 1];
        y[i] = s;
    }
    return y;
}

ComplexVector thomas_solve(const ComplexTridiag& t, std::span<const cplx> rhs) {
    const std::size_t n = t.size();
    if (rhs.size() != n || t.lower.size() + 1 != std::max<std::size_t>(n, 1) ||
        t.upper.size() + 1 != std::max<std::size_t>(n, 1))
        throw std::invalid_argument("thomas_solve: band lengths do not match");
    if (n == 0) return {};

    ComplexVector c(n);  // modified upper band
    ComplexVector x(n);
    cplx pivot = t.diag[0];
    if (std::abs(pivot) < 1e-300) throw SolverError("thomas_solve: zero pivot at row 0");
    if (n > 1) c[0] = t.upper[0] / pivot;
    x[0] = rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = t.diag[i] - t.lower[i - 1] * c[i - 1];
        if (std::abs(pivot) < 1e-300)
            throw SolverError("thomas_solve: zero pivot at row " + std::to_string(i));
        if (i + 1 < n) c[i] = t.upper[i] / pivot;
        x[i] = (rhs[i] - t.lower[i - 1] * x[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
    return x;
}

namespace {

std::string format_residual(double r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", r);
    return buf;
}

}  // namespace

double relative_residual(const SparseComplex& a, std::span<const cplx> x,
                         std::span<const cplx> rhs) {
    using Vec = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;
    const Eigen::Map<const Vec> xv(x.data(), static_cast<Eigen::Index>(x.size()));
    const Eigen::Map<const Vec> bv(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
    const double bn = bv.norm();
    const double rn = (a * xv - bv).norm();
    return bn > 0.0 ? rn / bn : rn;
}

double backward_error(const SparseComplex& a, std::span<const cplx> x, std::span<const cplx> rhs) {
    using Vec = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;
    const Eigen::Map<const Vec> xv(x.data(), static_cast<Eigen::Index>(x.size()));
    const Eigen::Map<const Vec> bv(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
    Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(a.rows());
    for (int k = 0; k < a.outerSize(); ++k)
        for (SparseComplex::InnerIterator it(a, k); it; ++it) row_sums[it.row()] += std::abs(it.value());
    const double a_norm = a.rows() > 0 ? row_sums.maxCoeff() : 0.0;
    const double x_norm = x.empty() ? 0.0 : xv.cwiseAbs().maxCoeff();
    const double b_norm = rhs.empty() ? 0.0 : bv.cwiseAbs().maxCoeff();
    const double r_norm = x.empty() ? 0.0 : (a * xv - bv).cwiseAbs().maxCoeff();
    const double scale = a_norm * x_norm + b_norm;
    return scale > 0.0 ? r_norm / scale : r_norm;
}

ComplexVector sparse_solve(const SparseComplex& a, std::span<const cplx> rhs, double tol) {
    using Vec = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;
    if (a.rows() != a.cols() || static_cast<std::size_t>(a.rows()) != rhs.size())
        throw std::invalid_argument("sparse_solve: dimension mismatch");

    Eigen::SparseLU<SparseComplex, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success)
        throw SolverError("sparse_solve: factorization failed (" + lu.lastErrorMessage() + ")");

    const Eigen::Map<const Vec> bv(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
    const Vec xv = lu.solve(bv);
    ComplexVector x(xv.data(), xv.data() + xv.size());
    const double res = backward_error(a, x, rhs);
    if (!(res <= tol))
        throw SolverError("sparse_solve: backward error " + format_residual(res) +
                              " above tolerance",
                          res);
    return x;
}

ComplexSymmetricLDLT::ComplexSymmetricLDLT(const SparseComplex& pattern) {
    if (pattern.rows() != pattern.cols()) throw std::invalid_argument("ComplexSymmetricLDLT: matrix not square");
    SparseComplex a = pattern;
    a.makeCompressed();
    n_ = static_cast<std::size_t>(a.rows());
    const int n = static_cast<int>(n_);
    outer_.assign(a.outerIndexPtr(), a.outerIndexPtr() + n + 1);
    inner_.assign(a.innerIndexPtr(), a.innerIndexPtr() + a.nonZeros());

    // AMD on the structure of A + A^T; Eigen returns the new -> old map.
    Eigen::SparseMatrix<double> structure(a.rows(), a.cols());
    {
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(inner_.size());
        for (int k = 0; k < n; ++k)
            for (Eigen::Index p = outer_[k]; p < outer_[k + 1]; ++p)
                trips.emplace_back(static_cast<int>(inner_[p]), k, 1.0);
        structure.setFromTriplets(trips.begin(), trips.end());
    }
    Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> order;
    Eigen::AMDOrdering<int>()(structure, order);
    perm_.assign(order.indices().data(), order.indices().data() + n);
    perm_inv_.assign(n_, 0);
    for (int i = 0; i < n; ++i) perm_inv_[perm_[i]] = i;

    // Elimination tree and column counts of L.
    parent_.assign(n_, -1);
    std::vector<int> flag(n_);
    std::vector<std::size_t> count(n_, 0);
    for (int k = 0; k < n; ++k) {
        flag[k] = k;
        const int kk = perm_[k];
        for (Eigen::Index p = outer_[kk]; p < outer_[kk + 1]; ++p) {
            for (int i = perm_inv_[inner_[p]]; i < k && flag[i] != k; i = parent_[i]) {
                if (parent_[i] == -1) parent_[i] = k;
                ++count[i];
                flag[i] = k;
            }
        }
    }
    col_start_.assign(n_ + 1, 0);
    for (std::size_t k = 0; k < n_; ++k) col_start_[k + 1] = col_start_[k] + count[k];
}

ComplexVector ComplexSymmetricLDLT::solve(const SparseComplex& a_in, std::span<const cplx> rhs) const {
    if (static_cast<std::size_t>(a_in.rows()) != n_ || rhs.size() != n_)
        throw std::invalid_argument("ComplexSymmetricLDLT: dimension mismatch");
    SparseComplex compressed;
    const SparseComplex* ap = &a_in;
    if (!a_in.isCompressed()) {
        compressed = a_in;
        compressed.makeCompressed();
        ap = &compressed;
    }
    const SparseComplex& a = *ap;
    if (static_cast<std::size_t>(a.nonZeros()) != inner_.size() ||
        !std::equal(outer_.begin(), outer_.end(), a.outerIndexPtr()) ||
        !std::equal(inner_.begin(), inner_.end(), a.innerIndexPtr()))
        throw std::invalid_argument("ComplexSymmetricLDLT: matrix pattern differs from the analysed one");

    const int n = static_cast<int>(n_);
    const cplx* ax = a.valuePtr();
    std::vector<int> li(col_start_.back());
    ComplexVector lx(col_start_.back());
    ComplexVector d(n_), y(n_);
    std::vector<int> pattern(n_), flag(n_);
    std::vector<std::size_t> filled(n_, 0);

    // Up-looking factorization: row k of L from a sparse triangular solve.
    for (int k = 0; k < n; ++k) {
        int top = n;
        flag[k] = k;
        const int kk = perm_[k];
        for (Eigen::Index p = outer_[kk]; p < outer_[kk + 1]; ++p) {
            int i = perm_inv_[inner_[p]];
            if (i > k) continue;
            y[i] += ax[p];
            int len = 0;
            for (; flag[i] != k; i = parent_[i]) {
                pattern[len++] = i;
                flag[i] = k;
            }
            while (len > 0) pattern[--top] = pattern[--len];
        }
        d[k] = y[k];
        y[k] = 0.0;
        for (; top < n; ++top) {
            const int i = pattern[top];
            const cplx yi = y[i];
            y[i] = 0.0;
            const std::size_t end = col_start_[i] + filled[i];
            for (std::size_t p = col_start_[i]; p < end; ++p) y[li[p]] -= lx[p] * yi;
            const cplx l_ki = yi / d[i];
            d[k] -= l_ki * yi;
            li[end] = k;
            lx[end] = l_ki;
            ++filled[i];
        }
        if (!(std::abs(d[k]) > 1e-300))
            throw SolverError("ComplexSymmetricLDLT: vanishing pivot at step " + std::to_string(k));
    }

    ComplexVector x(n_);
    for (int i = 0; i < n; ++i) x[i] = rhs[perm_[i]];
    for (int j = 0; j < n; ++j)
        for (std::size_t p = col_start_[j]; p < col_start_[j + 1]; ++p) x[li[p]] -= lx[p] * x[j];
    for (int j = 0; j < n; ++j) x[j] /= d[j];
    for (int j = n - 1; j >= 0; --j)
        for (std::size_t p = col_start_[j]; p < col_start_[j + 1]; ++p) x[j] -= lx[p] * x[li[p]];
    ComplexVector out(n_);
    for (int i = 0; i < n; ++i) out[perm_[i]] = x[i];
    return out;
}

ComplexVector symmetric_solve(const ComplexSymmetricLDLT& ldlt, const SparseComplex& a,
                              std::span<const cplx> rhs, double tol) {
    try {
        ComplexVector x = ldlt.solve(a, rhs);
        const double res = backward_error(a, x, rhs);
        if (res <= tol) return x;
        warn("symmetric_solve: LDL^T backward error " + format_residual(res) + ", retrying with sparse LU");
    } catch (const SolverError& e) {
        warn(std::string("symmetric_solve: ") + e.what() + ", retrying with sparse LU");
    }
    return sparse_solve(a, rhs, tol);
}

}  // namespace cimfem
