#pragma once

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

namespace cimfem {

using cplx = std::complex<double>;

/// eta(z) = K z + z^beta, the Laplace symbol of K d/dt + Caputo d^beta/dt^beta.
struct FractionalSymbol {
    double K = 1.0;
    double beta = 0.5;

    void validate() const;
};

/// Principal-branch power exp(a (ln|z| + i Arg z)), Arg z in (-pi, pi].
/// The negative real axis (either sign of zero) maps to Arg = +pi.
[[nodiscard]] cplx complex_pow(cplx z, double a);

[[nodiscard]] cplx eta(cplx z, const FractionalSymbol& sym);

enum class TermKind {
    power,  ///< c t^s      ->  c Gamma(s+1) z^-(s+1)
    pole,   ///< c e^{s t}  ->  c / (z - s)
};

struct SourceTerm {
    std::size_t spatial_factor = 0;  ///< index into the problem's spatial factor list
    TermKind kind = TermKind::power;
    double coefficient = 0.0;
    double parameter = 0.0;  ///< exponent s for power terms, rate sigma for poles
};

/// Laplace transform of a source f(x, t) = sum_m g_m(x) T_m(t) whose temporal
/// factors are sums of powers and exponentials.
struct SourceTransform {
    std::vector<SourceTerm> terms;

    [[nodiscard]] bool empty() const { return terms.empty(); }
    /// Largest positive pole rate, or 0 when there is none.
    [[nodiscard]] double max_pole() const;
    void validate() const;
};

/// Per spatial factor multipliers at z, in order of first appearance.
[[nodiscard]] std::vector<std::pair<std::size_t, cplx>> transform_eval(const SourceTransform& f_hat,
                                                                       cplx z);

}  // namespace cimfem
