#include "cimfem/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cimfem {

void FractionalSymbol::validate() const {
    if (!(K >= 0.0)) throw std::invalid_argument("symbol: K must be non-negative");
    if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("symbol: beta must lie in (0, 1)");
}

cplx complex_pow(cplx z, double a) {
    const double r = std::abs(z);
    if (r == 0.0) {
        if (a <= 0.0) throw std::domain_error("complex_pow: zero base with non-positive exponent");
        return {0.0, 0.0};
    }
    const double arg = (z.imag() == 0.0 && z.real() < 0.0) ? std::numbers::pi
                                                           : std::atan2(z.imag(), z.real());
    const double mag = std::exp(a * std::log(r));
    return {mag * std::cos(a * arg), mag * std::sin(a * arg)};
}

cplx eta(cplx z, const FractionalSymbol& sym) { return sym.K * z + complex_pow(z, sym.beta); }

double SourceTransform::max_pole() const {
    double sigma = 0.0;
    for (const auto& t : terms)
        if (t.kind == TermKind::pole) sigma = std::max(sigma, t.parameter);
    return sigma;
}

void SourceTransform::validate() const {
    for (const auto& t : terms)
        if (t.kind == TermKind::power && !(t.parameter > -1.0))
            throw std::invalid_argument("source: power exponent must exceed -1");
}

std::vector<std::pair<std::size_t, cplx>> transform_eval(const SourceTransform& f_hat, cplx z) {
    std::vector<std::pair<std::size_t, cplx>> out;
    auto slot = [&out](std::size_t id) -> cplx& {
        for (auto& [k, v] : out)
            if (k == id) return v;
        out.emplace_back(id, cplx{});
        return out.back().second;
    };
    for (const auto& t : f_hat.terms) {
        cplx value;
        if (t.kind == TermKind::power) {
            if (!(t.parameter > -1.0))
                throw std::invalid_argument("transform_eval: power exponent must exceed -1");
            value = t.coefficient * std::tgamma(t.parameter + 1.0) *
                    complex_pow(z, -(t.parameter + 1.0));
        } else {
            const cplx gap = z - t.parameter;
            if (std::abs(gap) < 1e-12 * (1.0 + std::abs(z)))
                throw std::domain_error("transform_eval: z collides with a source pole");
            value = t.coefficient / gap;
        }
        slot(t.spatial_factor) += value;
    }
    return out;
}

}  // namespace cimfem
