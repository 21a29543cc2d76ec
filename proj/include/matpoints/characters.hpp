#ifndef MATPOINTS_CHARACTERS_HPP
#define MATPOINTS_CHARACTERS_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "matpoints/bigint.hpp"
#include "matpoints/errors.hpp"
#include "matpoints/ffield.hpp"

namespace matpoints {

/// Multiplicative character chi_m on F_q, chi_m(g^k) = e^{2 pi i m k/(q-1)},
/// extended by chi_m(0) = 0 for every m (including the trivial character).
struct Character {
    const FieldCtx* ctx = nullptr;
    std::uint64_t m = 0; // exponent modulo q-1

    Character times(const Character& other) const {
        return Character{ctx, (m + other.m) % (ctx->q() - 1)};
    }
    Character conj() const {
        return Character{ctx, m == 0 ? 0 : ctx->q() - 1 - m};
    }
};

inline Character trivial_char(const FieldCtx& ctx) { return Character{&ctx, 0}; }
inline Character quadratic_char(const FieldCtx& ctx) {
    return Character{&ctx, (ctx.q() - 1) / 2};
}
inline Character char_of_exponent(const FieldCtx& ctx, std::uint64_t m) {
    return Character{&ctx, m % (ctx.q() - 1)};
}

inline std::complex<double> char_eval(const Character& chi, FieldElem x) {
    if (x == 0) return {0.0, 0.0};
    const double two_pi = 6.283185307179586476925286766559;
    double ang = two_pi * double(chi.m % (chi.ctx->q() - 1)) * double(chi.ctx->dlog(x)) /
                 double(chi.ctx->q() - 1);
    return {std::cos(ang), std::sin(ang)};
}

/// Greene's normalized Jacobi sum (A over B) = B(-1)/q * sum_x A(x) conj(B)(1-x).
inline std::complex<double> jacobi_binom(const Character& A, const Character& B) {
    const FieldCtx& ctx = *A.ctx;
    std::complex<double> s{0.0, 0.0};
    for (FieldElem x = 1; x < ctx.q(); ++x) {
        FieldElem omx = ctx.sub(1, x);
        if (omx == 0) continue;
        s += char_eval(A, x) * std::conj(char_eval(B, omx));
    }
    FieldElem minus_one = ctx.neg(1);
    return char_eval(B, minus_one) * s / double(ctx.q());
}

struct HyperValue {
    BigRat value;    // exact q^n * F rounded to an integer, over q^n
    double residual; // |q^n * F_float - nearest integer|
};

/// Evaluator for Greene hypergeometric sums over one field. Precomputes the
/// unit-root table and the batch of all-phi normalized Jacobi sums
/// (phi chi_m over chi_m) for m = 0..q-2, one O(q^2) pass.
class GreeneContext {
public:
    explicit GreeneContext(const FieldCtx& ctx) : ctx_(&ctx) {
        const std::uint64_t q = ctx.q();
        const double two_pi = 6.283185307179586476925286766559;
        roots_.resize(q - 1);
        for (std::uint64_t k = 0; k < q - 1; ++k) {
            double ang = two_pi * double(k) / double(q - 1);
            roots_[k] = {std::cos(ang), std::sin(ang)};
        }

        // dlog(x) - dlog(1-x) for every x outside {0,1}, reused for each m.
        std::vector<std::uint64_t> diff;
        std::vector<int> sign;
        diff.reserve(q - 2);
        sign.reserve(q - 2);
        for (FieldElem x = 1; x < q; ++x) {
            FieldElem omx = ctx.sub(1, x);
            if (omx == 0) continue;
            std::uint64_t d = ctx.dlog(x) + (q - 1) - ctx.dlog(omx);
            if (d >= q - 1) d -= q - 1;
            diff.push_back(d);
            sign.push_back(ctx.phi(x));
        }

        const std::uint64_t half = (q - 1) / 2;
        binom_phi_.resize(q - 1);
        for (std::uint64_t m = 0; m < q - 1; ++m) {
            std::complex<double> s{0.0, 0.0};
            for (std::size_t i = 0; i < diff.size(); ++i) {
                std::complex<double> term = roots_[m * diff[i] % (q - 1)];
                s += sign[i] > 0 ? term : -term;
            }
            // (phi chi_m)(x) = phi(x) chi_m(x); chi_m(-1) = (-1)^m since
            // dlog(-1) = (q-1)/2.
            std::complex<double> chi_m_minus1 = roots_[m * half % (q - 1)];
            binom_phi_[m] = chi_m_minus1 * s / double(q);
        }
    }

    const FieldCtx& field() const { return *ctx_; }

    /// Generic Greene sum over all q-1 characters, direct per-binomial loops.
    std::complex<double> greene_hyper(const std::vector<Character>& A_list,
                                      const std::vector<Character>& B_list,
                                      FieldElem x) const {
        const FieldCtx& ctx = *ctx_;
        const std::uint64_t q = ctx.q();
        if (A_list.size() != B_list.size() + 1)
            throw error(errc::invalid_argument, "greene_hyper needs n+1 upper, n lower characters");
        if (x == 0) return {0.0, 0.0};
        std::complex<double> total{0.0, 0.0};
        for (std::uint64_t m = 0; m < q - 1; ++m) {
            Character chi{&ctx, m};
            std::complex<double> prod = jacobi_binom(A_list[0].times(chi), chi);
            for (std::size_t i = 0; i < B_list.size(); ++i)
                prod *= jacobi_binom(A_list[i + 1].times(chi), B_list[i].times(chi));
            total += prod * char_eval(chi, x);
        }
        return total * double(q) / double(q - 1);
    }

    /// All-phi specialization via the cached binomial batch:
    /// (n+1)F(n)(x) = q/(q-1) * sum_m binom_phi[m]^{n+1} chi_m(x).
    std::complex<double> all_phi_hyper(unsigned n, FieldElem x) const {
        const FieldCtx& ctx = *ctx_;
        const std::uint64_t q = ctx.q();
        if (x == 0) return {0.0, 0.0};
        std::uint64_t dx = ctx.dlog(x);
        std::complex<double> total{0.0, 0.0};
        for (std::uint64_t m = 0; m < q - 1; ++m) {
            std::complex<double> b = binom_phi_[m];
            std::complex<double> prod = b;
            for (unsigned i = 0; i < n; ++i) prod *= b;
            total += prod * roots_[m * dx % (q - 1)];
        }
        return total * double(q) / double(q - 1);
    }

    /// q * 2F1^ff(a)_q rounded to an exact integer over q.
    HyperValue ff_2F1(FieldElem a, double tol = 1e-8) const {
        return round_scaled(all_phi_hyper(1, a), 1, tol);
    }

    /// q^2 * 3F2^ff(x)_q rounded to an exact integer over q^2.
    HyperValue ff_3F2(FieldElem x, double tol = 1e-8) const {
        return round_scaled(all_phi_hyper(2, x), 2, tol);
    }

private:
    HyperValue round_scaled(std::complex<double> v, unsigned n, double tol) const {
        double scale = std::pow(double(ctx_->q()), double(n));
        double re = v.real() * scale;
        double im = v.imag() * scale;
        double nearest = std::round(re);
        // The float error budget grows with the term count, roughly q per
        // extra q-power; scale the acceptance threshold accordingly.
        double budget = tol * std::pow(double(ctx_->q()), double(n - 1));
        double residual = std::max(std::abs(re - nearest), std::abs(im));
        if (residual > budget)
            throw error(errc::rounding_failure,
                        "residual " + std::to_string(residual) + " exceeds budget " +
                            std::to_string(budget));
        HyperValue out;
        out.value = BigRat(BigInt(static_cast<long long>(nearest)), big_pow(BigInt(ctx_->q()), n));
        out.residual = residual;
        return out;
    }

    const FieldCtx* ctx_;
    std::vector<std::complex<double>> roots_;
    std::vector<std::complex<double>> binom_phi_;
};

} // namespace matpoints

#endif
