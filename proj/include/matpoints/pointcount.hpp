#ifndef MATPOINTS_POINTCOUNT_HPP
#define MATPOINTS_POINTCOUNT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "matpoints/bigint.hpp"
#include "matpoints/errors.hpp"
#include "matpoints/ffield.hpp"
#include "matpoints/parallel.hpp"

namespace matpoints {

/// Integer Frobenius data of an elliptic curve over F_q: alpha + conj(alpha)
/// = t and alpha * conj(alpha) = q.
struct FrobData {
    long long t = 0;
    std::uint64_t q = 0;
    std::string tag; // curve family and parameter, for reports

    void check_hasse() const {
        // |t| <= 2 sqrt(q), checked as t^2 <= 4q.
        if (static_cast<unsigned long long>(t < 0 ? -t : t) *
                static_cast<unsigned long long>(t < 0 ? -t : t) >
            4 * q)
            throw error(errc::hasse_violation, tag + " trace " + std::to_string(t));
    }
};

/// Which Clausen curve parameter the K3 zeta factorization is paired with.
/// `shifted` uses E_CL(-1/(a+1)); `direct` uses E_CL(a). The audit tests
/// both and records the survivors.
enum class ClausenPairing { shifted, direct };

struct K3FrobData {
    int gamma = 0; // phi_q(a+1)
    FrobData clausen;
};

/// Affine points of y^2 = x(x-1)(x-a): sum over x of 1 + phi(f(x)), with
/// phi(0) = 0.
inline std::uint64_t legendre_affine_count(const FieldCtx& ctx, FieldElem a) {
    if (a == 0 || a == 1)
        throw error(errc::bad_parameter, "Legendre parameter must avoid {0,1}");
    std::uint64_t count = 0;
    for (FieldElem x = 0; x < ctx.q(); ++x) {
        FieldElem f = ctx.mul(ctx.mul(x, ctx.sub(x, 1)), ctx.sub(x, a));
        count += static_cast<std::uint64_t>(1 + ctx.phi(f));
    }
    return count;
}

inline FrobData legendre_trace(const FieldCtx& ctx, FieldElem a) {
    FrobData f;
    f.q = ctx.q();
    f.t = static_cast<long long>(ctx.q()) -
          static_cast<long long>(legendre_affine_count(ctx, a));
    f.tag = "legendre(a=" + std::to_string(a) + ",q=" + std::to_string(ctx.q()) + ")";
    f.check_hasse();
    return f;
}

/// alpha^k + conj(alpha)^k via s_k = t s_{k-1} - q s_{k-2}, s_0 = 2, s_1 = t.
inline BigInt trace_power(const FrobData& f, unsigned k) {
    if (k == 0) return 2;
    BigInt prev = 2, cur = f.t;
    for (unsigned i = 2; i <= k; ++i) {
        BigInt next = BigInt(f.t) * cur - BigInt(f.q) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

/// Trace of the Clausen curve y^2 = (x-1)(x^2+a); singular exactly when
/// a = 0 (double root) or a = -1 (x = 1 is a root of x^2 + a).
inline FrobData clausen_trace(const FieldCtx& ctx, FieldElem a) {
    if (a == 0 || a == ctx.neg(1))
        throw error(errc::singular_curve, "Clausen parameter must avoid {0,-1}");
    long long sum = 0;
    for (FieldElem x = 0; x < ctx.q(); ++x) {
        FieldElem g = ctx.mul(ctx.sub(x, 1), ctx.add(ctx.mul(x, x), a));
        sum += ctx.phi(g);
    }
    FrobData f;
    f.q = ctx.q();
    f.t = -sum; // q - sum_x (1 + phi) = -sum_x phi
    f.tag = "clausen(a=" + std::to_string(a) + ",q=" + std::to_string(ctx.q()) + ")";
    f.check_hasse();
    return f;
}

/// Affine points of s^2 = xy(x+1)(y+1)(x+ay); O(q^2).
inline std::uint64_t k3_affine_count(const FieldCtx& ctx, FieldElem a) {
    if (a == 0 || a == ctx.neg(1))
        throw error(errc::bad_parameter, "K3 parameter must avoid {0,-1}");
    std::uint64_t count = 0;
    for (FieldElem x = 0; x < ctx.q(); ++x) {
        FieldElem xf = ctx.mul(x, ctx.add(x, 1));
        for (FieldElem y = 0; y < ctx.q(); ++y) {
            FieldElem g = ctx.mul(xf, ctx.mul(ctx.mul(y, ctx.add(y, 1)), ctx.add(x, ctx.mul(a, y))));
            count += static_cast<std::uint64_t>(1 + ctx.phi(g));
        }
    }
    return count;
}

inline FieldElem clausen_parameter(const FieldCtx& ctx, FieldElem a, ClausenPairing pairing) {
    if (pairing == ClausenPairing::direct) return a;
    return ctx.neg(ctx.inv(ctx.add(a, 1))); // -1/(a+1)
}

inline K3FrobData k3_frob(const FieldCtx& ctx, FieldElem a,
                          ClausenPairing pairing = ClausenPairing::shifted) {
    if (a == 0 || a == ctx.neg(1))
        throw error(errc::bad_parameter, "K3 parameter must avoid {0,-1}");
    K3FrobData k;
    k.gamma = ctx.phi(ctx.add(a, 1));
    k.clausen = clausen_trace(ctx, clausen_parameter(ctx, a, pairing));
    return k;
}

struct LegendreSweepEntry {
    FieldElem a;
    long long t;
};

struct K3SweepEntry {
    FieldElem a;
    int gamma;
    long long clausen_t;
};

/// Trace table over every valid a, in element-index order regardless of the
/// thread count.
inline std::vector<LegendreSweepEntry> legendre_sweep(const FieldCtx& ctx, unsigned threads = 1) {
    const std::uint64_t q = ctx.q();
    std::vector<FieldElem> params;
    params.reserve(q - 2);
    for (FieldElem a = 2; a < q; ++a)
        if (a != 1) params.push_back(a);
    std::vector<LegendreSweepEntry> out(params.size());
    if (ctx.r() == 1) {
        // Prime-field fast path: phi by dlog parity, raw modular products.
        const std::uint64_t p = q;
        parallel_for(params.size(), threads, [&](std::size_t i) {
            std::uint64_t a = params[i];
            long long sum = 0;
            for (std::uint64_t x = 0; x < p; ++x) {
                std::uint64_t f = x * ((x + p - 1) % p) % p * ((x + p - a) % p) % p;
                sum += ctx.phi(FieldElem(f));
            }
            out[i] = {FieldElem(a), -sum};
        });
        return out;
    }
    parallel_for(params.size(), threads, [&](std::size_t i) {
        out[i] = {params[i], legendre_trace(ctx, params[i]).t};
    });
    return out;
}

inline std::vector<K3SweepEntry> k3_frob_sweep(const FieldCtx& ctx,
                                               ClausenPairing pairing = ClausenPairing::shifted,
                                               unsigned threads = 1) {
    FieldElem minus1 = ctx.neg(1);
    std::vector<FieldElem> params;
    params.reserve(ctx.q() - 2);
    for (FieldElem a = 1; a < ctx.q(); ++a)
        if (a != minus1) params.push_back(a);
    std::vector<K3SweepEntry> out(params.size());
    parallel_for(params.size(), threads, [&](std::size_t i) {
        K3FrobData k = k3_frob(ctx, params[i], pairing);
        out[i] = {params[i], k.gamma, k.clausen.t};
    });
    return out;
}

} // namespace matpoints

#endif
