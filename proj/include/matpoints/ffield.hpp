#ifndef MATPOINTS_FFIELD_HPP
#define MATPOINTS_FFIELD_HPP

#include <cstdint>
#include <numeric>
#include <vector>

#include "matpoints/errors.hpp"

namespace matpoints {

/// Canonical index of a field element in [0, q-1]. The index written in
/// little-endian base-p digits gives the coefficient vector of the
/// polynomial representative; 0 and 1 are the additive and multiplicative
/// identities.
using FieldElem = std::uint32_t;

struct FieldSpec {
    std::uint64_t p = 0;
    unsigned r = 0;
    std::uint64_t q = 0;
    // Monic irreducible modulus, little-endian, r+1 coefficients including
    // the leading 1. Empty when r == 1.
    std::vector<std::uint32_t> modulus;
};

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((__uint128_t)a * b % m);
}

inline std::uint64_t powmod_u64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, b, m);
        b = mulmod_u64(b, b, m);
        e >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t sp : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % sp == 0) return n == sp;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

inline std::vector<std::uint64_t> prime_factors_u64(std::uint64_t n) {
    std::vector<std::uint64_t> fs;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            fs.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) fs.push_back(n);
    return fs;
}

// Dense polynomials over F_p, little-endian coefficients, used only during
// field construction.
struct PolyModP {
    std::uint64_t p;

    std::vector<std::uint64_t> trim(std::vector<std::uint64_t> a) const {
        while (!a.empty() && a.back() == 0) a.pop_back();
        return a;
    }
    std::vector<std::uint64_t> mul(const std::vector<std::uint64_t>& a,
                                   const std::vector<std::uint64_t>& b) const {
        if (a.empty() || b.empty()) return {};
        std::vector<std::uint64_t> c(a.size() + b.size() - 1, 0);
        for (size_t i = 0; i < a.size(); ++i)
            for (size_t j = 0; j < b.size(); ++j)
                c[i + j] = (c[i + j] + a[i] * b[j]) % p;
        return trim(c);
    }
    // Remainder modulo a monic divisor.
    std::vector<std::uint64_t> mod(std::vector<std::uint64_t> a,
                                   const std::vector<std::uint64_t>& f) const {
        size_t df = f.size() - 1;
        while (a.size() > df) {
            std::uint64_t lead = a.back();
            size_t shift = a.size() - 1 - df;
            if (lead != 0) {
                for (size_t i = 0; i < df; ++i) {
                    std::uint64_t sub = lead * f[i] % p;
                    a[shift + i] = (a[shift + i] + p - sub) % p;
                }
            }
            a.pop_back();
        }
        return trim(a);
    }
    std::vector<std::uint64_t> mulmod(const std::vector<std::uint64_t>& a,
                                      const std::vector<std::uint64_t>& b,
                                      const std::vector<std::uint64_t>& f) const {
        return mod(mul(a, b), f);
    }
    std::vector<std::uint64_t> powmod(std::vector<std::uint64_t> b, std::uint64_t e,
                                      const std::vector<std::uint64_t>& f) const {
        std::vector<std::uint64_t> r{1};
        b = mod(std::move(b), f);
        while (e) {
            if (e & 1) r = mulmod(r, b, f);
            b = mulmod(b, b, f);
            e >>= 1;
        }
        return r;
    }
    std::vector<std::uint64_t> sub(std::vector<std::uint64_t> a,
                                   const std::vector<std::uint64_t>& b) const {
        if (a.size() < b.size()) a.resize(b.size(), 0);
        for (size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
        return trim(a);
    }
    std::uint64_t inv_scalar(std::uint64_t x) const { return powmod_u64(x, p - 2, p); }
    std::vector<std::uint64_t> gcd(std::vector<std::uint64_t> a,
                                   std::vector<std::uint64_t> b) const {
        a = trim(std::move(a));
        b = trim(std::move(b));
        while (!b.empty()) {
            // make b monic so mod() applies
            std::uint64_t li = inv_scalar(b.back());
            for (auto& c : b) c = c * li % p;
            auto rem = mod(a, b);
            a = std::move(b);
            b = std::move(rem);
        }
        return a;
    }
};

// x^{p^k} mod f by iterated Frobenius.
inline std::vector<std::uint64_t> frob_power(const PolyModP& ring, unsigned k,
                                             const std::vector<std::uint64_t>& f) {
    std::vector<std::uint64_t> x{0, 1};
    auto cur = ring.mod(x, f);
    for (unsigned i = 0; i < k; ++i) cur = ring.powmod(cur, ring.p, f);
    return cur;
}

inline bool is_irreducible(const PolyModP& ring, const std::vector<std::uint64_t>& f) {
    unsigned r = static_cast<unsigned>(f.size() - 1);
    std::vector<std::uint64_t> x{0, 1};
    auto xpr = frob_power(ring, r, f);
    if (ring.trim(ring.sub(xpr, x)) != std::vector<std::uint64_t>{}) return false;
    for (std::uint64_t ell : prime_factors_u64(r)) {
        auto xpi = frob_power(ring, static_cast<unsigned>(r / ell), f);
        auto g = ring.gcd(f, ring.sub(xpi, x));
        if (g.size() != 1) return false;
    }
    return true;
}

} // namespace detail

/// A fully materialized finite field F_{p^r}: multiplicative generator,
/// exp/dlog tables, and index-based element arithmetic. Immutable after
/// construction and safe to share across threads.
class FieldCtx {
public:
    static constexpr std::uint64_t kDefaultCeiling = 1ull << 20;

    const FieldSpec& spec() const { return spec_; }
    std::uint64_t p() const { return spec_.p; }
    unsigned r() const { return spec_.r; }
    std::uint64_t q() const { return spec_.q; }
    FieldElem generator() const { return g_; }

    FieldElem add(FieldElem x, FieldElem y) const {
        if (spec_.r == 1) {
            std::uint64_t s = std::uint64_t(x) + y;
            return FieldElem(s >= spec_.q ? s - spec_.q : s);
        }
        std::uint64_t xi = x, yi = y, out = 0, mul = 1;
        for (unsigned i = 0; i < spec_.r; ++i) {
            std::uint64_t d = (xi % spec_.p + yi % spec_.p) % spec_.p;
            out += d * mul;
            mul *= spec_.p;
            xi /= spec_.p;
            yi /= spec_.p;
        }
        return FieldElem(out);
    }

    FieldElem neg(FieldElem x) const {
        if (spec_.r == 1) return FieldElem(x ? spec_.q - x : 0);
        std::uint64_t xi = x, out = 0, mul = 1;
        for (unsigned i = 0; i < spec_.r; ++i) {
            std::uint64_t d = xi % spec_.p;
            out += (d ? spec_.p - d : 0) * mul;
            mul *= spec_.p;
            xi /= spec_.p;
        }
        return FieldElem(out);
    }

    FieldElem sub(FieldElem x, FieldElem y) const { return add(x, neg(y)); }

    FieldElem mul(FieldElem x, FieldElem y) const {
        if (x == 0 || y == 0) return 0;
        if (spec_.r == 1) return FieldElem(std::uint64_t(x) * y % spec_.q);
        std::uint64_t e = std::uint64_t(dlog_[x]) + dlog_[y];
        if (e >= spec_.q - 1) e -= spec_.q - 1;
        return exp_[e];
    }

    FieldElem inv(FieldElem x) const {
        if (x == 0) throw error(errc::division_by_zero, "inv(0)");
        std::uint64_t e = dlog_[x];
        return exp_[e == 0 ? 0 : spec_.q - 1 - e];
    }

    FieldElem pow(FieldElem x, std::uint64_t e) const {
        FieldElem r = 1, b = x;
        if (x == 0) return e == 0 ? 1 : 0;
        while (e) {
            if (e & 1) r = mul(r, b);
            b = mul(b, b);
            e >>= 1;
        }
        return r;
    }

    std::uint64_t dlog(FieldElem x) const {
        if (x == 0) throw error(errc::zero_has_no_log, "dlog(0)");
        return dlog_[x];
    }

    /// g^e for e in [0, q-2].
    FieldElem exp(std::uint64_t e) const { return exp_[e % (spec_.q - 1)]; }

    /// Quadratic character: 0 at 0, else +1 on squares, -1 on non-squares.
    int phi(FieldElem x) const {
        if (x == 0) return 0;
        return (dlog_[x] & 1) ? -1 : 1;
    }

    /// phi_{q^k}(-1) = +1 iff q^k = 1 (mod 4); arithmetic-free.
    int phi_minus_one(unsigned k = 1) const {
        if (spec_.q % 4 == 1) return 1;
        return (k % 2 == 0) ? 1 : -1;
    }

    /// Reduce a (possibly negative) integer into the prime subfield.
    FieldElem from_int(long long v) const {
        long long m = static_cast<long long>(spec_.p);
        long long d = ((v % m) + m) % m;
        return FieldElem(d);
    }

    friend FieldCtx make_field(std::uint64_t p, unsigned r, std::uint64_t ceiling);

private:
    FieldSpec spec_;
    FieldElem g_ = 0;
    std::vector<FieldElem> exp_;
    std::vector<std::uint32_t> dlog_;
};

inline FieldCtx make_field(std::uint64_t p, unsigned r,
                           std::uint64_t ceiling = FieldCtx::kDefaultCeiling) {
    if (!detail::is_prime_u64(p)) throw error(errc::not_prime, std::to_string(p));
    if (p < 5) throw error(errc::prime_too_small, std::to_string(p));
    if (r < 1) throw error(errc::invalid_argument, "extension degree must be >= 1");

    std::uint64_t q = 1;
    for (unsigned i = 0; i < r; ++i) {
        if (q > ceiling / p)
            throw error(errc::field_too_large, std::to_string(p) + "^" + std::to_string(r));
        q *= p;
    }

    FieldCtx ctx;
    ctx.spec_.p = p;
    ctx.spec_.r = r;
    ctx.spec_.q = q;

    detail::PolyModP ring{p};
    std::vector<std::uint64_t> f; // monic modulus, little-endian, size r+1

    if (r > 1) {
        // Smallest monic irreducible: scan lower-coefficient vectors in
        // index order (little-endian base-p encoding).
        bool found = false;
        for (std::uint64_t m = 0; m < q && !found; ++m) {
            f.assign(r + 1, 0);
            f[r] = 1;
            std::uint64_t mi = m;
            for (unsigned i = 0; i < r; ++i) {
                f[i] = mi % p;
                mi /= p;
            }
            if (detail::is_irreducible(ring, f)) found = true;
        }
        if (!found) throw error(errc::invalid_argument, "no irreducible modulus found");
        ctx.spec_.modulus.assign(f.begin(), f.end());
    }

    auto idx_of = [&](const std::vector<std::uint64_t>& a) {
        std::uint64_t v = 0, mul = 1;
        for (unsigned i = 0; i < r; ++i) {
            v += (i < a.size() ? a[i] : 0) * mul;
            mul *= p;
        }
        return FieldElem(v);
    };
    auto poly_of = [&](FieldElem x) {
        std::vector<std::uint64_t> a(r, 0);
        std::uint64_t xi = x;
        for (unsigned i = 0; i < r; ++i) {
            a[i] = xi % p;
            xi /= p;
        }
        return a;
    };
    auto raw_mul = [&](FieldElem x, FieldElem y) -> FieldElem {
        if (r == 1) return FieldElem(std::uint64_t(x) * y % p);
        return idx_of(ring.mulmod(poly_of(x), poly_of(y), f));
    };
    auto raw_pow = [&](FieldElem x, std::uint64_t e) -> FieldElem {
        FieldElem acc = 1, b = x;
        while (e) {
            if (e & 1) acc = raw_mul(acc, b);
            b = raw_mul(b, b);
            e >>= 1;
        }
        return acc;
    };

    // Smallest-index element of multiplicative order q-1.
    auto factors = detail::prime_factors_u64(q - 1);
    FieldElem g = 0;
    for (std::uint64_t cand = 2; cand < q; ++cand) {
        bool ok = true;
        for (std::uint64_t ell : factors) {
            if (raw_pow(FieldElem(cand), (q - 1) / ell) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) {
            g = FieldElem(cand);
            break;
        }
    }
    ctx.g_ = g;

    ctx.exp_.assign(q - 1, 0);
    ctx.dlog_.assign(q, 0);
    FieldElem cur = 1;
    for (std::uint64_t k = 0; k < q - 1; ++k) {
        ctx.exp_[k] = cur;
        ctx.dlog_[cur] = static_cast<std::uint32_t>(k);
        cur = raw_mul(cur, g);
    }
    return ctx;
}

} // namespace matpoints

#endif
