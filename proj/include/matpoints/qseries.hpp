#ifndef MATPOINTS_QSERIES_HPP
#define MATPOINTS_QSERIES_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "matpoints/bigint.hpp"
#include "matpoints/errors.hpp"

namespace matpoints {

/// Laurent polynomial in the formal variable q with exact big-integer
/// coefficients. Canonical form: zero coefficients are never stored.
class QPoly {
public:
    QPoly() = default;
    explicit QPoly(BigInt c) {
        if (c != 0) coeffs_[0] = std::move(c);
    }
    static QPoly monomial(BigInt c, int exp) {
        QPoly p;
        if (c != 0) p.coeffs_[exp] = std::move(c);
        return p;
    }
    static QPoly one() { return QPoly(BigInt(1)); }

    const std::map<int, BigInt>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    bool is_polynomial() const { return coeffs_.empty() || coeffs_.begin()->first >= 0; }
    int degree() const {
        if (coeffs_.empty()) throw error(errc::invalid_argument, "degree of zero polynomial");
        return coeffs_.rbegin()->first;
    }
    int low_degree() const {
        if (coeffs_.empty()) throw error(errc::invalid_argument, "low degree of zero polynomial");
        return coeffs_.begin()->first;
    }
    const BigInt& leading_coeff() const {
        if (coeffs_.empty()) throw error(errc::invalid_argument, "leading coeff of zero polynomial");
        return coeffs_.rbegin()->second;
    }
    BigInt coeff(int exp) const {
        auto it = coeffs_.find(exp);
        return it == coeffs_.end() ? BigInt(0) : it->second;
    }

    QPoly& operator+=(const QPoly& o) {
        for (const auto& [e, c] : o.coeffs_) add_term(e, c);
        return *this;
    }
    QPoly& operator-=(const QPoly& o) {
        for (const auto& [e, c] : o.coeffs_) add_term(e, -c);
        return *this;
    }
    friend QPoly operator+(QPoly a, const QPoly& b) { return a += b; }
    friend QPoly operator-(QPoly a, const QPoly& b) { return a -= b; }
    friend QPoly operator*(const QPoly& a, const QPoly& b) {
        QPoly r;
        for (const auto& [ea, ca] : a.coeffs_)
            for (const auto& [eb, cb] : b.coeffs_) r.add_term(ea + eb, ca * cb);
        return r;
    }
    QPoly& operator*=(const QPoly& o) { return *this = *this * o; }
    QPoly scaled(const BigInt& c) const {
        QPoly r;
        if (c == 0) return r;
        for (const auto& [e, co] : coeffs_) r.coeffs_[e] = co * c;
        return r;
    }
    QPoly shifted(int k) const {
        QPoly r;
        for (const auto& [e, c] : coeffs_) r.coeffs_[e + k] = c;
        return r;
    }
    friend bool operator==(const QPoly& a, const QPoly& b) { return a.coeffs_ == b.coeffs_; }

    /// Exact division; throws InexactDivision when the remainder is nonzero
    /// or a coefficient quotient is not integral.
    QPoly divided_exact(const QPoly& d) const {
        if (d.is_zero()) throw error(errc::division_by_zero, "polynomial division by zero");
        if (is_zero()) return QPoly();
        // Shift both to plain polynomials first.
        int sn = std::min(0, low_degree());
        int sd = std::min(0, d.low_degree());
        QPoly num = shifted(-sn);
        QPoly den = d.shifted(-sd);
        QPoly quot;
        const BigInt& dl = den.leading_coeff();
        while (!num.is_zero() && num.degree() >= den.degree()) {
            const BigInt& nl = num.leading_coeff();
            if (nl % dl != 0)
                throw error(errc::inexact_division, "leading coefficient not divisible");
            BigInt c = nl / dl;
            int e = num.degree() - den.degree();
            QPoly t = QPoly::monomial(c, e);
            quot += t;
            num -= den * t;
        }
        if (!num.is_zero()) throw error(errc::inexact_division, "nonzero remainder");
        return quot.shifted(sd - sn);
    }

    BigRat eval(const BigRat& x) const {
        BigRat r = 0;
        for (const auto& [e, c] : coeffs_) {
            BigRat t(c);
            BigRat xe = 1;
            unsigned ae = static_cast<unsigned>(e < 0 ? -e : e);
            BigRat base = x;
            while (ae) {
                if (ae & 1) xe *= base;
                base *= base;
                ae >>= 1;
            }
            if (e < 0) xe = BigRat(1) / xe;
            r += t * xe;
        }
        return r;
    }

    /// Evaluation at an integer q; requires polynomiality.
    BigInt eval_int(const BigInt& x) const {
        if (!is_polynomial())
            throw error(errc::non_polynomial_result, "integer evaluation of Laurent polynomial");
        BigInt r = 0;
        int prev = coeffs_.empty() ? 0 : degree();
        // Horner over the stored exponents, highest first.
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
            r *= big_pow(x, static_cast<unsigned>(prev - it->first));
            r += it->second;
            prev = it->first;
        }
        r *= big_pow(x, static_cast<unsigned>(prev));
        return r;
    }

    QPoly assert_polynomial(const char* what) const {
        if (!is_polynomial()) throw error(errc::non_polynomial_result, what);
        return *this;
    }

private:
    void add_term(int e, BigInt c) {
        auto it = coeffs_.find(e);
        if (it == coeffs_.end()) {
            if (c != 0) coeffs_.emplace(e, std::move(c));
        } else {
            it->second += c;
            if (it->second == 0) coeffs_.erase(it);
        }
    }

    std::map<int, BigInt> coeffs_;
};

/// (q;q)_n = prod_{i=1}^{n} (1 - q^i), with (q;q)_0 = 1.
inline QPoly qpoch(unsigned n) {
    QPoly r = QPoly::one();
    for (unsigned i = 1; i <= n; ++i) {
        QPoly f = QPoly::one();
        f -= QPoly::monomial(1, static_cast<int>(i));
        r *= f;
    }
    return r;
}

/// q-multinomial (q;q)_n / prod (q;q)_{m_i}; the parts must sum to n and the
/// quotient is always a genuine polynomial.
inline QPoly qmultinomial(unsigned n, const std::vector<unsigned>& parts) {
    unsigned total = 0;
    for (unsigned m : parts) total += m;
    if (total != n) throw error(errc::parts_sum_mismatch, "multinomial parts must sum to n");
    QPoly r = qpoch(n);
    for (unsigned m : parts)
        if (m >= 1) r = r.divided_exact(qpoch(m));
    return r;
}

/// Integer partition with cached size, length, and part multiplicities.
struct Partition {
    std::vector<unsigned> parts; // weakly decreasing, all >= 1
    unsigned size = 0;
    unsigned length = 0;
    std::vector<std::pair<unsigned, unsigned>> mults; // (part value, multiplicity)

    static Partition of(std::vector<unsigned> p) {
        Partition out;
        out.parts = std::move(p);
        for (unsigned v : out.parts) out.size += v;
        out.length = static_cast<unsigned>(out.parts.size());
        for (unsigned v : out.parts) {
            if (!out.mults.empty() && out.mults.back().first == v)
                out.mults.back().second++;
            else
                out.mults.push_back({v, 1});
        }
        return out;
    }
};

/// All partitions of n, deterministic order (descending-lex on part lists).
inline std::vector<Partition> partitions(unsigned n) {
    std::vector<Partition> out;
    std::vector<unsigned> cur;
    auto rec = [&](auto&& self, unsigned rem, unsigned maxpart) -> void {
        if (rem == 0) {
            out.push_back(Partition::of(cur));
            return;
        }
        for (unsigned v = std::min(rem, maxpart); v >= 1; --v) {
            cur.push_back(v);
            self(self, rem - v, v);
            cur.pop_back();
        }
    };
    rec(rec, n, n == 0 ? 1 : n);
    return out;
}

struct PartitionTuple4 {
    Partition lam[4];
    unsigned total_length() const {
        return lam[0].length + lam[1].length + lam[2].length + lam[3].length;
    }
};

/// All 4-tuples (lam1..lam4) with |lam1|+..+|lam4| = n, deterministic order.
inline std::vector<PartitionTuple4> partition_tuples4(unsigned n) {
    std::vector<std::vector<Partition>> by_size(n + 1);
    for (unsigned k = 0; k <= n; ++k) by_size[k] = partitions(k);
    std::vector<PartitionTuple4> out;
    for (unsigned n1 = 0; n1 <= n; ++n1)
        for (unsigned n2 = 0; n2 + n1 <= n; ++n2)
            for (unsigned n3 = 0; n3 + n2 + n1 <= n; ++n3) {
                unsigned n4 = n - n1 - n2 - n3;
                for (const auto& a : by_size[n1])
                    for (const auto& b : by_size[n2])
                        for (const auto& c : by_size[n3])
                            for (const auto& d : by_size[n4])
                                out.push_back(PartitionTuple4{{a, b, c, d}});
            }
    return out;
}

/// Sign bookkeeping for P(n,k)_q. `printed` carries the (-1)^k factor as
/// displayed; `corrected` is the audit-surviving variant, which negates the
/// printed polynomial for every k >= 1.
enum class PSignConvention { printed, corrected };

/// Constraint on the R(n,gamma)_q partition sum. `printed` is the two-sided
/// l(lam3) != l(lam4); `one_sided` restricts to l(lam3) > l(lam4).
enum class RConstraintConvention { printed, one_sided };

inline QPoly p_poly(unsigned n, unsigned k,
                    PSignConvention conv = PSignConvention::corrected) {
    if (k > n) throw error(errc::invalid_argument, "p_poly requires k <= n");
    QPoly sum;
    for (unsigned s = 0; 2 * s <= n - k; ++s) {
        int exp = 2 * static_cast<int>(s) * (static_cast<int>(s) - static_cast<int>(n) + static_cast<int>(k));
        sum += qmultinomial(n, {s, n - k - 2 * s, k + s}).shifted(exp);
    }
    int pre = static_cast<int>(n * (n - k)) + static_cast<int>(k * (k + 1) / 2);
    QPoly unsigned_poly = sum.shifted(pre);
    int sign = (k % 2 == 0) ? 1 : -1;
    if (conv == PSignConvention::corrected && k >= 1) sign = -sign;
    return unsigned_poly.scaled(sign).assert_polynomial("p_poly");
}

inline BigRat p_poly_limit(unsigned n, unsigned k,
                           PSignConvention conv = PSignConvention::printed) {
    return p_poly(n, k, conv).eval(BigRat(1));
}

namespace detail {

inline int gamma_pow(int gamma, long long e) {
    if (gamma == 1) return 1;
    return (e % 2 == 0) ? 1 : -1;
}

// Shared tuple weight of the Q and R sums: everything except the q^k / gamma
// exponent differences and the outer prefactor.
inline QPoly k3_tuple_weight(unsigned n, const PartitionTuple4& t) {
    unsigned m = t.total_length();
    std::vector<unsigned> mult_parts;
    int mult_exp = 0;
    for (const auto& lam : t.lam)
        for (const auto& [part, cnt] : lam.mults) {
            (void)part;
            mult_parts.push_back(cnt);
            mult_exp += static_cast<int>(cnt * (cnt + 1) / 2);
        }
    mult_parts.push_back(n - m);
    QPoly w = qpoch(n - m) * qmultinomial(n, mult_parts);
    w = w.shifted(mult_exp + static_cast<int>(t.lam[0].length)); // q^{l(lam1)} factor
    if ((n - m) % 2 != 0) w = w.scaled(-1);
    return w;
}

} // namespace detail

inline QPoly q_poly(unsigned n, unsigned k, int gamma) {
    if (k > n) throw error(errc::invalid_argument, "q_poly requires k <= n");
    if (gamma != 1 && gamma != -1) throw error(errc::invalid_argument, "gamma must be +-1");
    QPoly sum;
    for (const auto& t : partition_tuples4(n)) {
        if (static_cast<long long>(t.lam[2].length) - static_cast<long long>(t.lam[3].length) !=
            static_cast<long long>(k))
            continue;
        QPoly w = detail::k3_tuple_weight(n, t);
        if (detail::gamma_pow(gamma, t.lam[1].length) < 0) w = w.scaled(-1);
        sum += w;
    }
    int pre = static_cast<int>(n * (n - 1) / 2 + k);
    return sum.shifted(pre).assert_polynomial("q_poly");
}

inline QPoly r_poly(unsigned n, int gamma,
                    RConstraintConvention conv = RConstraintConvention::one_sided) {
    if (gamma != 1 && gamma != -1) throw error(errc::invalid_argument, "gamma must be +-1");
    QPoly sum;
    for (const auto& t : partition_tuples4(n)) {
        long long diff = static_cast<long long>(t.lam[2].length) -
                         static_cast<long long>(t.lam[3].length);
        bool keep = (conv == RConstraintConvention::printed) ? diff != 0 : diff > 0;
        if (!keep) continue;
        QPoly w = detail::k3_tuple_weight(n, t);
        if (detail::gamma_pow(gamma, static_cast<long long>(t.lam[1].length) + diff) < 0)
            w = w.scaled(-1);
        sum += w;
    }
    int pre = static_cast<int>(n * (n - 1) / 2);
    return sum.shifted(pre).scaled(-1).assert_polynomial("r_poly");
}

inline BigRat q_poly_limit(unsigned n, unsigned k, int gamma) {
    return q_poly(n, k, gamma).eval(BigRat(1));
}

/// Finite closed form of the q -> 1 limit of Q(n,k,gamma):
/// sum_w multinomial(n; w, w+k, n-k-2w) (1+gamma)^{n-k-2w}, with 0^0 = 1.
/// For gamma = -1 only the n-k = 2w term survives, so the value is zero
/// exactly when n - k is odd.
inline BigRat q_poly_classical_limit(unsigned n, unsigned k, int gamma) {
    if (k > n) throw error(errc::invalid_argument, "limit requires k <= n");
    BigRat sum = 0;
    for (unsigned w = 0; 2 * w + k <= n; ++w) {
        unsigned rest = n - k - 2 * w;
        BigInt mult = factorial(n) / (factorial(w) * factorial(w + k) * factorial(rest));
        sum += BigRat(mult * big_pow(BigInt(1 + gamma), rest));
    }
    return sum;
}

/// Terminating classical 2F1 with exact rational parameters. One of the
/// numerator parameters must eventually hit zero.
inline BigRat classical_2F1(const BigRat& a, const BigRat& b, const BigRat& c,
                            const BigRat& x, unsigned max_terms = 10000) {
    BigRat sum = 1;
    BigRat term = 1;
    for (unsigned s = 0; ; ++s) {
        BigRat an = a + BigRat(s);
        BigRat bn = b + BigRat(s);
        if (an == 0 || bn == 0) return sum; // series terminates here
        BigRat cn = c + BigRat(s);
        if (cn == 0) throw error(errc::pole_in_denominator, "classical_2F1 lower parameter pole");
        if (s + 1 > max_terms) throw error(errc::non_terminating, "classical_2F1 did not terminate");
        term *= an * bn * x / (cn * BigRat(s + 1));
        sum += term;
    }
}

} // namespace matpoints

#endif
