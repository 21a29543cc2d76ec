#ifndef MATPOINTS_EXPERIMENTS_HPP
#define MATPOINTS_EXPERIMENTS_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "matpoints/bigint.hpp"
#include "matpoints/errors.hpp"
#include "matpoints/matcount.hpp"
#include "matpoints/pointcount.hpp"
#include "matpoints/qseries.hpp"

namespace matpoints {

enum class Family { legendre, k3 };

inline const char* family_name(Family f) { return f == Family::legendre ? "legendre" : "k3"; }

// ---------------------------------------------------------------------------
// Reference moments and densities.
// ---------------------------------------------------------------------------

/// Semicircle moments: 0 for odd m, Catalan number (2l)!/(l!(l+1)!) for m=2l.
inline BigRat semicircle_moments(unsigned m) {
    if (m % 2 != 0) return 0;
    unsigned l = m / 2;
    return BigRat(factorial(2 * l), factorial(l) * factorial(l + 1));
}

/// Even K3 moments: alternating binomial transform of the Catalan numbers.
inline BigRat batman_moments(unsigned m) {
    if (m % 2 != 0) return 0;
    BigRat sum = 0;
    for (unsigned i = 0; i <= m; ++i) {
        BigRat term = BigRat(binomial(m, i)) * BigRat(factorial(2 * i), factorial(i) * factorial(i + 1));
        if (i % 2 != 0)
            sum -= term;
        else
            sum += term;
    }
    return sum;
}

inline BigRat reference_moment(Family family, unsigned m) {
    return family == Family::legendre ? semicircle_moments(m) : batman_moments(m);
}

inline double reference_density(Family family, double t) {
    const double pi = 3.14159265358979323846;
    if (family == Family::legendre) {
        if (std::abs(t) >= 2.0) return 0.0;
        return std::sqrt(4.0 - t * t) / (2.0 * pi);
    }
    double at = std::abs(t);
    if (at >= 3.0 || at == 1.0) return 0.0;
    double f;
    if (at > 1.0)
        f = std::sqrt((3.0 - at) / (1.0 + at));
    else
        f = std::sqrt((3.0 - t) / (1.0 + t)) + std::sqrt((3.0 + t) / (1.0 - t));
    return f / (4.0 * pi);
}

namespace detail {

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double whole, double tol,
                               int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (b <= a) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

// Integrate with the substitutions t = a + u^2 (left half) and t = b - u^2
// (right half); this removes inverse-square-root endpoint singularities.
inline double integrate_endpoint_safe(const std::function<double(double)>& f, double a, double b,
                                      double tol) {
    if (b <= a) return 0.0;
    double m = 0.5 * (a + b);
    auto left = [&](double u) { return 2.0 * u * f(a + u * u); };
    auto right = [&](double u) { return 2.0 * u * f(b - u * u); };
    return integrate(left, 0.0, std::sqrt(m - a), tol / 2.0) +
           integrate(right, 0.0, std::sqrt(b - m), tol / 2.0);
}

} // namespace detail

/// Integral of the reference density over [lo, hi]; the K3 density has
/// integrable singularities at +-1, handled by splitting there.
inline double density_mass(Family family, double lo, double hi, double tol = 1e-10) {
    double support = family == Family::legendre ? 2.0 : 3.0;
    lo = std::max(lo, -support);
    hi = std::min(hi, support);
    if (hi <= lo) return 0.0;
    std::vector<double> cuts{lo};
    if (family == Family::k3) {
        for (double c : {-1.0, 1.0})
            if (c > lo && c < hi) cuts.push_back(c);
    }
    cuts.push_back(hi);
    auto f = [family](double t) { return reference_density(family, t); };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        total += detail::integrate_endpoint_safe(f, cuts[i], cuts[i + 1],
                                                 tol / double(cuts.size()));
    return total;
}

// ---------------------------------------------------------------------------
// Normalized matrix-count statistics.
// ---------------------------------------------------------------------------

/// a_{L,n}(a;q) = N_{n,2} - P(n,0)_q, exact; the k=0 term cancels so only
/// trace powers appear.
inline BigInt legendre_random_part(const std::vector<QPoly>& p_polys, const FrobData& frob) {
    BigInt q(frob.q);
    BigRat total = 0;
    for (unsigned k = 1; k < p_polys.size(); ++k) {
        BigInt num = p_polys[k].eval_int(q) * trace_power(frob, k);
        total -= BigRat(num) / BigRat(big_pow(q, k));
    }
    return detail::rational_to_integer(total, "legendre random part");
}

/// A_n(a;q) = N_{n,3} - Q(n,0,gamma)_q - R(n,gamma)_q, exact.
inline BigInt k3_random_part(const std::vector<QPoly>& q_polys, const K3FrobData& k3) {
    BigInt q(k3.clausen.q);
    BigRat total = 0;
    for (unsigned k = 1; k < q_polys.size(); ++k) {
        BigInt s2k = trace_power(k3.clausen, 2 * k);
        BigInt num = q_polys[k].eval_int(q) * (s2k + big_pow(q, k));
        if (k3.gamma < 0 && k % 2 != 0) num = -num;
        total += BigRat(num) / BigRat(big_pow(q, 2 * k));
    }
    return detail::rational_to_integer(total, "k3 random part");
}

/// q^{1/2 - n^2} a_{L,n}: exact rational times sqrt(q), floated at the end.
inline double legendre_statistic_value(const BigInt& random_part, std::uint64_t q, unsigned n) {
    BigRat scaled(random_part, big_pow(BigInt(q), n * n));
    return static_cast<double>(scaled) * std::sqrt(static_cast<double>(q));
}

/// q^{1 - n^2 - n} A_n: a plain exact rational, floated at the end.
inline double k3_statistic_value(const BigInt& random_part, std::uint64_t q, unsigned n) {
    BigRat scaled(random_part, big_pow(BigInt(q), n * n + n - 1));
    return static_cast<double>(scaled);
}

inline double legendre_statistic(const FieldCtx& ctx, FieldElem a, unsigned n,
                                 PSignConvention conv = PSignConvention::corrected) {
    FrobData f = legendre_trace(ctx, a);
    return legendre_statistic_value(legendre_random_part(p_polys_upto(n, conv), f), ctx.q(), n);
}

inline double k3_statistic(const FieldCtx& ctx, FieldElem a, unsigned n,
                           ClausenPairing pairing = ClausenPairing::shifted) {
    K3FrobData k = k3_frob(ctx, a, pairing);
    return k3_statistic_value(k3_random_part(q_polys_upto(n, k.gamma), k), ctx.q(), n);
}

// ---------------------------------------------------------------------------
// Sweeps.
// ---------------------------------------------------------------------------

struct SweepConfig {
    std::uint64_t p = 0;
    unsigned r = 1;
    unsigned n = 1;
    unsigned bins = 60;
    double lo = 0.0, hi = 0.0; // 0,0: family default range
    unsigned moment_max = 4;
    unsigned threads = 1;
    ClausenPairing pairing = ClausenPairing::shifted;
    std::uint64_t field_ceiling = FieldCtx::kDefaultCeiling;
};

struct HistogramResult {
    std::vector<double> edges; // bins + 1
    std::vector<std::uint64_t> counts;
    std::vector<double> empirical_density;
    std::vector<double> reference; // reference density averaged per bin
    std::uint64_t sample_count = 0;
    std::uint64_t in_range = 0;
};

struct MomentEntry {
    unsigned m;
    double empirical;
    double reference;
};

struct MomentReport {
    Family family;
    std::uint64_t p = 0;
    unsigned r = 1;
    unsigned n = 1;
    std::vector<MomentEntry> moments;
};

struct SweepResult {
    HistogramResult histogram;
    MomentReport moments;
    std::vector<double> statistics; // per valid a, index order
};

inline SweepResult run_sweep(const SweepConfig& cfg, Family family) {
    if (cfg.bins < 1 || !(cfg.lo < cfg.hi) || cfg.n < 1)
        throw error(errc::invalid_argument, "sweep config: need bins >= 1, lo < hi, n >= 1");
    FieldCtx ctx = make_field(cfg.p, cfg.r, cfg.field_ceiling);
    const std::uint64_t q = ctx.q();

    std::vector<double> stats;
    if (family == Family::legendre) {
        auto table = legendre_sweep(ctx, cfg.threads);
        auto polys = p_polys_upto(cfg.n, PSignConvention::corrected);
        stats.resize(table.size());
        parallel_for(table.size(), cfg.threads, [&](std::size_t i) {
            FrobData f{table[i].t, q, ""};
            stats[i] = legendre_statistic_value(legendre_random_part(polys, f), q, cfg.n);
        });
    } else {
        auto table = k3_frob_sweep(ctx, cfg.pairing, cfg.threads);
        std::array<std::vector<QPoly>, 2> polys = {q_polys_upto(cfg.n, -1),
                                                   q_polys_upto(cfg.n, 1)};
        stats.resize(table.size());
        parallel_for(table.size(), cfg.threads, [&](std::size_t i) {
            K3FrobData k;
            k.gamma = table[i].gamma;
            k.clausen = FrobData{table[i].clausen_t, q, ""};
            stats[i] = k3_statistic_value(
                k3_random_part(polys[k.gamma > 0 ? 1 : 0], k), q, cfg.n);
        });
    }

    SweepResult res;
    res.statistics = stats;

    HistogramResult& h = res.histogram;
    double width = (cfg.hi - cfg.lo) / cfg.bins;
    h.edges.resize(cfg.bins + 1);
    for (unsigned i = 0; i <= cfg.bins; ++i) h.edges[i] = cfg.lo + width * i;
    h.counts.assign(cfg.bins, 0);
    h.sample_count = stats.size();
    for (double s : stats) {
        if (s < cfg.lo || s > cfg.hi) continue;
        auto bin = static_cast<std::uint64_t>((s - cfg.lo) / width);
        if (bin >= cfg.bins) bin = cfg.bins - 1; // right edge inclusive
        ++h.counts[bin];
        ++h.in_range;
    }
    h.empirical_density.resize(cfg.bins);
    h.reference.resize(cfg.bins);
    for (unsigned i = 0; i < cfg.bins; ++i) {
        h.empirical_density[i] = double(h.counts[i]) / (double(h.sample_count) * width);
        h.reference[i] = density_mass(family, h.edges[i], h.edges[i + 1]) / width;
    }

    MomentReport& mr = res.moments;
    mr.family = family;
    mr.p = cfg.p;
    mr.r = cfg.r;
    mr.n = cfg.n;
    for (unsigned m = 1; m <= cfg.moment_max; ++m) {
        double acc = 0.0;
        for (double s : stats) acc += std::pow(s, double(m));
        mr.moments.push_back(
            {m, acc / double(stats.size()), static_cast<double>(reference_moment(family, m))});
    }
    return res;
}

inline SweepConfig default_sweep_config(Family family) {
    SweepConfig cfg;
    if (family == Family::legendre) {
        cfg.p = 10007;
        cfg.lo = -2.5;
        cfg.hi = 2.5;
    } else {
        cfg.p = 3001;
        cfg.lo = -3.5;
        cfg.hi = 3.5;
    }
    return cfg;
}

} // namespace matpoints

#endif
