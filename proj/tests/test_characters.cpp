#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>

#include "matpoints/characters.hpp"
#include "matpoints/pointcount.hpp"

using namespace matpoints;

namespace {

// Straight-from-definition reference for the normalized Jacobi sum, with no
// shared precomputation.
std::complex<double> jacobi_reference(const FieldCtx& f, std::uint64_t mA, std::uint64_t mB) {
    const double two_pi = 6.283185307179586476925286766559;
    auto chi = [&](std::uint64_t m, FieldElem x) -> std::complex<double> {
        if (x == 0) return {0.0, 0.0};
        double ang = two_pi * double(m) * double(f.dlog(x)) / double(f.q() - 1);
        return {std::cos(ang), std::sin(ang)};
    };
    std::complex<double> s{0.0, 0.0};
    for (FieldElem x = 0; x < f.q(); ++x) s += chi(mA, x) * std::conj(chi(mB, f.sub(1, x)));
    return chi(mB, f.neg(1)) * s / double(f.q());
}

} // namespace

TEST_CASE("character values over F_5") {
    FieldCtx f = make_field(5, 1);
    Character eps = trivial_char(f);
    Character phi = quadratic_char(f);
    CHECK(char_eval(eps, 0) == std::complex<double>{0.0, 0.0}); // 0 for every character
    CHECK(char_eval(eps, 3).real() == doctest::Approx(1.0));
    CHECK(char_eval(phi, 4).real() == doctest::Approx(1.0));
    CHECK(char_eval(phi, 2).real() == doctest::Approx(-1.0));
    CHECK(phi.times(phi).m == 0);     // phi^2 = eps
    CHECK(phi.conj().m == phi.m);     // phi is real
}

TEST_CASE("character orthogonality") {
    for (auto [p, r] : {std::pair<std::uint64_t, unsigned>{13, 1}, {7, 2}}) {
        FieldCtx f = make_field(p, r);
        for (std::uint64_t m = 0; m < f.q() - 1; ++m) {
            Character chi = char_of_exponent(f, m);
            std::complex<double> s{0.0, 0.0};
            for (FieldElem x = 1; x < f.q(); ++x) s += char_eval(chi, x);
            double expect = (m == 0) ? double(f.q() - 1) : 0.0;
            CHECK(std::abs(s - std::complex<double>{expect, 0.0}) < 1e-9);
        }
    }
}

TEST_CASE("jacobi_binom hand value and full F_5 cross-check") {
    FieldCtx f = make_field(5, 1);
    // (eps over eps) = eps(-1)/q * #{x not in {0,1}} = 3/5.
    auto v = jacobi_binom(trivial_char(f), trivial_char(f));
    CHECK(v.real() == doctest::Approx(0.6));
    CHECK(v.imag() == doctest::Approx(0.0));
    for (std::uint64_t a = 0; a < 4; ++a)
        for (std::uint64_t b = 0; b < 4; ++b) {
            auto got = jacobi_binom(char_of_exponent(f, a), char_of_exponent(f, b));
            CHECK(std::abs(got - jacobi_reference(f, a, b)) < 1e-12);
        }
}

TEST_CASE("batched all-phi binomials match the generic Greene sum") {
    for (auto [p, r] : {std::pair<std::uint64_t, unsigned>{5, 1}, {13, 1}, {5, 2}}) {
        FieldCtx f = make_field(p, r);
        GreeneContext g(f);
        Character phi = quadratic_char(f);
        Character eps = trivial_char(f);
        for (FieldElem x = 0; x < f.q(); ++x) {
            auto generic = g.greene_hyper({phi, phi}, {eps}, x);
            auto batched = g.all_phi_hyper(1, x);
            CHECK(std::abs(generic - batched) < 1e-9);
        }
    }
}

TEST_CASE("greene_hyper validates shape") {
    FieldCtx f = make_field(5, 1);
    GreeneContext g(f);
    CHECK_THROWS_AS(g.greene_hyper({quadratic_char(f)}, {trivial_char(f)}, 2), error);
}

TEST_CASE("2F1 hand value and Hasse bound") {
    FieldCtx f = make_field(5, 1);
    GreeneContext g(f);
    HyperValue v = g.ff_2F1(2);
    CHECK(v.value == BigRat(2, 5));
    CHECK(v.residual < 1e-9);
    // |q * 2F1| = |a_L| <= 2 sqrt(q) for every a outside {0,1}
    for (auto [p, r] : {std::pair<std::uint64_t, unsigned>{13, 1}, {5, 2}}) {
        FieldCtx fq = make_field(p, r);
        GreeneContext gq(fq);
        for (FieldElem a = 2; a < fq.q(); ++a) {
            BigRat scaled = gq.ff_2F1(a).value * BigRat(fq.q());
            double t = static_cast<double>(scaled);
            CHECK(t * t <= 4.0 * double(fq.q()) + 1e-9);
        }
    }
}

TEST_CASE("2F1 equals the Legendre trace identity") {
    // q * 2F1(a)_q = -phi_q(-1) * a_L(a; q), checked exactly after rounding.
    for (auto [p, r] : {std::pair<std::uint64_t, unsigned>{5, 1}, {7, 1}, {5, 2}}) {
        FieldCtx f = make_field(p, r);
        GreeneContext g(f);
        for (FieldElem a = 2; a < f.q(); ++a) {
            FrobData frob = legendre_trace(f, a);
            BigRat expected(BigInt(-frob.t * f.phi_minus_one()), BigInt(f.q()));
            CHECK(g.ff_2F1(a).value == expected);
        }
    }
}

TEST_CASE("rounding failure is detected") {
    FieldCtx f = make_field(5, 1);
    GreeneContext g(f);
    CHECK_THROWS_AS(g.ff_2F1(2, 1e-18), error);
}
