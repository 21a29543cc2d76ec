#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "matpoints/ffield.hpp"

using namespace matpoints;

TEST_CASE("F_5 basics") {
    FieldCtx f = make_field(5, 1);
    CHECK(f.q() == 5);
    CHECK(f.generator() == 2);
    CHECK(f.dlog(3) == 3); // 2^3 = 3 mod 5
    CHECK(f.inv(3) == 2);
    CHECK(f.add(3, 4) == 2);
    CHECK(f.sub(1, 3) == 3);
    CHECK(f.mul(3, 4) == 2);
    CHECK(f.neg(2) == 3);
    CHECK(f.pow(2, 4) == 1);
    CHECK(f.from_int(-1) == 4);
    CHECK(f.from_int(12) == 2);
    CHECK(f.phi(4) == 1);
    CHECK(f.phi(2) == -1);
    CHECK(f.phi(0) == 0);
    CHECK(f.phi_minus_one() == 1); // 5 = 1 mod 4
}

TEST_CASE("construction rejects bad input") {
    CHECK_THROWS_WITH_AS(make_field(4, 1), "NotPrime: 4", error);
    CHECK_THROWS_AS(make_field(3, 1), error);
    CHECK_THROWS_AS(make_field(2, 1), error);
    CHECK_THROWS_AS(make_field(5, 1, 3), error); // ceiling
    try {
        make_field(3, 2); // q = 9 is char 3 and out of scope
        CHECK(false);
    } catch (const error& e) {
        CHECK(e.code() == errc::prime_too_small);
    }
}

TEST_CASE("field axioms hold exhaustively over F_25 and F_49") {
    for (auto [p, r] : {std::pair<std::uint64_t, unsigned>{5, 2}, {7, 2}}) {
        FieldCtx f = make_field(p, r);
        const std::uint64_t q = f.q();
        // generator has full order
        CHECK(f.pow(f.generator(), q - 1) == 1);
        for (std::uint64_t d = 1; d < q - 1; ++d) {
            if ((q - 1) % d == 0 && d < q - 1) CHECK(f.pow(f.generator(), d) != 1);
        }
        // dlog/exp are inverse bijections
        for (FieldElem x = 1; x < q; ++x) CHECK(f.exp(f.dlog(x)) == x);
        // multiplication agrees with dlog addition; inverses work
        for (FieldElem x = 1; x < q; ++x) {
            CHECK(f.mul(x, f.inv(x)) == 1);
            CHECK(f.add(x, f.neg(x)) == 0);
        }
        // distributivity spot grid
        for (FieldElem x = 0; x < q; x += 3)
            for (FieldElem y = 0; y < q; y += 5)
                for (FieldElem z = 0; z < q; z += 7)
                    CHECK(f.mul(x, f.add(y, z)) == f.add(f.mul(x, y), f.mul(x, z)));
        // Frobenius: x^q = x for every element
        for (FieldElem x = 0; x < q; ++x) CHECK(f.pow(x, q) == x);
        // phi is multiplicative and -1 on the generator
        CHECK(f.phi(f.generator()) == -1);
        for (FieldElem x = 1; x < q; ++x)
            for (FieldElem y = 1; y < q; y += 4)
                CHECK(f.phi(f.mul(x, y)) == f.phi(x) * f.phi(y));
    }
}

TEST_CASE("phi(-1) matches q mod 4 in extension fields") {
    FieldCtx f25 = make_field(5, 2); // 25 = 1 mod 4
    CHECK(f25.phi(f25.neg(1)) == 1);
    CHECK(f25.phi_minus_one() == 1);
    FieldCtx f7 = make_field(7, 1); // 7 = 3 mod 4
    CHECK(f7.phi(f7.neg(1)) == -1);
    CHECK(f7.phi_minus_one(1) == -1);
    CHECK(f7.phi_minus_one(2) == 1); // 49 = 1 mod 4
}

TEST_CASE("construction is deterministic") {
    FieldCtx a = make_field(11, 2);
    FieldCtx b = make_field(11, 2);
    CHECK(a.generator() == b.generator());
    CHECK(a.spec().modulus == b.spec().modulus);
    for (FieldElem x = 1; x < a.q(); ++x) CHECK(a.dlog(x) == b.dlog(x));
}

TEST_CASE("division by zero and dlog(0) throw") {
    FieldCtx f = make_field(5, 1);
    CHECK_THROWS_AS(f.inv(0), error);
    CHECK_THROWS_AS(f.dlog(0), error);
}
