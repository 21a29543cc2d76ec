#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "matpoints/qseries.hpp"

using namespace matpoints;

namespace {
QPoly q_to(int e) { return QPoly::monomial(1, e); }
} // namespace

TEST_CASE("QPoly arithmetic and exact division") {
    QPoly a = q_to(2) + q_to(1) + QPoly::one();           // q^2+q+1
    QPoly b = q_to(1) - QPoly::one();                     // q-1
    CHECK((a * b) == q_to(3) - QPoly::one());             // q^3-1
    CHECK((a * b).divided_exact(b) == a);
    CHECK((q_to(3) - QPoly::one()).divided_exact(a) == b);
    CHECK_THROWS_AS(a.divided_exact(b), error);           // nonzero remainder
    CHECK_THROWS_AS(a.divided_exact(QPoly()), error);
    // Laurent handling
    QPoly lau = q_to(-1) + QPoly::one();
    CHECK((lau * q_to(1)) == (q_to(1) + QPoly::one()));
    CHECK(!lau.is_polynomial());
    CHECK(lau.eval(BigRat(2)) == BigRat(3, 2));
    QPoly c = q_to(4) + q_to(2).scaled(3);
    CHECK(c.eval_int(BigInt(2)) == 16 + 12);
    CHECK(c.degree() == 4);
    CHECK(c.coeff(2) == 3);
}

TEST_CASE("q-Pochhammer and q-multinomial hand values") {
    CHECK(qpoch(0) == QPoly::one());
    CHECK(qpoch(2) == QPoly::one() - q_to(1) - q_to(2) + q_to(3));
    CHECK(qmultinomial(2, {1, 1}) == QPoly::one() + q_to(1));
    CHECK(qmultinomial(3, {1, 1, 1}).eval(BigRat(1)) == 6);
    CHECK(qmultinomial(4, {2, 1, 1}).eval(BigRat(1)) == 12);
    CHECK(qmultinomial(4, {0, 4}) == QPoly::one());
    CHECK_THROWS_AS(qmultinomial(3, {1, 1}), error);
    // monic polynomials
    for (unsigned n = 1; n <= 6; ++n) {
        QPoly m = qmultinomial(n, {n / 2, n - n / 2});
        CHECK(m.is_polynomial());
        CHECK(m.leading_coeff() == 1);
    }
}

TEST_CASE("partition enumeration") {
    CHECK(partitions(0).size() == 1);
    CHECK(partitions(3).size() == 3);
    CHECK(partitions(5).size() == 7);
    CHECK(partitions(8).size() == 22);
    Partition p = Partition::of({3, 2, 2, 1});
    CHECK(p.size == 8);
    CHECK(p.length == 4);
    REQUIRE(p.mults.size() == 3);
    CHECK(p.mults[1] == std::pair<unsigned, unsigned>{2, 2});
    CHECK(partition_tuples4(0).size() == 1);
    CHECK(partition_tuples4(1).size() == 4);
    CHECK(partition_tuples4(3).size() == 40); // coeff of x^3 in (sum p(k)x^k)^4
}

TEST_CASE("P polynomials: hand values in both conventions") {
    CHECK(p_poly(1, 0, PSignConvention::printed) == q_to(1));
    CHECK(p_poly(1, 1, PSignConvention::printed) == q_to(1).scaled(-1));
    CHECK(p_poly(1, 1, PSignConvention::corrected) == q_to(1));
    CHECK(p_poly(2, 0, PSignConvention::printed) == q_to(4) + q_to(3) + q_to(2));
    CHECK(p_poly(2, 1, PSignConvention::printed) == (q_to(4) + q_to(3)).scaled(-1));
    CHECK(p_poly(2, 1, PSignConvention::corrected) == q_to(4) + q_to(3));
    CHECK(p_poly(2, 2, PSignConvention::printed) == q_to(3));
    // corrected negates printed for k >= 1 and only there
    CHECK(p_poly(2, 2, PSignConvention::corrected) == q_to(3).scaled(-1));
    CHECK(p_poly(3, 0, PSignConvention::corrected) == p_poly(3, 0, PSignConvention::printed));
    CHECK_THROWS_AS(p_poly(2, 3), error);
}

TEST_CASE("P degree and leading-coefficient law up to n = 8") {
    for (unsigned n = 1; n <= 8; ++n)
        for (unsigned k = 0; k <= n; ++k) {
            QPoly p = p_poly(n, k, PSignConvention::printed);
            CHECK(p.degree() == int(n * n - k * (k - 1) / 2));
            BigInt lead = p.leading_coeff();
            CHECK((lead == 1 || lead == -1));
            CHECK(lead == ((k % 2 == 0) ? 1 : -1));
        }
}

TEST_CASE("P limits match the classical 2F1 closed form up to n = 8") {
    for (unsigned n = 1; n <= 8; ++n)
        for (unsigned k = 0; k <= n; ++k) {
            BigRat printed = p_poly_limit(n, k, PSignConvention::printed);
            BigRat classical = BigRat(binomial(n, k)) *
                               classical_2F1(BigRat(int(k) - int(n), 2),
                                             BigRat(int(k) + 1 - int(n), 2), BigRat(k + 1),
                                             BigRat(4));
            if (k % 2 != 0) classical = -classical;
            CHECK(printed == classical);
        }
    CHECK(p_poly_limit(2, 0) == 3);
    CHECK(p_poly_limit(1, 1) == -1);
}

TEST_CASE("Q and R polynomials: hand values") {
    for (int g : {1, -1}) {
        CHECK(q_poly(1, 1, g) == q_to(2));
        CHECK(q_poly(1, 0, g) == q_to(2) + q_to(1).scaled(g));
        CHECK(r_poly(1, g, RConstraintConvention::one_sided) == q_to(1).scaled(-g));
        CHECK(r_poly(1, g, RConstraintConvention::printed) == q_to(1).scaled(-2 * g));
    }
    CHECK_THROWS_AS(q_poly(1, 0, 2), error);
    CHECK_THROWS_AS(q_poly(1, 2, 1), error);
}

TEST_CASE("Q degree and leading-coefficient law up to n = 5") {
    for (unsigned n = 1; n <= 5; ++n)
        for (unsigned k = 0; k <= n; ++k)
            for (int g : {1, -1}) {
                QPoly p = q_poly(n, k, g);
                CHECK(p.degree() == int(n * n + n));
                CHECK(p.leading_coeff() == 1);
            }
}

TEST_CASE("Q limits match the classical closed form up to n = 6") {
    for (unsigned n = 1; n <= 6; ++n)
        for (unsigned k = 0; k <= n; ++k)
            for (int g : {1, -1}) {
                CHECK(q_poly_limit(n, k, g) == q_poly_classical_limit(n, k, g));
            }
    // gamma = +1 closed form equals the 2F1 statement
    for (unsigned n = 1; n <= 6; ++n)
        for (unsigned k = 0; k <= n; ++k) {
            BigRat via_2f1 = BigRat(binomial(n, k) * big_pow(BigInt(2), n - k)) *
                             classical_2F1(BigRat(int(k) - int(n), 2),
                                           BigRat(int(k) + 1 - int(n), 2), BigRat(k + 1),
                                           BigRat(1));
            CHECK(q_poly_classical_limit(n, k, 1) == via_2f1);
        }
    CHECK(q_poly_limit(1, 0, 1) == 2);
    CHECK(q_poly_limit(1, 0, -1) == 0);
    CHECK(q_poly_limit(1, 1, 1) == 1);
    CHECK(q_poly_limit(1, 1, -1) == 1);
    // gamma = -1 limits vanish exactly when n - k is odd
    CHECK(q_poly_limit(2, 0, -1) == 2);
    CHECK(q_poly_limit(2, 1, -1) == 0);
    CHECK(q_poly_limit(3, 1, -1) == 3);
}

TEST_CASE("classical_2F1 terminating values and guards") {
    CHECK(classical_2F1(BigRat(-1), BigRat(-1, 2), BigRat(1), BigRat(4)) == 3);
    CHECK(classical_2F1(BigRat(0), BigRat(5), BigRat(3), BigRat(9)) == 1);
    CHECK(classical_2F1(BigRat(-1, 2), BigRat(0), BigRat(1), BigRat(7)) == 1);
    CHECK(classical_2F1(BigRat(-2), BigRat(1), BigRat(1), BigRat(1)) == 0); // (1-x)^2 at x=1
    CHECK_THROWS_AS(classical_2F1(BigRat(1, 2), BigRat(1), BigRat(1), BigRat(1), 50), error);
    CHECK_THROWS_AS(classical_2F1(BigRat(-3), BigRat(1), BigRat(-1), BigRat(1)), error);
}
