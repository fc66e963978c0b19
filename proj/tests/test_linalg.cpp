#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "orbit/linalg.hpp"

using namespace orbit;

namespace {
RatPoly poly(std::initializer_list<Rat> coeffs) { return RatPoly(std::vector<Rat>(coeffs)); }

RatMat scaled(const std::vector<std::vector<long>>& m, const Rat& s) {
    RatMat out(m.size());
    for (size_t i = 0; i < m.size(); ++i)
        for (long e : m[i]) out[i].push_back(Rat(e) * s);
    return out;
}

const RatMat kRotation = scaled({{4, -3}, {3, 4}}, Rat(1, 5));
const RatMat kContracting =
    scaled({{4, -3, 4, -3}, {3, 4, 3, 4}, {0, 0, 4, -3}, {0, 0, 3, 4}}, Rat(4, 25));
const RatMat kShear =
    scaled({{4, -3, 4, -3}, {3, 4, 3, 4}, {0, 0, 4, -3}, {0, 0, 3, 4}}, Rat(1, 5));

std::vector<Rat> rvec(std::initializer_list<long> v) {
    std::vector<Rat> out;
    for (long e : v) out.emplace_back(e);
    return out;
}

AlgVec pow_apply(const AlgMat& A, AlgVec v, int n) {
    for (int i = 0; i < n; ++i) v = mat_vec_mul(A, v);
    return v;
}
}  // namespace

TEST_CASE("characteristic polynomials") {
    CHECK(char_poly(mat_identity(2)) == poly({Rat(1), Rat(-2), Rat(1)}));
    CHECK(char_poly(alg_mat(kRotation)) == poly({Rat(1), Rat(-8, 5), Rat(1)}));
    CHECK(char_poly(alg_mat({{Rat(0), Rat(-1)}, {Rat(1), Rat(0)}})) ==
          poly({Rat(1), Rat(0), Rat(1)}));
}

TEST_CASE("jordan form of a diagonal matrix is itself") {
    auto inst = make_instance(RatMat{{Rat(2), Rat(0)}, {Rat(0), Rat(3)}}, rvec({1, 1}), rvec({4, 9}));
    auto [dec, jinst] = jordan_decompose(inst);
    REQUIRE(dec.blocks.size() == 2);
    CHECK(dec.blocks[0].size == 1);
    CHECK(dec.blocks[1].size == 1);
    CHECK(dec.blocks[0].eigenvalue == AlgNum(Rat(2)));
    CHECK(dec.blocks[1].eigenvalue == AlgNum(Rat(3)));
    CHECK(mat_equal(dec.Q, mat_identity(2)));
    CHECK(mat_equal(jinst.A, inst.A));
}

TEST_CASE("rotation matrix diagonalizes with conjugate eigenvalues") {
    auto inst = make_instance(kRotation, rvec({1, 0}), rvec({0, 1}));
    auto [dec, jinst] = jordan_decompose(inst);
    REQUIRE(dec.blocks.size() == 2);
    CHECK(dec.blocks[0].size == 1);
    CHECK(dec.blocks[1].size == 1);
    AlgNum l0 = dec.blocks[0].eigenvalue, l1 = dec.blocks[1].eigenvalue;
    CHECK(l0.minpoly() == poly({Rat(1), Rat(-8, 5), Rat(1)}));
    CHECK(l0 == l1.conj());
    CHECK(l0 * l1 == AlgNum(Rat(1)));
    // full exact verification of the change of basis
    CHECK(mat_equal(mat_mul(dec.Q, dec.Qinv), mat_identity(2)));
    CHECK(mat_equal(mat_mul(mat_mul(dec.Q, inst.A), dec.Qinv), jinst.A));
    CHECK(jinst.A[0][1] == AlgNum(Rat(0)));
    CHECK(jinst.A[1][0] == AlgNum(Rat(0)));
}

TEST_CASE("non-diagonalizable spectral radius one matrix: two 2x2 blocks") {
    auto inst = make_instance(kShear, rvec({1, 0, 1, 0}), rvec({0, 1, 0, 1}));
    auto [dec, jinst] = jordan_decompose(inst);
    REQUIRE(dec.blocks.size() == 2);
    CHECK(dec.blocks[0].size == 2);
    CHECK(dec.blocks[1].size == 2);
    CHECK(dec.blocks[0].eigenvalue.minpoly() == poly({Rat(1), Rat(-8, 5), Rat(1)}));
    CHECK(dec.blocks[0].eigenvalue == dec.blocks[1].eigenvalue.conj());
    CHECK(modulus_cmp_one(dec.blocks[0].eigenvalue) == CmpOne::Equal);
    CHECK(mat_equal(mat_mul(dec.Q, dec.Qinv), mat_identity(4)));
    CHECK(mat_equal(mat_mul(mat_mul(dec.Q, inst.A), dec.Qinv), jinst.A));
    // superdiagonal inside each block
    CHECK(jinst.A[0][1] == AlgNum(Rat(1)));
    CHECK(jinst.A[2][3] == AlgNum(Rat(1)));
    CHECK(jinst.A[1][2] == AlgNum(Rat(0)));
}

TEST_CASE("contracting matrix: two 2x2 blocks with eigenvalues (16 +- 12i)/25") {
    auto inst = make_instance(kContracting, rvec({1, 0, 1, 0}), rvec({0, 0, 0, 0}));
    auto [dec, jinst] = jordan_decompose(inst);
    REQUIRE(dec.blocks.size() == 2);
    CHECK(dec.blocks[0].size == 2);
    CHECK(dec.blocks[1].size == 2);
    CHECK(dec.blocks[0].eigenvalue.minpoly() == poly({Rat(16, 25), Rat(-32, 25), Rat(1)}));
    CHECK(modulus_cmp_one(dec.blocks[0].eigenvalue) == CmpOne::Less);
    CHECK(mat_equal(mat_mul(dec.Q, dec.Qinv), mat_identity(4)));
    CHECK(mat_equal(mat_mul(mat_mul(dec.Q, inst.A), dec.Qinv), jinst.A));
}

TEST_CASE("block eigenvalues are roots of the characteristic polynomial") {
    for (const RatMat& m : {kContracting, kShear}) {
        auto inst = make_instance(m, rvec({1, 0, 0, 0}), rvec({0, 0, 0, 1}));
        auto [dec, jinst] = jordan_decompose(inst);
        RatPoly f = char_poly(inst.A);
        int total = 0;
        for (const auto& blk : dec.blocks) {
            total += blk.size;
            CHECK(poly_divides(blk.eigenvalue.minpoly(), f));
        }
        CHECK(total == inst.d);
    }
}

TEST_CASE("conjugation round trip and examples") {
    auto inst = make_instance(RatMat{{Rat(3), Rat(0)}, {Rat(0), Rat(3)}}, rvec({1, 1}), rvec({2, 2}));
    AlgMat Q = alg_mat({{Rat(2), Rat(0)}, {Rat(0), Rat(1)}});
    auto conj = conjugate_instance(inst, Q);
    CHECK(mat_equal(conj.A, inst.A));  // diagonal commutes
    CHECK(conj.x[0] == AlgNum(Rat(2)));
    CHECK(conj.x[1] == AlgNum(Rat(1)));
    auto back = conjugate_instance(conj, mat_inverse(Q));
    CHECK(mat_equal(back.A, inst.A));
    CHECK(back.x[0] == inst.x[0]);
    CHECK(back.y[1] == inst.y[1]);
    CHECK_THROWS(conjugate_instance(inst, alg_mat({{Rat(1), Rat(1)}, {Rat(1), Rat(1)}})));
}

TEST_CASE("rotation instance diagonalizes via its eigenvector matrix") {
    auto inst = make_instance(kRotation, rvec({1, 0}), rvec({0, 1}));
    auto [dec, jinst] = jordan_decompose(inst);
    // orbit points map through the conjugation consistently
    for (int n = 0; n < 6; ++n) {
        AlgVec lhs = mat_vec_mul(dec.Q, pow_apply(inst.A, inst.x, n));
        AlgVec rhs = pow_apply(jinst.A, jinst.x, n);
        for (int i = 0; i < 2; ++i) CHECK(lhs[i] == rhs[i]);
    }
}

TEST_CASE("orbit equivariance for random rational matrices") {
    std::mt19937_64 rng(42);
    auto rnd = [&](int lim) { return (long)(rng() % (2 * lim + 1)) - lim; };
    for (int trial = 0; trial < 8; ++trial) {
        int d = 2 + (int)(rng() % 2);
        RatMat A(d, std::vector<Rat>(d));
        RatMat Qr(d, std::vector<Rat>(d));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                A[i][j] = Rat(rnd(3), 1 + (long)(rng() % 3));
                Qr[i][j] = Rat(rnd(3));
            }
        // make Q invertible by adding a multiple of I if needed
        AlgMat Q;
        while (true) {
            try {
                Q = alg_mat(Qr);
                mat_inverse(Q);
                break;
            } catch (const std::invalid_argument&) {
                for (int i = 0; i < d; ++i) Qr[i][i] += 1;
            }
        }
        std::vector<Rat> x(d), y(d, Rat(0));
        for (int i = 0; i < d; ++i) x[i] = Rat(rnd(2));
        auto inst = make_instance(A, x, y);
        auto conj = conjugate_instance(inst, Q);
        for (int n = 0; n <= 20; n += 5) {
            AlgVec lhs = mat_vec_mul(Q, pow_apply(inst.A, inst.x, n));
            AlgVec rhs = pow_apply(conj.A, conj.x, n);
            for (int i = 0; i < d; ++i) CHECK(lhs[i] == rhs[i]);
        }
    }
}
