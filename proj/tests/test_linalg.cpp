#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cdmd/errors.hpp"
#include "cdmd/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <random>

using namespace cdmd;

namespace {

std::mt19937_64 rng(12345);

Mat random_mat(Index rows, Index cols, double scale = 1.0) {
    std::normal_distribution<double> dist(0.0, scale);
    Mat m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) m(i, j) = dist(rng);
    return m;
}

// Independent route for C1*A + A*C2 = C3: solve the vectorized system
// (I (x) C1 + C2^T (x) I) vec(A) = vec(C3) with a dense LU.
Mat kronecker_sylvester(const Mat& c1, const Mat& c2, const Mat& c3) {
    const Index r = c1.rows();
    const Index q = c2.rows();
    Mat big = Mat::Zero(r * q, r * q);
    for (Index j = 0; j < q; ++j)
        big.block(j * r, j * r, r, r) = c1;
    for (Index j = 0; j < q; ++j)
        for (Index i = 0; i < q; ++i)
            big.block(j * r, i * r, r, r) += c2(i, j) * Mat::Identity(r, r);
    Vec rhs(r * q);
    for (Index j = 0; j < q; ++j) rhs.segment(j * r, r) = c3.col(j);
    const Vec sol = big.fullPivLu().solve(rhs);
    Mat a(r, q);
    for (Index j = 0; j < q; ++j) a.col(j) = sol.segment(j * r, r);
    return a;
}

}  // namespace

TEST_CASE("svd identity") {
    const SvdFactors f = linalg::svd(Mat::Identity(3, 3));
    CHECK((f.S - Vec::Ones(3)).norm() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK((f.U - f.V).norm() < 1e-13);  // symmetric PSD input forces U = V
    CHECK((f.U * f.S.asDiagonal() * f.V.transpose() - Mat::Identity(3, 3)).norm() < 1e-13);
}

TEST_CASE("svd diagonal padded") {
    Mat m = Mat::Zero(3, 2);
    m(0, 0) = 3.0;
    m(1, 1) = 2.0;
    const SvdFactors f = linalg::svd(m);
    REQUIRE(f.S.size() == 2);
    CHECK(f.S(0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(f.S(1) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("svd reconstruction oracle") {
    const Mat m = random_mat(5, 4);
    const SvdFactors f = linalg::svd(m);
    CHECK((f.U * f.S.asDiagonal() * f.V.transpose() - m).norm() <= 1e-12 * m.norm());
    CHECK((f.U.transpose() * f.U - Mat::Identity(4, 4)).norm() < 1e-13);
    CHECK((f.V.transpose() * f.V - Mat::Identity(4, 4)).norm() < 1e-13);
    for (Index i = 1; i < f.S.size(); ++i) CHECK(f.S(i - 1) >= f.S(i));
}

TEST_CASE("svd round trip property") {
    for (int trial = 0; trial < 20; ++trial) {
        const Index m = 1 + static_cast<Index>(rng() % 10);
        const Index n = 1 + static_cast<Index>(rng() % 10);
        const Mat mat = random_mat(m, n, 2.0);
        const SvdFactors f = linalg::svd(mat);
        CHECK((f.U * f.S.asDiagonal() * f.V.transpose() - mat).norm() <=
              1e-11 * std::max(1.0, mat.norm()));
    }
}

TEST_CASE("svd rejects bad input") {
    CHECK_THROWS_AS(linalg::svd(Mat()), NumericalError);
    Mat bad = Mat::Ones(2, 2);
    bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(linalg::svd(bad), NumericalError);
}

TEST_CASE("pinv diagonal") {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = 2.0;
    m(1, 1) = 4.0;
    const Mat p = linalg::pinv(m);
    CHECK(p(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(p(1, 1) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(std::abs(p(0, 1)) < 1e-15);
}

TEST_CASE("pinv rank-1 outer product") {
    const Vec u = random_mat(5, 1);
    const Vec v = random_mat(3, 1);
    const Mat m = u * v.transpose();
    const Mat expected = v * u.transpose() / (u.squaredNorm() * v.squaredNorm());
    CHECK((linalg::pinv(m) - expected).norm() < 1e-12 * expected.norm());
}

TEST_CASE("pinv satisfies the Penrose identities") {
    const Mat m = random_mat(4, 6);
    const Mat p = linalg::pinv(m);
    CHECK((m * p * m - m).norm() <= 1e-10);
    CHECK((p * m * p - p).norm() <= 1e-9);
    CHECK(((m * p).transpose() - m * p).norm() <= 1e-9);
    CHECK(((p * m).transpose() - p * m).norm() <= 1e-9);
}

TEST_CASE("eig rotation generator") {
    Mat a(2, 2);
    a << 0.0, -1.0, 1.0, 0.0;
    const EigenPairs ep = linalg::eig(a);
    // tie on modulus and real part; imaginary tiebreak puts +i first
    CHECK(std::abs(ep.values(0) - Complex(0.0, 1.0)) < 1e-14);
    CHECK(std::abs(ep.values(1) - Complex(0.0, -1.0)) < 1e-14);
}

TEST_CASE("eig diagonal ordering") {
    Mat a = Mat::Zero(3, 3);
    a(0, 0) = 3.0;
    a(1, 1) = 1.0;
    a(2, 2) = 2.0;
    const EigenPairs ep = linalg::eig(a);
    CHECK(ep.values(0).real() == doctest::Approx(3.0));
    CHECK(ep.values(1).real() == doctest::Approx(2.0));
    CHECK(ep.values(2).real() == doctest::Approx(1.0));
}

TEST_CASE("eig companion matrix root oracle") {
    // (x-2)(x+1)(x-1/2) = x^3 - 1.5 x^2 - 1.5 x + 1
    Mat c = Mat::Zero(3, 3);
    c(1, 0) = 1.0;
    c(2, 1) = 1.0;
    c(0, 2) = -1.0;
    c(1, 2) = 1.5;
    c(2, 2) = 1.5;
    const EigenPairs ep = linalg::eig(c);
    CHECK(std::abs(ep.values(0) - Complex(2.0, 0.0)) < 1e-10);
    CHECK(std::abs(ep.values(1) - Complex(-1.0, 0.0)) < 1e-10);
    CHECK(std::abs(ep.values(2) - Complex(0.5, 0.0)) < 1e-10);
}

TEST_CASE("eig residual and normalization properties") {
    for (int trial = 0; trial < 10; ++trial) {
        const Index n = 2 + static_cast<Index>(rng() % 7);
        const Mat a = random_mat(n, n);
        const EigenPairs ep = linalg::eig(a);
        for (Index j = 0; j < n; ++j) {
            const CVec v = ep.vectors.col(j);
            CHECK(std::abs(v.norm() - 1.0) < 1e-12);
            CHECK((a * v - ep.values(j) * v).norm() <= 1e-9 * a.norm());
        }
    }
}

TEST_CASE("sylvester trivial cases") {
    const Mat m = random_mat(4, 4);
    SUBCASE("C1=C2=I") {
        const Mat a = linalg::sylvester_solve(Mat::Identity(4, 4), Mat::Identity(4, 4), 2.0 * m);
        CHECK((a - m).norm() < 1e-12 * m.norm());
    }
    SUBCASE("degenerate left term") {
        const Mat a = linalg::sylvester_solve(Mat::Zero(4, 4), Mat::Identity(4, 4), m);
        CHECK((a - m).norm() < 1e-12 * m.norm());
    }
}

TEST_CASE("sylvester SPD instance matches Kronecker oracle") {
    const Mat g1 = random_mat(5, 5);
    const Mat g2 = random_mat(5, 5);
    const Mat c1 = g1 * g1.transpose() + Mat::Identity(5, 5);
    const Mat c2 = g2 * g2.transpose() + Mat::Identity(5, 5);
    const Mat c3 = random_mat(5, 5);
    const Mat a = linalg::sylvester_solve(c1, c2, c3);
    const Mat oracle = kronecker_sylvester(c1, c2, c3);
    CHECK((a - oracle).norm() <= 1e-10 * std::max(1.0, oracle.norm()));
    CHECK((c1 * a + a * c2 - c3).norm() <= 1e-11 * c3.norm());
}

TEST_CASE("sylvester random instances vs Kronecker oracle") {
    for (int trial = 0; trial < 40; ++trial) {
        const Index r = 2 + static_cast<Index>(rng() % 7);  // up to 8
        // shift spectra apart so the pencil stays regular
        const Mat c1 = random_mat(r, r) + 3.0 * Mat::Identity(r, r);
        const Mat c2 = random_mat(r, r) + 3.0 * Mat::Identity(r, r);
        const Mat c3 = random_mat(r, r);
        const Mat a = linalg::sylvester_solve(c1, c2, c3);
        const Mat oracle = kronecker_sylvester(c1, c2, c3);
        CHECK((a - oracle).norm() <= 1e-9 * std::max(1.0, oracle.norm()));
    }
}

TEST_CASE("sylvester singular pencil") {
    // C1 and -C2 share the eigenvalue 1
    Mat c1 = Mat::Identity(3, 3);
    Mat c2 = -Mat::Identity(3, 3);
    CHECK_THROWS_AS(linalg::sylvester_solve(c1, c2, random_mat(3, 3)), SingularPencilError);
}

TEST_CASE("sqrtm diagonal and identity") {
    Mat a = Mat::Zero(2, 2);
    a(0, 0) = 4.0;
    a(1, 1) = 9.0;
    const CMat s = linalg::sqrtm(a);
    CHECK(std::abs(s(0, 0) - 2.0) < 1e-13);
    CHECK(std::abs(s(1, 1) - 3.0) < 1e-13);
    CHECK((linalg::sqrtm(Mat::Identity(3, 3)) - CMat::Identity(3, 3)).norm() < 1e-13);
}

TEST_CASE("sqrtm squaring oracle") {
    const Mat m = random_mat(5, 5) + 3.0 * Mat::Identity(5, 5);  // right-half-plane spectrum
    const Mat a = m * m;
    const CMat s = linalg::sqrtm(a);
    CHECK(((s * s).real() - a).norm() <= 1e-8 * a.norm());
}

TEST_CASE("sqrtm branch cut error") {
    Mat a = Mat::Zero(2, 2);
    a(0, 0) = -1.0;
    a(1, 1) = 2.0;
    CHECK_THROWS_AS(linalg::sqrtm(a), BranchCutError);
    Mat b = Mat::Zero(2, 2);
    b(1, 1) = 1.0;  // eigenvalue exactly zero is on the closed axis
    CHECK_THROWS_AS(linalg::sqrtm(b), BranchCutError);
}

TEST_CASE("linsolve_right basics") {
    const Mat b = random_mat(3, 4);
    CHECK((linalg::linsolve_right(Mat::Identity(4, 4), b) - b).norm() < 1e-13);
    CHECK((linalg::linsolve_right(2.0 * Mat::Identity(4, 4), b) - 0.5 * b).norm() < 1e-13);
}

TEST_CASE("linsolve_right residual oracle") {
    const Mat a = random_mat(6, 6) + 2.0 * Mat::Identity(6, 6);
    const Mat b = random_mat(6, 6);
    const Mat x = linalg::linsolve_right(a, b);
    CHECK((x * a - b).norm() <= 1e-11 * b.norm());
}

TEST_CASE("linsolve_right condition cap") {
    Mat a = Mat::Identity(3, 3);
    a(2, 2) = 1e-12;
    try {
        linalg::linsolve_right(a, Mat::Identity(3, 3));
        FAIL("expected IllConditionedError");
    } catch (const IllConditionedError& e) {
        CHECK(e.condition > 1e8);
    }
}

TEST_CASE("kernels are deterministic within a process") {
    const Mat m = random_mat(6, 5);
    const SvdFactors f1 = linalg::svd(m);
    const SvdFactors f2 = linalg::svd(m);
    CHECK(f1.U == f2.U);
    CHECK(f1.S == f2.S);
    CHECK(f1.V == f2.V);

    const Mat sq = random_mat(5, 5);
    const EigenPairs e1 = linalg::eig(sq);
    const EigenPairs e2 = linalg::eig(sq);
    CHECK(e1.values == e2.values);
    CHECK(e1.vectors == e2.vectors);

    const Mat c1 = random_mat(4, 4) + 3.0 * Mat::Identity(4, 4);
    const Mat c2 = random_mat(4, 4) + 3.0 * Mat::Identity(4, 4);
    const Mat c3 = random_mat(4, 4);
    CHECK(linalg::sylvester_solve(c1, c2, c3) == linalg::sylvester_solve(c1, c2, c3));
}
