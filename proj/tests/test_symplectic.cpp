#include <doctest.h>

#include "gridcode/lattice.hpp"
#include "gridcode/rng.hpp"
#include "gridcode/symplectic.hpp"

using namespace gridcode;

namespace {

Mat blkdiag(const Mat& a, const Mat& b) {
    Mat m = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    m.topLeftCorner(a.rows(), a.cols()) = a;
    m.bottomRightCorner(b.rows(), b.cols()) = b;
    return m;
}

IMat random_int_matrix(int n, Rng& rng, int span = 4) {
    IMat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m(i, j) = static_cast<std::int64_t>(rng.next() % (2 * span + 1)) - span;
    return m;
}

}  // namespace

TEST_CASE("omega basics") {
    for (int m : {1, 2, 4}) {
        Mat W = omega(m);
        CHECK((W + W.transpose()).norm() == doctest::Approx(0.0));
        CHECK((W * W + Mat::Identity(2 * m, 2 * m)).norm() == doctest::Approx(0.0));
    }
    Vec u(2), v(2);
    u << 1, 0;
    v << 0, 1;
    CHECK(omega_form(u, v) == doctest::Approx(1.0));
    CHECK(omega_form(v, u) == doctest::Approx(-1.0));
}

TEST_CASE("gates are symplectic") {
    CHECK(is_symplectic(rotation_gate(2, 0, 0.7)));
    CHECK(is_symplectic(squeeze_gate(2, 1, 0.3)));
    CHECK(is_symplectic(shear_gate(1, 0, 1.2)));
    CHECK(is_symplectic(beamsplitter_gate(2, 0, 1)));
    CHECK(is_symplectic(sum_gate(2, 0, 1, 0.5)));
    CHECK(is_orthogonal(givens_gate(2, 0, 2, 0.4)));
    CHECK(is_orthogonal(rotation_gate(1, 0, 0.7)));
}

TEST_CASE("beamsplitter convention") {
    Mat B = beamsplitter_gate(2, 0, 1);
    Vec x(4);
    x << 1, 0, 0, 0;  // q1
    Vec y = B * x;
    double h = 1.0 / std::sqrt(2.0);
    CHECK(y(0) == doctest::Approx(h));
    CHECK(y(2) == doctest::Approx(h));
}

TEST_CASE("exact integer linear algebra") {
    Rng rng(42);
    for (int it = 0; it < 20; ++it) {
        IMat m = random_int_matrix(4, rng);
        std::int64_t d = det_int(m);
        CHECK(d == doctest::Approx(m.cast<double>().determinant()).epsilon(1e-9));
        IMat adj = adjugate_int(m);
        IMat prod = m * adj;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) CHECK(prod(i, j) == (i == j ? d : 0));
    }
    IMat u(2, 2);
    u << 2, 1, 1, 1;  // det 1
    IMat inv = inverse_unimodular(u);
    CHECK((u * inv - IMat::Identity(2, 2)).cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("round_to_int guards") {
    Mat m(1, 2);
    m << 3.0000000001, -2.0;
    CHECK(round_to_int(m, 1e-6).has_value());
    m(0, 0) = 3.01;
    CHECK(!round_to_int(m, 1e-6).has_value());
}

TEST_CASE("symplectic normal form") {
    Rng rng(7);
    for (const char* name : {"square", "tesseract", "d4", "e8", "four_mode"}) {
        auto b = catalog(name);
        NormalForm nf = symplectic_normal_form(b.lat.A);
        CHECK(std::abs(det_int(nf.R)) == 1);
        IMat lhs = nf.R * b.lat.A * nf.R.transpose();
        CHECK((lhs - nf.form).cwiseAbs().maxCoeff() == 0);
        int m = b.lat.m;
        std::int64_t prod = 1;
        for (int t = 0; t < m; ++t) {
            CHECK(nf.form(t, m + t) == nf.D(t));
            CHECK(nf.D(t) > 0);
            if (t + 1 < m) CHECK(nf.D(t) % nf.D(t + 1) == 0);
            prod *= nf.D(t);
        }
        CHECK(prod == b.lat.d);
        // form has the [[0, D], [-D, 0]] block structure
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                CHECK(nf.form(i, j) == 0);
                CHECK(nf.form(m + i, m + j) == 0);
                if (i != j) CHECK(nf.form(i, m + j) == 0);
            }
    }
}

TEST_CASE("normal form invariant under random congruence") {
    Rng rng(11);
    auto b = catalog("tesseract");
    NormalForm ref = symplectic_normal_form(b.lat.A);
    for (int it = 0; it < 10; ++it) {
        // random unimodular R from elementary row operations
        IMat r = IMat::Identity(4, 4);
        for (int k = 0; k < 8; ++k) {
            int i = rng.next() % 4, j = rng.next() % 4;
            if (i == j) continue;
            std::int64_t c = static_cast<std::int64_t>(rng.next() % 5) - 2;
            r.row(i) += c * r.row(j);
        }
        IMat a2 = r * b.lat.A * r.transpose();
        NormalForm nf = symplectic_normal_form(a2);
        CHECK((nf.D - ref.D).cwiseAbs().maxCoeff() == 0);
    }
}

TEST_CASE("gaussian map between equivalent lattices") {
    auto sq = catalog("square");
    auto hex = catalog("hexagonal");
    auto map = gaussian_map_between(sq.lat.S, hex.lat.S);
    REQUIRE(map.has_value());
    CHECK(is_symplectic(map->M, 1e-9));
    Mat resid = map->R.cast<double>() * sq.lat.S * map->M - hex.lat.S;
    CHECK(resid.cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("gaussian map rejects inequivalent lattices") {
    auto qn = catalog("qunaught", 1.0);
    Mat s1 = blkdiag(2.0 * qn.lat.S, qn.lat.S);
    Mat s2 = blkdiag(std::sqrt(2.0) * qn.lat.S, std::sqrt(2.0) * qn.lat.S);
    CHECK(!gaussian_map_between(s1, s2).has_value());
}
