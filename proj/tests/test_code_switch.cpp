#include <doctest.h>

#include "gridcode/code_switch.hpp"
#include "gridcode/lattice.hpp"

#include <cmath>

using namespace gridcode;

namespace {

Mat blkdiag(const Mat& a, const Mat& b) {
    Mat m = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    m.topLeftCorner(a.rows(), a.cols()) = a;
    m.bottomRightCorner(b.rows(), b.cols()) = b;
    return m;
}

}  // namespace

TEST_CASE("same_lattice and sublattice basics") {
    auto sq = catalog("square");
    CHECK(same_lattice(sq.lat.S, sq.lat.S));
    CHECK(sublattice(2.0 * sq.lat.S, sq.lat.S));
    CHECK(!same_lattice(2.0 * sq.lat.S, sq.lat.S));
    CHECK(!same_lattice(sq.lat.S, catalog("hexagonal").lat.S));
}

TEST_CASE("two diamonds sit inside d4") {
    auto dia = catalog("diamond");
    auto d4 = catalog("d4");
    Mat pair = blkdiag(dia.lat.S, dia.lat.S);
    CHECK(sublattice(pair, d4.lat.S));
    CHECK(!same_lattice(pair, d4.lat.S));
}

TEST_CASE("parse_stabilizer_code") {
    // five-qubit code: cyclic shifts of XZZXI
    auto code = parse_stabilizer_code({"XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"});
    CHECK(code.n == 5);
    CHECK(code.k == 1);
    CHECK(code.B.rows() == 4);
    CHECK(code.B.cols() == 10);
    // generators that anticommute must be rejected
    CHECK_THROWS_AS(parse_stabilizer_code({"XI", "ZI"}), validation_error);
}

TEST_CASE("hermite_normal_form spans the same row space") {
    IMat g(3, 2);
    g << 2, 4, 1, 3, 0, 2;
    IMat h = hermite_normal_form(g);
    CHECK(h.rows() == 2);
    // upper triangular with positive pivots
    CHECK(h(0, 0) > 0);
    CHECK(h(1, 1) > 0);
    CHECK(h(1, 0) == 0);
    // the original rows are integer combinations of H (here: directly checkable)
    // row space of g is {(a, b): a in Z, b same parity info}; determinant products agree
    CHECK(h(0, 0) * h(1, 1) == 2);  // index of the row lattice
}

TEST_CASE("concatenation identities") {
    auto d4 = catalog("d4");
    auto lifted = concatenate(catalog("diamond"), parse_stabilizer_code({"YY"}));
    CHECK(same_lattice(lifted.lat.S, d4.lat.S));

    auto tess = catalog("tesseract");
    auto lifted2 = concatenate(catalog("rectangular"), parse_stabilizer_code({"ZZ"}));
    CHECK(same_lattice(lifted2.lat.S, tess.lat.S));

    // stabilizer state on four qubits lifts the diamond to the unit-scale E8 lattice
    auto lifted3 = concatenate(
        catalog("diamond"), parse_stabilizer_code({"YYII", "IYYI", "IIYY", "ZZZZ"}));
    auto e8 = catalog("e8", 1.0);
    CHECK(same_lattice(lifted3.lat.S, e8.lat.S));
}

TEST_CASE("concatenation dimension law") {
    // [[5,1,3]] input over a d=2 base gives d = 2^1
    auto five = parse_stabilizer_code({"XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"});
    auto lifted = concatenate(catalog("square"), five);
    CHECK(lifted.lat.d == 2);
    CHECK(lifted.lat.m == 5);
}

TEST_CASE("split and merge round trip on d4") {
    auto d4 = catalog("d4");
    auto dia = catalog("diamond");
    // pre-split gauge mu = (0,1,1,1)
    GaugeState gs;
    gs.mu = IVec::Zero(4);
    gs.mu(1) = gs.mu(2) = gs.mu(3) = 1;
    gs.upsilon = IVec::Zero(3);
    REQUIRE(validate_gauge(d4.lat, gs.mu));
    SplitResult parts = split(d4.lat, d4.frame, gs, dia.lat.S, dia.lat.S);
    CHECK(same_lattice(parts.a.lat.S, dia.lat.S));
    CHECK(same_lattice(parts.b.lat.S, dia.lat.S));

    // X_D4 factors as the same nontrivial logical on each diamond
    Vec x_d4 = d4.frame.L0.row(0);
    char ca = pauli_class(parts.a.lat, parts.a.frame, x_d4.head(2));
    char cb = pauli_class(parts.b.lat, parts.b.frame, x_d4.tail(2));
    CHECK(ca == cb);
    CHECK((ca == 'X' || ca == 'Y' || ca == 'Z'));

    // merging back over a Y(x)Y representative returns the d4 lattice
    Vec lam = Vec::Zero(4);
    lam.head(2) = Vec(parts.a.frame.L0.row(1).transpose());
    lam.tail(2) = Vec(parts.b.frame.L0.row(1).transpose());
    MergeSpec spec{lam, +1};
    CodeBundle merged = merge(parts.a, parts.b, spec, d4.lat.S, d4.frame.L0);
    CHECK(same_lattice(merged.lat.S, d4.lat.S));
    CHECK(merged.lat.d == 2);
}

TEST_CASE("merge hierarchy holds") {
    auto d4 = catalog("d4");
    auto dia = catalog("diamond");
    Mat direct = blkdiag(dia.lat.S, dia.lat.S);
    GkpLattice sum = build(direct);
    // Lambda_A + Lambda_B inside Lambda_C inside Lambda_C* inside Lambda_A* + Lambda_B*
    CHECK(sublattice(direct, d4.lat.S));
    Mat dual_sum = blkdiag(dia.lat.Sdual, dia.lat.Sdual);
    CHECK(sublattice(d4.lat.Sdual, dual_sum));
    (void)sum;
}

TEST_CASE("four mode code has uniform pauli lengths") {
    auto fm = catalog("four_mode");
    for (int r = 0; r < 3; ++r)
        CHECK(fm.frame.L0.row(r).norm() ==
              doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-10));
}
