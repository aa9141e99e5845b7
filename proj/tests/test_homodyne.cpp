#include <doctest.h>

#include "gridcode/homodyne.hpp"
#include "gridcode/lattice.hpp"
#include "gridcode/rng.hpp"

#include <cmath>

using namespace gridcode;

TEST_CASE("noise model db round trip") {
    NoiseModel nm = NoiseModel::from_db(12.0);
    CHECK(nm.db() == doctest::Approx(12.0).epsilon(1e-12));
    CHECK(nm.sigma == doctest::Approx(std::sqrt(0.5 * std::pow(10.0, -1.2))).epsilon(1e-12));
}

TEST_CASE("zero error decodes to the identity") {
    auto b = catalog("square");
    Vec e = Vec::Zero(2);
    DecodeOutcome out = syndrome_and_correct(b.lat, e);
    CHECK(out.syndrome.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(out.correction.cwiseAbs().maxCoeff() < 1e-12);
    out = classify_residual(b.lat, b.frame, e, out.correction);
    CHECK(out.success);
    CHECK(out.residual_class == 'I');
}

TEST_CASE("correction lands exactly on the dual lattice") {
    Rng rng(13);
    for (const char* name : {"square", "tesseract", "d4"}) {
        auto b = catalog(name);
        int n = 2 * b.lat.m;
        Mat dual_t_inv = b.lat.Sdual.transpose().partialPivLu().inverse();
        for (int it = 0; it < 25; ++it) {
            Vec e(n);
            for (int i = 0; i < n; ++i) e(i) = 0.8 * (rng.uniform() - 0.5);
            DecodeOutcome out = syndrome_and_correct(b.lat, e);
            // syndrome entries wrapped to (-pi, pi]
            for (int i = 0; i < n; ++i) {
                CHECK(out.syndrome(i) <= kPi + 1e-12);
                CHECK(out.syndrome(i) > -kPi - 1e-12);
            }
            Vec resid = e + out.correction;
            Vec coords = dual_t_inv * resid;
            CHECK(round_to_int_vec(coords, 1e-6).has_value());
        }
    }
}

TEST_CASE("small errors always succeed") {
    auto b = catalog("square");
    Rng rng(29);
    for (int it = 0; it < 50; ++it) {
        Vec e(2);
        for (int i = 0; i < 2; ++i) e(i) = 0.2 * (rng.uniform() - 0.5);
        DecodeOutcome out = syndrome_and_correct(b.lat, e);
        out = classify_residual(b.lat, b.frame, e, out.correction);
        CHECK(out.success);
    }
}

TEST_CASE("run_trials is deterministic and sane") {
    auto b = catalog("square");
    NoiseModel nm = NoiseModel::from_db(10.0);
    auto r1 = run_trials(b.lat, b.frame, nm, 4000, 77, 4);
    auto r2 = run_trials(b.lat, b.frame, nm, 4000, 77, 1);
    CHECK(r1.p_logical == r2.p_logical);
    CHECK(r1.trials == 4000);
    CHECK(r1.p_logical >= 0);
    CHECK(r1.p_logical <= 1);
    // errors get rarer with more squeezing
    NoiseModel quiet = NoiseModel::from_db(16.0);
    auto r3 = run_trials(b.lat, b.frame, quiet, 4000, 77, 4);
    CHECK(r3.p_logical <= r1.p_logical);
}

TEST_CASE("noisy ancilla model degrades the error rate") {
    auto b = catalog("square");
    NoiseModel ideal = NoiseModel::from_db(11.0, false);
    NoiseModel noisy = NoiseModel::from_db(11.0, true);
    auto ri = run_trials(b.lat, b.frame, ideal, 20000, 5, 4);
    auto rn = run_trials(b.lat, b.frame, noisy, 20000, 5, 4);
    CHECK(rn.p_logical >= ri.p_logical);
}
