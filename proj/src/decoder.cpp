#include "gridcode/decoder.hpp"

#include "gridcode/rng.hpp"
#include "gridcode/symplectic.hpp"

#include <cmath>
#include <thread>

namespace gridcode {

double SmearConfig::sigma() const {
    return std::sqrt(std::tanh(std::asinh(2.0 * epsilon) / 2.0));
}

namespace {

// wrap each entry to (-1/2, 1/2]
Vec wrap_frac(const Vec& q) {
    Vec f = q;
    for (Eigen::Index i = 0; i < f.size(); ++i) {
        f(i) = q(i) - std::ceil(q(i) - 0.5);
    }
    return f;
}

}  // namespace

Vec flow_relax(const GkpLattice& lat, const Vec& e, const FlowConfig& cfg) {
    // The flow ends inside a single unit cell of the syndrome torus once
    // |frac(S Omega x)|_2 < 1/2 (the fractional syndrome norm is
    // non-increasing along trajectories), after which the fixed point is
    // exactly the dual point (S Omega)^{-1} round(S Omega x).
    const Mat SW = lat.S * omega(lat.m);
    const Mat SWt = SW.transpose();
    Vec x = e;
    Vec q = SW * x;
    for (long step = 0; step < cfg.max_steps; ++step) {
        Vec f = wrap_frac(q);
        if (f.norm() < 0.49) {
            Vec k = q - f;  // integer part
            return SW.partialPivLu().solve(k);
        }
        Vec grad = SWt * f;
        if (grad.norm() < cfg.convergence_tol) break;  // stuck on a separatrix
        x -= cfg.step * grad;
        q = SW * x;
    }
    throw error("flow_relax: flow stalled (separatrix)", 3);
}

char classify_error(const GkpLattice& lat, const LogicalFrame& frame, const Vec& e,
                    const FlowConfig& cfg) {
    Vec fp = flow_relax(lat, e, cfg);
    char cls = pauli_class(lat, frame, fp);
    if (cls == '\0')
        throw numerical_error("classify_error: fixed point is not a dual point");
    return cls;
}

ProbEstimate smeared_error_prob(const GkpLattice& lat, const LogicalFrame& frame,
                                const Vec& e, const SmearConfig& smear,
                                std::uint64_t seed, int threads) {
    const int n = 2 * lat.m;
    // sigma() is a quadrature-units width; errors here live in translation
    // units (lengths measured in l), so scale by 1/l
    const double sigma = smear.sigma() / kL;
    const int total = smear.mc_samples;
    threads = std::max(1, threads);
    std::vector<long> fails(threads, 0);
    auto worker = [&](int t) {
        long local = 0;
        for (int i = t; i < total; i += threads) {
            Rng rng(seed, static_cast<std::uint64_t>(i));
            Vec r(n);
            for (int k = 0; k < n; ++k) r(k) = e(k) + sigma * rng.normal();
            try {
                if (classify_error(lat, frame, r) != 'I') ++local;
            } catch (const error&) {
                ++local;  // stalled = boundary, count as error (measure zero)
            }
        }
        fails[t] = local;
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }
    long bad = 0;
    for (long f : fails) bad += f;
    ProbEstimate out;
    out.samples = total;
    out.estimate = static_cast<double>(bad) / total;
    out.stderr_ = std::sqrt(out.estimate * (1.0 - out.estimate) / total);
    return out;
}

ProbEstimate ancilla_decay_error_prob(const GkpLattice& lat, const LogicalFrame& frame,
                                      int j, const SmearConfig& smear,
                                      const std::vector<Vec>& waypoints,
                                      std::uint64_t seed, int threads) {
    if (j < 0 || j >= 2 * lat.m)
        throw validation_error("ancilla_decay_error_prob: bad stabilizer index");
    const int n = 2 * lat.m;
    // polyline 0 -> w1 -> ... -> s_j, sampled uniformly in arc length
    std::vector<Vec> pts;
    pts.push_back(Vec::Zero(n));
    for (const Vec& w : waypoints) pts.push_back(w);
    pts.push_back(lat.S.row(j).transpose());
    std::vector<double> seg(pts.size() - 1);
    double arclen = 0;
    for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
        seg[s] = (pts[s + 1] - pts[s]).norm();
        arclen += seg[s];
    }
    const double sigma = smear.sigma() / kL;  // translation units, as above
    const int total = smear.mc_samples;
    threads = std::max(1, threads);
    std::vector<long> fails(threads, 0);
    auto point_at = [&](double t) {
        double target = t * arclen;
        for (std::size_t s = 0; s < seg.size(); ++s) {
            if (target <= seg[s] || s + 1 == seg.size()) {
                double f = seg[s] > 0 ? target / seg[s] : 0.0;
                return Vec(pts[s] + f * (pts[s + 1] - pts[s]));
            }
            target -= seg[s];
        }
        return pts.back();
    };
    auto worker = [&](int t) {
        long local = 0;
        for (int i = t; i < total; i += threads) {
            Rng rng(seed, static_cast<std::uint64_t>(i));
            Vec center = point_at(rng.uniform());
            Vec r(n);
            for (int k = 0; k < n; ++k) r(k) = center(k) + sigma * rng.normal();
            try {
                if (classify_error(lat, frame, r) != 'I') ++local;
            } catch (const error&) {
                ++local;
            }
        }
        fails[t] = local;
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }
    long bad = 0;
    for (long f : fails) bad += f;
    ProbEstimate out;
    out.samples = total;
    out.estimate = static_cast<double>(bad) / total;
    out.stderr_ = std::sqrt(out.estimate * (1.0 - out.estimate) / total);
    return out;
}

std::vector<GridCell> error_map_grid(const GkpLattice& lat, const LogicalFrame& frame,
                                     int i, int j, int resolution) {
    if (resolution < 8) throw validation_error("error_map_grid: resolution must be >= 8");
    if (i < 0 || j < 0 || i >= 2 * lat.m || j >= 2 * lat.m || i == j)
        throw validation_error("error_map_grid: bad plane indices");
    Vec si = lat.S.row(i).transpose();
    Vec sj = lat.S.row(j).transpose();
    std::vector<GridCell> out;
    out.reserve(static_cast<std::size_t>(resolution) * resolution);
    for (int a = 0; a < resolution; ++a) {
        for (int b = 0; b < resolution; ++b) {
            double u = -0.25 + 1.5 * (a + 0.5) / resolution;
            double v = -0.25 + 1.5 * (b + 0.5) / resolution;
            GridCell cell{u, v, 'B'};
            try {
                cell.label = classify_error(lat, frame, u * si + v * sj);
            } catch (const error&) {
                cell.label = 'B';
            }
            out.push_back(cell);
        }
    }
    return out;
}

Vec hessian_rates(const GkpLattice& lat) {
    Mat W = omega(lat.m);
    Mat H = kL2 * W.transpose() * lat.S.transpose() * lat.S * W;
    Eigen::SelfAdjointEigenSolver<Mat> es(H);
    return es.eigenvalues();  // ascending
}

}  // namespace gridcode
