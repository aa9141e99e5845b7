#include "gridcode/fock.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <mutex>
#include <thread>

namespace gridcode {

namespace {

long anc_factor(const FockState& st) { return st.has_ancilla ? 2 : 1; }

long mode_stride(const FockState& st, int mode) {
    long s = anc_factor(st);
    for (std::size_t k = mode + 1; k < st.dims.size(); ++k) s *= st.dims[k];
    return s;
}

int digit_of(const FockState& st, long idx, int mode) {
    return static_cast<int>((idx / mode_stride(st, mode)) % st.dims[mode]);
}

CMat herm_exp_i(const CMat& h) {
    // exp(i h) for hermitian h
    Eigen::SelfAdjointEigenSolver<CMat> es(h);
    CVec phases = (cplx(0, 1) * es.eigenvalues().cast<cplx>()).array().exp();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

CMat q_matrix(int n) {
    CMat a = annihilation_matrix(n);
    return (a + a.adjoint()) / std::sqrt(2.0);
}

CMat p_matrix(int n) {
    CMat a = annihilation_matrix(n);
    return cplx(0, 1) * (a.adjoint() - a) / std::sqrt(2.0);
}

// two-mode dense operator; u indexed by na * Nb + nb
void apply_two_mode_op(FockState& st, int ma, int mb, const CMat& u) {
    const int na = st.dims[ma], nb = st.dims[mb];
    const long sa = mode_stride(st, ma), sb = mode_stride(st, mb);
    const long total = st.total_dim();
    const int dim = na * nb;
    std::vector<cplx> buf(dim);
    for (long idx = 0; idx < total; ++idx) {
        if (digit_of(st, idx, ma) != 0 || digit_of(st, idx, mb) != 0) continue;
        for (int i = 0; i < na; ++i)
            for (int j = 0; j < nb; ++j) buf[i * nb + j] = st.amp[idx + i * sa + j * sb];
        for (int i = 0; i < na; ++i)
            for (int j = 0; j < nb; ++j) {
                cplx acc = 0;
                for (int k = 0; k < dim; ++k) acc += u(i * nb + j, k) * buf[k];
                st.amp[idx + i * sa + j * sb] = acc;
            }
    }
}

Vec frame_row(const CodeBundle& code, char pauli) {
    if (!code.has_frame) throw validation_error("code has no logical frame");
    for (int r = 0; r < 3; ++r) {
        Vec v = code.frame.L0.row(r);
        if (pauli_class(code.lat, code.frame, v) == pauli) return v;
    }
    throw validation_error("no frame row of the requested class");
}

}  // namespace

long FockState::total_dim() const {
    long t = anc_factor(*this);
    for (int d : dims) t *= d;
    return t;
}

FockState FockState::vacuum(std::vector<int> dims, bool ancilla) {
    FockState st;
    st.dims = std::move(dims);
    st.has_ancilla = ancilla;
    st.amp = CVec::Zero(st.total_dim());
    st.amp[0] = 1.0;
    return st;
}

double FockState::norm() const { return amp.norm(); }

void FockState::normalize() {
    double n = amp.norm();
    if (n < 1e-300) throw numerical_error("state has vanished (zero norm)");
    amp /= n;
}

double FockState::leakage(double frac) const {
    double mass = 0, total = 0;
    for (long idx = 0; idx < total_dim(); ++idx) {
        double w = std::norm(amp[idx]);
        total += w;
        for (std::size_t m = 0; m < dims.size(); ++m)
            if (digit_of(*this, idx, static_cast<int>(m)) >=
                static_cast<int>(std::ceil((1.0 - frac) * dims[m]))) {
                mass += w;
                break;
            }
    }
    return total > 0 ? mass / total : 0.0;
}

CMat annihilation_matrix(int n) {
    CMat a = CMat::Zero(n, n);
    for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    return a;
}

CMat displacement_matrix(int n, cplx alpha) {
    static std::map<std::tuple<int, double, double>, CMat> cache;
    static std::mutex mtx;
    auto key = std::make_tuple(n, alpha.real(), alpha.imag());
    {
        std::lock_guard<std::mutex> lk(mtx);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    CMat a = annihilation_matrix(n);
    // D = exp(alpha a^dag - conj(alpha) a) = exp(i h), h hermitian
    CMat h = cplx(0, -1) * (alpha * a.adjoint() - std::conj(alpha) * a);
    CMat d = herm_exp_i(h);
    std::lock_guard<std::mutex> lk(mtx);
    cache.emplace(key, d);
    return d;
}

void apply_mode_op(FockState& st, int mode, const CMat& u, int anc_branch) {
    const int n = st.dims[mode];
    const long stride = mode_stride(st, mode);
    long outer = 1;
    for (int k = 0; k < mode; ++k) outer *= st.dims[k];
    const long block = stride * n;
    std::vector<cplx> buf(n);
    for (long o = 0; o < outer; ++o)
        for (long s = 0; s < stride; ++s) {
            if (anc_branch >= 0 && st.has_ancilla && (s % 2) != anc_branch) continue;
            const long base = o * block + s;
            for (int i = 0; i < n; ++i) buf[i] = st.amp[base + i * stride];
            for (int i = 0; i < n; ++i) {
                cplx acc = 0;
                for (int j = 0; j < n; ++j) acc += u(i, j) * buf[j];
                st.amp[base + i * stride] = acc;
            }
        }
}

void apply_mode_diag(FockState& st, int mode, const CVec& d, int anc_branch) {
    const long total = st.total_dim();
    for (long idx = 0; idx < total; ++idx) {
        if (anc_branch >= 0 && st.has_ancilla && (idx % 2) != anc_branch) continue;
        st.amp[idx] *= d[digit_of(st, idx, mode)];
    }
}

void apply_two_mode_diag(FockState& st, int ma, int mb, const CMat& d) {
    const long total = st.total_dim();
    for (long idx = 0; idx < total; ++idx)
        st.amp[idx] *= d(digit_of(st, idx, ma), digit_of(st, idx, mb));
}

void apply_ancilla_op(FockState& st, const Eigen::Matrix2cd& u) {
    if (!st.has_ancilla) throw validation_error("state has no ancilla");
    for (long idx = 0; idx < st.total_dim(); idx += 2) {
        cplx g = st.amp[idx], e = st.amp[idx + 1];
        st.amp[idx] = u(0, 0) * g + u(0, 1) * e;
        st.amp[idx + 1] = u(1, 0) * g + u(1, 1) * e;
    }
}

void apply_translation(FockState& st, const Vec& v) {
    for (std::size_t j = 0; j < st.dims.size(); ++j) {
        cplx alpha = kL * cplx(v[2 * j], v[2 * j + 1]) / std::sqrt(2.0);
        if (std::abs(alpha) < 1e-15) continue;
        apply_mode_op(st, static_cast<int>(j), displacement_matrix(st.dims[j], alpha));
    }
}

void apply_controlled_translation(FockState& st, const Vec& v) {
    if (!st.has_ancilla) throw validation_error("controlled translation needs an ancilla");
    for (std::size_t j = 0; j < st.dims.size(); ++j) {
        cplx alpha = kL * cplx(v[2 * j], v[2 * j + 1]) / (2.0 * std::sqrt(2.0));
        if (std::abs(alpha) < 1e-15) continue;
        apply_mode_op(st, static_cast<int>(j), displacement_matrix(st.dims[j], alpha), 0);
        apply_mode_op(st, static_cast<int>(j), displacement_matrix(st.dims[j], -alpha), 1);
    }
}

void apply_ancilla_ry(FockState& st, double theta) {
    Eigen::Matrix2cd u;
    double c = std::cos(theta / 2), s = std::sin(theta / 2);
    u << c, -s, s, c;
    apply_ancilla_op(st, u);
}

void apply_ancilla_x(FockState& st) {
    Eigen::Matrix2cd u;
    u << 0, 1, 1, 0;
    apply_ancilla_op(st, u);
}

void apply_gaussian(FockState& st, const std::vector<int>& modes, const Mat& m) {
    const int k = static_cast<int>(modes.size());
    if (m.rows() != 2 * k || !is_symplectic(m, 1e-9))
        throw validation_error("apply_gaussian needs a symplectic 2k x 2k matrix");
    // U = exp{-(i/2) x^T h x} implements U T(v) U^dag = T(m v), h = -Omega log m
    Mat lg = m.log();
    Mat h = -omega(k) * lg;
    h = 0.5 * (h + h.transpose()).eval();

    long dim = 1;
    for (int t = 0; t < k; ++t) dim *= st.dims[modes[t]];
    // quadrature operators on the product space of the involved modes
    std::vector<CMat> x(2 * k);
    for (int t = 0; t < k; ++t) {
        CMat q = q_matrix(st.dims[modes[t]]);
        CMat p = p_matrix(st.dims[modes[t]]);
        CMat left = CMat::Identity(1, 1);
        for (int u2 = 0; u2 < t; ++u2) {
            long du = st.dims[modes[u2]];
            left = Eigen::kroneckerProduct(left, CMat::Identity(du, du)).eval();
        }
        CMat right = CMat::Identity(1, 1);
        for (int u2 = t + 1; u2 < k; ++u2) {
            long du = st.dims[modes[u2]];
            right = Eigen::kroneckerProduct(right, CMat::Identity(du, du)).eval();
        }
        x[2 * t] = Eigen::kroneckerProduct(Eigen::kroneckerProduct(left, q).eval(), right);
        x[2 * t + 1] = Eigen::kroneckerProduct(Eigen::kroneckerProduct(left, p).eval(), right);
    }
    CMat hop = CMat::Zero(dim, dim);
    for (int a = 0; a < 2 * k; ++a)
        for (int b = 0; b < 2 * k; ++b)
            if (std::abs(h(a, b)) > 1e-14) hop += (0.5 * h(a, b)) * (x[a] * x[b]);
    CMat u = herm_exp_i((-hop).eval());
    if (k == 1)
        apply_mode_op(st, modes[0], u);
    else if (k == 2)
        apply_two_mode_op(st, modes[0], modes[1], u);
    else
        throw validation_error("apply_gaussian supports at most two modes");
}

void apply_kerr(FockState& st, int mode, double theta) {
    CVec d(st.dims[mode]);
    for (int n = 0; n < st.dims[mode]; ++n)
        d[n] = std::exp(cplx(0, theta * static_cast<double>(n) * n));
    apply_mode_diag(st, mode, d);
}

void apply_cross_kerr(FockState& st, int ma, int mb, double theta) {
    CMat d(st.dims[ma], st.dims[mb]);
    for (int a = 0; a < st.dims[ma]; ++a)
        for (int b = 0; b < st.dims[mb]; ++b)
            d(a, b) = std::exp(cplx(0, theta * static_cast<double>(a) * b));
    apply_two_mode_diag(st, ma, mb, d);
}

void apply_rotation(FockState& st, int mode, double theta) {
    CVec d(st.dims[mode]);
    for (int n = 0; n < st.dims[mode]; ++n) d[n] = std::exp(cplx(0, theta * n));
    apply_mode_diag(st, mode, d);
}

void apply_envelope(FockState& st, double beta, bool renorm) {
    for (std::size_t m = 0; m < st.dims.size(); ++m) {
        CVec d(st.dims[m]);
        for (int n = 0; n < st.dims[m]; ++n) d[n] = std::exp(-beta * n);
        apply_mode_diag(st, static_cast<int>(m), d);
    }
    if (renorm) st.normalize();
}

int apply_amplitude_damping(FockState& st, int mode, double gamma, Rng& rng) {
    const int n = st.dims[mode];
    const long total = st.total_dim();
    const long stride = mode_stride(st, mode);
    if (gamma <= 0) return 0;
    // |<n-k| K_k |n>|^2 = C(n,k) gamma^k (1-gamma)^{n-k}
    auto logw = [&](int lvl, int k) {
        double r = std::lgamma(lvl + 1.0) - std::lgamma(k + 1.0) - std::lgamma(lvl - k + 1.0);
        if (k > 0) r += k * std::log(gamma);
        if (lvl > k) r += (lvl - k) * std::log1p(-gamma);
        return r;
    };
    std::vector<double> prob(n, 0.0);
    for (long idx = 0; idx < total; ++idx) {
        double w = std::norm(st.amp[idx]);
        if (w == 0) continue;
        int lvl = digit_of(st, idx, mode);
        for (int k = 0; k <= lvl; ++k) prob[k] += w * std::exp(logw(lvl, k));
    }
    double u = rng.uniform() * st.amp.squaredNorm();
    int pick = 0;
    double cum = 0;
    for (int k = 0; k < n; ++k) {
        cum += prob[k];
        if (u < cum) {
            pick = k;
            break;
        }
    }
    CVec out = CVec::Zero(total);
    for (long idx = 0; idx < total; ++idx) {
        if (st.amp[idx] == cplx(0)) continue;
        int lvl = digit_of(st, idx, mode);
        if (lvl < pick) continue;
        out[idx - pick * stride] += st.amp[idx] * std::exp(0.5 * logw(lvl, pick));
    }
    st.amp = out;
    st.normalize();
    return pick;
}

int measure_reset_ancilla(FockState& st, Rng& rng) {
    if (!st.has_ancilla) throw validation_error("state has no ancilla");
    double p1 = 0;
    for (long idx = 1; idx < st.total_dim(); idx += 2) p1 += std::norm(st.amp[idx]);
    p1 /= st.amp.squaredNorm();
    int outcome = rng.uniform() < p1 ? 1 : 0;
    for (long idx = 0; idx < st.total_dim(); idx += 2) {
        if (outcome == 1) {
            st.amp[idx] = st.amp[idx + 1];
            st.amp[idx + 1] = 0;
        } else {
            st.amp[idx + 1] = 0;
        }
    }
    st.normalize();
    return outcome;
}

FockState build_codeword(const CodeBundle& code, char pauli, double beta,
                         const std::vector<int>& dims, bool ancilla, double radius_factor,
                         const Vec& extra_seed) {
    const GkpLattice& lat = code.lat;
    if (static_cast<int>(dims.size()) != lat.m)
        throw validation_error("dims must have one cutoff per mode");
    double maxrow = 0;
    for (int r = 0; r < lat.S.rows(); ++r) maxrow = std::max(maxrow, lat.S.row(r).norm());
    const double radius = radius_factor * maxrow;

    // seed displacement: the vacuum only overlaps the trivial-gauge sector, so
    // start from T(delta)|0> with delta carrying the gauge (plus any caller
    // offset, e.g. a Pauli to flip between degenerate projector images)
    IVec zero = IVec::Zero(2 * lat.m);
    Vec delta = 0.5 * gauge_setting_translation(lat, zero, code.gauge.mu);
    if (extra_seed.size() == 2 * lat.m) delta += extra_seed;

    FockState st = FockState::vacuum(dims, ancilla);
    st.amp[0] = 0.0;

    std::vector<long> strides(dims.size());
    for (std::size_t m = 0; m < dims.size(); ++m) strides[m] = mode_stride(st, static_cast<int>(m));

    // one term sign(u) T(u) T(delta)|0> = sign(u) e^{-i pi w(u,delta)} T(u+delta)|0>
    auto add_point = [&](const Vec& u) {
        double s = code.has_frame
                       ? static_cast<double>(sign_of(lat, code.frame, code.gauge, u))
                       : static_cast<double>(nu(lat, code.gauge.mu, u));
        cplx phase = std::exp(cplx(0, -kPi * omega_form(u, delta)));
        Vec v = u + delta;
        // E_beta D(alpha)|0> = w |alpha e^{-beta}>, w = exp{|alpha|^2 (e^{-2 beta} - 1)/2}
        double a2 = 0.5 * kL2 * v.squaredNorm();
        double w = std::exp(0.5 * a2 * (std::exp(-2 * beta) - 1.0));
        std::vector<CVec> coh(dims.size());
        for (std::size_t j = 0; j < dims.size(); ++j) {
            cplx alpha = kL * cplx(v[2 * j], v[2 * j + 1]) / std::sqrt(2.0) * std::exp(-beta);
            CVec c(dims[j]);
            cplx cur = std::exp(-0.5 * std::norm(alpha));
            for (int n = 0; n < dims[j]; ++n) {
                c[n] = cur;
                cur *= alpha / std::sqrt(n + 1.0);
            }
            coh[j] = c;
        }
        std::function<void(std::size_t, long, cplx)> rec = [&](std::size_t mode, long base,
                                                               cplx coef) {
            if (mode == dims.size()) {
                st.amp[base] += coef;
                return;
            }
            for (int n = 0; n < dims[mode]; ++n)
                rec(mode + 1, base + n * strides[mode], coef * coh[mode][n]);
        };
        rec(0, 0, s * w * phase);
    };

    for (const Vec& lam : enumerate_points(lat, radius)) add_point(lam);
    if (pauli != 'I') {
        Vec p0 = frame_row(code, pauli);
        for (const Vec& lam : enumerate_points(lat, radius + p0.norm())) {
            Vec u = lam + p0;
            if (u.norm() <= radius) add_point(u);
        }
    }
    if (st.amp.norm() < 1e-8) throw numerical_error("codeword construction collapsed to zero");
    st.normalize();
    return st;
}

cplx expectation_t(const FockState& st, const Vec& v, double beta) {
    FockState work = st;
    // guard: drop the top decile of levels before amplifying the envelope back
    for (std::size_t m = 0; m < work.dims.size(); ++m) {
        int cut = static_cast<int>(std::ceil(0.9 * work.dims[m]));
        CVec d = CVec::Ones(work.dims[m]);
        for (int n = cut; n < work.dims[m]; ++n) d[n] = 0;
        apply_mode_diag(work, static_cast<int>(m), d);
    }
    for (std::size_t m = 0; m < work.dims.size(); ++m) {
        CVec d(work.dims[m]);
        for (int n = 0; n < work.dims[m]; ++n) d[n] = std::exp(beta * n);
        apply_mode_diag(work, static_cast<int>(m), d);
    }
    apply_translation(work, v);
    apply_envelope(work, beta, false);
    return st.amp.dot(work.amp);
}

namespace {

void apply_ancilla_rx(FockState& st, double theta) {
    Eigen::Matrix2cd u;
    double c = std::cos(theta / 2), s = std::sin(theta / 2);
    u << c, cplx(0, -s), cplx(0, -s), c;
    apply_ancilla_op(st, u);
}

}  // namespace

int sbs_round(FockState& st, const GkpLattice& lat, int j, int mu_j, const SbsOptions& opt,
              Rng& rng) {
    // trotterized nullifier dissipation: sigma_y-controlled small translations
    // -eps*Omega*s sandwiching a sigma_x-controlled big step cosh(beta)*s,
    // realized as sigma_z controlled translations between ancilla rotations
    const double beta = std::asinh(2 * opt.epsilon);
    Vec s = lat.S.row(j);
    Vec small = -opt.epsilon * (omega(lat.m) * s);
    double nu_sign = (mu_j % 2 == 0) ? 1.0 : -1.0;
    Vec segs[3] = {small, std::cosh(beta) * s, nu_sign * small};

    int decay_seg = -1;
    double eta = 0;
    if (opt.inject_decay) {
        // segment durations are proportional to the translation sizes
        double tot = 1.0 + 2.0 * opt.epsilon;
        double u = rng.uniform() * tot;
        decay_seg = (u < opt.epsilon) ? 0 : (u < opt.epsilon + 1.0 ? 1 : 2);
        eta = rng.uniform();
    }
    auto ct = [&](int seg) {
        if (seg == decay_seg) {
            apply_controlled_translation(st, eta * segs[seg]);
            // decay jump sigma_- in the energy basis, renormalized (the
            // trajectory is conditioned on the decay having happened)
            CVec before = st.amp;
            Eigen::Matrix2cd lower;
            lower << 0, 1, 0, 0;
            apply_ancilla_op(st, lower);
            double n = st.norm();
            if (n > 1e-12) {
                st.amp /= n;
            } else {
                st.amp = before;  // no excited amplitude: bare flip instead
                apply_ancilla_x(st);
            }
            apply_controlled_translation(st, (1.0 - eta) * segs[seg]);
        } else {
            apply_controlled_translation(st, segs[seg]);
        }
    };
    apply_ancilla_rx(st, kPi / 2);
    ct(0);
    apply_ancilla_rx(st, -kPi / 2);
    apply_ancilla_ry(st, -kPi / 2);
    ct(1);
    apply_ancilla_ry(st, kPi / 2);
    apply_ancilla_rx(st, kPi / 2);
    ct(2);
    apply_ancilla_rx(st, -kPi / 2);
    return measure_reset_ancilla(st, rng);
}

SbsDriver::SbsDriver(CodeBundle c, std::vector<int> d, double eps)
    : code(std::move(c)), dims(std::move(d)), epsilon(eps), beta(std::asinh(2 * eps)) {}

void SbsDriver::prepare(char pauli) { state = build_codeword(code, pauli, beta, dims, true); }

int SbsDriver::round(int j, const SbsOptions& opt, Rng& rng) {
    int out = sbs_round(state, code.lat, j, code.gauge.mu[j], opt, rng);
    Vec tau = code.lat.S.row(j);
    if (code.has_frame) {
        code.gauge = update_after_translation(code.lat, code.frame, code.gauge, tau);
    } else {
        IVec shift = code.lat.A.col(j);
        for (int i = 0; i < code.gauge.mu.size(); ++i)
            code.gauge.mu[i] = ((code.gauge.mu[i] + shift[i]) % 2 + 2) % 2;
    }
    return out;
}

double SbsDriver::stabilizer_expectation(int j) const {
    double raw = expectation_t(state, code.lat.S.row(j), beta).real();
    return (code.gauge.mu[j] % 2 == 0 ? 1.0 : -1.0) * raw;
}

double SbsDriver::pauli_expectation(char pauli) const {
    Vec v = frame_row(code, pauli);
    double raw = expectation_t(state, v, beta).real();
    return static_cast<double>(sign_of(code.lat, code.frame, code.gauge, v)) * raw;
}

namespace {

// run fn(trial, rng) over [0, trials) across threads, accumulating samples
std::pair<double, double> mc_mean(int trials, std::uint64_t seed, int threads,
                                  const std::function<double(int, Rng&)>& fn) {
    threads = std::max(1, threads);
    std::vector<double> samples(trials);
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            int t = next.fetch_add(1);
            if (t >= trials) break;
            Rng rng(seed, static_cast<std::uint64_t>(t));
            samples[t] = fn(t, rng);
        }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < threads - 1; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    double mean = 0;
    for (double s : samples) mean += s;
    mean /= trials;
    double var = 0;
    for (double s : samples) var += (s - mean) * (s - mean);
    var /= std::max(1, trials - 1);
    return {mean, std::sqrt(var / trials)};
}

}  // namespace

FlipEstimate quantum_error_prob(const CodeBundle& code, char pauli, const Vec& e,
                                double epsilon, int cycles, int trials,
                                std::uint64_t seed, const std::vector<int>& dims,
                                int threads) {
    int gens = 2 * code.lat.m;
    auto one = [&](int, Rng& rng) {
        SbsDriver drv(code, dims, epsilon);
        drv.prepare(pauli);
        apply_translation(drv.state, e);
        SbsOptions opt;
        opt.epsilon = epsilon;
        for (int c = 0; c < cycles; ++c)
            for (int j = 0; j < gens; ++j) drv.round(j, opt, rng);
        if (drv.state.leakage() > 1e-2)
            throw numerical_error("quantum_error_prob: truncation leakage > 1e-2");
        return std::clamp((1.0 - drv.pauli_expectation(pauli)) / 2.0, 0.0, 1.0);
    };
    auto [p, se] = mc_mean(trials, seed, threads, one);
    return {p, se};
}

FlipEstimate decay_error_prob(const CodeBundle& code, double epsilon,
                              int settle_cycles, int recover_cycles,
                              int trials_per_pauli, std::uint64_t seed,
                              const std::vector<int>& dims, int threads) {
    // a decay-induced logical Pauli E flips exactly the two preparations that
    // anticommute with it, so P(any logical) = sum of the three flip probs / 2.
    // The stabilization itself has a small intrinsic flip rate at these
    // truncations, so each run is paired with a no-decay run of identical
    // length and the baseline is subtracted.
    int gens = 2 * code.lat.m;
    const char paulis[3] = {'X', 'Y', 'Z'};
    double total = 0, var = 0;
    for (int pi = 0; pi < 3; ++pi) {
        auto run = [&](bool with_decay, Rng& rng) {
            SbsDriver drv(code, dims, epsilon);
            drv.prepare(paulis[pi]);
            SbsOptions clean;
            clean.epsilon = epsilon;
            SbsOptions decayed = clean;
            decayed.inject_decay = with_decay;
            for (int c = 0; c < settle_cycles; ++c)
                for (int j = 0; j < gens; ++j) drv.round(j, clean, rng);
            int jd = static_cast<int>(rng.next() % gens);
            drv.round(jd, decayed, rng);
            for (int c = 0; c < recover_cycles; ++c)
                for (int j = 0; j < gens; ++j) drv.round(j, clean, rng);
            // trajectory-level sign readout: immune to the small magnitude
            // loss of the envelope-corrected expectation
            return drv.pauli_expectation(paulis[pi]) < 0 ? 1.0 : 0.0;
        };
        auto one = [&](int, Rng& rng) {
            Rng base_rng(rng.next(), 1);
            return run(true, rng) - run(false, base_rng);
        };
        auto [p, se] = mc_mean(trials_per_pauli, seed + 1000003ULL * pi, threads, one);
        total += p / 2.0;
        var += se * se / 4.0;
    }
    return {total, std::sqrt(var)};
}

}  // namespace gridcode
