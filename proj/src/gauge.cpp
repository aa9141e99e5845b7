#include "gridcode/gauge.hpp"

#include <cmath>

namespace gridcode {

namespace {

inline std::int64_t mod2(std::int64_t v) { return ((v % 2) + 2) % 2; }

IVec mod2_vec(const IVec& v) {
    IVec out = v;
    for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = mod2(out(i));
    return out;
}

IVec lattice_coords(const GkpLattice& lat, const Vec& lambda, double tol,
                    const char* who) {
    Vec a = lat.S.transpose().partialPivLu().solve(lambda);
    auto ai = round_to_int_vec(a, tol);
    if (!ai) throw validation_error(std::string(who) + ": vector is not in the lattice");
    return *ai;
}

}  // namespace

IMat lower_part(const IMat& A) {
    IMat L = IMat::Zero(A.rows(), A.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < i; ++j) L(i, j) = A(i, j);
    return L;
}

int nu(const GkpLattice& lat, const IVec& mu, const Vec& lambda, double tol) {
    IVec a = lattice_coords(lat, lambda, tol, "nu");
    IMat Adn = lower_part(lat.A);
    std::int64_t e = a.dot(Adn * a) + a.dot(mu);
    return mod2(e) == 0 ? 1 : -1;
}

int nu_pauli(const GkpLattice& lat, const LogicalFrame& frame, const GaugeState& gs,
             char pauli, const Vec& p, double tol) {
    int idx = pauli == 'X' ? 0 : pauli == 'Y' ? 1 : pauli == 'Z' ? 2 : -1;
    if (idx < 0) throw validation_error("nu_pauli: pauli must be X, Y or Z");
    Vec p0 = frame.L0.row(idx).transpose();
    // p0^T Omega p must be an integer for p in the right class
    double t = omega_form(p0, p);
    double tr = std::nearbyint(t);
    if (std::abs(t - tr) > tol)
        throw validation_error("nu_pauli: vector is not in the requested Pauli class");
    std::int64_t e = static_cast<std::int64_t>(tr) + gs.upsilon(idx);
    int base = nu(lat, gs.mu, p - p0, tol);
    return (mod2(e) == 0 ? 1 : -1) * base;
}

int sign_of(const GkpLattice& lat, const LogicalFrame& frame, const GaugeState& gs,
            const Vec& p, double tol) {
    char cls = pauli_class(lat, frame, p, tol);
    if (cls == '\0') throw validation_error("sign_of: not a dual vector");
    if (cls == 'I') return nu(lat, gs.mu, p, tol);
    return nu_pauli(lat, frame, gs, cls, p, tol);
}

bool validate_gauge(const GkpLattice& lat, const IVec& mu) {
    if (mu.size() != 2 * lat.m) throw validation_error("validate_gauge: mu size mismatch");
    // 2 A^{-1} mu mod 2 == 0, exactly: A^{-1} = adj(A)/det(A)
    IMat adj = adjugate_int(lat.A);
    std::int64_t det = det_int(lat.A);
    IVec num = 2 * (adj * mu);  // 2 A^{-1} mu = num / det
    for (Eigen::Index i = 0; i < num.size(); ++i) {
        if (num(i) % det != 0) return false;
        if (mod2(num(i) / det) != 0) return false;
    }
    return true;
}

GaugeState update_after_translation(const GkpLattice& lat, const LogicalFrame& frame,
                                    const GaugeState& gs, const Vec& tau, double tol) {
    lattice_coords(lat, tau, tol, "update_after_translation");  // membership check
    Mat W = omega(lat.m);
    auto dmu = round_to_int_vec(lat.S * W * tau, 1e-6);
    auto dup = round_to_int_vec(frame.L0 * W * tau, 1e-6);
    if (!dmu || !dup)
        throw numerical_error("update_after_translation: non-integral gauge shift");
    GaugeState out;
    out.mu = mod2_vec(gs.mu + *dmu);
    out.upsilon = mod2_vec(gs.upsilon + *dup);
    return out;
}

Vec gauge_setting_translation(const GkpLattice& lat, const IVec& mu,
                              const IVec& mu_target) {
    IVec diff = mod2_vec(mu + mu_target);
    Mat W = omega(lat.m);
    return -W * lat.S.partialPivLu().solve(diff.cast<double>());
}

GaugeState update_after_gaussian(const GkpLattice& lat, const LogicalFrame& frame,
                                 const GaugeState& gs, const Mat& M, const IMat& M_L) {
    Mat NTf = lat.S * M.transpose() * lat.S.partialPivLu().inverse();
    auto NT = round_to_int(NTf, 1e-6);
    if (!NT) throw validation_error("update_after_gaussian: M is not a lattice symmetry");
    IMat N = NT->transpose();
    IMat Adn = lower_part(lat.A);
    IMat NAdnN = (*NT) * Adn * N;
    IVec diag1(NAdnN.rows());
    for (Eigen::Index i = 0; i < NAdnN.rows(); ++i) diag1(i) = NAdnN(i, i);
    IMat NTinv = inverse_unimodular(*NT);
    IVec mu_new = mod2_vec(NTinv * (gs.mu + diag1));

    // upsilon update: V = (M_L L0 M^T - L0) S^{-1} must be integral
    Mat MLf = M_L.cast<double>();
    Mat Vf = (MLf * frame.L0 * M.transpose() - frame.L0) *
             lat.S.partialPivLu().inverse();
    auto V = round_to_int(Vf, 1e-6);
    if (!V) throw validation_error("update_after_gaussian: frame map is not integral");
    Mat W = omega(lat.m);
    Mat G1f = frame.L0 * W * M * frame.L0.transpose() * MLf;  // 3x3
    // (M_L + I)/2 * ones
    IVec halves(3);
    for (int i = 0; i < 3; ++i) {
        std::int64_t rowsum = M_L.row(i).sum();
        halves(i) = (rowsum + 1) / 2;  // rowsum is +-1 for a signed permutation
        if (std::llabs(rowsum) != 1)
            throw validation_error("update_after_gaussian: M_L is not a signed permutation");
    }
    IMat VAV = (*V) * Adn * V->transpose();
    IVec diag2(3);
    for (int i = 0; i < 3; ++i) {
        double g = G1f(i, i), gr = std::nearbyint(g);
        if (std::abs(g - gr) > 1e-6)
            throw numerical_error("update_after_gaussian: non-integral frame phase");
        diag2(i) = static_cast<std::int64_t>(gr) + VAV(i, i);
    }
    IVec up_new = mod2_vec(M_L * gs.upsilon + halves + (*V) * mu_new + diag2);

    GaugeState out;
    out.mu = mu_new;
    out.upsilon = up_new;
    return out;
}

IVec update_after_basis_change(const GkpLattice& lat, const IMat& R, const IVec& mu) {
    IMat Adn = lower_part(lat.A);
    IMat RAR = R * Adn * R.transpose();
    IVec diag(R.rows());
    for (Eigen::Index i = 0; i < R.rows(); ++i) diag(i) = RAR(i, i);
    return mod2_vec(R * mu + diag);
}

IVec upsilon_after_frame_change(const GkpLattice& lat, const LogicalFrame& old_frame,
                                const GaugeState& gs, const Mat& L0_new) {
    IVec out(3);
    for (int i = 0; i < 3; ++i) {
        Vec p = L0_new.row(i).transpose();
        int s = sign_of(lat, old_frame, gs, p);
        out(i) = s > 0 ? 0 : 1;
    }
    return out;
}

}  // namespace gridcode
