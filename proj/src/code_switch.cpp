#include "gridcode/code_switch.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gridcode {

namespace {

bool integral_ratio(const Mat& S1, const Mat& S2, double tol) {
    if (S1.rows() != S2.rows() || S1.cols() != S2.cols() || S1.rows() != S1.cols())
        throw validation_error("lattice comparison: dimension mismatch");
    Eigen::PartialPivLU<Mat> lu(S2);
    if (std::abs(lu.determinant()) < 1e-12)
        throw validation_error("lattice comparison: singular basis");
    // rows of S1 in the row span of S2 over Z:  S1 = C * S2 with C integral
    Mat C = S2.transpose().partialPivLu().solve(S1.transpose()).transpose();
    return round_to_int(C, tol).has_value();
}

inline std::int64_t mod2(std::int64_t v) { return ((v % 2) + 2) % 2; }

}  // namespace

bool sublattice(const Mat& S1, const Mat& S2, double tol) {
    return integral_ratio(S1, S2, tol);
}

bool same_lattice(const Mat& S1, const Mat& S2, double tol) {
    return integral_ratio(S1, S2, tol) && integral_ratio(S2, S1, tol);
}

QubitStabilizerCode parse_stabilizer_code(const std::vector<std::string>& paulis) {
    if (paulis.empty()) throw validation_error("stabilizer code: no generators");
    QubitStabilizerCode code;
    code.n = static_cast<int>(paulis.front().size());
    code.generators = paulis;
    int r = static_cast<int>(paulis.size());
    code.B = IMat::Zero(r, 2 * code.n);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(paulis[i].size()) != code.n)
            throw validation_error("stabilizer code: generators differ in length");
        for (int j = 0; j < code.n; ++j) {
            char c = paulis[i][j];
            if (c == 'X' || c == 'Y') code.B(i, 2 * j) = 1;
            if (c == 'Z' || c == 'Y') code.B(i, 2 * j + 1) = 1;
            if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z')
                throw validation_error("stabilizer code: invalid Pauli letter");
        }
    }
    // commutation: binary symplectic product even for all pairs
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) {
            std::int64_t acc = 0;
            for (int q = 0; q < code.n; ++q)
                acc += code.B(i, 2 * q) * code.B(j, 2 * q + 1) +
                       code.B(i, 2 * q + 1) * code.B(j, 2 * q);
            if (mod2(acc) != 0)
                throw validation_error("stabilizer code: generators do not commute");
        }
    // independence over F2
    IMat W = code.B;
    int rank = 0;
    for (int c = 0; c < 2 * code.n && rank < r; ++c) {
        int piv = -1;
        for (int i = rank; i < r; ++i)
            if (mod2(W(i, c)) == 1) { piv = i; break; }
        if (piv < 0) continue;
        W.row(piv).swap(W.row(rank));
        for (int i = 0; i < r; ++i)
            if (i != rank && mod2(W(i, c)) == 1) W.row(i) += W.row(rank);
        ++rank;
    }
    if (rank != r) throw validation_error("stabilizer code: generators not independent");
    code.k = code.n - r;
    return code;
}

IMat hermite_normal_form(const IMat& G) {
    const int n = static_cast<int>(G.cols());
    IMat H = G;
    int row = 0;
    for (int col = 0; col < n && row < H.rows(); ++col) {
        bool have_pivot = false;
        for (;;) {
            int piv = -1;
            std::int64_t best = 0;
            for (int i = row; i < H.rows(); ++i) {
                std::int64_t v = std::llabs(H(i, col));
                if (v != 0 && (piv < 0 || v < best)) best = v, piv = i;
            }
            if (piv < 0) break;  // nothing (left) in this column
            have_pivot = true;
            H.row(piv).swap(H.row(row));
            bool done = true;
            for (int i = row + 1; i < H.rows(); ++i) {
                std::int64_t q = H(i, col) / H(row, col);
                if (q != 0) H.row(i) -= q * H.row(row);
                if (H(i, col) != 0) done = false;
            }
            if (done) break;
        }
        if (!have_pivot) continue;
        if (H(row, col) < 0) H.row(row) *= -1;
        for (int i = 0; i < row; ++i) {
            std::int64_t q = H(i, col) / H(row, col);
            if (H(i, col) % H(row, col) < 0) q -= 1;
            H.row(i) -= q * H.row(row);
        }
        ++row;
    }
    if (row < n) throw validation_error("hermite_normal_form: row space is rank deficient");
    return H.topRows(n);
}

CodeBundle concatenate(const CodeBundle& base, const QubitStabilizerCode& code) {
    if (base.lat.m != 1 || base.lat.d != 2)
        throw validation_error("concatenate: base must be a single-mode qubit code");
    const int n = code.n;
    // per-qubit dual basis ordered to match the (x, z) bit layout of B
    LogicalFrame bf = base.has_frame ? base.frame : derive_frame(base.lat);
    Mat block(2, 2);
    block.row(0) = bf.L0.row(0);  // X representative
    block.row(1) = bf.L0.row(2);  // Z representative
    Mat L = Mat::Zero(2 * n, 2 * n);
    for (int q = 0; q < n; ++q) L.block(2 * q, 2 * q, 2, 2) = block;
    // exact basis of the integer row space of (B; 2I)
    IMat stack(code.B.rows() + 2 * n, 2 * n);
    stack.topRows(code.B.rows()) = code.B;
    stack.bottomRows(2 * n) = 2 * IMat::Identity(2 * n, 2 * n);
    IMat T = hermite_normal_form(stack);
    std::int64_t det = 1;
    for (int i = 0; i < 2 * n; ++i) det *= T(i, i);
    std::int64_t expect = 1;
    for (int i = 0; i < n + code.k; ++i) expect *= 2;
    if (std::llabs(det) != expect)
        throw numerical_error("concatenate: unexpected index of the lifted lattice");

    Mat Sq = T.cast<double>() * L;
    Mat Sred = lll_reduce(Sq).S_red;
    CodeBundle out;
    out.name = "concat";
    out.lat = build(Sred);
    if (out.lat.d != (std::int64_t{1} << code.k))
        throw numerical_error("concatenate: dimension law violated");
    if (out.lat.d == 2) {
        out.has_frame = true;
        out.frame = derive_frame(out.lat);
    }
    out.gauge.mu = IVec::Zero(2 * out.lat.m);
    out.gauge.upsilon = IVec::Zero(3);
    return out;
}

// ---- splitting ----

namespace {

// Solve U x = rhs over F2 (free variables set to 0).
IVec solve_mod2(IMat U, IVec rhs) {
    const int n = static_cast<int>(U.rows());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) U(i, j) = mod2(U(i, j));
    for (int i = 0; i < n; ++i) rhs(i) = mod2(rhs(i));
    std::vector<int> pivot_col(n, -1);
    int row = 0;
    for (int col = 0; col < n && row < n; ++col) {
        int piv = -1;
        for (int i = row; i < n; ++i)
            if (U(i, col) == 1) { piv = i; break; }
        if (piv < 0) continue;
        U.row(piv).swap(U.row(row));
        std::swap(rhs(piv), rhs(row));
        for (int i = 0; i < n; ++i)
            if (i != row && U(i, col) == 1) {
                U.row(i) = (U.row(i) + U.row(row)).unaryExpr([](std::int64_t v) { return mod2(v); });
                rhs(i) = mod2(rhs(i) + rhs(row));
            }
        pivot_col[row] = col;
        ++row;
    }
    for (int i = row; i < n; ++i)
        if (rhs(i) != 0)
            throw numerical_error("split: inconsistent Pauli-sign system");
    IVec x = IVec::Zero(n);
    for (int i = 0; i < row; ++i) x(pivot_col[i]) = rhs(i);
    return x;
}

}  // namespace

SplitResult split(const GkpLattice& lat_C, const LogicalFrame& frame_C,
                  const GaugeState& gs_C, const Mat& S_A, const Mat& S_B) {
    const int nA = static_cast<int>(S_A.rows());
    const int nB = static_cast<int>(S_B.rows());
    const int n = 2 * lat_C.m;
    if (nA + nB != n) throw validation_error("split: partition sizes do not match");
    GkpLattice latA = build(S_A);
    GkpLattice latB = build(S_B);
    Mat S_AB = Mat::Zero(n, n);
    S_AB.topLeftCorner(nA, nA) = S_A;
    S_AB.bottomRightCorner(nB, nB) = S_B;
    Mat Sdual_AB = Mat::Zero(n, n);
    Sdual_AB.topLeftCorner(nA, nA) = latA.Sdual;
    Sdual_AB.bottomRightCorner(nB, nB) = latB.Sdual;

    // hierarchy: Lambda_A + Lambda_B inside Lambda_C, and dual(C) inside dual(A)+dual(B)
    if (!sublattice(S_AB, lat_C.S) || !sublattice(lat_C.Sdual, Sdual_AB))
        throw validation_error("split: lattice hierarchy violated");

    auto Rr = round_to_int(Mat(S_AB * lat_C.S.partialPivLu().inverse()), 1e-6);
    if (!Rr) throw validation_error("split: basis change is not integral");
    IVec mu_AB = update_after_basis_change(lat_C, *Rr, gs_C.mu);

    LogicalFrame frameA = derive_frame(latA);
    LogicalFrame frameB = derive_frame(latB);
    Mat L_AB = Mat::Zero(6, n);
    L_AB.block(0, 0, 3, nA) = frameA.L0;
    L_AB.block(3, nA, 3, nB) = frameB.L0;

    // the sublattice of integer Pauli-combinations landing in dual(C)
    Mat W = omega(lat_C.m);
    Mat Msyn = lat_C.S * W * L_AB.transpose();  // integral rows <=> vector in dual(C)
    Mat Wp = L_AB * W * L_AB.transpose();
    // composition phase of T(sum_j b_j p0_j) against the ordered product;
    // only integral phases give a +-1 sign constraint
    auto comp_phase = [&](const IVec& b) {
        double acc = 0;
        for (int j = 0; j < 6; ++j)
            for (int k = j + 1; k < 6; ++k) acc += b(j) * b(k) * Wp(j, k);
        return acc;
    };
    std::vector<IVec> valid;
    auto check_b = [&](const IVec& b) {
        Vec syn = Msyn * b.cast<double>();
        if (!round_to_int_vec(syn, 1e-6)) return;
        double acc = comp_phase(b);
        if (std::abs(acc - std::nearbyint(acc)) > 1e-6) return;
        valid.push_back(b);
    };
    IVec b(6);
    for (int mask = 0; mask < 729; ++mask) {
        int v = mask;
        for (int i = 0; i < 6; ++i) { b(i) = v % 3 - 1; v /= 3; }
        check_b(b);
    }
    for (int i = 0; i < 6; ++i) {
        b.setZero();
        b(i) = 2;
        check_b(b);
    }
    IMat cand(static_cast<int>(valid.size()), 6);
    for (std::size_t i = 0; i < valid.size(); ++i) cand.row(static_cast<int>(i)) = valid[i];
    IMat U = hermite_normal_form(cand);

    // quadratic composition phases: sum_{j<k} U_ij U_ik omega(p0_j, p0_k);
    // rows that pick up a half-integral phase carry no +-1 constraint and are
    // excluded from the linear system
    IVec q = IVec::Zero(6);
    for (int i = 0; i < 6; ++i) {
        double acc = comp_phase(U.row(i).transpose());
        double ar = std::nearbyint(acc);
        if (std::abs(acc - ar) > 1e-6)
            U.row(i).setZero();
        else
            q(i) = static_cast<std::int64_t>(ar);
    }
    // sign of each definite combination, read off the C-state
    Mat P = U.cast<double>() * L_AB;  // rows in dual(C)
    IVec rhs = IVec::Zero(6);
    for (int i = 0; i < 6; ++i) {
        if (U.row(i).isZero()) continue;
        int s = sign_of(lat_C, frame_C, gs_C, P.row(i).transpose());
        rhs(i) = s > 0 ? 0 : 1;
    }
    IVec upsilon_AB = solve_mod2(U, rhs + q);

    SplitResult out;
    out.a.name = "split_a";
    out.a.lat = latA;
    out.a.has_frame = true;
    out.a.frame = frameA;
    out.a.gauge.mu = mu_AB.head(nA);
    out.a.gauge.upsilon = upsilon_AB.head(3);
    out.b.name = "split_b";
    out.b.lat = latB;
    out.b.has_frame = true;
    out.b.frame = frameB;
    out.b.gauge.mu = mu_AB.tail(nB);
    out.b.gauge.upsilon = upsilon_AB.tail(3);
    out.needs_fix = false;
    out.fix_translation = Vec::Zero(n);

    if (!validate_gauge(latA, out.a.gauge.mu) || !validate_gauge(latB, out.b.gauge.mu)) {
        GkpLattice latAB = build(S_AB);
        out.needs_fix = true;
        out.fix_translation =
            gauge_setting_translation(latAB, mu_AB, IVec::Zero(n));
        Vec tauA = out.fix_translation.head(nA);
        Vec tauB = out.fix_translation.tail(nB);
        out.a.gauge = update_after_translation(latA, frameA, out.a.gauge, tauA);
        out.b.gauge = update_after_translation(latB, frameB, out.b.gauge, tauB);
    }
    return out;
}

CodeBundle merge(const CodeBundle& a, const CodeBundle& b, const MergeSpec& spec,
                 const Mat& S_C, const Mat& L0_C) {
    const int nA = 2 * a.lat.m, nB = 2 * b.lat.m;
    const int n = nA + nB;
    GkpLattice latC = build(S_C);
    if (spec.lambda_m.size() != n) throw validation_error("merge: lambda_m size mismatch");
    // lambda_m must be in Lambda_C
    {
        Vec coords = S_C.transpose().partialPivLu().solve(spec.lambda_m);
        if (!round_to_int_vec(coords, 1e-6))
            throw validation_error("merge: lambda_m is not in the merged lattice");
    }
    Mat S_AB = Mat::Zero(n, n);
    S_AB.topLeftCorner(nA, nA) = a.lat.S;
    S_AB.bottomRightCorner(nB, nB) = b.lat.S;
    {
        Vec coords = S_AB.transpose().partialPivLu().solve(spec.lambda_m);
        if (round_to_int_vec(coords, 1e-6))
            throw validation_error("merge: lambda_m already lies in the separable lattice");
    }

    // replace one row of the separable basis with lambda_m so S' generates C
    for (int drop = n - 1; drop >= 0; --drop) {
        Mat Sp = S_AB;
        Sp.row(drop) = spec.lambda_m.transpose();
        if (std::abs(Sp.determinant()) < 1e-9) continue;
        if (!same_lattice(Sp, S_C)) continue;

        IVec mu_p(n);
        for (int i = 0; i < n; ++i)
            mu_p(i) = i < nA ? a.gauge.mu(i) : b.gauge.mu(i - nA);
        mu_p(drop) = spec.outcome > 0 ? 0 : 1;

        GkpLattice latP = build(Sp);
        auto R = round_to_int(Mat(S_C * Sp.partialPivLu().inverse()), 1e-6);
        if (!R || std::llabs(det_int(*R)) != 1)
            throw numerical_error("merge: basis change to the target is not unimodular");
        IVec mu_C = update_after_basis_change(latP, *R, mu_p);

        CodeBundle out;
        out.name = "merged";
        out.lat = latC;
        out.has_frame = true;
        out.frame.L0 = L0_C;
        out.gauge.mu = mu_C;
        out.gauge.upsilon = IVec::Zero(3);
        for (int i = 0; i < 3; ++i) {
            Vec pA = L0_C.row(i).head(nA).transpose();
            Vec pB = L0_C.row(i).tail(nB).transpose();
            int s = sign_of(a.lat, a.frame, a.gauge, pA) *
                    sign_of(b.lat, b.frame, b.gauge, pB);
            out.gauge.upsilon(i) = s > 0 ? 0 : 1;
        }
        return out;
    }
    throw validation_error(
        "merge: no generator row can be replaced by lambda_m (non-orthogonality fails)");
}

}  // namespace gridcode
