#include "gridcode/symplectic.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <vector>

namespace gridcode {

Mat omega(int num_modes) { return omega_int(num_modes).cast<double>(); }

IMat omega_int(int num_modes) {
    IMat W = IMat::Zero(2 * num_modes, 2 * num_modes);
    for (int m = 0; m < num_modes; ++m) {
        W(2 * m, 2 * m + 1) = 1;
        W(2 * m + 1, 2 * m) = -1;
    }
    return W;
}

double omega_form(const Vec& u, const Vec& v) {
    if (u.size() != v.size() || u.size() % 2 != 0)
        throw validation_error("omega_form: vectors must have equal, even length");
    double acc = 0.0;
    for (Eigen::Index k = 0; k + 1 < u.size(); k += 2)
        acc += u(k) * v(k + 1) - u(k + 1) * v(k);
    return acc;
}

Mat rotation_gate(int num_modes, int mode, double theta) {
    if (mode < 0 || mode >= num_modes) throw validation_error("rotation_gate: bad mode");
    return givens_gate(num_modes, 2 * mode, 2 * mode + 1, theta);
}

Mat squeeze_gate(int num_modes, int mode, double lambda) {
    if (mode < 0 || mode >= num_modes) throw validation_error("squeeze_gate: bad mode");
    Mat M = Mat::Identity(2 * num_modes, 2 * num_modes);
    M(2 * mode, 2 * mode) = std::exp(lambda);
    M(2 * mode + 1, 2 * mode + 1) = std::exp(-lambda);
    return M;
}

Mat shear_gate(int num_modes, int mode, double s) {
    if (mode < 0 || mode >= num_modes) throw validation_error("shear_gate: bad mode");
    Mat M = Mat::Identity(2 * num_modes, 2 * num_modes);
    M(2 * mode + 1, 2 * mode) = s;  // p += s*q
    return M;
}

Mat beamsplitter_gate(int num_modes, int j, int k) {
    if (j < 0 || k < 0 || j >= num_modes || k >= num_modes || j == k)
        throw validation_error("beamsplitter_gate: bad mode pair");
    const double r = 1.0 / std::sqrt(2.0);
    Mat M = Mat::Identity(2 * num_modes, 2 * num_modes);
    for (int c = 0; c < 2; ++c) {
        int a = 2 * j + c, b = 2 * k + c;
        M(a, a) = r;
        M(a, b) = -r;
        M(b, a) = r;
        M(b, b) = r;
    }
    return M;
}

Mat givens_gate(int num_modes, int i, int j, double theta) {
    if (i < 0 || j < 0 || i >= 2 * num_modes || j >= 2 * num_modes || i == j)
        throw validation_error("givens_gate: bad quadrature indices");
    Mat M = Mat::Identity(2 * num_modes, 2 * num_modes);
    double c = std::cos(theta), s = std::sin(theta);
    M(i, i) = c;
    M(i, j) = -s;
    M(j, i) = s;
    M(j, j) = c;
    return M;
}

Mat sum_gate(int num_modes, int ctrl, int targ, double g) {
    if (ctrl < 0 || targ < 0 || ctrl >= num_modes || targ >= num_modes || ctrl == targ)
        throw validation_error("sum_gate: bad mode pair");
    // q_t += g*q_c, p_c -= g*p_t
    Mat M = Mat::Identity(2 * num_modes, 2 * num_modes);
    M(2 * targ, 2 * ctrl) = g;
    M(2 * ctrl + 1, 2 * targ + 1) = -g;
    return M;
}

bool is_symplectic(const Mat& M, double tol) {
    if (M.rows() != M.cols() || M.rows() % 2 != 0) return false;
    Mat W = omega(static_cast<int>(M.rows()) / 2);
    return (M.transpose() * W * M - W).cwiseAbs().maxCoeff() < tol;
}

bool is_orthogonal(const Mat& M, double tol) {
    if (M.rows() != M.cols()) return false;
    return (M.transpose() * M - Mat::Identity(M.rows(), M.cols())).cwiseAbs().maxCoeff() < tol;
}

// ---- exact integer helpers ----

namespace {

using i128 = __int128;

std::int64_t checked_cast(i128 v) {
    if (v > std::numeric_limits<std::int64_t>::max() ||
        v < std::numeric_limits<std::int64_t>::min())
        throw numerical_error("integer overflow in exact arithmetic");
    return static_cast<std::int64_t>(v);
}

i128 bareiss_det(std::vector<std::vector<i128>> a) {
    const int n = static_cast<int>(a.size());
    i128 sign = 1, prev = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            int piv = -1;
            for (int r = k + 1; r < n; ++r)
                if (a[r][k] != 0) { piv = r; break; }
            if (piv < 0) return 0;
            std::swap(a[k], a[piv]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

std::vector<std::vector<i128>> to_work(const IMat& M) {
    std::vector<std::vector<i128>> a(M.rows(), std::vector<i128>(M.cols()));
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        for (Eigen::Index j = 0; j < M.cols(); ++j) a[i][j] = M(i, j);
    return a;
}

}  // namespace

std::int64_t det_int(const IMat& M) {
    if (M.rows() != M.cols()) throw validation_error("det of non-square matrix");
    if (M.rows() == 0) return 1;
    return checked_cast(bareiss_det(to_work(M)));
}

IMat adjugate_int(const IMat& M) {
    const int n = static_cast<int>(M.rows());
    if (M.rows() != M.cols()) throw validation_error("adjugate of non-square matrix");
    IMat adj(n, n);
    if (n == 1) {
        adj(0, 0) = 1;
        return adj;
    }
    IMat minor(n - 1, n - 1);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            int mr = 0;
            for (int r = 0; r < n; ++r) {
                if (r == i) continue;
                int mc = 0;
                for (int c = 0; c < n; ++c) {
                    if (c == j) continue;
                    minor(mr, mc++) = M(r, c);
                }
                ++mr;
            }
            std::int64_t cof = det_int(minor);
            adj(j, i) = ((i + j) % 2 == 0) ? cof : -cof;
        }
    }
    return adj;
}

IMat inverse_unimodular(const IMat& M) {
    std::int64_t d = det_int(M);
    if (d != 1 && d != -1)
        throw validation_error("matrix is not unimodular (|det| != 1)");
    return (adjugate_int(M) * d).eval();
}

bool is_antisymmetric(const IMat& M) {
    return M.rows() == M.cols() && (M + M.transpose()).cwiseAbs().maxCoeff() == 0;
}

std::optional<IMat> round_to_int(const Mat& M, double tol) {
    IMat R(M.rows(), M.cols());
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            double r = std::nearbyint(M(i, j));
            if (std::abs(M(i, j) - r) > tol) return std::nullopt;
            R(i, j) = static_cast<std::int64_t>(r);
        }
    return R;
}

std::optional<IVec> round_to_int_vec(const Vec& v, double tol) {
    auto m = round_to_int(Mat(v), tol);
    if (!m) return std::nullopt;
    return IVec(m->col(0));
}

// ---- symplectic normal form ----

namespace {

// nearest-integer quotient: |a - q*b| <= |b|/2
std::int64_t round_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b, r = a % b;
    if (std::llabs(r) * 2 > std::llabs(b)) q += (a < 0) == (b < 0) ? 1 : -1;
    return q;
}

}  // namespace

NormalForm symplectic_normal_form(const IMat& A0) {
    if (!is_antisymmetric(A0))
        throw validation_error("symplectic_normal_form requires an antisymmetric matrix");
    const int n = static_cast<int>(A0.rows());
    if (n % 2 != 0 || det_int(A0) == 0)
        throw validation_error("symplectic_normal_form: matrix is singular or odd-sized");

    IMat A = A0;
    IMat R = IMat::Identity(n, n);

    auto congr_swap = [&](int i, int j) {
        if (i == j) return;
        A.row(i).swap(A.row(j));
        A.col(i).swap(A.col(j));
        R.row(i).swap(R.row(j));
    };
    auto congr_add = [&](int i, int j, std::int64_t c) {  // row_i += c*row_j (and col)
        if (c == 0 || i == j) return;
        A.row(i) += c * A.row(j);
        A.col(i) += c * A.col(j);
        R.row(i) += c * R.row(j);
    };
    auto congr_neg = [&](int i) {
        A.row(i) *= -1;
        A.col(i) *= -1;
        R.row(i) *= -1;
    };

    // Reduce to interleaved blocks [[0,d_t],[-d_t,0]] with d_1 | d_2 | ...
    for (int t = 0; t < n; t += 2) {
        for (;;) {
            int bi = -1, bj = -1;
            std::int64_t best = 0;
            for (int i = t; i < n; ++i)
                for (int j = t; j < n; ++j) {
                    std::int64_t v = std::llabs(A(i, j));
                    if (v != 0 && (bi < 0 || v < best)) best = v, bi = i, bj = j;
                }
            if (bi < 0) throw numerical_error("degenerate antisymmetric form");
            congr_swap(t, bi);
            if (bj == t) bj = bi;
            congr_swap(t + 1, bj);

            const std::int64_t p = A(t, t + 1);
            for (int r = t + 2; r < n; ++r) {
                congr_add(r, t, -round_div(A(r, t + 1), p));  // shrink A(r, t+1)
                congr_add(r, t + 1, round_div(A(r, t), p));   // shrink A(r, t); A(t+1,t) = -p
            }
            bool clean = true;
            for (int r = t + 2; r < n && clean; ++r)
                if (A(t, r) != 0 || A(t + 1, r) != 0) clean = false;
            if (!clean) continue;  // remainders became new, smaller pivot candidates

            // divisibility: pivot must divide the trailing block
            int oi = -1;
            for (int i = t + 2; i < n && oi < 0; ++i)
                for (int j = t + 2; j < n; ++j)
                    if (A(i, j) % p != 0) { oi = i; break; }
            if (oi >= 0) {
                congr_add(t, oi, 1);
                continue;
            }
            break;
        }
        if (A(t, t + 1) < 0) congr_neg(t + 1);
    }

    // Reorder rows to (q-block, p-block) with divisors non-increasing:
    // pair t (0-based, divisors currently increasing) goes to q-slot m-1-t.
    const int m = n / 2;
    IMat P = IMat::Zero(n, n);
    for (int t = 0; t < m; ++t) {
        P(m - 1 - t, 2 * t) = 1;      // q row
        P(2 * m - 1 - t, 2 * t + 1) = 1;  // p row
    }
    NormalForm nf;
    nf.R = P * R;
    nf.form = P * A * P.transpose();
    nf.D = IVec(m);
    for (int k = 0; k < m; ++k) nf.D(k) = nf.form(k, m + k);
    return nf;
}

std::optional<GaussianMap> gaussian_map_between(const Mat& S, const Mat& S_target,
                                                double tol) {
    if (S.rows() != S.cols() || S_target.rows() != S_target.cols() ||
        S.rows() != S_target.rows() || S.rows() % 2 != 0)
        throw validation_error("gaussian_map_between: bases must be square, equal, even size");
    const int m = static_cast<int>(S.rows()) / 2;
    Mat W = omega(m);
    auto gram = [&](const Mat& G) {
        auto A = round_to_int(G * W * G.transpose(), tol);
        if (!A) throw numerical_error("basis does not generate a symplectically integral lattice");
        return *A;
    };
    NormalForm nfs = symplectic_normal_form(gram(S));
    NormalForm nft = symplectic_normal_form(gram(S_target));
    if (nfs.D != nft.D) return std::nullopt;

    Mat Bs = nfs.R.cast<double>() * S;
    Mat Bt = nft.R.cast<double>() * S_target;
    Mat M = Bs.partialPivLu().solve(Bt);
    if (!is_symplectic(M, 1e-10))
        throw numerical_error("computed map failed the symplectic check");
    GaussianMap out;
    out.M = M;
    out.R = inverse_unimodular(nft.R) * nfs.R;
    if ((out.R.cast<double>() * S * M - S_target).cwiseAbs().maxCoeff() > 1e-9)
        throw numerical_error("gaussian map verification failed");
    return out;
}

}  // namespace gridcode
