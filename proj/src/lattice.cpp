#include "gridcode/lattice.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <cmath>
#include <sstream>

namespace gridcode {

GkpLattice build(const Mat& S, double tol) {
    if (S.rows() != S.cols() || S.rows() % 2 != 0 || S.rows() == 0)
        throw validation_error("build: generator matrix must be square with even size");
    const int m = static_cast<int>(S.rows()) / 2;
    Mat W = omega(m);
    Mat Af = S * W * S.transpose();
    auto A = round_to_int(Af, tol);
    if (!A) throw validation_error("build: symplectic Gram matrix is not integral (not a code)");
    double det = A->cast<double>().determinant();
    if (det <= 0) throw validation_error("build: Gram matrix is singular");
    double droot = std::sqrt(det);
    double drounded = std::nearbyint(droot);
    if (std::abs(droot - drounded) > 1e-6 || drounded < 1)
        throw validation_error("build: det(A) is not the square of a positive integer");
    GkpLattice lat;
    lat.m = m;
    lat.S = S;
    lat.A = *A;
    lat.d = static_cast<std::int64_t>(drounded);
    lat.Sdual = A->cast<double>().partialPivLu().solve(S);
    return lat;
}

namespace {

Mat kron_block_diag(const std::vector<Mat>& blocks) {
    Eigen::Index n = 0;
    for (const auto& b : blocks) n += b.rows();
    Mat out = Mat::Zero(n, n);
    Eigen::Index at = 0;
    for (const auto& b : blocks) {
        out.block(at, at, b.rows(), b.cols()) = b;
        at += b.rows();
    }
    return out;
}

CodeBundle with_frame(const std::string& name, const Mat& S, const Mat& L0) {
    CodeBundle b;
    b.name = name;
    b.lat = build(S);
    b.has_frame = true;
    b.frame.L0 = L0;
    b.gauge.mu = IVec::Zero(2 * b.lat.m);
    b.gauge.upsilon = IVec::Zero(3);
    return b;
}

CodeBundle without_frame(const std::string& name, const Mat& S) {
    CodeBundle b;
    b.name = name;
    b.lat = build(S);
    b.has_frame = false;
    b.gauge.mu = IVec::Zero(2 * b.lat.m);
    b.gauge.upsilon = IVec::Zero(3);
    return b;
}

// frame with x0 = s1/2, z0 = s2/2, y0 = x0 + z0 for single-mode qubit codes
Mat half_frame(const Mat& S) {
    Mat L0(3, 2);
    L0.row(0) = 0.5 * S.row(0);
    L0.row(2) = 0.5 * S.row(1);
    L0.row(1) = L0.row(0) + L0.row(2);
    return L0;
}

}  // namespace

std::vector<std::string> catalog_names() {
    return {"square", "rectangular", "diamond",     "hexagonal", "qunaught",
            "tesseract", "d4",        "d4_qunaught", "d2m",       "e8",
            "four_mode"};
}

CodeBundle catalog(const std::string& name, double param) {
    const double r2 = std::sqrt(2.0);
    const double q2 = std::pow(2.0, 0.25);  // 2^{1/4}
    if (name == "square") {
        Mat S = r2 * Mat::Identity(2, 2);
        return with_frame(name, S, half_frame(S));
    }
    if (name == "rectangular") {
        double eta = param > 0 ? param : q2;
        Mat S(2, 2);
        S << eta, 0, 0, 2.0 / eta;
        return with_frame(name, S, half_frame(S));
    }
    if (name == "diamond") {
        Mat S(2, 2);
        S << 1, 1, 1, -1;
        return with_frame(name, S, half_frame(S));
    }
    if (name == "hexagonal") {
        double c = 2.0 / std::pow(3.0, 0.25);
        Mat S(2, 2);
        S << c, 0, -c / 2.0, c * std::sqrt(3.0) / 2.0;
        return with_frame(name, S, half_frame(S));
    }
    if (name == "qunaught") {
        double eta = param > 0 ? param : 1.0;
        Mat S(2, 2);
        S << eta, 0, 0, 1.0 / eta;
        return without_frame(name, S);
    }
    if (name == "tesseract") {
        Mat S(4, 4);
        double h = 1.0 / r2;
        S << 1, 0, 0, 0,
             0, h, 0, h,
             0, 0, 1, 0,
             0, h, 0, -h;
        S *= q2;
        Mat L0(3, 4);
        // x0 = (s1+s3)/2, z0 = (s2+s4)/2, y0 = (s1+s2+s3+s4)/2
        L0.row(0) = 0.5 * (S.row(0) + S.row(2));
        L0.row(2) = 0.5 * (S.row(1) + S.row(3));
        L0.row(1) = L0.row(0) + L0.row(2);
        return with_frame(name, S, L0);
    }
    if (name == "d4") {
        Mat S(4, 4);
        S << 1, 0, 1, 0,
             1, 0, 0, -1,
             0, 1, -1, 0,
             1, 0, 0, 1;
        Mat L0(3, 4);
        L0 << 0.5, 0.5, 0.5, 0.5,
              -0.5, 0.5, 0.5, 0.5,
              1, 0, 0, 0;
        return with_frame(name, S, L0);
    }
    if (name == "d4_qunaught") {
        double h = 1.0 / r2;
        Mat S(4, 4);
        S << 1, 0, 0, 0,
             -0.5, -h, 0.5, 0,
             0, h, 0, h,
             0, h, 0, -h;
        S *= q2;
        return without_frame(name, S);
    }
    if (name == "d2m") {
        int mm = param > 0 ? static_cast<int>(param) : 2;
        if (mm < 1) throw validation_error("catalog: d2m needs m >= 1");
        int n = 2 * mm;
        Mat S = Mat::Zero(n, n);
        for (int i = 0; i + 1 < n; ++i) {
            S(i, i) = 1;
            S(i, i + 1) = -1;
        }
        S(n - 1, n - 2) = 1;
        S(n - 1, n - 1) = 1;
        Mat L0 = Mat::Zero(3, n);
        L0.row(0).setConstant(0.5);
        L0.row(1).setConstant(0.5);
        L0(1, 0) = -0.5;
        L0(2, 0) = 1.0;
        return with_frame(name, S, L0);
    }
    if (name == "e8") {
        double a = param > 0 ? param : 2.0;
        Mat S = Mat::Zero(8, 8);
        S(0, 0) = 2;
        for (int i = 1; i < 7; ++i) {
            S(i, i - 1) = -1;
            S(i, i) = 1;
        }
        S.row(7).setConstant(0.5);
        S *= std::sqrt(a);
        return without_frame(name, S);
    }
    if (name == "four_mode") {
        double h = 1.0 / r2;
        Mat S = Mat::Zero(8, 8);
        S(0, 0) = 1;
        S(1, 1) = h; S(1, 3) = h;
        S(2, 2) = 1;
        S(3, 1) = h; S(3, 3) = -h;
        S(4, 4) = 1;
        S(5, 5) = h; S(5, 7) = h;
        S(6, 6) = 1;
        S(7, 0) = 0.5; S(7, 1) = h; S(7, 2) = 0.5;
        S(7, 4) = 0.5; S(7, 5) = h; S(7, 6) = 0.5;
        S *= q2;
        Mat L0 = Mat::Zero(3, 8);
        L0(0, 0) = 0.5; L0(0, 1) = h; L0(0, 2) = 0.5;
        L0(1, 0) = 0.5; L0(1, 2) = 0.5; L0(1, 5) = h;
        L0(2, 1) = h; L0(2, 5) = h;
        L0 *= q2;
        return with_frame(name, S, L0);
    }
    throw validation_error("catalog: unknown code name '" + name + "'");
}

// ---- LLL ----

LllResult lll_reduce(const Mat& S) {
    const int n = static_cast<int>(S.rows());
    Mat B = S;
    IMat R = IMat::Identity(n, n);
    const double delta = 0.75;

    Mat Bstar(n, S.cols());
    Mat mu = Mat::Zero(n, n);
    Vec norms(n);
    auto gram_schmidt = [&]() {
        for (int i = 0; i < n; ++i) {
            Bstar.row(i) = B.row(i);
            for (int j = 0; j < i; ++j) {
                mu(i, j) = B.row(i).dot(Bstar.row(j)) / norms(j);
                Bstar.row(i) -= mu(i, j) * Bstar.row(j);
            }
            norms(i) = Bstar.row(i).squaredNorm();
        }
    };
    gram_schmidt();
    int k = 1;
    int guard = 0;
    while (k < n) {
        if (++guard > 100000) throw numerical_error("lll_reduce failed to terminate");
        for (int j = k - 1; j >= 0; --j) {
            double c = std::nearbyint(mu(k, j));
            if (c != 0.0) {
                B.row(k) -= c * B.row(j);
                R.row(k) -= static_cast<std::int64_t>(c) * R.row(j);
                gram_schmidt();
            }
        }
        if (norms(k) >= (delta - mu(k, k - 1) * mu(k, k - 1)) * norms(k - 1)) {
            ++k;
        } else {
            B.row(k).swap(B.row(k - 1));
            R.row(k).swap(R.row(k - 1));
            gram_schmidt();
            k = std::max(k - 1, 1);
        }
    }
    LllResult out;
    out.R = R;
    out.S_red = B;
    if ((R.cast<double>() * S - B).cwiseAbs().maxCoeff() > 1e-9)
        throw numerical_error("lll_reduce lost exactness");
    return out;
}

// ---- enumeration ----

std::vector<Vec> enumerate_points(const GkpLattice& lat, double radius, bool dual,
                                  std::size_t cap) {
    if (radius <= 0) throw validation_error("enumerate_points: radius must be positive");
    const Mat& basis = dual ? lat.Sdual : lat.S;
    Mat Bred = lll_reduce(basis).S_red;
    const int n = static_cast<int>(Bred.rows());

    // points are Bred^T a; |Bred^T a| = |Ra| with Bred^T = QR
    Eigen::HouseholderQR<Mat> qr(Bred.transpose());
    Mat Rup = qr.matrixQR().triangularView<Eigen::Upper>();
    // make diagonal positive for stable bound arithmetic
    for (int i = 0; i < n; ++i)
        if (Rup(i, i) < 0) Rup.row(i) *= -1;

    std::vector<Vec> out;
    std::vector<double> partial(n + 1, 0.0);  // accumulated squared norm above level i
    IVec a = IVec::Zero(n);
    const double r2 = radius * radius * (1 + 1e-12) + 1e-12;

    // depth-first over coefficient levels n-1 .. 0
    std::function<void(int)> recurse = [&](int level) {
        if (level < 0) {
            if (out.size() >= cap)
                throw error("enumerate_points: point count exceeds cap", 3);
            out.push_back(Bred.transpose() * a.cast<double>());
            return;
        }
        double center = 0.0;
        for (int j = level + 1; j < n; ++j) center += Rup(level, j) * a(j);
        double room = r2 - partial[level + 1];
        if (room < 0) return;
        double half = std::sqrt(room);
        double lo = std::ceil((-half - center) / Rup(level, level) - 1e-12);
        double hi = std::floor((half - center) / Rup(level, level) + 1e-12);
        for (double ai = lo; ai <= hi; ai += 1.0) {
            a(level) = static_cast<std::int64_t>(ai);
            double term = Rup(level, level) * ai + center;
            partial[level] = partial[level + 1] + term * term;
            if (partial[level] <= r2) recurse(level - 1);
        }
        a(level) = 0;
    };
    recurse(n - 1);
    return out;
}

// ---- packing ----

namespace {

double unit_ball_volume(int n) {
    return std::pow(kPi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

// smallest nonzero norm among enumerated points, growing the radius as needed
double shortest_len(const GkpLattice& lat, bool dual,
                    const std::function<bool(const Vec&)>& accept) {
    // start from the shortest basis row: big bases in many modes make a
    // max-row-norm ball far too populous to enumerate
    const Mat& basis = dual ? lat.Sdual : lat.S;
    double radius = basis.rowwise().norm().minCoeff();
    if (radius <= 0) radius = 1e-9;
    for (int attempt = 0; attempt < 8; ++attempt) {
        double best = -1;
        for (const Vec& v : enumerate_points(lat, radius, dual)) {
            double nrm = v.norm();
            if (nrm < 1e-12) continue;
            if (!accept(v)) continue;
            if (best < 0 || nrm < best) best = nrm;
        }
        if (best > 0) return best;
        radius *= 1.5;
    }
    throw numerical_error("shortest_len: no accepted vector found");
}

}  // namespace

PackingReport packing_report(const GkpLattice& lat) {
    PackingReport rep;
    rep.min_stab_len = shortest_len(lat, false, [](const Vec&) { return true; });
    if (lat.d == 1) {
        // Lambda* = Lambda: no logical operators at all
        rep.min_pauli_len = 0.0;
    } else {
        // shortest dual vector not in the lattice
        Mat StInv = lat.S.transpose().partialPivLu().inverse();
        rep.min_pauli_len = shortest_len(lat, true, [&](const Vec& v) {
            Vec coords = StInv * v;
            return !round_to_int_vec(coords, 1e-6).has_value();
        });
    }
    int n = 2 * lat.m;
    double vol = unit_ball_volume(n);
    double covol = static_cast<double>(lat.d);  // |det S| = d
    rep.packing_ratio = vol * std::pow(rep.min_stab_len / 2.0, n) / covol;
    rep.max_correctable_radius =
        2.0 * std::pow(rep.packing_ratio / (static_cast<double>(lat.d) * vol), 1.0 / n);
    return rep;
}

double gaussian_error_estimate(const GkpLattice& lat, double sigma) {
    if (sigma <= 0) return 0.0;
    PackingReport rep = packing_report(lat);
    int n = 2 * lat.m;
    double vol = unit_ball_volume(n);
    double arg = std::pow(rep.packing_ratio / (static_cast<double>(lat.d) * vol), 1.0 / n) /
                 (sigma * std::sqrt(static_cast<double>(lat.m)));
    return std::erfc(arg);
}

// ---- Pauli classes ----

char pauli_class(const GkpLattice& lat, const LogicalFrame& frame, const Vec& p,
                 double tol) {
    if (lat.d != 2) throw validation_error("pauli_class: only qubit (d=2) codes supported");
    Mat W = omega(lat.m);
    Vec syn = lat.S * W * p;
    if (!round_to_int_vec(syn, tol)) return '\0';  // not a dual vector
    Mat StInv = lat.S.transpose().partialPivLu().inverse();
    auto in_lattice = [&](const Vec& v) {
        return round_to_int_vec(StInv * v, tol).has_value();
    };
    if (in_lattice(p)) return 'I';
    const char labels[3] = {'X', 'Y', 'Z'};
    for (int i = 0; i < 3; ++i)
        if (in_lattice(p - frame.L0.row(i).transpose())) return labels[i];
    throw numerical_error("pauli_class: dual vector fits no coset (inconsistent frame)");
}

LogicalFrame derive_frame(const GkpLattice& lat) {
    if (lat.d != 2) throw validation_error("derive_frame: only qubit (d=2) codes supported");
    Mat StInv = lat.S.transpose().partialPivLu().inverse();
    auto in_lattice = [&](const Vec& v) {
        return round_to_int_vec(StInv * v, 1e-6).has_value();
    };
    double radius = lat.Sdual.rowwise().norm().minCoeff();
    for (int attempt = 0; attempt < 10; ++attempt, radius *= 1.4) {
        auto pts = enumerate_points(lat, radius, true);
        std::sort(pts.begin(), pts.end(),
                  [](const Vec& a, const Vec& b) { return a.squaredNorm() < b.squaredNorm(); });
        std::vector<Vec> reps;
        for (const Vec& p : pts) {
            if (p.norm() < 1e-12 || in_lattice(p)) continue;
            bool known = false;
            for (const Vec& r : reps)
                if (in_lattice(p - r)) { known = true; break; }
            if (!known) reps.push_back(p);
            if (reps.size() == 3) break;
        }
        if (reps.size() == 3) {
            // order so that class(row0 + row2) == class(row1): x, y, z
            LogicalFrame f;
            f.L0 = Mat::Zero(3, 2 * lat.m);
            f.L0.row(0) = reps[0].transpose();
            if (in_lattice(reps[0] + reps[1] - reps[2])) {
                f.L0.row(2) = reps[1].transpose();
                f.L0.row(1) = reps[2].transpose();
            } else {
                f.L0.row(2) = reps[2].transpose();
                f.L0.row(1) = reps[1].transpose();
            }
            return f;
        }
    }
    throw numerical_error("derive_frame: could not find three nontrivial cosets");
}

// ---- JSON ----

std::string to_json(const CodeBundle& bundle) {
    nlohmann::json j;
    j["name"] = bundle.name;
    j["m"] = bundle.lat.m;
    std::vector<double> srows;
    for (Eigen::Index r = 0; r < bundle.lat.S.rows(); ++r)
        for (Eigen::Index c = 0; c < bundle.lat.S.cols(); ++c)
            srows.push_back(bundle.lat.S(r, c));
    j["S"] = srows;
    if (bundle.has_frame) {
        std::vector<double> l0;
        for (Eigen::Index r = 0; r < 3; ++r)
            for (Eigen::Index c = 0; c < bundle.frame.L0.cols(); ++c)
                l0.push_back(bundle.frame.L0(r, c));
        j["L0"] = l0;
    }
    std::vector<int> mu(bundle.gauge.mu.data(), bundle.gauge.mu.data() + bundle.gauge.mu.size());
    std::vector<int> up(bundle.gauge.upsilon.data(),
                        bundle.gauge.upsilon.data() + bundle.gauge.upsilon.size());
    j["mu"] = mu;
    j["upsilon"] = up;
    return j.dump(2);
}

CodeBundle from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    CodeBundle b;
    b.name = j.at("name").get<std::string>();
    int m = j.at("m").get<int>();
    std::vector<double> srows = j.at("S").get<std::vector<double>>();
    if (srows.size() != static_cast<std::size_t>(4 * m * m))
        throw validation_error("from_json: S has wrong size");
    Mat S(2 * m, 2 * m);
    for (int r = 0; r < 2 * m; ++r)
        for (int c = 0; c < 2 * m; ++c) S(r, c) = srows[r * 2 * m + c];
    b.lat = build(S);
    if (j.contains("L0")) {
        std::vector<double> l0 = j.at("L0").get<std::vector<double>>();
        if (l0.size() != static_cast<std::size_t>(6 * m))
            throw validation_error("from_json: L0 has wrong size");
        b.has_frame = true;
        b.frame.L0 = Mat(3, 2 * m);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 2 * m; ++c) b.frame.L0(r, c) = l0[r * 2 * m + c];
    }
    auto mu = j.at("mu").get<std::vector<int>>();
    auto up = j.at("upsilon").get<std::vector<int>>();
    b.gauge.mu = IVec::Zero(2 * m);
    for (std::size_t i = 0; i < mu.size() && i < static_cast<std::size_t>(2 * m); ++i)
        b.gauge.mu(i) = mu[i];
    b.gauge.upsilon = IVec::Zero(3);
    for (std::size_t i = 0; i < up.size() && i < 3; ++i) b.gauge.upsilon(i) = up[i];
    return b;
}

}  // namespace gridcode
