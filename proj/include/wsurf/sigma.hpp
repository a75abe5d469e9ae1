#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "field.hpp"
#include "wjet.hpp"

namespace wsurf {

struct CP1Solution {
    FieldConfig w;
};

struct CP2Solution {
    FieldConfig w1, w2;
};

inline std::vector<cd> punctures_of(const CP1Solution& s) { return s.w.punctures; }
inline std::vector<cd> punctures_of(const CP2Solution& s) {
    auto p = s.w1.punctures;
    p.insert(p.end(), s.w2.punctures.begin(), s.w2.punctures.end());
    return p;
}
inline double puncture_distance(const CP1Solution& s, cd z) { return s.w.puncture_distance(z); }
inline double puncture_distance(const CP2Solution& s, cd z) {
    return std::min(s.w1.puncture_distance(z), s.w2.puncture_distance(z));
}

// ---- model residuals ------------------------------------------------------

inline cd cp1_residual(const CP1Solution& s, const DomainPoint& pt) {
    auto j = jet_eval(s.w, pt);
    double A = 1 + std::norm(j.val);
    return j.dzzb - 2.0 * std::conj(j.val) * j.dz * j.dzb / A;
}

namespace detail {
inline std::pair<cd, cd> cp2_residual_jets(const ComplexJet& a, const ComplexJet& b) {
    double A = 1 + (std::norm(a.val) + std::norm(b.val));  // grouped so w₁ ↔ w₂ is bit-exact
    cd mix = a.dz * b.dzb + a.dzb * b.dz;
    cd r1 = a.dzzb - 2.0 * std::conj(a.val) / A * a.dz * a.dzb - std::conj(b.val) / A * mix;
    cd r2 = b.dzzb - 2.0 * std::conj(b.val) / A * b.dz * b.dzb - std::conj(a.val) / A * mix;
    return {r1, r2};
}
}  // namespace detail

inline std::pair<cd, cd> cp2_residual(const CP2Solution& s, const DomainPoint& pt) {
    return detail::cp2_residual_jets(jet_eval(s.w1, pt), jet_eval(s.w2, pt));
}

// ---- holomorphic invariants -----------------------------------------------

// J = ∂w ∂w̄ / A², the display normalization; ∂w̄ = conj(∂̄w).
inline cd cp1_invariant_J(const CP1Solution& s, const DomainPoint& pt) {
    auto j = jet_eval(s.w, pt);
    double A = 1 + std::norm(j.val);
    return j.dz * std::conj(j.dzb) / (A * A);
}

inline cd cp2_invariant_J(const CP2Solution& s, const DomainPoint& pt) {
    auto a = jet_eval(s.w1, pt);
    auto b = jet_eval(s.w2, pt);
    double A = 1 + std::norm(a.val) + std::norm(b.val);
    cd dwb1 = std::conj(a.dzb), dwb2 = std::conj(b.dzb);
    cd t = a.dz * dwb1 + b.dz * dwb2 +
           (std::conj(a.val) * dwb2 - std::conj(b.val) * dwb1) * (a.val * b.dz - b.val * a.dz);
    return t / (A * A);
}

// ---- energy ---------------------------------------------------------------

// Printed integrand ∂w ∂̄w / (1+|w|²); complex in general, zero for holomorphic w.
inline cd energy_density_printed(const CP1Solution& s, const DomainPoint& pt) {
    auto j = jet_eval(s.w, pt);
    return j.dz * j.dzb / (1 + std::norm(j.val));
}

// Real density (|∂w|² + |∂̄w|²)/(1+|w|²)².
inline double energy_density(const CP1Solution& s, const DomainPoint& pt) {
    auto j = jet_eval(s.w, pt);
    double A = 1 + std::norm(j.val);
    return (std::norm(j.dz) + std::norm(j.dzb)) / (A * A);
}

// Midpoint-rule total of the real density over an annulus, area element r dr dφ.
inline double energy_total(const CP1Solution& s, double r0, double r1, int nr, int nphi) {
    double dr = (r1 - r0) / nr, dphi = 2 * std::numbers::pi / nphi, acc = 0;
    for (int i = 0; i < nr; ++i) {
        double r = r0 + (i + 0.5) * dr;
        for (int k = 0; k < nphi; ++k)
            acc += energy_density(s, DomainPoint::polar(r, (k + 0.5) * dphi)) * r * dr * dphi;
    }
    return acc;
}

// ---- conserved currents ---------------------------------------------------

enum class Which { K, L };
enum class CurrentSource { printed, commutator };

struct CurrentMatrix {
    Eigen::MatrixXcd m;
    Which which = Which::K;
};

namespace detail {

// Derivative data for one operator D ∈ {∂̄ (K), ∂ (L)}: Dw and Dw̄.
struct DPair {
    cd w, wb;
};
inline DPair dpair(const ComplexJet& j, Which which) {
    if (which == Which::K) return {j.dzb, std::conj(j.dz)};  // ∂̄w, ∂̄w̄
    return {j.dz, std::conj(j.dzb)};                          // ∂w, ∂w̄
}

inline Eigen::Matrix2cd cp1_M(cd w) {
    Eigen::Matrix2cd M;
    M << 1.0, std::conj(w), w, std::norm(w);
    return M;
}

inline Eigen::Matrix3cd cp2_M(cd a, cd b) {
    Eigen::Matrix3cd M;
    M << 1.0, a, b,
         std::conj(a), std::norm(a), std::conj(a) * b,
         std::conj(b), a * std::conj(b), std::norm(b);
    return M;
}

}  // namespace detail

// Ground truth: K = [∂̄M, M]/A², L = [∂M, M]/A².
inline CurrentMatrix current_commutator(const CP1Solution& s, const DomainPoint& pt, Which which) {
    auto j = jet_eval(s.w, pt);
    cd w = j.val;
    double A = 1 + std::norm(w);
    auto D = detail::dpair(j, which);
    Eigen::Matrix2cd dM;
    dM << 0.0, D.wb, D.w, std::conj(w) * D.w + w * D.wb;
    Eigen::Matrix2cd M = detail::cp1_M(w);
    return {(dM * M - M * dM) / (A * A), which};
}

inline CurrentMatrix current_commutator(const CP2Solution& s, const DomainPoint& pt, Which which) {
    auto ja = jet_eval(s.w1, pt);
    auto jb = jet_eval(s.w2, pt);
    cd a = ja.val, b = jb.val;
    double A = 1 + std::norm(a) + std::norm(b);
    auto Da = detail::dpair(ja, which);
    auto Db = detail::dpair(jb, which);
    Eigen::Matrix3cd dM;
    dM << 0.0, Da.w, Db.w,
          Da.wb, std::conj(a) * Da.w + a * Da.wb, Da.wb * b + std::conj(a) * Db.w,
          Db.wb, Da.w * std::conj(b) + a * Db.wb, std::conj(b) * Db.w + b * Db.wb;
    Eigen::Matrix3cd M = detail::cp2_M(a, b);
    return {(dM * M - M * dM) / (A * A), which};
}

// Printed component formulas. CP¹: the matrices displayed for K and -K†.
inline CurrentMatrix current_printed(const CP1Solution& s, const DomainPoint& pt, Which which) {
    auto j = jet_eval(s.w, pt);
    cd w = j.val, wb = std::conj(w);
    double A = 1 + std::norm(w);
    auto D = detail::dpair(j, which);
    Eigen::Matrix2cd m;
    m << wb * D.w - w * D.wb, D.wb + wb * wb * D.w,
         -D.w - w * w * D.wb, w * D.wb - wb * D.w;
    return {m / (A * A), which};
}

// CP²: entries k_ij / l_ij as printed, including the extra factors that appear
// only in the K list (k21 read with its unmatched bracket closed at the end,
// k32 with the |w2|²|w̄2|² factor).
inline CurrentMatrix current_printed(const CP2Solution& s, const DomainPoint& pt, Which which) {
    auto ja = jet_eval(s.w1, pt);
    auto jb = jet_eval(s.w2, pt);
    const cd a = ja.val, b = jb.val, ab = std::conj(a), bb = std::conj(b);
    const double na = std::norm(a), nb = std::norm(b);
    const double A = 1 + na + nb;
    auto Da = detail::dpair(ja, which);
    auto Dbp = detail::dpair(jb, which);
    const cd D1 = Da.w, D1b = Da.wb, D2 = Dbp.w, D2b = Dbp.wb;
    const bool K = which == Which::K;

    Eigen::Matrix3cd m;
    m(0, 0) = (ab * D1 + bb * D2) - (a * D1b + b * D2b);
    m(0, 1) = na * D1 + a * bb * D2 - (D1 + a * (ab * D1 + a * D1b) + b * (bb * D1 + a * D2b));
    m(0, 2) = ab * b * D1 + nb * D2 - (D2 + a * (ab * D2 + b * D1b) + b * (bb * D2 + b * D2b));
    if (K)
        m(1, 0) = D1b + ab * (ab * (ab * D1 + a * D1b) + bb * (ab * D2 + b * D1b)) - (na * D1b + ab * b * D2b);
    else
        m(1, 0) = D1b + ab * (ab * D1 + a * D1b) + bb * (ab * D2 + b * D1b) - (na * D1b + ab * b * D2b);
    m(1, 1) = a * D1b + a * bb * (ab * D2 + b * D1b) - (ab * D1 + ab * b * (bb * D1 + a * D2b));
    m(1, 2) = b * D1b + ab * b * (ab * D1 + a * D1b) + nb * (ab * D2 + b * D1b) -
              (ab * D2 + na * (ab * D2 + b * D1b) + ab * b * (bb * D2 + b * D2b));
    m(2, 0) = D2b + ab * (bb * D1 + a * D2b) + bb * (bb * D2 + b * D2b) - (a * bb * D1b + nb * D2b);
    const double f32 = K ? nb * nb : nb;
    m(2, 1) = a * D2b + na * (bb * D1 + a * D2b) + a * bb * (bb * D2 + b * D2b) -
              (bb * D1 + a * bb * (ab * D1 + a * D1b) + f32 * (bb * D1 + a * D2b));
    m(2, 2) = b * D2b + ab * b * (bb * D1 + a * D2b) - (bb * D2 + a * bb * (ab * D2 + b * D1b));
    return {m / (A * A), which};
}

template <class S>
CurrentMatrix current(const S& s, const DomainPoint& pt, Which which,
                      CurrentSource src = CurrentSource::printed) {
    return src == CurrentSource::printed ? current_printed(s, pt, which) : current_commutator(s, pt, which);
}

// One itemized mismatch between printed and commutator entries.
struct CurrentDiscrepancy {
    Which which;
    int row, col;
    double max_abs_diff;
    double max_rel_diff;
    double sign_flip_diff;  // distance to the negated commutator
};

// Compare printed and commutator entries over sample points.
template <class S>
std::vector<CurrentDiscrepancy> current_discrepancies(const S& s, const std::vector<DomainPoint>& pts,
                                                      double tol = 1e-8) {
    std::vector<CurrentDiscrepancy> out;
    for (Which wh : {Which::K, Which::L}) {
        Eigen::MatrixXd dmax, rmax, fmax;
        for (auto& pt : pts) {
            auto P = current_printed(s, pt, wh).m;
            auto C = current_commutator(s, pt, wh).m;
            if (dmax.size() == 0) {
                dmax = Eigen::MatrixXd::Zero(P.rows(), P.cols());
                rmax = dmax;
                fmax = dmax;
            }
            for (int i = 0; i < P.rows(); ++i)
                for (int k = 0; k < P.cols(); ++k) {
                    double d = std::abs(P(i, k) - C(i, k));
                    dmax(i, k) = std::max(dmax(i, k), d);
                    rmax(i, k) = std::max(rmax(i, k), d / std::max(std::abs(C(i, k)), 1e-300));
                    fmax(i, k) = std::max(fmax(i, k), std::abs(P(i, k) + C(i, k)));
                }
        }
        for (int i = 0; i < dmax.rows(); ++i)
            for (int k = 0; k < dmax.cols(); ++k)
                if (dmax(i, k) > tol) out.push_back({wh, i, k, dmax(i, k), rmax(i, k), fmax(i, k)});
    }
    return out;
}

// Frobenius norm of ∂K + ∂̄L (L = -K†), currents from the commutator, FD with
// step h and Richardson extrapolation.
template <class S>
double conservation_residual(const S& s, const DomainPoint& pt, double h = 1e-5,
                             CurrentSource src = CurrentSource::commutator) {
    auto Kf = [&](cd z) -> Eigen::MatrixXcd { return current(s, DomainPoint{z}, Which::K, src).m; };
    auto Lf = [&](cd z) -> Eigen::MatrixXcd { return current(s, DomainPoint{z}, Which::L, src).m; };
    auto [dK, dbK] = fd_wirtinger(Kf, pt.z, h);
    auto [dL, dbL] = fd_wirtinger(Lf, pt.z, h);
    (void)dbK;
    (void)dL;
    return (dK + dbL).norm();
}

// |∂̄J| by Richardson FD.
inline double dbar_J_residual(const CP1Solution& s, const DomainPoint& pt, double h = 1e-5) {
    auto f = [&](cd z) { return cp1_invariant_J(s, DomainPoint{z}); };
    return std::abs(fd_wirtinger(f, pt.z, h).second);
}
inline double dbar_J_residual(const CP2Solution& s, const DomainPoint& pt, double h = 1e-5) {
    auto f = [&](cd z) { return cp2_invariant_J(s, DomainPoint{z}); };
    return std::abs(fd_wirtinger(f, pt.z, h).second);
}

}  // namespace wsurf
