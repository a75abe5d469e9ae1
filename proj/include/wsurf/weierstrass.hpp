#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>

#include "sigma.hpp"
#include "wjet.hpp"

namespace wsurf {

// ---- CP¹ → R³ spinor data --------------------------------------------------

struct CP1WeierstrassData {
    WJet psi1, psi2;
    WJet p;          // real-valued jet
    WJet J;          // Hopf differential, surface normalization 2∂w∂w̄/A²
    WJet R;          // J / p²
    int epsilon = 1;
};

namespace detail {
// Square root for pointwise spinor data. A radicand exactly on the cut ray gets
// the root e^{iθ/2}√|u| instead of an error: the sign is absorbed by ε, and the
// partner radicand always takes the conjugate root so w = ψ/φ̄ is recovered.
inline WJet spinor_root(const WJet& r, double cut) {
    try {
        return sqrt(r, cut);
    } catch (const BranchCutAmbiguity&) {
        cd s = std::polar(std::sqrt(std::abs(r.v)), cut / 2);
        return {s, r.d / (2.0 * s), r.db / (2.0 * s)};
    }
}
}  // namespace detail

inline CP1WeierstrassData psi_from_cp1(const CP1Solution& s, const DomainPoint& pt, int epsilon = 1) {
    if (epsilon != 1 && epsilon != -1) throw DegenerateData("epsilon must be +1 or -1");
    const auto j = jet_eval(s.w, pt);
    const WJet W = WJet::value(j);
    const WJet Dw = WJet::del(j);
    const WJet Dbw = WJet::delbar(j);
    if (std::abs(Dw.v) == 0) throw DegenerateData("dw vanishes: both spinors are zero");
    const WJet A = WJet(1.0) + abs2(W);
    const double cut = s.w.cut_angle;
    const WJet sq = detail::spinor_root(Dw, cut);
    const WJet sqb = conj(sq);  // root of ∂̄w̄ = conj(∂w)
    CP1WeierstrassData d;
    d.epsilon = epsilon;
    const double e = epsilon;
    d.psi1 = WJet(e) * W * sqb / A;
    d.psi2 = WJet(e) * sq / A;
    WJet p2 = abs2(Dw) / (A * A);
    d.p = sqrt(p2);
    d.p.v = d.p.v.real();
    d.J = WJet(2.0) * Dw * conj(Dbw) / (A * A);
    d.R = d.J / p2;
    return d;
}

// Flip the sign choice of `cur` when that keeps the spinors continuous with `prev`.
inline void align_branch(const CP1WeierstrassData& prev, CP1WeierstrassData& cur) {
    double keep = std::abs(cur.psi1.v - prev.psi1.v) + std::abs(cur.psi2.v - prev.psi2.v);
    double flip = std::abs(cur.psi1.v + prev.psi1.v) + std::abs(cur.psi2.v + prev.psi2.v);
    if (flip < keep) {
        cur.psi1 = -cur.psi1;
        cur.psi2 = -cur.psi2;
        cur.epsilon = -cur.epsilon;
    }
}

inline cd gauss_map(const CP1WeierstrassData& d) {
    if (std::abs(d.psi2.v) == 0) throw DivisionByZero("psi2 vanishes");
    return d.psi1.v / std::conj(d.psi2.v);
}

// (∂ψ1 - pψ2, ∂̄ψ2 + pψ1)
inline std::array<cd, 2> gw1_residual(const CP1WeierstrassData& d) {
    return {d.psi1.d - d.p.v * d.psi2.v, d.psi2.db + d.p.v * d.psi1.v};
}

// Spinor bilinear ψ̄1∂ψ2 - ψ2∂ψ̄1. Equals -∂w∂w̄/A² on data from psi_from_cp1.
inline cd hopf_J_cp1(const CP1WeierstrassData& d) {
    WJet pb = conj(d.psi1);
    return pb.v * d.psi2.d - d.psi2.v * pb.d;
}

// ---- CP² → GW2 data ---------------------------------------------------------

struct CP2WeierstrassData {
    WJet phi1, phi2, psi1, psi2;
    cd P{}, Q{};
    int epsilon = 1;
};

struct Gauge {
    FieldConfig f1, f2;
    static Gauge identity() { return {FieldConfig(Expr(cd(1))), FieldConfig(Expr(cd(1)))}; }
};

namespace detail {
inline WJet gauge_jet(const FieldConfig& f, const DomainPoint& pt) {
    auto j = jet_eval(f, pt);
    if (std::abs(j.val) <= 1e-14) throw GaugeZero("gauge function vanishes at the point");
    if (std::abs(j.dzb) > 1e-10) throw NotHolomorphic("gauge function is not holomorphic");
    return WJet::value(j);
}

inline std::pair<cd, cd> gw2_PQ(cd phi1, cd phi2, cd psi1, cd psi2) {
    cd P = psi1 * std::conj(psi2) * std::conj(phi1) / phi2 + (std::norm(phi2) + std::norm(psi2)) * std::conj(phi2) / phi2;
    cd Q = std::conj(psi1) * psi2 * std::conj(phi2) / phi1 + (std::norm(phi1) + std::norm(psi1)) * std::conj(phi1) / phi1;
    return {P, Q};
}
}  // namespace detail

inline CP2WeierstrassData phi_psi_from_cp2(const CP2Solution& s, const DomainPoint& pt, int epsilon = 1,
                                           const Gauge& g = Gauge::identity()) {
    if (epsilon != 1 && epsilon != -1) throw DegenerateData("epsilon must be +1 or -1");
    const auto ja = jet_eval(s.w1, pt);
    const auto jb = jet_eval(s.w2, pt);
    const WJet W1 = WJet::value(ja), W2 = WJet::value(jb);
    const WJet D1 = WJet::del(ja), D2 = WJet::del(jb);
    const WJet A = WJet(1.0) + abs2(W1) + abs2(W2);
    const WJet r1 = (WJet(1.0) + abs2(W2)) * D1 - W1 * conj(W2) * D2;
    const WJet r2 = (WJet(1.0) + abs2(W1)) * D2 - conj(W1) * W2 * D1;
    if (std::abs(r1.v) == 0 || std::abs(r2.v) == 0)
        throw DegenerateData("a radicand of the spinor construction vanishes");
    const WJet F1 = detail::gauge_jet(g.f1, pt), F2 = detail::gauge_jet(g.f2, pt);
    const double cut = s.w1.cut_angle;
    const double e = epsilon;
    CP2WeierstrassData d;
    d.epsilon = epsilon;
    const WJet q1 = detail::spinor_root(r1, cut), q2 = detail::spinor_root(r2, cut);
    d.phi1 = WJet(e) * q1 / (A * F1);
    d.phi2 = WJet(e) * q2 / (A * F2);
    d.psi1 = WJet(e) * W1 * conj(q1) / (A * conj(F1));
    d.psi2 = WJet(e) * W2 * conj(q2) / (A * conj(F2));
    std::tie(d.P, d.Q) = detail::gw2_PQ(d.phi1.v, d.phi2.v, d.psi1.v, d.psi2.v);
    return d;
}

// Residuals of the four first-order equations for (φ, ψ) jets.
inline std::array<cd, 4> gw2_residual(const WJet& phi1, const WJet& phi2, const WJet& psi1, const WJet& psi2) {
    const cd f1 = phi1.v, f2 = phi2.v, s1 = psi1.v, s2 = psi2.v;
    if (std::abs(f1) == 0 || std::abs(f2) == 0) throw DivisionByZero("phi component vanishes");
    const cd f1b = std::conj(f1), f2b = std::conj(f2), s1b = std::conj(s1), s2b = std::conj(s2);
    const double n1 = std::norm(f1), n2 = std::norm(f2), m1 = std::norm(s1), m2 = std::norm(s2);
    auto [P, Q] = detail::gw2_PQ(f1, f2, s1, s2);
    const cd Pb = std::conj(P), Qb = std::conj(Q);
    std::array<cd, 4> r;
    r[0] = psi1.d - ((1.0 + m2 / n2) * f1b * Qb - 0.5 * (s1 * s2b / f2 + (m1 / n1) * f2b * f2b / f1b) * Pb);
    r[1] = psi2.d - ((1.0 + m1 / n1) * f2b * Pb - 0.5 * (s1b * s2 / f1 + (m2 / n2) * f1b * f1b / f2b) * Qb);
    r[2] = phi1.db + 0.5 * ((s2 / f2b * P + 2.0 * s1 / f1b * Q) * f1 + P * s1 * f2 * f2 / n1);
    r[3] = phi2.db + 0.5 * ((s1 / f1b * Q + 2.0 * s2 / f2b * P) * f2 + Q * s2 * f1 * f1 / n2);
    return r;
}

inline std::array<cd, 4> gw2_residual(const CP2WeierstrassData& d) {
    return gw2_residual(d.phi1, d.phi2, d.psi1, d.psi2);
}

// J = Σ φ_α ∂ψ̄_α - ψ̄_α ∂φ_α
inline cd hopf_J_cp2_data(const CP2WeierstrassData& d) {
    const WJet b1 = conj(d.psi1), b2 = conj(d.psi2);
    return d.phi1.v * b1.d - b1.v * d.phi1.d + d.phi2.v * b2.d - b2.v * d.phi2.d;
}

// w_α = ψ_α / φ̄_α
inline std::array<cd, 2> recover_w(const CP2WeierstrassData& d) {
    if (std::abs(d.phi1.v) == 0 || std::abs(d.phi2.v) == 0) throw DivisionByZero("phi component vanishes");
    return {d.psi1.v / std::conj(d.phi1.v), d.psi2.v / std::conj(d.phi2.v)};
}

// ---- η-chart and sinh-Gordon -------------------------------------------------

struct EtaChart {
    cd sqrtJ;     // J^{1/2}, the local derivative dη/dz
    double S;     // 2p²/|J|
    double scale; // |J|^{-1}: ∂_η∂̄_η̄ = |J|^{-1} ∂∂̄
};

inline EtaChart eta_chart(const CP1WeierstrassData& d, double cut_angle = std::numbers::pi) {
    const cd J = d.J.v;
    if (std::abs(J) <= 1e-14) throw ZeroHopf("Hopf differential vanishes; eta chart undefined");
    const double p = d.p.v.real();
    // J on the cut ray (meron at z = 1) is fine: either root is a valid local chart
    return {detail::spinor_root(d.J, cut_angle).v, 2 * p * p / std::abs(J), 1.0 / std::abs(J)};
}

// Weighted constraint: (ψ̄1∂ψ2 - ψ2∂ψ̄1) J^{-1/2} J^{-1/2}; the bilinear is
// -J/2 for this data, so the value is -1/2 rather than 1.
inline cd weighted_constraint(const CP1WeierstrassData& d, double cut_angle = std::numbers::pi) {
    auto e = eta_chart(d, cut_angle);
    return hopf_J_cp1(d) / (e.sqrtJ * e.sqrtJ);
}

struct SinhGordonResidual {
    double sinh_gordon;  // |J|^{-1}∂∂̄φ + 4 sinh φ, φ = 2 ln(p |J|^{-1/2})
    double s_form;       // |J|^{-1}∂∂̄ ln S - (1/S - S)
};

inline SinhGordonResidual sinh_gordon_residual(const std::function<CP1WeierstrassData(cd)>& data, cd z,
                                               double h = 1e-3) {
    auto S = [&](cd q) {
        auto d = data(q);
        return eta_chart(d).S;
    };
    auto phi = [&](cd q) {
        auto d = data(q);
        return 2.0 * std::log(d.p.v.real() / std::sqrt(std::abs(d.J.v)));
    };
    auto d0 = data(z);
    auto e0 = eta_chart(d0);
    const double lnS_lap = fd_ddbar([&](cd q) { return std::log(S(q)); }, z, h);
    const double phi_lap = fd_ddbar(phi, z, h);
    const double phi0 = phi(z);
    return {std::abs(e0.scale * phi_lap + 4 * std::sinh(phi0)),
            std::abs(e0.scale * lnS_lap - (1 / e0.S - e0.S))};
}

inline SinhGordonResidual sinh_gordon_residual(const CP1Solution& s, const DomainPoint& pt, double h = 1e-3) {
    return sinh_gordon_residual([&](cd q) { return psi_from_cp1(s, DomainPoint{q}); }, pt.z, h);
}

// ---- R³ conservation laws for the generalized representation --------------

// Three closedness conditions, evaluated exactly from jets.
inline std::array<cd, 3> r3_conservation_residuals(const CP1WeierstrassData& d) {
    const WJet& a = d.psi1;
    const WJet& b = d.psi2;
    const WJet ab = conj(a), bb = conj(b);
    const WJet& R = d.R;
    const WJet Rb = conj(R);
    const WJet u1 = a * bb + Rb * ab * b, v1 = ab * b + R * a * bb;
    const WJet u2 = a * a - Rb * b * b, v2 = b * b - R * a * a;
    const WJet u3 = bb * bb - Rb * ab * ab, v3 = ab * ab - R * bb * bb;
    return {u1.d - v1.db, u2.d + v2.db, u3.d + v3.db};
}

}  // namespace wsurf
