#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "immersion.hpp"
#include "weierstrass.hpp"

namespace wsurf {

// ---- R³ frame from spinor data ----------------------------------------------

struct FrameR3 {
    std::array<cd, 3> dX, dbX;
    std::array<double, 3> N;
};

inline FrameR3 frame_r3(const CP1WeierstrassData& d) {
    const double p = d.p.v.real();
    if (!(p > 0)) throw DegenerateData("p vanishes");
    const cd I(0, 1);
    const cd a = d.psi1.v, b = d.psi2.v;
    const cd q = a * b, qb = std::conj(q);
    FrameR3 f;
    auto t = r3_tangent(d);
    for (int k = 0; k < 3; ++k) f.dX[k] = t[k].v;
    f.dbX = r3_tangent_bar(d);
    f.N = {(I * (qb - q)).real() / p, (qb + q).real() / p, (std::norm(a) - std::norm(b)) / p};
    return f;
}

// Stereographic image (n1 + i n2)/(1 + n3) of the unit normal.
inline cd stereographic(const std::array<double, 3>& N) {
    if (1 + N[2] == 0) throw DivisionByZero("normal at the projection pole");
    return cd(N[0], N[1]) / (1 + N[2]);
}

struct FundamentalForms {
    cd g_zz, g_zzb, g_zbzb;       // I = g_zz dz² + 2 g_zz̄ dz dz̄ + g_z̄z̄ dz̄²
    cd b_zz, b_zzb, b_zbzb;       // II from second derivatives of X and N
    cd b_zz_printed, b_zzb_printed, b_zbzb_printed;
    double conformal = 0;         // g_zz̄
};

inline FundamentalForms fundamental_forms_r3(const CP1WeierstrassData& d) {
    const double p = d.p.v.real();
    if (!(p > 0)) throw DegenerateData("p vanishes");
    const cd J = d.J.v, R = d.R.v;
    const cd I(0, 1);
    FundamentalForms f;
    f.g_zz = 4.0 * J;
    f.g_zzb = 2 * p * p * (1 + std::norm(R));
    f.g_zbzb = std::conj(f.g_zz);
    f.conformal = f.g_zzb.real();
    auto t = r3_tangent(d);
    auto fr = frame_r3(d);
    cd bzz{}, bzzb{};
    for (int k = 0; k < 3; ++k) {
        bzz += t[k].d * fr.N[k];
        bzzb += t[k].db * fr.N[k];
    }
    f.b_zz = bzz;
    f.b_zzb = bzzb;
    f.b_zbzb = std::conj(bzz);
    f.b_zz_printed = 4.0 * J + R + std::conj(R);
    f.b_zzb_printed = 0.5 * (2 * p + I * (R - std::conj(R)));
    f.b_zbzb_printed = 4.0 * std::conj(J) - R - std::conj(R);
    return f;
}

// K = -p⁻² ∂∂̄ ln p, Richardson FD.
inline double curvature_conformal(const std::function<double(cd)>& p, cd z, double h = 1e-3) {
    const double p0 = p(z);
    if (!(p0 > 0)) throw DegenerateData("p vanishes");
    return -fd_ddbar([&](cd q) {
        double v = p(q);
        if (!(v > 0)) throw DegenerateData("p vanishes near the point");
        return std::log(v);
    }, z, h) / (p0 * p0);
}

// ∂∂̄φ - 2|J|²e^{-φ}, φ = 2 ln(|ψ1|²+|ψ2|²), J = ψ1∂ψ2 - ψ2∂ψ1, holomorphic data.
inline double liouville_residual(const FieldConfig& psi1, const FieldConfig& psi2, cd z, double h = 1e-3) {
    auto phi = [&](cd q) {
        return 2 * std::log(std::norm(value_eval(psi1, DomainPoint{q})) + std::norm(value_eval(psi2, DomainPoint{q})));
    };
    auto j1 = jet_eval(psi1, DomainPoint{z});
    auto j2 = jet_eval(psi2, DomainPoint{z});
    const cd J = j1.val * j2.dz - j2.val * j1.dz;
    return std::abs(fd_ddbar(phi, z, h) - 2 * std::norm(J) * std::exp(-phi(z)));
}

// ---- curvature of a sampled immersion (any codimension) ---------------------

struct CurvatureReport {
    double K = 0;          // Gauss curvature
    double H = 0;          // |H⃗|, H⃗ = ½ g^{ij} (X_ij)^⊥
    double hbar = 0;       // |∂∂̄X| / (∂X, ∂̄X)
    double conformality = 0;   // |(∂X, ∂X)|
    double gzzb = 0;           // (∂X, ∂̄X)
    double r450 = 0;           // |(∂∂̄X,∂∂̄X) - (∂X,∂̄X)²| / (∂X,∂̄X)²
    double g11 = 0, g12 = 0, g22 = 0;  // Cartesian metric
    bool too_coarse = false;
};

namespace detail {
inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}
}  // namespace detail

inline CurvatureReport geometry_from_partials(const SurfacePartials& P) {
    using detail::dot;
    CurvatureReport r;
    const size_t n = P.Xx.size();
    r.g11 = dot(P.Xx, P.Xx);
    r.g12 = dot(P.Xx, P.Xy);
    r.g22 = dot(P.Xy, P.Xy);
    const double det = r.g11 * r.g22 - r.g12 * r.g12;
    if (!(det > 0)) throw DegenerateData("degenerate induced metric");
    const double i11 = r.g22 / det, i12 = -r.g12 / det, i22 = r.g11 / det;
    auto perp = [&](const std::vector<double>& V) {
        const double a = dot(V, P.Xx), b = dot(V, P.Xy);
        const double c1 = i11 * a + i12 * b, c2 = i12 * a + i22 * b;
        std::vector<double> o(n);
        for (size_t k = 0; k < n; ++k) o[k] = V[k] - c1 * P.Xx[k] - c2 * P.Xy[k];
        return o;
    };
    const auto nxx = perp(P.Xxx), nxy = perp(P.Xxy), nyy = perp(P.Xyy);
    std::vector<double> Hv(n), lap(n);
    for (size_t k = 0; k < n; ++k) {
        Hv[k] = 0.5 * (i11 * nxx[k] + 2 * i12 * nxy[k] + i22 * nyy[k]);
        lap[k] = 0.25 * (P.Xxx[k] + P.Xyy[k]);
    }
    r.H = std::sqrt(dot(Hv, Hv));
    r.K = (dot(nxx, nyy) - dot(nxy, nxy)) / det;
    r.gzzb = 0.25 * (r.g11 + r.g22);
    r.conformality = std::abs(cd(r.g11 - r.g22, -2 * r.g12)) * 0.25;
    r.hbar = std::sqrt(dot(lap, lap)) / r.gzzb;
    r.r450 = std::abs(dot(lap, lap) - r.gzzb * r.gzzb) / (r.gzzb * r.gzzb);
    return r;
}

struct GeometryOptions {
    bool use_exact = true;     // exact partials when the grid carries them
    double tol = 1e-6;         // coarse-grid threshold is 10× this
    bool throw_if_coarse = false;
};

namespace detail {

// Cartesian partials from polar ones at (r, φ).
inline SurfacePartials polar_to_cartesian(double r, double phi, const std::vector<double>& Xr,
                                          const std::vector<double>& Xp, const std::vector<double>& Xrr,
                                          const std::vector<double>& Xrp, const std::vector<double>& Xpp) {
    const double c = std::cos(phi), s = std::sin(phi), r2 = r * r;
    SurfacePartials o;
    for (size_t k = 0; k < Xr.size(); ++k) {
        o.Xx.push_back(c * Xr[k] - s / r * Xp[k]);
        o.Xy.push_back(s * Xr[k] + c / r * Xp[k]);
        o.Xxx.push_back(c * c * Xrr[k] - 2 * c * s / r * Xrp[k] + s * s / r2 * Xpp[k] + s * s / r * Xr[k] +
                        2 * c * s / r2 * Xp[k]);
        o.Xyy.push_back(s * s * Xrr[k] + 2 * c * s / r * Xrp[k] + c * c / r2 * Xpp[k] + c * c / r * Xr[k] -
                        2 * c * s / r2 * Xp[k]);
        o.Xxy.push_back(c * s * Xrr[k] + (c * c - s * s) / r * Xrp[k] - c * s / r2 * Xpp[k] - c * s / r * Xr[k] -
                        (c * c - s * s) / r2 * Xp[k]);
    }
    return o;
}

// Central-difference partials in the grid chart at stride m; nullopt when the
// stencil leaves the grid.
inline std::optional<std::array<std::vector<double>, 5>> chart_partials(const SurfaceGrid& g, int i, int j, int m) {
    const Grid& G = g.grid;
    const bool periodic = G.kind == Grid::Kind::polar;
    if (i - m < 0 || i + m >= G.n1) return std::nullopt;
    if (!periodic && (j - m < 0 || j + m >= G.n2)) return std::nullopt;
    if (periodic && 2 * m >= G.n2) return std::nullopt;
    auto at = [&](int a, int b) -> const std::vector<double>& {
        int bb = periodic ? ((b % G.n2) + G.n2) % G.n2 : b;
        return g.X[G.index(a, bb)];
    };
    const double hu = G.du() * m, hv = G.dv() * m;
    const size_t n = g.dim;
    std::array<std::vector<double>, 5> d;
    for (auto& v : d) v.assign(n, 0.0);
    for (size_t k = 0; k < n; ++k) {
        const double c = at(i, j)[k];
        d[0][k] = (at(i + m, j)[k] - at(i - m, j)[k]) / (2 * hu);
        d[1][k] = (at(i, j + m)[k] - at(i, j - m)[k]) / (2 * hv);
        d[2][k] = (at(i + m, j)[k] - 2 * c + at(i - m, j)[k]) / (hu * hu);
        d[3][k] = (at(i + m, j + m)[k] - at(i + m, j - m)[k] - at(i - m, j + m)[k] + at(i - m, j - m)[k]) / (4 * hu * hv);
        d[4][k] = (at(i, j + m)[k] - 2 * c + at(i, j - m)[k]) / (hv * hv);
    }
    return d;
}

inline SurfacePartials chart_to_cartesian(const SurfaceGrid& g, int i, int j, const std::array<std::vector<double>, 5>& d) {
    if (g.grid.kind == Grid::Kind::polar) return polar_to_cartesian(g.grid.u(i), g.grid.v(j), d[0], d[1], d[2], d[3], d[4]);
    return {d[0], d[1], d[2], d[3], d[4]};
}

}  // namespace detail

// Per-point geometry. With exact partials the report is direct; otherwise
// central differences at strides 1 and 2 are Richardson-combined and points
// where the two disagree by more than 10·tol are flagged. Points without a
// full stencil get NaN fields and the flag set.
inline std::vector<CurvatureReport> immersion_geometry(const SurfaceGrid& g, const GeometryOptions& opt = {}) {
    std::vector<CurvatureReport> out(g.X.size());
    const bool exact = opt.use_exact && g.partials.size() == g.X.size();
    const Grid& G = g.grid;
    for (int i = 0; i < G.n1; ++i)
        for (int j = 0; j < G.n2; ++j) {
            const size_t k = G.index(i, j);
            if (exact) {
                out[k] = geometry_from_partials(g.partials[k]);
                continue;
            }
            auto d1 = detail::chart_partials(g, i, j, 1);
            auto d2 = detail::chart_partials(g, i, j, 2);
            if (!d1 || !d2) {
                CurvatureReport r;
                r.K = r.H = r.hbar = r.conformality = r.gzzb = r.r450 = std::nan("");
                r.too_coarse = true;
                out[k] = r;
                continue;
            }
            std::array<std::vector<double>, 5> rich;
            for (int q = 0; q < 5; ++q) {
                rich[q].resize(g.dim);
                for (size_t c = 0; c < g.dim; ++c) rich[q][c] = (4 * (*d1)[q][c] - (*d2)[q][c]) / 3;
            }
            auto r = geometry_from_partials(detail::chart_to_cartesian(g, i, j, rich));
            auto r1 = geometry_from_partials(detail::chart_to_cartesian(g, i, j, *d1));
            auto r2 = geometry_from_partials(detail::chart_to_cartesian(g, i, j, *d2));
            const double scale = std::max(1.0, r.gzzb);
            const double diff = std::max({std::abs(r1.hbar - r2.hbar), std::abs(r1.gzzb - r2.gzzb) / scale,
                                          std::abs(r1.conformality - r2.conformality) / scale});
            r.too_coarse = diff > 10 * opt.tol;
            if (r.too_coarse && opt.throw_if_coarse) throw GridTooCoarse("finite-difference estimates disagree");
            out[k] = r;
        }
    return out;
}

}  // namespace wsurf
