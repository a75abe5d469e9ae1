#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "parallel.hpp"
#include "quadrature.hpp"
#include "sigma.hpp"
#include "weierstrass.hpp"
#include "wjet.hpp"

namespace wsurf {

struct ImmersionPoint {
    std::vector<double> X;
    double quad_error = 0;
    double imag_residue = 0;
};

// An immersion given by its tangent ∂X (as jets, so second derivatives are
// available) and optionally a separately formulated dz̄ coefficient.
struct Immersion {
    std::string name;
    size_t dim = 3;
    std::function<std::vector<WJet>(cd)> tangent;
    std::function<std::vector<cd>(cd)> dzbar;  // empty: conj of tangent
    std::vector<cd> punctures;
    std::function<double(cd)> puncture_distance;

    Form form(cd z) const {
        auto a = tangent(z);
        Form f;
        f.dz.resize(dim);
        for (size_t k = 0; k < dim; ++k) f.dz[k] = a[k].v;
        if (dzbar) {
            f.dzb = dzbar(z);
        } else {
            f.dzb.resize(dim);
            for (size_t k = 0; k < dim; ++k) f.dzb[k] = std::conj(a[k].v);
        }
        return f;
    }
};

inline ImmersionPoint assemble(const IntegralResult& r, double max_imag = 1e-6) {
    ImmersionPoint p;
    p.quad_error = r.error;
    for (auto v : r.value) {
        p.X.push_back(v.real());
        p.imag_residue = std::max(p.imag_residue, std::abs(v.imag()));
    }
    if (p.imag_residue > max_imag) throw NonRealResult("assembled integrand has a non-negligible imaginary part");
    return p;
}

inline ImmersionPoint immerse(const Immersion& imm, const Contour& c, const QuadOptions& opt = {}) {
    auto r = integrate_form([&](cd z) { return imm.form(z); }, c, imm.dim, imm.punctures, opt);
    return assemble(r);
}

// ---- classical representation ----------------------------------------------

inline Immersion enneper_immersion(const FieldConfig& psi1, const FieldConfig& psi2) {
    Immersion imm;
    imm.name = "enneper";
    imm.dim = 3;
    imm.tangent = [psi1, psi2](cd z) {
        auto j1 = jet_eval(psi1, DomainPoint{z});
        auto j2 = jet_eval(psi2, DomainPoint{z});
        if (std::abs(j1.dzb) > 1e-10 || std::abs(j2.dzb) > 1e-10)
            throw NotHolomorphic("Enneper data must be holomorphic");
        const WJet a = WJet::value(j1), b = WJet::value(j2);
        const cd I(0, 1);
        return std::vector<WJet>{WJet(0.5) * (a * a - b * b), WJet(0.5 * I) * (a * a + b * b), -(a * b)};
    };
    imm.punctures = psi1.punctures;
    imm.punctures.insert(imm.punctures.end(), psi2.punctures.begin(), psi2.punctures.end());
    imm.puncture_distance = [psi1, psi2](cd z) { return std::min(psi1.puncture_distance(z), psi2.puncture_distance(z)); };
    return imm;
}

inline ImmersionPoint enneper_weierstrass_X(const FieldConfig& psi1, const FieldConfig& psi2, const Contour& c) {
    return immerse(enneper_immersion(psi1, psi2), c);
}

// ---- generalized R³ representation ------------------------------------------

// ∂X = T and the printed ∂̄X for given spinor data.
inline std::array<WJet, 3> r3_tangent(const CP1WeierstrassData& d) {
    const cd I(0, 1);
    const WJet& a = d.psi1;
    const WJet& b = d.psi2;
    const WJet ab = conj(a), bb = conj(b);
    const WJet& R = d.R;
    return {WJet(I) * (ab * ab + b * b - R * (a * a + bb * bb)),
            ab * ab - b * b + R * (a * a - bb * bb),
            WJet(-2.0) * (ab * b + R * a * bb)};
}

inline std::array<cd, 3> r3_tangent_bar(const CP1WeierstrassData& d) {
    const cd I(0, 1);
    const cd a = d.psi1.v, b = d.psi2.v, ab = std::conj(a), bb = std::conj(b), Rb = std::conj(d.R.v);
    return {-I * (a * a + bb * bb - Rb * (ab * ab + b * b)),
            a * a - bb * bb + Rb * (ab * ab - b * b),
            -2.0 * (a * bb + Rb * ab * b)};
}

using CP1DataField = std::function<CP1WeierstrassData(cd)>;

inline Immersion generalized_r3_immersion(CP1DataField data, std::vector<cd> punctures = {},
                                          std::function<double(cd)> dist = {}) {
    Immersion imm;
    imm.name = "generalized_r3";
    imm.dim = 3;
    imm.tangent = [data](cd z) {
        auto t = r3_tangent(data(z));
        return std::vector<WJet>(t.begin(), t.end());
    };
    imm.dzbar = [data](cd z) {
        auto t = r3_tangent_bar(data(z));
        return std::vector<cd>(t.begin(), t.end());
    };
    imm.punctures = std::move(punctures);
    imm.puncture_distance = std::move(dist);
    return imm;
}

inline Immersion generalized_r3_immersion(const CP1Solution& s) {
    return generalized_r3_immersion([s](cd z) { return psi_from_cp1(s, DomainPoint{z}); }, punctures_of(s),
                                    [s](cd z) { return puncture_distance(s, z); });
}

inline ImmersionPoint generalized_X_r3(const CP1DataField& data, const Contour& c, std::vector<cd> punctures = {}) {
    return immerse(generalized_r3_immersion(data, std::move(punctures)), c);
}

// ---- R⁸ from CP² solutions ---------------------------------------------------

// printed: the displayed X¹, X² pair. gell_mann: X¹ = -tr(λ₃L), X² = -tr(λ₈L),
// completing X³..X⁸ (which are -tr(λ_k L)) to an orthonormal basis.
enum class DiagonalBasis { gell_mann, printed };

// Printed dz coefficients a_k of X^k, as functions of w, w̄ and their ∂.
template <class T>
std::array<T, 8> cp2_integrands(const T& w1, const T& w1b, const T& w2, const T& w2b, const T& d1, const T& d1b,
                                const T& d2, const T& d2b, DiagonalBasis basis) {
    const cd I(0, 1);
    const T one(1.0);
    const T A = one + w1 * w1b + w2 * w2b;
    const T iA2 = one / (A * A);
    const T n1 = w1 * w1b, n2 = w2 * w2b;
    std::array<T, 8> a;
    a[0] = -(w1b * d1 + w2b * d2 - (w1 * d1b + w2 * d2b)) * iA2;
    a[1] = ((one + n2) * (w1 * d1b - w1b * d1) + n1 * (w2b * d2 - w2 * d2b)) * iA2;
    a[2] = T(-I) * iA2 *
           (-(one + w1b * w1b + n2) * d1 - (one + w1 * w1 + n2) * d1b + w2b * (w1 - w1b) * d2 + w2 * (w1b - w1) * d2b);
    a[3] = ((one - w1b * w1b + n2) * d1 + (w1 * w1 - one - n2) * d1b - w2b * (w1 + w1b) * d2 + w2 * (w1 + w1b) * d2b) *
           iA2;
    a[4] = T(-I) * iA2 *
           (w1b * (w2 - w2b) * d1 + w1 * (w2b - w2) * d1b - (one + n1 + w2b * w2b) * d2 - (one + n1 + w2 * w2) * d2b);
    a[5] = (-(w1b * (w2 + w2b)) * d1 + w1 * (w2 + w2b) * d1b + (one + n1 - w2b * w2b) * d2 - (one + n1 - w2 * w2) * d2b) *
           iA2;
    a[6] = T(-I) * iA2 *
           ((w2b * (one + n2) + w1b * w1b * w2) * d1 + (w2 * (one + n2) + w1 * w1 * w2b) * d1b -
            (w1b * (one + n1) + w1 * w2b * w2b) * d2 - (w1 * (one + n1) + w1b * w2 * w2) * d2b);
    a[7] = ((w2b * (one + n2) - w1b * w1b * w2) * d1 + (w1 * w1 * w2b - w2 * (one + n2)) * d1b +
            (w1b * (one + n1) - w1 * w2b * w2b) * d2 + (w1b * w2 * w2 - w1 * (one + n1)) * d2b) *
           iA2;
    if (basis == DiagonalBasis::gell_mann) {
        const T p1 = a[0], p2 = a[1];
        a[0] = p1 + p2;
        a[1] = T(std::sqrt(3.0)) * (p1 - p2);
    }
    return a;
}

inline std::vector<WJet> cp2_tangent(const CP2Solution& s, cd z, DiagonalBasis basis) {
    const auto j1 = jet_eval(s.w1, DomainPoint{z});
    const auto j2 = jet_eval(s.w2, DomainPoint{z});
    const WJet w1 = WJet::value(j1), w2 = WJet::value(j2);
    const WJet d1 = WJet::del(j1), d2 = WJet::del(j2);
    const WJet d1b = conj(WJet::delbar(j1)), d2b = conj(WJet::delbar(j2));  // ∂w̄ = conj(∂̄w)
    auto a = cp2_integrands<WJet>(w1, conj(w1), w2, conj(w2), d1, d1b, d2, d2b, basis);
    return {a.begin(), a.end()};
}

inline Immersion cp2_immersion(const CP2Solution& s, DiagonalBasis basis = DiagonalBasis::gell_mann) {
    Immersion imm;
    imm.name = "cp2_x8";
    imm.dim = 8;
    imm.tangent = [s, basis](cd z) { return cp2_tangent(s, z, basis); };
    imm.punctures = punctures_of(s);
    imm.puncture_distance = [s](cd z) { return puncture_distance(s, z); };
    return imm;
}

inline ImmersionPoint cp2_X8(const CP2Solution& s, const Contour& c, DiagonalBasis basis = DiagonalBasis::gell_mann) {
    return immerse(cp2_immersion(s, basis), c);
}

// Same integrand through the commutator L = [∂M, M]/A²: X^k = -tr(λ_k L).
inline std::vector<cd> cp2_tangent_commutator(const CP2Solution& s, cd z) {
    const Eigen::Matrix3cd L = current_commutator(s, DomainPoint{z}, Which::L).m;
    const cd I(0, 1);
    const double r3 = std::sqrt(3.0);
    return {-(L(0, 0) - L(1, 1)),
            -(L(0, 0) + L(1, 1) - 2.0 * L(2, 2)) / r3,
            -(I * L(0, 1) - I * L(1, 0)),
            -(L(0, 1) + L(1, 0)),
            -(I * L(0, 2) - I * L(2, 0)),
            -(L(0, 2) + L(2, 0)),
            -(I * L(1, 2) - I * L(2, 1)),
            -(L(1, 2) + L(2, 1))};
}

// ---- path independence ----------------------------------------------------------

inline double path_independence_check(const Immersion& imm, const Contour& c1, const Contour& c2,
                                      const QuadOptions& opt = {}) {
    if (std::abs(c1.start() - c2.start()) > 1e-12 || std::abs(c1.end() - c2.end()) > 1e-12)
        throw EndpointMismatch("contours must share both endpoints");
    auto x1 = immerse(imm, c1, opt), x2 = immerse(imm, c2, opt);
    double d = 0;
    for (size_t k = 0; k < x1.X.size(); ++k) d = std::max(d, std::abs(x1.X[k] - x2.X[k]));
    return d;
}

// Period of X around a closed loop (a lattice generator for multi-valued components).
inline std::vector<double> loop_period(const Immersion& imm, const Contour& loop, const QuadOptions& opt = {}) {
    return immerse(imm, loop, opt).X;
}

// ---- grids ------------------------------------------------------------------------

struct Grid {
    enum class Kind { polar, rect } kind = Kind::polar;
    double a0 = 0, a1 = 1;  // r or x range
    int n1 = 1;
    double b0 = 0, b1 = 1;  // y range (rect only)
    int n2 = 1;             // nphi or ny

    static Grid polar(double r0, double r1, int nr, int nphi) {
        return {Kind::polar, r0, r1, nr, 0, 2 * std::numbers::pi, nphi};
    }
    static Grid rect(double x0, double x1, int nx, double y0, double y1, int ny) {
        return {Kind::rect, x0, x1, nx, y0, y1, ny};
    }

    size_t size() const { return static_cast<size_t>(n1) * n2; }
    size_t index(int i, int j) const { return static_cast<size_t>(i) * n2 + j; }
    double u(int i) const { return n1 == 1 ? a0 : a0 + (a1 - a0) * i / (n1 - 1); }
    double v(int j) const {
        if (kind == Kind::polar) return 2 * std::numbers::pi * j / n2;
        return n2 == 1 ? b0 : b0 + (b1 - b0) * j / (n2 - 1);
    }
    double du() const { return n1 == 1 ? 0 : (a1 - a0) / (n1 - 1); }
    double dv() const { return kind == Kind::polar ? 2 * std::numbers::pi / n2 : (n2 == 1 ? 0 : (b1 - b0) / (n2 - 1)); }
    cd point(int i, int j) const { return kind == Kind::polar ? std::polar(u(i), v(j)) : cd(u(i), v(j)); }

    void validate() const {
        if (n1 < 1 || n2 < 1) throw SpecParse("grid sizes must be positive");
        if (kind == Kind::polar && !(a0 > 0 && a1 >= a0)) throw SpecParse("polar grid needs 0 < r0 <= r1");
        if (kind == Kind::rect && !(a1 >= a0 && b1 >= b0)) throw SpecParse("rectangular grid bounds reversed");
    }
};

// First and second partials of X in the Cartesian chart.
struct SurfacePartials {
    std::vector<double> Xx, Xy, Xxx, Xxy, Xyy;
};

inline SurfacePartials partials_from_tangent(const std::vector<WJet>& a) {
    SurfacePartials p;
    for (auto& t : a) {
        p.Xx.push_back(2 * t.v.real());
        p.Xy.push_back(-2 * t.v.imag());
        p.Xxx.push_back(2 * t.d.real() + 2 * t.db.real());
        p.Xyy.push_back(-2 * t.d.real() + 2 * t.db.real());
        p.Xxy.push_back(-2 * t.d.imag());
    }
    return p;
}

struct SurfaceGrid {
    Grid grid;
    size_t dim = 0;
    std::vector<std::vector<double>> X;         // row-major over (i, j)
    std::vector<double> quad_error;
    std::vector<double> imag_residue;
    std::vector<SurfacePartials> partials;      // exact partials when available
    cd basepoint{};

    cd z(size_t k) const { return grid.point(static_cast<int>(k / grid.n2), static_cast<int>(k % grid.n2)); }
};

struct GridOptions {
    std::optional<cd> basepoint;  // default: first grid point
    QuadOptions quad;
    unsigned threads = 0;         // 0: thread_count()
    bool with_partials = true;
};

namespace detail {

// Path from the basepoint to the first grid point of the polar grid.
inline Contour polar_lead_in(cd base, double r0) {
    Contour c{{base}};
    if (base == cd(0)) {
        c.line_to(cd(r0, 0));
        return c;
    }
    const double phi = std::arg(base);
    if (std::abs(std::abs(base) - r0) > 0) c.line_to(std::polar(r0, phi));
    if (phi != 0) c.then(Contour::arc(r0, phi, 0.0));
    return c;
}

}  // namespace detail

inline SurfaceGrid immerse_grid(const Immersion& imm, const Grid& g, const GridOptions& opt = {}) {
    g.validate();
    SurfaceGrid out;
    out.grid = g;
    out.dim = imm.dim;
    out.X.assign(g.size(), std::vector<double>(imm.dim, 0.0));
    out.quad_error.assign(g.size(), 0.0);
    out.imag_residue.assign(g.size(), 0.0);
    if (opt.with_partials) out.partials.resize(g.size());
    const cd start = g.point(0, 0);
    const cd base = opt.basepoint.value_or(start);
    out.basepoint = base;

    const bool polar = g.kind == Grid::Kind::polar;
    Contour lead = polar ? detail::polar_lead_in(base, g.a0) : Contour{{base, start}};
    if (lead.vertices.size() < 2 || lead.start() == lead.end()) lead = Contour{{start}};

    auto form = [&](cd z) { return imm.form(z); };
    auto add = [&](std::vector<cd>& acc, const IntegralResult& r) {
        for (size_t k = 0; k < acc.size(); ++k) acc[k] += r.value[k];
        return r.error;
    };

    // column j: walk to (row 0, column j), then step outward along the column
    parallel_for(
        static_cast<size_t>(g.n2),
        [&](size_t jj) {
            const int j = static_cast<int>(jj);
            std::vector<cd> acc(imm.dim, cd{});
            double err = 0;
            Contour c0 = lead;
            if (polar) {
                double phi = g.v(j);
                if (phi > std::numbers::pi) phi -= 2 * std::numbers::pi;
                if (phi != 0) c0.then(Contour::arc(g.a0, 0.0, phi));
            } else if (j > 0) {
                c0.line_to(g.point(0, j));
            }
            if (c0.vertices.size() >= 2) err += add(acc, integrate_form(form, c0, imm.dim, imm.punctures, opt.quad));
            for (int i = 0; i < g.n1; ++i) {
                if (i > 0) {
                    Contour seg = Contour::segment(g.point(i - 1, j), g.point(i, j));
                    err += add(acc, integrate_form(form, seg, imm.dim, imm.punctures, opt.quad));
                }
                const size_t k = g.index(i, j);
                IntegralResult r;
                r.value = acc;
                r.error = err;
                auto p = assemble(r);
                out.X[k] = p.X;
                out.quad_error[k] = p.quad_error;
                out.imag_residue[k] = p.imag_residue;
                if (opt.with_partials) out.partials[k] = partials_from_tangent(imm.tangent(g.point(i, j)));
            }
        },
        opt.threads ? opt.threads : thread_count());
    return out;
}

}  // namespace wsurf
