#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "dual.hpp"
#include "errors.hpp"
#include "expr.hpp"

namespace wsurf {

inline constexpr double kEpsPuncture = 1e-9;

struct DomainPoint {
    cd z{};

    static DomainPoint xy(double x, double y) { return {cd(x, y)}; }
    static DomainPoint polar(double r, double phi) { return {std::polar(r, phi)}; }

    double x() const { return z.real(); }
    double y() const { return z.imag(); }
    double r() const { return std::abs(z); }
    double phi() const { return std::arg(z); }  // (-pi, pi]
};

// Value plus Wirtinger derivatives through second order.
struct ComplexJet {
    cd val{}, dz{}, dzb{}, dzz{}, dzzb{}, dzbzb{};

    static ComplexJet from_dual(const Dual2<double>& d) {
        const cd I(0, 1);
        return {d.v,
                (d.x - I * d.y) / 2.0,
                (d.x + I * d.y) / 2.0,
                (d.xx - 2.0 * I * d.xy - d.yy) / 4.0,
                (d.xx + d.yy) / 4.0,
                (d.xx + 2.0 * I * d.xy - d.yy) / 4.0};
    }

    // jet of conj(f)
    ComplexJet conj() const {
        return {std::conj(val), std::conj(dzb), std::conj(dz),
                std::conj(dzbzb), std::conj(dzzb), std::conj(dzz)};
    }
};

struct FieldConfig {
    Expr expr;
    std::vector<cd> punctures;                 // declared excluded points
    double cut_angle = std::numbers::pi;       // sqrt cut ray
    std::string source;                        // DSL text when parsed

    FieldConfig() = default;
    FieldConfig(Expr e, std::vector<cd> p = {}) : expr(std::move(e)), punctures(std::move(p)) {}

    static FieldConfig parse(const std::string& text, std::vector<cd> p = {}) {
        FieldConfig f(parse_expr(text), std::move(p));
        f.source = text;
        return f;
    }

    EvalContext context() const { return EvalContext{cut_angle, kEpsPuncture}; }

    // Distance-like measure to the excluded set: declared points plus the zero
    // sets of every denominator (measured by |denominator|).
    double puncture_distance(cd z) const {
        double d = INFINITY;
        for (auto p : punctures) d = std::min(d, std::abs(z - p));
        EvalContext ctx = context();
        ctx.eps_puncture = 0.0;
        for (auto& den : denominators(expr)) {
            try {
                d = std::min(d, std::abs(eval_value(den, z, ctx)));
            } catch (const PunctureViolation&) {
                d = 0.0;
            } catch (const BranchCutAmbiguity&) {
            }
        }
        return d;
    }
};

inline void check_punctures(const FieldConfig& f, const DomainPoint& pt) {
    for (auto p : f.punctures)
        if (std::abs(pt.z - p) <= kEpsPuncture)
            throw PunctureViolation("point lies within 1e-9 of a declared puncture");
}

inline ComplexJet jet_eval(const FieldConfig& f, const DomainPoint& pt) {
    check_punctures(f, pt);
    return ComplexJet::from_dual(eval_dual<double>(f.expr, pt.x(), pt.y(), f.context()));
}

inline cd value_eval(const FieldConfig& f, const DomainPoint& pt) {
    check_punctures(f, pt);
    return eval_dual<double>(f.expr, pt.x(), pt.y(), f.context()).v;
}

// Finite-difference jet: 5-point stencils for the pure derivatives, a
// Richardson-combined cross stencil for f_xy.
inline ComplexJet jet_eval_fd(const FieldConfig& f, const DomainPoint& pt, double h) {
    if (!(h > 0)) throw StencilOutOfDomain("step must be positive");
    auto F = [&](double dx, double dy) {
        DomainPoint q = DomainPoint::xy(pt.x() + dx, pt.y() + dy);
        try {
            return value_eval(f, q);
        } catch (const PunctureViolation& e) {
            throw StencilOutOfDomain(std::string("stencil hits excluded set: ") + e.what());
        } catch (const BranchCutAmbiguity& e) {
            throw StencilOutOfDomain(std::string("stencil hits branch cut: ") + e.what());
        }
    };
    const cd f0 = F(0, 0);
    const cd xp1 = F(h, 0), xm1 = F(-h, 0), xp2 = F(2 * h, 0), xm2 = F(-2 * h, 0);
    const cd yp1 = F(0, h), ym1 = F(0, -h), yp2 = F(0, 2 * h), ym2 = F(0, -2 * h);
    const cd fx = (-xp2 + 8.0 * xp1 - 8.0 * xm1 + xm2) / (12 * h);
    const cd fy = (-yp2 + 8.0 * yp1 - 8.0 * ym1 + ym2) / (12 * h);
    const cd fxx = (-xp2 + 16.0 * xp1 - 30.0 * f0 + 16.0 * xm1 - xm2) / (12 * h * h);
    const cd fyy = (-yp2 + 16.0 * yp1 - 30.0 * f0 + 16.0 * ym1 - ym2) / (12 * h * h);
    auto cross = [&](double s) {
        return (F(s, s) - F(s, -s) - F(-s, s) + F(-s, -s)) / (4 * s * s);
    };
    const cd fxy = (4.0 * cross(h) - cross(2 * h)) / 3.0;
    Dual2<double> d{f0, fx, fy, fxx, fxy, fyy};
    return ComplexJet::from_dual(d);
}

// ---- Richardson-extrapolated finite differences of pointwise fields -------
// V needs V+V, V-V and V*double.

template <class F>
auto fd_partials(F&& field, cd z, double h) {
    using V = decltype(field(z));
    auto cdiff = [&](cd dir, double s) -> V { return (field(z + dir * s) - field(z - dir * s)) * (1.0 / (2 * s)); };
    auto rich = [&](cd dir) -> V { return (cdiff(dir, h) * 4.0 - cdiff(dir, 2 * h)) * (1.0 / 3.0); };
    return std::pair<V, V>{rich(cd(1, 0)), rich(cd(0, 1))};
}

// (∂F, ∂̄F) for complex-valued V (complex scalars or complex matrices).
template <class F>
auto fd_wirtinger(F&& field, cd z, double h) {
    auto [fx, fy] = fd_partials(field, z, h);
    const cd I(0, 1);
    using V = decltype(fx);
    V d = (fx - fy * I) * 0.5;
    V db = (fx + fy * I) * 0.5;
    return std::pair<V, V>{d, db};
}

// ∂∂̄F = (F_xx + F_yy)/4 with Richardson extrapolation.
template <class F>
auto fd_ddbar(F&& field, cd z, double h) {
    using V = decltype(field(z));
    const V f0 = field(z);
    auto lap = [&](double s) -> V {
        V acc = field(z + cd(s, 0)) + field(z - cd(s, 0)) + field(z + cd(0, s)) + field(z - cd(0, s)) - f0 * 4.0;
        return acc * (1.0 / (s * s));
    };
    return (lap(h) * 4.0 - lap(2 * h)) * (1.0 / 3.0) * 0.25;
}

}  // namespace wsurf
