#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "errors.hpp"
#include "expr.hpp"

namespace wsurf {

// Polyline path in the z-plane; vertices.front() is the basepoint.
struct Contour {
    std::vector<cd> vertices;

    static Contour segment(cd a, cd b) { return {{a, b}}; }

    // Circular arc about 0 drawn as chords of at most max_step radians.
    static Contour arc(double r, double phi0, double phi1, double max_step = std::numbers::pi / 32) {
        int n = std::max(1, static_cast<int>(std::ceil(std::abs(phi1 - phi0) / max_step)));
        Contour c;
        for (int k = 0; k <= n; ++k) c.vertices.push_back(std::polar(r, phi0 + (phi1 - phi0) * k / n));
        return c;
    }

    cd start() const { return vertices.front(); }
    cd end() const { return vertices.back(); }

    Contour& then(const Contour& o) {
        for (size_t k = 0; k < o.vertices.size(); ++k) {
            if (k == 0 && !vertices.empty() && vertices.back() == o.vertices[0]) continue;
            vertices.push_back(o.vertices[k]);
        }
        return *this;
    }
    Contour& line_to(cd p) {
        vertices.push_back(p);
        return *this;
    }

    // Reverse path, for closing loops.
    Contour reversed() const { return {std::vector<cd>(vertices.rbegin(), vertices.rend())}; }

    // Winding number about q (requires a closed contour).
    double winding(cd q) const {
        double acc = 0;
        for (size_t k = 1; k < vertices.size(); ++k) acc += std::arg((vertices[k] - q) / (vertices[k - 1] - q));
        return acc / (2 * std::numbers::pi);
    }
};

inline double point_segment_distance(cd q, cd a, cd b) {
    cd ab = b - a;
    double L2 = std::norm(ab);
    if (L2 == 0) return std::abs(q - a);
    double t = std::clamp(((q - a) * std::conj(ab)).real() / L2, 0.0, 1.0);
    return std::abs(q - (a + t * ab));
}

// A 1-form valued in C^n: Σ dz[k] dz + dzb[k] dz̄.
struct Form {
    std::vector<cd> dz, dzb;
};

struct IntegralResult {
    std::vector<cd> value;
    double error = 0;   // accumulated |K15 - G7| estimate
    int intervals = 0;
};

struct QuadOptions {
    double tol = 1e-10;
    int max_depth = 30;
};

namespace detail {

inline constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                   0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                   0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                   0.207784955007898467600689403773245, 0.0};
inline constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                   0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                   0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                   0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                  0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// One G7-K15 pass of h over [a, b]; h returns a vector of n complex values.
template <class H>
double gk15(H&& h, double a, double b, size_t n, std::vector<cd>& kron) {
    const double c = 0.5 * (a + b), half = 0.5 * (b - a);
    std::vector<cd> gauss(n, cd{});
    kron.assign(n, cd{});
    auto add = [&](double t, int i) {
        auto f = h(c + half * t);
        for (size_t k = 0; k < n; ++k) {
            kron[k] += kWgk[i] * f[k];
            if (i % 2 == 1) gauss[k] += kWg[i / 2] * f[k];
        }
    };
    add(0.0, 7);
    for (int i = 0; i < 7; ++i) {
        add(kXgk[i], i);
        add(-kXgk[i], i);
    }
    double err = 0;
    for (size_t k = 0; k < n; ++k) {
        kron[k] *= half;
        gauss[k] *= half;
        err = std::max(err, std::abs(kron[k] - gauss[k]));
    }
    return err;
}

}  // namespace detail

// Integrate over [0,1] with adaptive bisection. The local tolerance scales with
// the interval length so the total stays within tol.
template <class H>
void integrate_unit(H&& h, size_t n, const QuadOptions& opt, IntegralResult& out) {
    struct Item {
        double a, b;
        int depth;
    };
    std::vector<Item> stack{{0.0, 1.0, 0}};
    std::vector<cd> kron;
    while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        double err = detail::gk15(h, it.a, it.b, n, kron);
        double local = opt.tol * (it.b - it.a);
        if (err <= local || err < 1e-15) {
            for (size_t k = 0; k < n; ++k) out.value[k] += kron[k];
            out.error += err;
            ++out.intervals;
            continue;
        }
        if (it.depth >= opt.max_depth)
            throw ToleranceNotMet("adaptive quadrature did not reach the requested tolerance");
        double m = 0.5 * (it.a + it.b);
        // right half first so the left half is processed first (fixed summation order)
        stack.push_back({m, it.b, it.depth + 1});
        stack.push_back({it.a, m, it.depth + 1});
    }
}

// ∫_C form(z), form returning a Form with n components.
template <class F>
IntegralResult integrate_form(F&& form, const Contour& c, size_t n, const std::vector<cd>& punctures,
                              const QuadOptions& opt = {}) {
    IntegralResult out;
    out.value.assign(n, cd{});
    for (size_t s = 1; s < c.vertices.size(); ++s) {
        const cd z0 = c.vertices[s - 1], z1 = c.vertices[s];
        for (auto p : punctures)
            if (point_segment_distance(p, z0, z1) <= 1e-9) throw PunctureOnPath("integration path meets a puncture");
        const cd delta = z1 - z0;
        if (delta == cd(0)) continue;
        auto h = [&](double t) {
            Form f = form(z0 + t * delta);
            std::vector<cd> v(n);
            for (size_t k = 0; k < n; ++k) v[k] = f.dz[k] * delta + f.dzb[k] * std::conj(delta);
            return v;
        };
        integrate_unit(h, n, opt, out);
    }
    return out;
}

}  // namespace wsurf
