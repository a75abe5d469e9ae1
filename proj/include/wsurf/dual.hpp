#pragma once

// Second-order forward-mode dual numbers over the real pair (x, y).
// Each value carries f, f_x, f_y, f_xx, f_xy, f_yy with complex entries.

#include <cmath>
#include <complex>
#include <numbers>

#include "errors.hpp"

namespace wsurf {

template <class T>
struct Dual2 {
    using C = std::complex<T>;
    C v{}, x{}, y{}, xx{}, xy{}, yy{};

    static Dual2 constant(C c) { return Dual2{c}; }
    static Dual2 var_z(T px, T py) { return Dual2{C(px, py), C(1), C(0, 1)}; }
    static Dual2 var_zb(T px, T py) { return Dual2{C(px, -py), C(1), C(0, -1)}; }

    // Apply an analytic scalar function given h(v), h'(v), h''(v).
    Dual2 chain(C h0, C h1, C h2) const {
        Dual2 r;
        r.v = h0;
        r.x = h1 * x;
        r.y = h1 * y;
        r.xx = h2 * x * x + h1 * xx;
        r.xy = h2 * x * y + h1 * xy;
        r.yy = h2 * y * y + h1 * yy;
        return r;
    }

    Dual2& operator+=(const Dual2& o) {
        v += o.v; x += o.x; y += o.y; xx += o.xx; xy += o.xy; yy += o.yy;
        return *this;
    }
    Dual2& operator-=(const Dual2& o) {
        v -= o.v; x -= o.x; y -= o.y; xx -= o.xx; xy -= o.xy; yy -= o.yy;
        return *this;
    }
};

template <class T> Dual2<T> operator+(Dual2<T> a, const Dual2<T>& b) { return a += b; }
template <class T> Dual2<T> operator-(Dual2<T> a, const Dual2<T>& b) { return a -= b; }
template <class T> Dual2<T> operator-(const Dual2<T>& a) { return Dual2<T>{} - a; }

template <class T>
Dual2<T> operator*(const Dual2<T>& a, const Dual2<T>& b) {
    Dual2<T> r;
    r.v = a.v * b.v;
    r.x = a.x * b.v + a.v * b.x;
    r.y = a.y * b.v + a.v * b.y;
    r.xx = a.xx * b.v + T(2) * a.x * b.x + a.v * b.xx;
    r.xy = a.xy * b.v + a.x * b.y + a.y * b.x + a.v * b.xy;
    r.yy = a.yy * b.v + T(2) * a.y * b.y + a.v * b.yy;
    return r;
}

template <class T>
Dual2<T> reciprocal(const Dual2<T>& a) {
    auto inv = T(1) / a.v;
    return a.chain(inv, -inv * inv, T(2) * inv * inv * inv);
}

template <class T> Dual2<T> operator/(const Dual2<T>& a, const Dual2<T>& b) { return a * reciprocal(b); }

template <class T>
Dual2<T> conj(const Dual2<T>& a) {
    return {std::conj(a.v), std::conj(a.x), std::conj(a.y),
            std::conj(a.xx), std::conj(a.xy), std::conj(a.yy)};
}

// Square root with the cut along the ray arg(u) = cut_angle (default: negative
// real axis, i.e. the principal branch). Exactly-on-cut arguments are rejected.
template <class T>
std::complex<T> branch_sqrt(std::complex<T> u, T cut_angle = std::numbers::pi_v<T>) {
    using C = std::complex<T>;
    const T pi = std::numbers::pi_v<T>;
    C rot;
    C back;
    if (cut_angle == pi) {
        rot = u;
        back = C(1);
    } else if (cut_angle == T(0)) {
        rot = -u;
        back = C(0, 1);
    } else {
        rot = u * std::polar(T(1), pi - cut_angle);
        back = std::polar(T(1), (cut_angle - pi) / 2);
    }
    if (rot.imag() == T(0) && rot.real() < T(0))
        throw BranchCutAmbiguity("square-root radicand lies on the declared cut ray");
    return back * std::sqrt(rot);
}

// u^(n/2) for integer n, with half-integer powers routed through branch_sqrt.
template <class T>
Dual2<T> half_pow(const Dual2<T>& a, int twice_exp, T cut_angle) {
    using C = std::complex<T>;
    if (twice_exp == 0) return Dual2<T>::constant(C(1));
    if (twice_exp % 2 == 0) {
        int n = twice_exp / 2;
        if (n > 0) {
            // exact integer power, valid at a.v = 0
            C pw[3] = {C(1), C(0), C(0)};  // v^n, v^(n-1), v^(n-2)
            C acc = C(1);
            for (int k = 0; k <= n; ++k) {
                if (k == n - 2) pw[2] = acc;
                if (k == n - 1) pw[1] = acc;
                if (k == n) pw[0] = acc;
                acc *= a.v;
            }
            return a.chain(pw[0], T(n) * pw[1], T(n) * T(n - 1) * pw[2]);
        }
        Dual2<T> pos = half_pow(a, -twice_exp, cut_angle);
        return reciprocal(pos);
    }
    if (a.v == C(0)) throw PunctureViolation("fractional power at its branch point");
    const T q = T(twice_exp) / T(2);
    C s = branch_sqrt(a.v, cut_angle);
    C h0 = C(1);
    int m = twice_exp < 0 ? -twice_exp : twice_exp;
    for (int k = 0; k < m; ++k) h0 *= s;
    if (twice_exp < 0) h0 = C(1) / h0;
    C h1 = q * h0 / a.v;
    C h2 = q * (q - T(1)) * h0 / (a.v * a.v);
    return a.chain(h0, h1, h2);
}

}  // namespace wsurf
