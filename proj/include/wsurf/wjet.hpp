#pragma once

// First-order Wirtinger jet (value, ∂, ∂̄), used to push derivatives through
// algebraic formulas built from second-order field jets.

#include <complex>

#include "dual.hpp"
#include "field.hpp"

namespace wsurf {

struct WJet {
    cd v{}, d{}, db{};

    WJet() = default;
    WJet(cd c) : v(c) {}
    WJet(double c) : v(c) {}
    WJet(cd v_, cd d_, cd db_) : v(v_), d(d_), db(db_) {}

    static WJet value(const ComplexJet& j) { return {j.val, j.dz, j.dzb}; }
    static WJet del(const ComplexJet& j) { return {j.dz, j.dzz, j.dzzb}; }      // jet of ∂f
    static WJet delbar(const ComplexJet& j) { return {j.dzb, j.dzzb, j.dzbzb}; }  // jet of ∂̄f

    WJet& operator+=(const WJet& o) { v += o.v; d += o.d; db += o.db; return *this; }
    WJet& operator-=(const WJet& o) { v -= o.v; d -= o.d; db -= o.db; return *this; }
};

inline WJet operator+(WJet a, const WJet& b) { return a += b; }
inline WJet operator-(WJet a, const WJet& b) { return a -= b; }
inline WJet operator-(const WJet& a) { return {-a.v, -a.d, -a.db}; }
inline WJet operator*(const WJet& a, const WJet& b) {
    return {a.v * b.v, a.d * b.v + a.v * b.d, a.db * b.v + a.v * b.db};
}
inline WJet operator/(const WJet& a, const WJet& b) {
    cd inv = 1.0 / b.v;
    return {a.v * inv, (a.d * b.v - a.v * b.d) * inv * inv, (a.db * b.v - a.v * b.db) * inv * inv};
}
inline WJet conj(const WJet& a) { return {std::conj(a.v), std::conj(a.db), std::conj(a.d)}; }
inline WJet abs2(const WJet& a) { return a * conj(a); }

inline WJet sqrt(const WJet& a, double cut_angle = std::numbers::pi) {
    if (a.v == cd(0)) throw DegenerateData("square root of a vanishing radicand");
    cd s = branch_sqrt(a.v, cut_angle);
    return {s, a.d / (2.0 * s), a.db / (2.0 * s)};
}

}  // namespace wsurf
