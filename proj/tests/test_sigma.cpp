#include <gtest/gtest.h>

#include <wsurf/wsurf.hpp>

using namespace wsurf;

namespace {

const cd I(0, 1);

CP1Solution cp1(const char* w, std::vector<cd> p = {}) { return {FieldConfig::parse(w, p)}; }
CP2Solution cp2(const char* a, const char* b, std::vector<cd> p = {}) {
    return {FieldConfig::parse(a, p), FieldConfig::parse(b, p)};
}

// CP1 field equation evaluated from finite-difference jets
cd cp1_residual_fd(const CP1Solution& s, cd z) {
    auto j = jet_eval_fd(s.w, DomainPoint{z}, 1e-3);
    double A = 1 + std::norm(j.val);
    return j.dzzb - 2.0 * std::conj(j.val) * j.dz * j.dzb / A;
}

}  // namespace

TEST(CP1Residual, HolomorphicAndMeronVanish) {
    EXPECT_LE(std::abs(cp1_residual(cp1("z"), DomainPoint::xy(1, 2))), 1e-15);
    auto meron = builtin("meron(1)");
    EXPECT_LE(std::abs(cp1_residual(*meron.cp1, DomainPoint::xy(1, 1))), 1e-14);
    for (double r : {0.2, 0.9, 2.5})
        for (double phi : {0.3, 2.0, -1.4})
            EXPECT_LE(std::abs(cp1_residual(*builtin("meron(3/2)").cp1, DomainPoint::polar(r, phi))), 1e-11);
}

TEST(CP1Residual, NonSolutionMatchesFiniteDifferenceOracle) {
    auto s = cp1("z + zb");
    cd r = cp1_residual(s, DomainPoint::xy(1, 0));
    EXPECT_GT(std::abs(r), 0.1);
    EXPECT_LE(std::abs(r - cp1_residual_fd(s, 1.0)), 1e-6);
}

TEST(CP2Residual, ExampleSolutionsVanish) {
    auto [a, b] = cp2_residual(cp2("z^2", "sqrt(2)*z"), DomainPoint::xy(0.5, 0));
    EXPECT_LE(std::abs(a) + std::abs(b), 1e-14);
    auto [c, d] = cp2_residual(*builtin("example3").cp2, DomainPoint::xy(0, 0.3));
    EXPECT_LE(std::abs(c) + std::abs(d), 1e-13);
}

TEST(CP2Residual, NonSolutionMatchesFiniteDifferenceOracle) {
    auto s = cp2("z*zb", "1");
    auto [r1, r2] = cp2_residual(s, DomainPoint::xy(1, 0));
    auto fd = detail::cp2_residual_jets(jet_eval_fd(s.w1, DomainPoint::xy(1, 0), 1e-3),
                                        jet_eval_fd(s.w2, DomainPoint::xy(1, 0), 1e-3));
    EXPECT_GT(std::abs(r1), 0.1);
    EXPECT_LE(std::abs(r1 - fd.first), 1e-6);
    EXPECT_LE(std::abs(r2 - fd.second), 1e-6);
}

TEST(CP2Residual, SwapSymmetryIsExact) {
    auto s = cp2("z*zb + 2*z", "(1+zb)/(3+z)");
    CP2Solution t{s.w2, s.w1};
    for (cd z : {cd(0.3, 0.1), cd(-0.8, 1.2), cd(1.5, -0.4)}) {
        auto [a, b] = cp2_residual(s, DomainPoint{z});
        auto [c, d] = cp2_residual(t, DomainPoint{z});
        EXPECT_EQ(a, d);
        EXPECT_EQ(b, c);
    }
}

TEST(CP2Residual, CP1LimitVanishesTogether) {
    for (const char* name : {"meron(1)", "meron(1/2)"}) {
        auto s = builtin(name);
        auto e = s.as_cp2();
        for (cd z : {cd(0.4, 0.3), cd(-1.2, 0.7)}) {
            EXPECT_LE(std::abs(cp1_residual(*s.cp1, DomainPoint{z})), 1e-12);
            auto [a, b] = cp2_residual(e, DomainPoint{z});
            EXPECT_LE(std::abs(a) + std::abs(b), 1e-12);
        }
    }
    // and a non-solution stays a non-solution in the limit
    auto bad = Solution{SolutionSpec{}, cp1("z*zb"), std::nullopt};
    auto [a, b] = cp2_residual(bad.as_cp2(), DomainPoint::xy(0.7, 0.2));
    EXPECT_GT(std::abs(a), 1e-3);
    EXPECT_GT(std::abs(cp1_residual(*bad.cp1, DomainPoint::xy(0.7, 0.2))), 1e-3);
}

TEST(InvariantJ, CP1Values) {
    EXPECT_LE(std::abs(cp1_invariant_J(cp1("z^3"), DomainPoint::xy(0.4, -0.2))), 1e-15);
    // display normalization ∂w∂w̄/A²; the meron value is -β²/(4z²)
    for (int twice : {1, 2, 3}) {
        auto s = make_solution(meron_spec(twice));
        const double b = twice / 2.0;
        for (cd z : {cd(1, 0), cd(0.6, -0.9)})
            EXPECT_LE(std::abs(cp1_invariant_J(*s.cp1, DomainPoint{z}) + b * b / (4.0 * z * z)), 1e-13);
    }
    auto s = cp1("z/zb");
    auto j = jet_eval_fd(s.w, DomainPoint::xy(1, 1), 1e-3);
    cd oracle = j.dz * std::conj(j.dzb) / std::pow(1 + std::norm(j.val), 2);
    EXPECT_LE(std::abs(cp1_invariant_J(s, DomainPoint::xy(1, 1)) - oracle), 1e-8);
}

TEST(InvariantJ, CP2ValuesAndTermByTermOracle) {
    EXPECT_LE(std::abs(cp2_invariant_J(cp2("z", "1"), DomainPoint::xy(0.3, 0.9))), 1e-15);
    EXPECT_LE(std::abs(cp2_invariant_J(cp2("z^2", "sqrt(2)*z"), DomainPoint::xy(-1.1, 0.4))), 1e-15);
    auto s = cp2("(z+2*zb)/(3+z*zb)", "z*zb^2 - 1");
    for (cd z : {cd(0.1, 0.2), cd(0.7, -0.3), cd(-0.5, 0.5), cd(1.2, 0.9), cd(-1.4, -0.6)}) {
        auto a = jet_eval_fd(s.w1, DomainPoint{z}, 1e-3), b = jet_eval_fd(s.w2, DomainPoint{z}, 1e-3);
        double A = 1 + std::norm(a.val) + std::norm(b.val);
        cd dwb1 = std::conj(a.dzb), dwb2 = std::conj(b.dzb);
        cd t1 = a.dz * dwb1;
        cd t2 = b.dz * dwb2;
        cd t3 = (std::conj(a.val) * dwb2 - std::conj(b.val) * dwb1) * (a.val * b.dz - b.val * a.dz);
        EXPECT_LE(std::abs(cp2_invariant_J(s, DomainPoint{z}) - (t1 + t2 + t3) / (A * A)), 1e-8);
    }
}

TEST(InvariantJ, DbarVanishesOnSolutions) {
    auto m = builtin("meron(1)");
    auto e3 = builtin("example3");
    auto v = builtin("veronese_mixed");
    for (cd z : {cd(0.3, 0.4), cd(1.7, -0.2), cd(-0.6, -1.1)}) {
        EXPECT_LE(dbar_J_residual(*m.cp1, DomainPoint{z}), 1e-6);
        EXPECT_LE(dbar_J_residual(*e3.cp2, DomainPoint{z}), 1e-6);
        EXPECT_LE(dbar_J_residual(*v.cp2, DomainPoint{z}), 1e-6);
    }
    EXPECT_GT(dbar_J_residual(cp1("z*zb"), DomainPoint::xy(0.5, 0.2)), 1e-3);
}

TEST(Energy, DensityValues) {
    EXPECT_EQ(energy_density(cp1("2+3i"), DomainPoint::xy(0.4, 0.1)), 0.0);
    EXPECT_NEAR(energy_density(cp1("z"), DomainPoint::xy(0, 0)), 1.0, 1e-15);
    // meron β: (|∂w|² + |∂̄w|²)/A² = 2β²/(4r²)
    auto m = builtin("meron(1/2)");
    EXPECT_NEAR(energy_density(*m.cp1, DomainPoint::polar(1.0, 0.7)), 0.125, 1e-8);
    // printed integrand is complex in general and vanishes for holomorphic w
    EXPECT_EQ(energy_density_printed(cp1("z^2"), DomainPoint::xy(0.3, 0.3)), cd(0));
    cd pm = energy_density_printed(*m.cp1, DomainPoint::polar(1.0, 0.7));
    EXPECT_NEAR(std::abs(pm), 0.125, 1e-12);
}

TEST(Energy, AnnulusTotal) {
    // w = z: density (1+r²)^-2, total over r ≤ R is πR²/(1+R²)
    double E = energy_total(cp1("z"), 0.0, 2.0, 400, 64);
    EXPECT_NEAR(E, std::numbers::pi * 4 / 5, 1e-4);
    // meron: 2π · β²/2 · ln(r1/r0)
    double Em = energy_total(*builtin("meron(1)").cp1, 0.5, 2.0, 200, 32);
    EXPECT_NEAR(Em, std::numbers::pi * std::log(4.0), 1e-3);
}

TEST(Currents, TracelessAndAntiHermitianPair) {
    std::vector<Solution> sols{builtin("meron(1)"), builtin("example1"), builtin("example3"),
                               builtin("veronese_mixed"), builtin("wronskian_mixed")};
    for (auto& s : sols)
        for (cd z : {cd(0.35, 0.25), cd(-0.7, 0.6), cd(1.9, -0.3)}) {
            SCOPED_TRACE(s.spec.name);
            DomainPoint pt{z};
            for (auto src : {CurrentSource::printed, CurrentSource::commutator}) {
                auto K = s.is_cp1() ? current(*s.cp1, pt, Which::K, src) : current(*s.cp2, pt, Which::K, src);
                auto L = s.is_cp1() ? current(*s.cp1, pt, Which::L, src) : current(*s.cp2, pt, Which::L, src);
                EXPECT_LE(std::abs(K.m.trace()), 1e-10) << s.spec.name;
                EXPECT_LE(std::abs(L.m.trace()), 1e-10) << s.spec.name;
                if (src == CurrentSource::commutator) {
                    EXPECT_LE((L.m + K.m.adjoint()).norm(), 1e-8 * std::max(1.0, K.m.norm())) << s.spec.name;
                }
            }
        }
}

TEST(Currents, ConstantFieldGivesZero) {
    auto K = current(cp1("0.3+2i"), DomainPoint::xy(0.5, 0.5), Which::K);
    EXPECT_EQ(K.m.norm(), 0.0);
    auto K2 = current(cp2("1", "2i"), DomainPoint::xy(0.5, 0.5), Which::K, CurrentSource::commutator);
    EXPECT_EQ(K2.m.norm(), 0.0);
}

TEST(Currents, CP1PrintedFormulaEntrywise) {
    // holomorphic w: ∂̄w = 0, so every K entry carries the factor ∂̄w̄ = conj(∂w)
    auto s = cp1("z^2 + 1");
    DomainPoint pt = DomainPoint::xy(0.4, -0.7);
    auto K = current(s, pt, Which::K).m;
    cd w = value_eval(s.w, pt), Dwb = std::conj(2.0 * pt.z);
    double A = 1 + std::norm(w);
    EXPECT_LE(std::abs(K(0, 0) - (-w * Dwb) / (A * A)), 1e-14);
    EXPECT_LE(std::abs(K(0, 1) - Dwb / (A * A)), 1e-14);
    EXPECT_LE(std::abs(K(1, 0) - (-w * w * Dwb) / (A * A)), 1e-14);
    EXPECT_LE(std::abs(K(1, 1) - (w * Dwb) / (A * A)), 1e-14);
}

TEST(Currents, CP2Example1CommutatorOracle) {
    // [∂̄M, M]/A² built independently from the projector entries
    auto s = builtin("example1");
    DomainPoint pt = DomainPoint::xy(1, 0);
    auto K = current(*s.cp2, pt, Which::K, CurrentSource::commutator).m;
    cd a = 1.0, b = 1.0;
    double A = 1 + std::norm(a) + std::norm(b);
    Eigen::Matrix3cd M;
    M << 1.0, a, b, std::conj(a), std::norm(a), std::conj(a) * b, std::conj(b), a * std::conj(b), std::norm(b);
    Eigen::Matrix3cd dM = Eigen::Matrix3cd::Zero();  // ∂̄ of M: only w̄₁ = z̄ moves, ∂̄w̄₁ = 1
    dM(1, 0) = 1.0;
    dM(1, 1) = a;
    dM(1, 2) = b;
    Eigen::Matrix3cd oracle = (dM * M - M * dM) / (A * A);
    EXPECT_LE((K - oracle).norm(), 1e-14);
}

TEST(Currents, PrintedVersusCommutatorItemized) {
    // the commutator is ground truth; printed slips are itemized, not hidden
    auto s = builtin("example2");
    auto pts = sample_points(s, Grid::polar(0.1, 2, 6, 8));
    auto d = current_discrepancies(*s.cp2, pts);
    ASSERT_EQ(d.size(), 2u);
    EXPECT_EQ(d[0].which, Which::K);
    EXPECT_EQ(d[0].row, 1);
    EXPECT_EQ(d[0].col, 0);
    EXPECT_EQ(d[1].row, 2);
    EXPECT_EQ(d[1].col, 1);
    // every L entry and the other seven K entries agree to 1e-8
    auto m = builtin("meron(1)");
    auto dm = current_discrepancies(*m.cp1, sample_points(m, Grid::polar(0.5, 2, 4, 6)));
    for (auto& e : dm) {
        EXPECT_EQ(e.row, e.col);                // only diagonal entries of K
        EXPECT_LE(e.sign_flip_diff, 1e-12);     // and they are exactly negated
    }
}

TEST(Conservation, SolutionsConserve) {
    EXPECT_LE(conservation_residual(*builtin("meron(1)").cp1, DomainPoint::xy(1, 0.5)), 1e-6);
    EXPECT_LE(conservation_residual(*builtin("example3").cp2, DomainPoint::xy(0.2, 0.2)), 1e-6);
    EXPECT_LE(conservation_residual(*builtin("wronskian_mixed").cp2, DomainPoint::xy(0.6, -0.4)), 1e-6);
}

TEST(Conservation, NonSolutionFails) {
    auto s = cp1("z*zb");
    for (cd z : {cd(0.5, 0.3), cd(-1.1, 0.8)}) EXPECT_GT(conservation_residual(s, DomainPoint{z}), 1e-3);
    EXPECT_GT(conservation_residual(cp2("z*zb", "1"), DomainPoint::xy(0.5, 0.3)), 1e-3);
}
