#include <gtest/gtest.h>

#include <wsurf/wsurf.hpp>

using namespace wsurf;

namespace {

const cd I(0, 1);

void expect_near(cd a, cd b, double tol) {
    EXPECT_LE(std::abs(a - b), tol) << "got " << a << " expected " << b;
}

void expect_jet_near(const ComplexJet& a, const ComplexJet& b, double tol, bool second = true) {
    expect_near(a.val, b.val, tol);
    expect_near(a.dz, b.dz, tol);
    expect_near(a.dzb, b.dzb, tol);
    if (second) {
        expect_near(a.dzz, b.dzz, tol);
        expect_near(a.dzzb, b.dzzb, tol);
        expect_near(a.dzbzb, b.dzbzb, tol);
    }
}

}  // namespace

TEST(JetEval, PolynomialSquare) {
    auto j = jet_eval(FieldConfig::parse("z^2"), DomainPoint::xy(1, 1));
    expect_near(j.val, 2.0 * I, 1e-15);
    expect_near(j.dz, cd(2, 2), 1e-15);
    expect_near(j.dzb, 0.0, 1e-15);
    expect_near(j.dzz, 2.0, 1e-15);
    expect_near(j.dzzb, 0.0, 1e-15);
}

TEST(JetEval, QuotientZOverZbar) {
    auto j = jet_eval(FieldConfig::parse("z/zb"), DomainPoint::xy(2, 0));
    expect_near(j.val, 1.0, 1e-15);
    expect_near(j.dz, 0.5, 1e-15);
    expect_near(j.dzb, -0.5, 1e-15);
}

TEST(JetEval, HalfPowerAgainstFiniteDifferences) {
    // the radicand z/zb = -1 at z = i sits on the principal cut; move the cut to the positive axis
    auto f = FieldConfig::parse("(z/zb)^(1/2)");
    EXPECT_THROW(jet_eval(f, DomainPoint::xy(0, 1)), BranchCutAmbiguity);
    f.cut_angle = 0.0;
    auto j = jet_eval(f, DomainPoint::xy(0, 1));
    auto fd = jet_eval_fd(f, DomainPoint::xy(0, 1), 1e-5);
    expect_near(j.val, fd.val, 1e-7);
    expect_near(j.dz, fd.dz, 1e-7);
    expect_near(j.dzb, fd.dzb, 1e-7);
    // (z/zb)^{1/2} = z/|z| up to sign on the unit circle
    EXPECT_NEAR(std::abs(j.val), 1.0, 1e-14);
    EXPECT_NEAR(std::abs(std::abs(j.val - I) * std::abs(j.val + I)), 0.0, 1e-14);
}

TEST(JetEvalFd, LinearField) {
    auto f = FieldConfig::parse("z");
    for (cd z : {cd(0.2, 0.3), cd(-1.5, 2.0), cd(3, -1)}) {
        auto j = jet_eval_fd(f, DomainPoint{z}, 1e-4);
        expect_near(j.dz, 1.0, 1e-8);
        expect_near(j.dzb, 0.0, 1e-8);
    }
}

TEST(JetEvalFd, AntiholomorphicField) {
    auto j = jet_eval_fd(FieldConfig::parse("zb"), DomainPoint::xy(1, 0), 1e-4);
    expect_near(j.dzb, 1.0, 1e-8);
    expect_near(j.dz, 0.0, 1e-8);
}

TEST(JetEvalFd, MixedRationalMatchesAutodiff) {
    auto f = FieldConfig::parse("(z+zb)/(1-z*zb)");
    DomainPoint pt = DomainPoint::xy(0.3, 0.1);
    expect_jet_near(jet_eval_fd(f, pt, 1e-3), jet_eval(f, pt), 1e-6);
}

TEST(JetEvalFd, AgreementOnFixedPointSet) {
    const char* exprs[] = {"z^3*zb - 2*zb", "(1+z)/(2+z*zb)", "sqrt(z+3)", "conj(z^2)*z", "(z/zb)^(3/2)"};
    const cd pts[] = {{0.4, 0.2}, {-0.7, 0.9}, {1.3, -0.6}};
    for (auto e : exprs) {
        auto f = FieldConfig::parse(e);
        for (auto z : pts) expect_jet_near(jet_eval_fd(f, DomainPoint{z}, 1e-3), jet_eval(f, DomainPoint{z}), 1e-6, true);
        for (auto z : pts) expect_jet_near(jet_eval_fd(f, DomainPoint{z}, 1e-5), jet_eval(f, DomainPoint{z}), 1e-6, false);
    }
}

TEST(JetEval, HolomorphicExpressionsHaveZeroDbar) {
    const char* exprs[] = {"z^5 - 3*z + 2i", "1/(z-2)", "sqrt(z+4)", "(z^2+1)/(z^3-5)^2", "z^(-3/2)"};
    const cd pts[] = {{0.5, 0.5}, {-1.2, 0.3}, {2.2, -1.9}};
    for (auto e : exprs)
        for (auto z : pts) {
            auto j = jet_eval(FieldConfig::parse(e), DomainPoint{z});
            EXPECT_LE(std::abs(j.dzb), 1e-12) << e;
            EXPECT_LE(std::abs(j.dzzb), 1e-12) << e;
            EXPECT_LE(std::abs(j.dzbzb), 1e-12) << e;
        }
}

TEST(JetEval, ConjSymmetry) {
    auto f = FieldConfig::parse("z^2*zb + 3i*z - zb^3/(2+z)");
    auto g = FieldConfig::parse("conj(z^2*zb + 3i*z - zb^3/(2+z))");
    for (cd z : {cd(0.3, 0.4), cd(-1.1, 0.2)}) {
        auto jf = jet_eval(f, DomainPoint{z});
        auto jg = jet_eval(g, DomainPoint{z});
        expect_jet_near(jg, jf.conj(), 1e-13);
    }
}

TEST(JetEval, RealFieldSymmetry) {
    auto j = jet_eval(FieldConfig::parse("z*zb/(1+z*zb)"), DomainPoint::xy(0.7, -0.4));
    EXPECT_NEAR(j.val.imag(), 0.0, 1e-15);
    expect_near(j.dzb, std::conj(j.dz), 1e-15);
}

TEST(Punctures, DeclaredPointsAreRejected) {
    auto f = FieldConfig::parse("z", {cd(1, 1)});
    EXPECT_THROW(jet_eval(f, DomainPoint::xy(1, 1)), PunctureViolation);
    EXPECT_THROW(jet_eval(f, DomainPoint{cd(1, 1) + 5e-10}), PunctureViolation);
    EXPECT_NO_THROW(jet_eval(f, DomainPoint{cd(1, 1) + 1e-8}));
}

TEST(Punctures, DenominatorZeroSetsAreInferred) {
    auto f = FieldConfig::parse("1/(1-z*zb)");
    EXPECT_THROW(jet_eval(f, DomainPoint::polar(1.0, 0.3)), PunctureViolation);
    EXPECT_THROW(jet_eval(FieldConfig::parse("z^(-2)"), DomainPoint::xy(0, 0)), PunctureViolation);
    EXPECT_NEAR(f.puncture_distance(cd(0.5, 0)), 0.75, 1e-15);
    EXPECT_NEAR(FieldConfig::parse("z", {cd(0, 0)}).puncture_distance(cd(0, 0.25)), 0.25, 1e-15);
}

TEST(Punctures, StencilLeavingDomain) {
    auto f = FieldConfig::parse("1/z");
    EXPECT_THROW(jet_eval_fd(f, DomainPoint::xy(1e-5, 0), 1e-5), StencilOutOfDomain);
    EXPECT_THROW(jet_eval_fd(f, DomainPoint::xy(1, 0), -1.0), StencilOutOfDomain);
}

TEST(Parser, ComplexLiteralsAndPrecedence) {
    expect_near(eval_value(parse_expr("2+3i"), 0.0), cd(2, 3), 0);
    expect_near(eval_value(parse_expr("i*i"), 0.0), -1.0, 0);
    expect_near(eval_value(parse_expr("-2^2"), 0.0), -4.0, 0);
    expect_near(eval_value(parse_expr("2*3^2"), 0.0), 18.0, 0);
    expect_near(eval_value(parse_expr("z - zb"), cd(1, 2)), cd(0, 4), 0);
    expect_near(eval_value(parse_expr("1.5e-1*z"), cd(2, 0)), 0.3, 1e-16);
    expect_near(eval_value(parse_expr("4^1.5"), 0.0), 8.0, 1e-15);
    expect_near(eval_value(parse_expr("4^(-1/2)"), 0.0), 0.5, 1e-15);
    expect_near(eval_value(parse_expr("conj(z)"), cd(1, 2)), cd(1, -2), 0);
}

TEST(Parser, RejectsMalformedInput) {
    expect_near(eval_value(parse_expr("z^3/2"), 2.0), 4.0, 0);
    for (auto bad : {"", "z+", "(z", "z^(1/3)", "z^0.25", "sin(z)", "z zb", "w", "2**z", "z^z"})
        EXPECT_THROW(parse_expr(bad), SpecParse) << bad;
}

TEST(Parser, PrintRoundTrip) {
    for (auto src : {"(z+zb)/(1-z*zb)", "sqrt(3)*z*(2+z*zb)/(3-(z*zb)^2)", "z^(3/2)*conj(z)^(-1)", "(0.25+1.5i)*z"}) {
        Expr e = parse_expr(src);
        Expr back = parse_expr(to_string(e));
        for (cd z : {cd(0.3, 0.2), cd(-0.4, 0.7)}) expect_near(eval_value(back, z), eval_value(e, z), 1e-14);
    }
}

TEST(SymbolicDerive, MatchesDualNumbers) {
    for (auto src : {"z^2*zb", "(z+zb)/(1-z*zb)", "sqrt(1+z*zb)", "conj(z^3)/(2+z)", "z^(1/2)*zb^(-1/2)"}) {
        Expr e = parse_expr(src);
        for (cd z : {cd(0.3, 0.2), cd(0.8, -0.5)}) {
            auto j = jet_eval(FieldConfig(e), DomainPoint{z});
            expect_near(eval_value(derive(e, Wrt::dz), z), j.dz, 1e-13);
            expect_near(eval_value(derive(e, Wrt::dzb), z), j.dzb, 1e-13);
            expect_near(eval_value(derive(derive(e, Wrt::dz), Wrt::dzb), z), j.dzzb, 1e-12);
        }
    }
}

TEST(BranchSqrt, CutRayHandling) {
    expect_near(branch_sqrt(cd(4, 0)), 2.0, 0);
    expect_near(branch_sqrt(cd(-4, 1e-300)), cd(0, 2), 1e-15);
    EXPECT_THROW(branch_sqrt(cd(-4, 0)), BranchCutAmbiguity);
    // cut along the positive real axis: -4 is fine, +4 is on the cut
    expect_near(branch_sqrt(cd(-4, 0), 0.0), cd(0, 2), 1e-15);
    EXPECT_THROW(branch_sqrt(cd(4, 0), 0.0), BranchCutAmbiguity);
    // any cut: s² = u
    for (double cut : {0.3, 1.7, -2.0})
        for (cd u : {cd(1, 2), cd(-3, -1), cd(0.5, -4)}) {
            cd s = branch_sqrt(u, cut);
            expect_near(s * s, u, 1e-14);
        }
}
