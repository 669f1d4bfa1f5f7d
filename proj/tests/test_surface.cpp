#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mframes/geometry.hpp"
#include "mframes/surfaces.hpp"

using namespace mframes;

namespace {

constexpr double kPi = std::numbers::pi;

// Closed forms from the symbolic oracle (tests/oracles/surface_curvatures.py):
// the tractroid with profile coordinate s > 0 has κ₁ = sinh s (parallels) and
// κ₂ = −1/sinh s (meridians).
double tractroid_kappa1(double s) { return std::sinh(s); }
double tractroid_kappa2(double s) { return -1.0 / std::sinh(s); }

double max_jet_diff(const Jet3& a, const Jet3& b) {
  double m = 0.0;
  const Vec3 Jet3::*fields[] = {&Jet3::p,  &Jet3::u,   &Jet3::v,   &Jet3::uu,  &Jet3::uv,
                                &Jet3::vv, &Jet3::uuu, &Jet3::uuv, &Jet3::uvv, &Jet3::vvv};
  for (auto f : fields) m = std::fmax(m, max_abs_diff(a.*f, b.*f));
  return m;
}

Vec2 random_in(const ParamRect& r, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> x(r.u_min, r.u_max), y(r.v_min, r.v_max);
  return {x(rng), y(rng)};
}

}  // namespace

TEST(FundamentalForms, UnitSphereSecondFormIsMinusFirst) {
  const auto s = sphere();
  std::mt19937_64 rng(1);
  for (int k = 0; k < 50; ++k) {
    const Vec2 p = random_in(s.domain(), rng);
    const auto f = fundamental_forms(s, p);
    EXPECT_NEAR(f.L, -f.E, 1e-14);
    EXPECT_NEAR(f.M, -f.F, 1e-14);
    EXPECT_NEAR(f.N, -f.G, 1e-14);
    // φ_u × φ_v is the outward normal: it equals the position on the unit sphere.
    EXPECT_NEAR(max_abs_diff(f.normal, s.position(p)), 0.0, 1e-14);
  }
}

TEST(FundamentalForms, PlaneHasZeroSecondForm) {
  const auto f = fundamental_forms(plane(), {0.3, -0.2});
  EXPECT_EQ(f.L, 0.0);
  EXPECT_EQ(f.M, 0.0);
  EXPECT_EQ(f.N, 0.0);
  EXPECT_DOUBLE_EQ(gaussian_curvature(plane(), {0.1, 0.1}), 0.0);
}

TEST(FundamentalForms, DegenerateParametrizationIsRejected) {
  const auto cone_tip = custom_surface("u*cos(v)", "u*sin(v)", "u", {-1, 1, 0, 1});
  EXPECT_THROW(fundamental_forms(cone_tip, {0.0, 0.5}), ImmersionError);
}

TEST(PrincipalData, SphereEigenvaluesAreMinusOneAndRejectedAsNotHyperbolic) {
  const auto s = sphere();
  const auto [k1, k2] = shape_eigenvalues(s, {0.7, 0.2});
  EXPECT_NEAR(k1, -1.0, 1e-9);
  EXPECT_NEAR(k2, -1.0, 1e-9);
  EXPECT_NEAR(gaussian_curvature(s, {2.0, 1.0}), 1.0, 1e-9);
  EXPECT_THROW(principal_data(s, {0.7, 0.2}), NotHyperbolicError);
  EXPECT_THROW(principal_data(plane(), {0.0, 0.0}), NotHyperbolicError);
}

TEST(PrincipalData, PseudosphereMatchesClosedForm) {
  for (double beta : {0.0, 0.35}) {
    const auto s = pseudosphere({.u_cut = 0.2, .chart_angle = beta});
    std::mt19937_64 rng(2);
    for (int k = 0; k < 200; ++k) {
      const Vec2 p = random_in(s.domain(), rng);
      const double sp = std::cos(beta) * p[0] - std::sin(beta) * p[1];
      const ShapeSpectrum spec = principal_data(s, p);
      EXPECT_NEAR(spec.kappa1, tractroid_kappa1(sp), 1e-9 * std::max(1.0, spec.kappa1));
      EXPECT_NEAR(spec.kappa2, tractroid_kappa2(sp), 1e-9 * std::max(1.0, -spec.kappa2));
      EXPECT_NEAR(spec.kappa1 * spec.kappa2, -1.0, 1e-8);
      EXPECT_NEAR(gaussian_curvature(s, p), -1.0, 1e-8);
      EXPECT_NEAR(spec.alpha, std::atan(spec.kappa1), 1e-15);
      // κ₁ belongs to the parallels: ∂t = sin β ∂u + cos β ∂v.
      const double cross2 = spec.dir1.coords[0] * std::cos(beta) - spec.dir1.coords[1] * std::sin(beta);
      EXPECT_NEAR(cross2, 0.0, 1e-9 * std::hypot(spec.dir1.coords[0], spec.dir1.coords[1]));
    }
  }
}

TEST(PrincipalData, FrozenSymbolicValues) {
  const auto ps = pseudosphere();
  const auto spec = principal_data(ps, {1.0, 0.3});
  EXPECT_NEAR(spec.kappa1, 1.1752011936438016, 1e-12);
  EXPECT_NEAR(spec.kappa2, -0.85091812823932167, 1e-12);
  const auto dini = dini_surface(0.96, 0.28);
  const auto d1 = principal_data(dini, {0.3, 1.0});
  EXPECT_NEAR(d1.kappa1, 1.5574077246549041, 1e-10);
  EXPECT_NEAR(d1.kappa2, -0.64209261593433065, 1e-10);
  const auto d2 = principal_data(dini_surface(0.96, 0.28, ParamRect{-kPi, kPi, 1.7, 2.8}), {1.0, 2.0});
  EXPECT_NEAR(d2.kappa1, 2.185039863261518, 1e-10);
  EXPECT_NEAR(d2.kappa2, -0.45765755436028566, 1e-10);
}

TEST(PrincipalData, DirectionsAreOrthonormalEigenvectors) {
  const auto s = dini_surface(0.96, 0.28, ParamRect{-kPi, kPi, 1.7, 2.8});
  std::mt19937_64 rng(3);
  for (int k = 0; k < 100; ++k) {
    const Vec2 p = random_in(s.domain(), rng);
    const auto [f, j] = forms_at(s, p);
    const auto spec = principal_data(s, p);
    EXPECT_NEAR(first_form(f, spec.dir1.coords, spec.dir1.coords), 1.0, 1e-12);
    EXPECT_NEAR(first_form(f, spec.dir2.coords, spec.dir2.coords), 1.0, 1e-12);
    EXPECT_NEAR(first_form(f, spec.dir1.coords, spec.dir2.coords), 0.0, 1e-12);
    EXPECT_NEAR(sff(f, spec.dir1.coords), spec.kappa1, 1e-10);
    EXPECT_NEAR(sff(f, spec.dir2.coords), spec.kappa2, 1e-10);
    EXPECT_NEAR(max_abs_diff(cross(spec.dir1.ambient, spec.dir2.ambient), f.normal), 0.0, 1e-10);
    EXPECT_GT(spec.kappa1, 0.0);
    EXPECT_LT(spec.kappa2, 0.0);
  }
}

TEST(ShapeOperator, SelfAdjointAndEigenproductProperty) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  for (const auto& s : {pseudosphere({.chart_angle = 0.35}), dini_surface(), sphere()}) {
    for (int k = 0; k < 100; ++k) {
      const Vec2 p = random_in(s.domain(), rng);
      const auto f = fundamental_forms(s, p);
      const auto op = shape_operator(f);
      const Vec2 x{g(rng), g(rng)}, y{g(rng), g(rng)};
      EXPECT_NEAR(first_form(f, op.apply(x), y), first_form(f, x, op.apply(y)), 1e-9 * (1.0 + norm(x) * norm(y)));
      const auto [k1, k2] = shape_eigenvalues(s, p);
      EXPECT_NEAR(k1 * k2, gaussian_curvature(s, p), 1e-9);
    }
  }
}

TEST(NormalCurvature, EulerFormulaMatchesSecondForm) {
  const auto s = pseudosphere({.chart_angle = 0.35});
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  const Vec2 p{2.0, 0.5};
  const auto spec = principal_data(s, p);
  EXPECT_DOUBLE_EQ(normal_curvature(spec, 0.0), spec.kappa1);
  EXPECT_NEAR(normal_curvature(spec, kPi / 2), spec.kappa2, 1e-15);
  EXPECT_NEAR(normal_curvature(spec, spec.alpha), 0.0, 1e-12);
  for (int k = 0; k < 100; ++k) {
    const double b = ang(rng);
    EXPECT_NEAR(normal_curvature(spec, b), normal_curvature_sff(s, p, b), 1e-9);
  }
}

TEST(ConstantCurvatureIdentities, PrincipalCurvatureRelations) {
  const auto s = pseudosphere({.chart_angle = 0.35});
  std::mt19937_64 rng(6);
  for (int k = 0; k < 200; ++k) {
    const auto spec = principal_data(s, random_in(s.domain(), rng));
    EXPECT_NEAR(spec.kappa2, -1.0 / spec.kappa1, 1e-8 * std::max(1.0, -spec.kappa2));
    const double a = spec.alpha;
    EXPECT_NEAR((spec.kappa1 - spec.kappa2) * std::cos(a) * std::sin(a), 1.0, 1e-8);
  }
}

TEST(AsymptoticFrame, UnitZeroCurvatureDirections) {
  const auto s = pseudosphere({.chart_angle = 0.35});
  std::mt19937_64 rng(7);
  for (int k = 0; k < 100; ++k) {
    const Vec2 p = random_in(s.domain(), rng);
    const auto f = fundamental_forms(s, p);
    const auto spec = principal_data(s, p);
    const auto a = asymptotic_frame(s, p);
    EXPECT_NEAR(first_form(f, a.E1, a.E1), 1.0, 1e-12);
    EXPECT_NEAR(first_form(f, a.E2, a.E2), 1.0, 1e-12);
    EXPECT_NEAR(sff(f, a.E1), 0.0, 1e-8);
    EXPECT_NEAR(sff(f, a.E2), 0.0, 1e-8);
    // e₁ = ½ sec α (E₁ + E₂), e₂ = ½ csc α (E₂ − E₁).
    const Vec2 e1 = (0.5 / std::cos(a.alpha)) * (a.E1 + a.E2);
    const Vec2 e2 = (0.5 / std::sin(a.alpha)) * (a.E2 - a.E1);
    EXPECT_LT(max_abs_diff(e1, spec.dir1.coords), 1e-12 * (1 + norm(e1)));
    EXPECT_LT(max_abs_diff(e2, spec.dir2.coords), 1e-12 * (1 + norm(e2)));
    // Duality in coordinates and against the principal coframe.
    EXPECT_NEAR(dot(a.eta1_coords, a.E1), 1.0, 1e-12);
    EXPECT_NEAR(dot(a.eta1_coords, a.E2), 0.0, 1e-12);
    EXPECT_NEAR(dot(a.eta2_coords, a.E2), 1.0, 1e-12);
    const double c = std::cos(a.alpha), sn = std::sin(a.alpha);
    EXPECT_NEAR(a.eta1_frame[0] * c + a.eta1_frame[1] * (-sn), 1.0, 1e-15);
    EXPECT_NEAR(a.eta2_frame[0] * c + a.eta2_frame[1] * (-sn), 0.0, 1e-15);
  }
}

TEST(AsymptoticFrame, QuarterPiAngle) {
  PrincipalFrame<double> f{};
  f.alpha = kPi / 4;
  f.e1 = {1.0, 0.0};
  f.e2 = {0.0, 1.0};
  const auto a = asymptotic_frame(f);
  EXPECT_NEAR(a.E1[0], 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(a.E1[1], -1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(a.E2[0], 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(a.E2[1], 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(AsymptoticFrame, RequiresNegativeCurvature) {
  EXPECT_THROW(asymptotic_frame(sphere(), {1.0, 0.0}), NotHyperbolicError);
}

TEST(Partials, AutoDiffMatchesAnalytic) {
  for (const auto& s : {pseudosphere(), pseudosphere({.chart_angle = 0.35}), sphere(), sphere(2.5), plane()}) {
    std::mt19937_64 rng(8);
    for (int k = 0; k < 200; ++k) {
      const Vec2 p = random_in(s.domain(), rng);
      const Jet3 a = s.jet(p, 3, DerivativeSource::Analytic);
      const Jet3 d = s.jet(p, 3, DerivativeSource::AutoDiff);
      EXPECT_LT(max_jet_diff(a, d), 1e-10) << s.name() << " at " << p[0] << "," << p[1];
    }
  }
}

TEST(Partials, LowerOrderAutoDiffAgreesWithThirdOrder) {
  const auto s = dini_surface();
  const Vec2 p{0.4, 0.9};
  const Jet3 j3 = s.jet(p, 3), j2 = s.jet(p, 2), j1 = s.jet(p, 1);
  EXPECT_LT(max_abs_diff(j2.uv, j3.uv), 1e-13);
  EXPECT_LT(max_abs_diff(j2.vv, j3.vv), 1e-13);
  EXPECT_LT(max_abs_diff(j1.u, j3.u), 1e-13);
  // Third-order partials against central differences of second-order ones.
  const double h = 1e-5;
  const Jet3 up = s.jet({p[0] + h, p[1]}, 2), um = s.jet({p[0] - h, p[1]}, 2);
  const Jet3 vp = s.jet({p[0], p[1] + h}, 2), vm = s.jet({p[0], p[1] - h}, 2);
  EXPECT_LT(max_abs_diff(j3.uuu, (1.0 / (2 * h)) * (up.uu - um.uu)), 1e-6);
  EXPECT_LT(max_abs_diff(j3.uuv, (1.0 / (2 * h)) * (vp.uu - vm.uu)), 1e-6);
  EXPECT_LT(max_abs_diff(j3.uvv, (1.0 / (2 * h)) * (up.vv - um.vv)), 1e-6);
  EXPECT_LT(max_abs_diff(j3.vvv, (1.0 / (2 * h)) * (vp.vv - vm.vv)), 1e-6);
}

TEST(Partials, AnalyticRequestWithoutAnalyticSourceFails) {
  EXPECT_THROW(dini_surface().jet({0.0, 1.0}, 3, DerivativeSource::Analytic), PreconditionError);
}

TEST(Dilate, ScalesCurvatures) {
  const auto s = sphere();
  const auto [k1, k2] = shape_eigenvalues(dilate(s, 2.0), {1.0, 0.3});
  EXPECT_NEAR(k1, -0.5, 1e-12);
  EXPECT_NEAR(k2, -0.5, 1e-12);
  const auto ps = pseudosphere({.chart_angle = 0.35});
  EXPECT_NEAR(gaussian_curvature(dilate(ps, 2.0), {2.0, 0.1}), -0.25, 1e-8);
  EXPECT_THROW(dilate(ps, 0.0), DomainError);
  EXPECT_THROW(dilate(ps, -1.0), DomainError);
}

TEST(Dilate, PrincipalDataProperty) {
  const auto s = dini_surface();
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> kd(0.1, 20.0);
  for (int n = 0; n < 50; ++n) {
    const double k = kd(rng);
    const auto ds = dilate(s, k);
    const Vec2 p = random_in(s.domain(), rng);
    const auto a = principal_data(s, p), b = principal_data(ds, p);
    EXPECT_NEAR(b.kappa1, a.kappa1 / k, 1e-8 * a.kappa1 / k);
    EXPECT_NEAR(b.kappa2, a.kappa2 / k, 1e-8 * std::fabs(a.kappa2) / k);
    // Same principal lines in parameter coordinates.
    const double det = a.dir1.coords[0] * b.dir1.coords[1] - a.dir1.coords[1] * b.dir1.coords[0];
    EXPECT_NEAR(det, 0.0, 1e-8 * norm(a.dir1.coords) * norm(b.dir1.coords));
  }
  const auto same = principal_data(dilate(s, 1.0), {0.2, 0.8});
  EXPECT_NEAR(same.kappa1, principal_data(s, {0.2, 0.8}).kappa1, 1e-14);
}

TEST(Dilate, AnalyticPartialsAreScaled) {
  const auto ds = dilate(pseudosphere(), 3.0);
  ASSERT_TRUE(ds.has_analytic());
  const Vec2 p{1.2, 0.4};
  EXPECT_LT(max_jet_diff(ds.jet(p, 3, DerivativeSource::Analytic), ds.jet(p, 3, DerivativeSource::AutoDiff)), 1e-10);
}

TEST(Surfaces, DomainValidation) {
  EXPECT_THROW(pseudosphere({.u_cut = 0.2, .chart_angle = 0.0, .domain = ParamRect{0.1, 2, -1, 1}}), DomainError);
  EXPECT_THROW(pseudosphere({.u_cut = 0.2, .chart_angle = 0.5, .domain = ParamRect{0.3, 2, -1, 1}}), DomainError);
  EXPECT_NO_THROW(pseudosphere({.u_cut = 0.2, .chart_angle = 0.0, .domain = ParamRect{-3, -0.2, -1, 1}}));
  EXPECT_THROW(pseudosphere({.u_cut = 0.0}), DomainError);
  EXPECT_THROW(sphere(-1.0), DomainError);
  EXPECT_THROW(dini_surface(0.96, 0.28, ParamRect{0, 1, 1.0, 2.0}), DomainError);
  const auto d = default_pseudosphere_domain({.u_cut = 0.2, .chart_angle = 0.35});
  EXPECT_NEAR(std::cos(0.35) * d.u_min - std::sin(0.35) * d.v_max, 0.2, 1e-8);
}

TEST(Surfaces, NegativeSheetOfPseudosphere) {
  const auto s = pseudosphere({.u_cut = 0.2, .chart_angle = 0.0, .domain = ParamRect{-3, -0.3, -1, 1}});
  EXPECT_NEAR(gaussian_curvature(s, {-1.0, 0.2}), -1.0, 1e-10);
  EXPECT_NEAR(principal_data(s, {-1.0, 0.2}).kappa1, std::sinh(1.0), 1e-10);
}

TEST(CustomSurface, ExpressionPatchMatchesBuiltin) {
  const auto custom = custom_surface("sech(u)*cos(v)", "sech(u)*sin(v)", "u - tanh(u)", {0.5, 2.5, -1, 1});
  const auto builtin = pseudosphere();
  for (Vec2 p : {Vec2{0.7, 0.1}, Vec2{1.9, -0.8}}) {
    EXPECT_LT(max_jet_diff(custom.jet(p, 3), builtin.jet(p, 3, DerivativeSource::Analytic)), 1e-12);
  }
}

TEST(CustomSurface, ConstantsPowersAndErrors) {
  const auto s = custom_surface("a*u", "v", "u^2 - v^2 + 2^0.5", {-1, 1, -1, 1}, {{"a", 2.0}});
  const Jet3 j = s.jet({0.5, 0.25}, 3);
  EXPECT_DOUBLE_EQ(j.p[0], 1.0);
  EXPECT_NEAR(j.p[2], 0.25 - 0.0625 + std::sqrt(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(j.uu[2], 2.0);
  EXPECT_DOUBLE_EQ(j.vv[2], -2.0);
  EXPECT_LT(gaussian_curvature(s, {0.0, 0.0}), 0.0);  // saddle
  EXPECT_THROW(Expression::parse("u +"), ExpressionError);
  EXPECT_THROW(Expression::parse("foo(u)"), ExpressionError);
  EXPECT_THROW(Expression::parse("w"), ExpressionError);
  EXPECT_THROW(Expression::parse("(u"), ExpressionError);
  EXPECT_DOUBLE_EQ(Expression::parse("-2^2")(0.0, 0.0), -4.0);
  EXPECT_DOUBLE_EQ(Expression::parse("pi - pi + 3*(u-v)/2")(1.0, 0.0), 1.5);
}
