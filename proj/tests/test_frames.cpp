#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mframes/frame_checks.hpp"
#include "mframes/surfaces.hpp"

using namespace mframes;

namespace {

SurfaceImmersion warped_pseudosphere() {
  return pseudosphere({.u_cut = 0.2, .chart_angle = 0.35, .chart_warp = 0.1, .domain = std::nullopt});
}

const ParamRect kPatch{1.8, 2.0, 2.0, 2.2};

// Frames fixed by hand: e₁ = ∂u, e₂ = ∂v on the flat metric.
FrameField synthetic_frames(const Grid& g, double k1, double k2) {
  FrameField ff;
  ff.grid = g;
  PrincipalFrame<double> f{};
  f.forms = {1.0, 0.0, 1.0, k1, 0.0, k2, Vec3{0, 0, 1}};
  f.kappa1 = k1;
  f.kappa2 = k2;
  f.alpha = std::atan(k1);
  f.e1 = {1.0, 0.0};
  f.e2 = {0.0, 1.0};
  f.amb1 = {1, 0, 0};
  f.amb2 = {0, 1, 0};
  f.normal = {0, 0, 1};
  ff.frames.assign(g.size(), f);
  return ff;
}

}  // namespace

TEST(Grid, SpacingMustDivideDomain) {
  const Grid g = Grid::over({0, 1, 0, 0.5}, 0.1);
  EXPECT_EQ(g.nu, 10);
  EXPECT_EQ(g.nv, 5);
  EXPECT_EQ(g.size(), 66u);
  EXPECT_THROW(Grid::over({0, 1, 0, 1}, 0.3), DomainError);
  EXPECT_THROW(Grid::over({0, 1, 0, 1}, 0.5), DomainError);
  EXPECT_THROW(Grid::over({0, 1, 0, 1}, -0.1), DomainError);
}

TEST(Grid, PartialIsExactOnQuadraticsAndFlagsBoundary) {
  const Grid g = Grid::over({0, 1, 0, 1}, 0.125);
  const ScalarField f = sample(g, [&](int i, int j) {
    const Vec2 p = g.point(i, j);
    return p[0] * p[0] + 3.0 * p[0] * p[1] - p[1] * p[1];
  });
  const ScalarField fu = partial(f, 0), fv = partial(f, 1);
  g.for_each([&](int i, int j) {
    const Vec2 p = g.point(i, j);
    EXPECT_NEAR(fu(i, j), 2 * p[0] + 3 * p[1], 1e-12);
    EXPECT_NEAR(fv(i, j), 3 * p[0] - 2 * p[1], 1e-12);
    EXPECT_EQ(fu.ok(i, j), i > 0 && i < g.nu);
    EXPECT_EQ(fv.ok(i, j), j > 0 && j < g.nv);
  });
}

TEST(FrameField, OrthonormalOrientedAndContinuous) {
  const Grid g = Grid::over(kPatch, 0.01);
  const FrameField ff = frame_field(warped_pseudosphere(), g);
  g.for_each([&](int i, int j) {
    const auto& f = ff.at(i, j);
    EXPECT_NEAR(dot(f.amb1, f.amb2), 0.0, 1e-10);
    EXPECT_NEAR(norm(f.amb1), 1.0, 1e-10);
    EXPECT_NEAR(norm(f.amb2), 1.0, 1e-10);
    EXPECT_LT(max_abs_diff(cross(f.amb1, f.amb2), f.normal), 1e-10);
    if (i > 0) {
      EXPECT_GT(dot(f.amb1, ff.at(i - 1, j).amb1), 0.0);
    }
    if (j > 0) {
      EXPECT_GT(dot(f.amb1, ff.at(i, j - 1).amb1), 0.0);
    }
  });
  EXPECT_TRUE(basepoint_orientation_ok(ff.at(0, 0).e1));
}

TEST(FrameField, RejectsGridOutsideSurfaceAndPositiveCurvature) {
  EXPECT_THROW(frame_field(pseudosphere(), Grid::over({0.0, 1.0, 0, 1}, 0.1)), DomainError);
  EXPECT_THROW(frame_field(sphere(), Grid::over({1.0, 1.4, 0, 0.4}, 0.1)), NotHyperbolicError);
}

TEST(Coframe, DualityAndAreaForm) {
  const Grid g = Grid::over(kPatch, 0.02);
  const FrameField ff = frame_field(warped_pseudosphere(), g);
  const auto [t1, t2] = coframe(ff);
  const TwoFormField area = wedge(t1, t2);
  const CoordinateForm c1 = to_coordinates(t1, ff), c2 = to_coordinates(t2, ff);
  g.for_each([&](int i, int j) {
    const auto& f = ff.at(i, j);
    EXPECT_EQ(t1.eval(i, j, {1, 0}), 1.0);
    EXPECT_EQ(t1.eval(i, j, {0, 1}), 0.0);
    EXPECT_EQ(area.c(i, j), 1.0);
    // θ²(E₂) = sin α, computed through coordinate components.
    const AsymptoticFrame a = asymptotic_frame(f);
    EXPECT_NEAR(c2.du(i, j) * a.E2[0] + c2.dv(i, j) * a.E2[1], std::sin(f.alpha), 1e-12);
    EXPECT_NEAR(c1.du(i, j) * f.e1[0] + c1.dv(i, j) * f.e1[1], 1.0, 1e-12);
    EXPECT_NEAR(c1.du(i, j) * f.e2[0] + c1.dv(i, j) * f.e2[1], 0.0, 1e-12);
    // θ¹∧θ²(∂u, ∂v) = √g.
    EXPECT_NEAR(c1.du(i, j) * c2.dv(i, j) - c1.dv(i, j) * c2.du(i, j), ff.sqrt_g(i, j), 1e-12);
  });
}

TEST(Forms, CoordinateRoundTrip) {
  const Grid g = Grid::over(kPatch, 0.02);
  const FrameField ff = frame_field(warped_pseudosphere(), g);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n;
  OneFormField f{ScalarField(g), ScalarField(g)};
  for (auto& x : f.a.values) x = n(rng);
  for (auto& x : f.b.values) x = n(rng);
  const OneFormField back = from_coordinates(to_coordinates(f, ff), ff);
  EXPECT_LT(max_norm(back - f), 1e-12);
}

TEST(Forms, WedgeAntisymmetryAndEvaluation) {
  const Grid g = Grid::over({0, 1, 0, 1}, 0.25);
  std::mt19937_64 rng(12);
  std::normal_distribution<double> n;
  OneFormField f{ScalarField(g), ScalarField(g)}, h{ScalarField(g), ScalarField(g)};
  for (auto* s : {&f.a, &f.b, &h.a, &h.b})
    for (auto& x : s->values) x = n(rng);
  const TwoFormField fh = wedge(f, h), hf = wedge(h, f);
  for (std::size_t k = 0; k < g.size(); ++k) {
    EXPECT_EQ(fh.c.values[k], -hf.c.values[k]);
    EXPECT_EQ(fh.c.values[k], f.a.values[k] * h.b.values[k] - f.b.values[k] * h.a.values[k]);
  }
  EXPECT_EQ(max_norm(wedge(f, f)), 0.0);
}

TEST(Forms, ThetaEtaRoundTrip) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> al(0.01, 1.56);
  for (int k = 0; k < 100; ++k) {
    const double a = al(rng);
    PrincipalFrame<double> f{};
    f.alpha = a;
    f.e1 = {1, 0};
    f.e2 = {0, 1};
    const AsymptoticFrame af = asymptotic_frame(f);
    // θ¹ = cos α (η¹ + η²), θ² = sin α (η² − η¹) against (θ¹, θ²) components.
    const Vec2 t1 = std::cos(a) * (af.eta1_frame + af.eta2_frame);
    const Vec2 t2 = std::sin(a) * (af.eta2_frame - af.eta1_frame);
    EXPECT_NEAR(t1[0], 1.0, 1e-12);
    EXPECT_NEAR(t1[1], 0.0, 1e-12);
    EXPECT_NEAR(t2[0], 0.0, 1e-12);
    EXPECT_NEAR(t2[1], 1.0, 1e-12);
  }
}

TEST(ExteriorDerivative, ConstantCoordinateFormIsClosedExactly) {
  const Grid g = Grid::over(kPatch, 0.02);
  const FrameField ff = frame_field(warped_pseudosphere(), g);
  const CoordinateForm du{ScalarField(g, 1.0), ScalarField(g, 0.0)};
  const TwoFormField d = exterior_d(from_coordinates(du, ff), ff);
  g.for_each([&](int i, int j) {
    if (d.c.ok(i, j)) {
      EXPECT_NEAR(d.c(i, j), 0.0, 1e-12);
    }
  });
}

TEST(ExteriorDerivative, LeibnizClosedFormConvergesQuadratically) {
  auto residual = [](double h) {
    const Grid g = Grid::over(kPatch, h);
    const FrameField ff = frame_field(warped_pseudosphere(), g);
    auto field = [&](auto fn) {
      return sample(g, [&](int i, int j) {
        const Vec2 p = g.point(i, j);
        return fn(p[0], p[1]);
      });
    };
    const ScalarField a = field([](double u, double v) { return std::sin(3 * u) * std::exp(v); });
    const ScalarField b = field([](double u, double v) { return std::cos(u * v); });
    // α dβ + β dα = d(αβ) is closed.
    return max_norm(exterior_d(a * exterior_d(b, ff) + b * exterior_d(a, ff), ff));
  };
  const double coarse = residual(0.004), fine = residual(0.002);
  EXPECT_LT(fine, 1e-3);
  EXPECT_GT(coarse / fine, 3.0);
  EXPECT_LT(coarse / fine, 5.0);
}

TEST(Connection, CurvatureFormulaVanishesForConstantCurvatures) {
  const FrameField ff = synthetic_frames(Grid::over({0, 1, 0, 1}, 0.1), 2.0, -0.5);
  EXPECT_EQ(max_norm(omega12_from_curvatures(ff)), 0.0);
  const auto [w13, w23] = normal_connection_forms(ff);
  EXPECT_EQ(w13.eval(3, 3, {0, 1}), 0.0);
  EXPECT_EQ(w23.eval(3, 3, {0, 1}), -0.5);
  EXPECT_EQ(w13.eval(3, 3, {1, 0}), 2.0);
}

TEST(Connection, GuardsEqualPrincipalCurvatures) {
  const FrameField ff = synthetic_frames(Grid::over({0, 1, 0, 1}, 0.1), 1.0, 1.0);
  EXPECT_THROW(omega12_from_curvatures(ff), PreconditionError);
}

TEST(Connection, AntisymmetryThroughExactDerivatives) {
  const FrameCalculus fc(warped_pseudosphere(), Grid::over(kPatch, 0.02));
  EXPECT_LT(fc.check_antisymmetry().value, 1e-10);
}

TEST(Connection, SphereGaussEquationWithCoordinateFrame) {
  const auto s = sphere();
  const FrameField ff = coordinate_frame_field(s, Grid::over({1.0, 1.2, 0.0, 0.2}, 0.002));
  const TwoFormField d = exterior_d(omega12_ambient(ff), ff);
  double worst = 0.0;
  for (std::size_t k = 0; k < d.c.values.size(); ++k)
    if (d.c.accurate[k]) worst = std::fmax(worst, std::fabs(d.c.values[k] + 1.0));
  EXPECT_LT(worst, 1e-5);
}

TEST(Checks, PseudosphereResidualsConvergeQuadratically) {
  const auto study = frame_convergence(warped_pseudosphere(), kPatch, 1e-3);
  ASSERT_EQ(study.size(), 17u);
  for (const auto& e : study) {
    EXPECT_LT(e.fine, 1e-5) << e.check;
    if (e.fine > 1e-10) {
      ASSERT_TRUE(e.rate) << e.check;
      EXPECT_GE(*e.rate, 3.0) << e.check;
      EXPECT_LE(*e.rate, 5.0) << e.check;
    }
  }
}

TEST(Checks, ExactConsistencyIdentities) {
  const FrameCalculus fc(warped_pseudosphere(), Grid::over(kPatch, 0.01));
  const auto r = fc.check_lemma_connalpha();
  EXPECT_LT(r[1].value, 1e-8);
  EXPECT_LT(r[2].value, 1e-8);
}

TEST(Checks, UnitCurvaturePrecondition) {
  const auto s = dini_surface(1.0, 0.5);
  const FrameCalculus fc(s, Grid::over({0.0, 0.2, 0.8, 1.0}, 0.01));
  EXPECT_THROW(fc.check_gauss(), PreconditionError);
  EXPECT_THROW(fc.check_lemma_connalpha(), PreconditionError);
  EXPECT_THROW(fc.check_eta_closed(), PreconditionError);
  // Structure equations hold for any curvature.
  for (const auto& r : fc.check_structure()) EXPECT_LT(r.value, 1e-4) << r.check;
}
