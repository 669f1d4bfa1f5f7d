#pragma once

// Residual checks for the structure equations and the constant-curvature
// lemmas, on one grid and as a two-level convergence study.

#include <cmath>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "forms.hpp"

namespace mframes {

struct Residual {
  std::string check;
  std::string identity;
  double value = 0.0;
};

inline constexpr double kUnitCurvatureTolerance = 1e-6;

class FrameCalculus {
 public:
  FrameCalculus(const SurfaceImmersion& s, const Grid& g) : surface_(s), frames_(frame_field(s, g)) {
    std::tie(theta1_, theta2_) = coframe(frames_);
    omega12_ = omega12_ambient(frames_);
    std::tie(omega13_, omega23_) = normal_connection_forms(frames_);
  }

  const FrameField& frames() const { return frames_; }
  const Grid& grid() const { return frames_.grid; }
  const OneFormField& theta1() const { return theta1_; }
  const OneFormField& theta2() const { return theta2_; }
  /// ω₁² by differentiating the ambient frame.
  const OneFormField& omega12() const { return omega12_; }
  const OneFormField& omega13() const { return omega13_; }
  const OneFormField& omega23() const { return omega23_; }

  /// Five structure-equation residuals.
  std::vector<Residual> check_structure() const {
    const TwoFormField w12_13 = wedge(omega12_, omega13_);
    const TwoFormField w12_23 = wedge(omega12_, omega23_);
    const TwoFormField w13_23 = wedge(omega13_, omega23_);
    return {
        {"structure.dtheta1", "d theta1 = omega12 ^ theta2",
         max_norm(exterior_d(theta1_, frames_) - wedge(omega12_, theta2_))},
        {"structure.dtheta2", "d theta2 = -omega12 ^ theta1",
         max_norm(exterior_d(theta2_, frames_) + wedge(omega12_, theta1_))},
        {"structure.domega12", "d omega12 = -omega13 ^ omega23", max_norm(exterior_d(omega12_, frames_) + w13_23)},
        {"structure.domega13", "d omega13 = omega12 ^ omega23", max_norm(exterior_d(omega13_, frames_) - w12_23)},
        {"structure.domega23", "d omega23 = -omega12 ^ omega13", max_norm(exterior_d(omega23_, frames_) + w12_13)},
    };
  }

  /// dω₁² = −κ₁κ₂ θ¹∧θ² = θ¹∧θ² on a K = −1 patch.
  Residual check_gauss() const {
    require_unit_negative_curvature();
    TwoFormField d = exterior_d(omega12_, frames_);
    for (double& x : d.c.values) x -= 1.0;
    return {"gauss.domega12", "d omega12 = theta1 ^ theta2 (K = -1)", max_norm(d)};
  }

  /// Ambient ⟨dē₁, ē₃⟩ and ⟨dē₂, ē₃⟩ against κ₁θ¹ and κ₂θ².
  Residual check_normal_connection() const {
    const double r = std::fmax(max_norm(omega13_ambient(frames_) - omega13_),
                               max_norm(omega23_ambient(frames_) - omega23_));
    return {"normal_connection.princurv", "omega13 = kappa1 theta1, omega23 = kappa2 theta2", r};
  }

  /// Ambient ω₁² against (dκ₁(e₂) θ¹ + dκ₂(e₁) θ²)/(κ₁ − κ₂).
  Residual check_connprin() const {
    return {"lemma.connprin", "(kappa1 - kappa2) omega12 = dkappa1(e2) theta1 + dkappa2(e1) theta2",
            max_norm(omega12_ - omega12_from_curvatures(frames_))};
  }

  /// Ambient ω₁² against tan α dα(e₂) θ¹ + cot α dα(e₁) θ², plus the pointwise
  /// consistency of the two lemma expressions through exact derivatives.
  std::vector<Residual> check_lemma_connalpha() const {
    require_unit_negative_curvature();
    const ScalarField alpha = frames_.alpha();
    const OneFormField da = exterior_d(alpha, frames_);
    OneFormField expr{da.b, da.a};
    expr.a.accurate = expr.b.accurate = detail::mask_and(da.a.accurate, da.b.accurate);
    grid().for_each([&](int i, int j) {
      expr.a(i, j) *= std::tan(alpha(i, j));
      expr.b(i, j) /= std::tan(alpha(i, j));
    });

    double dk1 = 0.0, dk2 = 0.0;
    grid().for_each([&](int i, int j) {
      const auto& f = frames_.at(i, j);
      const FrameJet fj = frame_jet(surface_.jet(grid().point(i, j), 3), f.e1);
      const Vec2 ga = fj.grad_alpha(), gk1 = fj.grad_kappa1(), gk2 = fj.grad_kappa2();
      const double gap = f.kappa1 - f.kappa2;
      const double ta = std::tan(f.alpha);
      dk1 = std::fmax(dk1, std::fabs(ta * dot(ga, f.e2) - dot(gk1, f.e2) / gap));
      dk2 = std::fmax(dk2, std::fabs(dot(ga, f.e1) / ta - dot(gk2, f.e1) / gap));
    });
    return {
        {"lemma.conntancot", "omega12 = tan(alpha) dalpha(e2) theta1 + cot(alpha) dalpha(e1) theta2",
         max_norm(omega12_ - expr)},
        {"lemma.dk1", "dkappa1/(kappa1 - kappa2) = tan(alpha) dalpha", dk1},
        {"lemma.dk2", "dkappa2/(kappa1 - kappa2) = cot(alpha) dalpha", dk2},
    };
  }

  /// dη¹, dη² and the intermediate identities d(sec α θ¹) = d(csc α θ²) = 0.
  std::vector<Residual> check_eta_closed() const {
    require_unit_negative_curvature();
    const ScalarField alpha = frames_.alpha();
    ScalarField sec = alpha, csc = alpha;
    grid().for_each([&](int i, int j) {
      sec(i, j) = 1.0 / std::cos(alpha(i, j));
      csc(i, j) = 1.0 / std::sin(alpha(i, j));
    });
    const OneFormField s1 = sec * theta1_;
    const OneFormField s2 = csc * theta2_;
    ScalarField half(grid(), 0.5);
    const OneFormField eta1 = half * (s1 - s2);
    const OneFormField eta2 = half * (s1 + s2);
    return {
        {"lemma.closed.eta1", "d eta1 = 0, eta1 = (sec(alpha) theta1 - csc(alpha) theta2)/2",
         max_norm(exterior_d(eta1, frames_))},
        {"lemma.closed.eta2", "d eta2 = 0, eta2 = (sec(alpha) theta1 + csc(alpha) theta2)/2",
         max_norm(exterior_d(eta2, frames_))},
        {"lemma.etasec", "d(sec(alpha) theta1) = 0", max_norm(exterior_d(s1, frames_))},
        {"lemma.etacosec", "d(csc(alpha) theta2) = 0", max_norm(exterior_d(s2, frames_))},
    };
  }

  /// Grid ω₁² against the exact value from differentiated frames.
  Residual check_connection_exact() const {
    OneFormField exact{ScalarField(grid()), ScalarField(grid())};
    grid().for_each([&](int i, int j) {
      const auto& f = frames_.at(i, j);
      const FrameJet fj = frame_jet(surface_.jet(grid().point(i, j), 3), f.e1);
      const Vec2 w = fj.omega12();
      exact.a(i, j) = dot(w, f.e1);
      exact.b(i, j) = dot(w, f.e2);
    });
    return {"connection.exact", "omega12 = <d e1, e2>", max_norm(omega12_ - exact)};
  }

  /// ω²₁ + ω₁² and ω₁¹ through exact derivatives.
  Residual check_antisymmetry() const {
    double r = 0.0;
    grid().for_each([&](int i, int j) {
      const FrameJet fj = frame_jet(surface_.jet(grid().point(i, j), 3), frames_.at(i, j).e1);
      const Vec2 s = fj.omega12() + fj.omega21();
      const Vec2 d = fj.omega11();
      r = std::fmax(r, std::fmax(std::fmax(std::fabs(s[0]), std::fabs(s[1])), std::fmax(std::fabs(d[0]), std::fabs(d[1]))));
    });
    return {"connection.antisymmetry", "omega21 = -omega12, omega11 = 0", r};
  }

  /// Precondition of the constant-curvature lemmas.
  void require_unit_negative_curvature() const {
    double worst = 0.0;
    for (const auto& f : frames_.frames) worst = std::fmax(worst, std::fabs(f.kappa1 * f.kappa2 + 1.0));
    if (!(worst < kUnitCurvatureTolerance))
      throw PreconditionError("check requires K = -1; max |K + 1| on the grid is " + std::to_string(worst));
  }

 private:
  SurfaceImmersion surface_;
  FrameField frames_;
  OneFormField theta1_, theta2_, omega12_, omega13_, omega23_;
};

/// Every frame-calculus residual on one grid. Lemma checks are skipped when
/// `unit_curvature` is false.
inline std::vector<Residual> frame_residuals(const FrameCalculus& fc, bool unit_curvature = true) {
  std::vector<Residual> out = fc.check_structure();
  out.push_back(fc.check_normal_connection());
  out.push_back(fc.check_connprin());
  out.push_back(fc.check_connection_exact());
  out.push_back(fc.check_antisymmetry());
  if (unit_curvature) {
    out.push_back(fc.check_gauss());
    for (auto& r : fc.check_lemma_connalpha()) out.push_back(r);
    for (auto& r : fc.check_eta_closed()) out.push_back(r);
  }
  return out;
}

struct ConvergenceEntry {
  std::string check, identity;
  double h_coarse = 0.0, h_fine = 0.0;
  double coarse = 0.0, fine = 0.0;
  std::optional<double> rate;  // coarse/fine; absent when fine is zero
};

/// Residuals at spacing 2h and h over the same rectangle.
inline std::vector<ConvergenceEntry> frame_convergence(const SurfaceImmersion& s, const ParamRect& rect, double h,
                                                       bool unit_curvature = true) {
  const auto coarse = frame_residuals(FrameCalculus(s, Grid::over(rect, 2.0 * h)), unit_curvature);
  const auto fine = frame_residuals(FrameCalculus(s, Grid::over(rect, h)), unit_curvature);
  std::vector<ConvergenceEntry> out;
  for (std::size_t k = 0; k < fine.size(); ++k) {
    ConvergenceEntry e{fine[k].check, fine[k].identity, 2.0 * h, h, coarse[k].value, fine[k].value, std::nullopt};
    if (fine[k].value > 0.0) e.rate = coarse[k].value / fine[k].value;
    out.push_back(e);
  }
  return out;
}

}  // namespace mframes
