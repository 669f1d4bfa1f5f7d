// Curvatures, structure-equation residuals and an asymptotic net on the pseudosphere.

#include <cstdio>

#include <mframes/frame_checks.hpp>
#include <mframes/net.hpp>
#include <mframes/surfaces.hpp>

int main() {
  using namespace mframes;
  const SurfaceImmersion s = pseudosphere({.chart_angle = 0.35});

  const Vec2 p{3.0, 1.0};
  const ShapeSpectrum sp = principal_data(s, p);
  std::printf("at (%.2f, %.2f): K = %.15f  kappa1 = %.6f  kappa2 = %.6f  alpha = %.6f\n", p[0], p[1],
              gaussian_curvature(s, p), sp.kappa1, sp.kappa2, sp.alpha);

  const FrameCalculus fc(s, Grid::over({2.9, 3.1, 0.9, 1.1}, 2e-3));
  for (const Residual& r : fc.check_structure()) std::printf("%-20s %.3e\n", r.check.c_str(), r.value);

  const NetGrid net = build_net(s, p, 0.5, 40);
  const AreaReport area = area_two_ways(net);
  std::printf("net: %zu points, sine-Gordon residual %.3e\n", net.valid_count(), sine_gordon_residual(net).residual);
  std::printf("area: quadrature %.10f  corner %.10f  (2 pi = %.10f)\n", area.quadrature_area, area.corner_area,
              2.0 * std::numbers::pi);
}
