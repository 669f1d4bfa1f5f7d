#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mframes/hyperbolic.hpp"

using namespace mframes;

namespace {

DiskPoint random_point(std::mt19937_64& rng, double rmax = 0.9) {
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi), rad(0.0, 1.0);
  const double r = rmax * std::sqrt(rad(rng));
  const double a = ang(rng);
  return {r * std::cos(a), r * std::sin(a)};
}

MobiusIsometry random_mobius(std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  return {random_point(rng), coin(rng) ? MobiusIsometry::Direction::ToOrigin : MobiusIsometry::Direction::FromOrigin};
}

// Textbook formula, used as an oracle for the stabilised implementation.
double distance_arccosh(const DiskPoint& p, const DiskPoint& q) {
  const double dx = p.x() - q.x(), dy = p.y() - q.y();
  return std::acosh(1.0 + 2.0 * (dx * dx + dy * dy) / ((1.0 - p.norm2()) * (1.0 - q.norm2())));
}

}  // namespace

TEST(DiskPoint, RejectsBoundaryAndOutside) {
  EXPECT_THROW(DiskPoint(1.0, 0.0), DomainError);
  EXPECT_THROW(DiskPoint(0.8, 0.7), DomainError);
  EXPECT_THROW(DiskPoint(std::sqrt(1.0 - 1e-13), 0.0), DomainError);
  EXPECT_NO_THROW(DiskPoint(0.999999, 0.0));
}

TEST(MetricScale, Examples) {
  EXPECT_DOUBLE_EQ(metric_scale(DiskPoint::origin()), 2.0);
  EXPECT_NEAR(metric_scale({0.5, 0.0}), 8.0 / 3.0, 1e-15);
  EXPECT_NEAR(metric_scale({0.0, 0.8}), 2.0 / 0.36, 1e-14);
}

TEST(HypInner, Examples) {
  const DiskPoint o = DiskPoint::origin();
  EXPECT_DOUBLE_EQ(hyp_inner({o, 1, 0}, {o, 1, 0}), 4.0);
  const DiskPoint p{0.3, -0.4};
  EXPECT_DOUBLE_EQ(hyp_inner({p, 1, 0}, {p, 0, 1}), 0.0);
  const DiskPoint h{0.5, 0.0};
  EXPECT_NEAR(hyp_inner({h, 1, 0}, {h, 1, 0}), 64.0 / 9.0, 1e-14);
  EXPECT_THROW(hyp_inner({o, 1, 0}, {h, 1, 0}), PreconditionError);
}

TEST(HypDistance, Examples) {
  const DiskPoint o = DiskPoint::origin();
  EXPECT_DOUBLE_EQ(hyp_distance(o, o), 0.0);
  EXPECT_NEAR(hyp_distance(o, {0.5, 0.0}), std::log(3.0), 1e-15);
  EXPECT_NEAR(hyp_distance(o, {0.5, 0.0}), std::acosh(5.0 / 3.0), 1e-15);
}

TEST(HypDistance, AgreesWithArccoshFormula) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 500; ++k) {
    const DiskPoint p = random_point(rng), q = random_point(rng);
    const double d = hyp_distance(p, q);
    EXPECT_NEAR(d, distance_arccosh(p, q), 1e-12 * std::max(1.0, d));
  }
}

TEST(HypDistance, MetricAxiomsProperty) {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 1000; ++k) {
    const DiskPoint p = random_point(rng), q = random_point(rng), r = random_point(rng);
    const double pq = hyp_distance(p, q);
    EXPECT_GE(pq, 0.0);
    EXPECT_DOUBLE_EQ(pq, hyp_distance(q, p));
    EXPECT_LE(hyp_distance(p, r), pq + hyp_distance(q, r) + 1e-12);
  }
}

TEST(Mobius, Examples) {
  const DiskPoint p{0.35, -0.6};
  const DiskPoint at_o = mobius_apply({p, MobiusIsometry::Direction::ToOrigin}, p);
  EXPECT_NEAR(at_o.x(), 0.0, 1e-15);
  EXPECT_NEAR(at_o.y(), 0.0, 1e-15);
  const DiskPoint back = mobius_apply({p, MobiusIsometry::Direction::FromOrigin}, DiskPoint::origin());
  EXPECT_NEAR(back.x(), p.x(), 1e-15);
  EXPECT_NEAR(back.y(), p.y(), 1e-15);
  const DiskPoint m = mobius_apply({{0.5, 0.0}, MobiusIsometry::Direction::ToOrigin}, DiskPoint::origin());
  EXPECT_DOUBLE_EQ(m.x(), -0.5);
  EXPECT_DOUBLE_EQ(m.y(), 0.0);
}

TEST(Mobius, InverseCompositionProperty) {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 1000; ++k) {
    const MobiusIsometry m = random_mobius(rng);
    const DiskPoint z = random_point(rng);
    const DiskPoint w = mobius_apply(m.inverse(), mobius_apply(m, z));
    EXPECT_LT(std::hypot(w.x() - z.x(), w.y() - z.y()), 1e-12);
  }
}

TEST(Mobius, DistanceInvarianceProperty) {
  std::mt19937_64 rng(14);
  for (int k = 0; k < 1000; ++k) {
    const MobiusIsometry m = random_mobius(rng);
    const DiskPoint p = random_point(rng), q = random_point(rng);
    EXPECT_LT(std::fabs(hyp_distance(mobius_apply(m, p), mobius_apply(m, q)) - hyp_distance(p, q)), 1e-12);
  }
}

TEST(Mobius, PushforwardPreservesMetric) {
  std::mt19937_64 rng(15);
  std::normal_distribution<double> g;
  for (int k = 0; k < 1000; ++k) {
    const MobiusIsometry m = random_mobius(rng);
    const DiskPoint b = random_point(rng);
    HTangent t{b, g(rng), g(rng)};
    const double n = hyp_norm(t);
    t.vx /= n;
    t.vy /= n;
    const HTangent s{b, g(rng), g(rng)};
    const HTangent mt = mobius_pushforward(m, t), ms = mobius_pushforward(m, s);
    EXPECT_NEAR(hyp_norm(mt), 1.0, 1e-12);
    EXPECT_NEAR(hyp_inner(mt, ms), hyp_inner(t, s), 1e-10 * std::max(1.0, std::fabs(hyp_inner(t, s))));
    const HTangent back = mobius_pushforward(m.inverse(), mt);
    EXPECT_NEAR(back.vx, t.vx, 1e-10);
    EXPECT_NEAR(back.vy, t.vy, 1e-10);
  }
}

TEST(Mobius, IdentityParameterLeavesTangentUnchanged) {
  const HTangent t{{0.2, 0.1}, 0.3, -0.7};
  const HTangent r = mobius_pushforward({DiskPoint::origin(), MobiusIsometry::Direction::ToOrigin}, t);
  EXPECT_DOUBLE_EQ(r.vx, t.vx);
  EXPECT_DOUBLE_EQ(r.vy, t.vy);
  EXPECT_EQ(r.base, t.base);
}

TEST(HyperbolicUnitTangent, EuclideanLengthBoundedByHalf) {
  std::mt19937_64 rng(16);
  for (int k = 0; k < 1000; ++k) {
    const DiskPoint b = random_point(rng, 0.999);
    const double euclid = 1.0 / metric_scale(b);  // unit hyperbolic vector
    EXPECT_NEAR(euclid, (1.0 - b.norm2()) / 2.0, 1e-15);
    EXPECT_LE(euclid, 0.5);
  }
}

TEST(DiskArea, MatchesClosedForm) {
  for (double t : {0.1, 0.3, 0.5, 1.0 / std::sqrt(3.0), 0.9, 0.99}) {
    const double exact = disk_area_closed_form(t);
    EXPECT_NEAR(disk_area(t, 20000), exact, 1e-6 * exact) << t;
  }
}

TEST(DiskArea, SpecialValues) {
  EXPECT_NEAR(disk_area(std::sqrt(0.5), 20000), 4.0 * std::numbers::pi, 4e-6 * std::numbers::pi);
  // 2π(2/(1 − t²) − 2) = 2π  ⇔  t² = 1/3.
  EXPECT_NEAR(disk_area(1.0 / std::sqrt(3.0), 20000), 2.0 * std::numbers::pi, 2e-6 * std::numbers::pi);
  EXPECT_NEAR(disk_area_closed_form(0.999), 2.0 * std::numbers::pi * (2.0 / 0.001999 - 2.0), 1e-9);
  EXPECT_GT(disk_area(0.999, 20000), 1000.0);
}

TEST(DiskArea, StrictlyIncreasing) {
  double prev = 0.0;
  for (int k = 1; k < 100; ++k) {
    const double a = disk_area(k / 100.0, 2000);
    EXPECT_GT(a, prev);
    prev = a;
  }
}

TEST(DiskArea, DomainErrors) {
  EXPECT_THROW(disk_area(1.0, 100), DomainError);
  EXPECT_THROW(disk_area(0.0, 100), DomainError);
  EXPECT_THROW(disk_area(0.5, 1), DomainError);
}
