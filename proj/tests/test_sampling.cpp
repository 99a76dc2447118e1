#include <cmath>
#include <numbers>
#include <set>

#include <gtest/gtest.h>

#include "pimwnn/geometry.hpp"
#include "pimwnn/sampling.hpp"

using namespace pimwnn;

namespace {

constexpr double pi = std::numbers::pi;

bool inside_flower(const Point& p)
{
  const double dx = p[0] - 0.5, dy = p[1] - 0.5;
  const double r = 0.2 + 0.15 * std::sin(5 * std::atan2(dy, dx));
  return dx * dx + dy * dy < r * r;
}

} // namespace

TEST(SampleInterior, IntervalGrid)
{
  const auto pts = sample_interior(Geometry::interval(0.0, 1.0), 3, SamplingStrategy::GridEquispaced);
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_DOUBLE_EQ(pts[0][0], 0.25);
  EXPECT_DOUBLE_EQ(pts[1][0], 0.5);
  EXPECT_DOUBLE_EQ(pts[2][0], 0.75);
}

TEST(SampleInterior, RandomIsReproducible)
{
  const auto box = Geometry::box({{-1.0, 1.0}, {-1.0, 1.0}});
  const auto a = sample_interior(box, 5000, SamplingStrategy::UniformRandom, 42);
  const auto b = sample_interior(box, 5000, SamplingStrategy::UniformRandom, 42);
  const auto c = sample_interior(box, 5000, SamplingStrategy::UniformRandom, 43);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  for (const auto& p : a)
    EXPECT_TRUE(box.contains(p));
}

TEST(SampleInterior, FlowerPointsAreInside)
{
  const auto flower = Geometry::star({});
  const auto pts = sample_interior(flower, 1000, SamplingStrategy::UniformRandom, 7);
  ASSERT_EQ(pts.size(), 1000u);
  for (const auto& p : pts)
    EXPECT_TRUE(inside_flower(p)) << p[0] << "," << p[1];
  const auto grid = sample_interior(flower, 500, SamplingStrategy::GridEquispaced);
  ASSERT_EQ(grid.size(), 500u);
  for (const auto& p : grid)
    EXPECT_TRUE(inside_flower(p));
}

TEST(SampleInterior, CountsAndErrors)
{
  EXPECT_THROW(sample_interior(Geometry::interval(0.0, 1.0), 0, SamplingStrategy::GridEquispaced), InvalidArgument);
  const auto st = Geometry::box_time({{-1.0, 1.0}}, 0.5);
  for (std::size_t n : {1u, 7u, 100u, 5000u}) {
    const auto pts = sample_interior(st, n, SamplingStrategy::GridEquispaced);
    ASSERT_EQ(pts.size(), n);
    std::set<Point> unique(pts.begin(), pts.end());
    EXPECT_EQ(unique.size(), n);
    for (const auto& p : pts)
      EXPECT_TRUE(st.contains(p));
  }
}

TEST(SampleBoundary, IntervalEndpoints)
{
  const auto pts = sample_boundary(Geometry::interval(0.0, 1.0), 2, SamplingStrategy::GridEquispaced);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[0][0], 0.0);
  EXPECT_EQ(pts[1][0], 1.0);
  EXPECT_THROW(sample_boundary(Geometry::interval(0.0, 1.0), 1, SamplingStrategy::GridEquispaced), InvalidArgument);
}

TEST(SampleBoundary, BoxFacesSplitEvenly)
{
  const auto pts = sample_boundary(Geometry::box({{-1.0, 1.0}, {-1.0, 1.0}}), 400, SamplingStrategy::GridEquispaced);
  ASSERT_EQ(pts.size(), 400u);
  // faces are walked counter-clockwise from (-1,-1); each owns its starting corner
  for (std::size_t i = 0; i < 100; ++i) {
    EXPECT_EQ(pts[i][1], -1.0);
    EXPECT_EQ(pts[100 + i][0], 1.0);
    EXPECT_EQ(pts[200 + i][1], 1.0);
    EXPECT_EQ(pts[300 + i][0], -1.0);
  }
  std::set<Point> unique(pts.begin(), pts.end());
  EXPECT_EQ(unique.size(), 400u);
}

TEST(SampleBoundary, FlowerAtQuarterTurns)
{
  const auto pts = sample_boundary(Geometry::star({}), 4, SamplingStrategy::GridEquispaced);
  ASSERT_EQ(pts.size(), 4u);
  // r(0) = 0.2, r(pi/2) = 0.35, r(pi) = 0.2, r(3pi/2) = 0.05
  const double expected[4][2] = {{0.7, 0.5}, {0.5, 0.85}, {0.3, 0.5}, {0.5, 0.45}};
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(pts[i][0], expected[i][0], 1e-14);
    EXPECT_NEAR(pts[i][1], expected[i][1], 1e-14);
  }
  const auto g = Geometry::star({});
  for (const auto& p : sample_boundary(g, 64, SamplingStrategy::GridEquispaced))
    EXPECT_TRUE(g.on_boundary(p, 1e-12));
}

TEST(SampleBoundary, SpaceTimeExcludesInitialFace)
{
  const auto st = Geometry::box_time({{-1.0, 1.0}}, 0.5);
  const auto b = sample_boundary(st, 100, SamplingStrategy::GridEquispaced);
  ASSERT_EQ(b.size(), 100u);
  for (const auto& p : b) {
    EXPECT_TRUE(p[0] == -1.0 || p[0] == 1.0);
    EXPECT_GT(p[1], 0.0);
    EXPECT_LE(p[1], 0.5);
  }
  const auto init = sample_initial(st, 200, SamplingStrategy::GridEquispaced);
  ASSERT_EQ(init.size(), 200u);
  for (const auto& p : init)
    EXPECT_EQ(p[1], 0.0);
  EXPECT_THROW(sample_initial(Geometry::interval(0.0, 1.0), 5, SamplingStrategy::GridEquispaced), InvalidArgument);
}

TEST(Geometry, Validation)
{
  EXPECT_THROW(Geometry::interval(1.0, 1.0), InvalidArgument);
  StarShape bad;
  bad.base = 0.1;
  bad.amplitude = 0.15;
  EXPECT_THROW(Geometry::star(bad), InvalidArgument);
  EXPECT_NEAR(StarShape{}.radius(pi / 2), 0.35, 1e-15);
}

TEST(AssemblyProperty, SamplingDeterminism)
{
  const auto flower = Geometry::star({});
  for (auto s : {SamplingStrategy::GridEquispaced, SamplingStrategy::UniformRandom}) {
    EXPECT_EQ(sample_interior(flower, 300, s, 11), sample_interior(flower, 300, s, 11));
    EXPECT_EQ(sample_boundary(flower, 60, s, 11), sample_boundary(flower, 60, s, 11));
  }
}
