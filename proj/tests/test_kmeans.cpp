#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "iplan/errors.hpp"
#include "iplan/kmeans.hpp"

using namespace iplan;

TEST_CASE("two obvious blobs are separated") {
  std::vector<std::vector<double>> pts = {
      {0.0, 0.1}, {0.1, 0.0}, {0.05, 0.05}, {10.0, 10.1}, {10.1, 9.9}, {9.95, 10.0}};
  const KMeansResult r = kmeans(pts, 2, 1);
  CHECK(r.counts[0] + r.counts[1] == 6);
  CHECK(r.counts[0] == 3);
  CHECK(r.counts[1] == 3);
  CHECK(r.assignment[0] == r.assignment[1]);
  CHECK(r.assignment[0] == r.assignment[2]);
  CHECK(r.assignment[3] == r.assignment[4]);
  CHECK(r.assignment[0] != r.assignment[3]);
  CHECK(r.inertia < 0.2);
  // Centroids are the blob means (in some order).
  for (const auto& c : r.centroids) {
    const bool near_low = std::abs(c[0] - 0.05) < 0.1 && std::abs(c[1] - 0.05) < 0.1;
    const bool near_high = std::abs(c[0] - 10.0) < 0.2 && std::abs(c[1] - 10.0) < 0.2;
    CHECK((near_low || near_high));
  }
}

TEST_CASE("k equal to n gives one point per cluster and zero inertia") {
  std::vector<std::vector<double>> pts = {{0.0}, {5.0}, {9.0}};
  const KMeansResult r = kmeans(pts, 3, 7);
  CHECK(r.inertia == doctest::Approx(0.0));
  for (int c : r.counts) CHECK(c == 1);
}

TEST_CASE("deterministic for a fixed seed") {
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < 40; ++i)
    pts.push_back({static_cast<double>(i % 7), static_cast<double>((i * 3) % 11)});
  const KMeansResult a = kmeans(pts, 4, 123);
  const KMeansResult b = kmeans(pts, 4, 123);
  CHECK(a.assignment == b.assignment);
  CHECK(a.inertia == b.inertia);
  CHECK(a.centroids == b.centroids);
}

TEST_CASE("k = 1 returns the mean") {
  std::vector<std::vector<double>> pts = {{1.0, 2.0}, {3.0, 6.0}};
  const KMeansResult r = kmeans(pts, 1, 5);
  CHECK(r.centroids[0][0] == doctest::Approx(2.0));
  CHECK(r.centroids[0][1] == doctest::Approx(4.0));
  CHECK(r.counts[0] == 2);
}

TEST_CASE("invalid arguments throw") {
  std::vector<std::vector<double>> pts = {{1.0}, {2.0}};
  CHECK_THROWS_AS(kmeans(pts, 3, 1), InputError);
  CHECK_THROWS_AS(kmeans(pts, 0, 1), InputError);
  CHECK_THROWS_AS(kmeans({}, 1, 1), InputError);
}
