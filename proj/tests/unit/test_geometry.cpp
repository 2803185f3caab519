#include <doctest.h>

#include <numbers>

#include "wfollow/geometry.hpp"

using namespace wfollow;
using doctest::Approx;

TEST_CASE("wrap_angle lands in (-pi, pi]") {
  constexpr double pi = std::numbers::pi;
  CHECK(wrap_angle(pi) == Approx(pi));
  CHECK(wrap_angle(-pi) == Approx(pi));
  CHECK(wrap_angle(3 * pi) == Approx(pi));
  CHECK(wrap_angle(2 * pi + 0.25) == Approx(0.25));
  CHECK(wrap_angle(-0.5) == Approx(-0.5));
  for (double a = -20.0; a <= 20.0; a += 0.37) {
    const double w = wrap_angle(a);
    CHECK(w > -pi);
    CHECK(w <= pi);
    CHECK(std::cos(w) == Approx(std::cos(a)));
    CHECK(std::sin(w) == Approx(std::sin(a)));
  }
}

TEST_CASE("rotate preserves length") {
  const Vec2 r = rotate({1.0, 0.0}, std::numbers::pi / 2);
  CHECK(r.x == Approx(0.0).epsilon(1e-12));
  CHECK(r.y == Approx(1.0));
  CHECK(norm(rotate({3.0, -4.0}, 1.234)) == Approx(5.0));
}

TEST_CASE("iou of boxes") {
  const Box a{50, 50, 20, 20};
  CHECK(iou(a, a) == Approx(1.0));
  CHECK(iou(a, Box{100, 100, 20, 20}) == 0.0);
  // Half-overlapping squares: 200 / (400 + 400 - 200).
  CHECK(iou(a, Box{60, 50, 20, 20}) == Approx(1.0 / 3.0));
  // Touching edges have no overlap.
  CHECK(iou(a, Box{70, 50, 20, 20}) == 0.0);
  CHECK(iou(a, Box{60, 55, 10, 10}) == Approx(iou(Box{60, 55, 10, 10}, a)));
}
