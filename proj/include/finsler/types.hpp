#ifndef FINSLER_TYPES_HPP
#define FINSLER_TYPES_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace finsler {

// Error taxonomy shared by all modules. Everything derives from Error so
// callers can catch the whole family at the CLI boundary.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Input lies outside the mathematical domain (non-finite, angle outside a
// curve's interval, point outside the conic sector).
class DomainError : public Error {
public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

// Strong convexity fails: 2 f f'' - f'^2 + 4 f^2 <= 0.
class ConvexityError : public Error {
public:
  explicit ConvexityError(const std::string& what) : Error(what) {}
};

// A quantity that must be nonzero (spray vector, tangent ratio, ...) vanishes.
class SingularityError : public Error {
public:
  explicit SingularityError(const std::string& what) : Error(what) {}
};

// Parameters violate a documented precondition (seed outside the admissible
// set, catalog parameter out of range, malformed matrix).
class ValidationError : public Error {
public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

// Vector in the Lie algebra, components with respect to the basis {e1, e2}.
struct Vec2 {
  double y1 = 0.0;
  double y2 = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.y1 + b.y1, a.y2 + b.y2}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.y1 - b.y1, a.y2 - b.y2}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.y1, s * a.y2}; }
inline Vec2 operator*(Vec2 a, double s) { return {s * a.y1, s * a.y2}; }

inline double norm(Vec2 a) { return std::hypot(a.y1, a.y2); }
inline double dot(Vec2 a, Vec2 b) { return a.y1 * b.y1 + a.y2 * b.y2; }
inline double cross(Vec2 a, Vec2 b) { return a.y1 * b.y2 - a.y2 * b.y1; }
inline double polar_angle(Vec2 a) { return std::atan2(a.y2, a.y1); }

// Two-dimensional Lie algebra with [e1, e2] = eps1 e1 + eps2 e2.  The
// non-Abelian case requires (eps1, eps2) != (0, 0); the canonical basis used
// by the solvers is (0, 1).
struct LieAlgebra2 {
  double eps1 = 0.0;
  double eps2 = 1.0;

  bool is_abelian() const { return eps1 == 0.0 && eps2 == 0.0; }

  // [u, v] = (u1 v2 - u2 v1) [e1, e2].
  Vec2 bracket(Vec2 u, Vec2 v) const {
    const double c = cross(u, v);
    return {c * eps1, c * eps2};
  }
};

inline LieAlgebra2 canonical_algebra() { return LieAlgebra2{0.0, 1.0}; }

// Closed interval on the angle axis.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double t) const { return t >= lo && t <= hi; }
  bool contains(const Interval& other) const {
    return lo <= other.lo && other.hi <= hi;
  }
};

inline void require_finite(double x, const char* name) {
  if (!std::isfinite(x)) throw DomainError(std::string(name) + " is not finite");
}

// i-th point of the uniform n-point grid over the interval, clamped so
// rounding never lands outside it.
inline double grid_point(const Interval& iv, int i, int n) {
  const double t = iv.lo + iv.width() * i / (n - 1);
  return t < iv.lo ? iv.lo : (t > iv.hi ? iv.hi : t);
}

}  // namespace finsler

#endif
