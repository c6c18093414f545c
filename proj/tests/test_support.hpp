// Shared fixtures: the two worked three-level states and small builders.

#ifndef COHERE_TEST_SUPPORT_HPP
#define COHERE_TEST_SUPPORT_HPP

#include <cohere/matrix.hpp>

namespace cohere::testing {

// Family with fixed diagonal (0.1, 0.1, 0.8), entries (0,1) = 0.01 and
// (1,2) = 0.2i, and a real (0,2) entry t. The (0,2) phase never closes
// against the other two, so every member lands in the obstructed case.
inline Matrix corner_family(double t) {
  Matrix m(3, 3);
  m << Complex(0.1, 0.0), Complex(0.01, 0.0), Complex(t, 0.0),
       Complex(0.01, 0.0), Complex(0.1, 0.0), Complex(0.0, 0.2),
       Complex(t, 0.0), Complex(0.0, -0.2), Complex(0.8, 0.0);
  return m;
}

// The member at t = 0.17 sits on the feasible side of the determinant
// criterion, the member at t = 0.19 on the infeasible side.
inline Matrix equal_example() { return corner_family(0.17); }
inline Matrix strict_example() { return corner_family(0.19); }

// Hermitian 3x3 from its diagonal and upper entries.
inline Matrix hermitian3(double d0, double d1, double d2, Complex e01,
                         Complex e02, Complex e12) {
  Matrix m(3, 3);
  m << Complex(d0, 0.0), e01, e02,
       std::conj(e01), Complex(d1, 0.0), e12,
       std::conj(e02), std::conj(e12), Complex(d2, 0.0);
  return m;
}

}  // namespace cohere::testing

#endif
