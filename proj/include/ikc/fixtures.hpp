#pragma once

#include <vector>

#include "ikc/knot.hpp"

namespace ikc {

// exponents of the nonzero terms of a symmetrized Alexander polynomial, descending,
// for an L-space knot (coefficients alternate +1, -1, ...)
using Exponents = std::vector<int>;
Exponents torus_alexander(int p, int q);

// add a generator drawn at lattice position (p, q) with Maslov grading m
int add_at(KnotComplex& c, const std::string& name, int p, int q, int m);

// staircase drawn from x_0 at (0, -g), horizontal then vertical steps, with iota(x_i) = x_{n-i};
// this is the complex of the mirror of the L-space knot with the given exponents
KnotComplex staircase(const Exponents& e, const std::string& prefix = "x");
// positive L-space knot: dual of the staircase
KnotComplex lspace_knot(const Exponents& e, const std::string& prefix = "x");
KnotComplex torus_knot(int p, int q);  // positive torus knot, p, q > 0 coprime

KnotComplex trefoil();       // right-handed
KnotComplex figure_eight();  // iota(a) = a + x, iota(x) = x + d, so that iota^2 ~ 1 + Phi Psi

// complexes from the worked tensor product examples
KnotComplex fixture_c1();
KnotComplex fixture_c2();
KnotComplex fixture_c3();
KnotComplex fixture_c4();
KnotComplex fixture_c5();
KnotComplex fixture_c6();
KnotComplex fixture_c7();

}  // namespace ikc
