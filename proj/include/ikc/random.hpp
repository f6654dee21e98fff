#pragma once

#include <random>

#include "ikc/complex.hpp"

namespace ikc {

// direct sum of towers and U^k-pairs, scrambled by a random graded unipotent basis change
UComplex random_complex(std::mt19937& rng, int max_gens, int max_power = 3, int grading_span = 6);
// random homogeneous map of the given degree with legal powers
GradedMap random_map(std::mt19937& rng, const UComplex& src, const UComplex& tgt, int degree, double density = 0.3);
// random graded automorphism, returned with its inverse
std::pair<GradedMap, GradedMap> random_automorphism(std::mt19937& rng, const UComplex& c);

}  // namespace ikc
