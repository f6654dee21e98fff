#pragma once

#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ikc/complex.hpp"

namespace ikc {

// n <= 3 dimensional box of complexes; points are indexed in mixed radix with axis 0 fastest
struct Hyperbox {
    std::vector<int> size;
    std::vector<UComplex> complexes;
    // (point index, nonzero step mask) -> D^mask at that point, degree |mask| - 1; absent means zero
    std::map<std::pair<int, unsigned>, GradedMap> maps;

    Hyperbox() = default;
    explicit Hyperbox(std::vector<int> sz);  // empty complexes

    int dim() const { return static_cast<int>(size.size()); }
    int num_points() const;
    int index(const std::vector<int>& pt) const;
    std::vector<int> point(int idx) const;
    // point + mask, or -1 outside the box
    int step(int idx, unsigned mask) const;

    UComplex& at(const std::vector<int>& pt) { return complexes[index(pt)]; }
    const UComplex& at(const std::vector<int>& pt) const { return complexes[index(pt)]; }
    // zero map of the right shape when absent
    GradedMap get(int idx, unsigned mask) const;
    void set(int idx, unsigned mask, GradedMap f);
    void set(const std::vector<int>& pt, unsigned mask, GradedMap f) { set(index(pt), mask, std::move(f)); }
    bool has(int idx, unsigned mask) const;
    void drop_zero_maps();

    bool operator==(const Hyperbox& o) const;
};

int mask_weight(unsigned mask);
std::string mask_str(unsigned mask, int n);  // axis 0 first, e.g. "110"

struct HyperboxViolation {
    std::vector<int> at;
    unsigned mask = 0;
    std::string str(int n) const;
};

// shape and map checks; empty means well formed
std::vector<std::string> check_shape(const Hyperbox& h);
// relation sum_{e' <= e} D^{e-e'} D^{e'} = 0 at every (point, e)
std::vector<HyperboxViolation> check_relations(const Hyperbox& h);
// shape errors followed by relation violations
std::vector<std::string> validate(const Hyperbox& h);

// sub-box with coordinates [from, to] along the axis
Hyperbox restrict_box(const Hyperbox& h, int axis, int from, int to);
// face of h2 at 0 must equal the face of h1 at its end, complexes and maps alike
Hyperbox stack(const Hyperbox& h1, const Hyperbox& h2, int axis);
// at most one axis may be longer than 1
Hyperbox compress(const Hyperbox& h);

// completes a 3-cube missing D^{011} at (1,0,0) and D^{111} at (0,0,0); D^{100} at the origin must be
// a homotopy equivalence. An isomorphism edge gives D^{011} = K E and D^{111} = 0
Hyperbox fill_cube(const Hyperbox& partial);

// total complex, point p shifted by -|p|; blocks in point order
struct TotalComplex {
    UComplex c;
    std::vector<int> offset;  // first generator of each point
};
TotalComplex total_complex(const Hyperbox& h);
// for a cube viewed as a map from the face at 0 to the face at 1 along the axis: degree 0 chain map
// between the two face totals
GradedMap edge_map(const Hyperbox& h, int axis);
Hyperbox face(const Hyperbox& h, int axis, int coord);  // dimension drops by one

// random valid box: vertex complexes C + acyclic pairs, edges identity or zero on C, then conjugated by a
// random filtered automorphism of the total complex
Hyperbox random_hyperbox(std::mt19937& rng, const std::vector<int>& size, int max_gens = 6, bool first_edge_equiv = false);

}  // namespace ikc
