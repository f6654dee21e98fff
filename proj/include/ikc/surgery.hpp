#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ikc/iota.hpp"
#include "ikc/knot.hpp"

namespace ikc {

// surgery slope p/q with q > 0 and gcd(p, q) = 1; p = 0 is zero surgery
struct Slope {
    long p = 1, q = 1;
    std::string str() const;
    bool operator==(const Slope&) const = default;
};
Slope parse_slope(const std::string& s);  // "3", "-2", "3/2", "0"
Slope make_slope(long p, long q = 1);     // reduces, throws on q = 0

// window g + ceil(|p/q|) + 1 with g = max |A|
int default_window(const KnotComplex& c, const Slope& slope);

// summand index k: A_{floor(k/q)} x {k}; h sends k to k + p, conjugation sends k to q - 1 - k
enum class Part { A, B };
struct ConeSummand {
    Part part;
    long k = 0;
    int s = 0;      // slice index
    int first = 0;  // first generator of the block in the cone
    int size = 0;
    int shift = 0;  // grading shift added to the slice gradings
};

struct MappingCone {
    KnotComplex parent;
    Slope slope;
    int b = 0;
    std::vector<ConeSummand> summands;
    UComplex x;  // truncated cone, integer gradings, differential includes v and h
    GradedMap v, h, iota_a, iota_b, H, iota;
    std::vector<long> label;  // Spin^c label of each generator, k mod |p|

    int summand_of(int gen) const;
};

// F_s: Bt_s -> B_{s+n}, the restriction of iota_K (B slices are identified by the V-action)
GradedMap flip_map(const KnotComplex& c, int s);

MappingCone mapping_cone(const KnotComplex& c, const Slope& slope, std::optional<int> b = std::nullopt);
MappingCone integer_cone(const KnotComplex& c, long n, std::optional<int> b = std::nullopt);
MappingCone rational_cone(const KnotComplex& c, long p, long q, std::optional<int> b = std::nullopt);
MappingCone zero_surgery_cone(const KnotComplex& c);

// structural checks: d^2 = 0, iota chain map, iota^2 ~ id, h and H factor through the inclusion into Bt
std::vector<std::string> check_cone(const MappingCone& mc);

std::vector<long> spin_c_labels(const Slope& slope);
// self-conjugate labels, [0] first when present
struct SelfConjugate {
    long label;
    std::string name;  // "[0]" or "[p/2q]"
};
std::vector<SelfConjugate> self_conjugate_classes(const Slope& slope);
long conjugate_label(const Slope& slope, long label);

UComplex class_complex(const MappingCone& mc, long label);
IotaComplex class_iota_complex(const MappingCone& mc, long label);  // throws unless self-conjugate

// d of the lens space (or its mirror) for the class; used as the calibration target
rational lens_target(const Slope& slope, long label);

struct ClassInvariants {
    long label = 0;
    std::string name;
    bool self_conjugate = false;
    rational d, d_lower, d_upper;  // d_lower, d_upper meaningful only when self-conjugate
    bool operator==(const ClassInvariants&) const = default;
};

// absolute values by calibrating against the unknot cone of the same slope
std::vector<ClassInvariants> cone_invariants(const KnotComplex& c, const Slope& slope,
                                             std::optional<int> b = std::nullopt);
// d from the rational surgery formula for every class; involutive terms on self-conjugate classes
std::vector<ClassInvariants> formula_invariants(const KnotComplex& c, const Slope& slope);

struct SurgeryReport {
    Slope slope;
    int b = 0;
    std::vector<ClassInvariants> cone, formula;
    bool agree() const;
};
SurgeryReport surgery_invariants(const KnotComplex& c, const Slope& slope, std::optional<int> b = std::nullopt);

// small complex in the local class of a self-conjugate Spin^c structure, graded to match the cone class
IotaComplex minimal_local_representative(const KnotComplex& c, const Slope& slope, long label);

// enhanced morphism between cones induced by F (equivariant, bidegree (0,0)) and h (skew, bidegree (1,1))
// with F iota + iota' F = [d, h]
struct ConeMorphism {
    GradedMap F;  // degree 0 chain map
    GradedMap G;  // degree 1, F iota + iota' F = [d, G]
};
ConeMorphism cone_functor(const MappingCone& src, const MappingCone& tgt, const KnotMap& F, const KnotMap& h);

}  // namespace ikc
