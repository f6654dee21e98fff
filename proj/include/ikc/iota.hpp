#pragma once

#include <boost/rational.hpp>
#include <optional>
#include <string>
#include <vector>

#include "ikc/complex.hpp"
#include "ikc/knot.hpp"

namespace ikc {

struct IotaComplex {
    UComplex base;
    GradedMap iota;  // degree 0
};

// omega = 1 + iota-bar
struct AlmostIotaComplex {
    UComplex base;
    GradedMap omega;
};

std::vector<std::string> validate(const IotaComplex& c);
std::vector<std::string> validate(const AlmostIotaComplex& c);

IotaComplex trivial_iota();
IotaComplex tensor(const IotaComplex& a, const IotaComplex& b);  // names joined by '.'
AlmostIotaComplex tensor(const AlmostIotaComplex& a, const AlmostIotaComplex& b);  // iota-bar x iota-bar
AlmostIotaComplex to_almost(const IotaComplex& c);
IotaComplex from_almost(const AlmostIotaComplex& c);  // iota = 1 + omega, not checked
// reduced model with iota transported as pi iota sigma
IotaComplex reduce(const IotaComplex& c);
AlmostIotaComplex reduce(const AlmostIotaComplex& c);
IotaComplex dual(const IotaComplex& c);

// A_0 slice with iota_K restricted to it
IotaComplex a0_iota(const KnotComplex& c);

// sequence (a_1, b_2, ..., a_{2m-1}, b_{2m}); a_i = +1 or -1
struct StdComplexParams {
    std::vector<int> a, b;
    std::string str() const;
};
StdComplexParams parse_std_params(const std::string& s);  // "+,-1,+,-3"
StdComplexParams negate(const StdComplexParams& p);
StdComplexParams repeat(const StdComplexParams& p, int n);
AlmostIotaComplex standard_complex(const StdComplexParams& p);
// false exactly when every a_i is + and the b_i are not non-increasing
bool sf_shape_obstruction(const StdComplexParams& p);

struct LocalWitness {
    GradedMap F;
    GradedMap h;
    int N = 0;  // U^N (F(t) - U^k t') is a boundary
};

std::optional<LocalWitness> exists_local_map(const IotaComplex& a, const IotaComplex& b);
bool local_equivalent(const IotaComplex& a, const IotaComplex& b);
// iota relations only modulo U
std::optional<LocalWitness> exists_almost_local_map(const AlmostIotaComplex& a, const AlmostIotaComplex& b);
bool almost_local_equivalent(const AlmostIotaComplex& a, const AlmostIotaComplex& b);

// knot-level: F equivariant of bidegree (0,0), h skew of bidegree (1,1), tower checked on B_0
struct KnotLocalWitness {
    KnotMap F, h;
    int N = 0;
};
std::optional<KnotLocalWitness> exists_knot_local_map(const KnotComplex& a, const KnotComplex& b);
bool knot_local_equivalent(const KnotComplex& a, const KnotComplex& b);

enum class MorphismMode { chain, iota, local, almost_local };
// iota is read as 1 + omega; empty result means ok
std::vector<std::string> verify_morphism(const AlmostIotaComplex& src, const AlmostIotaComplex& tgt, const GradedMap& F,
                                         const std::optional<GradedMap>& h, MorphismMode mode);

// mapping cone of Q(1 + iota): generator x at gr(x) + 1, Qx at gr(x)
struct QComplex {
    UComplex c;
    int n = 0;  // x_i has index i, Q x_i has index n + i
};
QComplex involutive_complex(const IotaComplex& ic);

struct InvolutiveD {
    int d = 0, d_lower = 0, d_upper = 0;
    int delta = 0;  // truncation depth at which the answers stabilized
};
InvolutiveD involutive_d(const IotaComplex& ic, int start_delta = 0);
int d_lower(const IotaComplex& ic);
int d_upper(const IotaComplex& ic);

struct VInvariants {
    int V0 = 0, V0_lower = 0, V0_upper = 0;
};
VInvariants v_invariants(const KnotComplex& c);
int V_s(const KnotComplex& c, int s);

using rational = boost::rational<long>;
rational lens_d(long p, long q, long i);

// the worked example: A_0^- with iota_K, the standard complex C, and the maps between them
struct KnotExample {
    IotaComplex a0;
    IotaComplex c;
    GradedMap psi, phi, H, J;
};
KnotExample knot_example();

}  // namespace ikc
