#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ikc/complex.hpp"

namespace ikc {

// bigraded complex over F2[U,V] (script U and V); coefficients forced by (grw, grz)
struct KnotComplex {
    std::vector<std::string> names;
    std::vector<int> grw, grz;
    F2Matrix d;     // row x lists targets of dx
    F2Matrix iota;  // skew involution, row x lists targets of iota(x)
    bool has_iota = false;

    int size() const { return static_cast<int>(grw.size()); }
    int alexander(int x) const { return (grw[x] - grz[x]) / 2; }
    int index(const std::string& name) const;
    void add_generator(const std::string& name, int gw, int gz);
    void add_arrow(int from, int to) { d.toggle(from, to); }
    void add_iota(int from, int to);
    int genus_bound() const;  // max |A|
};

// homogeneous F2[U,V]-linear (or skew-linear) map stored as bits
struct KnotMap {
    F2Matrix m;
    int dw = 0, dz = 0;
    bool skew = false;
};

struct Powers {
    int m, n;
};
// forced (U,V) powers of an arrow x -> y; throws on parity mismatch
Powers arrow_powers(const KnotComplex& s, const KnotComplex& t, int x, int y, int dw, int dz, bool skew);
bool powers_legal(const KnotComplex& s, const KnotComplex& t, int x, int y, int dw, int dz, bool skew,
                  bool allow_neg_u = false, bool allow_neg_v = false);

KnotMap knot_diff(const KnotComplex& c);
KnotMap knot_iota(const KnotComplex& c);
KnotMap knot_identity(int n);
// second after first
KnotMap compose(const KnotMap& first, const KnotMap& second);
KnotMap operator+(const KnotMap& a, const KnotMap& b);
KnotMap kron(const KnotMap& a, const KnotMap& b, int na, int nb);  // a tensor b
KnotMap knot_commutator(const KnotComplex& s, const KnotComplex& t, const KnotMap& f);

std::vector<std::string> validate(const KnotComplex& c);
// iota^2 + id + Phi Psi is null-homotopic; returns the witness
std::optional<KnotMap> iota_square_witness(const KnotComplex& c);

enum class Deriv { Phi, Psi };
KnotMap derivative_map(Deriv kind, const KnotComplex& c);

KnotComplex tensor(const KnotComplex& a, const KnotComplex& b, const std::string& sep = "");
enum class TensorIota { canonical, post_composed };
// canonical: i1 x i2 + (Phi1 x Psi2)(i1 x i2); post_composed: i1 x i2 + (i1 x i2)(Phi1 x Psi2)
KnotMap tensor_iota(const KnotComplex& a, const KnotComplex& b, TensorIota variant = TensorIota::canonical);
KnotComplex tensor_with_iota(const KnotComplex& a, const KnotComplex& b, const std::string& sep = "",
                             TensorIota variant = TensorIota::canonical);
KnotComplex dual(const KnotComplex& c);
// cancels every arrow with trivial U and V powers; iota is transported as pi iota sigma
KnotComplex reduce(const KnotComplex& c);
KnotComplex unknot();
KnotComplex knot_subcomplex(const KnotComplex& c, const std::vector<int>& keep);

// bigraded homotopy: h of bidegree f + (1,1), same skewness, with [d, h] = f
std::optional<KnotMap> find_knot_homotopy(const KnotComplex& s, const KnotComplex& t, const KnotMap& f,
                                          bool allow_neg_u = false, bool allow_neg_v = false);

// ---- monomials U^i V^j x, exponents may be negative (localized) ----
struct Mono {
    int gen, i, j;
    auto operator<=>(const Mono&) const = default;
};
using Chain = std::vector<Mono>;  // sorted, coefficients mod 2
using MonoMap = std::function<Chain(const Mono&)>;

void chain_add(Chain& acc, const Chain& c);
Chain chain_normalize(Chain c);
Chain apply_chain(const MonoMap& f, const Chain& c);
MonoMap mono_compose(MonoMap first, MonoMap second);
MonoMap mono_sum(std::vector<MonoMap> fs);
MonoMap mono_mult(int a, int b);  // multiply by U^a V^b
// monomial action of a bit map with forced powers
MonoMap mono_of(const KnotComplex& s, const KnotComplex& t, const KnotMap& f);

enum class SliceKind { A, B, Bt };
struct SliceComplex {
    UComplex u;
    SliceKind kind;
    int s;
    std::vector<int> i0, j0;  // basis U^i0 V^j0 x in the shifted picture
};
SliceComplex slice(const KnotComplex& c, SliceKind kind, int s);
// true (unshifted) monomial of a slice basis element
Mono slice_basis(const SliceComplex& sl, int x);
// restriction of a monomial map to slices; throws if an image leaves the target
GradedMap restrict_map(const MonoMap& f, const SliceComplex& src, const SliceComplex& tgt,
                       std::optional<int> degree = std::nullopt);

}  // namespace ikc
