#pragma once

#include <string>
#include <vector>

#include "ikc/knot.hpp"

namespace ikc {

// derivative maps and canonical homotopies acting on monomials U^i V^j x of the localized complex
struct CanonicalMaps {
    MonoMap d, phi, psi, omega;
    MonoMap h_phi, h_psi, h_omega2, h_phi2, h_psi2;
    MonoMap h_A, h_B, h_Bt;
    MonoMap h_AB;   // A -> B
    MonoMap h_nu;   // A -> Bt, the nu-part
    MonoMap k_map;  // not U-equivariant, [d,k] = U^-1 Psi on Bt
    MonoMap h0;     // Bt -> Bt, [d,h0] = U^-1 Psi
    MonoMap h_ABt;  // h_nu + h0
};

// h0 comes from the solver
CanonicalMaps canonical_maps(const KnotComplex& c);

enum class Domain { A, B, Bt };
// monomials of the given domain with 0 <= (i or j) <= 3 and |i - j| <= width
std::vector<Mono> window(const KnotComplex& c, Domain dom, int width);

struct IdentityCheck {
    std::string name;
    std::size_t checked = 0;
    std::size_t failures = 0;
};
// all homotopy identities on monomial windows
std::vector<IdentityCheck> check_identities_window(const KnotComplex& c, int width);
// the same identities restricted to slices A_s, B_s, Bt_s for |s| <= g + 1 (exact, as maps over F[U])
std::vector<IdentityCheck> check_identities_slices(const KnotComplex& c);

enum class Canonical { H_Phi, H_Psi, H_Omega2, H_Phi2, H_Psi2, H_A, H_B, H_Bt, h_AB, h_ABt };
// slice-level map for the given level s (source slice chosen by kind)
GradedMap canonical_homotopy(Canonical kind, const KnotComplex& c, int s);

}  // namespace ikc
