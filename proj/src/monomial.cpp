#include "ikc/monomial.hpp"

#include <algorithm>
#include <fmt/core.h>
#include <stdexcept>

namespace ikc {

namespace {

struct arrow {
    int y, m, n;
};

std::vector<std::vector<arrow>> diff_arrows(const KnotComplex& c) {
    std::vector<std::vector<arrow>> out(c.size());
    for (int x = 0; x < c.size(); ++x)
        for (int y : c.d.r[x]) {
            Powers p = arrow_powers(c, c, x, y, -1, -1, false);
            out[x].push_back({y, p.m, p.n});
        }
    return out;
}

bool odd(long v) { return (v % 2 + 2) % 2 == 1; }
long choose2(long v) { return v * (v - 1) / 2; }

// map built from the differential's arrows: coefficient(i, j, m, n) and output shift (du, dv) relative to U^{i+m} V^{j+n}
template <class Coef>
MonoMap arrow_map(std::vector<std::vector<arrow>> ar, Coef coef, int du, int dv) {
    return [ar, coef, du, dv](const Mono& mo) {
        Chain out;
        for (const arrow& a : ar[mo.gen])
            if (odd(coef(mo.i, mo.j, a.m, a.n))) out.push_back({a.y, mo.i + a.m + du, mo.j + a.n + dv});
        return chain_normalize(std::move(out));
    };
}

// diagonal map X -> coef(i,j) * U^{i+du} V^{j+dv} X
template <class Coef>
MonoMap diag_map(Coef coef, int du, int dv) {
    return [coef, du, dv](const Mono& mo) {
        if (odd(coef(mo.i, mo.j))) return Chain{{mo.gen, mo.i + du, mo.j + dv}};
        return Chain{};
    };
}

long ell(long i, long j, long m, long n) { return std::min(i + m, j + n) - std::min(i, j); }

MonoMap commutator_mono(const MonoMap& d, const MonoMap& h) {
    return mono_sum({mono_compose(h, d), mono_compose(d, h)});
}

}  // namespace

CanonicalMaps canonical_maps(const KnotComplex& c) {
    auto ar = diff_arrows(c);
    CanonicalMaps k;
    k.d = arrow_map(ar, [](long, long, long, long) { return 1L; }, 0, 0);
    k.phi = arrow_map(ar, [](long, long, long m, long) { return m; }, -1, 0);
    k.psi = arrow_map(ar, [](long, long, long, long n) { return n; }, 0, -1);
    k.omega = arrow_map(ar, [](long i, long j, long m, long n) { return ell(i, j, m, n); }, -1, -1);
    k.h_omega2 = arrow_map(ar, [](long i, long j, long m, long n) { return choose2(ell(i, j, m, n)); }, -2, -2);
    k.h_phi2 = arrow_map(ar, [](long, long, long m, long) { return choose2(m); }, -2, 0);
    k.h_psi2 = arrow_map(ar, [](long, long, long, long n) { return choose2(n); }, 0, -2);
    k.h_phi = diag_map([](long i, long j) { return std::max(0L, i - j); }, -1, 0);
    k.h_psi = diag_map([](long i, long j) { return std::max(0L, j - i); }, 0, -1);

    k.h_A = mono_sum({mono_compose(k.h_psi, k.phi), mono_compose(mono_compose(k.omega, k.h_phi), mono_mult(1, 0)),
                      mono_compose(k.h_omega2, mono_mult(1, 1))});
    k.h_B = mono_sum({mono_compose(k.h_psi, k.phi), mono_compose(mono_compose(k.h_phi, k.phi), mono_mult(1, -1)),
                      mono_compose(k.h_phi2, mono_mult(1, -1))});
    k.h_Bt = mono_sum({mono_compose(k.psi, k.h_phi), mono_compose(mono_compose(k.psi, k.h_psi), mono_mult(-1, 1)),
                       mono_compose(k.h_psi2, mono_mult(-1, 1))});

    k.h_AB = diag_map(
        [](long i, long j) {
            long e = std::max(i - j, 0L);
            return e * (e - 1) / 2;
        },
        -1, -1);
    k.h_nu = diag_map(
        [](long i, long j) {
            long v = std::max(0L, j - i);
            return v * (v + 1) / 2;
        },
        -1, -1);
    k.k_map = diag_map([](long, long j) { return j; }, -1, -1);

    // U^-1 Psi is null-homotopic once U is inverted
    KnotMap upsi = derivative_map(Deriv::Psi, c);
    upsi.dw += 2;
    auto h0 = find_knot_homotopy(c, c, upsi, true, false);
    if (!h0) throw std::runtime_error("canonical_maps: no homotopy h0 with [d,h0] = U^-1 Psi");
    k.h0 = mono_of(c, c, *h0);
    k.h_ABt = mono_sum({k.h_nu, k.h0});
    return k;
}

std::vector<Mono> window(const KnotComplex& c, Domain dom, int width) {
    std::vector<Mono> out;
    for (int x = 0; x < c.size(); ++x)
        for (int a = 0; a <= 3; ++a)
            for (int b = a - width; b <= a + width; ++b) {
                switch (dom) {
                    case Domain::A:
                        if (b >= 0) out.push_back({x, a, b});
                        break;
                    case Domain::B:
                        out.push_back({x, a, b});
                        break;
                    case Domain::Bt:
                        out.push_back({x, b, a});
                        break;
                }
            }
    return out;
}

namespace {

void check_on(IdentityCheck& ic, const std::vector<Mono>& dom, const MonoMap& lhs, const MonoMap& rhs) {
    for (const Mono& m : dom) {
        ++ic.checked;
        if (lhs(m) != rhs(m)) ++ic.failures;
    }
}

}  // namespace

std::vector<IdentityCheck> check_identities_window(const KnotComplex& c, int width) {
    CanonicalMaps k = canonical_maps(c);
    auto A = window(c, Domain::A, width), B = window(c, Domain::B, width), Bt = window(c, Domain::Bt, width);
    std::vector<IdentityCheck> out;
    auto add = [&](const std::string& name, const std::vector<Mono>& dom, const MonoMap& lhs, const MonoMap& rhs) {
        IdentityCheck ic{name};
        check_on(ic, dom, lhs, rhs);
        out.push_back(ic);
    };
    MonoMap phipsi = mono_compose(k.psi, k.phi);
    add("[d,H_Phi] = Phi + V Omega", A, commutator_mono(k.d, k.h_phi),
        mono_sum({k.phi, mono_compose(k.omega, mono_mult(0, 1))}));
    add("[d,H_Psi] = Psi + U Omega", A, commutator_mono(k.d, k.h_psi),
        mono_sum({k.psi, mono_compose(k.omega, mono_mult(1, 0))}));
    add("[d,H_Omega2] = Omega^2", A, commutator_mono(k.d, k.h_omega2), mono_compose(k.omega, k.omega));
    add("[d,H_Phi2] = Phi^2", A, commutator_mono(k.d, k.h_phi2), mono_compose(k.phi, k.phi));
    add("[d,H_Psi2] = Psi^2", A, commutator_mono(k.d, k.h_psi2), mono_compose(k.psi, k.psi));
    add("[d,H_A] = Phi Psi", A, commutator_mono(k.d, k.h_A), phipsi);
    add("[d,H_B] = Phi Psi", B, commutator_mono(k.d, k.h_B), phipsi);
    add("[d,H_Bt] = Phi Psi", Bt, commutator_mono(k.d, k.h_Bt), phipsi);
    add("[d,h_AB] = v H_A + H_B v", A, commutator_mono(k.d, k.h_AB), mono_sum({k.h_A, k.h_B}));
    add("[d,k] = U^-1 Psi v~", A, commutator_mono(k.d, k.k_map), mono_compose(k.psi, mono_mult(-1, 0)));
    add("[d,h_ABt] = v~ H_A + H_Bt v~", A, commutator_mono(k.d, k.h_ABt), mono_sum({k.h_A, k.h_Bt}));
    return out;
}

std::vector<IdentityCheck> check_identities_slices(const KnotComplex& c) {
    CanonicalMaps k = canonical_maps(c);
    int g = c.genus_bound();
    std::vector<IdentityCheck> out;
    auto run = [&](const std::string& name, SliceKind sk, SliceKind tk, int shift, const MonoMap& h,
                   const MonoMap& rhs) {
        IdentityCheck ic{name};
        for (int s = -g - 1; s <= g + 1; ++s) {
            SliceComplex src = slice(c, sk, s), tgt = slice(c, tk, s + shift);
            ++ic.checked;
            try {
                GradedMap hm = restrict_map(h, src, tgt);
                GradedMap rm = restrict_map(rhs, src, tgt);
                GradedMap lm = commutator(src.u, tgt.u, hm);
                bool ok = lm.m == rm.m;
                if (ok && !rm.m.is_zero() && !hm.m.is_zero()) ok = lm.degree == rm.degree;
                if (!ok) ++ic.failures;
            } catch (const std::runtime_error&) {
                ++ic.failures;
            }
        }
        out.push_back(ic);
    };
    MonoMap phipsi = mono_compose(k.psi, k.phi);
    run("[d,H_Phi] = Phi + V Omega", SliceKind::A, SliceKind::A, 1, k.h_phi,
        mono_sum({k.phi, mono_compose(k.omega, mono_mult(0, 1))}));
    run("[d,H_Psi] = Psi + U Omega", SliceKind::A, SliceKind::A, -1, k.h_psi,
        mono_sum({k.psi, mono_compose(k.omega, mono_mult(1, 0))}));
    run("[d,H_Omega2] = Omega^2", SliceKind::A, SliceKind::A, 0, k.h_omega2, mono_compose(k.omega, k.omega));
    run("[d,H_Phi2] = Phi^2", SliceKind::A, SliceKind::A, 2, k.h_phi2, mono_compose(k.phi, k.phi));
    run("[d,H_Psi2] = Psi^2", SliceKind::A, SliceKind::A, -2, k.h_psi2, mono_compose(k.psi, k.psi));
    run("[d,H_A] = Phi Psi", SliceKind::A, SliceKind::A, 0, k.h_A, phipsi);
    run("[d,H_B] = Phi Psi", SliceKind::B, SliceKind::B, 0, k.h_B, phipsi);
    run("[d,H_Bt] = Phi Psi", SliceKind::Bt, SliceKind::Bt, 0, k.h_Bt, phipsi);
    run("[d,h_AB] = v H_A + H_B v", SliceKind::A, SliceKind::B, 0, k.h_AB, mono_sum({k.h_A, k.h_B}));
    run("[d,h_ABt] = v~ H_A + H_Bt v~", SliceKind::A, SliceKind::Bt, 0, k.h_ABt, mono_sum({k.h_A, k.h_Bt}));
    return out;
}

GradedMap canonical_homotopy(Canonical kind, const KnotComplex& c, int s) {
    CanonicalMaps k = canonical_maps(c);
    auto on = [&](const MonoMap& f, SliceKind sk, SliceKind tk, int shift) {
        return restrict_map(f, slice(c, sk, s), slice(c, tk, s + shift));
    };
    switch (kind) {
        case Canonical::H_Phi: return on(k.h_phi, SliceKind::A, SliceKind::A, 1);
        case Canonical::H_Psi: return on(k.h_psi, SliceKind::A, SliceKind::A, -1);
        case Canonical::H_Omega2: return on(k.h_omega2, SliceKind::A, SliceKind::A, 0);
        case Canonical::H_Phi2: return on(k.h_phi2, SliceKind::A, SliceKind::A, 2);
        case Canonical::H_Psi2: return on(k.h_psi2, SliceKind::A, SliceKind::A, -2);
        case Canonical::H_A: return on(k.h_A, SliceKind::A, SliceKind::A, 0);
        case Canonical::H_B: return on(k.h_B, SliceKind::B, SliceKind::B, 0);
        case Canonical::H_Bt: return on(k.h_Bt, SliceKind::Bt, SliceKind::Bt, 0);
        case Canonical::h_AB: return on(k.h_AB, SliceKind::A, SliceKind::B, 0);
        case Canonical::h_ABt: return on(k.h_ABt, SliceKind::A, SliceKind::Bt, 0);
    }
    throw std::runtime_error("canonical_homotopy: unknown kind");
}

}  // namespace ikc
