#include "ikc/knot.hpp"

#include <algorithm>
#include <cstdlib>
#include <fmt/core.h>
#include <stdexcept>

namespace ikc {

int KnotComplex::index(const std::string& name) const {
    for (int i = 0; i < size(); ++i)
        if (names[i] == name) return i;
    throw std::runtime_error("unknown generator '" + name + "'");
}

void KnotComplex::add_generator(const std::string& name, int gw, int gz) {
    if ((gw - gz) % 2 != 0) throw std::runtime_error("generator " + name + ": grw - grz must be even");
    names.push_back(name);
    grw.push_back(gw);
    grz.push_back(gz);
    for (F2Matrix* m : {&d, &iota}) {
        m->rows++;
        m->cols++;
        m->r.emplace_back();
    }
}

void KnotComplex::add_iota(int from, int to) {
    iota.toggle(from, to);
    has_iota = true;
}

int KnotComplex::genus_bound() const {
    int g = 0;
    for (int x = 0; x < size(); ++x) g = std::max(g, std::abs(alexander(x)));
    return g;
}

static int half(int v) {
    if (v % 2 != 0) throw std::runtime_error("arrow_powers: parity mismatch");
    return v / 2;
}

Powers arrow_powers(const KnotComplex& s, const KnotComplex& t, int x, int y, int dw, int dz, bool skew) {
    if (skew) return {half(t.grw[y] - s.grz[x] - dw), half(t.grz[y] - s.grw[x] - dz)};
    return {half(t.grw[y] - s.grw[x] - dw), half(t.grz[y] - s.grz[x] - dz)};
}

bool powers_legal(const KnotComplex& s, const KnotComplex& t, int x, int y, int dw, int dz, bool skew,
                  bool allow_neg_u, bool allow_neg_v) {
    int a = skew ? t.grw[y] - s.grz[x] - dw : t.grw[y] - s.grw[x] - dw;
    int b = skew ? t.grz[y] - s.grw[x] - dz : t.grz[y] - s.grz[x] - dz;
    if (a % 2 != 0 || b % 2 != 0) return false;
    return (a >= 0 || allow_neg_u) && (b >= 0 || allow_neg_v);
}

KnotMap knot_diff(const KnotComplex& c) { return {c.d, -1, -1, false}; }
KnotMap knot_iota(const KnotComplex& c) { return {c.iota, 0, 0, true}; }
KnotMap knot_identity(int n) { return {F2Matrix::identity(n), 0, 0, false}; }

KnotMap compose(const KnotMap& f, const KnotMap& g) {
    KnotMap r;
    r.m = f.m * g.m;
    if (!f.skew && !g.skew) {
        r.dw = f.dw + g.dw;
        r.dz = f.dz + g.dz;
    } else if (f.skew && g.skew) {
        r.dw = f.dz + g.dw;
        r.dz = f.dw + g.dz;
    } else if (!f.skew && g.skew) {
        r.dw = f.dz + g.dw;
        r.dz = f.dw + g.dz;
        r.skew = true;
    } else {
        r.dw = f.dw + g.dw;
        r.dz = f.dz + g.dz;
        r.skew = true;
    }
    return r;
}

KnotMap operator+(const KnotMap& a, const KnotMap& b) {
    if (a.m.is_zero()) return {b.m + a.m, b.dw, b.dz, b.skew};
    if (!b.m.is_zero() && (a.dw != b.dw || a.dz != b.dz || a.skew != b.skew))
        throw std::runtime_error(fmt::format("knot map sum: ({},{},{}) vs ({},{},{})", a.dw, a.dz, a.skew, b.dw,
                                             b.dz, b.skew));
    return {a.m + b.m, a.dw, a.dz, a.skew};
}

KnotMap kron(const KnotMap& a, const KnotMap& b, int na, int nb) {
    if (a.skew != b.skew) throw std::runtime_error("kron: mixed skewness");
    KnotMap r;
    r.m = F2Matrix(na * nb, a.m.cols * b.m.cols);
    int nbt = b.m.cols;
    for (int x = 0; x < na; ++x)
        for (int y = 0; y < nb; ++y) {
            auto& row = r.m.r[x * nb + y];
            for (int x2 : a.m.r[x])
                for (int y2 : b.m.r[y]) row.push_back(x2 * nbt + y2);
            std::sort(row.begin(), row.end());
        }
    r.dw = a.dw + b.dw;
    r.dz = a.dz + b.dz;
    r.skew = a.skew;
    return r;
}

KnotMap knot_commutator(const KnotComplex& s, const KnotComplex& t, const KnotMap& f) {
    KnotMap a = compose(f, knot_diff(t));
    KnotMap b = compose(knot_diff(s), f);
    return {a.m + b.m, a.dw, a.dz, a.skew};
}

std::vector<std::string> validate(const KnotComplex& c) {
    std::vector<std::string> out;
    int n = c.size();
    if (c.d.rows != n || c.d.cols != n || c.iota.rows != n || c.iota.cols != n) {
        out.push_back("shape mismatch");
        return out;
    }
    for (int x = 0; x < n; ++x) {
        if ((c.grw[x] - c.grz[x]) % 2 != 0) out.push_back("parity " + c.names[x]);
        for (int y : c.d.r[x])
            if (!powers_legal(c, c, x, y, -1, -1, false))
                out.push_back(fmt::format("diff {}->{}", c.names[x], c.names[y]));
        for (int y : c.iota.r[x])
            if (!powers_legal(c, c, x, y, 0, 0, true))
                out.push_back(fmt::format("iota {}->{}", c.names[x], c.names[y]));
    }
    if (!out.empty()) return out;
    F2Matrix dd = c.d * c.d;
    for (int x = 0; x < n; ++x)
        for (int z : dd.r[x]) out.push_back(fmt::format("d^2 {}->{}", c.names[x], c.names[z]));
    if (c.has_iota) {
        F2Matrix com = c.d * c.iota + c.iota * c.d;
        for (int x = 0; x < n; ++x)
            for (int z : com.r[x]) out.push_back(fmt::format("iota not a chain map at {}->{}", c.names[x], c.names[z]));
    }
    return out;
}

KnotMap derivative_map(Deriv kind, const KnotComplex& c) {
    KnotMap r;
    r.m = F2Matrix(c.size(), c.size());
    r.dw = kind == Deriv::Phi ? 1 : -1;
    r.dz = kind == Deriv::Phi ? -1 : 1;
    for (int x = 0; x < c.size(); ++x)
        for (int y : c.d.r[x]) {
            Powers p = arrow_powers(c, c, x, y, -1, -1, false);
            int e = kind == Deriv::Phi ? p.m : p.n;
            if (e % 2 != 0) r.m.r[x].push_back(y);
        }
    return r;
}

std::optional<KnotMap> iota_square_witness(const KnotComplex& c) {
    KnotMap f = compose(knot_iota(c), knot_iota(c)) + knot_identity(c.size()) +
                compose(derivative_map(Deriv::Psi, c), derivative_map(Deriv::Phi, c));
    f.dw = f.dz = 0;
    f.skew = false;
    return find_knot_homotopy(c, c, f);
}

KnotComplex tensor(const KnotComplex& a, const KnotComplex& b, const std::string& sep) {
    KnotComplex r;
    int na = a.size(), nb = b.size();
    for (int x = 0; x < na; ++x)
        for (int y = 0; y < nb; ++y) r.add_generator(a.names[x] + sep + b.names[y], a.grw[x] + b.grw[y], a.grz[x] + b.grz[y]);
    for (int x = 0; x < na; ++x)
        for (int y = 0; y < nb; ++y) {
            auto& row = r.d.r[x * nb + y];
            for (int x2 : a.d.r[x]) row.push_back(x2 * nb + y);
            for (int y2 : b.d.r[y]) row.push_back(x * nb + y2);
            std::sort(row.begin(), row.end());
        }
    return r;
}

KnotMap tensor_iota(const KnotComplex& a, const KnotComplex& b, TensorIota variant) {
    if (!a.has_iota || !b.has_iota) throw std::runtime_error("tensor_iota: factor without involution");
    int na = a.size(), nb = b.size();
    KnotMap ii = kron(knot_iota(a), knot_iota(b), na, nb);
    KnotMap pp = kron(derivative_map(Deriv::Phi, a), derivative_map(Deriv::Psi, b), na, nb);
    KnotMap corr = variant == TensorIota::canonical ? compose(ii, pp) : compose(pp, ii);
    return ii + corr;
}

KnotComplex tensor_with_iota(const KnotComplex& a, const KnotComplex& b, const std::string& sep, TensorIota variant) {
    KnotComplex r = tensor(a, b, sep);
    r.iota = tensor_iota(a, b, variant).m;
    r.has_iota = true;
    return r;
}

KnotComplex reduce(const KnotComplex& c) {
    UComplex u;
    u.names = c.names;
    u.gr = c.grw;
    u.d = c.d;
    Reduction r = reduce_filtered(
        u, [&](int x, int y) { return c.grz[y] == c.grz[x] - 1; }, c.has_iota, false);
    KnotComplex out;
    for (int x : r.kept) out.add_generator(c.names[x], c.grw[x], c.grz[x]);
    out.d = r.red.d;
    if (c.has_iota) {
        out.iota = r.sigma.m * c.iota * r.pi.m;
        out.has_iota = true;
    }
    return out;
}

KnotComplex dual(const KnotComplex& c) {
    KnotComplex r;
    for (int x = 0; x < c.size(); ++x) r.add_generator(c.names[x], -c.grw[x], -c.grz[x]);
    r.d = c.d.transpose();
    r.iota = c.iota.transpose();
    r.has_iota = c.has_iota;
    return r;
}

KnotComplex unknot() {
    KnotComplex c;
    c.add_generator("x", 0, 0);
    c.add_iota(0, 0);
    return c;
}

KnotComplex knot_subcomplex(const KnotComplex& c, const std::vector<int>& keep) {
    std::vector<int> idx(c.size(), -1);
    KnotComplex r;
    for (std::size_t a = 0; a < keep.size(); ++a) {
        idx[keep[a]] = static_cast<int>(a);
        r.add_generator(c.names[keep[a]], c.grw[keep[a]], c.grz[keep[a]]);
    }
    for (std::size_t a = 0; a < keep.size(); ++a) {
        for (int t : c.d.r[keep[a]])
            if (idx[t] >= 0) r.d.r[a].push_back(idx[t]);
        for (int t : c.iota.r[keep[a]])
            if (idx[t] >= 0) r.iota.r[a].push_back(idx[t]);
        std::sort(r.d.r[a].begin(), r.d.r[a].end());
        std::sort(r.iota.r[a].begin(), r.iota.r[a].end());
    }
    r.has_iota = c.has_iota;
    return r;
}

std::optional<KnotMap> find_knot_homotopy(const KnotComplex& s, const KnotComplex& t, const KnotMap& f,
                                          bool allow_neg_u, bool allow_neg_v) {
    int dw = f.dw + 1, dz = f.dz + 1;
    MapSystem ms;
    int h = ms.add_unknown(s.size(), t.size(), 0, [&](int x, int y) {
        return powers_legal(s, t, x, y, dw, dz, f.skew, allow_neg_u, allow_neg_v);
    });
    ms.finalize();
    ms.add_equations(s.size(), t.size(), {{h, &s.d, nullptr}, {h, nullptr, &t.d}}, &f.m);
    auto sol = ms.solve();
    if (!sol) return std::nullopt;
    return KnotMap{ms.extract(h, *sol), dw, dz, f.skew};
}

// ---- monomials ----

Chain chain_normalize(Chain c) {
    std::sort(c.begin(), c.end());
    Chain out;
    for (std::size_t k = 0; k < c.size();) {
        std::size_t e = k;
        while (e < c.size() && c[e] == c[k]) ++e;
        if ((e - k) % 2 == 1) out.push_back(c[k]);
        k = e;
    }
    return out;
}

void chain_add(Chain& acc, const Chain& c) {
    Chain out;
    std::set_symmetric_difference(acc.begin(), acc.end(), c.begin(), c.end(), std::back_inserter(out));
    acc.swap(out);
}

Chain apply_chain(const MonoMap& f, const Chain& c) {
    Chain all;
    for (const Mono& m : c) {
        Chain im = f(m);
        all.insert(all.end(), im.begin(), im.end());
    }
    return chain_normalize(std::move(all));
}

MonoMap mono_compose(MonoMap first, MonoMap second) {
    return [first, second](const Mono& m) { return apply_chain(second, first(m)); };
}

MonoMap mono_sum(std::vector<MonoMap> fs) {
    return [fs](const Mono& m) {
        Chain all;
        for (const auto& f : fs) {
            Chain c = f(m);
            all.insert(all.end(), c.begin(), c.end());
        }
        return chain_normalize(std::move(all));
    };
}

MonoMap mono_mult(int a, int b) {
    return [a, b](const Mono& m) { return Chain{{m.gen, m.i + a, m.j + b}}; };
}

MonoMap mono_of(const KnotComplex& s, const KnotComplex& t, const KnotMap& f) {
    // precompute forced powers per arrow
    std::vector<std::vector<std::pair<int, Powers>>> arrows(s.size());
    for (int x = 0; x < s.size(); ++x)
        for (int y : f.m.r[x]) arrows[x].push_back({y, arrow_powers(s, t, x, y, f.dw, f.dz, f.skew)});
    bool skew = f.skew;
    return [arrows, skew](const Mono& mo) {
        Chain out;
        for (auto [y, p] : arrows[mo.gen]) {
            if (skew)
                out.push_back({y, mo.j + p.m, mo.i + p.n});
            else
                out.push_back({y, mo.i + p.m, mo.j + p.n});
        }
        return chain_normalize(std::move(out));
    };
}

SliceComplex slice(const KnotComplex& c, SliceKind kind, int s) {
    SliceComplex sl;
    sl.kind = kind;
    sl.s = s;
    int n = c.size();
    sl.i0.resize(n);
    sl.j0.resize(n);
    for (int x = 0; x < n; ++x) {
        int a = c.alexander(x);
        switch (kind) {
            case SliceKind::A:
                sl.i0[x] = std::max(0, a - s);
                sl.j0[x] = sl.i0[x] - a;
                break;
            case SliceKind::B:
                sl.i0[x] = 0;
                sl.j0[x] = -a;
                break;
            case SliceKind::Bt:
                sl.i0[x] = a - s;
                sl.j0[x] = -s;
                break;
        }
        sl.u.add_generator(c.names[x], c.grw[x] - 2 * sl.i0[x]);
    }
    sl.u.d = c.d;
    return sl;
}

Mono slice_basis(const SliceComplex& sl, int x) { return {x, sl.i0[x], sl.j0[x] + sl.s}; }

GradedMap restrict_map(const MonoMap& f, const SliceComplex& src, const SliceComplex& tgt, std::optional<int> degree) {
    int ns = src.u.size(), nt = tgt.u.size();
    GradedMap g = zero_map(ns, nt, degree.value_or(0));
    bool have_deg = degree.has_value();
    for (int x = 0; x < ns; ++x) {
        Chain im = f(slice_basis(src, x));
        for (const Mono& mo : im) {
            int y = mo.gen;
            int ay = tgt.i0[y] - tgt.j0[y];
            if (ay - mo.i + mo.j != tgt.s)
                throw std::runtime_error(fmt::format("restrict_map: image of {} has Alexander grading {}, expected {}",
                                                     src.u.names[x], ay - mo.i + mo.j, tgt.s));
            int k = 0;
            switch (tgt.kind) {
                case SliceKind::A:
                case SliceKind::B:
                    k = mo.i - tgt.i0[y];
                    break;
                case SliceKind::Bt:
                    k = mo.j - (tgt.j0[y] + tgt.s);
                    break;
            }
            if (k < 0)
                throw std::runtime_error(fmt::format("restrict_map: image of {} leaves the target slice at {}",
                                                     src.u.names[x], tgt.u.names[y]));
            int deg = tgt.u.gr[y] - src.u.gr[x] - 2 * k;
            if (!have_deg) {
                g.degree = deg;
                have_deg = true;
            } else if (deg != g.degree) {
                throw std::runtime_error(fmt::format("restrict_map: inhomogeneous ({} vs {})", deg, g.degree));
            }
            g.m.r[x].push_back(y);
        }
        std::sort(g.m.r[x].begin(), g.m.r[x].end());
    }
    return g;
}

}  // namespace ikc
