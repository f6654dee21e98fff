#include "ikc/iota.hpp"

#include <algorithm>
#include <fmt/core.h>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ikc {

namespace {

F2Matrix row_matrix(const bitvec& v, int n) {
    F2Matrix m(1, n);
    for (int i = 0; i < n; ++i)
        if (v[i]) m.r[0].push_back(i);
    return m;
}

// entries of f whose U-power is zero
bool has_u0_entry(const UComplex& s, const UComplex& t, const GradedMap& f) {
    for (int x = 0; x < s.size(); ++x)
        for (int y : f.m.r[x])
            if (arrow_power(s.gr[x], t.gr[y], f.degree) == 0) return true;
    return false;
}

UComplex utensor(const UComplex& a, const UComplex& b) {
    UComplex r;
    int na = a.size(), nb = b.size();
    for (int x = 0; x < na; ++x)
        for (int y = 0; y < nb; ++y) r.add_generator(a.names[x] + "." + b.names[y], a.gr[x] + b.gr[y]);
    for (int x = 0; x < na; ++x)
        for (int y = 0; y < nb; ++y) {
            auto& row = r.d.r[x * nb + y];
            for (int x2 : a.d.r[x]) row.push_back(x2 * nb + y);
            for (int y2 : b.d.r[y]) row.push_back(x * nb + y2);
            std::sort(row.begin(), row.end());
        }
    return r;
}

F2Matrix ukron(const F2Matrix& a, const F2Matrix& b) {
    int nb = b.rows, nbt = b.cols;
    F2Matrix r(a.rows * nb, a.cols * nbt);
    for (int x = 0; x < a.rows; ++x)
        for (int y = 0; y < nb; ++y) {
            auto& row = r.r[x * nb + y];
            for (int x2 : a.r[x])
                for (int y2 : b.r[y]) row.push_back(x2 * nbt + y2);
            std::sort(row.begin(), row.end());
        }
    return r;
}

// shared search for local and almost-local maps; ib and it are iota (or iota-bar)
std::optional<LocalWitness> search_local(const UComplex& s, const GradedMap& is, const UComplex& t,
                                         const GradedMap& it, bool mod_u) {
    auto hs = homology(s), ht = homology(t);
    if (hs.free.size() != 1 || ht.free.size() != 1)
        throw std::runtime_error("local map search: complexes must have exactly one tower");
    int ds = hs.free[0], dt = ht.free[0];
    if (ds > dt) return std::nullopt;
    bitvec ts = tower_cycle(s), tt = tower_cycle(t);
    int N = ht.max_torsion();
    int ns = s.size(), nt = t.size();

    MapSystem ms;
    int F = ms.add_unknown(ns, nt, 0, [&](int x, int y) { return arrow_legal(s.gr[x], t.gr[y], 0); });
    int h = ms.add_unknown(ns, nt, 1, [&](int x, int y) { return arrow_legal(s.gr[x], t.gr[y], 1); });
    int gw = ds - 2 * N + 1;
    int w = ms.add_unknown(1, nt, 0, [&](int, int y) { return arrow_legal(gw, t.gr[y], 0); });
    ms.finalize();
    ms.add_equations(ns, nt, {{F, &s.d, nullptr}, {F, nullptr, &t.d}}, nullptr);
    std::function<bool(int, int)> keep;
    if (mod_u) keep = [&](int x, int z) { return t.gr[z] == s.gr[x]; };
    ms.add_equations(ns, nt, {{F, &is.m, nullptr}, {F, nullptr, &it.m}, {h, &s.d, nullptr}, {h, nullptr, &t.d}},
                     nullptr, keep);
    F2Matrix tm = row_matrix(ts, ns), tp = row_matrix(tt, nt);
    ms.add_equations(1, nt, {{F, &tm, nullptr}, {w, nullptr, &t.d}}, &tp);
    auto sol = ms.solve();
    if (!sol) return std::nullopt;
    LocalWitness out;
    out.F = GradedMap{ms.extract(F, *sol), 0, false};
    out.h = GradedMap{ms.extract(h, *sol), 1, false};
    out.N = N;
    return out;
}

GradedMap iota_bar(const AlmostIotaComplex& c) { return identity_map(c.base.size()) + c.omega; }

}  // namespace

std::vector<std::string> validate(const IotaComplex& c) {
    std::vector<std::string> out = validate(c.base);
    if (!out.empty()) return out;
    int n = c.base.size();
    if (c.iota.degree != 0) out.push_back("iota must have degree 0");
    for (auto& e : check_map(c.base, c.base, c.iota)) out.push_back("iota: " + e);
    if (!out.empty()) return out;
    if (!is_chain_map(c.base, c.base, c.iota)) out.push_back("iota is not a chain map");
    GradedMap sq = compose(c.iota, c.iota) + identity_map(n);
    sq.degree = 0;
    if (!find_homotopy(c.base, c.base, sq)) out.push_back("iota^2 is not homotopic to the identity");
    if (homology(c.base).free.size() != 1) out.push_back("localized homology is not of rank one");
    return out;
}

std::vector<std::string> validate(const AlmostIotaComplex& c) {
    std::vector<std::string> out = validate(c.base);
    if (!out.empty()) return out;
    int n = c.base.size();
    for (auto& e : check_map(c.base, c.base, c.omega)) out.push_back("omega: " + e);
    if (!out.empty()) return out;
    GradedMap ib = iota_bar(c);
    if (has_u0_entry(c.base, c.base, commutator(c.base, c.base, ib)))
        out.push_back("iota-bar is not a chain map modulo U");
    GradedMap sq = compose(ib, ib) + identity_map(n);
    sq.degree = 0;
    MapSystem ms;
    const UComplex& b = c.base;
    int h = ms.add_unknown(n, n, 1, [&](int x, int y) { return arrow_legal(b.gr[x], b.gr[y], 1); });
    ms.finalize();
    ms.add_equations(n, n, {{h, &b.d, nullptr}, {h, nullptr, &b.d}}, &sq.m,
                     [&](int x, int z) { return b.gr[z] == b.gr[x]; });
    if (!ms.consistent()) out.push_back("iota-bar^2 is not homotopic to the identity modulo U");
    if (homology(b).free.size() != 1) out.push_back("localized homology is not of rank one");
    return out;
}

IotaComplex trivial_iota() {
    IotaComplex c;
    c.base.add_generator("x", 0);
    c.iota = identity_map(1);
    return c;
}

IotaComplex tensor(const IotaComplex& a, const IotaComplex& b) {
    IotaComplex r;
    r.base = utensor(a.base, b.base);
    r.iota = GradedMap{ukron(a.iota.m, b.iota.m), 0, false};
    return r;
}

AlmostIotaComplex tensor(const AlmostIotaComplex& a, const AlmostIotaComplex& b) {
    return to_almost(tensor(from_almost(a), from_almost(b)));
}

AlmostIotaComplex to_almost(const IotaComplex& c) {
    return {c.base, identity_map(c.base.size()) + c.iota};
}

IotaComplex from_almost(const AlmostIotaComplex& c) { return {c.base, iota_bar(c)}; }

IotaComplex reduce(const IotaComplex& c) {
    Reduction r = reduce(c.base, true, false);
    IotaComplex out;
    out.base = r.red;
    out.iota = compose(compose(r.sigma, c.iota), r.pi);
    out.iota.degree = 0;
    return out;
}

AlmostIotaComplex reduce(const AlmostIotaComplex& c) {
    Reduction r = reduce(c.base, true, false);
    AlmostIotaComplex out;
    out.base = r.red;
    out.omega = compose(compose(r.sigma, c.omega), r.pi);
    out.omega.degree = 0;
    return out;
}

IotaComplex dual(const IotaComplex& c) { return {dual(c.base), dual_map(c.iota)}; }

IotaComplex a0_iota(const KnotComplex& c) {
    SliceComplex sl = slice(c, SliceKind::A, 0);
    IotaComplex out;
    out.base = sl.u;
    out.iota = restrict_map(mono_of(c, c, knot_iota(c)), sl, sl, 0);
    return out;
}

std::string StdComplexParams::str() const {
    std::string s;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) s += ",";
        s += fmt::format("{},{}", a[i] > 0 ? "+" : "-", b[i]);
    }
    return "(" + s + ")";
}

StdComplexParams parse_std_params(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (ch != '(' && ch != ')' && ch != ' ') s += ch;
    std::vector<std::string> tok;
    std::stringstream ss(s);
    for (std::string t; std::getline(ss, t, ',');) tok.push_back(t);
    if (tok.empty() || tok.size() % 2 != 0) throw std::runtime_error("standard complex: need an even-length sequence");
    StdComplexParams p;
    for (std::size_t i = 0; i < tok.size(); i += 2) {
        if (tok[i] != "+" && tok[i] != "-") throw std::runtime_error("standard complex: expected + or -, got " + tok[i]);
        p.a.push_back(tok[i] == "+" ? 1 : -1);
        int b = 0;
        try {
            b = std::stoi(tok[i + 1]);
        } catch (const std::exception&) {
            throw std::runtime_error("standard complex: bad integer " + tok[i + 1]);
        }
        if (b == 0) throw std::runtime_error("standard complex: b_i must be nonzero");
        p.b.push_back(b);
    }
    return p;
}

StdComplexParams negate(const StdComplexParams& p) {
    StdComplexParams r = p;
    for (int& v : r.a) v = -v;
    for (int& v : r.b) v = -v;
    return r;
}

StdComplexParams repeat(const StdComplexParams& p, int n) {
    StdComplexParams r;
    for (int k = 0; k < n; ++k) {
        r.a.insert(r.a.end(), p.a.begin(), p.a.end());
        r.b.insert(r.b.end(), p.b.begin(), p.b.end());
    }
    return r;
}

AlmostIotaComplex standard_complex(const StdComplexParams& p) {
    if (p.a.size() != p.b.size()) throw std::runtime_error("standard complex: mismatched sequence");
    int m = static_cast<int>(p.a.size());
    std::vector<int> gr(2 * m + 1, 0);
    for (int k = 0; k < m; ++k) {
        gr[2 * k + 1] = gr[2 * k];
        int b = p.b[k];
        gr[2 * k + 2] = b > 0 ? gr[2 * k + 1] - 2 * b + 1 : gr[2 * k + 1] - 2 * b - 1;
    }
    AlmostIotaComplex c;
    for (int i = 0; i <= 2 * m; ++i) c.base.add_generator(fmt::format("t{}", i), gr[i]);
    c.omega = zero_map(2 * m + 1, 2 * m + 1, 0);
    for (int k = 0; k < m; ++k) {
        int lo = 2 * k, hi = 2 * k + 1;  // t_{i-1}, t_i for odd i
        if (p.a[k] > 0)
            c.omega.m.toggle(hi, lo);
        else
            c.omega.m.toggle(lo, hi);
        int prev = 2 * k + 1, cur = 2 * k + 2;  // t_{i-1}, t_i for even i
        if (p.b[k] > 0)
            c.base.add_arrow(cur, prev);
        else
            c.base.add_arrow(prev, cur);
    }
    return c;
}

bool sf_shape_obstruction(const StdComplexParams& p) {
    for (int a : p.a)
        if (a < 0) return true;
    for (std::size_t i = 0; i + 1 < p.b.size(); ++i)
        if (p.b[i] < p.b[i + 1]) return false;
    return true;
}

std::optional<LocalWitness> exists_local_map(const IotaComplex& a, const IotaComplex& b) {
    return search_local(a.base, a.iota, b.base, b.iota, false);
}

bool local_equivalent(const IotaComplex& a, const IotaComplex& b) {
    return exists_local_map(a, b).has_value() && exists_local_map(b, a).has_value();
}

std::optional<LocalWitness> exists_almost_local_map(const AlmostIotaComplex& a, const AlmostIotaComplex& b) {
    return search_local(a.base, a.omega, b.base, b.omega, true);
}

bool almost_local_equivalent(const AlmostIotaComplex& a, const AlmostIotaComplex& b) {
    return exists_almost_local_map(a, b).has_value() && exists_almost_local_map(b, a).has_value();
}

std::optional<KnotLocalWitness> exists_knot_local_map(const KnotComplex& a, const KnotComplex& b) {
    UComplex sa = slice(a, SliceKind::B, 0).u, sb = slice(b, SliceKind::B, 0).u;
    auto ha = homology(sa), hb = homology(sb);
    if (ha.free.size() != 1 || hb.free.size() != 1) throw std::runtime_error("knot local map: B_0 must have one tower");
    int da = ha.free[0], db = hb.free[0];
    if (da > db) return std::nullopt;
    bitvec ta = tower_cycle(sa), tb = tower_cycle(sb);
    int N = hb.max_torsion();
    int ns = a.size(), nt = b.size();

    MapSystem ms;
    int F = ms.add_unknown(ns, nt, 0, [&](int x, int y) { return powers_legal(a, b, x, y, 0, 0, false); });
    int h = ms.add_unknown(ns, nt, 0, [&](int x, int y) { return powers_legal(a, b, x, y, 1, 1, true); });
    int gw = da - 2 * N + 1;
    int w = ms.add_unknown(1, nt, 0, [&](int, int y) { return arrow_legal(gw, sb.gr[y], 0); });
    ms.finalize();
    ms.add_equations(ns, nt, {{F, &a.d, nullptr}, {F, nullptr, &b.d}}, nullptr);
    ms.add_equations(ns, nt, {{F, &a.iota, nullptr}, {F, nullptr, &b.iota}, {h, &a.d, nullptr}, {h, nullptr, &b.d}},
                     nullptr);
    F2Matrix tm = row_matrix(ta, ns), tp = row_matrix(tb, nt);
    ms.add_equations(1, nt, {{F, &tm, nullptr}, {w, nullptr, &b.d}}, &tp);
    auto sol = ms.solve();
    if (!sol) return std::nullopt;
    KnotLocalWitness out;
    out.F = KnotMap{ms.extract(F, *sol), 0, 0, false};
    out.h = KnotMap{ms.extract(h, *sol), 1, 1, true};
    out.N = N;
    return out;
}

bool knot_local_equivalent(const KnotComplex& a, const KnotComplex& b) {
    return exists_knot_local_map(a, b).has_value() && exists_knot_local_map(b, a).has_value();
}

std::vector<std::string> verify_morphism(const AlmostIotaComplex& src, const AlmostIotaComplex& tgt, const GradedMap& F,
                                         const std::optional<GradedMap>& h, MorphismMode mode) {
    const UComplex& s = src.base;
    const UComplex& t = tgt.base;
    std::vector<std::string> out = check_map(s, t, F);
    if (F.degree != 0) out.push_back("F must have degree 0");
    if (!out.empty()) return out;
    if (!is_chain_map(s, t, F)) out.push_back("F is not a chain map");
    if (mode == MorphismMode::chain || !out.empty()) return out;

    if (h) {
        for (auto& e : check_map(s, t, *h)) out.push_back("h: " + e);
        if (h->degree != 1) out.push_back("h must have degree 1");
        if (!out.empty()) return out;
    }
    // F iota + iota' F + [d, h], with iota = 1 + omega
    GradedMap r = compose(iota_bar(src), F) + compose(F, iota_bar(tgt));
    r.degree = 0;
    if (h) {
        GradedMap c = commutator(s, t, *h);
        r.m += c.m;
    }
    if (mode == MorphismMode::almost_local) {
        for (int x = 0; x < s.size(); ++x)
            for (int y : r.m.r[x])
                if (t.gr[y] == s.gr[x]) out.push_back(fmt::format("iota relation fails mod U at {} -> {}", s.names[x], t.names[y]));
    } else {
        for (int x = 0; x < s.size(); ++x)
            for (int y : r.m.r[x]) out.push_back(fmt::format("iota relation fails at {} -> {}", s.names[x], t.names[y]));
    }
    if (!out.empty() || mode == MorphismMode::iota) return out;

    auto hs = homology(s), ht = homology(t);
    if (hs.free.size() != 1 || ht.free.size() != 1) {
        out.push_back("complexes must have exactly one tower");
        return out;
    }
    bitvec ts = tower_cycle(s), tt = tower_cycle(t);
    int N = ht.max_torsion();
    bitvec img = mul_vec(F.m.transpose(), ts);
    for (int y = 0; y < t.size(); ++y) img[y] ^= tt[y];
    std::vector<int> cols;
    for (int y = 0; y < t.size(); ++y)
        if (img[y]) cols.push_back(y);
    F2System bnd(t.size());
    for (int x : graded_piece(t, hs.free[0] - 2 * N + 1)) bnd.add_row(t.d.r[x], false);
    if (hs.free[0] > ht.free[0] || !bnd.in_span(cols))
        out.push_back("F does not induce an isomorphism on localized homology");
    return out;
}

QComplex involutive_complex(const IotaComplex& ic) {
    const UComplex& c = ic.base;
    int n = c.size();
    QComplex q;
    q.n = n;
    for (int x = 0; x < n; ++x) q.c.add_generator(c.names[x], c.gr[x] + 1);
    for (int x = 0; x < n; ++x) q.c.add_generator("Q" + c.names[x], c.gr[x]);
    GradedMap w = identity_map(n) + ic.iota;
    for (int x = 0; x < n; ++x) {
        auto& row = q.c.d.r[x];
        row = c.d.r[x];
        for (int y : w.m.r[x]) row.push_back(n + y);
        std::sort(row.begin(), row.end());
        for (int y : c.d.r[x]) q.c.d.r[n + x].push_back(n + y);
    }
    return q;
}

namespace {

// basis of cycles in the grading-r part, as generator index sets
std::vector<std::vector<int>> cycles(const UComplex& c, int r) {
    auto ed = graded_piece(c, r), ed1 = graded_piece(c, r - 1);
    std::vector<int> pos1(c.size(), -1);
    for (std::size_t i = 0; i < ed1.size(); ++i) pos1[ed1[i]] = static_cast<int>(i);
    F2Matrix a(static_cast<int>(ed1.size()), static_cast<int>(ed.size()));
    for (std::size_t j = 0; j < ed.size(); ++j)
        for (int y : c.d.r[ed[j]])
            if (pos1[y] >= 0) a.r[pos1[y]].push_back(static_cast<int>(j));
    for (auto& row : a.r) std::sort(row.begin(), row.end());
    std::vector<std::vector<int>> out;
    for (const auto& z : nullspace_f2(a)) {
        std::vector<int> cols;
        for (std::size_t j = 0; j < ed.size(); ++j)
            if (z[j]) cols.push_back(ed[j]);
        out.push_back(cols);
    }
    return out;
}

int rank_of(int n, const std::vector<const std::vector<std::vector<int>>*>& parts) {
    F2System s(n);
    for (auto* p : parts)
        for (const auto& row : *p) s.add_row(row, false);
    return s.rank();
}

struct DPair {
    std::optional<int> lower, upper;
};

DPair d_pair_at(const QComplex& q, int delta) {
    const UComplex& c = q.c;
    int n2 = c.size();
    int maxgr = *std::max_element(c.gr.begin(), c.gr.end());
    int T = delta / 2;
    int lo = maxgr - 2 * delta + 2 + 2 * T;
    DPair out;
    for (int r = maxgr; r >= lo && !(out.lower && out.upper); --r) {
        auto W = cycles(c, r);
        if (W.empty()) continue;
        int g = r - 2 * T;
        std::vector<std::vector<int>> B, S;
        for (int x : graded_piece(c, g + 1)) B.push_back(c.d.r[x]);
        S = B;
        for (const auto& z : cycles(c, g + 1)) {
            std::vector<int> qz;
            for (int x : z)
                if (x < q.n) qz.push_back(q.n + x);
            S.push_back(qz);
        }
        int rs = rank_of(n2, {&S}), rws = rank_of(n2, {&W, &S});
        if (!out.lower && rws > rs) out.lower = r - 1;
        if (!out.upper) {
            int rb = rank_of(n2, {&B}), rwb = rank_of(n2, {&W, &B});
            if (rwb + rs - rws > rb) out.upper = r;
        }
    }
    return out;
}

}  // namespace

InvolutiveD involutive_d(const IotaComplex& ic, int start_delta) {
    IotaComplex r = reduce(ic);
    InvolutiveD out;
    out.d = d_invariant(r.base);
    QComplex q = involutive_complex(r);
    int delta = start_delta;
    if (delta <= 0) {
        auto [mn, mx] = std::minmax_element(r.base.gr.begin(), r.base.gr.end());
        delta = (*mx - *mn) / 2 + homology(r.base).max_torsion() + 2;
    }
    if (delta % 2) ++delta;
    std::optional<std::pair<int, int>> prev;
    int agree = 0;
    for (; delta <= (1 << 14); delta *= 2) {
        DPair p = d_pair_at(q, delta);
        if (!p.lower || !p.upper) {
            prev.reset();
            agree = 0;
            continue;
        }
        std::pair<int, int> cur{*p.lower, *p.upper};
        if (prev && *prev == cur)
            ++agree;
        else
            agree = 0;
        prev = cur;
        if (agree >= 2) {
            out.d_lower = cur.first;
            out.d_upper = cur.second;
            out.delta = delta;
            return out;
        }
    }
    throw std::runtime_error("involutive_d: truncation did not stabilize");
}

int d_lower(const IotaComplex& ic) { return involutive_d(ic).d_lower; }
int d_upper(const IotaComplex& ic) { return involutive_d(ic).d_upper; }

VInvariants v_invariants(const KnotComplex& c) {
    InvolutiveD d = involutive_d(a0_iota(c));
    return {-d.d / 2, -d.d_lower / 2, -d.d_upper / 2};
}

int V_s(const KnotComplex& c, int s) {
    int da = d_invariant(slice(c, SliceKind::A, s).u), db = d_invariant(slice(c, SliceKind::B, s).u);
    return (db - da) / 2;
}

rational lens_d(long p, long q, long i) {
    if (p <= 0 || q < 0 || i < 0 || i >= p) throw std::runtime_error(fmt::format("lens_d: invalid ({}, {}, {})", p, q, i));
    if (p == 1) return rational(0);
    if (q == 0 || std::gcd(p, q) != 1) throw std::runtime_error(fmt::format("lens_d: invalid ({}, {}, {})", p, q, i));
    long e = 2 * i + 1 - p - q;
    rational D = rational(p * q - e * e, 4 * p * q) + lens_d(q, p % q, i % q);
    return -D;
}

KnotExample knot_example() {
    KnotExample k;
    UComplex& a = k.a0.base;
    const char* names[] = {"a", "b", "c", "d", "e", "f", "g", "h", "i"};
    const int grs[] = {0, 1, 2, 1, 0, 2, 1, 1, 6};
    for (int x = 0; x < 9; ++x) a.add_generator(names[x], grs[x]);
    auto arrow = [&](UComplex& c, const char* f, std::initializer_list<const char*> ts) {
        for (auto t : ts) c.add_arrow(c.index(f), c.index(t));
    };
    arrow(a, "a", {"b"});
    arrow(a, "c", {"b", "d"});
    arrow(a, "e", {"d"});
    arrow(a, "f", {"h", "g"});
    arrow(a, "g", {"i"});
    arrow(a, "h", {"i"});
    auto map_of = [](const UComplex& s, const UComplex& t, int degree,
                     std::initializer_list<std::pair<const char*, std::initializer_list<const char*>>> rows) {
        GradedMap g = zero_map(s.size(), t.size(), degree);
        for (const auto& [x, ys] : rows)
            for (auto y : ys) g.m.toggle(s.index(x), t.index(y));
        return g;
    };
    k.a0.iota = map_of(a, a, 0,
                       {{"a", {"e"}},
                        {"b", {"d"}},
                        {"c", {"c", "i"}},
                        {"d", {"b"}},
                        {"e", {"a"}},
                        {"f", {"f", "c"}},
                        {"g", {"b", "h"}},
                        {"h", {"d", "g"}},
                        {"i", {"i"}}});
    k.c = from_almost(standard_complex(parse_std_params("+,-1,+,-3")));
    UComplex& c = k.c.base;
    for (int x = 0; x < c.size(); ++x) c.names[x] = fmt::format("x{}", x);
    k.psi = map_of(a, c, 0,
                   {{"a", {"x1"}},
                    {"b", {"x2"}},
                    {"d", {"x2"}},
                    {"e", {"x0", "x1"}},
                    {"g", {"x3"}},
                    {"h", {"x3"}},
                    {"i", {"x4"}}});
    k.phi = map_of(c, a, 0, {{"x0", {"a", "c", "e"}}, {"x1", {"a"}}, {"x2", {"b"}}, {"x3", {"g"}}, {"x4", {"i"}}});
    k.H = map_of(c, a, 1, {{"x0", {"g"}}, {"x2", {"c"}}, {"x3", {"f"}}});
    k.J = map_of(a, a, 1, {{"d", {"c"}}, {"h", {"f"}}});
    return k;
}

}  // namespace ikc
