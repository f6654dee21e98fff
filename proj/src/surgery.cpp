#include "ikc/surgery.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <stdexcept>

namespace ikc {

namespace {

long floor_div(long a, long b) {
    long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

long ceil_div(long a, long b) { return -floor_div(-a, b); }

long pmod(long a, long m) { return ((a % m) + m) % m; }

Chain identity_mono(const Mono& m) { return {m}; }

// slices of one knot, computed once
struct slice_cache {
    const KnotComplex& c;
    std::map<std::pair<int, int>, SliceComplex> tab;

    const SliceComplex& get(SliceKind kind, int s) {
        auto key = std::make_pair(static_cast<int>(kind), s);
        auto it = tab.find(key);
        if (it == tab.end()) it = tab.emplace(key, slice(c, kind, s)).first;
        return it->second;
    }
};

// copies the block map g into the cone-sized map m
void embed(GradedMap& m, const GradedMap& g, int src_first, int tgt_first) {
    for (int x = 0; x < g.m.rows; ++x)
        for (int y : g.m.r[x]) m.m.toggle(src_first + x, tgt_first + y);
}

struct cone_builder {
    const KnotComplex& c;
    Slope sl;
    slice_cache cache;
    MonoMap iota, iota2, iota_plus_iota3;
    std::map<int, GradedMap> hb;  // H on Bt_s -> B_{-s}

    cone_builder(const KnotComplex& kc, const Slope& slope) : c(kc), sl(slope), cache{kc, {}} {
        if (!c.has_iota) throw std::runtime_error("mapping cone: the knot complex has no involution");
        iota = mono_of(c, c, knot_iota(c));
        iota2 = mono_compose(iota, iota);
        iota_plus_iota3 = mono_sum({iota, mono_compose(iota2, iota)});
    }

    int slice_of(long k) const { return static_cast<int>(floor_div(k, sl.q)); }

    // grading shift of summand k; zero at the representative k mod |p| in [0, |p|) of the smaller of
    // each pair of conjugate classes, then transported so that iota_A has degree zero
    int sigma(long k) const {
        long P = std::labs(sl.p);
        long l = pmod(k, P), lc = pmod(sl.q - 1 - k, P);
        if (lc < l) {
            long kc = sl.q - 1 - k;
            return sigma(kc) + 2 * static_cast<int>(floor_div(kc, sl.q));
        }
        long j = l;
        long acc = 0;
        while (j < k) {
            acc += sl.p > 0 ? 2 * floor_div(j, sl.q) : -2 * floor_div(j + P, sl.q);
            j += P;
        }
        while (j > k) {
            acc += sl.p > 0 ? -2 * floor_div(j - P, sl.q) : 2 * floor_div(j, sl.q);
            j -= P;
        }
        return static_cast<int>(acc);
    }

    GradedMap vmap(int s) { return restrict_map(identity_mono, cache.get(SliceKind::A, s), cache.get(SliceKind::B, s), 0); }
    GradedMap vtilde(int s) {
        return restrict_map(identity_mono, cache.get(SliceKind::A, s), cache.get(SliceKind::Bt, s), 0);
    }
    GradedMap flip(int s) {
        return restrict_map(iota, cache.get(SliceKind::Bt, s), cache.get(SliceKind::B, -s), -2 * s);
    }
    const GradedMap& hbt(int s) {
        auto it = hb.find(s);
        if (it != hb.end()) return it->second;
        const SliceComplex& src = cache.get(SliceKind::Bt, s);
        const SliceComplex& tgt = cache.get(SliceKind::B, -s);
        GradedMap f = restrict_map(iota_plus_iota3, src, tgt, -2 * s);
        auto h = find_homotopy(src.u, tgt.u, f);
        if (!h) throw std::runtime_error(fmt::format("mapping cone: iota + iota^3 is not null-homotopic on Bt_{}", s));
        return hb.emplace(s, *h).first->second;
    }
};

void check_degree(const UComplex& x, const GradedMap& m, int degree, const char* what) {
    for (int a = 0; a < x.size(); ++a)
        for (int y : m.m.r[a])
            if (!arrow_legal(x.gr[a], x.gr[y], degree))
                throw std::runtime_error(fmt::format("mapping cone: {} arrow {} -> {} has the wrong degree", what,
                                                     x.names[a], x.names[y]));
}

void finish(MappingCone& mc) {
    for (GradedMap* m : {&mc.v, &mc.h}) check_degree(mc.x, *m, -1, "D");
    for (GradedMap* m : {&mc.iota_a, &mc.iota_b, &mc.H}) check_degree(mc.x, *m, 0, "iota");
    mc.iota = mc.iota_a + mc.iota_b + mc.H;
    mc.iota.degree = 0;
    mc.x.d += mc.v.m;
    mc.x.d += mc.h.m;
}

std::string class_name(const Slope& slope, bool zero) {
    if (zero) return "[0]";
    rational r(slope.p, 2 * slope.q);
    if (r.denominator() == 1) return fmt::format("[{}]", r.numerator());
    return fmt::format("[{}/{}]", r.numerator(), r.denominator());
}

std::vector<int> class_generators(const MappingCone& mc, long label) {
    std::vector<int> keep;
    for (int g = 0; g < mc.x.size(); ++g)
        if (mc.label[g] == label) keep.push_back(g);
    if (keep.empty()) throw std::runtime_error(fmt::format("no generators in Spin^c class {}", label));
    return keep;
}

GradedMap restrict_square(const GradedMap& m, const std::vector<int>& keep, int n) {
    std::vector<int> idx(n, -1);
    for (std::size_t a = 0; a < keep.size(); ++a) idx[keep[a]] = static_cast<int>(a);
    GradedMap r = zero_map(static_cast<int>(keep.size()), static_cast<int>(keep.size()), m.degree);
    for (std::size_t a = 0; a < keep.size(); ++a) {
        for (int y : m.m.r[keep[a]])
            if (idx[y] >= 0) r.m.r[a].push_back(idx[y]);
        std::sort(r.m.r[a].begin(), r.m.r[a].end());
    }
    return r;
}

}  // namespace

std::string Slope::str() const {
    if (q == 1) return fmt::format("{}", p);
    return fmt::format("{}/{}", p, q);
}

Slope make_slope(long p, long q) {
    if (q == 0) throw std::runtime_error("slope: zero denominator");
    if (q < 0) {
        p = -p;
        q = -q;
    }
    if (p == 0) return {0, 1};
    long g = std::gcd(std::labs(p), q);
    return {p / g, q / g};
}

Slope parse_slope(const std::string& s) {
    try {
        std::size_t pos = 0;
        auto slash = s.find('/');
        long p = std::stol(s.substr(0, slash), &pos);
        if (pos != (slash == std::string::npos ? s.size() : slash)) throw std::invalid_argument(s);
        long q = 1;
        if (slash != std::string::npos) {
            std::string rest = s.substr(slash + 1);
            q = std::stol(rest, &pos);
            if (pos != rest.size()) throw std::invalid_argument(s);
        }
        Slope r = make_slope(p, q);
        if (r.p != p && r.p != -p) throw std::runtime_error(fmt::format("slope {} is not in lowest terms", s));
        return r;
    } catch (const std::logic_error&) {
        throw std::runtime_error(fmt::format("bad slope '{}'", s));
    }
}

int default_window(const KnotComplex& c, const Slope& slope) {
    long a = std::labs(slope.p);
    return c.genus_bound() + static_cast<int>(ceil_div(a, slope.q)) + 1;
}

int MappingCone::summand_of(int gen) const {
    for (std::size_t i = 0; i < summands.size(); ++i)
        if (gen >= summands[i].first && gen < summands[i].first + summands[i].size) return static_cast<int>(i);
    throw std::runtime_error(fmt::format("generator {} outside the cone", gen));
}

GradedMap flip_map(const KnotComplex& c, int s) {
    cone_builder cb(c, Slope{1, 1});
    return cb.flip(s);
}

MappingCone mapping_cone(const KnotComplex& c, const Slope& slope, std::optional<int> b) {
    if (slope.p == 0) return zero_surgery_cone(c);
    Slope sl = make_slope(slope.p, slope.q);
    if (!(sl == slope)) throw std::runtime_error(fmt::format("slope {}/{} is not in lowest terms", slope.p, slope.q));
    cone_builder cb(c, sl);
    MappingCone mc;
    mc.parent = c;
    mc.slope = sl;
    mc.b = b.value_or(default_window(c, sl));
    if (mc.b < 0) throw std::runtime_error("mapping cone: negative window");
    long p = sl.p, q = sl.q, P = std::labs(p), twoqb = 2 * q * mc.b;
    // T = 2k - q + 1; A kept for |T| <= 2qb, B kept for -2qb + 2p <= T <= 2qb
    long a_lo = ceil_div(-twoqb + q - 1, 2), a_hi = floor_div(twoqb + q - 1, 2);
    long b_lo = ceil_div(-twoqb + 2 * p + q - 1, 2), b_hi = a_hi;

    std::map<long, int> a_index, b_index;
    auto add_block = [&](Part part, long k) {
        ConeSummand cs;
        cs.part = part;
        cs.k = k;
        cs.s = cb.slice_of(k);
        cs.first = mc.x.size();
        cs.size = c.size();
        cs.shift = cb.sigma(k) - (part == Part::B ? 1 : 0);
        const SliceComplex& slc = cb.cache.get(part == Part::A ? SliceKind::A : SliceKind::B, cs.s);
        for (int g = 0; g < c.size(); ++g) {
            mc.x.add_generator(fmt::format("{}{}:{}", part == Part::A ? "A" : "B", k, c.names[g]), slc.u.gr[g] + cs.shift);
            mc.label.push_back(pmod(k, P));
        }
        for (int g = 0; g < c.size(); ++g)
            for (int t : c.d.r[g]) mc.x.d.r[cs.first + g].push_back(cs.first + t);
        (part == Part::A ? a_index : b_index)[k] = static_cast<int>(mc.summands.size());
        mc.summands.push_back(cs);
    };
    for (long k = a_lo; k <= a_hi; ++k) add_block(Part::A, k);
    for (long k = b_lo; k <= b_hi; ++k) add_block(Part::B, k);

    int n = mc.x.size();
    mc.v = zero_map(n, n, -1);
    mc.h = zero_map(n, n, -1);
    mc.iota_a = zero_map(n, n, 0);
    mc.iota_b = zero_map(n, n, 0);
    mc.H = zero_map(n, n, 0);
    auto find = [](const std::map<long, int>& idx, long k) {
        auto it = idx.find(k);
        return it == idx.end() ? -1 : it->second;
    };
    for (const auto& [k, ai] : a_index) {
        const ConeSummand& a = mc.summands[ai];
        int s = a.s;
        if (int bi = find(b_index, k); bi >= 0) embed(mc.v, cb.vmap(s), a.first, mc.summands[bi].first);
        GradedMap vt = cb.vtilde(s);
        if (int bi = find(b_index, k + p); bi >= 0) embed(mc.h, compose(vt, cb.flip(s)), a.first, mc.summands[bi].first);
        long kc = q - 1 - k;
        if (int ai2 = find(a_index, kc); ai2 >= 0)
            embed(mc.iota_a,
                  restrict_map(cb.iota, cb.cache.get(SliceKind::A, s), cb.cache.get(SliceKind::A, -s), -2 * s), a.first,
                  mc.summands[ai2].first);
        if (int bi = find(b_index, kc); bi >= 0) embed(mc.H, compose(vt, cb.hbt(s)), a.first, mc.summands[bi].first);
    }
    for (const auto& [k, bi] : b_index) {
        const ConeSummand& bs = mc.summands[bi];
        if (int bj = find(b_index, q - 1 - k + p); bj >= 0) {
            const SliceComplex& B = cb.cache.get(SliceKind::B, bs.s);
            embed(mc.iota_b, restrict_map(cb.iota2, B, B, 0), bs.first, mc.summands[bj].first);
        }
    }
    finish(mc);
    return mc;
}

MappingCone integer_cone(const KnotComplex& c, long n, std::optional<int> b) {
    if (n == 0) throw std::runtime_error("integer cone: use zero_surgery_cone for slope 0");
    return mapping_cone(c, {n, 1}, b);
}

MappingCone rational_cone(const KnotComplex& c, long p, long q, std::optional<int> b) {
    if (p == 0 || q == 0) throw std::runtime_error("rational cone: p and q must be nonzero");
    if (std::gcd(std::labs(p), std::labs(q)) != 1) throw std::runtime_error(fmt::format("{}/{} is not reduced", p, q));
    return mapping_cone(c, make_slope(p, q), b);
}

MappingCone zero_surgery_cone(const KnotComplex& c) {
    cone_builder cb(c, Slope{0, 1});
    MappingCone mc;
    mc.parent = c;
    mc.slope = {0, 1};
    const SliceComplex& A = cb.cache.get(SliceKind::A, 0);
    const SliceComplex& B = cb.cache.get(SliceKind::B, 0);
    int m = c.size();
    for (Part part : {Part::A, Part::B}) {
        ConeSummand cs;
        cs.part = part;
        cs.first = mc.x.size();
        cs.size = m;
        cs.shift = part == Part::B ? -1 : 0;
        const SliceComplex& slc = part == Part::A ? A : B;
        for (int g = 0; g < m; ++g) {
            mc.x.add_generator(fmt::format("{}0:{}", part == Part::A ? "A" : "B", c.names[g]), slc.u.gr[g] + cs.shift);
            mc.label.push_back(0);
        }
        for (int g = 0; g < m; ++g)
            for (int t : c.d.r[g]) mc.x.d.r[cs.first + g].push_back(cs.first + t);
        mc.summands.push_back(cs);
    }
    int n = mc.x.size();
    mc.v = zero_map(n, n, -1);
    mc.h = zero_map(n, n, -1);
    mc.iota_a = zero_map(n, n, 0);
    mc.iota_b = zero_map(n, n, 0);
    mc.H = zero_map(n, n, 0);
    GradedMap vt = cb.vtilde(0);
    embed(mc.v, cb.vmap(0), 0, m);
    embed(mc.h, compose(vt, cb.flip(0)), 0, m);
    embed(mc.iota_a, restrict_map(cb.iota, A, A, 0), 0, 0);
    embed(mc.iota_b, restrict_map(cb.iota2, B, B, 0), m, m);
    embed(mc.H, compose(vt, cb.hbt(0)), 0, m);
    finish(mc);
    return mc;
}

std::vector<std::string> check_cone(const MappingCone& mc) {
    std::vector<std::string> out;
    for (auto& e : validate(mc.x)) out.push_back("cone: " + e);
    if (!out.empty()) return out;
    if (!is_chain_map(mc.x, mc.x, mc.iota)) out.push_back("iota_X is not a chain map");
    // iota^2 ~ id, certified on the reduced model of each class
    std::vector<long> labels;
    for (long l : mc.label)
        if (std::find(labels.begin(), labels.end(), l) == labels.end()) labels.push_back(l);
    for (long l : labels) {
        if (conjugate_label(mc.slope, l) != l) continue;
        IotaComplex r = reduce(class_iota_complex(mc, l));
        GradedMap sq = compose(r.iota, r.iota) + identity_map(r.base.size());
        sq.degree = 0;
        if (!find_homotopy(r.base, r.base, sq)) out.push_back(fmt::format("iota_X^2 is not homotopic to id on class {}", l));
    }
    // h and H agree with maps computed directly on A, which only see the inclusion into Bt
    cone_builder cb(mc.parent, mc.slope.p == 0 ? Slope{1, 1} : mc.slope);
    for (const ConeSummand& a : mc.summands) {
        if (a.part != Part::A) continue;
        GradedMap direct = restrict_map(cb.iota, cb.cache.get(SliceKind::A, a.s), cb.cache.get(SliceKind::B, -a.s), -2 * a.s);
        GradedMap vt = cb.vtilde(a.s);
        for (int g = 0; g < a.size; ++g) {
            int x = a.first + g;
            // targets of h from this generator, pulled back to parent indices
            std::vector<int> hs, hd;
            for (int y : mc.h.m.r[x]) hs.push_back(y - mc.summands[mc.summand_of(y)].first);
            std::sort(hs.begin(), hs.end());
            if (!hs.empty() && hs != direct.m.r[g])
                out.push_back(fmt::format("h does not factor through the inclusion at {}", mc.x.names[x]));
            for (int y : mc.H.m.r[x]) hd.push_back(y - mc.summands[mc.summand_of(y)].first);
            std::sort(hd.begin(), hd.end());
            if (!hd.empty()) {
                std::vector<int> expect;
                for (int t : vt.m.r[g])
                    for (int y : cb.hbt(a.s).m.r[t]) toggle_sorted(expect, y);
                if (hd != expect) out.push_back(fmt::format("H does not factor through the inclusion at {}", mc.x.names[x]));
            }
        }
    }
    return out;
}

std::vector<long> spin_c_labels(const Slope& slope) {
    if (slope.p == 0) return {0};
    std::vector<long> out(std::labs(slope.p));
    std::iota(out.begin(), out.end(), 0L);
    return out;
}

long conjugate_label(const Slope& slope, long label) {
    if (slope.p == 0) return 0;
    return pmod(slope.q - 1 - label, std::labs(slope.p));
}

std::vector<SelfConjugate> self_conjugate_classes(const Slope& slope) {
    if (slope.p == 0) return {{0, "[0]"}};
    long P = std::labs(slope.p), q = slope.q;
    std::vector<SelfConjugate> out;
    // T = 0 needs q odd; T = p needs p + q odd
    if (q % 2 == 1) out.push_back({pmod((q - 1) / 2, P), "[0]"});
    if ((slope.p + q) % 2 != 0) out.push_back({pmod((slope.p + q - 1) / 2, P), class_name(slope, false)});
    return out;
}

UComplex class_complex(const MappingCone& mc, long label) { return subcomplex(mc.x, class_generators(mc, label)); }

IotaComplex class_iota_complex(const MappingCone& mc, long label) {
    if (mc.slope.p != 0 && conjugate_label(mc.slope, label) != label)
        throw std::runtime_error(fmt::format("class {} is not self-conjugate", label));
    auto keep = class_generators(mc, label);
    return {subcomplex(mc.x, keep), restrict_square(mc.iota, keep, mc.x.size())};
}

rational lens_target(const Slope& slope, long label) {
    if (slope.p == 0) throw std::runtime_error("lens_target: zero surgery has no calibration");
    rational d = lens_d(std::labs(slope.p), slope.q, label);
    return slope.p > 0 ? d : -d;
}

std::vector<ClassInvariants> cone_invariants(const KnotComplex& c, const Slope& slope, std::optional<int> b) {
    if (slope.p == 0) throw std::runtime_error("cone invariants: zero surgery is out of scope");
    MappingCone mc = mapping_cone(c, slope, b);
    MappingCone mu = mapping_cone(unknot(), slope);
    auto sc = self_conjugate_classes(slope);
    std::vector<ClassInvariants> out;
    for (long l : spin_c_labels(slope)) {
        ClassInvariants ci;
        ci.label = l;
        rational shift = lens_target(slope, l) - d_invariant(class_complex(mu, l));
        auto it = std::find_if(sc.begin(), sc.end(), [&](const SelfConjugate& s) { return s.label == l; });
        if (it != sc.end()) {
            ci.self_conjugate = true;
            ci.name = it->name;
            InvolutiveD id = involutive_d(class_iota_complex(mc, l));
            ci.d = shift + id.d;
            ci.d_lower = shift + id.d_lower;
            ci.d_upper = shift + id.d_upper;
        } else {
            ci.name = fmt::format("{}", l);
            ci.d = ci.d_lower = ci.d_upper = shift + d_invariant(class_complex(mc, l));
        }
        out.push_back(ci);
    }
    return out;
}

std::vector<ClassInvariants> formula_invariants(const KnotComplex& c, const Slope& slope) {
    if (slope.p == 0) throw std::runtime_error("formula invariants: zero surgery is out of scope");
    if (slope.p < 0) {
        // S_{-p/q}(K) = -S_{p/q}(mirror K)
        auto m = formula_invariants(dual(c), {-slope.p, slope.q});
        auto sc = self_conjugate_classes(slope);
        for (auto& ci : m) {
            rational lo = ci.d_lower;
            ci.d = -ci.d;
            ci.d_lower = -ci.d_upper;
            ci.d_upper = -lo;
            auto it = std::find_if(sc.begin(), sc.end(), [&](const SelfConjugate& s) { return s.label == ci.label; });
            if (it != sc.end()) ci.name = it->name;
        }
        return m;
    }
    long p = slope.p, q = slope.q;
    std::map<int, int> vcache;
    auto V = [&](long s) {
        auto it = vcache.find(static_cast<int>(s));
        if (it != vcache.end()) return it->second;
        return vcache[static_cast<int>(s)] = V_s(c, static_cast<int>(s));
    };
    // complexes whose tower does not start in grading 0 carry their offset through
    int dy = d_invariant(slice(c, SliceKind::B, 0).u);
    InvolutiveD a0 = involutive_d(a0_iota(c));
    auto sc = self_conjugate_classes(slope);
    std::vector<ClassInvariants> out;
    for (long i = 0; i < p; ++i) {
        ClassInvariants ci;
        ci.label = i;
        rational lens = lens_target(slope, i);
        ci.d = dy + lens - 2 * std::max(V(floor_div(i, q)), V(floor_div(p + q - 1 - i, q)));
        ci.d_lower = ci.d_upper = ci.d;
        ci.name = fmt::format("{}", i);
        auto it = std::find_if(sc.begin(), sc.end(), [&](const SelfConjugate& s) { return s.label == i; });
        if (it != sc.end()) {
            ci.self_conjugate = true;
            ci.name = it->name;
            if (it->name == "[0]") {
                ci.d_lower = lens + a0.d_lower;
                ci.d_upper = lens + a0.d_upper;
            } else {
                ci.d_upper = lens + dy;
            }
        }
        out.push_back(ci);
    }
    return out;
}

bool SurgeryReport::agree() const { return cone == formula; }

SurgeryReport surgery_invariants(const KnotComplex& c, const Slope& slope, std::optional<int> b) {
    SurgeryReport r;
    r.slope = slope;
    r.b = b.value_or(default_window(c, slope));
    r.cone = cone_invariants(c, slope, r.b);
    r.formula = formula_invariants(c, slope);
    return r;
}

namespace {

// A_s -> B_s <- A_s with the copies swapped and B fixed
IotaComplex wedge(const KnotComplex& c, int s) {
    SliceComplex A = slice(c, SliceKind::A, s), B = slice(c, SliceKind::B, s);
    GradedMap v = restrict_map(identity_mono, A, B, 0);
    int m = c.size();
    IotaComplex w;
    for (const char* pre : {"A", "A'"})
        for (int g = 0; g < m; ++g) w.base.add_generator(fmt::format("{}:{}", pre, c.names[g]), A.u.gr[g]);
    for (int g = 0; g < m; ++g) w.base.add_generator(fmt::format("B:{}", c.names[g]), B.u.gr[g] - 1);
    for (int blk = 0; blk < 3; ++blk)
        for (int g = 0; g < m; ++g)
            for (int t : c.d.r[g]) w.base.d.r[blk * m + g].push_back(blk * m + t);
    for (int blk = 0; blk < 2; ++blk)
        for (int g = 0; g < m; ++g)
            for (int t : v.m.r[g]) w.base.d.r[blk * m + g].push_back(2 * m + t);
    for (auto& row : w.base.d.r) std::sort(row.begin(), row.end());
    w.iota = zero_map(3 * m, 3 * m, 0);
    for (int g = 0; g < m; ++g) {
        w.iota.m.toggle(g, m + g);
        w.iota.m.toggle(m + g, g);
        w.iota.m.toggle(2 * m + g, 2 * m + g);
    }
    return w;
}

IotaComplex shift_gradings(IotaComplex ic, int by) {
    for (int& g : ic.base.gr) g += by;
    return ic;
}

IotaComplex representative_unshifted(const KnotComplex& c, const Slope& slope, long label) {
    auto sc = self_conjugate_classes(slope);
    auto it = std::find_if(sc.begin(), sc.end(), [&](const SelfConjugate& s) { return s.label == label; });
    if (it == sc.end()) throw std::runtime_error(fmt::format("class {} is not self-conjugate for slope {}", label, slope.str()));
    if (slope.p < 0) return dual(representative_unshifted(dual(c), {-slope.p, slope.q}, label));
    if (it->name == "[0]") return a0_iota(c);
    long k = (slope.p + slope.q - 1) / 2;
    return wedge(c, static_cast<int>(floor_div(k, slope.q)));
}

}  // namespace

IotaComplex minimal_local_representative(const KnotComplex& c, const Slope& slope, long label) {
    if (slope.p == 0) throw std::runtime_error("minimal representative: zero surgery is not supported");
    IotaComplex rep = representative_unshifted(c, slope, label);
    int target = d_invariant(class_complex(mapping_cone(c, slope), label));
    return shift_gradings(rep, target - d_invariant(rep.base));
}

ConeMorphism cone_functor(const MappingCone& src, const MappingCone& tgt, const KnotMap& F, const KnotMap& h) {
    if (!(src.slope == tgt.slope) || src.b != tgt.b)
        throw std::runtime_error("cone functor: cones differ in slope or window");
    if (F.skew || F.dw != 0 || F.dz != 0) throw std::runtime_error("cone functor: F must be equivariant of bidegree (0,0)");
    if (!h.skew || h.dw != 1 || h.dz != 1) throw std::runtime_error("cone functor: h must be skew of bidegree (1,1)");
    const KnotComplex& C = src.parent;
    const KnotComplex& D = tgt.parent;
    MonoMap fm = mono_of(C, D, F);
    long p = src.slope.p, q = src.slope.q;
    std::map<std::pair<int, long>, int> tidx;
    for (std::size_t i = 0; i < tgt.summands.size(); ++i)
        tidx[{static_cast<int>(tgt.summands[i].part), tgt.summands[i].k}] = static_cast<int>(i);
    auto target_of = [&](Part part, long k) {
        auto it = tidx.find({static_cast<int>(part), k});
        return it == tidx.end() ? -1 : it->second;
    };
    int ns = src.x.size(), nt = tgt.x.size();
    ConeMorphism out;
    out.F = zero_map(ns, nt, 0);
    for (const ConeSummand& a : src.summands) {
        int ti = target_of(a.part, a.k);
        if (ti < 0) continue;
        SliceKind kind = a.part == Part::A ? SliceKind::A : SliceKind::B;
        embed(out.F, restrict_map(fm, slice(C, kind, a.s), slice(D, kind, a.s), 0), a.first, tgt.summands[ti].first);
    }
    std::vector<long> tk(nt);
    std::vector<Part> tp(nt);
    for (const ConeSummand& t : tgt.summands)
        for (int g = 0; g < t.size; ++g) {
            tk[t.first + g] = t.k;
            tp[t.first + g] = t.part;
        }
    std::vector<long> sk(ns);
    std::vector<Part> sp(ns);
    for (const ConeSummand& s : src.summands)
        for (int g = 0; g < s.size; ++g) {
            sk[s.first + g] = s.k;
            sp[s.first + g] = s.part;
        }
    // L: A_k -> B'_{k+p} repairs F h + h' F
    GradedMap r = commutator(src.x, tgt.x, out.F);
    auto L = find_homotopy(src.x, tgt.x, r, [&](int x, int y) {
        return sp[x] == Part::A && tp[y] == Part::B && tk[y] == sk[x] + p;
    });
    if (!L) throw std::runtime_error("cone functor: no homotopy L (input is not an enhanced morphism?)");
    out.F = out.F + *L;
    out.F.degree = 0;
    GradedMap rel = compose(src.iota, out.F) + compose(out.F, tgt.iota);
    rel.degree = 0;
    auto G = find_homotopy(src.x, tgt.x, rel, [&](int x, int y) {
        long kc = p == 0 ? sk[x] : q - 1 - sk[x];
        if (sp[x] == Part::A) {
            if (tp[y] == Part::A) return tk[y] == kc;
            return tk[y] == kc || tk[y] == kc + p;
        }
        return tp[y] == Part::B && tk[y] == kc + p;
    });
    if (!G) throw std::runtime_error("cone functor: no homotopy G (input is not an enhanced morphism?)");
    out.G = *G;
    return out;
}

}  // namespace ikc
