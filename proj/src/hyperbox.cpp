#include "ikc/hyperbox.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <fmt/ranges.h>
#include <stdexcept>

#include "ikc/random.hpp"

namespace ikc {

namespace {

bool same_complex(const UComplex& a, const UComplex& b) { return a.names == b.names && a.gr == b.gr && a.d == b.d; }

bool same_map(const GradedMap& a, const GradedMap& b) {
    if (a.m.is_zero() && b.m.is_zero()) return a.m.rows == b.m.rows && a.m.cols == b.m.cols;
    return a.m == b.m && a.degree == b.degree;
}

std::string point_str(const std::vector<int>& pt) { return fmt::format("({})", fmt::join(pt, ",")); }

int coord_sum(const std::vector<int>& pt) {
    int s = 0;
    for (int c : pt) s += c;
    return s;
}

}  // namespace

Hyperbox::Hyperbox(std::vector<int> sz) : size(std::move(sz)) { complexes.resize(num_points()); }

int Hyperbox::num_points() const {
    int n = 1;
    for (int s : size) n *= s + 1;
    return n;
}

int Hyperbox::index(const std::vector<int>& pt) const {
    if (pt.size() != size.size()) throw std::runtime_error("hyperbox: point has the wrong dimension");
    int idx = 0;
    for (int i = dim() - 1; i >= 0; --i) {
        if (pt[i] < 0 || pt[i] > size[i]) throw std::runtime_error("hyperbox: point " + point_str(pt) + " outside the box");
        idx = idx * (size[i] + 1) + pt[i];
    }
    return idx;
}

std::vector<int> Hyperbox::point(int idx) const {
    std::vector<int> pt(size.size());
    for (int i = 0; i < dim(); ++i) {
        pt[i] = idx % (size[i] + 1);
        idx /= size[i] + 1;
    }
    return pt;
}

int Hyperbox::step(int idx, unsigned mask) const {
    std::vector<int> pt = point(idx);
    for (int i = 0; i < dim(); ++i)
        if (mask >> i & 1u) {
            if (++pt[i] > size[i]) return -1;
        }
    if (mask >> dim()) return -1;
    return index(pt);
}

GradedMap Hyperbox::get(int idx, unsigned mask) const {
    auto it = maps.find({idx, mask});
    if (it != maps.end()) return it->second;
    int t = step(idx, mask);
    if (t < 0) throw std::runtime_error("hyperbox: step leaves the box");
    return zero_map(complexes[idx].size(), complexes[t].size(), mask_weight(mask) - 1);
}

void Hyperbox::set(int idx, unsigned mask, GradedMap f) {
    if (mask == 0) throw std::runtime_error("hyperbox: the length 0 map is the differential");
    if (step(idx, mask) < 0) throw std::runtime_error("hyperbox: step leaves the box");
    if (f.m.is_zero())
        maps.erase({idx, mask});
    else
        maps[{idx, mask}] = std::move(f);
}

bool Hyperbox::has(int idx, unsigned mask) const { return maps.count({idx, mask}) > 0; }

void Hyperbox::drop_zero_maps() {
    std::erase_if(maps, [](const auto& kv) { return kv.second.m.is_zero(); });
}

bool Hyperbox::operator==(const Hyperbox& o) const {
    if (size != o.size || complexes.size() != o.complexes.size()) return false;
    for (std::size_t i = 0; i < complexes.size(); ++i)
        if (!same_complex(complexes[i], o.complexes[i])) return false;
    for (int p = 0; p < num_points(); ++p)
        for (unsigned e = 1; e < (1u << dim()); ++e)
            if (step(p, e) >= 0 && !same_map(get(p, e), o.get(p, e))) return false;
    return true;
}

int mask_weight(unsigned mask) { return __builtin_popcount(mask); }

std::string mask_str(unsigned mask, int n) {
    std::string s;
    for (int i = 0; i < n; ++i) s += (mask >> i & 1u) ? '1' : '0';
    return s;
}

std::string HyperboxViolation::str(int n) const { return fmt::format("relation at {} for {}", point_str(at), mask_str(mask, n)); }

std::vector<std::string> check_shape(const Hyperbox& h) {
    std::vector<std::string> out;
    if (h.dim() > 3) out.push_back("dimension above 3");
    for (int s : h.size)
        if (s < 0) out.push_back("negative size");
    if (!out.empty()) return out;
    if (static_cast<int>(h.complexes.size()) != h.num_points()) {
        out.push_back(fmt::format("{} complexes for {} points", h.complexes.size(), h.num_points()));
        return out;
    }
    for (int p = 0; p < h.num_points(); ++p)
        for (const auto& e : validate(h.complexes[p])) out.push_back(point_str(h.point(p)) + ": " + e);
    for (const auto& [key, f] : h.maps) {
        auto [p, e] = key;
        int t = (p >= 0 && p < h.num_points() && e != 0) ? h.step(p, e) : -1;
        if (t < 0) {
            out.push_back(fmt::format("map {} at point index {} leaves the box", mask_str(e, h.dim()), p));
            continue;
        }
        std::string where = fmt::format("D^{} at {}", mask_str(e, h.dim()), point_str(h.point(p)));
        if (f.degree != mask_weight(e) - 1 && !f.m.is_zero())
            out.push_back(fmt::format("{}: degree {} instead of {}", where, f.degree, mask_weight(e) - 1));
        for (const auto& err : check_map(h.complexes[p], h.complexes[t], f)) out.push_back(where + ": " + err);
    }
    return out;
}

std::vector<HyperboxViolation> check_relations(const Hyperbox& h) {
    std::vector<HyperboxViolation> out;
    unsigned full = (1u << h.dim()) - 1;
    for (int p = 0; p < h.num_points(); ++p)
        for (unsigned e = 1; e <= full; ++e) {
            int t = h.step(p, e);
            if (t < 0) continue;
            F2Matrix sum(h.complexes[p].size(), h.complexes[t].size());
            // e' runs over all submasks of e, including 0 and e
            for (unsigned sub = e;; sub = (sub - 1) & e) {
                int mid = h.step(p, sub);
                const F2Matrix first = sub == 0 ? h.complexes[p].d : h.get(p, sub).m;
                const F2Matrix second = sub == e ? h.complexes[t].d : h.get(mid, e ^ sub).m;
                sum += first * second;
                if (sub == 0) break;
            }
            if (!sum.is_zero()) out.push_back({h.point(p), e});
        }
    return out;
}

std::vector<std::string> validate(const Hyperbox& h) {
    auto out = check_shape(h);
    if (!out.empty()) return out;
    for (const auto& v : check_relations(h)) out.push_back(v.str(h.dim()));
    return out;
}

Hyperbox restrict_box(const Hyperbox& h, int axis, int from, int to) {
    if (axis < 0 || axis >= h.dim()) throw std::runtime_error("restrict box: bad axis");
    if (from < 0 || to > h.size[axis] || from > to) throw std::runtime_error("restrict box: bad range");
    std::vector<int> sz = h.size;
    sz[axis] = to - from;
    Hyperbox out(sz);
    for (int q = 0; q < out.num_points(); ++q) {
        std::vector<int> pt = out.point(q);
        pt[axis] += from;
        out.complexes[q] = h.at(pt);
    }
    for (const auto& [key, f] : h.maps) {
        std::vector<int> pt = h.point(key.first);
        int end = pt[axis] + static_cast<int>(key.second >> axis & 1u);
        if (pt[axis] < from || end > to) continue;
        pt[axis] -= from;
        out.set(pt, key.second, f);
    }
    return out;
}

Hyperbox stack(const Hyperbox& h1, const Hyperbox& h2, int axis) {
    if (h1.dim() != h2.dim() || axis < 0 || axis >= h1.dim()) throw std::runtime_error("stack: dimensions differ");
    for (int i = 0; i < h1.dim(); ++i)
        if (i != axis && h1.size[i] != h2.size[i]) throw std::runtime_error("stack: sizes differ off the stacking axis");
    int d1 = h1.size[axis];
    // the shared face must agree exactly
    for (int q = 0; q < h2.num_points(); ++q) {
        std::vector<int> pt = h2.point(q);
        if (pt[axis] != 0) continue;
        std::vector<int> p1 = pt;
        p1[axis] = d1;
        int i1 = h1.index(p1);
        if (!same_complex(h1.complexes[i1], h2.complexes[q]))
            throw std::runtime_error("stack: complexes differ on the shared face at " + point_str(pt));
        for (unsigned e = 1; e < (1u << h1.dim()); ++e) {
            if (e >> axis & 1u) continue;
            if (h2.step(q, e) < 0) continue;
            if (!same_map(h1.get(i1, e), h2.get(q, e)))
                throw std::runtime_error(fmt::format("stack: D^{} differs on the shared face at {}", mask_str(e, h1.dim()), point_str(pt)));
        }
    }
    std::vector<int> sz = h1.size;
    sz[axis] = d1 + h2.size[axis];
    Hyperbox out(sz);
    for (int q = 0; q < out.num_points(); ++q) {
        std::vector<int> pt = out.point(q);
        if (pt[axis] <= d1) {
            out.complexes[q] = h1.at(pt);
        } else {
            pt[axis] -= d1;
            out.complexes[q] = h2.at(pt);
        }
    }
    for (const auto& [key, f] : h1.maps) out.set(h1.point(key.first), key.second, f);
    for (const auto& [key, f] : h2.maps) {
        std::vector<int> pt = h2.point(key.first);
        if (pt[axis] == 0 && !(key.second >> axis & 1u)) continue;
        pt[axis] += d1;
        out.set(pt, key.second, f);
    }
    return out;
}

Hyperbox compress(const Hyperbox& h) {
    int axis = -1;
    for (int i = 0; i < h.dim(); ++i)
        if (h.size[i] > 1) {
            if (axis >= 0) throw std::runtime_error("compress: more than one axis is longer than 1");
            axis = i;
        }
    if (axis < 0) return h;
    int d = h.size[axis];
    unsigned abit = 1u << axis;
    std::vector<int> sz = h.size;
    sz[axis] = 1;
    Hyperbox out(sz);
    auto old_point = [&](std::vector<int> pt) {
        pt[axis] *= d;
        return pt;
    };
    for (int q = 0; q < out.num_points(); ++q) out.complexes[q] = h.at(old_point(out.point(q)));
    for (int q = 0; q < out.num_points(); ++q)
        for (unsigned e = 1; e < (1u << h.dim()); ++e) {
            if (out.step(q, e) < 0) continue;
            std::vector<int> base = old_point(out.point(q));
            int src = h.index(base);
            if (!(e & abit)) {
                GradedMap f = h.get(src, e);
                if (!f.m.is_zero()) out.set(q, e, f);
                continue;
            }
            // every path of d steps along the axis; the other bits of e are used once each, spread over the steps
            unsigned rest = e & ~abit;
            std::map<unsigned, GradedMap> cur;
            cur[0] = identity_map(h.complexes[src].size());
            for (int t = 0; t < d; ++t) {
                std::map<unsigned, GradedMap> next;
                for (const auto& [used, acc] : cur) {
                    unsigned avail = rest & ~used;
                    std::vector<int> at = base;
                    at[axis] = t;
                    for (int i = 0; i < h.dim(); ++i)
                        if (used >> i & 1u) at[i] += 1;
                    int from = h.index(at);
                    for (unsigned mu = avail;; mu = (mu - 1) & avail) {
                        GradedMap stepm = h.get(from, mu | abit);
                        if (!stepm.m.is_zero()) {
                            GradedMap c = compose(acc, stepm);
                            auto it = next.find(used | mu);
                            if (it == next.end())
                                next.emplace(used | mu, c);
                            else
                                it->second = it->second + c;
                        }
                        if (mu == 0) break;
                    }
                }
                cur = std::move(next);
            }
            auto it = cur.find(rest);
            if (it != cur.end() && !it->second.m.is_zero()) {
                GradedMap f = it->second;
                f.degree = mask_weight(e) - 1;
                out.set(q, e, f);
            }
        }
    return out;
}

Hyperbox fill_cube(const Hyperbox& partial) {
    if (partial.size != std::vector<int>{1, 1, 1}) throw std::runtime_error("fill cube: need a 3-dimensional cube");
    auto shape = check_shape(partial);
    if (!shape.empty()) throw std::runtime_error("fill cube: " + shape[0]);
    Hyperbox h = partial;
    int o = h.index({0, 0, 0}), p100 = h.index({1, 0, 0}), p110 = h.index({1, 1, 0}), p101 = h.index({1, 0, 1});
    const unsigned x = 1, y = 2, z = 4;
    h.maps.erase({p100, y | z});
    h.maps.erase({o, x | y | z});
    for (const auto& v : check_relations(h)) {
        bool front = v.at == std::vector<int>{1, 0, 0} && v.mask == (y | z);
        bool whole = v.at == std::vector<int>{0, 0, 0} && v.mask == (x | y | z);
        if (!front && !whole) throw std::runtime_error("fill cube: " + v.str(3));
    }
    const UComplex& c0 = h.complexes[o];
    const UComplex& c1 = h.complexes[p100];
    GradedMap f100 = h.get(o, x);
    GradedMap E, H, J;
    std::optional<F2Matrix> inv;
    if (c0.size() == c1.size()) inv = inverse_f2(f100.m);
    if (inv && check_map(c1, c0, {*inv, 0, false}).empty()) {
        E = {*inv, 0, false};
        H = zero_map(c0.size(), c0.size(), 1);
        J = zero_map(c1.size(), c1.size(), 1);
    } else {
        auto hi = homotopy_inverse(c0, c1, f100);
        if (!hi) throw std::runtime_error("fill cube: D^100 at the origin is not a homotopy equivalence");
        E = hi->g;
        H = hi->H;
        J = hi->J;
    }
    GradedMap K = zero_map(c0.size(), h.complexes[h.index({1, 1, 1})].size(), 1);
    for (unsigned sub = 1; sub < 7; ++sub) {
        if (sub == x) continue;
        K = K + compose(h.get(o, sub), h.get(h.step(o, sub), 7 ^ sub));
    }
    GradedMap R = compose(h.get(p100, z), h.get(p101, y)) + compose(h.get(p100, y), h.get(p110, z));
    GradedMap d011 = compose(E, K) + compose(J, R);
    d011.degree = 1;
    GradedMap f = compose(H, f100) + compose(f100, J);
    f.degree = 1;
    GradedMap d111 = compose(H, K) + compose(f, d011);
    d111.degree = 2;
    h.set(p100, y | z, d011);
    h.set(o, x | y | z, d111);
    return h;
}

TotalComplex total_complex(const Hyperbox& h) {
    TotalComplex t;
    for (int p = 0; p < h.num_points(); ++p) {
        t.offset.push_back(t.c.size());
        std::vector<int> pt = h.point(p);
        std::string tag = fmt::format("{}", fmt::join(pt, ""));
        const UComplex& c = h.complexes[p];
        for (int g = 0; g < c.size(); ++g) t.c.add_generator(tag + ":" + c.names[g], c.gr[g] - coord_sum(pt));
    }
    for (int p = 0; p < h.num_points(); ++p) {
        const UComplex& c = h.complexes[p];
        for (int g = 0; g < c.size(); ++g)
            for (int y : c.d.r[g]) t.c.d.r[t.offset[p] + g].push_back(t.offset[p] + y);
    }
    for (const auto& [key, f] : h.maps) {
        int tp = h.step(key.first, key.second);
        for (int g = 0; g < f.m.rows; ++g)
            for (int y : f.m.r[g]) t.c.d.r[t.offset[key.first] + g].push_back(t.offset[tp] + y);
    }
    for (auto& row : t.c.d.r) std::sort(row.begin(), row.end());
    return t;
}

Hyperbox face(const Hyperbox& h, int axis, int coord) {
    if (axis < 0 || axis >= h.dim() || coord < 0 || coord > h.size[axis]) throw std::runtime_error("face: bad axis or coordinate");
    std::vector<int> sz = h.size;
    sz.erase(sz.begin() + axis);
    Hyperbox out(sz);
    auto lift = [&](std::vector<int> pt) {
        pt.insert(pt.begin() + axis, coord);
        return pt;
    };
    auto lift_mask = [&](unsigned e) {
        unsigned low = e & ((1u << axis) - 1);
        return low | ((e & ~((1u << axis) - 1)) << 1);
    };
    for (int q = 0; q < out.num_points(); ++q) out.complexes[q] = h.at(lift(out.point(q)));
    for (int q = 0; q < out.num_points(); ++q)
        for (unsigned e = 1; e < (1u << out.dim()); ++e) {
            if (out.step(q, e) < 0) continue;
            GradedMap f = h.get(h.index(lift(out.point(q))), lift_mask(e));
            if (!f.m.is_zero()) out.set(q, e, f);
        }
    return out;
}

GradedMap edge_map(const Hyperbox& h, int axis) {
    if (axis < 0 || axis >= h.dim() || h.size[axis] != 1) throw std::runtime_error("edge map: axis must have size 1");
    Hyperbox f0 = face(h, axis, 0), f1 = face(h, axis, 1);
    TotalComplex t0 = total_complex(f0), t1 = total_complex(f1);
    GradedMap out = zero_map(t0.c.size(), t1.c.size(), 0);
    unsigned abit = 1u << axis;
    auto lift_mask = [&](unsigned e) {
        unsigned low = e & (abit - 1);
        return low | ((e & ~(abit - 1)) << 1);
    };
    for (int q = 0; q < f0.num_points(); ++q) {
        std::vector<int> pt = f0.point(q);
        std::vector<int> full = pt;
        full.insert(full.begin() + axis, 0);
        int src = h.index(full);
        for (unsigned e = 0; e < (1u << f0.dim()); ++e) {
            int tq = f0.step(q, e);
            if (tq < 0) continue;
            GradedMap f = h.get(src, lift_mask(e) | abit);
            for (int g = 0; g < f.m.rows; ++g)
                for (int y : f.m.r[g]) out.m.r[t0.offset[q] + g].push_back(t1.offset[tq] + y);
        }
    }
    for (auto& row : out.m.r) std::sort(row.begin(), row.end());
    return out;
}

Hyperbox random_hyperbox(std::mt19937& rng, const std::vector<int>& size, int max_gens, bool first_edge_equiv) {
    if (max_gens < 1) throw std::runtime_error("random hyperbox: need at least one generator");
    Hyperbox base(size);
    int n = base.dim();
    std::uniform_int_distribution<int> ngen(1, max_gens);
    UComplex c = random_complex(rng, ngen(rng));
    std::vector<bool> on(n);
    std::bernoulli_distribution coin(0.6);
    for (int i = 0; i < n; ++i) on[i] = (i == 0 && first_edge_equiv) || coin(rng);
    std::uniform_int_distribution<int> grd(-3, 3);
    for (int p = 0; p < base.num_points(); ++p) {
        UComplex v = c;
        int room = (max_gens - c.size()) / 2;
        int pairs = std::uniform_int_distribution<int>(0, room)(rng);
        for (int k = 0; k < pairs; ++k) {
            int g = grd(rng);
            v.add_generator(fmt::format("a{}", k), g);
            v.add_generator(fmt::format("b{}", k), g - 1);
            v.add_arrow(v.size() - 2, v.size() - 1);
        }
        base.complexes[p] = v;
    }
    for (int p = 0; p < base.num_points(); ++p)
        for (int i = 0; i < n; ++i) {
            int t = base.step(p, 1u << i);
            if (t < 0 || !on[i]) continue;
            GradedMap f = zero_map(base.complexes[p].size(), base.complexes[t].size(), 0);
            for (int g = 0; g < c.size(); ++g) f.m.r[g].push_back(g);
            base.set(p, 1u << i, f);
        }

    // conjugate the total complex by a filtered automorphism that never steps along a long axis
    TotalComplex tot = total_complex(base);
    int N = tot.c.size();
    std::vector<int> block(N);
    for (int p = 0; p < base.num_points(); ++p)
        for (int g = 0; g < base.complexes[p].size(); ++g) block[tot.offset[p] + g] = p;
    unsigned long_bits = 0;
    for (int i = 0; i < n; ++i)
        if (size[i] > 1) long_bits |= 1u << i;
    auto step_mask = [&](int p, int q) -> int {
        std::vector<int> a = base.point(p), b = base.point(q);
        unsigned m = 0;
        for (int i = 0; i < n; ++i) {
            int dlt = b[i] - a[i];
            if (dlt < 0 || dlt > 1) return -1;
            if (dlt == 1) m |= 1u << i;
        }
        return static_cast<int>(m);
    };
    GradedMap P = identity_map(N);
    GradedMap noise = random_map(rng, tot.c, tot.c, 0, 0.25);
    for (int a = 0; a < N; ++a)
        for (int b : noise.m.r[a]) {
            int m = step_mask(block[a], block[b]);
            if (m > 0 && !(static_cast<unsigned>(m) & long_bits)) P.m.r[a].push_back(b);
        }
    GradedMap V = identity_map(N);
    for (int p = 0; p < base.num_points(); ++p) {
        auto [aut, unused] = random_automorphism(rng, base.complexes[p]);
        (void)unused;
        for (int g = 0; g < aut.m.rows; ++g) {
            V.m.r[tot.offset[p] + g].clear();
            for (int y : aut.m.r[g]) V.m.r[tot.offset[p] + g].push_back(tot.offset[p] + y);
        }
    }
    F2Matrix phi = V.m * P.m;
    auto phinv = inverse_f2(phi);
    if (!phinv) throw std::runtime_error("random hyperbox: gauge map is not invertible");
    F2Matrix D = (*phinv * tot.c.d) * phi;

    Hyperbox out(size);
    for (int p = 0; p < base.num_points(); ++p) {
        UComplex v;
        const UComplex& b = base.complexes[p];
        for (int g = 0; g < b.size(); ++g) v.add_generator(b.names[g], b.gr[g]);
        out.complexes[p] = v;
    }
    std::map<std::pair<int, unsigned>, GradedMap> blocks;
    for (int a = 0; a < N; ++a)
        for (int b : D.r[a]) {
            int p = block[a], q = block[b];
            int ga = a - tot.offset[p], gb = b - tot.offset[q];
            if (p == q) {
                out.complexes[p].d.r[ga].push_back(gb);
                continue;
            }
            int m = step_mask(p, q);
            if (m <= 0) throw std::runtime_error("random hyperbox: conjugated differential leaves the lattice steps");
            auto key = std::make_pair(p, static_cast<unsigned>(m));
            auto it = blocks.find(key);
            if (it == blocks.end())
                it = blocks.emplace(key, zero_map(base.complexes[p].size(), base.complexes[q].size(), mask_weight(m) - 1)).first;
            it->second.m.r[ga].push_back(gb);
        }
    for (auto& v : out.complexes)
        for (auto& row : v.d.r) std::sort(row.begin(), row.end());
    for (auto& [key, f] : blocks) {
        for (auto& row : f.m.r) std::sort(row.begin(), row.end());
        out.set(key.first, key.second, f);
    }
    return out;
}

}  // namespace ikc
