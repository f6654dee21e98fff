#include "ikc/complex.hpp"

#include <algorithm>
#include <climits>
#include <fmt/core.h>
#include <stdexcept>

namespace ikc {

int UComplex::index(const std::string& name) const {
    for (int i = 0; i < size(); ++i)
        if (names[i] == name) return i;
    throw std::runtime_error("unknown generator '" + name + "'");
}

void UComplex::add_generator(const std::string& name, int grading) {
    names.push_back(name);
    gr.push_back(grading);
    d.rows++;
    d.cols++;
    d.r.emplace_back();
}

void UComplex::add_arrow(int from, int to) { d.toggle(from, to); }

int arrow_power(int gr_from, int gr_to, int degree) {
    int diff = gr_to - gr_from - degree;
    if (diff % 2 != 0) throw std::runtime_error("arrow_power: parity mismatch");
    return diff / 2;
}

bool arrow_legal(int gr_from, int gr_to, int degree) {
    int diff = gr_to - gr_from - degree;
    return diff >= 0 && diff % 2 == 0;
}

GradedMap identity_map(int n) { return {F2Matrix::identity(n), 0, false}; }

GradedMap zero_map(int ns, int nt, int degree) { return {F2Matrix(ns, nt), degree, false}; }

GradedMap diff_map(const UComplex& c) { return {c.d, -1, false}; }

GradedMap compose(const GradedMap& first, const GradedMap& second) {
    return {first.m * second.m, first.degree + second.degree, first.localized || second.localized};
}

GradedMap operator+(const GradedMap& a, const GradedMap& b) {
    if (a.degree != b.degree && !a.m.is_zero() && !b.m.is_zero())
        throw std::runtime_error(fmt::format("map sum: degrees {} and {} differ", a.degree, b.degree));
    int deg = a.m.is_zero() ? b.degree : a.degree;
    return {a.m + b.m, deg, a.localized || b.localized};
}

GradedMap commutator(const UComplex& src, const UComplex& tgt, const GradedMap& f) {
    GradedMap a = compose(f, diff_map(tgt));
    GradedMap b = compose(diff_map(src), f);
    return {a.m + b.m, f.degree - 1, f.localized};
}

std::vector<std::string> check_map(const UComplex& src, const UComplex& tgt, const GradedMap& f) {
    std::vector<std::string> out;
    if (f.m.rows != src.size() || f.m.cols != tgt.size()) {
        out.push_back("shape mismatch");
        return out;
    }
    for (int x = 0; x < src.size(); ++x)
        for (int y : f.m.r[x]) {
            int diff = tgt.gr[y] - src.gr[x] - f.degree;
            if (diff % 2 != 0)
                out.push_back(fmt::format("parity {}->{}", src.names[x], tgt.names[y]));
            else if (diff < 0 && !f.localized)
                out.push_back(fmt::format("negative power {}->{}", src.names[x], tgt.names[y]));
        }
    return out;
}

bool is_chain_map(const UComplex& src, const UComplex& tgt, const GradedMap& f) {
    return commutator(src, tgt, f).m.is_zero();
}

std::vector<std::string> validate(const UComplex& c) {
    std::vector<std::string> out;
    if (static_cast<int>(c.names.size()) != c.size() || c.d.rows != c.size() || c.d.cols != c.size()) {
        out.push_back("shape mismatch");
        return out;
    }
    for (int x = 0; x < c.size(); ++x)
        for (int y : c.d.r[x]) {
            int diff = c.gr[y] - c.gr[x] + 1;
            if (diff % 2 != 0)
                out.push_back(fmt::format("parity {}->{}", c.names[x], c.names[y]));
            else if (diff < 0)
                out.push_back(fmt::format("negative power {}->{}", c.names[x], c.names[y]));
        }
    if (!out.empty()) return out;
    F2Matrix dd = c.d * c.d;
    for (int x = 0; x < c.size(); ++x)
        for (int z : dd.r[x]) out.push_back(fmt::format("d^2 {}->{}", c.names[x], c.names[z]));
    return out;
}

int HomologyReport::max_torsion() const {
    int m = 0;
    for (auto [g, k] : torsion) m = std::max(m, k);
    return m;
}

namespace {

// adjacency with in/out lists, used by cancellation
struct cancel_graph {
    std::vector<std::vector<int>> out, in;
    std::vector<char> alive;

    explicit cancel_graph(const F2Matrix& d) : out(d.r), in(d.rows), alive(d.rows, 1) {
        for (int x = 0; x < d.rows; ++x)
            for (int y : d.r[x]) in[y].push_back(x);
    }

    // removes x and y after adding dx (minus y) to every other z with z -> y
    void cancel(int x, int y, std::vector<int>* touched_z = nullptr) {
        std::vector<int> zs = in[y];
        std::vector<int> ox = out[x];
        for (int z : zs) {
            if (z == x) continue;
            if (touched_z) touched_z->push_back(z);
            for (int t : ox) {
                toggle_sorted(out[z], t);
                toggle_sorted(in[t], z);
            }
        }
        for (int v : {x, y}) {
            for (int t : out[v]) {
                auto& lst = in[t];
                lst.erase(std::lower_bound(lst.begin(), lst.end(), v));
            }
            for (int w : in[v]) {
                auto& lst = out[w];
                lst.erase(std::lower_bound(lst.begin(), lst.end(), v));
            }
            out[v].clear();
            in[v].clear();
            alive[v] = 0;
        }
    }
};

}  // namespace

Reduction reduce(const UComplex& c, bool track_maps, bool track_tau) {
    return reduce_filtered(c, nullptr, track_maps, track_tau);
}

Reduction reduce_filtered(const UComplex& c, const std::function<bool(int, int)>& cancellable, bool track_maps,
                          bool track_tau) {
    int n = c.size();
    cancel_graph g(c.d);
    std::vector<std::vector<int>> sig, pit, tau;
    if (track_maps) {
        sig.resize(n);
        pit.resize(n);
        for (int i = 0; i < n; ++i) sig[i] = pit[i] = {i};
        if (track_tau) tau.resize(n);
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (int x = 0; x < n; ++x) {
            if (!g.alive[x]) continue;
            int y = -1;
            for (int t : g.out[x])
                if (c.gr[t] == c.gr[x] - 1 && (!cancellable || cancellable(x, t))) {
                    y = t;
                    break;
                }
            if (y < 0) continue;
            if (track_maps) {
                if (track_tau)
                    for (int orig : pit[y]) tau[orig] = sym_diff(tau[orig], sig[x]);
                for (int z : g.in[y])
                    if (z != x) sig[z] = sym_diff(sig[z], sig[x]);
                for (int t : g.out[x])
                    if (t != y) pit[t] = sym_diff(pit[t], pit[y]);
            }
            g.cancel(x, y);
            changed = true;
        }
    }
    Reduction res;
    std::vector<int> newidx(n, -1);
    for (int i = 0; i < n; ++i)
        if (g.alive[i]) {
            newidx[i] = static_cast<int>(res.kept.size());
            res.kept.push_back(i);
        }
    int m = static_cast<int>(res.kept.size());
    for (int i : res.kept) res.red.add_generator(c.names[i], c.gr[i]);
    for (int a = 0; a < m; ++a)
        for (int t : g.out[res.kept[a]]) res.red.d.r[a].push_back(newidx[t]);
    for (auto& row : res.red.d.r) std::sort(row.begin(), row.end());
    if (track_maps) {
        res.has_maps = true;
        res.pi = zero_map(n, m, 0);
        res.sigma = zero_map(m, n, 0);
        for (int a = 0; a < m; ++a) {
            res.sigma.m.r[a] = sig[res.kept[a]];
            for (int orig : pit[res.kept[a]]) res.pi.m.r[orig].push_back(a);
        }
        for (auto& row : res.pi.m.r) std::sort(row.begin(), row.end());
        if (track_tau) {
            res.has_tau = true;
            res.tau = zero_map(n, n, 1);
            res.tau.m.r = tau;
        }
    }
    return res;
}

HomologyReport homology(const UComplex& c) {
    Reduction r = reduce(c, false, false);
    const UComplex& rc = r.red;
    cancel_graph g(rc.d);
    HomologyReport rep;
    for (;;) {
        int bx = -1, by = -1, bk = INT_MAX;
        for (int x = 0; x < rc.size(); ++x)
            for (int y : g.out[x]) {
                int k = arrow_power(rc.gr[x], rc.gr[y], -1);
                if (k < bk) {
                    bk = k;
                    bx = x;
                    by = y;
                }
            }
        if (bx < 0) break;
        rep.torsion.push_back({rc.gr[by], bk});
        g.cancel(bx, by);
    }
    for (int i = 0; i < rc.size(); ++i)
        if (g.alive[i]) rep.free.push_back(rc.gr[i]);
    std::sort(rep.free.rbegin(), rep.free.rend());
    std::sort(rep.torsion.rbegin(), rep.torsion.rend());
    return rep;
}

int d_invariant(const UComplex& c) {
    auto h = homology(c);
    if (h.free.size() != 1) throw std::runtime_error(fmt::format("d_invariant: {} towers", h.free.size()));
    return h.free[0];
}

UComplex dual(const UComplex& c) {
    UComplex r;
    r.names = c.names;
    for (int g : c.gr) r.gr.push_back(-g);
    r.d = c.d.transpose();
    return r;
}

GradedMap dual_map(const GradedMap& f) { return {f.m.transpose(), f.degree, f.localized}; }

UComplex vertical_truncate(const UComplex& c, int delta) {
    if (delta < 1) throw std::runtime_error("vertical_truncate: delta must be positive");
    UComplex r = c;
    for (int x = 0; x < c.size(); ++x) {
        auto& row = r.d.r[x];
        row.erase(std::remove_if(row.begin(), row.end(),
                                 [&](int y) { return arrow_power(c.gr[x], c.gr[y], -1) >= delta; }),
                  row.end());
    }
    return r;
}

UComplex direct_sum(const UComplex& a, const UComplex& b) {
    UComplex r = a;
    int off = a.size();
    for (int i = 0; i < b.size(); ++i) r.add_generator(b.names[i], b.gr[i]);
    for (int i = 0; i < b.size(); ++i)
        for (int j : b.d.r[i]) r.d.r[off + i].push_back(off + j);
    return r;
}

UComplex subcomplex(const UComplex& c, const std::vector<int>& keep) {
    std::vector<int> idx(c.size(), -1);
    UComplex r;
    for (std::size_t a = 0; a < keep.size(); ++a) {
        idx[keep[a]] = static_cast<int>(a);
        r.add_generator(c.names[keep[a]], c.gr[keep[a]]);
    }
    for (std::size_t a = 0; a < keep.size(); ++a)
        for (int t : c.d.r[keep[a]])
            if (idx[t] >= 0) r.d.r[a].push_back(idx[t]);
    for (auto& row : r.d.r) std::sort(row.begin(), row.end());
    return r;
}

int MapSystem::add_unknown(int ns, int nt, int degree, const std::function<bool(int, int)>& legal) {
    if (final_) throw std::runtime_error("MapSystem: already finalized");
    unknown u;
    u.ns = ns;
    u.nt = nt;
    u.degree = degree;
    u.vars.resize(ns);
    for (int x = 0; x < ns; ++x)
        for (int y = 0; y < nt; ++y)
            if (legal(x, y)) u.vars[x].push_back({y, nvars_++});
    unknowns_.push_back(std::move(u));
    return static_cast<int>(unknowns_.size()) - 1;
}

void MapSystem::finalize() {
    sys_ = F2System(nvars_);
    final_ = true;
}

void MapSystem::add_row(const std::vector<int>& cols, bool rhs) {
    if (!final_) throw std::runtime_error("MapSystem: not finalized");
    sys_.add_row(cols, rhs);
    ++rows_;
}

void MapSystem::add_equations(int ns, int nt, const std::vector<term>& terms, const F2Matrix* rhs,
                              const std::function<bool(int, int)>& keep) {
    if (!final_) throw std::runtime_error("MapSystem: not finalized");
    std::vector<std::vector<int>> rows(nt);
    std::vector<char> bit(nt, 0), seen(nt, 0);
    std::vector<int> touched;
    auto touch = [&](int z) {
        if (!seen[z]) {
            seen[z] = 1;
            touched.push_back(z);
        }
    };
    for (int x = 0; x < ns; ++x) {
        touched.clear();
        for (const term& t : terms) {
            const unknown& u = unknowns_[t.unknown];
            auto visit_w = [&](int w) {
                for (auto [y, v] : u.vars[w]) {
                    if (t.post) {
                        for (int z : t.post->r[y]) {
                            touch(z);
                            rows[z].push_back(v);
                        }
                    } else {
                        touch(y);
                        rows[y].push_back(v);
                    }
                }
            };
            if (t.pre)
                for (int w : t.pre->r[x]) visit_w(w);
            else
                visit_w(x);
        }
        if (rhs)
            for (int z : rhs->r[x]) {
                touch(z);
                bit[z] ^= 1;
            }
        std::sort(touched.begin(), touched.end());
        for (int z : touched) {
            if (!keep || keep(x, z)) add_row(rows[z], bit[z] != 0);
            rows[z].clear();
            bit[z] = 0;
            seen[z] = 0;
        }
    }
}

F2Matrix MapSystem::extract(int ui, const bitvec& sol) const {
    const unknown& u = unknowns_[ui];
    F2Matrix m(u.ns, u.nt);
    for (int x = 0; x < u.ns; ++x)
        for (auto [y, v] : u.vars[x])
            if (sol[v]) m.r[x].push_back(y);
    return m;
}

std::optional<GradedMap> find_homotopy(const UComplex& src, const UComplex& tgt, const GradedMap& f,
                                       const PairFilter& allowed) {
    int deg = f.degree + 1;
    MapSystem ms;
    int h = ms.add_unknown(src.size(), tgt.size(), deg, [&](int x, int y) {
        return arrow_legal(src.gr[x], tgt.gr[y], deg) && (!allowed || allowed(x, y));
    });
    ms.finalize();
    ms.add_equations(src.size(), tgt.size(), {{h, &src.d, nullptr}, {h, nullptr, &tgt.d}}, &f.m);
    auto sol = ms.solve();
    if (!sol) return std::nullopt;
    return GradedMap{ms.extract(h, *sol), deg, false};
}

std::optional<HomotopyInverse> homotopy_inverse(const UComplex& src, const UComplex& tgt, const GradedMap& f) {
    Reduction rs = reduce(src), rt = reduce(tgt);
    if (rs.red.size() != rt.red.size()) return std::nullopt;
    GradedMap fr = compose(compose(rs.sigma, f), rt.pi);
    auto inv = inverse_f2(fr.m);
    if (!inv) return std::nullopt;
    GradedMap ginv{*inv, -f.degree, false};
    if (!check_map(rt.red, rs.red, ginv).empty()) return std::nullopt;
    HomotopyInverse out;
    out.g = compose(compose(rt.pi, ginv), rs.sigma);
    out.H = rs.tau + compose(compose(rs.tau, f), out.g);
    out.J = rt.tau + compose(compose(out.g, f), rt.tau);
    return out;
}

std::vector<int> graded_piece(const UComplex& c, int g, int delta) {
    std::vector<int> out;
    for (int x = 0; x < c.size(); ++x) {
        int diff = c.gr[x] - g;
        if (diff < 0 || diff % 2 != 0) continue;
        if (delta > 0 && diff / 2 >= delta) continue;
        out.push_back(x);
    }
    return out;
}

bitvec tower_cycle(const UComplex& c) {
    auto h = homology(c);
    if (h.free.empty()) throw std::runtime_error("tower_cycle: no tower");
    int d = h.free[0];
    int m = h.max_torsion() + 1;
    int n = c.size();
    auto ed = graded_piece(c, d), ed1 = graded_piece(c, d - 1);
    std::vector<int> pos1(n, -1);
    for (std::size_t i = 0; i < ed1.size(); ++i) pos1[ed1[i]] = static_cast<int>(i);
    // kernel of d on C_d
    F2Matrix a(static_cast<int>(ed1.size()), static_cast<int>(ed.size()));
    for (std::size_t j = 0; j < ed.size(); ++j)
        for (int y : c.d.r[ed[j]])
            if (pos1[y] >= 0) a.r[pos1[y]].push_back(static_cast<int>(j));
    for (auto& row : a.r) std::sort(row.begin(), row.end());
    auto ker = nullspace_f2(a);
    // boundaries in grading d - 2m, coordinates = generator indices
    F2System bnd(n);
    for (int x : graded_piece(c, d - 2 * m + 1)) bnd.add_row(c.d.r[x], false);
    for (const auto& z : ker) {
        std::vector<int> cols;
        for (std::size_t j = 0; j < ed.size(); ++j)
            if (z[j]) cols.push_back(ed[j]);
        if (!bnd.in_span(cols)) {
            bitvec out(n, 0);
            for (int x : cols) out[x] = 1;
            return out;
        }
    }
    throw std::runtime_error("tower_cycle: no surviving cycle");
}

}  // namespace ikc
