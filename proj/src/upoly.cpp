#include "ikc/upoly.hpp"

#include <bit>
#include <stdexcept>

namespace ikc {

UPoly UPoly::monomial(int k) {
    if (k < 0) throw std::runtime_error("UPoly: negative exponent");
    UPoly p;
    p.toggle(k);
    return p;
}

void UPoly::trim() {
    while (!w_.empty() && w_.back() == 0) w_.pop_back();
}

int UPoly::degree() const {
    if (w_.empty()) return -1;
    return static_cast<int>(w_.size() - 1) * 64 + 63 - std::countl_zero(w_.back());
}

int UPoly::low_degree() const {
    for (std::size_t i = 0; i < w_.size(); ++i)
        if (w_[i]) return static_cast<int>(i) * 64 + std::countr_zero(w_[i]);
    return -1;
}

bool UPoly::coeff(int k) const {
    if (k < 0) return false;
    std::size_t i = static_cast<std::size_t>(k) / 64;
    return i < w_.size() && ((w_[i] >> (k % 64)) & 1);
}

void UPoly::toggle(int k) {
    if (k < 0) throw std::runtime_error("UPoly: negative exponent");
    std::size_t i = static_cast<std::size_t>(k) / 64;
    if (w_.size() <= i) w_.resize(i + 1, 0);
    w_[i] ^= std::uint64_t(1) << (k % 64);
    trim();
}

UPoly UPoly::operator+(const UPoly& o) const {
    UPoly r = *this;
    r += o;
    return r;
}

UPoly& UPoly::operator+=(const UPoly& o) {
    if (w_.size() < o.w_.size()) w_.resize(o.w_.size(), 0);
    for (std::size_t i = 0; i < o.w_.size(); ++i) w_[i] ^= o.w_[i];
    trim();
    return *this;
}

UPoly UPoly::operator*(const UPoly& o) const {
    UPoly r;
    if (is_zero() || o.is_zero()) return r;
    int da = degree();
    for (int k = 0; k <= da; ++k) {
        if (!coeff(k)) continue;
        // add o shifted by k
        int ws = k / 64, bs = k % 64;
        if (r.w_.size() < o.w_.size() + ws + 1) r.w_.resize(o.w_.size() + ws + 1, 0);
        for (std::size_t i = 0; i < o.w_.size(); ++i) {
            r.w_[i + ws] ^= o.w_[i] << bs;
            if (bs) r.w_[i + ws + 1] ^= o.w_[i] >> (64 - bs);
        }
    }
    r.trim();
    return r;
}

std::pair<UPoly, UPoly> UPoly::divmod(const UPoly& d) const {
    if (d.is_zero()) throw std::runtime_error("UPoly: division by zero");
    UPoly q, r = *this;
    int dd = d.degree();
    while (!r.is_zero() && r.degree() >= dd) {
        int s = r.degree() - dd;
        q.toggle(s);
        r += d * monomial(s);
    }
    return {q, r};
}

bool UPoly::divides(const UPoly& b) const {
    if (is_zero()) return b.is_zero();
    return b.divmod(*this).second.is_zero();
}

std::string UPoly::str() const {
    if (is_zero()) return "0";
    std::string s;
    for (int k = degree(); k >= 0; --k) {
        if (!coeff(k)) continue;
        if (!s.empty()) s += "+";
        if (k == 0)
            s += "1";
        else if (k == 1)
            s += "U";
        else
            s += "U^" + std::to_string(k);
    }
    return s;
}

UMatrix UMatrix::identity(int n) {
    UMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.set(i, i, UPoly::one());
    return m;
}

UMatrix UMatrix::from_dense(const std::vector<std::vector<UPoly>>& a) {
    int r = static_cast<int>(a.size());
    int c = r ? static_cast<int>(a[0].size()) : 0;
    UMatrix m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m.set(i, j, a[i][j]);
    return m;
}

UPoly UMatrix::get(int i, int j) const {
    auto it = e_.find({i, j});
    return it == e_.end() ? UPoly() : it->second;
}

void UMatrix::set(int i, int j, const UPoly& p) {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw std::runtime_error("UMatrix::set: out of range");
    if (p.is_zero())
        e_.erase({i, j});
    else
        e_[{i, j}] = p;
}

std::vector<std::vector<UPoly>> UMatrix::dense() const {
    std::vector<std::vector<UPoly>> a(rows_, std::vector<UPoly>(cols_));
    for (const auto& [ij, p] : e_) a[ij.first][ij.second] = p;
    return a;
}

UMatrix compose_sparse(const UMatrix& f, const UMatrix& g) {
    if (f.cols() != g.rows()) throw std::runtime_error("compose_sparse: dimension mismatch");
    // bucket g by row
    std::vector<std::vector<std::pair<int, const UPoly*>>> grow(g.rows());
    for (const auto& [ij, p] : g.entries()) grow[ij.first].push_back({ij.second, &p});
    std::map<std::pair<int, int>, UPoly> acc;
    for (const auto& [ij, p] : f.entries())
        for (const auto& [j, q] : grow[ij.second]) acc[{ij.first, j}] += p * *q;
    UMatrix out(f.rows(), g.cols());
    for (const auto& [ij, p] : acc) out.set(ij.first, ij.second, p);
    return out;
}

UMatrix dense_product(const UMatrix& f, const UMatrix& g) {
    if (f.cols() != g.rows()) throw std::runtime_error("dense_product: dimension mismatch");
    auto a = f.dense(), b = g.dense();
    UMatrix out(f.rows(), g.cols());
    for (int i = 0; i < f.rows(); ++i)
        for (int j = 0; j < g.cols(); ++j) {
            UPoly s;
            for (int k = 0; k < f.cols(); ++k) s += a[i][k] * b[k][j];
            out.set(i, j, s);
        }
    return out;
}

SNFResult snf_over_U(const UMatrix& m) {
    int nr = m.rows(), nc = m.cols();
    auto a = m.dense();
    auto l = UMatrix::identity(nr).dense();
    auto r = UMatrix::identity(nc).dense();

    auto add_row = [&](int dst, int src, const UPoly& q) {  // row dst += q * row src
        for (int j = 0; j < nc; ++j)
            if (!a[src][j].is_zero()) a[dst][j] += q * a[src][j];
        for (int j = 0; j < nr; ++j)
            if (!l[src][j].is_zero()) l[dst][j] += q * l[src][j];
    };
    auto add_col = [&](int dst, int src, const UPoly& q) {  // col dst += q * col src
        for (int i = 0; i < nr; ++i)
            if (!a[i][src].is_zero()) a[i][dst] += q * a[i][src];
        for (int i = 0; i < nc; ++i)
            if (!r[i][src].is_zero()) r[i][dst] += q * r[i][src];
    };
    auto swap_rows = [&](int i, int j) {
        std::swap(a[i], a[j]);
        std::swap(l[i], l[j]);
    };
    auto swap_cols = [&](int i, int j) {
        for (auto& row : a) std::swap(row[i], row[j]);
        for (auto& row : r) std::swap(row[i], row[j]);
    };

    int n = std::min(nr, nc);
    for (int t = 0; t < n; ++t) {
        for (;;) {
            // minimal degree pivot, ties by (row, col)
            int pi = -1, pj = -1, best = -1;
            for (int i = t; i < nr; ++i)
                for (int j = t; j < nc; ++j) {
                    int d = a[i][j].degree();
                    if (d >= 0 && (best < 0 || d < best)) {
                        best = d;
                        pi = i;
                        pj = j;
                    }
                }
            if (pi < 0) break;
            if (pi != t) swap_rows(pi, t);
            if (pj != t) swap_cols(pj, t);
            bool clean = true;
            for (int i = t + 1; i < nr; ++i) {
                if (a[i][t].is_zero()) continue;
                auto [q, rem] = a[i][t].divmod(a[t][t]);
                add_row(i, t, q);
                if (!rem.is_zero()) clean = false;
            }
            for (int j = t + 1; j < nc; ++j) {
                if (a[t][j].is_zero()) continue;
                auto [q, rem] = a[t][j].divmod(a[t][t]);
                add_col(j, t, q);
                if (!rem.is_zero()) clean = false;
            }
            if (!clean) continue;
            // divisibility of the remaining block
            int bad = -1;
            for (int i = t + 1; i < nr && bad < 0; ++i)
                for (int j = t + 1; j < nc; ++j)
                    if (!a[t][t].divides(a[i][j])) {
                        bad = i;
                        break;
                    }
            if (bad < 0) break;
            add_row(t, bad, UPoly::one());
        }
    }

    SNFResult res;
    res.diag.resize(n);
    for (int t = 0; t < n; ++t) res.diag[t] = a[t][t];
    res.left = UMatrix::from_dense(l);
    res.right = UMatrix::from_dense(r);
    return res;
}

}  // namespace ikc
