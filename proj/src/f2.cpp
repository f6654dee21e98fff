#include "ikc/f2.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace ikc {

F2Matrix F2Matrix::identity(int n) {
    F2Matrix m(n, n);
    for (int i = 0; i < n; ++i) m.r[i] = {i};
    return m;
}

F2Matrix F2Matrix::from_dense(const std::vector<std::vector<int>>& a) {
    int nr = static_cast<int>(a.size());
    int nc = nr ? static_cast<int>(a[0].size()) : 0;
    F2Matrix m(nr, nc);
    for (int i = 0; i < nr; ++i) {
        if (static_cast<int>(a[i].size()) != nc) throw std::runtime_error("from_dense: ragged rows");
        for (int j = 0; j < nc; ++j)
            if (a[i][j] & 1) m.r[i].push_back(j);
    }
    return m;
}

bool F2Matrix::get(int i, int j) const {
    const auto& v = r[i];
    return std::binary_search(v.begin(), v.end(), j);
}

void F2Matrix::set(int i, int j, bool val) {
    if (i < 0 || i >= rows || j < 0 || j >= cols) throw std::runtime_error("F2Matrix::set: out of range");
    auto& v = r[i];
    auto it = std::lower_bound(v.begin(), v.end(), j);
    bool has = it != v.end() && *it == j;
    if (val && !has) v.insert(it, j);
    if (!val && has) v.erase(it);
}

void F2Matrix::toggle(int i, int j) {
    if (i < 0 || i >= rows || j < 0 || j >= cols) throw std::runtime_error("F2Matrix::toggle: out of range");
    toggle_sorted(r[i], j);
}

std::size_t F2Matrix::nnz() const {
    std::size_t s = 0;
    for (const auto& v : r) s += v.size();
    return s;
}

bool F2Matrix::is_zero() const {
    for (const auto& v : r)
        if (!v.empty()) return false;
    return true;
}

F2Matrix F2Matrix::transpose() const {
    F2Matrix t(cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j : r[i]) t.r[j].push_back(i);
    return t;
}

std::vector<int> sym_diff(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    out.reserve(a.size() + b.size());
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

void toggle_sorted(std::vector<int>& v, int x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it != v.end() && *it == x)
        v.erase(it);
    else
        v.insert(it, x);
}

F2Matrix operator+(const F2Matrix& a, const F2Matrix& b) {
    F2Matrix c = a;
    c += b;
    return c;
}

F2Matrix& operator+=(F2Matrix& a, const F2Matrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) throw std::runtime_error("F2Matrix +: dimension mismatch");
    for (int i = 0; i < a.rows; ++i)
        if (!b.r[i].empty()) a.r[i] = sym_diff(a.r[i], b.r[i]);
    return a;
}

F2Matrix operator*(const F2Matrix& a, const F2Matrix& b) {
    if (a.cols != b.rows) throw std::runtime_error("F2Matrix *: dimension mismatch");
    F2Matrix c(a.rows, b.cols);
    std::vector<std::uint8_t> val(b.cols, 0), seen(b.cols, 0);
    std::vector<int> touched;
    for (int i = 0; i < a.rows; ++i) {
        touched.clear();
        for (int k : a.r[i])
            for (int j : b.r[k]) {
                if (!seen[j]) {
                    seen[j] = 1;
                    touched.push_back(j);
                }
                val[j] ^= 1;
            }
        std::sort(touched.begin(), touched.end());
        for (int j : touched) {
            if (val[j]) c.r[i].push_back(j);
            val[j] = seen[j] = 0;
        }
    }
    return c;
}

bitvec mul_vec(const F2Matrix& a, const bitvec& x) {
    if (static_cast<int>(x.size()) != a.cols) throw std::runtime_error("mul_vec: dimension mismatch");
    bitvec y(a.rows, 0);
    for (int i = 0; i < a.rows; ++i) {
        std::uint8_t s = 0;
        for (int j : a.r[i]) s ^= x[j];
        y[i] = s;
    }
    return y;
}

F2System::F2System(int nvars) : n_(nvars), lead_of_(nvars, -1), scratch_((nvars + 63) / 64, 0) {}

int F2System::reduce(std::vector<int>& cols, bool& rhs) const {
    if (cols.empty()) return -1;
    int lo = n_, hi = -1;
    for (int c : cols) {
        if (c < 0 || c >= n_) throw std::runtime_error("F2System: column out of range");
        scratch_[c >> 6] ^= (std::uint64_t(1) << (c & 63));
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
    int wlo = lo >> 6, whi = hi >> 6;
    int lead = -1;
    for (int w = wlo; w <= whi && lead < 0; ++w) {
        while (scratch_[w]) {
            int c = (w << 6) + std::countr_zero(scratch_[w]);
            int p = lead_of_[c];
            if (p < 0) {
                lead = c;
                break;
            }
            const prow& pr = piv_[p];
            for (int k : pr.c) scratch_[k >> 6] ^= (std::uint64_t(1) << (k & 63));
            whi = std::max(whi, pr.c.back() >> 6);
            rhs ^= pr.rhs;
        }
    }
    cols.clear();
    if (lead >= 0) {
        for (int w = lead >> 6; w <= whi; ++w) {
            std::uint64_t x = scratch_[w];
            while (x) {
                int b = std::countr_zero(x);
                cols.push_back((w << 6) + b);
                x &= x - 1;
            }
            scratch_[w] = 0;
        }
    }
    return lead;
}

bool F2System::add_row(const std::vector<int>& cols_in, bool rhs) {
    std::vector<int> cols = cols_in;
    int lead = reduce(cols, rhs);
    if (lead < 0) {
        if (rhs) consistent_ = false;
        return false;
    }
    lead_of_[lead] = static_cast<int>(piv_.size());
    piv_.push_back({std::move(cols), rhs});
    return true;
}

bool F2System::in_span(const std::vector<int>& cols_in) const {
    std::vector<int> cols = cols_in;
    bool rhs = false;
    return reduce(cols, rhs) < 0;
}

bitvec F2System::back_substitute(const std::vector<int>& ones, bool use_rhs) const {
    bitvec x(n_, 0);
    for (int c : ones) x[c] = 1;
    for (int c = n_ - 1; c >= 0; --c) {
        int p = lead_of_[c];
        if (p < 0) continue;
        const prow& pr = piv_[p];
        std::uint8_t s = use_rhs && pr.rhs ? 1 : 0;
        for (std::size_t k = 1; k < pr.c.size(); ++k) s ^= x[pr.c[k]];
        x[c] = s;
    }
    return x;
}

std::optional<bitvec> F2System::solve() const {
    if (!consistent_) return std::nullopt;
    return back_substitute({}, true);
}

std::vector<bitvec> F2System::nullspace() const {
    std::vector<bitvec> out;
    for (int c = 0; c < n_; ++c)
        if (lead_of_[c] < 0) out.push_back(back_substitute({c}, false));
    return out;
}

std::optional<bitvec> solve_f2(const F2Matrix& a, const bitvec& b) {
    if (static_cast<int>(b.size()) != a.rows) throw std::runtime_error("solve_f2: dimension mismatch");
    F2System sys(a.cols);
    for (int i = 0; i < a.rows; ++i) sys.add_row(a.r[i], b[i] != 0);
    return sys.solve();
}

std::vector<bitvec> nullspace_f2(const F2Matrix& a) {
    F2System sys(a.cols);
    for (int i = 0; i < a.rows; ++i) sys.add_row(a.r[i], false);
    return sys.nullspace();
}

int rank_f2(const F2Matrix& a) {
    F2System sys(a.cols);
    for (int i = 0; i < a.rows; ++i) sys.add_row(a.r[i], false);
    return sys.rank();
}

std::optional<F2Matrix> inverse_f2(const F2Matrix& a) {
    if (a.rows != a.cols) throw std::runtime_error("inverse_f2: not square");
    int n = a.rows;
    int words = (2 * n + 63) / 64;
    // dense gauss-jordan on [a | I]
    std::vector<std::vector<std::uint64_t>> m(n, std::vector<std::uint64_t>(words, 0));
    for (int i = 0; i < n; ++i) {
        for (int j : a.r[i]) m[i][j >> 6] |= std::uint64_t(1) << (j & 63);
        int k = n + i;
        m[i][k >> 6] |= std::uint64_t(1) << (k & 63);
    }
    auto bit = [&](int i, int j) { return (m[i][j >> 6] >> (j & 63)) & 1; };
    for (int c = 0; c < n; ++c) {
        int p = -1;
        for (int i = c; i < n; ++i)
            if (bit(i, c)) {
                p = i;
                break;
            }
        if (p < 0) return std::nullopt;
        std::swap(m[p], m[c]);
        for (int i = 0; i < n; ++i)
            if (i != c && bit(i, c))
                for (int w = 0; w < words; ++w) m[i][w] ^= m[c][w];
    }
    F2Matrix inv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (bit(i, n + j)) inv.r[i].push_back(j);
    return inv;
}

}  // namespace ikc
