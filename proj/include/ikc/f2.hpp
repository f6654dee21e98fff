#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace ikc {

using bitvec = std::vector<std::uint8_t>;

// sparse 0/1 matrix, one sorted column list per row
struct F2Matrix {
    int rows = 0, cols = 0;
    std::vector<std::vector<int>> r;

    F2Matrix() = default;
    F2Matrix(int nr, int nc) : rows(nr), cols(nc), r(nr) {}

    static F2Matrix identity(int n);
    // dense rows of 0/1 ints
    static F2Matrix from_dense(const std::vector<std::vector<int>>& a);

    bool get(int i, int j) const;
    void set(int i, int j, bool v = true);
    void toggle(int i, int j);
    std::size_t nnz() const;
    bool is_zero() const;
    F2Matrix transpose() const;

    bool operator==(const F2Matrix& o) const = default;
};

F2Matrix operator+(const F2Matrix& a, const F2Matrix& b);
F2Matrix& operator+=(F2Matrix& a, const F2Matrix& b);
// ordinary product a*b
F2Matrix operator*(const F2Matrix& a, const F2Matrix& b);
bitvec mul_vec(const F2Matrix& a, const bitvec& x);

// xor of two sorted index lists
std::vector<int> sym_diff(const std::vector<int>& a, const std::vector<int>& b);
void toggle_sorted(std::vector<int>& v, int x);

// incremental gaussian elimination over F2; rows are added one at a time
class F2System {
public:
    explicit F2System(int nvars = 0);

    int nvars() const { return n_; }
    // cols may be unsorted and contain repeats (repeats cancel)
    // returns false if the row was dependent
    bool add_row(const std::vector<int>& cols, bool rhs);
    bool consistent() const { return consistent_; }
    int rank() const { return static_cast<int>(piv_.size()); }

    // free variables are set to zero
    std::optional<bitvec> solve() const;
    std::vector<bitvec> nullspace() const;
    // true if the row (without rhs) lies in the span of rows added so far
    bool in_span(const std::vector<int>& cols) const;

private:
    struct prow {
        std::vector<int> c;  // sorted, c[0] is the lead
        bool rhs;
    };
    int reduce(std::vector<int>& cols, bool& rhs) const;
    bitvec back_substitute(const std::vector<int>& freeset_val, bool use_rhs) const;

    int n_;
    bool consistent_ = true;
    std::vector<int> lead_of_;  // column -> pivot index or -1
    std::vector<prow> piv_;
    mutable std::vector<std::uint64_t> scratch_;
};

std::optional<bitvec> solve_f2(const F2Matrix& a, const bitvec& b);
std::vector<bitvec> nullspace_f2(const F2Matrix& a);
int rank_f2(const F2Matrix& a);
std::optional<F2Matrix> inverse_f2(const F2Matrix& a);

}  // namespace ikc
