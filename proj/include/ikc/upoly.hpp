#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace ikc {

// polynomial in U over F2, bit k = coefficient of U^k
class UPoly {
public:
    UPoly() = default;
    static UPoly monomial(int k);
    static UPoly one() { return monomial(0); }

    int degree() const;  // -1 for zero
    int low_degree() const;  // -1 for zero
    bool is_zero() const { return w_.empty(); }
    bool coeff(int k) const;
    void toggle(int k);

    UPoly operator+(const UPoly& o) const;
    UPoly& operator+=(const UPoly& o);
    UPoly operator*(const UPoly& o) const;
    // quotient and remainder, throws on division by zero
    std::pair<UPoly, UPoly> divmod(const UPoly& d) const;
    bool divides(const UPoly& b) const;  // *this | b

    bool operator==(const UPoly& o) const = default;
    std::string str() const;

private:
    void trim();
    std::vector<std::uint64_t> w_;
};

// sparse matrix over F2[U]; zero entries are never stored
class UMatrix {
public:
    UMatrix() = default;
    UMatrix(int r, int c) : rows_(r), cols_(c) {}
    static UMatrix identity(int n);
    static UMatrix from_dense(const std::vector<std::vector<UPoly>>& a);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    UPoly get(int i, int j) const;
    void set(int i, int j, const UPoly& p);
    const std::map<std::pair<int, int>, UPoly>& entries() const { return e_; }
    std::vector<std::vector<UPoly>> dense() const;

    bool operator==(const UMatrix& o) const = default;

private:
    int rows_ = 0, cols_ = 0;
    std::map<std::pair<int, int>, UPoly> e_;
};

UMatrix compose_sparse(const UMatrix& f, const UMatrix& g);  // f * g
UMatrix dense_product(const UMatrix& f, const UMatrix& g);

struct SNFResult {
    std::vector<UPoly> diag;  // length min(rows, cols)
    UMatrix left, right;      // left * m * right = diag matrix
};

SNFResult snf_over_U(const UMatrix& m);

}  // namespace ikc
