#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ikc/f2.hpp"

namespace ikc {

// free graded complex over F2[U]; arrows are bits, U-powers are forced by gradings
struct UComplex {
    std::vector<std::string> names;
    std::vector<int> gr;
    F2Matrix d;  // row x lists the targets of dx

    int size() const { return static_cast<int>(gr.size()); }
    int index(const std::string& name) const;  // throws if missing
    void add_generator(const std::string& name, int grading);
    void add_arrow(int from, int to);
};

// homogeneous map; row x of m lists the images of x
struct GradedMap {
    F2Matrix m;
    int degree = 0;
    bool localized = false;  // negative U-powers allowed
};

// U-power of an arrow x -> y of a map of the given degree; throws on parity mismatch
int arrow_power(int gr_from, int gr_to, int degree);
bool arrow_legal(int gr_from, int gr_to, int degree);

GradedMap identity_map(int n);
GradedMap zero_map(int ns, int nt, int degree);
GradedMap diff_map(const UComplex& c);
// second after first
GradedMap compose(const GradedMap& first, const GradedMap& second);
GradedMap operator+(const GradedMap& a, const GradedMap& b);
// d_tgt f + f d_src
GradedMap commutator(const UComplex& src, const UComplex& tgt, const GradedMap& f);

std::vector<std::string> check_map(const UComplex& src, const UComplex& tgt, const GradedMap& f);
bool is_chain_map(const UComplex& src, const UComplex& tgt, const GradedMap& f);
std::vector<std::string> validate(const UComplex& c);

struct HomologyReport {
    std::vector<int> free;                       // tower gradings, descending
    std::vector<std::pair<int, int>> torsion;    // (grading, order), descending
    int max_torsion() const;
    bool operator==(const HomologyReport& o) const = default;
};

HomologyReport homology(const UComplex& c);
// grading of the unique tower; throws unless there is exactly one
int d_invariant(const UComplex& c);

UComplex dual(const UComplex& c);
GradedMap dual_map(const GradedMap& f);
UComplex vertical_truncate(const UComplex& c, int delta);
UComplex direct_sum(const UComplex& a, const UComplex& b);
UComplex subcomplex(const UComplex& c, const std::vector<int>& keep);

struct Reduction {
    UComplex red;
    std::vector<int> kept;  // original index of each reduced generator
    GradedMap pi;           // original -> reduced
    GradedMap sigma;        // reduced -> original
    GradedMap tau;          // original -> original, degree +1: id + sigma pi = [d, tau]
    bool has_maps = false, has_tau = false;
};

// cancels every U^0 arrow
Reduction reduce(const UComplex& c, bool track_maps = true, bool track_tau = true);
// cancels only the U^0 arrows x -> y accepted by the predicate
Reduction reduce_filtered(const UComplex& c, const std::function<bool(int, int)>& cancellable, bool track_maps = true,
                          bool track_tau = true);

// unknown homogeneous maps and linear equations on them
class MapSystem {
public:
    struct unknown {
        int ns = 0, nt = 0, degree = 0;
        std::vector<std::vector<std::pair<int, int>>> vars;  // per source: (target, variable)
    };
    // post after X after pre; null means identity
    struct term {
        int unknown;
        const F2Matrix* pre = nullptr;
        const F2Matrix* post = nullptr;
    };

    int add_unknown(int ns, int nt, int degree, const std::function<bool(int, int)>& legal);
    int nvars() const { return nvars_; }
    const unknown& get(int u) const { return unknowns_[u]; }
    // call once every unknown is declared
    void finalize();
    // sum of terms = rhs, as maps from ns to nt generators; keep(x, z) selects which entries become rows
    void add_equations(int ns, int nt, const std::vector<term>& terms, const F2Matrix* rhs,
                       const std::function<bool(int, int)>& keep = nullptr);
    void add_row(const std::vector<int>& cols, bool rhs);
    bool consistent() const { return sys_.consistent(); }
    std::optional<bitvec> solve() const { return sys_.solve(); }
    std::vector<bitvec> nullspace() const { return sys_.nullspace(); }
    F2Matrix extract(int u, const bitvec& sol) const;
    std::size_t rows_added() const { return rows_; }

private:
    std::vector<unknown> unknowns_;
    int nvars_ = 0;
    F2System sys_;
    bool final_ = false;
    std::size_t rows_ = 0;
};

using PairFilter = std::function<bool(int, int)>;

// h of degree f.degree + 1 with d h + h d = f
std::optional<GradedMap> find_homotopy(const UComplex& src, const UComplex& tgt, const GradedMap& f,
                                       const PairFilter& allowed = nullptr);

struct HomotopyInverse {
    GradedMap g;  // tgt -> src
    GradedMap H;  // src -> src, [d, H] = id + g f
    GradedMap J;  // tgt -> tgt, [d, J] = id + f g
};
std::optional<HomotopyInverse> homotopy_inverse(const UComplex& src, const UComplex& tgt, const GradedMap& f);

// generators contributing to the grading-g part of the F2-vector space C_g, optionally cut at U^delta
std::vector<int> graded_piece(const UComplex& c, int g, int delta = -1);
// a cycle in the top tower grading whose class survives in U^-1 H; bits over generators
bitvec tower_cycle(const UComplex& c);

}  // namespace ikc
