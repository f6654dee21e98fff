#include "ikc/fixtures.hpp"

#include <array>
#include <fmt/core.h>
#include <numeric>
#include <stdexcept>

namespace ikc {

namespace {

using ipoly = std::vector<long>;  // coefficient of t^k at index k

ipoly mul(const ipoly& a, const ipoly& b) {
    ipoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

// exact division by a monic polynomial
ipoly divide(ipoly a, const ipoly& b) {
    int db = static_cast<int>(b.size()) - 1;
    ipoly q(a.size() - db, 0);
    for (int k = static_cast<int>(a.size()) - 1; k >= db; --k) {
        long c = a[k];
        q[k - db] = c;
        for (int j = 0; j <= db; ++j) a[k - db + j] -= c * b[j];
    }
    for (long v : a)
        if (v != 0) throw std::runtime_error("torus_alexander: inexact division");
    return q;
}

ipoly t_minus_one(int k) {
    ipoly r(k + 1, 0);
    r[0] = -1;
    r[k] = 1;
    return r;
}

void box(KnotComplex& c, const std::array<std::string, 4>& n, int p, int q, int len) {
    int f = add_at(c, n[0], p, q, 0);
    int g = add_at(c, n[1], p - len, q, -1);
    int h = add_at(c, n[2], p, q - len, -1);
    int i = add_at(c, n[3], p - len, q - len, -2);
    c.add_arrow(f, g);
    c.add_arrow(f, h);
    c.add_arrow(g, i);
    c.add_arrow(h, i);
}

void iota_to(KnotComplex& c, const std::string& from, std::initializer_list<std::string> to) {
    int x = c.index(from);
    for (const auto& t : to) c.add_iota(x, c.index(t));
}

// staircase iota, with a correction on the middle generator
void staircase_iota(KnotComplex& c, const std::string& prefix, int n, int skip) {
    for (int i = 0; i < n; ++i)
        if (i != skip) c.add_iota(c.index(fmt::format("{}{}", prefix, i)), c.index(fmt::format("{}{}", prefix, n - 1 - i)));
}

}  // namespace

Exponents torus_alexander(int p, int q) {
    if (p <= 0 || q <= 0 || std::gcd(p, q) != 1) throw std::runtime_error("torus_alexander: need coprime p, q > 0");
    ipoly num = mul(t_minus_one(p * q), t_minus_one(1));
    ipoly d = divide(divide(num, t_minus_one(p)), t_minus_one(q));
    int g = (p - 1) * (q - 1) / 2;
    Exponents e;
    for (int k = static_cast<int>(d.size()) - 1; k >= 0; --k)
        if (d[k] != 0) e.push_back(k - g);
    return e;
}

int add_at(KnotComplex& c, const std::string& name, int p, int q, int m) {
    c.add_generator(name, m - 2 * p, m - 2 * q);
    return c.size() - 1;
}

KnotComplex staircase(const Exponents& e, const std::string& prefix) {
    if (e.empty() || e.size() % 2 == 0) throw std::runtime_error("staircase: need an odd number of exponents");
    for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] != -e[e.size() - 1 - i])
            throw std::runtime_error(fmt::format("staircase: exponents are not symmetric ({} against {})", e[i], e[e.size() - 1 - i]));
    KnotComplex c;
    int n = static_cast<int>(e.size());
    int p = 0, q = -e[0];
    for (int i = 0; i < n; ++i) {
        add_at(c, fmt::format("{}{}", prefix, i), p, q, i % 2 == 0 ? 0 : -1);
        if (i + 1 < n) {
            int step = e[i] - e[i + 1];
            if (step <= 0) throw std::runtime_error("staircase: exponents must decrease");
            if (i % 2 == 0)
                p -= step;
            else
                q += step;
        }
    }
    for (int i = 0; i < n; i += 2) {
        if (i > 0) c.add_arrow(i, i - 1);
        if (i + 1 < n) c.add_arrow(i, i + 1);
    }
    for (int i = 0; i < n; ++i) c.add_iota(i, n - 1 - i);
    return c;
}

KnotComplex lspace_knot(const Exponents& e, const std::string& prefix) { return dual(staircase(e, prefix)); }

KnotComplex torus_knot(int p, int q) { return lspace_knot(torus_alexander(p, q)); }

KnotComplex trefoil() {
    KnotComplex c;
    c.add_generator("a", 0, -2);
    c.add_generator("b", -1, -1);
    c.add_generator("c", -2, 0);
    c.add_arrow(1, 0);
    c.add_arrow(1, 2);
    c.add_iota(0, 2);
    c.add_iota(1, 1);
    c.add_iota(2, 0);
    return c;
}

KnotComplex figure_eight() {
    KnotComplex c;
    c.add_generator("a", 0, 0);
    c.add_generator("b", 1, -1);
    c.add_generator("c", -1, 1);
    c.add_generator("d", 0, 0);
    c.add_generator("x", 0, 0);
    c.add_arrow(0, 1);
    c.add_arrow(0, 2);
    c.add_arrow(1, 3);
    c.add_arrow(2, 3);
    c.add_iota(0, 0);
    c.add_iota(0, 4);
    c.add_iota(1, 2);
    c.add_iota(2, 1);
    c.add_iota(3, 3);
    c.add_iota(4, 4);
    c.add_iota(4, 3);
    return c;
}

KnotComplex fixture_c1() {
    KnotComplex c;
    add_at(c, "a", 0, 0, 0);
    box(c, {"b", "c", "d", "e"}, 0, 0, 3);
    iota_to(c, "a", {"a", "e"});
    iota_to(c, "b", {"b", "a"});
    iota_to(c, "c", {"d"});
    iota_to(c, "d", {"c"});
    iota_to(c, "e", {"e"});
    return c;
}

KnotComplex fixture_c2() { return staircase({4, 3, 0, -3, -4}, "x"); }

KnotComplex fixture_c3() {
    KnotComplex c = staircase({4, 3, 0, -3, -4}, "y");
    c.iota = F2Matrix(c.size(), c.size());
    staircase_iota(c, "y", 5, 2);
    box(c, {"f", "g", "h", "i"}, -1, -1, 3);
    iota_to(c, "y2", {"y2", "i"});
    iota_to(c, "f", {"f", "y2"});
    iota_to(c, "g", {"h", "y1"});
    iota_to(c, "h", {"g", "y3"});
    iota_to(c, "i", {"i"});
    return c;
}

KnotComplex fixture_c4() { return staircase(torus_alexander(6, 13), "z"); }

KnotComplex fixture_c5() {
    KnotComplex c = staircase(torus_alexander(6, 13), "w");
    c.iota = F2Matrix(c.size(), c.size());
    staircase_iota(c, "w", 21, 10);
    box(c, {"j", "k", "l", "m"}, -9, -9, 3);
    iota_to(c, "w10", {"w10", "m"});
    iota_to(c, "j", {"j", "w10"});
    iota_to(c, "k", {"l", "w9"});
    iota_to(c, "l", {"k", "w11"});
    iota_to(c, "m", {"m"});
    return c;
}

KnotComplex fixture_c6() { return staircase(torus_alexander(6, 7), "v"); }

KnotComplex fixture_c7() {
    KnotComplex c;
    add_at(c, "n", 2, 2, 0);
    box(c, {"p", "q", "r", "s"}, 2, 2, 2);
    iota_to(c, "n", {"n"});
    iota_to(c, "p", {"p", "n"});
    iota_to(c, "q", {"r"});
    iota_to(c, "r", {"q"});
    iota_to(c, "s", {"s"});
    return c;
}

}  // namespace ikc
