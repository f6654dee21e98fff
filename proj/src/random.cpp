#include "ikc/random.hpp"

#include <algorithm>
#include <fmt/core.h>
#include <stdexcept>

namespace ikc {

GradedMap random_map(std::mt19937& rng, const UComplex& src, const UComplex& tgt, int degree, double density) {
    std::bernoulli_distribution coin(density);
    GradedMap f = zero_map(src.size(), tgt.size(), degree);
    for (int x = 0; x < src.size(); ++x)
        for (int y = 0; y < tgt.size(); ++y)
            if (arrow_legal(src.gr[x], tgt.gr[y], degree) && coin(rng)) f.m.r[x].push_back(y);
    return f;
}

std::pair<GradedMap, GradedMap> random_automorphism(std::mt19937& rng, const UComplex& c) {
    std::bernoulli_distribution coin(0.35);
    int n = c.size();
    GradedMap p = identity_map(n);
    // strictly upper triangular part keeps it unipotent
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y)
            if (arrow_legal(c.gr[x], c.gr[y], 0) && coin(rng)) p.m.r[x].push_back(y);
    auto inv = inverse_f2(p.m);
    if (!inv) throw std::runtime_error("random_automorphism: not invertible");
    return {p, GradedMap{*inv, 0, false}};
}

UComplex random_complex(std::mt19937& rng, int max_gens, int max_power, int grading_span) {
    std::uniform_int_distribution<int> grd(-grading_span / 2, grading_span / 2);
    std::uniform_int_distribution<int> pw(0, max_power);
    std::uniform_int_distribution<int> kind(0, 2);
    UComplex c;
    int count = 0;
    while (count < max_gens) {
        int g = grd(rng);
        if (kind(rng) == 0 || count + 2 > max_gens) {
            c.add_generator(fmt::format("g{}", count++), g);
        } else {
            int k = pw(rng);
            // dx = U^k y, gr(y) = gr(x) - 1 + 2k
            c.add_generator(fmt::format("g{}", count++), g);
            c.add_generator(fmt::format("g{}", count++), g - 1 + 2 * k);
            c.add_arrow(count - 2, count - 1);
        }
    }
    // shuffle generator order so the unipotent part mixes summands
    std::vector<int> perm(c.size());
    for (int i = 0; i < c.size(); ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    UComplex s;
    std::vector<int> pos(c.size());
    for (int i = 0; i < c.size(); ++i) pos[perm[i]] = i;
    for (int i = 0; i < c.size(); ++i) s.add_generator(c.names[perm[i]], c.gr[perm[i]]);
    for (int x = 0; x < c.size(); ++x)
        for (int y : c.d.r[x]) s.add_arrow(pos[x], pos[y]);
    auto [p, pinv] = random_automorphism(rng, s);
    // new d = p^-1 d p in operator order: first p^-1, then d, then p
    s.d = (pinv.m * s.d) * p.m;
    return s;
}

}  // namespace ikc
