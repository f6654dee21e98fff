#include "ikc/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fmt/format.h>
#include <fmt/ranges.h>
#include <ostream>
#include <random>

#include "ikc/fixtures.hpp"
#include "ikc/surgery.hpp"

namespace ikc {

namespace {

constexpr const char* tool_version = "ikc 1";

std::string rat_str(const rational& r) {
    if (r.denominator() == 1) return fmt::format("{}", r.numerator());
    return fmt::format("{}/{}", r.numerator(), r.denominator());
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<int> parse_ints(const std::string& s, const std::string& what) {
    std::vector<int> out;
    for (const auto& part : split(s, ',')) {
        try {
            std::size_t used = 0;
            int v = std::stoi(part, &used);
            if (used != part.size()) throw std::invalid_argument(part);
            out.push_back(v);
        } catch (const std::logic_error&) {
            throw format_error(fmt::format("{}: cannot read integer list \"{}\"", what, s));
        }
    }
    return out;
}

// dense symmetric coefficients a_g, ..., a_{-g} to the exponents of the nonzero terms
Exponents exponents_of_coefficients(const std::string& s) {
    auto a = parse_ints(s, "--delta");
    if (a.size() % 2 == 0 || !std::equal(a.begin(), a.end(), a.rbegin()))
        throw std::runtime_error("--delta: coefficients must form a symmetric list of odd length");
    int g = static_cast<int>(a.size() / 2);
    Exponents e;
    int sign = 1;
    for (int i = 0; i < static_cast<int>(a.size()); ++i) {
        if (a[i] == 0) continue;
        if (a[i] != sign) throw std::runtime_error("--delta: nonzero coefficients must alternate +1, -1, ... (not an L-space knot)");
        sign = -sign;
        e.push_back(g - i);
    }
    return e;
}

StdComplexParams s_params(int n) { return repeat(parse_std_params("+,-1,+,-3"), n); }

bool builtin_knot(const std::string& name, KnotComplex& out) {
    static const std::map<std::string, KnotComplex (*)()> table = {
        {"unknot", unknot},     {"trefoil", trefoil},   {"figure-eight", figure_eight}, {"C1", fixture_c1},
        {"C2", fixture_c2},     {"C3", fixture_c3},     {"C4", fixture_c4},             {"C5", fixture_c5},
        {"C6", fixture_c6},     {"C7", fixture_c7}};
    auto it = table.find(name);
    if (it != table.end()) {
        out = it->second();
        return true;
    }
    if (name.rfind("torus:", 0) == 0) {
        auto v = parse_ints(name.substr(6), "torus");
        if (v.size() != 2 || v[0] == 0 || v[1] <= 0) throw format_error("torus: expected torus:P,Q with Q > 0");
        out = torus_knot(std::abs(v[0]), v[1]);
        if (v[0] < 0) out = dual(out);
        return true;
    }
    return false;
}

bool builtin_uc(const std::string& name, UFile& out) {
    if (name == "trivial") {
        out = ufile_of(trivial_iota());
        return true;
    }
    if (name == "example:A0") {
        out = ufile_of(knot_example().a0);
        return true;
    }
    if (name == "example:C") {
        out = ufile_of(knot_example().c);
        return true;
    }
    if (name.rfind("std:", 0) == 0) {
        out = ufile_of(standard_complex(parse_std_params(name.substr(4))));
        return true;
    }
    if (name.rfind("A0:", 0) == 0) {
        Source s = load_source(name.substr(3));
        if (s.kind != "ikc/1") throw format_error("A0: needs a knot complex");
        out = ufile_of(a0_iota(s.knot));
        return true;
    }
    bool neg = name.rfind("-S", 0) == 0;
    std::size_t off = neg ? 2 : 1;
    if (name.size() > off && (name[0] == 'S' || neg) && name.find_first_not_of("0123456789", off) == std::string::npos) {
        int n = std::stoi(name.substr(off));
        if (n < 1) throw format_error("S<n> needs n >= 1");
        StdComplexParams p = s_params(n);
        out = ufile_of(standard_complex(neg ? negate(p) : p));
        return true;
    }
    return false;
}

Source finish_source(Source s) {
    if (s.kind == "ikc/1")
        s.content = knot_to_json(s.knot);
    else if (s.kind == "uc/1")
        s.content = ufile_to_json(s.uc);
    else
        s.content = hyperbox_to_json(s.box);
    s.hash = sha256_hex(s.content.dump());
    return s;
}

Source tensor_sources(const Source& a, const Source& b) {
    Source s;
    s.spec = a.spec + "*" + b.spec;
    if (a.kind == "ikc/1" && b.kind == "ikc/1") {
        s.kind = "ikc/1";
        s.knot = tensor_with_iota(a.knot, b.knot);
    } else if (a.kind == "uc/1" && b.kind == "uc/1") {
        s.kind = "uc/1";
        if (!a.uc.almost && !b.uc.almost)
            s.uc = ufile_of(tensor(iota_complex_of(a.uc), iota_complex_of(b.uc)));
        else
            s.uc = ufile_of(tensor(almost_complex_of(a.uc), almost_complex_of(b.uc)));
    } else {
        throw format_error("tensor: both factors must be knot complexes or both iota-complexes");
    }
    return finish_source(s);
}

// flat "key: value" rendering of a report
void render_text(const json& j, const std::string& prefix, std::ostream& out) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) render_text(v, prefix.empty() ? k : prefix + "." + k, out);
        return;
    }
    if (j.is_array()) {
        bool scalars = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
        if (scalars && j.size() <= 12) {
            out << prefix << ": " << j.dump() << "\n";
        } else if (!scalars && std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_object(); }) && j.size() <= 12) {
            for (std::size_t i = 0; i < j.size(); ++i) render_text(j[i], fmt::format("{}[{}]", prefix, i), out);
        } else {
            out << prefix << ": [" << j.size() << " entries]\n";
        }
        return;
    }
    out << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
}

struct Options {
    bool as_json = false;
    std::string cache_dir;
    bool no_cache = false;
    std::optional<int> b;
    std::optional<int> delta;
    std::string output;
};

struct Outcome {
    json report;
    int code = exit_ok;
};

std::string cache_root(const Options& o) {
    if (!o.cache_dir.empty()) return o.cache_dir;
    if (const char* env = std::getenv("IKC_CACHE"); env && *env) return env;
    return ".ikc-cache";
}

// run fn unless an identical request is cached; only clean outcomes are stored
Outcome cached(const Options& o, const json& request, const std::function<Outcome()>& fn, std::ostream& err) {
    if (o.no_cache) return fn();
    std::string key = sha256_hex(json{{"request", request}, {"version", tool_version}}.dump());
    std::filesystem::path dir(cache_root(o));
    std::filesystem::path file = dir / (key + ".json");
    std::error_code ec;
    if (std::filesystem::exists(file, ec)) {
        try {
            json hit = parse_json(read_file(file.string()));
            err << "ikc: cache hit " << key.substr(0, 12) << "\n";
            return {hit.at("report"), hit.at("exit").get<int>()};
        } catch (const std::exception&) {
            err << "ikc: ignoring unreadable cache entry " << file.string() << "\n";
        }
    }
    Outcome r = fn();
    if (r.code == exit_ok || r.code == exit_none) {
        std::filesystem::create_directories(dir, ec);
        if (ec) throw io_error("cannot create cache directory " + dir.string());
        write_file_atomic(file.string(), dump(json{{"exit", r.code}, {"report", r.report}}));
    }
    return r;
}

json input_entry(const Source& s) { return {{"spec", s.spec}, {"format", s.kind}, {"sha256", s.hash}}; }

json invariants_json(const ClassInvariants& c) {
    json j = {{"d", rat_str(c.d)}};
    if (c.self_conjugate) {
        j["d_lower"] = rat_str(c.d_lower);
        j["d_upper"] = rat_str(c.d_upper);
    }
    return j;
}

Outcome invariants_command(const Source& src, const std::string& surgery, bool large, const Options& o) {
    json rep = {{"command", "invariants"}, {"input", input_entry(src)}};
    if (src.kind == "uc/1") {
        auto errs = src.uc.iota && !src.uc.almost ? validate(iota_complex_of(src.uc)) : validate(src.uc.c);
        if (!errs.empty()) return {{{"command", "invariants"}, {"input", input_entry(src)}, {"errors", errs}}, exit_invalid};
        if (src.uc.iota && !src.uc.almost) {
            InvolutiveD d = involutive_d(iota_complex_of(src.uc), o.delta.value_or(0));
            rep["iota_complex"] = {{"d", d.d}, {"d_lower", d.d_lower}, {"d_upper", d.d_upper}, {"delta", d.delta}};
        } else {
            rep["complex"] = {{"d", d_invariant(src.uc.c)}};
        }
        return {rep, exit_ok};
    }
    if (src.kind != "ikc/1") throw format_error("invariants: needs a knot complex or an iota-complex");
    auto errs = validate(src.knot);
    if (!errs.empty()) return {{{"command", "invariants"}, {"input", input_entry(src)}, {"errors", errs}}, exit_invalid};
    if (large || surgery.empty()) {
        InvolutiveD d = involutive_d(a0_iota(src.knot), o.delta.value_or(0));
        int tower = d_invariant(slice(src.knot, SliceKind::B, 0).u);
        rep["large"] = {{"V0", (tower - d.d) / 2},
                        {"V0_lower", (tower - d.d_lower) / 2},
                        {"V0_upper", (tower - d.d_upper) / 2},
                        {"d_A0", d.d},
                        {"d_lower_A0", d.d_lower},
                        {"d_upper_A0", d.d_upper},
                        {"delta", d.delta}};
    }
    if (!surgery.empty()) {
        Slope s = parse_slope(surgery);
        if (s.p == 0) {
            MappingCone z = zero_surgery_cone(src.knot);
            auto problems = check_cone(z);
            HomologyReport h = homology(z.x);
            rep["surgery"] = {{"slope", s.str()}, {"generators", z.x.size()}, {"towers", h.free}, {"checks", problems}};
            return {rep, problems.empty() ? exit_ok : exit_invalid};
        }
        SurgeryReport r = surgery_invariants(src.knot, s, o.b);
        json classes = json::array();
        for (std::size_t i = 0; i < r.cone.size(); ++i) {
            const auto& c = r.cone[i];
            classes.push_back({{"label", c.label},
                               {"name", c.name},
                               {"self_conjugate", c.self_conjugate},
                               {"cone", invariants_json(c)},
                               {"formula", invariants_json(r.formula[i])}});
        }
        rep["surgery"] = {{"slope", s.str()}, {"b", r.b}, {"classes", classes}, {"agree", r.agree()}};
    }
    return {rep, exit_ok};
}

json witness_json(const UComplex& a, const UComplex& b, const std::optional<LocalWitness>& w, bool verified) {
    if (!w) return "none";
    return {{"F", arrows_to_json(a, b, w->F)}, {"h", arrows_to_json(a, a.size() ? b : b, w->h)}, {"N", w->N}, {"verified", verified}};
}

Outcome localeq_command(Source a, Source b, bool almost, bool use_a0) {
    json rep = {{"command", "localeq"}, {"inputs", {input_entry(a), input_entry(b)}}, {"almost", almost}};
    if (use_a0) {
        for (Source* s : {&a, &b}) {
            if (s->kind != "ikc/1") throw format_error("localeq --a0: inputs must be knot complexes");
            Source t;
            t.spec = "A0:" + s->spec;
            t.kind = "uc/1";
            t.uc = ufile_of(a0_iota(s->knot));
            *s = finish_source(t);
        }
    }
    if (a.kind != b.kind) throw format_error("localeq: inputs must have the same format");
    if (a.kind == "ikc/1") {
        if (almost) throw format_error("localeq --almost: knot complexes are compared with honest local maps");
        std::vector<std::string> errs;
        for (const auto& e : validate(a.knot)) errs.push_back("A: " + e);
        for (const auto& e : validate(b.knot)) errs.push_back("B: " + e);
        if (!errs.empty()) {
            rep["errors"] = errs;
            return {rep, exit_invalid};
        }
        auto one = [](const KnotComplex& s, const KnotComplex& t) -> json {
            auto w = exists_knot_local_map(s, t);
            if (!w) return "none";
            KnotMap rel = compose(knot_iota(s), w->F) + compose(w->F, knot_iota(t)) + knot_commutator(s, t, w->h);
            bool ok = knot_commutator(s, t, w->F).m.is_zero() && rel.m.is_zero();
            return {{"F", knot_arrows_to_json(s, t, w->F)}, {"h", knot_arrows_to_json(s, t, w->h)}, {"N", w->N}, {"verified", ok}};
        };
        rep["forward"] = one(a.knot, b.knot);
        rep["backward"] = one(b.knot, a.knot);
    } else if (a.kind == "uc/1") {
        if (!a.uc.iota || !b.uc.iota) throw format_error("localeq: iota-complex files need an iota");
        bool use_almost = almost || a.uc.almost || b.uc.almost;
        rep["almost"] = use_almost;
        AlmostIotaComplex aa = almost_complex_of(a.uc), ab = almost_complex_of(b.uc);
        std::vector<std::string> errs;
        for (const auto& e : validate(aa)) errs.push_back("A: " + e);
        for (const auto& e : validate(ab)) errs.push_back("B: " + e);
        if (!errs.empty()) {
            rep["errors"] = errs;
            return {rep, exit_invalid};
        }
        auto one = [&](const AlmostIotaComplex& s, const AlmostIotaComplex& t, const UFile& fs, const UFile& ft) -> json {
            std::optional<LocalWitness> w =
                use_almost ? exists_almost_local_map(s, t) : exists_local_map(iota_complex_of(fs), iota_complex_of(ft));
            bool ok = w && verify_morphism(s, t, w->F, w->h, use_almost ? MorphismMode::almost_local : MorphismMode::local).empty();
            return witness_json(s.base, t.base, w, ok);
        };
        rep["forward"] = one(aa, ab, a.uc, b.uc);
        rep["backward"] = one(ab, aa, b.uc, a.uc);
    } else {
        throw format_error("localeq: hyperbox files are not complexes");
    }
    bool eq = !rep["forward"].is_string() && !rep["backward"].is_string();
    rep["equivalent"] = eq;
    return {rep, eq ? exit_ok : exit_none};
}

void require(bool ok, const std::string& what) {
    if (!ok) throw std::runtime_error("repro-dhst: " + what + " failed");
}

}  // namespace

Source load_source(const std::string& spec) {
    if (spec.empty()) throw format_error("empty input name");
    std::error_code ec;
    if (std::filesystem::is_regular_file(spec, ec)) {
        json j = parse_json(read_file(spec));
        Source s;
        s.spec = spec;
        s.kind = format_tag(j);
        if (s.kind == "ikc/1")
            s.knot = knot_from_json(j);
        else if (s.kind == "uc/1")
            s.uc = ufile_from_json(j);
        else if (s.kind == "hbx/1")
            s.box = hyperbox_from_json(j);
        else
            throw format_error("unknown format " + s.kind);
        return finish_source(s);
    }
    if (spec.find('*') != std::string::npos) {
        auto parts = split(spec, '*');
        Source acc = load_source(parts[0]);
        for (std::size_t i = 1; i < parts.size(); ++i) acc = tensor_sources(acc, load_source(parts[i]));
        acc.spec = spec;
        return acc;
    }
    Source s;
    s.spec = spec;
    if (builtin_knot(spec, s.knot)) {
        s.kind = "ikc/1";
        return finish_source(s);
    }
    if (builtin_uc(spec, s.uc)) {
        s.kind = "uc/1";
        return finish_source(s);
    }
    throw io_error("cannot read " + spec + " (no such file or builtin)");
}

json repro_dhst_report() {
    json rep;
    rep["command"] = "repro-dhst";
    rep["version"] = tool_version;

    // the three summands and their staircases
    struct Part {
        const char* name;
        KnotComplex c;
        int want;
    };
    std::vector<Part> parts = {{"-T(6,7)", fixture_c6(), 11}, {"-T(6,13)", fixture_c4(), 21}, {"-T(2,3;2,5)", fixture_c2(), 5}};
    json comps = json::array();
    for (const auto& p : parts) {
        int n = p.c.size();
        bool sym = true;
        for (int i = 0; i < n; ++i) sym = sym && p.c.iota.r[i] == std::vector<int>{n - 1 - i};
        require(n == p.want && sym && validate(p.c).empty(), std::string("staircase for ") + p.name);
        comps.push_back({{"knot", p.name}, {"generators", n}, {"iota_reverses_staircase", sym}});
    }
    rep["summands"] = comps;

    // -2T(6,7) # T(6,13) # -T(2,3;2,5), reduced after each product
    KnotComplex c66 = reduce(tensor_with_iota(fixture_c6(), fixture_c6()));
    KnotComplex big = reduce(tensor_with_iota(reduce(tensor_with_iota(c66, dual(fixture_c4()))), fixture_c2()));
    require(validate(big).empty(), "validation of the product complex");
    KnotComplex c3 = fixture_c3();
    json prod = {{"generators", big.size()}};
    for (int dir = 0; dir < 2; ++dir) {
        const KnotComplex& s = dir == 0 ? big : c3;
        const KnotComplex& t = dir == 0 ? c3 : big;
        auto w = exists_knot_local_map(s, t);
        require(w.has_value(), dir == 0 ? "local map product -> C3" : "local map C3 -> product");
        KnotMap rel = compose(knot_iota(s), w->F) + compose(w->F, knot_iota(t)) + knot_commutator(s, t, w->h);
        require(knot_commutator(s, t, w->F).m.is_zero() && rel.m.is_zero(),
                dir == 0 ? "witness product -> C3" : "witness C3 -> product");
    }
    prod["locally_equivalent_to_C3"] = true;
    IotaComplex a0big = reduce(a0_iota(big));
    prod["A0_reduced_generators"] = a0big.base.size();
    rep["product"] = prod;

    // A_0 with iota_K against the standard complex, using the given maps
    KnotExample k = knot_example();
    require(local_equivalent(a0_iota(c3), k.a0), "A0(C3) against the tabulated A0");
    AlmostIotaComplex a = to_almost(k.a0), c = to_almost(k.c);
    json fx;
    require(compose(k.phi, k.psi).m == F2Matrix::identity(k.c.base.size()), "psi phi = id");
    fx["psi_phi_is_identity"] = true;
    GradedMap pp = compose(k.psi, k.phi) + identity_map(k.a0.base.size());
    require(commutator(k.a0.base, k.a0.base, k.J).m == pp.m, "phi psi = id + [d, J]");
    fx["phi_psi_homotopic_to_identity_via_J"] = true;
    require(verify_morphism(c, a, k.phi, k.H, MorphismMode::local).empty(), "phi local with H");
    fx["phi_local_with_H"] = true;
    require(verify_morphism(a, c, k.psi, std::nullopt, MorphismMode::almost_local).empty(), "psi almost local");
    fx["psi_almost_local"] = true;
    fx["psi_commutes_with_iota_exactly"] = verify_morphism(a, c, k.psi, std::nullopt, MorphismMode::iota).empty();
    GradedMap rel = compose(k.a0.iota, k.psi) + compose(k.psi, k.c.iota);
    rel.degree = 0;
    auto hpsi = find_homotopy(k.a0.base, k.c.base, rel);
    require(hpsi && verify_morphism(a, c, k.psi, *hpsi, MorphismMode::local).empty(), "psi local with a found homotopy");
    fx["psi_local_with_found_homotopy"] = true;
    rep["fixtures"] = fx;

    // independent searches
    StdComplexParams cls = parse_std_params("+,-1,+,-3");
    json search;
    require(local_equivalent(k.a0, k.c), "search A0 ~ C");
    require(local_equivalent(a0big, k.c), "search A0(product) ~ C");
    require(almost_local_equivalent(a, standard_complex(cls)), "search A0 almost ~ (+,-1,+,-3)");
    search["A0_locally_equivalent_to_C"] = true;
    search["A0_of_product_locally_equivalent_to_C"] = true;
    search["almost_local_class"] = "(+, -1, +, -3)";
    InvolutiveD d = involutive_d(k.a0);
    search["d"] = d.d;
    search["d_lower"] = d.d_lower;
    search["d_upper"] = d.d_upper;
    rep["search"] = search;

    // n-fold repeats against the monotonicity rule
    json obs = json::array();
    std::vector<int> obstructed, undecided;
    for (int n = 1; n <= 5; ++n) {
        StdComplexParams p = repeat(cls, n);
        bool consistent = sf_shape_obstruction(p);
        obs.push_back({{"n", n}, {"sequence", p.str()}, {"consistent_with_seifert_fibered", consistent}});
        (consistent ? undecided : obstructed).push_back(n);
    }
    rep["repeats"] = obs;
    rep["obstructed_n"] = obstructed;
    rep["undecided_n"] = undecided;
    rep["summary"] = fmt::format("almost local class (+, -1, +, -3) confirmed; nY obstructed for n in [{}]",
                                 fmt::join(obstructed, ", "));
    return rep;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"involutive knot complex toolkit", "ikc"};
    app.require_subcommand(1);
    Options o;
    app.add_flag("--json", o.as_json, "print reports as JSON");
    app.add_option("--cache", o.cache_dir, "cache directory (default $IKC_CACHE or ./.ikc-cache)");
    app.add_flag("--no-cache", o.no_cache, "neither read nor write the cache");
    app.add_option("--b", o.b, "truncation window for mapping cones");
    app.add_option("--delta", o.delta, "starting U-truncation depth for involutive invariants");
    app.add_option("-o,--output", o.output, "write the resulting file here instead of stdout");

    auto* knot = app.add_subcommand("knot", "build a knot complex (ikc/1)");
    knot->fallthrough();
    std::string build;
    std::vector<std::string> kargs;
    knot->add_option("kind", build, "torus | stair | cable-input | mirror | dual | tensor | reduce | show")->required();
    knot->add_option("args", kargs, "arguments of the builder");
    std::string alex;
    knot->add_option("--delta", alex, "stair, cable-input: Alexander polynomial coefficients, top degree first");

    auto* inv = app.add_subcommand("invariants", "correction terms of a complex or of its surgeries");
    inv->fallthrough();
    std::string inv_src, surgery;
    bool large = false;
    inv->add_option("input", inv_src, "file or builtin")->required();
    inv->add_option("--surgery", surgery, "slope p/q");
    inv->add_flag("--large", large, "V0 and its involutive refinements");

    auto* leq = app.add_subcommand("localeq", "search for local maps in both directions");
    leq->fallthrough();
    std::string la, lb;
    bool almost = false, use_a0 = false;
    leq->add_option("a", la, "file or builtin")->required();
    leq->add_option("b", lb, "file or builtin")->required();
    leq->add_flag("--almost", almost, "almost local maps (relations mod U)");
    leq->add_flag("--a0", use_a0, "compare the A0 iota-complexes of two knot complexes");

    auto* hb = app.add_subcommand("hyperbox", "validate, stack, compress, fill or generate hyperboxes (hbx/1)");
    hb->fallthrough();
    std::string action;
    std::vector<std::string> hfiles;
    int axis = -1;
    std::string hsize = "1,1,1";
    unsigned seed = 1;
    int gens = 6;
    bool equiv = false;
    hb->add_option("action", action, "validate | stack | compress | fill | random")->required();
    hb->add_option("files", hfiles, "input files");
    hb->add_option("--axis", axis, "stacking axis (default: last)");
    hb->add_option("--size", hsize, "size for random, e.g. 1,1,3");
    hb->add_option("--seed", seed, "seed for random");
    hb->add_option("--gens", gens, "generator bound for random");
    hb->add_flag("--equiv", equiv, "random: make the first edge a homotopy equivalence");

    auto* repro = app.add_subcommand("repro-dhst", "end-to-end reproduction of the Seifert fibered obstruction example");
    repro->fallthrough();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_invalid;
    }

    auto emit_report = [&](const Outcome& r) {
        if (o.as_json)
            out << dump(r.report);
        else
            render_text(r.report, "", out);
        return r.code;
    };
    auto emit_file = [&](const json& j) {
        if (o.output.empty())
            out << dump(j);
        else
            write_file_atomic(o.output, dump(j));
        return exit_ok;
    };

    try {
        if (knot->parsed()) {
            auto need = [&](std::size_t n) {
                if (kargs.size() != n) throw format_error(fmt::format("knot {}: expected {} argument(s)", build, n));
            };
            KnotComplex c;
            json meta = {{"builder", build}, {"args", kargs}};
            if (build == "torus") {
                need(2);
                Source s = load_source(fmt::format("torus:{},{}", kargs[0], kargs[1]));
                c = s.knot;
            } else if (build == "stair") {
                // mirrored L-space knot, drawn as a staircase from x_0
                if (!alex.empty()) {
                    if (kargs.size() > 1) throw format_error("knot stair: --delta takes at most a name");
                    c = staircase(exponents_of_coefficients(alex));
                } else {
                    need(1);
                    c = kargs[0] == "trivial" ? staircase({0}) : staircase(parse_ints(kargs[0], "stair"));
                }
                meta["delta"] = alex;
            } else if (build == "cable-input") {
                // positive L-space knot, as used for cabling
                if (!alex.empty()) {
                    if (kargs.size() > 1) throw format_error("knot cable-input: --delta takes at most a name");
                    c = lspace_knot(exponents_of_coefficients(alex));
                } else {
                    need(1);
                    c = lspace_knot(parse_ints(kargs[0], "cable-input"));
                }
                meta["delta"] = alex;
            } else if (build == "mirror" || build == "dual") {
                need(1);
                Source s = load_source(kargs[0]);
                if (s.kind != "ikc/1") throw format_error("knot mirror: needs a knot complex");
                c = dual(s.knot);
            } else if (build == "tensor") {
                if (kargs.size() < 2) throw format_error("knot tensor: needs at least two inputs");
                Source acc = load_source(kargs[0]);
                for (std::size_t i = 1; i < kargs.size(); ++i) acc = tensor_sources(acc, load_source(kargs[i]));
                if (acc.kind != "ikc/1") throw format_error("knot tensor: inputs must be knot complexes");
                c = acc.knot;
            } else if (build == "reduce") {
                need(1);
                Source s = load_source(kargs[0]);
                if (s.kind != "ikc/1") throw format_error("knot reduce: needs a knot complex");
                c = reduce(s.knot);
            } else if (build == "show") {
                need(1);
                Source s = load_source(kargs[0]);
                if (s.kind == "uc/1") return emit_file(ufile_to_json(s.uc));
                if (s.kind == "hbx/1") return emit_file(hyperbox_to_json(s.box));
                c = s.knot;
            } else {
                throw format_error("knot: unknown builder " + build);
            }
            auto errs = validate(c);
            if (!errs.empty()) {
                err << "ikc: the built complex fails validation: " << errs[0] << "\n";
                return exit_invalid;
            }
            return emit_file(knot_to_json(c, meta));
        }
        if (inv->parsed()) {
            Source s = load_source(inv_src);
            json request = {{"command", "invariants"}, {"input", s.hash}, {"surgery", surgery}, {"large", large},
                            {"b", o.b ? json(*o.b) : json(nullptr)}, {"delta", o.delta ? json(*o.delta) : json(nullptr)}};
            return emit_report(cached(o, request, [&] { return invariants_command(s, surgery, large, o); }, err));
        }
        if (leq->parsed()) {
            Source a = load_source(la), b = load_source(lb);
            json request = {{"command", "localeq"}, {"inputs", {a.hash, b.hash}}, {"almost", almost}, {"a0", use_a0}};
            return emit_report(cached(o, request, [&] { return localeq_command(a, b, almost, use_a0); }, err));
        }
        if (repro->parsed()) {
            json request = {{"command", "repro-dhst"}};
            return emit_report(cached(o, request, [] { return Outcome{repro_dhst_report(), exit_ok}; }, err));
        }
        if (hb->parsed()) {
            auto load_box = [&](const std::string& f) {
                Source s = load_source(f);
                if (s.kind != "hbx/1") throw format_error(f + ": not a hyperbox file");
                return s.box;
            };
            auto need = [&](std::size_t n) {
                if (hfiles.size() != n) throw format_error(fmt::format("hyperbox {}: expected {} file(s)", action, n));
            };
            auto reject_invalid = [&](const Hyperbox& h, const std::string& name) {
                auto v = validate(h);
                if (v.empty()) return false;
                err << "ikc: " << name << " is not a valid hyperbox: " << v[0] << "\n";
                return true;
            };
            if (action == "validate") {
                need(1);
                Hyperbox h = load_box(hfiles[0]);
                auto v = validate(h);
                json rep = {{"command", "hyperbox validate"}, {"size", h.size}, {"ok", v.empty()}, {"violations", v}};
                return emit_report({rep, v.empty() ? exit_ok : exit_invalid});
            }
            if (action == "stack") {
                need(2);
                Hyperbox a = load_box(hfiles[0]), b = load_box(hfiles[1]);
                if (reject_invalid(a, hfiles[0]) || reject_invalid(b, hfiles[1])) return exit_invalid;
                int ax = axis >= 0 ? axis : a.dim() - 1;
                return emit_file(hyperbox_to_json(stack(a, b, ax)));
            }
            if (action == "compress") {
                need(1);
                Hyperbox h = load_box(hfiles[0]);
                if (reject_invalid(h, hfiles[0])) return exit_invalid;
                return emit_file(hyperbox_to_json(compress(h)));
            }
            if (action == "fill") {
                need(1);
                Hyperbox h = load_box(hfiles[0]);
                auto shape = check_shape(h);
                if (!shape.empty()) {
                    err << "ikc: " << hfiles[0] << ": " << shape[0] << "\n";
                    return exit_invalid;
                }
                return emit_file(hyperbox_to_json(fill_cube(h)));
            }
            if (action == "random") {
                need(0);
                std::mt19937 rng(seed);
                Hyperbox h = random_hyperbox(rng, parse_ints(hsize, "--size"), gens, equiv);
                return emit_file(hyperbox_to_json(h, {{"seed", seed}}));
            }
            throw format_error("hyperbox: unknown action " + action);
        }
    } catch (const io_error& e) {
        err << "ikc: " << e.what() << "\n";
        return exit_io;
    } catch (const std::exception& e) {
        err << "ikc: " << e.what() << "\n";
        return exit_invalid;
    }
    return exit_invalid;
}

}  // namespace ikc
