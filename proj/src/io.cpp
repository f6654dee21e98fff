#include "ikc/io.hpp"

#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <openssl/evp.h>
#include <set>
#include <sstream>
#include <unistd.h>

namespace ikc {

namespace {

const json& field(const json& j, const char* key, const std::string& what) {
    if (!j.is_object() || !j.contains(key)) throw format_error(fmt::format("{}: missing field \"{}\"", what, key));
    return j.at(key);
}

int int_field(const json& j, const char* key, const std::string& what) {
    const json& v = field(j, key, what);
    if (!v.is_number_integer()) throw format_error(fmt::format("{}: field \"{}\" must be an integer", what, key));
    return v.get<int>();
}

std::string name_field(const json& j, const std::string& what) {
    const json& v = field(j, "name", what);
    if (!v.is_string() || v.get<std::string>().empty()) throw format_error(what + ": generator names must be nonempty strings");
    return v.get<std::string>();
}

void check_format(const json& j, const std::string& want) {
    std::string got = format_tag(j);
    if (got != want) throw format_error(fmt::format("expected format {}, got {}", want, got));
}

void check_unique(const std::vector<std::string>& names, const std::string& what) {
    std::set<std::string> seen;
    for (const auto& n : names)
        if (!seen.insert(n).second) throw format_error(fmt::format("{}: duplicate generator {}", what, n));
}

int lookup(const std::vector<std::string>& names, const json& v, const std::string& what) {
    if (!v.is_string()) throw format_error(what + ": arrow endpoints must be generator names");
    auto it = std::find(names.begin(), names.end(), v.get<std::string>());
    if (it == names.end()) throw format_error(fmt::format("{}: unknown generator {}", what, v.get<std::string>()));
    return static_cast<int>(it - names.begin());
}

json generators_json(const UComplex& c) {
    json g = json::array();
    for (int x = 0; x < c.size(); ++x) g.push_back({{"name", c.names[x]}, {"gr", c.gr[x]}});
    return g;
}

UComplex ucomplex_from(const json& j, const std::string& what) {
    UComplex c;
    const json& gens = field(j, "generators", what);
    if (!gens.is_array()) throw format_error(what + ": generators must be an array");
    for (const auto& g : gens) c.add_generator(name_field(g, what), int_field(g, "gr", what));
    check_unique(c.names, what);
    if (j.contains("diff")) c.d = arrows_from_json(c, c, j.at("diff"), -1, what + " diff").m;
    return c;
}

}  // namespace

std::string format_tag(const json& j) {
    if (!j.is_object() || !j.contains("format") || !j.at("format").is_string()) throw format_error("missing format tag");
    return j.at("format").get<std::string>();
}

json knot_to_json(const KnotComplex& c, const json& meta) {
    json j;
    j["format"] = "ikc/1";
    json g = json::array();
    for (int x = 0; x < c.size(); ++x) g.push_back({{"name", c.names[x]}, {"grw", c.grw[x]}, {"grz", c.grz[x]}});
    j["generators"] = g;
    json d = json::array();
    for (int x = 0; x < c.size(); ++x)
        for (int y : c.d.r[x]) d.push_back({c.names[x], c.names[y]});
    j["diff"] = d;
    if (c.has_iota) {
        json io = json::array();
        for (int x = 0; x < c.size(); ++x)
            for (int y : c.iota.r[x]) io.push_back({c.names[x], c.names[y]});
        j["iota"] = io;
    }
    if (!meta.empty()) j["meta"] = meta;
    return j;
}

KnotComplex knot_from_json(const json& j) {
    check_format(j, "ikc/1");
    const std::string what = "ikc/1";
    KnotComplex c;
    const json& gens = field(j, "generators", what);
    if (!gens.is_array()) throw format_error(what + ": generators must be an array");
    for (const auto& g : gens) c.add_generator(name_field(g, what), int_field(g, "grw", what), int_field(g, "grz", what));
    check_unique(c.names, what);
    auto pairs = [&](const char* key, bool iota) {
        if (!j.contains(key)) return;
        const json& a = j.at(key);
        if (!a.is_array()) throw format_error(fmt::format("{}: {} must be an array", what, key));
        for (const auto& e : a) {
            if (!e.is_array() || e.size() != 2) throw format_error(fmt::format("{}: {} entries are [from, to]", what, key));
            int x = lookup(c.names, e[0], what), y = lookup(c.names, e[1], what);
            if (iota)
                c.add_iota(x, y);
            else
                c.add_arrow(x, y);
        }
    };
    pairs("diff", false);
    pairs("iota", true);
    if (j.contains("iota")) c.has_iota = true;
    return c;
}

json arrows_to_json(const UComplex& src, const UComplex& tgt, const GradedMap& f) {
    json a = json::array();
    for (int x = 0; x < f.m.rows; ++x)
        for (int y : f.m.r[x]) a.push_back({src.names[x], tgt.names[y], arrow_power(src.gr[x], tgt.gr[y], f.degree)});
    return a;
}

GradedMap arrows_from_json(const UComplex& src, const UComplex& tgt, const json& a, int degree, const std::string& what) {
    if (!a.is_array()) throw format_error(what + ": arrows must be an array");
    GradedMap f = zero_map(src.size(), tgt.size(), degree);
    for (const auto& e : a) {
        if (!e.is_array() || e.size() != 3 || !e[2].is_number_integer())
            throw format_error(what + ": arrows are [from, to, power]");
        int x = lookup(src.names, e[0], what), y = lookup(tgt.names, e[1], what);
        int k = e[2].get<int>();
        if (!arrow_legal(src.gr[x], tgt.gr[y], degree) || arrow_power(src.gr[x], tgt.gr[y], degree) != k)
            throw format_error(fmt::format("{}: arrow {} -> {} has power {}, gradings force another", what, src.names[x],
                                           tgt.names[y], k));
        f.m.toggle(x, y);
    }
    return f;
}

json knot_arrows_to_json(const KnotComplex& src, const KnotComplex& tgt, const KnotMap& f) {
    json a = json::array();
    for (int x = 0; x < f.m.rows; ++x)
        for (int y : f.m.r[x]) {
            Powers p = arrow_powers(src, tgt, x, y, f.dw, f.dz, f.skew);
            a.push_back({src.names[x], tgt.names[y], p.m, p.n});
        }
    return a;
}

json ufile_to_json(const UFile& f) {
    json j;
    j["format"] = "uc/1";
    j["generators"] = generators_json(f.c);
    j["diff"] = arrows_to_json(f.c, f.c, diff_map(f.c));
    if (f.iota) {
        j["iota"] = arrows_to_json(f.c, f.c, *f.iota);
        if (f.almost) j["almost"] = true;
    }
    if (f.q) j["q"] = arrows_to_json(f.c, f.c, *f.q);
    if (!f.meta.empty()) j["meta"] = f.meta;
    return j;
}

UFile ufile_from_json(const json& j) {
    check_format(j, "uc/1");
    UFile f;
    f.c = ucomplex_from(j, "uc/1");
    if (j.contains("iota")) f.iota = arrows_from_json(f.c, f.c, j.at("iota"), 0, "uc/1 iota");
    if (j.contains("almost")) {
        if (!j.at("almost").is_boolean()) throw format_error("uc/1: almost must be a boolean");
        f.almost = j.at("almost").get<bool>();
    }
    if (j.contains("q")) f.q = arrows_from_json(f.c, f.c, j.at("q"), -1, "uc/1 q");
    if (j.contains("meta")) f.meta = j.at("meta");
    return f;
}

UFile ufile_of(const IotaComplex& ic, const json& meta) { return {ic.base, ic.iota, false, std::nullopt, meta}; }

UFile ufile_of(const AlmostIotaComplex& ac, const json& meta) { return {ac.base, ac.omega, true, std::nullopt, meta}; }

IotaComplex iota_complex_of(const UFile& f) {
    if (!f.iota) throw format_error("uc/1: the complex has no iota");
    if (f.almost) throw format_error("uc/1: an almost iota-complex has no honest iota");
    return {f.c, *f.iota};
}

AlmostIotaComplex almost_complex_of(const UFile& f) {
    if (!f.iota) throw format_error("uc/1: the complex has no iota");
    if (f.almost) return {f.c, *f.iota};
    return to_almost(IotaComplex{f.c, *f.iota});
}

json hyperbox_to_json(const Hyperbox& h, const json& meta) {
    json j;
    j["format"] = "hbx/1";
    j["size"] = h.size;
    json cs = json::array();
    for (int p = 0; p < h.num_points(); ++p) {
        const UComplex& c = h.complexes[p];
        cs.push_back({{"point", h.point(p)}, {"generators", generators_json(c)}, {"diff", arrows_to_json(c, c, diff_map(c))}});
    }
    j["complexes"] = cs;
    json ms = json::array();
    for (const auto& [key, f] : h.maps) {
        std::vector<int> eps(h.dim());
        for (int i = 0; i < h.dim(); ++i) eps[i] = static_cast<int>(key.second >> i & 1u);
        int t = h.step(key.first, key.second);
        ms.push_back({{"from", h.point(key.first)}, {"eps", eps}, {"arrows", arrows_to_json(h.complexes[key.first], h.complexes[t], f)}});
    }
    j["maps"] = ms;
    if (!meta.empty()) j["meta"] = meta;
    return j;
}

Hyperbox hyperbox_from_json(const json& j) {
    check_format(j, "hbx/1");
    const std::string what = "hbx/1";
    const json& sz = field(j, "size", what);
    if (!sz.is_array() || sz.size() > 3) throw format_error(what + ": size must be a list of at most 3 integers");
    std::vector<int> size;
    for (const auto& s : sz) {
        if (!s.is_number_integer() || s.get<int>() < 0) throw format_error(what + ": sizes are nonnegative integers");
        size.push_back(s.get<int>());
    }
    Hyperbox h(size);
    auto read_point = [&](const json& v) {
        if (!v.is_array() || v.size() != size.size()) throw format_error(what + ": point has the wrong dimension");
        std::vector<int> pt;
        for (const auto& c : v) {
            if (!c.is_number_integer()) throw format_error(what + ": point coordinates are integers");
            pt.push_back(c.get<int>());
        }
        try {
            h.index(pt);
        } catch (const std::runtime_error& e) {
            throw format_error(what + ": " + e.what());
        }
        return pt;
    };
    std::vector<bool> seen(h.num_points(), false);
    const json& cs = field(j, "complexes", what);
    if (!cs.is_array()) throw format_error(what + ": complexes must be an array");
    for (const auto& c : cs) {
        int p = h.index(read_point(field(c, "point", what)));
        if (seen[p]) throw format_error(what + ": a point is listed twice");
        seen[p] = true;
        h.complexes[p] = ucomplex_from(c, what);
    }
    for (int p = 0; p < h.num_points(); ++p)
        if (!seen[p]) throw format_error(what + ": missing complex at a lattice point");
    if (j.contains("maps")) {
        const json& ms = j.at("maps");
        if (!ms.is_array()) throw format_error(what + ": maps must be an array");
        for (const auto& m : ms) {
            int p = h.index(read_point(field(m, "from", what)));
            const json& eps = field(m, "eps", what);
            if (!eps.is_array() || eps.size() != size.size()) throw format_error(what + ": eps has the wrong dimension");
            unsigned mask = 0;
            for (std::size_t i = 0; i < eps.size(); ++i) {
                if (!eps[i].is_number_integer() || eps[i].get<int>() < 0 || eps[i].get<int>() > 1)
                    throw format_error(what + ": eps entries are 0 or 1");
                if (eps[i].get<int>() == 1) mask |= 1u << i;
            }
            if (mask == 0) throw format_error(what + ": eps must be nonzero");
            int t = h.step(p, mask);
            if (t < 0) throw format_error(what + ": map leaves the box");
            if (h.has(p, mask)) throw format_error(what + ": a map is listed twice");
            GradedMap f = arrows_from_json(h.complexes[p], h.complexes[t], field(m, "arrows", what), mask_weight(mask) - 1,
                                           fmt::format("{} D^{}", what, mask_str(mask, h.dim())));
            h.set(p, mask, f);
        }
    }
    return h;
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw format_error(std::string("invalid JSON: ") + e.what());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& text) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += fmt::format(".tmp{}", ::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw io_error("cannot write " + tmp.string());
        out << text;
        out.flush();
        if (!out) throw io_error("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw io_error("cannot rename into " + path);
    }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 failed");
    std::string out;
    for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", md[i]);
    return out;
}

}  // namespace ikc
