#pragma once

#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>

#include "ikc/hyperbox.hpp"
#include "ikc/iota.hpp"
#include "ikc/knot.hpp"

namespace ikc {

using json = nlohmann::json;

// unreadable or unwritable files
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// malformed JSON or schema violations
struct format_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ikc/1: generators {name, grw, grz}, diff and iota as name pairs, powers forced by the gradings
json knot_to_json(const KnotComplex& c, const json& meta = json::object());
KnotComplex knot_from_json(const json& j);

// uc/1: generators {name, gr}, arrows [from, to, power] with the power checked against the gradings.
// iota present makes an iota-complex; with "almost": true the iota list holds omega = 1 + iota-bar
struct UFile {
    UComplex c;
    std::optional<GradedMap> iota;
    bool almost = false;
    std::optional<GradedMap> q;  // degree -1 map for complexes over F[U, Q]/Q^2
    json meta = json::object();
};
json ufile_to_json(const UFile& f);
UFile ufile_from_json(const json& j);
UFile ufile_of(const IotaComplex& ic, const json& meta = json::object());
UFile ufile_of(const AlmostIotaComplex& ac, const json& meta = json::object());
IotaComplex iota_complex_of(const UFile& f);         // throws unless iota present and not almost
AlmostIotaComplex almost_complex_of(const UFile& f);  // either kind

// hbx/1: size, complexes per point, maps {from, eps, arrows}
json hyperbox_to_json(const Hyperbox& h, const json& meta = json::object());
Hyperbox hyperbox_from_json(const json& j);

json arrows_to_json(const UComplex& src, const UComplex& tgt, const GradedMap& f);
GradedMap arrows_from_json(const UComplex& src, const UComplex& tgt, const json& a, int degree, const std::string& what);
json knot_arrows_to_json(const KnotComplex& src, const KnotComplex& tgt, const KnotMap& f);

std::string format_tag(const json& j);
json parse_json(const std::string& text);
std::string read_file(const std::string& path);
// write to a temporary next to the target, then rename over it
void write_file_atomic(const std::string& path, const std::string& text);
// two-space indent, sorted keys, trailing newline
std::string dump(const json& j);
std::string sha256_hex(const std::string& data);

}  // namespace ikc
