#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ikc/io.hpp"

namespace ikc {

// exit codes
constexpr int exit_ok = 0;
constexpr int exit_invalid = 2;
constexpr int exit_none = 3;
constexpr int exit_io = 4;

// a file path, or a builtin name when no such file exists:
//   knots: unknot, trefoil, figure-eight, C1..C7, torus:P,Q (P < 0 for the mirror)
//   iota-complexes: trivial, S<n>, -S<n>, std:<signs and integers>, A0:<knot>, example:A0, example:C
// and X*Y*... for tensor products
struct Source {
    std::string spec;
    std::string kind;  // "ikc/1", "uc/1" or "hbx/1"
    KnotComplex knot;
    UFile uc;
    Hyperbox box;
    json content;      // serialized form
    std::string hash;  // sha256 of the serialized form
};
Source load_source(const std::string& spec);

// full report of the end-to-end reproduction; deterministic
json repro_dhst_report();

// args exclude the program name
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ikc
