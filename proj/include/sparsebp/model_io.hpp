#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "sparsebp/mrf.hpp"

namespace sparsebp {

// Plain-text model format:
//
//   MRF M=<int> nodes=<int> edges=<int>
//   g <node> v0 v1 ... v(M-1)            one per node
//   e <i> <j> <potential-id>             one per edge
//   pot <id> fbar=<real>                 then its columns:
//   col <xj> (xi:value)*                 omitted columns hold no compatible states
//
// Tokens are whitespace-delimited; blank lines and '#' comment lines are ignored.
// Potentials are product-domain; their log forms are derived.

MrfModel parse_model(std::string_view text);
/// Every edge potential must have a sparse form. Reals are written with 17 significant digits.
std::string format_model(const MrfModel& model);

MrfModel read_model_file(const std::filesystem::path& path);
void write_model_file(const std::filesystem::path& path, const MrfModel& model);

}  // namespace sparsebp
