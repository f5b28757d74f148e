#pragma once

#include <string>

#include "json.hpp"
#include "wmopt/scheme.hpp"

namespace wmopt {

inline constexpr int kSchemeDocumentVersion = 1;

// Document layout:
//   {"version": 1, "n": N, "t": T, "alpha": "<decimal or p/q>", "px": ["<decimal or p/q>", ...],
//    "keyset": {"kind": "reduced"|"bijective"|"explicit-list", "length": L, "t": T, "keys": [[...], ...]},
//    "tables": {"<m>": [[key_index, token, "p/q"], ...], ...},
//    "provenance": {"method": "...", ...}}
// Key indices are 0-based ranks in the key set order, tokens are 1-based.
// "keys" is present only for listed kinds.
nlohmann::json scheme_to_json(const WatermarkScheme& scheme);
WatermarkScheme scheme_from_json(const nlohmann::json& doc);

std::string serialize_scheme(const WatermarkScheme& scheme);
WatermarkScheme deserialize_scheme(const std::string& text);

WatermarkScheme load_scheme_file(const std::string& path);
void save_scheme_file(const WatermarkScheme& scheme, const std::string& path);

// Header block of "# key=value" lines, then "m,key_index,key,token,mass" rows.
std::string export_csv(const WatermarkScheme& scheme);

}  // namespace wmopt
