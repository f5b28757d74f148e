#include "wmopt/scheme_io.hpp"

#include <fstream>
#include <sstream>

#include "wmopt/errors.hpp"

namespace wmopt {

using nlohmann::json;

namespace {

const json& field(const json& obj, const std::string& name, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path + ": expected an object");
  const auto it = obj.find(name);
  if (it == obj.end()) throw ParseError(path + "/" + name + ": missing field");
  return *it;
}

std::int64_t as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ParseError(path + ": expected an integer");
  return v.get<std::int64_t>();
}

Rational as_rational(const json& v, const std::string& path) {
  if (!v.is_string()) throw ParseError(path + ": expected a decimal or p/q string");
  try {
    return Rational::parse(v.get<std::string>());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace

json scheme_to_json(const WatermarkScheme& scheme) {
  json doc;
  doc["version"] = kSchemeDocumentVersion;
  doc["n"] = scheme.n();
  doc["t"] = scheme.t();
  doc["alpha"] = scheme.alpha().decimal();
  json px = json::array();
  for (const auto& p : scheme.px().probs()) px.push_back(p.decimal());
  doc["px"] = px;

  const KeySet& ks = scheme.keyset();
  json keyset = {{"kind", to_string(ks.kind())}, {"length", ks.length()}, {"t", ks.t()}};
  if (ks.kind() != KeySetKind::reduced) {
    json keys = json::array();
    for (const auto& key : ks.keys(ks.size())) keys.push_back(key.entries());
    keyset["keys"] = keys;
  }
  doc["keyset"] = keyset;

  json tables = json::object();
  for (const auto& table : scheme.tables()) {
    json rows = json::array();
    for (const auto& [key, row] : table.rows()) {
      for (const auto& [x, v] : row) rows.push_back(json::array({key, x + 1, v.str()}));
    }
    tables[std::to_string(table.message())] = rows;
  }
  doc["tables"] = tables;

  json prov = json::object();
  prov["method"] = scheme.provenance().method;
  for (const auto& [k, v] : scheme.provenance().details) prov[k] = v;
  doc["provenance"] = prov;
  return doc;
}

WatermarkScheme scheme_from_json(const json& doc) {
  const auto version = as_int(field(doc, "version", ""), "/version");
  if (version != kSchemeDocumentVersion) throw ParseError("/version: unsupported version " + std::to_string(version));
  const auto n = as_int(field(doc, "n", ""), "/n");
  const auto t = as_int(field(doc, "t", ""), "/t");
  const Rational alpha = as_rational(field(doc, "alpha", ""), "/alpha");

  const json& px_doc = field(doc, "px", "");
  if (!px_doc.is_array()) throw ParseError("/px: expected an array");
  RationalVector probs;
  for (std::size_t i = 0; i < px_doc.size(); ++i) probs.push_back(as_rational(px_doc[i], "/px/" + std::to_string(i)));
  if (static_cast<std::int64_t>(probs.size()) != n) throw ValidationError("/px: length differs from n");
  TokenDistribution px(std::move(probs));

  const json& ks_doc = field(doc, "keyset", "");
  const KeySetKind kind = keyset_kind_from_string(field(ks_doc, "kind", "/keyset").get<std::string>());
  const auto length = as_int(field(ks_doc, "length", "/keyset"), "/keyset/length");
  const auto kt = as_int(field(ks_doc, "t", "/keyset"), "/keyset/t");
  if (length < 1 || length > 1'000'000 || kt < 1 || kt > length) throw ValidationError("/keyset: invalid dimensions");
  KeySet keyset = [&] {
    if (kind == KeySetKind::reduced) return KeySet::reduced(static_cast<int>(length), static_cast<int>(kt));
    const json& keys_doc = field(ks_doc, "keys", "/keyset");
    if (!keys_doc.is_array()) throw ParseError("/keyset/keys: expected an array");
    std::vector<KeyVector> keys;
    for (std::size_t i = 0; i < keys_doc.size(); ++i) {
      const std::string path = "/keyset/keys/" + std::to_string(i);
      if (!keys_doc[i].is_array()) throw ParseError(path + ": expected an array");
      std::vector<int> entries;
      for (std::size_t j = 0; j < keys_doc[i].size(); ++j) {
        entries.push_back(static_cast<int>(as_int(keys_doc[i][j], path + "/" + std::to_string(j))));
      }
      keys.emplace_back(std::move(entries));
    }
    return KeySet::from_keys(kind, static_cast<int>(length), static_cast<int>(kt), std::move(keys));
  }();

  const json& tables_doc = field(doc, "tables", "");
  if (!tables_doc.is_object()) throw ParseError("/tables: expected an object");
  TableSet tables = empty_tables(static_cast<int>(t));
  for (const auto& [m_str, rows] : tables_doc.items()) {
    const std::string path = "/tables/" + m_str;
    int m = 0;
    try {
      m = std::stoi(m_str);
    } catch (const std::exception&) {
      throw ParseError(path + ": message key is not an integer");
    }
    if (m < 1 || m > t) throw ValidationError(path + ": message outside [1:T]");
    if (!rows.is_array()) throw ParseError(path + ": expected an array");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::string cell = path + "/" + std::to_string(i);
      const json& entry = rows[i];
      if (!entry.is_array() || entry.size() != 3) throw ParseError(cell + ": expected [key_index, token, mass]");
      const auto key = as_int(entry[0], cell + "/0");
      const auto token = as_int(entry[1], cell + "/1");
      const Rational mass = as_rational(entry[2], cell + "/2");
      if (key < 0 || static_cast<std::uint64_t>(key) >= keyset.size()) throw ValidationError(cell + ": key index out of range");
      if (token < 1 || token > n) throw ValidationError(cell + ": token out of range");
      if (mass.sign() <= 0) throw ValidationError(cell + ": mass must be positive, got " + mass.str());
      auto& table = tables[static_cast<std::size_t>(m - 1)];
      if (!table.at(static_cast<KeyIndex>(key), static_cast<std::size_t>(token - 1)).is_zero()) {
        throw ValidationError(cell + ": duplicate cell");
      }
      table.add(static_cast<KeyIndex>(key), static_cast<std::size_t>(token - 1), mass);
    }
  }

  Provenance prov;
  if (const auto it = doc.find("provenance"); it != doc.end()) {
    if (!it->is_object()) throw ParseError("/provenance: expected an object");
    for (const auto& [k, v] : it->items()) {
      if (!v.is_string()) throw ParseError("/provenance/" + k + ": expected a string");
      if (k == "method") {
        prov.method = v.get<std::string>();
      } else {
        prov.details[k] = v.get<std::string>();
      }
    }
  }

  try {
    return WatermarkScheme(std::move(px), alpha, static_cast<int>(t), std::move(keyset), std::move(tables), std::move(prov));
  } catch (const ParameterError& e) {
    throw ValidationError(e.what());
  }
}

std::string serialize_scheme(const WatermarkScheme& scheme) { return scheme_to_json(scheme).dump(2) + "\n"; }

WatermarkScheme deserialize_scheme(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("malformed document at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  try {
    return scheme_from_json(doc);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed document: ") + e.what());
  }
}

WatermarkScheme load_scheme_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return deserialize_scheme(ss.str());
}

void save_scheme_file(const WatermarkScheme& scheme, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot write " + path);
  out << serialize_scheme(scheme);
}

std::string export_csv(const WatermarkScheme& scheme) {
  std::ostringstream os;
  os << "# N=" << scheme.n() << "\n";
  os << "# T=" << scheme.t() << "\n";
  os << "# alpha=" << scheme.alpha().decimal() << "\n";
  os << "# keyset=" << to_string(scheme.keyset().kind()) << "\n";
  os << "m,key_index,key,token,mass\n";
  for (const auto& table : scheme.tables()) {
    for (const auto& [key, row] : table.rows()) {
      std::string key_str = scheme.keyset().key_at(key).str();
      for (const auto& [x, v] : row) {
        os << table.message() << ',' << key << ",\"" << key_str << "\"," << x + 1 << ',' << v.str() << "\n";
      }
    }
  }
  return os.str();
}

}  // namespace wmopt
