#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ddx2/connection.hpp"
#include "ddx2/error.hpp"
#include "ddx2/extremal.hpp"
#include "ddx2/family_search.hpp"
#include "ddx2/rational.hpp"

namespace ddx2 {

using Json = nlohmann::ordered_json;

inline Json to_json(const ExtremalRecord& rec) {
  return Json{{"d", rec.d}, {"n", rec.n}, {"generators", rec.generators},
              {"self_inverse_included", rec.self_inverse_included}};
}

inline ExtremalRecord record_from_json(const Json& j) {
  if (!j.is_object()) throw MalformedRecord("record must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "d" && key != "n" && key != "generators" && key != "self_inverse_included") {
      throw MalformedRecord("unknown field '" + key + "'");
    }
  }
  auto need = [&](const char* key) -> const Json& {
    if (!j.contains(key)) throw MalformedRecord(std::string("missing field '") + key + "'");
    return j.at(key);
  };
  ExtremalRecord rec;
  const Json& d = need("d");
  const Json& n = need("n");
  const Json& gens = need("generators");
  const Json& self = need("self_inverse_included");
  if (!d.is_number_unsigned() || !n.is_number_unsigned()) throw MalformedRecord("d and n must be non-negative integers");
  if (!gens.is_array()) throw MalformedRecord("generators must be an array");
  if (!self.is_boolean()) throw MalformedRecord("self_inverse_included must be a boolean");
  rec.d = d.get<std::uint64_t>();
  rec.n = n.get<std::uint64_t>();
  for (const auto& g : gens) {
    if (!g.is_number_unsigned()) throw MalformedRecord("generators must be non-negative integers");
    rec.generators.push_back(g.get<std::uint64_t>());
  }
  rec.self_inverse_included = self.get<bool>();
  return rec;
}

inline std::string to_line(const ExtremalRecord& rec) { return to_json(rec).dump(); }

inline ExtremalRecord parse_record_line(const std::string& line) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::parse_error& e) {
    throw MalformedRecord(std::string("bad JSON: ") + e.what());
  }
  return record_from_json(j);
}

/// One record per non-blank line.
inline std::vector<ExtremalRecord> read_catalog(std::istream& in) {
  std::vector<ExtremalRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse_record_line(line));
    } catch (const MalformedRecord& e) {
      throw MalformedRecord("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

inline std::vector<ExtremalRecord> read_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_catalog(in);
}

inline void write_catalog(std::ostream& out, const std::vector<ExtremalRecord>& records) {
  for (const auto& r : records) out << to_line(r) << '\n';
}

// Family witnesses.

inline Json to_json(const SubscriptFamily& f, unsigned l) {
  Rational coef = Rational(f.n) / (Rational(l) * l);
  return Json{{"l", l},
              {"variant", to_string(f.variant.kind)},
              {"n", f.n},
              {"U", f.U},
              {"V", f.V},
              {"W", f.W},
              {"coefficient", to_fraction(coef)}};
}

inline VariantKind parse_variant_kind(const std::string& name) {
  if (name == "cyclic") return VariantKind::CyclicGalois;
  if (name == "abelian") return VariantKind::AbelianGalois;
  if (name == "unrestricted") return VariantKind::UnrestrictedCyclic;
  throw Error("unknown variant '" + name + "' (expected cyclic, abelian or unrestricted)");
}

inline SubscriptFamily family_from_json(const Json& j) {
  try {
    auto kind = parse_variant_kind(j.at("variant").get<std::string>());
    auto layout = layout_for_l(kind, j.at("l").get<unsigned>());
    return make_family(layout.variant, j.at("n").get<std::uint64_t>(), j.at("U").get<std::vector<std::uint64_t>>(),
                       j.at("V").get<std::vector<std::uint64_t>>(), j.at("W").get<std::vector<std::uint64_t>>());
  } catch (const Json::exception& e) {
    throw MalformedRecord(std::string("bad family record: ") + e.what());
  }
}

namespace detail {

inline std::string join(const std::vector<std::uint64_t>& xs, char sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(xs[i]);
  }
  return out;
}

} // namespace detail

inline const char* family_csv_header() { return "l,variant,n,U,V,W,coefficient_num,coefficient_den"; }

/// Subscript lists are ';'-separated inside their cell.
inline std::string family_csv_row(const SubscriptFamily& f, unsigned l) {
  Rational coef = Rational(f.n) / (Rational(l) * l);
  std::ostringstream row;
  row << l << ',' << to_string(f.variant.kind) << ',' << f.n << ',' << detail::join(f.U, ';') << ','
      << detail::join(f.V, ';') << ',' << detail::join(f.W, ';') << ',' << numerator(coef) << ','
      << denominator(coef);
  return row.str();
}

} // namespace ddx2
