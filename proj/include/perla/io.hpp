#pragma once

#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "perla/audit.hpp"
#include "perla/cosheaf.hpp"
#include "perla/examples.hpp"

namespace perla {
namespace io {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// numbers

// Shortest decimal that round-trips the double; the literal `inf` for
// infinity.
inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

// ---------------------------------------------------------------------------
// parse helpers

inline const json& require(const json& j, const char* key,
                           const std::string& path) {
  if (!j.is_object())
    throw parse_error(path + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end())
    throw parse_error(path + ": missing required field '" + key + "'");
  return *it;
}

inline double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) throw parse_error(path + ": expected a number");
  return j.get<double>();
}

inline double finite_at(const json& j, const std::string& path) {
  const double v = number_at(j, path);
  if (!std::isfinite(v)) throw parse_error(path + ": must be finite");
  return v;
}

// A matrix is either an array of equal-length rows (positive dimensions
// required) or an object {rows, cols, data} with row-major data (any
// dimensions, including zero).
inline Matrix parse_matrix(const json& j, const std::string& path) {
  if (j.is_array()) {
    const Index rows = static_cast<Index>(j.size());
    if (rows == 0)
      throw parse_error(path +
                        ": empty matrix needs the {rows, cols, data} form");
    if (!j[0].is_array())
      throw parse_error(path + ": expected an array of rows");
    const Index cols = static_cast<Index>(j[0].size());
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
      const json& row = j[r];
      if (!row.is_array() || static_cast<Index>(row.size()) != cols)
        throw parse_error(path + "[" + std::to_string(r) +
                          "]: rows must have equal length");
      for (Index c = 0; c < cols; ++c)
        m(r, c) = finite_at(row[c],
                            path + "[" + std::to_string(r) + "][" +
                                std::to_string(c) + "]");
    }
    return m;
  }
  if (j.is_object()) {
    const Index rows =
        static_cast<Index>(number_at(require(j, "rows", path), path + ".rows"));
    const Index cols =
        static_cast<Index>(number_at(require(j, "cols", path), path + ".cols"));
    if (rows < 0 || cols < 0)
      throw parse_error(path + ": dimensions must be nonnegative");
    const json& data = require(j, "data", path);
    if (!data.is_array() || static_cast<Index>(data.size()) != rows * cols)
      throw parse_error(path + ".data: expected " +
                        std::to_string(rows * cols) + " entries");
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r)
      for (Index c = 0; c < cols; ++c)
        m(r, c) = finite_at(data[r * cols + c],
                            path + ".data[" + std::to_string(r * cols + c) +
                                "]");
    return m;
  }
  throw parse_error(path + ": expected a matrix");
}

inline json matrix_to_json(const Matrix& m) {
  if (m.rows() > 0 && m.cols() > 0) {
    json rows = json::array();
    for (Index r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
      rows.push_back(std::move(row));
    }
    return rows;
  }
  json obj;
  obj["rows"] = m.rows();
  obj["cols"] = m.cols();
  obj["data"] = json::array();
  return obj;
}

inline Simplex parse_simplex(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty())
    throw parse_error(path + ": expected a nonempty vertex array");
  Simplex s;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& v = j[i];
    if (!v.is_number_integer())
      throw parse_error(path + "[" + std::to_string(i) +
                        "]: vertices must be integers");
    s.v.push_back(v.get<int>());
  }
  std::sort(s.v.begin(), s.v.end());
  for (std::size_t i = 1; i < s.v.size(); ++i)
    if (s.v[i] == s.v[i - 1])
      throw parse_error(path + ": repeated vertex " +
                        std::to_string(s.v[i]));
  return s;
}

inline WeightedComplex parse_complex(const json& arr,
                                     const std::string& path) {
  if (!arr.is_array())
    throw parse_error(path + ": expected an array of simplices");
  std::vector<WeightedComplex::Entry> entries;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    const json& e = arr[i];
    WeightedComplex::Entry entry;
    entry.s = parse_simplex(require(e, "vertices", p), p + ".vertices");
    if (e.contains("weight")) {
      entry.weight = finite_at(e["weight"], p + ".weight");
      if (!(entry.weight > 0))
        throw parse_error(p + ".weight: must be positive");
    }
    if (e.contains("birth")) entry.birth = finite_at(e["birth"], p + ".birth");
    entries.push_back(std::move(entry));
  }
  try {
    WeightedComplex c = WeightedComplex::from_entries(entries);
    c.validate();
    return c;
  } catch (const invariant_error& err) {
    throw parse_error(path + ": " + err.what());
  }
}

inline std::map<int, Matrix> parse_gram_overrides(const json& j,
                                                  const std::string& path) {
  if (!j.is_object())
    throw parse_error(path + ": expected an object keyed by degree");
  std::map<int, Matrix> out;
  for (const auto& [key, value] : j.items()) {
    int degree = -1;
    const auto res =
        std::from_chars(key.data(), key.data() + key.size(), degree);
    if (res.ec != std::errc{} || res.ptr != key.data() + key.size() ||
        degree < 0)
      throw parse_error(path + ": degree keys must be nonnegative integers, "
                        "got '" + key + "'");
    out[degree] = parse_matrix(value, path + "." + key);
  }
  return out;
}

inline Cosheaf parse_cosheaf(const json& j, const WeightedComplex& base,
                             const std::string& path) {
  std::map<Simplex, Index> dims;
  std::map<Simplex, Matrix> grams;
  std::map<std::pair<Simplex, Simplex>, Matrix> restrictions;
  const json& stalks = require(j, "stalks", path);
  if (!stalks.is_array())
    throw parse_error(path + ".stalks: expected an array");
  for (std::size_t i = 0; i < stalks.size(); ++i) {
    const std::string p = path + ".stalks[" + std::to_string(i) + "]";
    const json& st = stalks[i];
    const Simplex s = parse_simplex(require(st, "vertices", p), p + ".vertices");
    const double dim = number_at(require(st, "dim", p), p + ".dim");
    if (dim < 0 || dim != static_cast<Index>(dim))
      throw parse_error(p + ".dim: must be a nonnegative integer");
    dims[s] = static_cast<Index>(dim);
    if (st.contains("gram")) grams[s] = parse_matrix(st["gram"], p + ".gram");
  }
  const json& maps = require(j, "maps", path);
  if (!maps.is_array()) throw parse_error(path + ".maps: expected an array");
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const std::string p = path + ".maps[" + std::to_string(i) + "]";
    const json& mp = maps[i];
    const Simplex from =
        parse_simplex(require(mp, "from", p), p + ".from");
    const Simplex to = parse_simplex(require(mp, "to", p), p + ".to");
    restrictions[{to, from}] =
        parse_matrix(require(mp, "matrix", p), p + ".matrix");
  }
  try {
    return Cosheaf(base, dims, grams, restrictions);
  } catch (const invariant_error& err) {
    throw parse_error(path + ": " + err.what());
  }
}

inline ChainComplexRep parse_chains(const json& j, const std::string& path) {
  ChainComplexRep rep;
  const json& dims = require(j, "dims", path);
  if (!dims.is_array() || dims.empty())
    throw parse_error(path + ".dims: expected a nonempty array");
  for (std::size_t k = 0; k < dims.size(); ++k) {
    const double d =
        number_at(dims[k], path + ".dims[" + std::to_string(k) + "]");
    if (d < 0 || d != static_cast<Index>(d))
      throw parse_error(path + ".dims: entries must be nonnegative integers");
    rep.dims.push_back(static_cast<Index>(d));
  }
  const json& bd = require(j, "boundaries", path);
  if (!bd.is_array() || bd.size() != dims.size())
    throw parse_error(path + ".boundaries: expected one matrix per degree");
  for (std::size_t k = 0; k < bd.size(); ++k)
    rep.boundary.push_back(
        parse_matrix(bd[k], path + ".boundaries[" + std::to_string(k) + "]"));
  if (j.contains("grams")) {
    const json& gr = j["grams"];
    if (!gr.is_array() || gr.size() != dims.size())
      throw parse_error(path + ".grams: expected one matrix per degree");
    for (std::size_t k = 0; k < gr.size(); ++k)
      rep.gram.emplace_back(
          parse_matrix(gr[k], path + ".grams[" + std::to_string(k) + "]"));
  } else {
    for (Index d : rep.dims) rep.gram.push_back(InnerProduct::identity(d));
  }
  try {
    rep.validate();
  } catch (const invariant_error& err) {
    throw parse_error(path + ": " + err.what());
  }
  return rep;
}

// A sub-document: a complex given either simplicially (with optional gram
// overrides) or as raw chain data.
struct SubDocument {
  std::optional<WeightedComplex> simplicial;
  std::map<int, Matrix> gram_override;
  std::optional<ChainComplexRep> chains;

  ChainComplexRep rep() const {
    if (chains) return *chains;
    if (simplicial) return assemble(*simplicial, gram_override);
    throw parse_error("empty sub-document");
  }
};

inline SubDocument parse_subdocument(const json& j, const std::string& path) {
  SubDocument sub;
  if (!j.is_object()) throw parse_error(path + ": expected an object");
  if (j.contains("chains")) {
    if (j.contains("simplices"))
      throw parse_error(path + ": 'chains' and 'simplices' are exclusive");
    sub.chains = parse_chains(j["chains"], path + ".chains");
    return sub;
  }
  sub.simplicial =
      parse_complex(require(j, "simplices", path), path + ".simplices");
  if (j.contains("gram"))
    sub.gram_override = parse_gram_overrides(j["gram"], path + ".gram");
  return sub;
}

inline std::vector<Matrix> parse_inclusion_maps(const json& j,
                                                const std::string& path) {
  if (!j.is_array())
    throw parse_error(path + ": expected an array of matrices");
  std::vector<Matrix> maps;
  for (std::size_t k = 0; k < j.size(); ++k)
    maps.push_back(parse_matrix(j[k], path + "[" + std::to_string(k) + "]"));
  return maps;
}

struct PairSection {
  std::optional<double> s, t;
  std::optional<SubDocument> K, L;
  std::optional<std::vector<Matrix>> j;  // explicit inclusion (chains pairs)
};

struct TripleSection {
  std::optional<std::array<double, 3>> thresholds;
  std::optional<SubDocument> p1, p2, p3;
  std::optional<std::vector<Matrix>> j12, j23;
};

struct InputDocument {
  std::optional<WeightedComplex> complex;  // top-level simplices
  std::map<int, Matrix> gram_override;
  std::optional<Cosheaf> cosheaf;
  std::optional<PairSection> pair;
  std::optional<TripleSection> triple;

  Filtration filtration() const {
    if (!complex) throw parse_error("document has no top-level simplices");
    Filtration f{*complex};
    f.validate();
    return f;
  }
};

inline PairSection parse_pair_section(const json& j, const std::string& path) {
  PairSection sec;
  if (!j.is_object()) throw parse_error(path + ": expected an object");
  const bool has_docs = j.contains("K") || j.contains("L");
  const bool has_thresholds = j.contains("s") || j.contains("t");
  if (has_docs && has_thresholds)
    throw parse_error(path + ": give either {s,t} or {K,L}, not both");
  if (has_docs) {
    sec.K = parse_subdocument(require(j, "K", path), path + ".K");
    sec.L = parse_subdocument(require(j, "L", path), path + ".L");
    if (j.contains("J"))
      sec.j = parse_inclusion_maps(j["J"], path + ".J");
    return sec;
  }
  if (!has_thresholds)
    throw parse_error(path + ": expected {s,t} or {K,L}");
  sec.s = finite_at(require(j, "s", path), path + ".s");
  sec.t = finite_at(require(j, "t", path), path + ".t");
  return sec;
}

inline TripleSection parse_triple_section(const json& j,
                                          const std::string& path) {
  TripleSection sec;
  if (!j.is_object()) throw parse_error(path + ": expected an object");
  const bool has_docs =
      j.contains("P1") || j.contains("P2") || j.contains("P3");
  if (has_docs && j.contains("thresholds"))
    throw parse_error(path + ": give either thresholds or {P1,P2,P3}");
  if (has_docs) {
    sec.p1 = parse_subdocument(require(j, "P1", path), path + ".P1");
    sec.p2 = parse_subdocument(require(j, "P2", path), path + ".P2");
    sec.p3 = parse_subdocument(require(j, "P3", path), path + ".P3");
    if (j.contains("J12"))
      sec.j12 = parse_inclusion_maps(j["J12"], path + ".J12");
    if (j.contains("J23"))
      sec.j23 = parse_inclusion_maps(j["J23"], path + ".J23");
    return sec;
  }
  const json& th = require(j, "thresholds", path);
  if (!th.is_array() || th.size() != 3)
    throw parse_error(path + ".thresholds: expected three numbers");
  std::array<double, 3> ts;
  for (int i = 0; i < 3; ++i)
    ts[i] = finite_at(th[i], path + ".thresholds[" + std::to_string(i) + "]");
  if (!(ts[0] <= ts[1] && ts[1] <= ts[2]))
    throw parse_error(path + ".thresholds: must be nondecreasing");
  sec.thresholds = ts;
  return sec;
}

inline InputDocument parse_input(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw parse_error(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw parse_error("top level: expected an object");
  InputDocument doc;
  if (j.contains("simplices"))
    doc.complex = parse_complex(j["simplices"], "simplices");
  if (j.contains("gram"))
    doc.gram_override = parse_gram_overrides(j["gram"], "gram");
  if (j.contains("cosheaf")) {
    if (!doc.complex)
      throw parse_error("cosheaf: needs top-level simplices as its base");
    doc.cosheaf = parse_cosheaf(j["cosheaf"], *doc.complex, "cosheaf");
  }
  if (j.contains("pair")) doc.pair = parse_pair_section(j["pair"], "pair");
  if (j.contains("triple"))
    doc.triple = parse_triple_section(j["triple"], "triple");
  if (!doc.complex && !doc.pair && !doc.triple)
    throw parse_error("document defines no complex, pair, or triple");
  return doc;
}

inline InputDocument load_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_input(buf.str());
}

// ---------------------------------------------------------------------------
// canonical emission

inline json complex_to_json(const WeightedComplex& c) {
  json arr = json::array();
  for (const auto& e : c.all_entries()) {
    json entry;
    entry["vertices"] = e.s.v;
    entry["weight"] = e.weight;
    entry["birth"] = e.birth;
    arr.push_back(std::move(entry));
  }
  return arr;
}

inline json gram_overrides_to_json(const std::map<int, Matrix>& g) {
  json obj = json::object();
  for (const auto& [degree, m] : g)
    obj[std::to_string(degree)] = matrix_to_json(m);
  return obj;
}

inline json chains_to_json(const ChainComplexRep& rep) {
  json obj;
  obj["dims"] = rep.dims;
  json bd = json::array();
  for (int k = 0; k <= rep.max_degree(); ++k)
    bd.push_back(matrix_to_json(rep.d(k)));
  obj["boundaries"] = std::move(bd);
  json gr = json::array();
  for (int k = 0; k <= rep.max_degree(); ++k)
    gr.push_back(matrix_to_json(rep.W(k).gram()));
  obj["grams"] = std::move(gr);
  return obj;
}

inline json subdocument_to_json(const SubDocument& sub) {
  json obj;
  if (sub.chains) {
    obj["chains"] = chains_to_json(*sub.chains);
    return obj;
  }
  obj["simplices"] = complex_to_json(*sub.simplicial);
  if (!sub.gram_override.empty())
    obj["gram"] = gram_overrides_to_json(sub.gram_override);
  return obj;
}

inline json cosheaf_to_json(const Cosheaf& f) {
  json obj;
  json stalks = json::array();
  const WeightedComplex& base = f.base();
  for (int k = 0; k <= base.max_dim(); ++k)
    for (Index i = 0; i < base.count(k); ++i) {
      json st;
      st["vertices"] = base.simplex(k, i).v;
      st["dim"] = f.stalk_dim(k, i);
      if (!f.stalk_gram(k, i).is_identity())
        st["gram"] = matrix_to_json(f.stalk_gram(k, i).gram());
      stalks.push_back(std::move(st));
    }
  obj["stalks"] = std::move(stalks);
  json maps = json::array();
  for (int k = 1; k <= base.max_dim(); ++k)
    for (Index i = 0; i < base.count(k); ++i)
      for (int ell = 0; ell <= k; ++ell) {
        json mp;
        mp["from"] = base.simplex(k, i).v;
        mp["to"] = base.simplex(k, i).facet(ell).v;
        mp["matrix"] = matrix_to_json(f.restriction(k, i, ell));
        maps.push_back(std::move(mp));
      }
  obj["maps"] = std::move(maps);
  return obj;
}

inline json inclusion_maps_to_json(const std::vector<Matrix>& maps) {
  json arr = json::array();
  for (const Matrix& m : maps) arr.push_back(matrix_to_json(m));
  return arr;
}

inline json input_to_json(const InputDocument& doc) {
  json obj = json::object();
  if (doc.complex) obj["simplices"] = complex_to_json(*doc.complex);
  if (!doc.gram_override.empty())
    obj["gram"] = gram_overrides_to_json(doc.gram_override);
  if (doc.cosheaf) obj["cosheaf"] = cosheaf_to_json(*doc.cosheaf);
  if (doc.pair) {
    json p = json::object();
    if (doc.pair->K) {
      p["K"] = subdocument_to_json(*doc.pair->K);
      p["L"] = subdocument_to_json(*doc.pair->L);
      if (doc.pair->j) p["J"] = inclusion_maps_to_json(*doc.pair->j);
    } else {
      p["s"] = *doc.pair->s;
      p["t"] = *doc.pair->t;
    }
    obj["pair"] = std::move(p);
  }
  if (doc.triple) {
    json t = json::object();
    if (doc.triple->p1) {
      t["P1"] = subdocument_to_json(*doc.triple->p1);
      t["P2"] = subdocument_to_json(*doc.triple->p2);
      t["P3"] = subdocument_to_json(*doc.triple->p3);
      if (doc.triple->j12) t["J12"] = inclusion_maps_to_json(*doc.triple->j12);
      if (doc.triple->j23) t["J23"] = inclusion_maps_to_json(*doc.triple->j23);
    } else {
      t["thresholds"] = *doc.triple->thresholds;
    }
    obj["triple"] = std::move(t);
  }
  return obj;
}

inline std::string dump_canonical(const json& j) { return j.dump(2) + "\n"; }

// Instance file for a flagged counterexample: the generating filtration
// plus the three thresholds. Violation details belong to the report, not
// the instance file, so that instances round-trip.
inline json instance_to_json(const SearchInstance& inst) {
  InputDocument doc;
  doc.complex = inst.filtration.complex;
  TripleSection sec;
  sec.thresholds = {inst.t1, inst.t2, inst.t3};
  doc.triple = sec;
  return input_to_json(doc);
}

// ---------------------------------------------------------------------------
// resolution of pairs and triples from a document

namespace detail {

// Derive the inclusion for two chain complexes given explicitly: use the
// supplied maps if any; otherwise require matching dimensions degree by
// degree and use identities (higher degrees of L fall back to zero maps).
inline InclusionRep derived_inclusion(const ChainComplexRep& K,
                                      const ChainComplexRep& L,
                                      const std::optional<std::vector<Matrix>>&
                                          maps,
                                      const std::string& what) {
  InclusionRep incl;
  if (maps) {
    incl.maps = *maps;
  } else {
    for (int k = 0; k <= K.max_degree(); ++k) {
      if (K.dim(k) != L.dim(k))
        throw parse_error(what +
                          ": dimensions differ, an explicit inclusion matrix "
                          "list is required");
      incl.maps.push_back(Matrix::Identity(L.dim(k), K.dim(k)));
    }
  }
  try {
    incl.validate(K, L);
  } catch (const invariant_error& err) {
    throw parse_error(what + ": " + err.what());
  }
  return incl;
}

}  // namespace detail

// Build the persistent pair a document describes. Precedence: explicit
// pair section, then pair thresholds, then command-line thresholds applied
// to the top-level filtration, then a cosheaf (K = L), then the top-level
// complex alone (K = L).
struct ResolvedPair {
  PersistentPair pair;
  std::optional<double> s, t;  // set when the pair came from thresholds
};

inline ResolvedPair resolve_pair(const InputDocument& doc,
                                 std::optional<double> s_flag = {},
                                 std::optional<double> t_flag = {}) {
  ResolvedPair out;
  if (doc.pair && doc.pair->K) {
    const SubDocument& kd = *doc.pair->K;
    const SubDocument& ld = *doc.pair->L;
    if (kd.simplicial && ld.simplicial && !doc.pair->j) {
      out.pair = make_pair_rep(*kd.simplicial, *ld.simplicial);
    } else {
      out.pair.K = kd.rep();
      out.pair.L = ld.rep();
      out.pair.incl = detail::derived_inclusion(out.pair.K, out.pair.L,
                                                doc.pair->j, "pair");
    }
    return out;
  }
  std::optional<double> s = s_flag, t = t_flag;
  if (doc.pair && doc.pair->s) {
    s = doc.pair->s;
    t = doc.pair->t;
  }
  if (s || t) {
    if (!s || !t) throw parse_error("pair thresholds: need both s and t");
    if (*s > *t) throw parse_error("pair thresholds: need s <= t");
    const Filtration f = doc.filtration();
    const WeightedComplex ks = sublevel(f, *s);
    const WeightedComplex ls = sublevel(f, *t);
    out.pair = make_pair_rep(ks, ls);
    out.s = s;
    out.t = t;
    return out;
  }
  if (doc.cosheaf) {
    const ChainComplexRep rep = cosheaf_assemble(*doc.cosheaf);
    InclusionRep incl;
    for (int k = 0; k <= rep.max_degree(); ++k)
      incl.maps.push_back(Matrix::Identity(rep.dim(k), rep.dim(k)));
    out.pair = PersistentPair{rep, rep, incl};
    return out;
  }
  if (doc.complex) {
    const ChainComplexRep rep = assemble(*doc.complex, doc.gram_override);
    InclusionRep incl;
    for (int k = 0; k <= rep.max_degree(); ++k)
      incl.maps.push_back(Matrix::Identity(rep.dim(k), rep.dim(k)));
    out.pair = PersistentPair{rep, rep, incl};
    return out;
  }
  throw parse_error("document does not describe a pair");
}

inline FiltrationTriple resolve_triple(const InputDocument& doc) {
  if (doc.triple && doc.triple->p1) {
    const SubDocument& d1 = *doc.triple->p1;
    const SubDocument& d2 = *doc.triple->p2;
    const SubDocument& d3 = *doc.triple->p3;
    if (d1.simplicial && d2.simplicial && d3.simplicial && !doc.triple->j12 &&
        !doc.triple->j23) {
      try {
        return nested_triple(*d1.simplicial, *d2.simplicial, *d3.simplicial);
      } catch (const invariant_error& err) {
        throw parse_error(std::string("triple: ") + err.what());
      }
    }
    FiltrationTriple t;
    t.c1 = d1.rep();
    t.c2 = d2.rep();
    t.c3 = d3.rep();
    t.j12 = detail::derived_inclusion(t.c1, t.c2, doc.triple->j12,
                                      "triple 1->2");
    t.j23 = detail::derived_inclusion(t.c2, t.c3, doc.triple->j23,
                                      "triple 2->3");
    return t;
  }
  if (doc.triple && doc.triple->thresholds) {
    const auto& ts = *doc.triple->thresholds;
    return sublevel_triple(doc.filtration(), ts[0], ts[1], ts[2]);
  }
  throw parse_error("document does not describe a triple");
}

// The two filtrations a stability audit compares: the pair section's K and
// L sub-documents, read as filtrations via their birth values.
inline std::pair<Filtration, Filtration> resolve_filtration_pair(
    const InputDocument& doc) {
  if (!doc.pair || !doc.pair->K || !doc.pair->K->simplicial ||
      !doc.pair->L->simplicial)
    throw parse_error(
        "stability needs a pair section with two simplicial sub-documents");
  Filtration f{*doc.pair->K->simplicial};
  Filtration g{*doc.pair->L->simplicial};
  f.validate();
  g.validate();
  return {f, g};
}

// ---------------------------------------------------------------------------
// CSV report document

struct ReportRow {
  std::string record;  // eigenvalue | value | audit
  std::optional<int> k;
  std::optional<Kind> kind;
  std::optional<int> q;
  std::optional<double> s, t;
  std::optional<double> value;
  std::string status;  // pass | fail | flag | (empty)
  std::string reason;  // machine-readable code
};

inline int kind_order(Kind k) {
  switch (k) {
    case Kind::up: return 0;
    case Kind::down: return 1;
    case Kind::full: return 2;
  }
  return 3;
}

// Deterministic report order: by degree, then kind (up, down, full), then
// q, then (s, t) lexicographic; ties keep generation order.
inline void canonical_report_order(std::vector<ReportRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ReportRow& a, const ReportRow& b) {
                     const auto key = [](const ReportRow& r) {
                       return std::make_tuple(
                           r.k.value_or(-1),
                           r.kind ? kind_order(*r.kind) : -1,
                           r.q.value_or(-1), r.s.value_or(-kInf),
                           r.t.value_or(-kInf));
                     };
                     return key(a) < key(b);
                   });
}

inline std::string render_csv(const std::vector<ReportRow>& rows) {
  std::string out = "record,k,kind,q,s,t,value,status,reason\n";
  for (const ReportRow& r : rows) {
    out += r.record;
    out += ',';
    if (r.k) out += std::to_string(*r.k);
    out += ',';
    if (r.kind) out += to_string(*r.kind);
    out += ',';
    if (r.q) out += std::to_string(*r.q);
    out += ',';
    if (r.s) out += format_double(*r.s);
    out += ',';
    if (r.t) out += format_double(*r.t);
    out += ',';
    if (r.value) out += format_double(*r.value);
    out += ',';
    out += r.status;
    out += ',';
    out += r.reason;
    out += '\n';
  }
  return out;
}

}  // namespace io
}  // namespace perla
