#include "rigidkit/documents.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace rigidkit {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw DocumentError(where, what); }

const Json& field(const Json& j, const char* name, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(name);
  if (it == j.end()) fail(where, std::string("missing field '") + name + "'");
  return *it;
}

const Json* optional_field(const Json& j, const char* name) {
  auto it = j.find(name);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

const Json& array_field(const Json& j, const char* name, const std::string& where) {
  const Json& a = field(j, name, where);
  if (!a.is_array()) fail(where + "." + name, "expected an array");
  return a;
}

std::string at(const std::string& where, const char* name, std::size_t i) {
  return where + "." + name + "[" + std::to_string(i) + "]";
}

Rational rational_of(const Json& j, const std::string& where) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
  } catch (const std::exception& e) {
    fail(where, e.what());
  }
  fail(where, "expected a rational (string like \"1/3\" or an integer)");
}

long integer_of(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<long>();
}

double real_of(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

std::string string_of(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

void check_kind(const Json& j, DocumentKind kind) {
  if (const Json* k = optional_field(j, "kind")) {
    std::string name = string_of(*k, "kind");
    if (name != to_string(kind)) fail("kind", "document is a '" + name + "', expected '" + to_string(kind) + "'");
  }
}

BaseField field_of(const Json& j) {
  const Json* f = optional_field(j, "base_field");
  if (!f) return BaseField::Qmodel;
  try {
    return parse_base_field(string_of(*f, "base_field"));
  } catch (const DocumentError&) {
    throw;
  } catch (const std::exception& e) {
    fail("base_field", e.what());
  }
}

NovikovScalar scalar_of(BaseField f, const Json& j, const std::string& where) {
  try {
    if (j.is_number_integer()) return NovikovScalar::constant(f, Rational(j.get<long>()));
    return parse_scalar(f, string_of(j, where));
  } catch (const DocumentError&) {
    throw;
  } catch (const std::exception& e) {
    fail(where, e.what());
  }
}

/// Index of a label (string) or a raw index (integer).
template <class Find>
std::size_t reference(const Json& j, std::size_t size, Find&& find, const std::string& where) {
  if (j.is_number_integer()) {
    long i = j.get<long>();
    if (i < 0 || static_cast<std::size_t>(i) >= size) fail(where, "index out of range");
    return static_cast<std::size_t>(i);
  }
  std::string label = string_of(j, where);
  auto idx = find(label);
  if (!idx) fail(where, "unknown label '" + label + "'");
  return *idx;
}

Json point_json(const RationalPoint& p) {
  Json a = Json::array();
  for (const auto& x : p) a.push_back(to_string(x));
  return a;
}

RationalPoint point_of(const Json& j, std::size_t dim, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of rationals");
  if (dim && j.size() != dim) fail(where, "expected " + std::to_string(dim) + " coordinates");
  RationalPoint p;
  for (std::size_t i = 0; i < j.size(); ++i) p.push_back(rational_of(j[i], where + "[" + std::to_string(i) + "]"));
  return p;
}

std::vector<RationalPoint> points_of(const Json& j, const char* name, std::size_t dim, const std::string& where) {
  const Json& a = array_field(j, name, where);
  std::vector<RationalPoint> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(point_of(a[i], dim, at(where, name, i)));
  return out;
}

Json matrix_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

/// Nested rows, or a flat row-major list.
Mat matrix_of(const Json& j, Eigen::Index rows, Eigen::Index cols, const std::string& where) {
  if (!j.is_array()) fail(where, "expected a matrix");
  Mat m(rows, cols);
  const bool flat = !j.empty() && j[0].is_number();
  if (flat) {
    if (j.size() != static_cast<std::size_t>(rows * cols)) fail(where, "expected " + std::to_string(rows * cols) + " entries");
    for (Eigen::Index i = 0; i < rows * cols; ++i) m(i / cols, i % cols) = real_of(j[i], where);
    return m;
  }
  if (j.size() != static_cast<std::size_t>(rows)) fail(where, "expected " + std::to_string(rows) + " rows");
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[r];
    const std::string rw = where + "[" + std::to_string(r) + "]";
    if (!row.is_array() || row.size() != static_cast<std::size_t>(cols)) fail(rw, "expected " + std::to_string(cols) + " entries");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = real_of(row[c], rw);
  }
  return m;
}

std::size_t dimension_of(const Json& j) {
  long d = integer_of(field(j, "dimension", ""), "dimension");
  if (d < 1) fail("dimension", "must be positive");
  return static_cast<std::size_t>(d);
}

void flatten(const Json& j, const std::string& prefix, std::vector<std::string>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(*it, prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array() && std::any_of(j.begin(), j.end(), [](const Json& x) { return x.is_structured(); })) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out.push_back(prefix + ": " + (j.is_string() ? j.get<std::string>() : j.dump()));
  }
}

}  // namespace

std::string to_string(DocumentKind kind) {
  switch (kind) {
    case DocumentKind::Ring: return "ring";
    case DocumentKind::Complex: return "complex";
    case DocumentKind::Path: return "path";
    case DocumentKind::Frame: return "frame";
    case DocumentKind::Polytope: return "polytope";
    case DocumentKind::Body: return "body";
    case DocumentKind::PLFunction: return "pl-function";
    case DocumentKind::MomentData: return "moment-data";
  }
  return "unknown";
}

DocumentKind parse_document_kind(std::string_view name) {
  for (auto k : {DocumentKind::Ring, DocumentKind::Complex, DocumentKind::Path, DocumentKind::Frame,
                 DocumentKind::Polytope, DocumentKind::Body, DocumentKind::PLFunction, DocumentKind::MomentData}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown document kind '" + std::string(name) + "'");
}

Json parse_json_text(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // Byte offset to line and column.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    fail("line " + std::to_string(line) + ", column " + std::to_string(col), "syntax error");
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_json_text(buf.str());
  } catch (const DocumentError& e) {
    fail(path + ", " + e.where(), "syntax error");
  }
}

std::string serialize(const Json& j) { return j.dump(2) + "\n"; }

// ------------------------------------------------------------------ ring

QuantumAlgebra ring_from_json(const Json& j) {
  check_kind(j, DocumentKind::Ring);
  const BaseField f = field_of(j);
  GradedBasis basis;
  basis.dimension_2n = static_cast<int>(integer_of(field(j, "dimension_2n", ""), "dimension_2n"));
  const Json& classes = array_field(j, "classes", "");
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const std::string w = at("", "classes", i);
    basis.classes.push_back({string_of(field(classes[i], "label", w), w + ".label"),
                             static_cast<int>(integer_of(field(classes[i], "degree", w), w + ".degree"))});
  }
  auto find = [&](const std::string& l) { return basis.find(l); };
  basis.unity = reference(field(j, "unity", ""), basis.size(), find, "unity");
  basis.point = reference(field(j, "point", ""), basis.size(), find, "point");
  PeriodGroup gamma(rational_of(field(j, "gamma_generator", ""), "gamma_generator"));
  std::optional<Rational> kappa;
  if (const Json* k = optional_field(j, "kappa")) kappa = rational_of(*k, "kappa");

  std::vector<QuantumAlgebra::Entry> entries;
  const Json& table = array_field(j, "table", "");
  for (std::size_t e = 0; e < table.size(); ++e) {
    const std::string w = at("", "table", e);
    QuantumAlgebra::Entry entry;
    entry.i = reference(field(table[e], "i", w), basis.size(), find, w + ".i");
    entry.j = reference(field(table[e], "j", w), basis.size(), find, w + ".j");
    entry.product = QHElement::zero(f, basis.size());
    const Json& terms = array_field(table[e], "terms", w);
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const std::string tw = at(w, "terms", t);
      std::size_t k = reference(field(terms[t], "k", tw), basis.size(), find, tw + ".k");
      int qpow = static_cast<int>(integer_of(field(terms[t], "qpow", tw), tw + ".qpow"));
      entry.product.coeffs[k].add_term(qpow, scalar_of(f, field(terms[t], "scalar", tw), tw + ".scalar"));
    }
    entries.push_back(std::move(entry));
  }
  std::optional<QuantumAlgebra> alg;
  try {
    alg.emplace(f, basis, gamma, entries, kappa);
  } catch (const std::exception& e) {
    fail("ring", e.what());
  }
  auto bad = check_axioms(*alg);
  if (!bad.empty()) fail("invariant " + bad.front().axiom, bad.front().detail);
  return *alg;
}

Json to_json(const QuantumAlgebra& alg) {
  const auto& b = alg.basis();
  Json j;
  j["kind"] = "ring";
  j["base_field"] = to_string(alg.field());
  j["dimension_2n"] = b.dimension_2n;
  j["gamma_generator"] = to_string(alg.gamma().generator());
  j["kappa"] = alg.kappa() ? Json(to_string(*alg.kappa())) : Json(nullptr);
  j["classes"] = Json::array();
  for (const auto& c : b.classes) j["classes"].push_back({{"label", c.label}, {"degree", c.degree}});
  j["unity"] = b.classes[b.unity].label;
  j["point"] = b.classes[b.point].label;
  j["table"] = Json::array();
  for (const auto& e : alg.entries()) {
    Json terms = Json::array();
    for (std::size_t k = 0; k < e.product.coeffs.size(); ++k) {
      for (const auto& [qpow, c] : e.product.coeffs[k].terms()) {
        terms.push_back({{"k", b.classes[k].label}, {"qpow", qpow}, {"scalar", to_string(c)}});
      }
    }
    j["table"].push_back({{"i", b.classes[e.i].label}, {"j", b.classes[e.j].label}, {"terms", terms}});
  }
  return j;
}

// --------------------------------------------------------------- complex

DecoratedComplex complex_from_json(const Json& j) {
  check_kind(j, DocumentKind::Complex);
  const BaseField f = field_of(j);
  PeriodGroup gamma(rational_of(field(j, "gamma_generator", ""), "gamma_generator"));
  std::vector<ChainBasisElement> basis;
  const Json& b = array_field(j, "basis", "");
  for (std::size_t i = 0; i < b.size(); ++i) {
    const std::string w = at("", "basis", i);
    long parity = integer_of(field(b[i], "parity", w), w + ".parity");
    if (parity != 0 && parity != 1) fail(w + ".parity", "must be 0 or 1");
    basis.push_back({string_of(field(b[i], "label", w), w + ".label"), static_cast<int>(parity),
                     rational_of(field(b[i], "filter", w), w + ".filter")});
  }
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t k = i + 1; k < basis.size(); ++k) {
      if (basis[i].label == basis[k].label) fail(at("", "basis", k), "duplicate label '" + basis[k].label + "'");
    }
  }
  auto find = [&](const std::string& l) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (basis[i].label == l) return i;
    }
    return std::nullopt;
  };
  ExactMatrix<NovikovScalar> d(basis.size(), basis.size(), NovikovScalar::zero(f));
  if (const Json* diff = optional_field(j, "differential")) {
    if (!diff->is_array()) fail("differential", "expected an array");
    for (std::size_t e = 0; e < diff->size(); ++e) {
      const std::string w = at("", "differential", e);
      std::size_t from = reference(field((*diff)[e], "from", w), basis.size(), find, w + ".from");
      std::size_t to = reference(field((*diff)[e], "to", w), basis.size(), find, w + ".to");
      d(to, from) += scalar_of(f, field((*diff)[e], "scalar", w), w + ".scalar");
    }
  }
  std::optional<DecoratedComplex> v;
  try {
    v.emplace(f, gamma, basis, d);
  } catch (const std::exception& e) {
    fail("complex", e.what());
  }
  auto bad = validate(*v);
  if (!bad.empty()) fail("invariant " + bad.front().check + " at basis vector '" + bad.front().basis_label + "'", bad.front().detail);
  return *v;
}

Json to_json(const DecoratedComplex& v) {
  Json j;
  j["kind"] = "complex";
  j["base_field"] = to_string(v.field());
  j["gamma_generator"] = to_string(v.gamma().generator());
  j["basis"] = Json::array();
  for (const auto& b : v.basis()) j["basis"].push_back({{"label", b.label}, {"parity", b.parity}, {"filter", to_string(b.filter)}});
  j["differential"] = Json::array();
  for (std::size_t from = 0; from < v.dim(); ++from) {
    for (std::size_t to = 0; to < v.dim(); ++to) {
      const auto& c = v.differential()(to, from);
      if (c.is_zero()) continue;
      j["differential"].push_back({{"from", v.basis()[from].label}, {"to", v.basis()[to].label}, {"scalar", to_string(c)}});
    }
  }
  return j;
}

// ------------------------------------------------------------ path/frame

MatrixPath path_from_json(const Json& j) {
  check_kind(j, DocumentKind::Path);
  MatrixPath p;
  long k = integer_of(field(j, "k", ""), "k");
  if (k < 1) fail("k", "must be positive");
  p.k = static_cast<int>(k);
  const Json& segs = array_field(j, "segments", "");
  for (std::size_t s = 0; s < segs.size(); ++s) {
    const std::string w = at("", "segments", s);
    PathSegment seg;
    seg.generator = matrix_of(field(segs[s], "generator", w), 2 * k, 2 * k, w + ".generator");
    seg.duration = real_of(field(segs[s], "duration", w), w + ".duration");
    p.segments.push_back(std::move(seg));
  }
  try {
    check_path(p);
  } catch (const std::exception& e) {
    fail("invariant path", e.what());
  }
  return p;
}

Json to_json(const MatrixPath& path) {
  Json j;
  j["kind"] = "path";
  j["k"] = path.k;
  j["segments"] = Json::array();
  for (const auto& s : path.segments) {
    Json flat = Json::array();
    for (Eigen::Index r = 0; r < s.generator.rows(); ++r) {
      for (Eigen::Index c = 0; c < s.generator.cols(); ++c) flat.push_back(s.generator(r, c));
    }
    j["segments"].push_back({{"generator", flat}, {"duration", s.duration}});
  }
  return j;
}

LagrangianFrame frame_from_json(const Json& j) {
  check_kind(j, DocumentKind::Frame);
  long k = integer_of(field(j, "k", ""), "k");
  if (k < 1) fail("k", "must be positive");
  LagrangianFrame v{matrix_of(field(j, "columns", ""), 2 * k, k, "columns")};
  try {
    check_lagrangian(v, standard_j(static_cast<int>(k)));
  } catch (const std::exception& e) {
    fail("invariant lagrangian", e.what());
  }
  return v;
}

Json to_json(const LagrangianFrame& frame) {
  return {{"kind", "frame"}, {"k", frame.k()}, {"columns", matrix_json(frame.columns)}};
}

// ----------------------------------------------------------------- toric

DelzantPolytope polytope_from_json(const Json& j) {
  if (const Json* k = optional_field(j, "kind")) {
    std::string name = string_of(*k, "kind");
    if (name != "polytope" && name != "moment-data") fail("kind", "document is a '" + name + "', expected 'polytope'");
  }
  const std::size_t dim = dimension_of(j);
  auto vs = points_of(j, "vertices", dim, "");
  try {
    return DelzantPolytope(vs);
  } catch (const std::exception& e) {
    fail("invariant polytope", e.what());
  }
}

Json to_json(const DelzantPolytope& p) {
  Json j;
  j["kind"] = "polytope";
  j["dimension"] = p.dimension();
  j["vertices"] = Json::array();
  for (const auto& v : p.vertices()) j["vertices"].push_back(point_json(v));
  return j;
}

MomentData moment_from_json(const Json& j) {
  MomentData m{polytope_from_json(j), std::nullopt, false};
  if (const Json* k = optional_field(j, "kappa")) {
    m.kappa = rational_of(*k, "kappa");
    if (*m.kappa <= 0) fail("kappa", "must be positive");
  }
  if (const Json* c = optional_field(j, "compressible")) {
    if (!c->is_boolean()) fail("compressible", "expected a boolean");
    m.compressible = c->get<bool>();
  }
  if (m.kappa) {
    try {
      special_point(m);
    } catch (const std::domain_error& e) {
      fail("invariant kappa-monotone", e.what());
    } catch (const std::exception& e) {
      fail("invariant special-point", e.what());
    }
  }
  return m;
}

Json to_json(const MomentData& m) {
  Json j = to_json(m.polytope);
  j["kind"] = "moment-data";
  j["kappa"] = m.kappa ? Json(to_string(*m.kappa)) : Json(nullptr);
  j["compressible"] = m.compressible;
  return j;
}

std::vector<ConvexBody> bodies_from_json(const Json& j) {
  check_kind(j, DocumentKind::Body);
  const std::size_t dim = dimension_of(j);
  std::vector<ConvexBody> out;
  if (const Json* many = optional_field(j, "bodies")) {
    if (!many->is_array() || many->empty()) fail("bodies", "expected a nonempty array");
    for (std::size_t i = 0; i < many->size(); ++i) {
      ConvexBody b{points_of((*many)[i], "generators", dim, at("", "bodies", i))};
      if (b.generators.empty()) fail(at("", "bodies", i), "no generators");
      out.push_back(std::move(b));
    }
    return out;
  }
  ConvexBody b{points_of(j, "generators", dim, "")};
  if (b.generators.empty()) fail("generators", "no generators");
  out.push_back(std::move(b));
  return out;
}

Json to_json(const std::vector<ConvexBody>& bodies) {
  Json j;
  j["kind"] = "body";
  j["dimension"] = bodies.empty() || bodies.front().generators.empty() ? 0 : bodies.front().generators.front().size();
  auto gens = [](const ConvexBody& b) {
    Json a = Json::array();
    for (const auto& g : b.generators) a.push_back(point_json(g));
    return a;
  };
  if (bodies.size() == 1) {
    j["generators"] = gens(bodies.front());
  } else {
    j["bodies"] = Json::array();
    for (const auto& b : bodies) j["bodies"].push_back({{"generators", gens(b)}});
  }
  return j;
}

PLFunction pl_from_json(const Json& j) {
  check_kind(j, DocumentKind::PLFunction);
  const std::size_t dim = dimension_of(j);
  PLFunction f;
  f.vertices = points_of(j, "vertices", dim, "");
  const Json& simplices = array_field(j, "simplices", "");
  for (std::size_t s = 0; s < simplices.size(); ++s) {
    const std::string w = at("", "simplices", s);
    if (!simplices[s].is_array()) fail(w, "expected an array of vertex indices");
    std::vector<std::size_t> idx;
    for (const auto& x : simplices[s]) {
      long i = integer_of(x, w);
      if (i < 0) fail(w, "negative vertex index");
      idx.push_back(static_cast<std::size_t>(i));
    }
    f.simplices.push_back(std::move(idx));
  }
  const Json& values = array_field(j, "values", "");
  for (std::size_t i = 0; i < values.size(); ++i) f.values.push_back(rational_of(values[i], at("", "values", i)));
  try {
    validate(f);
  } catch (const std::exception& e) {
    fail("invariant pl-function", e.what());
  }
  return f;
}

Json to_json(const PLFunction& f) {
  Json j;
  j["kind"] = "pl-function";
  j["dimension"] = f.vertices.empty() ? 0 : f.vertices.front().size();
  j["vertices"] = Json::array();
  for (const auto& v : f.vertices) j["vertices"].push_back(point_json(v));
  j["simplices"] = f.simplices;
  j["values"] = Json::array();
  for (const auto& v : f.values) j["values"].push_back(to_string(v));
  return j;
}

// -------------------------------------------------------------- generic

Document document_from_json(const Json& j, DocumentKind kind) {
  switch (kind) {
    case DocumentKind::Ring: return ring_from_json(j);
    case DocumentKind::Complex: return complex_from_json(j);
    case DocumentKind::Path: return path_from_json(j);
    case DocumentKind::Frame: return frame_from_json(j);
    case DocumentKind::Polytope: return polytope_from_json(j);
    case DocumentKind::Body: return bodies_from_json(j);
    case DocumentKind::PLFunction: return pl_from_json(j);
    case DocumentKind::MomentData: return moment_from_json(j);
  }
  throw std::logic_error("unreachable document kind");
}

Document load_document(const std::string& path, DocumentKind kind) {
  Json j = read_json_file(path);
  try {
    return document_from_json(j, kind);
  } catch (const DocumentError& e) {
    fail(path + (e.where().empty() ? "" : ", " + e.where()), std::string(e.what()).substr(e.where().empty() ? 0 : e.where().size() + 2));
  }
}

Json to_json(const Document& doc) {
  return std::visit([](const auto& x) { return to_json(x); }, doc);
}

// --------------------------------------------------------- chains, points

Chain parse_chain(const DecoratedComplex& v, std::string_view text) {
  Chain out = v.zero_chain();
  std::string s(text);
  std::size_t pos = 0;
  bool any = false;
  auto skip = [&] {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  };
  while (true) {
    skip();
    if (pos >= s.size()) break;
    bool negative = false;
    if (s[pos] == '+' || s[pos] == '-') {
      negative = s[pos] == '-';
      ++pos;
      skip();
    } else if (any) {
      throw std::invalid_argument("chain: expected '+' or '-' at position " + std::to_string(pos));
    }
    // Coefficient text runs up to the '[' at parenthesis depth 0.
    int depth = 0;
    std::size_t start = pos;
    while (pos < s.size() && !(depth == 0 && s[pos] == '[')) {
      if (s[pos] == '(') ++depth;
      if (s[pos] == ')') --depth;
      ++pos;
    }
    if (pos >= s.size()) throw std::invalid_argument("chain: expected '[label]'");
    std::string coeff = s.substr(start, pos - start);
    while (!coeff.empty() && std::isspace(static_cast<unsigned char>(coeff.back()))) coeff.pop_back();
    if (!coeff.empty() && coeff.back() == '*') coeff.pop_back();
    auto close = s.find(']', pos);
    if (close == std::string::npos) throw std::invalid_argument("chain: unterminated '['");
    std::string label = s.substr(pos + 1, close - pos - 1);
    pos = close + 1;
    auto idx = v.find(label);
    if (!idx) throw std::invalid_argument("chain: unknown basis label '" + label + "'");
    NovikovScalar c = coeff.empty() ? NovikovScalar::one(v.field()) : parse_scalar(v.field(), coeff);
    if (negative) c = -c;
    out[*idx] += c;
    any = true;
  }
  if (!any) throw std::invalid_argument("chain: empty expression");
  return out;
}

std::string to_string(const DecoratedComplex& v, const Chain& x) {
  std::string out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += "(" + to_string(x[i]) + ")*[" + v.basis()[i].label + "]";
  }
  return out.empty() ? "0" : out;
}

RationalPoint parse_point(std::string_view text) {
  RationalPoint p;
  std::string s(text);
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }), item.end());
    if (item.empty()) throw std::invalid_argument("point: empty coordinate");
    p.push_back(parse_rational(item));
  }
  if (p.empty()) throw std::invalid_argument("point: no coordinates");
  return p;
}

// ---------------------------------------------------------------- report

std::string to_string(Status s) {
  switch (s) {
    case Status::Ok: return "ok";
    case Status::Violation: return "violation";
    case Status::Error: return "error";
  }
  return "error";
}

Json Report::to_json() const {
  return {{"subcommand", subcommand},
          {"inputs_digest", inputs_digest},
          {"results", results},
          {"status", to_string(status)},
          {"timing", {{"seconds", seconds}}}};
}

std::string Report::text() const {
  std::vector<std::string> lines;
  flatten(results, "", lines);
  std::string out = subcommand + ": " + to_string(status) + "\n";
  for (const auto& l : lines) out += "  " + l + "\n";
  return out;
}

std::string digest(std::string_view data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace rigidkit
