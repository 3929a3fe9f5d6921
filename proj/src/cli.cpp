#include "rigidkit/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "rigidkit/documents.hpp"
#include "rigidkit/suites.hpp"

namespace rigidkit::cli {

namespace {

/// A failed precondition on the command line itself.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json rat(const Rational& x) { return to_string(x); }

Json point(const RationalPoint& p) {
  Json a = Json::array();
  for (const auto& x : p) a.push_back(to_string(x));
  return a;
}

Json index_json(const IndexResult& r) {
  Json crossings = Json::array();
  for (const auto& c : r.crossings) {
    crossings.push_back(
        {{"t", c.t}, {"kernel_dimension", c.kernel_dimension}, {"signature", c.signature}, {"at_endpoint", c.at_endpoint}});
  }
  return {{"halves", r.halves},
          {"value", r.value()},
          {"raw", r.raw},
          {"snap_residual", r.snap_residual},
          {"delta", r.delta},
          {"crossings", crossings}};
}

/// Everything an invocation reads, folded into the report digest.
class Inputs {
 public:
  /// Presentation and worker-count flags do not affect results.
  explicit Inputs(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--json") continue;
      if (args[i] == "--jobs") {
        ++i;
        continue;
      }
      if (args[i].rfind("--jobs=", 0) == 0) continue;
      data_ += args[i] + '\0';
    }
  }

  template <class T>
  T load(const std::string& path, DocumentKind kind) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    data_ += buf.str() + '\0';
    return std::get<T>(load_document(path, kind));
  }

  std::string digest() const { return rigidkit::digest(data_); }

 private:
  std::string data_;
};

constexpr const char* kBuiltin = "builtin:";

bool is_builtin(const std::string& s) { return s.rfind(kBuiltin, 0) == 0; }

MomentData builtin_moment(const std::string& name) {
  if (name == "quadric") return quadric_square();
  if (name.size() == 3 && name.rfind("cp", 0) == 0 && name[2] >= '1' && name[2] <= '9') return projective_space(name[2] - '0');
  if (name.size() == 7 && name.rfind("blowup", 0) == 0 && name[6] >= '1' && name[6] <= '3') {
    return blowup_projective_plane(name[6] - '0');
  }
  throw UsageError("unknown builtin moment data '" + name + "' (cpN, quadric, blowup1..3)");
}

struct Global {
  bool json = false;
  std::uint64_t seed = 1;
  int jobs = 1;
};

// ------------------------------------------------------------------ ring

struct RingArgs {
  std::string file, field = "Qmodel", kappa, idempotent, kunneth;
  std::vector<std::string> divide;
  bool check_axioms = false, semisimple = false;
};

QuantumAlgebra load_ring(const std::string& file, const RingArgs& a, Inputs& in) {
  if (is_builtin(file)) {
    std::optional<Rational> kappa;
    if (!a.kappa.empty()) kappa = parse_rational(a.kappa);
    return builtin_algebra(file.substr(std::string(kBuiltin).size()), parse_base_field(a.field), kappa);
  }
  return in.load<QuantumAlgebra>(file, DocumentKind::Ring);
}

Json violations_json(const std::vector<AxiomViolation>& bad) {
  Json v = Json::array();
  for (const auto& b : bad) v.push_back({{"axiom", b.axiom}, {"detail", b.detail}});
  return v;
}

void ring_cmd(const RingArgs& a, Inputs& in, Report& rep) {
  auto alg = load_ring(a.file, a, in);
  bool any = false;
  rep.results["rank"] = alg.rank();
  rep.results["base_field"] = to_string(alg.field());
  if (a.check_axioms) {
    any = true;
    auto bad = check_axioms(alg);
    rep.results["axioms"] = {{"ok", bad.empty()}, {"violations", violations_json(bad)}};
    if (!bad.empty()) rep.status = Status::Violation;
  }
  if (!a.idempotent.empty()) {
    any = true;
    auto x = parse_qh_element(alg, a.idempotent);
    rep.results["idempotent"] = {{"element", to_string(alg, x)}, {"square", to_string(alg, qprod(alg, x, x))},
                                 {"is_idempotent", is_idempotent(alg, x)}};
  }
  if (a.semisimple) {
    any = true;
    auto s = is_semisimple(alg);
    Json j{{"verdict", to_string(s.verdict)}, {"method", s.method}, {"detail", s.detail},
           {"field_summands", s.field_summands}};
    if (s.generator) j["generator"] = to_string(alg, *s.generator);
    if (s.power_constant) j["power_constant"] = to_string(*s.power_constant);
    if (s.nilpotent) j["nilpotent"] = to_string(alg, *s.nilpotent);
    rep.results["semisimple"] = j;
  }
  if (!a.divide.empty()) {
    any = true;
    auto c = parse_qh_element(alg, a.divide[0]);
    auto target = parse_qh_element(alg, a.divide[1]);
    auto x = divide(alg, c, target);
    Json j{{"divisor", to_string(alg, c)}, {"target", to_string(alg, target)}, {"found", x.has_value()}};
    if (x) {
      bool ok = qprod(alg, c, *x) == target;
      j["quotient"] = to_string(alg, *x);
      j["verified"] = ok;
      if (!ok) rep.status = Status::Violation;
    }
    rep.results["divide"] = j;
  }
  if (!a.kunneth.empty()) {
    any = true;
    auto other = load_ring(a.kunneth, a, in);
    auto prod = kunneth(alg, other);
    auto bad = check_axioms(prod);
    rep.results["kunneth"] = {{"algebra", to_json(prod)}, {"axioms_ok", bad.empty()}, {"violations", violations_json(bad)}};
    if (!bad.empty()) rep.status = Status::Violation;
  }
  if (!any) rep.results["document"] = to_json(alg);
}

// --------------------------------------------------------------- complex

struct ComplexArgs {
  std::string file, c_expr, tensor, eps = "1/1000";
  bool validate = false, spectral = false, verify_product = false;
  int trials = 4;
};

Json ext(const ExtRational& x) { return x.str(); }

Json interval_json(const Interval& i) { return {{"lower", ext(i.lower)}, {"upper", ext(i.upper)}}; }

void complex_cmd(const ComplexArgs& a, const Global& g, Inputs& in, Report& rep) {
  auto v = in.load<DecoratedComplex>(a.file, DocumentKind::Complex);
  const Rational eps = parse_rational(a.eps);
  if (eps <= 0) throw UsageError("--eps must be positive");
  bool any = false;
  rep.results["dim"] = v.dim();
  if (a.validate) {
    any = true;
    auto gap = filter_gap(v);
    rep.results["validate"] = {{"ok", validate(v).empty()}, {"generic", is_generic(v)},
                               {"filter_gap", gap ? rat(*gap) : Json(nullptr)}};
  }
  if (a.spectral) {
    any = true;
    if (!is_generic(v)) throw std::domain_error("the filter is not generic; rerun on a generic perturbation");
    SpectralData data(v);
    const auto& sb = data.basis();
    Json x = Json::array(), gs = Json::array(), hs = Json::array();
    for (auto i : sb.x_part) x.push_back(v.basis()[i].label);
    for (const auto& c : sb.g_part) gs.push_back(to_string(v, c));
    for (const auto& h : sb.h_part) hs.push_back({{"chain", to_string(v, h)}, {"c", ext(data.spectral_invariant_of_cycle(h))}});
    rep.results["spectral_basis"] = {{"x", x}, {"g", gs}, {"h", hs}, {"p", sb.p()}, {"q", sb.q()}};
  }
  if (!a.c_expr.empty()) {
    any = true;
    Chain z = parse_chain(v, a.c_expr);
    Json j{{"cycle", to_string(v, z)}};
    if (is_generic(v)) {
      j["c"] = ext(SpectralData(v).spectral_invariant_of_cycle(z));
    } else {
      j["interval"] = interval_json(spectral_interval(v, z, eps));
      j["eps"] = rat(eps);
    }
    rep.results["spectral_invariant"] = j;
  }
  if (!a.tensor.empty()) {
    any = true;
    auto w = in.load<DecoratedComplex>(a.tensor, DocumentKind::Complex);
    if (!a.verify_product) {
      rep.results["tensor"] = to_json(tensor(v, w));
      return;
    }
    const bool exact = is_generic(v) && is_generic(w) && in_general_position(v, w);
    // Cycles only depend on d, so a generic copy supplies the spectral bases.
    SpectralData dv(exact ? v : make_generic(v, eps));
    SpectralData dw(exact ? w : make_generic(w, eps));
    std::vector<std::pair<Chain, Chain>> pairs;
    for (const auto& h1 : dv.basis().h_part) {
      for (const auto& h2 : dw.basis().h_part) pairs.emplace_back(h1, h2);
    }
    std::mt19937_64 rng(g.seed);
    if (dv.basis().p() && dw.basis().p()) {
      for (int t = 0; t < a.trials; ++t) pairs.emplace_back(random_cycle(rng, v, dv), random_cycle(rng, w, dw));
    }
    Json rows = Json::array();
    std::size_t failed = 0;
    for (const auto& [z1, z2] : pairs) {
      Json row{{"a", to_string(v, z1)}, {"b", to_string(w, z2)}};
      if (exact) {
        auto r = verify_product_formula(v, w, z1, z2);
        row["c_a"] = ext(r.c1);
        row["c_b"] = ext(r.c2);
        row["lhs"] = ext(r.lhs);
        row["rhs"] = ext(r.rhs);
        row["equal"] = r.equal;
        failed += !r.equal;
      } else {
        auto r = verify_product_formula_perturbed(v, w, z1, z2, eps);
        row["lhs"] = interval_json(r.lhs);
        row["rhs"] = interval_json(r.rhs);
        row["bound"] = rat(r.bound);
        row["within_bound"] = r.within_bound;
        failed += !r.within_bound;
      }
      rows.push_back(row);
    }
    rep.results["product"] = {{"mode", exact ? "exact" : "perturbed"}, {"classes", rows}, {"failed", failed}};
    if (failed) rep.status = Status::Violation;
  }
  if (!any) rep.results["document"] = to_json(v);
}

// ----------------------------------------------------------------- index

struct IndexArgs {
  std::string file, rs, leray, qm;
  bool cz = false, maslov = false, sample = false;
  int trials = 200;
};

void index_cmd(const IndexArgs& a, const Global& g, Inputs& in, Report& rep) {
  if (a.sample) {
    std::mt19937_64 rng(g.seed);
    auto s1 = sample_defect(rng, 1, a.trials, {}, g.jobs);
    auto s2 = sample_defect(rng, 2, a.trials, {}, g.jobs);
    double max = std::max(s1.max_defect, s2.max_defect);
    double bound = g.seed == 1 && a.trials == 200 ? kDefectCorpusBound : kDefectCorpusBound + 1;
    bool ok = std::isfinite(max) && max <= bound;
    rep.results["sample_defect"] = {{"sp2", {{"max", s1.max_defect}, {"trials", s1.trials}, {"failures", s1.failures}}},
                                    {"sp4", {{"max", s2.max_defect}, {"trials", s2.trials}, {"failures", s2.failures}}},
                                    {"max", max},
                                    {"bound", bound},
                                    {"within_bound", ok}};
    if (!ok) rep.status = Status::Violation;
    if (a.file.empty()) return;
  }
  if (a.file.empty()) throw UsageError("index: a path file is required");
  auto mp = in.load<MatrixPath>(a.file, DocumentKind::Path);
  auto path = SymplecticPath::from(mp);
  bool any = a.sample;
  if (!a.rs.empty()) {
    any = true;
    auto v = in.load<LagrangianFrame>(a.rs, DocumentKind::Frame);
    if (v.k() != mp.k) throw UsageError("frame and path dimensions differ");
    rep.results["rs"] = index_json(ind(path, v));
  }
  if (a.cz) {
    any = true;
    rep.results["cz"] = index_json(cz_matr(path));
    rep.results["cz_floer"] = cz_floer(path, mp.k);
  }
  if (a.maslov) {
    any = true;
    rep.results["maslov"] = index_json(maslov_loop(path));
  }
  if (!a.leray.empty()) {
    any = true;
    auto b = SymplecticPath::from(in.load<MatrixPath>(a.leray, DocumentKind::Path));
    auto r = leray_verify(path, b);
    bool ok = r.residual < 1e-6;
    rep.results["leray"] = {{"lhs", r.lhs},
                            {"rhs", r.rhs},
                            {"residual", r.residual},
                            {"signature", r.signature},
                            {"symmetry_defect", r.symmetry_defect},
                            {"composition_signature", r.composition_signature},
                            {"composition_residual", r.composition_residual},
                            {"holds", ok}};
    if (!ok) rep.status = Status::Violation;
  }
  if (!a.qm.empty()) {
    any = true;
    auto b = SymplecticPath::from(in.load<MatrixPath>(a.qm, DocumentKind::Path));
    double d = qm_defect(path, b);
    rep.results["qm_defect"] = {{"defect", d}, {"bound", kDefectCorpusBound + 1}};
    if (!std::isfinite(d) || d > kDefectCorpusBound + 1) rep.status = Status::Violation;
  }
  if (!any) rep.results["document"] = to_json(mp);
}

// ----------------------------------------------------------------- toric

struct ToricArgs {
  std::string file, displaceable, fiber;
  std::vector<std::string> ball;
  bool normalize = false, delzant = false, pspec = false;
};

MomentData load_moment(const std::string& file, Inputs& in) {
  if (is_builtin(file)) return builtin_moment(file.substr(std::string(kBuiltin).size()));
  return in.load<MomentData>(file, DocumentKind::MomentData);
}

void toric_cmd(const ToricArgs& a, Inputs& in, Report& rep) {
  if (!a.ball.empty()) {
    int n = std::stoi(a.ball[0]);
    if (n < 1 || n > 8) throw UsageError("--ball: n must be in 1..8");
    Rational r = parse_rational(a.ball[1]);
    auto cert = stable_displaceability_certificate(projective_space(n), ball_subpolytope(n, r));
    Rational edge(n, n + 1);
    rep.results["ball"] = {{"n", n},
                           {"r", rat(r)},
                           {"threshold", rat(edge)},
                           {"certificate", cert ? point(*cert) : Json(nullptr)},
                           {"contains_origin", r >= edge}};
    if (a.file.empty()) return;
  }
  if (a.file.empty()) throw UsageError("toric: a moment-data file is required");
  auto m = load_moment(a.file, in);
  bool any = !a.ball.empty();
  if (a.normalize) {
    any = true;
    auto nm = normalize(m.polytope);
    rep.results["normalize"] = {{"shift", point(nm.shift)}, {"polytope", to_json(nm.polytope)}};
  }
  if (a.delzant) {
    any = true;
    auto bad = delzant_verify(m.polytope);
    Json fails = Json::array();
    for (const auto& f : bad) fails.push_back({{"vertex", point(m.polytope.vertices()[f.vertex])}, {"reason", describe(f)}});
    rep.results["delzant"] = {{"ok", bad.empty()}, {"failures", fails}};
    if (!bad.empty()) rep.status = Status::Violation;
  }
  if (a.pspec) {
    any = true;
    auto sp = special_point(m);
    bool interior = m.polytope.interior(sp.point);
    bool average = sp.point == sp.vertex_average;
    rep.results["pspec"] = {{"point", point(sp.point)},
                            {"vertex_average", point(sp.vertex_average)},
                            {"agrees_with_vertex_average", average},
                            {"interior", interior}};
    if (!interior || !average) rep.status = Status::Violation;
  }
  if (!a.displaceable.empty()) {
    any = true;
    auto bodies = in.load<std::vector<ConvexBody>>(a.displaceable, DocumentKind::Body);
    Json out = Json::array();
    for (const auto& b : bodies) {
      auto cert = stable_displaceability_certificate(m, b);
      out.push_back({{"certificate", cert ? point(*cert) : Json(nullptr)}, {"stably_displaceable", cert.has_value()}});
    }
    rep.results["displaceable"] = out;
  }
  if (!a.fiber.empty()) {
    any = true;
    auto p = parse_point(a.fiber);
    if (p.size() != m.polytope.dimension()) throw UsageError("--fiber: point has the wrong dimension");
    rep.results["fiber"] = {{"point", point(p)}, {"status", to_string(fiber_status(m, p))}};
  }
  if (!any) rep.results["document"] = to_json(m);
}

// ---------------------------------------------------------------- qstate

struct QstateArgs {
  std::string file, zeta, heavy;
  bool axioms = false, fourier = false;
  int trials = 50;
  double radius = 10, eps = 0.05, sigma = 1, tolerance = 1e-3;
};

void qstate_cmd(const QstateArgs& a, const Global& g, Inputs& in, Report& rep) {
  ModelState s(load_moment(a.file, in));
  rep.results["p_spec"] = point(s.p_spec());
  bool any = false;
  if (!a.zeta.empty()) {
    any = true;
    auto f = in.load<PLFunction>(a.zeta, DocumentKind::PLFunction);
    rep.results["zeta"] = rat(zeta(s, f));
  }
  if (a.axioms) {
    any = true;
    if (a.trials < 1) throw UsageError("--trials must be positive");
    std::mt19937_64 rng(g.seed);
    std::vector<PLFunction> sample;
    for (int i = 0; i < a.trials; ++i) sample.push_back(random_pl_function(s.moment().polytope, rng, 4));
    auto r = axiom_suite(s, sample);
    Json checks = Json::object();
    for (const auto& c : r.checks) checks[c.name] = {{"instances", c.instances}, {"violations", c.violations}};
    rep.results["axioms"] = {{"ok", r.ok()}, {"checks", checks}};
    if (!r.ok()) rep.status = Status::Violation;
  }
  if (!a.heavy.empty()) {
    any = true;
    auto bodies = in.load<std::vector<ConvexBody>>(a.heavy, DocumentKind::Body);
    auto h = model_heavy(s, bodies);
    rep.results["heavy"] = {{"heavy", h.heavy},
                            {"witness", h.witness ? Json(*h.witness) : Json(nullptr)},
                            {"test_class", h.test_class}};
  }
  if (a.fourier) {
    any = true;
    if (!(a.sigma > 0)) throw UsageError("--sigma must be positive");
    std::vector<double> c;
    for (const auto& x : s.p_spec()) c.push_back(x.get_d());
    SmoothSampler h;
    const double sigma = a.sigma;
    h.f = [c, sigma](const std::vector<double>& x) {
      double r2 = 0;
      for (std::size_t i = 0; i < x.size(); ++i) r2 += (x[i] - c[i]) * (x[i] - c[i]);
      return std::exp(-r2 / (2 * sigma * sigma));
    };
    for (double ci : c) h.box.emplace_back(ci - 8 * sigma, ci + 8 * sigma);
    FourierOptions opt;
    opt.jobs = g.jobs;
    auto r = fourier_reduction_demo(s, h, a.radius, a.eps, opt);
    Json table = Json::array();
    for (const auto& row : r.table) {
      table.push_back({{"R", row.radius}, {"eps", row.eps}, {"lattice_points", row.lattice_points},
                       {"zeta", row.zeta}, {"error", row.error}});
    }
    bool ok = r.error <= a.tolerance;
    rep.results["fourier"] = {{"zeta", r.zeta}, {"h_at_spec", r.h_at_spec}, {"error", r.error},
                              {"tolerance", a.tolerance}, {"converged", ok}, {"table", table}};
    if (!ok) rep.status = Status::Violation;
  }
  if (!any) rep.results["moment"] = to_json(s.moment());
}

void emit(const Report& rep, const Global& g, std::ostream& out) {
  if (g.json) {
    out << serialize(rep.to_json());
  } else {
    out << rep.text();
  }
}

int exit_code(Status s) {
  switch (s) {
    case Status::Ok: return kExitOk;
    case Status::Violation: return kExitViolation;
    case Status::Error: return kExitError;
  }
  return kExitError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"rigidkit: exact and numerical checks for quantum homology, spectral invariants, "
               "Conley-Zehnder indices and toric quasi-states",
               "rigidkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_flag("--json", g.json, "Emit the report as JSON");
  app.add_option("--seed", g.seed, "Seed for randomized checks")->envname("RIGIDKIT_SEED");
  app.add_option("--jobs", g.jobs, "Worker threads for parallel checks")->check(CLI::Range(1, 256));

  RingArgs ra;
  auto* ring = app.add_subcommand("ring", "Quantum homology rings");
  ring->add_option("file", ra.file, "Ring document, or builtin:NAME")->required();
  ring->add_option("--field", ra.field, "Base field for builtins (F2 or Qmodel)");
  ring->add_option("--kappa", ra.kappa, "Monotonicity constant for builtins");
  ring->add_flag("--check-axioms", ra.check_axioms, "Unity, commutativity, associativity, grading");
  ring->add_option("--idempotent", ra.idempotent, "Test an element for x*x = x");
  ring->add_flag("--semisimple", ra.semisimple, "Decide semisimplicity of the top-degree part");
  ring->add_option("--divide", ra.divide, "Solve c*x = a")->expected(2)->allow_extra_args(false)->type_name("C A");
  ring->add_option("--kunneth", ra.kunneth, "Tensor with a second ring");

  ComplexArgs ca;
  auto* cplx = app.add_subcommand("complex", "Decorated chain complexes and spectral invariants");
  cplx->add_option("file", ca.file, "Complex document")->required();
  cplx->add_flag("--validate", ca.validate, "Report validity, genericity and the filter gap");
  cplx->add_flag("--spectral-basis", ca.spectral, "Spectral (x, g, h) basis of a generic complex");
  cplx->add_option("--c", ca.c_expr, "Spectral invariant of a cycle, e.g. \"[x1] - 1*s^(1)*[x2]\"");
  cplx->add_option("--tensor", ca.tensor, "Second complex for the tensor product");
  cplx->add_flag("--verify-product", ca.verify_product, "Check c(a1 x a2) = c(a1) + c(a2)");
  cplx->add_option("--eps", ca.eps, "Perturbation size for non-generic inputs");
  cplx->add_option("--trials", ca.trials, "Random class pairs added to the product listing")->check(CLI::Range(0, 10000));

  IndexArgs ia;
  auto* index = app.add_subcommand("index", "Robbin-Salamon, Conley-Zehnder and Maslov indices");
  index->add_option("file", ia.file, "Path document");
  index->add_option("--rs", ia.rs, "Ind(A, V) against a frame document");
  index->add_flag("--cz", ia.cz, "Conley-Zehnder index");
  index->add_flag("--maslov", ia.maslov, "Maslov index of a loop");
  index->add_option("--leray", ia.leray, "Leray composition identity with a second path");
  index->add_option("--qm-defect", ia.qm, "Quasi-morphism defect with a second path");
  index->add_flag("--sample-defect", ia.sample, "Sample the defect over random pairs in Sp(2) and Sp(4)");
  index->add_option("--trials", ia.trials, "Pairs per dimension")->check(CLI::Range(1, 100000));

  ToricArgs ta;
  auto* toric = app.add_subcommand("toric", "Delzant polytopes, special points and displaceability");
  toric->add_option("file", ta.file, "Moment-data document, or builtin:cpN|quadric|blowupK");
  toric->add_flag("--normalize", ta.normalize, "Translate the centroid to the origin");
  toric->add_flag("--delzant", ta.delzant, "Check the Delzant condition");
  toric->add_flag("--pspec", ta.pspec, "Special point");
  toric->add_option("--displaceable", ta.displaceable, "Stable displaceability certificate for a body document");
  toric->add_option("--fiber", ta.fiber, "Classify the fiber over a point, e.g. 1/3,-1/6");
  toric->add_option("--ball", ta.ball, "Certificate for the ball polytope in CP^n")->expected(2)->allow_extra_args(false)->type_name("N R");

  QstateArgs qa;
  auto* qstate = app.add_subcommand("qstate", "Model quasi-state on toric pullbacks");
  qstate->add_option("file", qa.file, "Moment-data document, or builtin:NAME")->required();
  qstate->add_option("--zeta", qa.zeta, "Evaluate on a PL function document");
  qstate->add_flag("--axioms", qa.axioms, "Run the axiom suite on random PL functions");
  qstate->add_option("--trials", qa.trials, "Number of random PL functions")->check(CLI::Range(1, 100000));
  qstate->add_option("--heavy", qa.heavy, "Heaviness of a body document");
  qstate->add_flag("--fourier", qa.fourier, "Fourier reduction of a Gaussian centred at the special point");
  qstate->add_option("--R", qa.radius, "Frequency cutoff radius");
  qstate->add_option("--eps", qa.eps, "Lattice spacing");
  qstate->add_option("--sigma", qa.sigma, "Gaussian width");
  qstate->add_option("--tolerance", qa.tolerance, "Allowed |zeta - H(p_spec)|");

  std::string suite;
  auto* verify = app.add_subcommand("verify", "Run a named acceptance suite");
  std::vector<std::string> choices = suite_names();
  choices.push_back("all");
  verify->add_option("--suite", suite, "Suite name")->required()->check(CLI::IsMember(choices));

  std::string doc_kind, doc_file;
  auto* doc = app.add_subcommand("doc", "Print a document in canonical form");
  doc->add_option("kind", doc_kind, "ring, complex, path, frame, polytope, body, pl-function, moment-data")->required();
  doc->add_option("file", doc_file, "Document")->required();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    // The first bare word names the subcommand unless it is a global option's value.
    for (std::size_t i = 0; i < args.size(); ++i) {
      const auto& a = args[i];
      if (a == "--seed" || a == "--jobs") {
        ++i;
        continue;
      }
      if (a.empty() || a[0] == '-') continue;
      auto subs = app.get_subcommands([](const CLI::App*) { return true; });
      bool known = std::any_of(subs.begin(), subs.end(), [&](const CLI::App* s) { return s->get_name() == a; });
      if (!known) {
        err << "error: unknown subcommand '" << a << "'\nrun 'rigidkit --help' for usage\n";
        return kExitError;
      }
      break;
    }
    err << "error: " << e.what() << "\n" << "run 'rigidkit --help' for usage\n";
    return kExitError;
  }

  Inputs inputs(args);
  Report rep;
  rep.subcommand = app.get_subcommands().front()->get_name();
  const auto start = std::chrono::steady_clock::now();
  try {
    if (*doc) {
      auto d = load_document(doc_file, parse_document_kind(doc_kind));
      out << serialize(to_json(d));
      return kExitOk;
    }
    if (*ring) ring_cmd(ra, inputs, rep);
    if (*cplx) complex_cmd(ca, g, inputs, rep);
    if (*index) index_cmd(ia, g, inputs, rep);
    if (*toric) toric_cmd(ta, inputs, rep);
    if (*qstate) qstate_cmd(qa, g, inputs, rep);
    if (*verify) {
      rep.subcommand = "verify";
      Json suites = Json::object();
      for (const auto& name : suite_names()) {
        if (suite != "all" && suite != name) continue;
        auto r = run_suite(name, g.seed, g.jobs);
        suites[name] = {{"pass", r.pass}, {"detail", r.detail}, {"facts", r.facts}, {"budget_seconds", r.budget}};
        if (!r.pass) rep.status = Status::Violation;
      }
      rep.results["suites"] = suites;
    }
  } catch (const std::exception& e) {
    rep.status = Status::Error;
    rep.results = {{"error", e.what()}};
    err << "error: " << e.what() << "\n";
  }
  rep.inputs_digest = inputs.digest();
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  emit(rep, g, out);
  return exit_code(rep.status);
}

}  // namespace rigidkit::cli
