#include "rigidkit/symplectic_index.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <unsupported/Eigen/MatrixFunctions>

namespace rigidkit {

Mat standard_j(int k) {
  Mat j = Mat::Zero(2 * k, 2 * k);
  j.topRightCorner(k, k) = -Mat::Identity(k, k);
  j.bottomLeftCorner(k, k) = Mat::Identity(k, k);
  return j;
}

Mat doubled_j(int k) {
  Mat j = Mat::Zero(4 * k, 4 * k);
  j.topLeftCorner(2 * k, 2 * k) = -standard_j(k);
  j.bottomRightCorner(2 * k, 2 * k) = standard_j(k);
  return j;
}

Mat rotation(const Mat& j, double theta) { return (theta * j).exp(); }

bool is_symplectic(const Mat& a, double tol) {
  if (a.rows() != a.cols() || a.rows() % 2 != 0) return false;
  Mat j = standard_j(static_cast<int>(a.rows() / 2));
  return (a.transpose() * j * a - j).norm() <= tol * std::max(1.0, a.squaredNorm());
}

void check_lagrangian(const LagrangianFrame& v, const Mat& j, double tol) {
  const auto& x = v.columns;
  if (x.rows() != j.rows() || 2 * x.cols() != x.rows()) throw std::invalid_argument("Lagrangian frame must be 2k × k");
  double scale = std::max(1.0, x.squaredNorm());
  if ((x.transpose() * j.transpose() * x).norm() > tol * scale) {
    throw std::invalid_argument("frame is not isotropic");
  }
  Eigen::JacobiSVD<Mat> svd(x);
  if (svd.singularValues().minCoeff() <= tol) throw std::invalid_argument("frame does not have rank k");
}

LagrangianFrame q_plane(int k) {
  Mat x = Mat::Zero(2 * k, k);
  x.bottomRows(k) = Mat::Identity(k, k);
  return {x};
}

LagrangianFrame p_plane(int k) {
  Mat x = Mat::Zero(2 * k, k);
  x.topRows(k) = Mat::Identity(k, k);
  return {x};
}

LagrangianFrame diagonal(int k) {
  Mat x(4 * k, 2 * k);
  x << Mat::Identity(2 * k, 2 * k), Mat::Identity(2 * k, 2 * k);
  return {x / std::sqrt(2.0)};
}

void check_path(const MatrixPath& path) {
  if (path.k < 1) throw std::invalid_argument("path dimension k must be positive");
  for (std::size_t i = 0; i < path.segments.size(); ++i) {
    const auto& s = path.segments[i];
    std::string where = "segment " + std::to_string(i);
    if (s.generator.rows() != 2 * path.k || s.generator.cols() != 2 * path.k) {
      throw std::invalid_argument(where + ": generator must be 2k × 2k");
    }
    if ((s.generator - s.generator.transpose()).norm() > 1e-9 * std::max(1.0, s.generator.norm())) {
      throw std::invalid_argument(where + ": generator is not symmetric");
    }
    if (!(s.duration > 0)) throw std::invalid_argument(where + ": duration must be positive");
  }
}

MatrixPath fit_samples(int k, const std::vector<Mat>& samples, const std::vector<double>& times) {
  if (samples.size() != times.size() || samples.size() < 2) {
    throw std::invalid_argument("need at least two samples with matching times");
  }
  if ((samples.front() - Mat::Identity(2 * k, 2 * k)).norm() > 1e-9) {
    throw std::invalid_argument("sampled path must start at the identity");
  }
  const Mat j = standard_j(k);
  MatrixPath path{k, {}};
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    if (!is_symplectic(samples[i + 1], 1e-7)) throw std::invalid_argument("sample " + std::to_string(i + 1) + " is not symplectic");
    double dt = times[i + 1] - times[i];
    if (!(dt > 0)) throw std::invalid_argument("sample times must increase");
    Mat step = samples[i + 1] * samples[i].inverse();
    Mat s = -j * step.log() / dt;
    path.segments.push_back({0.5 * (s + s.transpose()), dt});
  }
  return path;
}

// ---------------------------------------------------------------- paths

SymplecticPath::SymplecticPath(Mat j, double duration, std::function<Mat(double)> value,
                               std::function<Mat(double)> generator, std::vector<double> breakpoints)
    : j_(std::move(j)),
      duration_(duration),
      value_(std::move(value)),
      generator_(std::move(generator)),
      breakpoints_(std::move(breakpoints)) {
  if (!(duration_ > 0)) throw std::invalid_argument("path duration must be positive");
}

SymplecticPath SymplecticPath::from(const MatrixPath& path) {
  check_path(path);
  const Mat j = standard_j(path.k);
  const int n = 2 * path.k;
  if (path.segments.empty()) return identity(path.k);
  struct Piece {
    double start;
    Mat js;
    Mat s;
    Mat base;
  };
  auto pieces = std::make_shared<std::vector<Piece>>();
  std::vector<double> breaks;
  double t = 0;
  Mat base = Mat::Identity(n, n);
  for (const auto& seg : path.segments) {
    if (t > 0) breaks.push_back(t);
    Mat js = j * seg.generator;
    pieces->push_back({t, js, seg.generator, base});
    base = (seg.duration * js).exp() * base;
    t += seg.duration;
  }
  auto locate = [pieces](double u) -> const Piece& {
    auto it = std::upper_bound(pieces->begin(), pieces->end(), u,
                               [](double x, const Piece& p) { return x < p.start; });
    return it == pieces->begin() ? pieces->front() : *std::prev(it);
  };
  auto value = [locate](double u) {
    const auto& p = locate(u);
    return Mat(((u - p.start) * p.js).exp() * p.base);
  };
  auto generator = [locate](double u) { return locate(u).s; };
  return SymplecticPath(j, t, value, generator, breaks);
}

SymplecticPath SymplecticPath::identity(int k, double duration) {
  const int n = 2 * k;
  return SymplecticPath(
      standard_j(k), duration, [n](double) { return Mat(Mat::Identity(n, n)); },
      [n](double) { return Mat(Mat::Zero(n, n)); }, {});
}

SymplecticPath SymplecticPath::times(const SymplecticPath& b) const {
  if (j_.rows() != b.j_.rows() || j_ != b.j_) throw std::invalid_argument("paths live in different groups");
  auto a = *this;
  const double ta = duration_, tb = b.duration_;
  std::vector<double> breaks;
  for (double x : breakpoints_) breaks.push_back(x / ta);
  for (double x : b.breakpoints_) breaks.push_back(x / tb);
  std::sort(breaks.begin(), breaks.end());
  return SymplecticPath(
      j_, 1.0, [a, b, ta, tb](double s) { return Mat(a.value(s * ta) * b.value(s * tb)); },
      [a, b, ta, tb](double s) {
        Mat ainv = a.value(s * ta).inverse();
        return Mat(ta * a.generator(s * ta) + tb * ainv.transpose() * b.generator(s * tb) * ainv);
      },
      breaks);
}

SymplecticPath SymplecticPath::conjugated(const Mat& b) const {
  auto a = *this;
  Mat binv = b.inverse();
  return SymplecticPath(
      j_, duration_, [a, b, binv](double t) { return Mat(b * a.value(t) * binv); },
      [a, binv](double t) { return Mat(binv.transpose() * a.generator(t) * binv); }, breakpoints_);
}

SymplecticPath SymplecticPath::doubled() const {
  auto a = *this;
  const int n = static_cast<int>(j_.rows());
  return SymplecticPath(
      doubled_j(n / 2), duration_,
      [a, n](double t) {
        Mat out = Mat::Identity(2 * n, 2 * n);
        out.bottomRightCorner(n, n) = a.value(t);
        return out;
      },
      [a, n](double t) {
        Mat out = Mat::Zero(2 * n, 2 * n);
        out.bottomRightCorner(n, n) = a.generator(t);
        return out;
      },
      breakpoints_);
}

SymplecticPath SymplecticPath::regularized(double delta) const {
  auto a = *this;
  Mat j = j_;
  return SymplecticPath(
      j_, duration_, [a, j, delta](double t) { return Mat(rotation(j, delta * t) * a.value(t)); },
      [a, j, delta](double t) {
        Mat r = rotation(j, delta * t);
        Mat s = r * a.generator(t) * r.transpose();
        s.diagonal().array() += delta;
        return s;
      },
      breakpoints_);
}

SymplecticPath SymplecticPath::restricted(double t0, double t1) const {
  if (!(0 <= t0 && t0 < t1 && t1 <= duration_)) throw std::invalid_argument("bad restriction interval");
  auto a = *this;
  std::vector<double> breaks;
  for (double x : breakpoints_) {
    if (x > t0 && x < t1) breaks.push_back(x - t0);
  }
  return SymplecticPath(
      j_, t1 - t0, [a, t0](double t) { return a.value(t0 + t); }, [a, t0](double t) { return a.generator(t0 + t); },
      breaks);
}

LagrangianPath::LagrangianPath(SymplecticPath path, LagrangianFrame start)
    : path_(std::move(path)), start_(std::move(start)) {
  check_lagrangian(start_, path_.j());
}

// ---------------------------------------------------------------- crossings

std::optional<int> signature(const Mat& sym, double zero_tol) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (sym + sym.transpose()));
  int sig = 0;
  for (double ev : es.eigenvalues()) {
    if (std::abs(ev) <= zero_tol) return std::nullopt;
    sig += ev > 0 ? 1 : -1;
  }
  return sig;
}

std::string IndexResult::str() const {
  if (halves % 2 == 0) return std::to_string(halves / 2);
  return std::to_string(halves) + "/2";
}

namespace {

Mat orthonormal(const Mat& x) {
  Eigen::HouseholderQR<Mat> qr(x);
  return qr.householderQ() * Mat::Identity(x.rows(), x.cols());
}

double spectral_norm(const Mat& m) { return Eigen::JacobiSVD<Mat>(m).singularValues()(0); }

struct NonRegular {};

/// Shared crossing engine. `pairing(t)` is a matrix whose kernel is the
/// intersection at time t, scaled so that its singular values are O(1);
/// `form(t, K)` is the crossing form on the kernel with basis K; `rate(t)`
/// bounds how fast σ_min of the pairing can move near t.
class CrossingEngine {
 public:
  using Pairing = std::function<Mat(const SymplecticPath&, double)>;
  using Form = std::function<Mat(const SymplecticPath&, double, const Mat&)>;
  using Rate = std::function<double(const SymplecticPath&, double)>;

  CrossingEngine(const SymplecticPath& path, const Tolerances& tol, Pairing pairing, Form form, Rate rate)
      : path_(path), tol_(tol), pairing_(std::move(pairing)), form_(std::move(form)), rate_(std::move(rate)) {}

  IndexResult run() const {
    double delta = 0;
    for (int attempt = 0; attempt <= tol_.regularize_retries; ++attempt) {
      try {
        auto res = attempt == 0 ? count(path_) : count(path_.regularized(delta));
        res.delta = delta;
        return res;
      } catch (const NonRegular&) {
        delta = attempt == 0 ? tol_.regularize_start : delta / 2;
      }
    }
    throw std::runtime_error("non-regular crossing persists after regularization");
  }

 private:
  double sigma_min(const SymplecticPath& p, double t) const {
    Eigen::JacobiSVD<Mat> svd(pairing_(p, t));
    return svd.singularValues().minCoeff();
  }

  std::vector<double> grid(const SymplecticPath& p) const {
    std::vector<double> knots{0};
    for (double b : p.breakpoints()) {
      if (b > knots.back() && b < p.duration()) knots.push_back(b);
    }
    knots.push_back(p.duration());
    std::vector<double> ts;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
      double a = knots[i], b = knots[i + 1];
      double speed = rate_(p, 0.5 * (a + b));
      int n = std::max(tol_.samples_per_segment, static_cast<int>(std::ceil(8 * (b - a) * speed)));
      for (int s = 0; s < n; ++s) ts.push_back(a + (b - a) * s / n);
    }
    ts.push_back(p.duration());
    return ts;
  }

  /// Golden-section minimization of σ_min on [a, b].
  std::pair<double, double> refine(const SymplecticPath& p, double a, double b) const {
    const double g = (std::sqrt(5.0) - 1) / 2;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = sigma_min(p, c), fd = sigma_min(p, d);
    while (b - a > tol_.bisection) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - g * (b - a);
        fc = sigma_min(p, c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + g * (b - a);
        fd = sigma_min(p, d);
      }
    }
    return fc < fd ? std::pair{c, fc} : std::pair{d, fd};
  }

  CrossingRecord crossing_at(const SymplecticPath& p, double t, bool endpoint) const {
    Mat m = pairing_(p, t);
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cut = 10 * tol_.crossing;
    std::vector<int> cols;
    for (int i = 0; i < sv.size(); ++i) {
      if (sv(i) < cut) cols.push_back(i);
    }
    Mat k(m.cols(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) k.col(static_cast<Eigen::Index>(c)) = svd.matrixV().col(cols[c]);
    auto sig = signature(form_(p, t, k), tol_.signature);
    if (!sig) throw NonRegular{};
    return {t, static_cast<int>(cols.size()), *sig, endpoint};
  }

  /// Leaves of [a, b] on which a zero of σ_min cannot be excluded by the local
  /// speed of the pairing, doubled for safety.
  void suspects(const SymplecticPath& p, double a, double fa, double ra, double b, double fb, double rb,
                std::vector<std::pair<double, double>>& out) const {
    if (fa + fb > 2 * std::max(ra, rb) * (b - a)) return;
    if (b - a < 100 * tol_.bisection) {
      if (!out.empty() && out.back().second >= a) {
        out.back().second = b;
      } else {
        out.emplace_back(a, b);
      }
      if (out.size() > 4096) throw NonRegular{};
      return;
    }
    double m = 0.5 * (a + b);
    double fm = sigma_min(p, m), rm = rate_(p, m);
    suspects(p, a, fa, ra, m, fm, rm, out);
    suspects(p, m, fm, rm, b, fb, rb, out);
  }

  IndexResult count(const SymplecticPath& p) const {
    IndexResult res;
    const double end = p.duration();
    auto ts = grid(p);
    std::vector<double> f(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) f[i] = sigma_min(p, ts[i]);
    // A non-isolated family of crossings shows up as a kernel at neighbouring samples.
    for (std::size_t i = 0; i + 1 < f.size(); ++i) {
      if (f[i] < tol_.crossing && f[i + 1] < tol_.crossing) throw NonRegular{};
    }

    std::vector<double> r(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) r[i] = rate_(p, ts[i]);
    std::vector<std::pair<double, double>> cand;
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) suspects(p, ts[i], f[i], r[i], ts[i + 1], f[i + 1], r[i + 1], cand);

    if (f.front() < tol_.crossing) res.crossings.push_back(crossing_at(p, 0, true));
    const double margin = 100 * tol_.bisection;
    double last = -1;
    for (auto [a, b] : cand) {
      double w = b - a;
      auto [t, v] = refine(p, std::max(0.0, a - w), std::min(end, b + w));
      if (v >= tol_.crossing || t < margin || t > end - margin) continue;
      if (last >= 0 && t - last < margin) continue;
      last = t;
      res.crossings.push_back(crossing_at(p, t, false));
    }
    if (f.back() < tol_.crossing) res.crossings.push_back(crossing_at(p, end, true));

    for (const auto& c : res.crossings) res.halves += c.at_endpoint ? c.signature : 2 * c.signature;
    res.raw = 0;
    for (const auto& c : res.crossings) res.raw += c.at_endpoint ? 0.5 * c.signature : c.signature;
    double snapped = std::round(2 * res.raw) / 2;
    res.snap_residual = std::abs(res.raw - snapped);
    if (res.snap_residual > tol_.snap) throw std::runtime_error("index not resolved");
    return res;
  }

  const SymplecticPath& path_;
  Tolerances tol_;
  Pairing pairing_;
  Form form_;
  Rate rate_;
};

}  // namespace

IndexResult rs_index(const LagrangianPath& path, const LagrangianFrame& v, const Tolerances& tol) {
  const Mat& j = path.path().j();
  check_lagrangian(v, j, tol.structure);
  const Mat omega = j.transpose();  // ω(u, w) = u^T Ω w
  const Mat vq = orthonormal(v.columns);
  const Mat x0 = path.start().columns;
  // Kernel of V^T Ω Q(t): vectors of L_t that are ω-orthogonal to V, i.e. lie in V.
  auto pairing = [vq, omega, x0](const SymplecticPath& p, double t) {
    return Mat(vq.transpose() * omega * orthonormal(p.value(t) * x0));
  };
  // Q(v) = d/dt ω(v, w(t)) with w(t) in the complement J L_t; only the velocity term survives.
  auto form = [omega, x0](const SymplecticPath& p, double t, const Mat& k) {
    Mat q = orthonormal(p.value(t) * x0);
    Mat velocity = p.j() * p.generator(t) * q;
    Mat g = k.transpose() * q.transpose() * omega * velocity * k;
    return Mat(0.5 * (g + g.transpose()));
  };
  // Speed of the subspace A_t X: the normal part of J S applied to an orthonormal frame.
  auto rate = [x0](const SymplecticPath& p, double t) {
    Mat q = orthonormal(p.value(t) * x0);
    Mat v = p.j() * p.generator(t) * q;
    return spectral_norm(v - q * (q.transpose() * v));
  };
  return CrossingEngine(path.path(), tol, pairing, form, rate).run();
}

IndexResult ind(const SymplecticPath& path, const LagrangianFrame& v, const Tolerances& tol) {
  return rs_index(LagrangianPath(path, v), v, tol);
}

IndexResult cz_matr(const SymplecticPath& path, const Tolerances& tol) {
  const auto n = path.j().rows();
  auto pairing = [n](const SymplecticPath& p, double t) {
    Mat a = p.value(t);
    double scale = 1 + Eigen::JacobiSVD<Mat>(a).singularValues()(0);
    return Mat((a - Mat::Identity(n, n)) / scale);
  };
  auto form = [](const SymplecticPath& p, double t, const Mat& k) {
    return Mat(k.transpose() * p.generator(t) * k);
  };
  // |d/dt (A - I) / (1 + |A|)| <= 2 |J S A| / (1 + |A|).
  auto rate = [](const SymplecticPath& p, double t) {
    Mat a = p.value(t);
    return 2 * spectral_norm(p.j() * p.generator(t) * a) / (1 + spectral_norm(a));
  };
  return CrossingEngine(path, tol, pairing, form, rate).run();
}

IndexResult cz_matr_doubled(const SymplecticPath& path, const Tolerances& tol) {
  return ind(path.doubled(), diagonal(path.half_dim()), tol);
}

IndexResult maslov_loop(const SymplecticPath& loop, const Tolerances& tol) {
  const auto n = loop.j().rows();
  if ((loop.value(loop.duration()) - Mat::Identity(n, n)).norm() > 1e-6) {
    throw std::invalid_argument("path does not close at the identity");
  }
  auto res = cz_matr(loop, tol);
  if (res.delta > 0) {
    // R_{δt} A_t is homotopic rel endpoints to A followed by R_{δs}, which adds k.
    res.halves -= 2 * loop.half_dim();
    res.raw -= loop.half_dim();
  }
  if (res.halves % 4 != 0) throw std::runtime_error("Maslov index of a loop came out odd: " + res.str());
  return res;
}

double cz_floer(const SymplecticPath& path, int n, const Tolerances& tol) {
  if (path.half_dim() != n) throw std::invalid_argument("cz_floer needs a path in Sp(2n)");
  return n - cz_matr(path, tol).value();
}

Mat leray_form(const Mat& s) {
  const auto k = s.rows() / 2;
  Mat e = s.topLeftCorner(k, k), f = s.topRightCorner(k, k);
  return f.fullPivLu().solve(e);
}

Mat composition_form(const Mat& a, const Mat& b) {
  const auto k = a.rows() / 2;
  Mat fb = b.topRightCorner(k, k);
  Mat right = fb.transpose().fullPivLu().solve(Mat(b.bottomRightCorner(k, k).transpose())).transpose();
  return leray_form(a) + right;
}

LerayReport leray_verify(const SymplecticPath& a, const SymplecticPath& b, const Tolerances& tol) {
  const int k = a.half_dim();
  if (b.half_dim() != k || a.j() != standard_j(k) || b.j() != standard_j(k)) {
    throw std::invalid_argument("Leray check needs two paths in the same Sp(2k)");
  }
  Mat a1 = a.value(a.duration()), b1 = b.value(b.duration());
  auto transversal = [&](const Mat& s, const char* what) {
    Mat f = s.topRightCorner(k, k);
    double smin = Eigen::JacobiSVD<Mat>(f).singularValues().minCoeff();
    if (smin <= tol.transversality * std::max(1.0, s.norm())) {
      throw std::invalid_argument(std::string("transversality fails: ") + what + " L ∩ L ≠ 0");
    }
  };
  transversal(a1, "A_1");
  transversal(b1, "B_1");
  transversal(a1 * b1, "A_1 B_1");

  Mat qa = leray_form(a1), qb = leray_form(b1);
  LerayReport rep;
  rep.symmetry_defect = std::max((qa - qa.transpose()).cwiseAbs().maxCoeff(), (qb - qb.transpose()).cwiseAbs().maxCoeff());
  if (rep.symmetry_defect > tol.transversality * std::max({1.0, qa.norm(), qb.norm()})) {
    throw std::runtime_error("Leray form is not symmetric");
  }
  auto sig = signature(0.5 * (qa + qa.transpose() + qb + qb.transpose()), tol.signature);
  if (!sig) throw std::runtime_error("Q_A + Q_B is degenerate");
  rep.signature = *sig;
  Mat h = composition_form(a1, b1);
  auto hsig = signature(0.5 * (h + h.transpose()), tol.signature);
  if (!hsig) throw std::runtime_error("composition form is degenerate");
  rep.composition_signature = *hsig;
  const auto l = q_plane(k);
  rep.lhs = ind(a.times(b), l, tol).value();
  const double base = ind(a, l, tol).value() + ind(b, l, tol).value();
  rep.rhs = base + 0.5 * rep.signature;
  rep.residual = std::abs(rep.lhs - rep.rhs);
  rep.composition_residual = std::abs(rep.lhs - base - 0.5 * rep.composition_signature);
  return rep;
}

double qm_defect(const SymplecticPath& a, const SymplecticPath& b, const Tolerances& tol) {
  return std::abs(cz_matr(a.times(b), tol).value() - cz_matr(a, tol).value() - cz_matr(b, tol).value());
}

// ---------------------------------------------------------------- sampling

Mat random_symmetric(std::mt19937_64& rng, int n, double scale) {
  std::normal_distribution<double> g(0, scale);
  Mat s(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) s(i, j) = s(j, i) = g(rng);
  }
  return s;
}

MatrixPath random_path(std::mt19937_64& rng, int k, int max_segments, double scale) {
  std::uniform_int_distribution<int> count(1, max_segments);
  std::uniform_real_distribution<double> dur(0.2, 1.0);
  MatrixPath p{k, {}};
  int m = count(rng);
  for (int i = 0; i < m; ++i) p.segments.push_back({random_symmetric(rng, 2 * k, scale), dur(rng)});
  return p;
}

MatrixPath random_rotation_path(std::mt19937_64& rng, int k, double scale) {
  std::uniform_real_distribution<double> dur(0.2, 1.0);
  Mat p = random_symmetric(rng, k, scale);
  Mat g = Mat::Zero(2 * k, 2 * k);
  g.topLeftCorner(k, k) = p;
  g.bottomRightCorner(k, k) = p;
  return MatrixPath{k, {{g, dur(rng)}}};
}

Mat random_symplectic(std::mt19937_64& rng, int k, double scale) {
  Mat j = standard_j(k);
  return Mat((j * random_symmetric(rng, 2 * k, scale)).exp() * (j * random_symmetric(rng, 2 * k, scale)).exp());
}

MatrixPath rotation_loop(int k, int l) {
  return MatrixPath{k, {{2 * std::numbers::pi * l * Mat::Identity(2 * k, 2 * k), 1.0}}};
}

DefectSample sample_defect(std::mt19937_64& rng, int k, int trials, const Tolerances& tol, int jobs) {
  // Draw every pair first so the result does not depend on the worker count.
  std::vector<std::pair<MatrixPath, MatrixPath>> pairs;
  for (int i = 0; i < trials; ++i) {
    auto a = random_path(rng, k);
    auto b = random_path(rng, k);
    pairs.emplace_back(std::move(a), std::move(b));
  }
  std::vector<double> defect(pairs.size(), -1);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < pairs.size();) {
      try {
        defect[i] = qm_defect(SymplecticPath::from(pairs[i].first), SymplecticPath::from(pairs[i].second), tol);
      } catch (const std::runtime_error&) {
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < std::max(1, jobs); ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  DefectSample out;
  out.trials = trials;
  for (double d : defect) {
    if (d < 0) {
      ++out.failures;
    } else {
      out.max_defect = std::max(out.max_defect, d);
    }
  }
  return out;
}

}  // namespace rigidkit
