#pragma once

// Robbin–Salamon, Ind, Conley–Zehnder and Maslov indices of paths of
// symplectic matrices and Lagrangian subspaces.
//
// Coordinates on R^{2k} are (p, q). J = [[0, -I], [I, 0]] is the complex
// structure and ω(u, v) = <Ju, v>, so ω(u, Ju) > 0. A symplectic path solves
// A' = J S(t) A with S(t) symmetric; its crossing form on L_t ∩ V is
// v ↦ <v, S v>. Indices are half-integers, stored as a count of halves.

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rigidkit {

using Mat = Eigen::MatrixXd;

/// J for ω_{2k}.
Mat standard_j(int k);
/// J for -ω_{2k} ⊕ ω_{2k} on R^{4k}.
Mat doubled_j(int k);
/// exp(θ J), the rotation R_θ.
Mat rotation(const Mat& j, double theta);

struct Tolerances {
  double structure = 1e-9;      // symplecticity, Lagrangian condition
  double bisection = 1e-9;      // crossing location in t
  double crossing = 1e-6;       // σ_min of the normalized pairing at a crossing
  double signature = 1e-7;      // zero threshold for crossing-form eigenvalues
  double snap = 1e-6;           // half-integer snapping
  double transversality = 1e-7;  // Leray endpoint conditions
  double regularize_start = 1e-3;
  int regularize_retries = 8;
  int samples_per_segment = 128;
};

bool is_symplectic(const Mat& a, double tol = 1e-9);

/// 2k × k frame of a Lagrangian subspace.
struct LagrangianFrame {
  Mat columns;
  int k() const { return static_cast<int>(columns.cols()); }
};

/// Throws std::invalid_argument unless X^T Ω X = 0 and rank X = k.
void check_lagrangian(const LagrangianFrame& v, const Mat& j, double tol = 1e-9);
/// The q-coordinate plane {p = 0}.
LagrangianFrame q_plane(int k);
/// The p-coordinate plane {q = 0}.
LagrangianFrame p_plane(int k);
/// The diagonal Δ ⊂ R^{2k} × R^{2k}.
LagrangianFrame diagonal(int k);

struct PathSegment {
  Mat generator;  // symmetric 2k × 2k
  double duration = 1;
};

/// Piecewise-exponential path based at the identity: over each segment the
/// current value is multiplied on the left by exp(t J S).
struct MatrixPath {
  int k = 1;
  std::vector<PathSegment> segments;
};

/// Validates shapes, symmetry and durations; throws std::invalid_argument.
void check_path(const MatrixPath& path);

/// Fits a piecewise-exponential path through sampled symplectic matrices
/// (first sample the identity) using matrix logarithms.
MatrixPath fit_samples(int k, const std::vector<Mat>& samples, const std::vector<double>& times);

/// Evaluable path in Sp(2m) over [0, duration], with its Hamiltonian
/// generator S(t) (A' = J S A) and the times where S may jump.
class SymplecticPath {
 public:
  SymplecticPath(Mat j, double duration, std::function<Mat(double)> value, std::function<Mat(double)> generator,
                 std::vector<double> breakpoints);

  static SymplecticPath from(const MatrixPath& path);
  static SymplecticPath identity(int k, double duration = 1);

  const Mat& j() const { return j_; }
  int half_dim() const { return static_cast<int>(j_.rows() / 2); }
  double duration() const { return duration_; }
  Mat value(double t) const { return value_(t); }
  Mat generator(double t) const { return generator_(t); }
  /// Interior times where S may jump.
  const std::vector<double>& breakpoints() const { return breakpoints_; }

  /// Pointwise product A_t B_t, both reparametrized to [0, 1].
  SymplecticPath times(const SymplecticPath& b) const;
  /// B A_t B^{-1}.
  SymplecticPath conjugated(const Mat& b) const;
  /// I ⊕ A_t in Sp(4k) with the form -ω ⊕ ω.
  SymplecticPath doubled() const;
  /// R_{δt} A_t.
  SymplecticPath regularized(double delta) const;
  /// Restriction to [t0, t1], kept as a path of matrices (no longer identity-based).
  SymplecticPath restricted(double t0, double t1) const;

 private:
  Mat j_;
  double duration_;
  std::function<Mat(double)> value_;
  std::function<Mat(double)> generator_;
  std::vector<double> breakpoints_;
};

/// Path of Lagrangian subspaces t ↦ A_t V.
class LagrangianPath {
 public:
  LagrangianPath(SymplecticPath path, LagrangianFrame start);

  const SymplecticPath& path() const { return path_; }
  const LagrangianFrame& start() const { return start_; }
  Mat frame(double t) const { return path_.value(t) * start_.columns; }
  Mat velocity(double t) const { return path_.j() * path_.generator(t) * frame(t); }

 private:
  SymplecticPath path_;
  LagrangianFrame start_;
};

struct CrossingRecord {
  double t = 0;
  int kernel_dimension = 0;
  int signature = 0;
  bool at_endpoint = false;
};

struct IndexResult {
  int halves = 0;             // index = halves / 2
  double raw = 0;             // unsnapped sum of crossing contributions
  double snap_residual = 0;
  double delta = 0;           // regularizing rotation rate, 0 when none was needed
  std::vector<CrossingRecord> crossings;

  double value() const { return halves / 2.0; }
  std::string str() const;
};

/// RS({L_t}, V). Throws std::runtime_error("non-regular crossing") when δ
/// regularization does not help and ("index not resolved") on snap failure.
IndexResult rs_index(const LagrangianPath& path, const LagrangianFrame& v, const Tolerances& tol = {});
/// Ind_{2k}({A_t}, V) = RS({A_t V}, V).
IndexResult ind(const SymplecticPath& path, const LagrangianFrame& v, const Tolerances& tol = {});
/// CZ_matr by crossings with {det(A - I) = 0}, crossing form <v, S v> on ker(A - I).
IndexResult cz_matr(const SymplecticPath& path, const Tolerances& tol = {});
/// CZ_matr as Ind_{4k}({I ⊕ A_t}, Δ).
IndexResult cz_matr_doubled(const SymplecticPath& path, const Tolerances& tol = {});
/// CZ_matr of a loop; throws std::invalid_argument unless A_1 ≈ I (1e-6).
IndexResult maslov_loop(const SymplecticPath& loop, const Tolerances& tol = {});
/// n - CZ_matr.
double cz_floer(const SymplecticPath& path, int n, const Tolerances& tol = {});

/// Q_S = F^{-1} E for S = [[E, F], [G, H]] with SL ∩ L = 0.
Mat leray_form(const Mat& s);
/// Hessian in the middle variable of the composed generating function of A B:
/// F_A^{-1} E_A + H_B F_B^{-1}. Agrees with Q_A + Q_B when H_B F_B^{-1} = Q_B.
Mat composition_form(const Mat& a, const Mat& b);

struct LerayReport {
  double lhs = 0;  // Ind(A_t B_t)
  double rhs = 0;  // Ind(A) + Ind(B) + sign(Q_A + Q_B) / 2
  double residual = 0;
  double symmetry_defect = 0;  // max of |Q - Q^T| over Q_A, Q_B
  int signature = 0;           // sign(Q_A + Q_B)
  int composition_signature = 0;   // sign of composition_form(A_1, B_1)
  double composition_residual = 0;  // |lhs - Ind(A) - Ind(B) - composition_signature / 2|
};

/// Throws std::invalid_argument naming the failed endpoint condition.
LerayReport leray_verify(const SymplecticPath& a, const SymplecticPath& b, const Tolerances& tol = {});

/// |CZ(a·b) - CZ(a) - CZ(b)| for the pointwise product.
double qm_defect(const SymplecticPath& a, const SymplecticPath& b, const Tolerances& tol = {});

/// Largest defect seen on the bundled sampling corpus (seed 1, 200 pairs in
/// Sp(2) and Sp(4)); later runs are checked against it.
inline constexpr double kDefectCorpusBound = 2;

/// Signature of a symmetric matrix with the given zero threshold; nullopt if degenerate.
std::optional<int> signature(const Mat& sym, double zero_tol);

/// Random symmetric matrix with N(0, scale²) entries.
Mat random_symmetric(std::mt19937_64& rng, int n, double scale = 1);
/// Random identity-based path with 1..max_segments segments.
MatrixPath random_path(std::mt19937_64& rng, int k, int max_segments = 3, double scale = 1);
/// Random rotation-generated path t ↦ exp(t J (P ⊕ P)), P symmetric: each
/// eigen-direction of P turns in its own (p, q)-plane. Endpoints have E = H.
MatrixPath random_rotation_path(std::mt19937_64& rng, int k, double scale = 1);
/// Random symplectic matrix exp(J S1) exp(J S2).
Mat random_symplectic(std::mt19937_64& rng, int k, double scale = 0.7);
/// Loop t ↦ R_{2π l t} in Sp(2k).
MatrixPath rotation_loop(int k, int l);

struct DefectSample {
  double max_defect = 0;
  int trials = 0;
  int failures = 0;  // pairs whose index could not be resolved
};

/// Max qm_defect over seeded random pairs in Sp(2k), spread over `jobs` threads.
DefectSample sample_defect(std::mt19937_64& rng, int k, int trials, const Tolerances& tol = {}, int jobs = 1);

}  // namespace rigidkit
