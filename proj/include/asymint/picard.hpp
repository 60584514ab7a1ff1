#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "asymint/grid.hpp"
#include "asymint/quadrature.hpp"
#include "asymint/riccati.hpp"

namespace asymint {

/// Default horizon: exp(-min_gap (t_max - t0)) = 1e-12.
[[nodiscard]] double default_t_max(double t0, double min_gap);

/// The integral operator (T z)(t) = int g(t,s) [forcing(s) + F(s, z(s))] ds and its first two
/// t-derivatives, discretised on fixed nodes with 16-point Gauss panels and exact exponential
/// recursions per kernel term.  Beyond the last node the argument is continued by its leading
/// exponential envelope exp(-kappa (s - t_max)), kappa the slowest kernel rate.
class IntegralOperator {
 public:
  IntegralOperator(RiccatiSystem sys, const Eigen::ArrayXd& nodes);

  [[nodiscard]] const RiccatiSystem& system() const noexcept { return sys_; }
  [[nodiscard]] const Eigen::ArrayXd& nodes() const noexcept { return nodes_; }

  [[nodiscard]] GridFunction apply(const GridFunction& z) const;
  /// Third t-derivative of T z at the nodes (includes the jump of the second kernel derivative).
  [[nodiscard]] Eigen::ArrayXd third_derivative(const GridFunction& z) const;
  /// forcing + F(z) at the nodes.
  [[nodiscard]] Eigen::ArrayXd source_at_nodes(const GridFunction& z) const;

 private:
  struct TermTables {
    Eigen::ArrayXd step;     // exp(rate * h_n) for head, exp(-rate * h_n) for tail
    Eigen::ArrayXXd weight;  // panel x gauss point
  };
  Eigen::ArrayXXd source_at_gauss(const GridFunction& z) const;
  std::array<Eigen::ArrayXd, 3> term_integrals(const GridFunction& z) const;
  Eigen::ArrayXd source_on_extension(const GridFunction& z) const;

  RiccatiSystem sys_;
  Eigen::ArrayXd nodes_;
  double envelope_rate_ = 1.0;
  std::array<TermTables, 3> tables_;
  std::vector<PointCoefficients> gauss_coeffs_;  // panel-major
  std::vector<PointCoefficients> node_coeffs_;
  std::array<Eigen::Matrix<double, 3, 6>, 16> basis_;
  // Extension past the last node for tail terms.
  Eigen::ArrayXd ext_s_;
  Eigen::ArrayXd ext_w_;
  std::vector<PointCoefficients> ext_coeffs_;
};

[[nodiscard]] GridFunction apply_T(const RiccatiSystem& sys, const GridFunction& z);

enum class IterationStatus { Converged, Diverged, MaxIter };
[[nodiscard]] std::string_view to_string(IterationStatus s) noexcept;

struct PicardOptions {
  double fp_tol = 1e-10;
  int max_iter = 50;
  double eta = 0.25;
  bool keep_iterates = false;
};

struct IterationTrace {
  std::vector<double> iterates;     // ||omega_n||, n = 1..
  std::vector<double> deltas;       // ||omega_n - omega_{n-1}||
  std::vector<double> contraction;  // deltas[n] / deltas[n-1]
  bool converged = false;
  int n_iter = 0;
  IterationStatus status = IterationStatus::MaxIter;
  std::string warning;
  std::vector<GridFunction> snapshots;  // omega_1, omega_2, ... when requested
};

struct FixedPoint {
  GridFunction z;
  IterationTrace trace;
};

/// Plain Picard iteration omega_{n+1} = T omega_n from omega_0 = 0.
[[nodiscard]] FixedPoint iterate_to_fixed_point(const IntegralOperator& T, const PicardOptions& opts = {});

/// Largest delta-ratio among steps whose previous delta exceeds floor (noise-free regime).
[[nodiscard]] double empirical_contraction(const IterationTrace& trace, double floor = 1e-13);

/// Reduced-equation residual at each node using z''' from the integral representation of T z.
[[nodiscard]] Eigen::ArrayXd riccati_residuals(const IntegralOperator& T, const GridFunction& z);

struct PhiSequence {
  std::vector<double> values;  // Phi_1 .. Phi_n
  std::optional<double> limit;
};

/// Phi_1 = A, Phi_n = A (1 + Phi_{n-1} rho varsigma).
[[nodiscard]] PhiSequence phi_sequence(double A, double rho, double varsigma, int n);
/// A / (1 - rho A varsigma); throws NoLimit when rho A varsigma >= 1.
[[nodiscard]] double phi_limit(double A, double rho, double varsigma);

struct BetaInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = false;
  [[nodiscard]] bool contains(double beta) const noexcept {
    return (lo_closed ? beta >= lo : beta > lo) && (hi_closed ? beta <= hi : beta < hi);
  }
  /// The closed endpoint, i.e. the kernel-rate value of beta.
  [[nodiscard]] double natural() const noexcept { return lo_closed ? lo : hi; }
};

/// Admissible exponents of the envelope for the system's root and orientation.
[[nodiscard]] BetaInterval admissible_beta(const CharacteristicData& cd, int i, Orientation o);

/// e(t_n) = int_{t0}^{t_n} exp(-head_rate (t_n - s)) g(s) ds + int_{t_n}^inf exp(-tail_rate (s - t_n)) g(s) ds.
/// Either side may be disabled; head_rate may be negative (growing weight).
[[nodiscard]] Eigen::ArrayXd exponential_envelope(const Eigen::ArrayXd& nodes, const ScalarFunction& g,
                                                  std::optional<double> head_rate, std::optional<double> tail_rate,
                                                  const QuadratureOptions& opts = {});

struct EnvelopeCheck {
  double beta = 0.0;
  double Phi = 0.0;
  std::string domain;  // "tail", "head" or "full"
  bool merged_finite = true;
  double max_ratio = 0.0;        // max of sum_j |z^(j)| / (Phi E); NaN when E is infinite
  double max_ratio_split = 0.0;  // same against the split envelope with kernel rates per side
  double max_ratio_value = 0.0;  // |z| / (Phi E), value channel only
  bool pass = false;
  Eigen::ArrayXd envelope;
  Eigen::ArrayXd envelope_split;
};

/// Checks sum_j |z^(j)(t)| <= Phi * E(t), E(t) = int_domain exp(-beta (t-s)) |p(lambda_i, s)| ds.
/// Printed: i=1 tail, i=2,3 full, i=4 head.  Reflected mirrors this (i=1 head, i=4 tail).
[[nodiscard]] EnvelopeCheck envelope_check(const RiccatiSystem& sys, const CharacteristicData& cd,
                                           const GridFunction& z, double beta, double Phi,
                                           const QuadratureOptions& opts = {});

}  // namespace asymint
