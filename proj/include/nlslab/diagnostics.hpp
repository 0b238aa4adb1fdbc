#pragma once

#include <optional>
#include <vector>

#include "nlslab/evolution.hpp"
#include "nlslab/field.hpp"
#include "nlslab/functionals.hpp"
#include "nlslab/modulation.hpp"

namespace nlslab {

/// Plateau 1 on |x| <= 1, C^2 quintic smoothstep down to 0 on 1 < |x| < 2.
enum class TaperProfile { QuinticSmoothstep };

double taper(TaperProfile p, double x);

struct MorawetzConfig {
  /// Plateau scale; phi(x) = x on |x| <= R / eta1.
  double R = 8.0;
  double eta1 = 0.5;
  /// u is projected with the smooth P_{<= cutoff_level + 9}.
  int cutoff_level = 0;
  TaperProfile psi = TaperProfile::QuinticSmoothstep;

  /// R = L / 4, eta1 = 1/2.
  static MorawetzConfig for_grid(const Grid& g);
  /// InputError unless R > 0 and eta1 in (0, 1].
  void validate() const;
};

/// phi(x) = int_0^x psi^2(eta1 y / R) dy; odd, equal to x on the plateau.
double morawetz_weight(const MorawetzConfig& cfg, double x);

/// int phi Im[conj(P u) d_x P u] dx with P = P_{<= k + 9}.
double morawetz_potential(const Field& u, const MorawetzConfig& cfg);

/// int x^2 |u|^2.
double variance(const Field& u);

/// 4 Im int x conj(u) u_x, the right side of the first variance identity.
double variance_rate(const Field& u);

/// Threshold on edge_magnitude above which a sample is flagged as leaking.
/// Sits above the ~1e-7 radiation floor of the default solver.
inline constexpr double kLeakThreshold = 1e-6;

struct VirialPoint {
  double t = 0.0;
  double variance = 0.0;
  double dv_dt = 0.0;    // finite differences in t
  double d2v_dt2 = 0.0;
  double rate = 0.0;      // 4 Im int x conj(u) u_x
  double energy16 = 0.0;  // 16 E(u)
  double first_residual = 0.0;   // |dv_dt - rate|
  double second_residual = 0.0;   // |d2v_dt2 - energy16|
  bool leak = false;
};

/// Variance identities along stored samples (at least three, strictly
/// increasing times, else InputError).
std::vector<VirialPoint> variance_and_virial(const std::vector<double>& times, const std::vector<Field>& fields);
std::vector<VirialPoint> variance_and_virial(const Trajectory& traj);

/// E(P_{<= k + 9} u) with the smooth projection.
double truncated_energy(const Field& u, int k);

struct TruncatedEnergyReport {
  int k = 0;
  std::vector<double> t;
  std::vector<double> energy;
  /// sup |E(P u(t))| and sup |E(P u(t)) - E(P u(t_0))| over the window.
  double sup_abs = 0.0;
  double drift = 0.0;
  /// int ||eps||^2 lambda^{-2} dt over the attached modulation series.
  std::optional<double> eps_integral;
  /// mean of ||eps||^2 over the series frames.
  std::optional<double> eps_sq_mean;
};

TruncatedEnergyReport truncated_energy_drift(const Trajectory& traj, int k, const ModulationSeries* series = nullptr);

/// 2^{i/2} ||(P_{>= i} u)(P_{<= i-3} u)||_{L^2} at fixed time, smooth projections
/// with P_{>= i} = 1 - P_{<= i-1}. InputError for i < 3.
double bilinear_interaction(const Field& u, int i);

struct DiagnosticSample {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  /// NaN for fields where the ratio is undefined.
  double gn_ratio = 0.0;
  double variance = 0.0;
  double morawetz = 0.0;
  double truncated_energy = 0.0;
  std::optional<double> eps_l2;
};

DiagnosticSample sample_diagnostics(double t, const Field& u, const MorawetzConfig& cfg, int k,
                                    std::optional<double> eps_l2 = std::nullopt);

struct EpsStatistics {
  std::size_t frames = 0;
  double max = 0.0;
  double mean = 0.0;
  double rms = 0.0;
  double last = 0.0;
  /// int ||eps||^2 lambda^{-2} dt (trapezoid in t).
  double weighted_integral = 0.0;
  /// int ||eps||^2 ds.
  double s_integral = 0.0;
};

/// Summary of the eps_l2 series; InputError on an empty series.
EpsStatistics eps_statistics(const ModulationSeries& series);

}  // namespace nlslab
