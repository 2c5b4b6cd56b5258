#pragma once

// Profile-level model of the conformally changed finite-volume metric on R^3:
// the blocks E(k) = [0, k] x S^1 with dr^2 + e^{-2k u(r/k)} dtheta^2, the
// piecewise potentials on the pieces Sigma_i, the gradient-flow distance
// bound and the log-space volume / distance estimates.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "qdecay/curvature.hpp"
#include "qdecay/log_quantity.hpp"
#include "qdecay/smooth.hpp"

namespace qdecay {

// u(s) = s on [0, 1/3], 1 on [1/2, 1], and s + (1 - s) psi(6s - 2) between.
double u_profile(double s);

template <class S>
S u_profile_expr(const S& s);

// f(r) = e^{-k u(r/k)} on [0, k] over the circle of length 2 pi.
WarpedProfile e_block_profile(int k);

// ---------------------------------------------------------------------------
// Potentials

enum class PieceKind { even, odd };
// E1, E2, E3 are the ends of an even piece, E the end of an odd piece.
enum class PieceEnd { E1, E2, E3, E };

std::string to_string(PieceEnd end);

struct MorsePotential {
  int piece = 1;  // i in Sigma_i
  PieceKind kind = PieceKind::odd;
  int j = 0;      // i = 2j or i = 2j + 1
  double offset = 0.0;
  std::vector<std::pair<PieceEnd, double>> end_slopes;
  std::array<double, 2> critical_window{};  // range of phi on the core
  double critical_value = 0.0;  // saddle (even) or maximum (odd)
  int block_length(PieceEnd end) const;     // k of the block E(k) on that end
};

MorsePotential prop3_piece(int piece);

// phi on the given end of Sigma_piece at distance d from the core.
double prop3_potential(int piece, PieceEnd end, double distance);

// Epsilon_i = e^{-i}.
double circle_length(int i);

struct GluingRow {
  int j = 0;
  std::string relation;
  double lhs = 0.0;
  double rhs = 0.0;
  double defect = 0.0;  // |lhs - rhs| / max(1, |rhs|)
};

// Potential continuity and circle-length matching across every gluing of
// the pieces with index <= 2 j_max + 2.
std::vector<GluingRow> prop3_gluing_table(int j_max);

// ---------------------------------------------------------------------------
// Gradient flow

// |grad phi| along a descending flow line as a function of the potential
// drop u in [0, length]; it may vanish like sqrt|u - u_c| at the listed u_c.
struct FlowProfile {
  double length = 0.0;
  std::function<double(double)> gradient;
  std::vector<double> critical;
  std::vector<double> breaks;  // further points where the gradient has kinks
  // Gradient at signed offset d from the nearest critical point, so that
  // the quadrature next to a critical point avoids rounding c + d. Optional.
  std::function<double(double)> gradient_offset;
};

// The flow from the far end of E1 on Sigma_{2j} down to the first torus.
FlowProfile prop3_flow_profile(int j);

struct FlowBound {
  double total = 0.0;      // int_0^L e^{-u} du / |grad phi|, substitution quadrature
  double reference = 0.0;  // same integral by tanh-sinh quadrature
  double D_fitted = 0.0;   // max over windows of int_x^{x+1} du / |grad phi|
  double bound = 0.0;      // D_window / (1 - e^{-1})
  bool windows_ok = false;
  bool total_ok = false;
  std::vector<std::pair<double, double>> windows;  // (x, window integral)
};

FlowBound prop3_gradient_flow_bound(const FlowProfile& profile, double D_window);

// ---------------------------------------------------------------------------
// Log-space estimates

struct Prop3Estimate {
  int j = 1;
  LogQuantity volume;    // vol(F_j)
  LogQuantity t_lower;   // lower bound for t_{j+1}
  double log_ratio = 0.0;  // log vol(F_j) - 3 log t_lower
  double log_volume_quadrature = 0.0;
  double log_t_quadrature = 0.0;
};

Prop3Estimate prop3_log_estimates(int j);

// Least-squares slope of log_ratio against j.
double prop3_ratio_slope(const std::vector<Prop3Estimate>& rows);

// ---------------------------------------------------------------------------

template <class S>
S u_profile_expr(const S& s) {
  const double sv = value(s);
  if (sv <= 1.0 / 3.0) return s;
  if (sv >= 0.5) return S(1.0);
  return s + (1.0 - s) * smooth_step(6.0 * s - 2.0);
}

}  // namespace qdecay
