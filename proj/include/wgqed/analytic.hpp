#pragma once

// Closed-form steady-state results for a single waveguide side-coupled to a
// lossy single-mode cavity, plus a numerical principal-value quadrature of the
// Fourier kernel used to derive them.

#include <stdexcept>
#include <vector>

#include "wgqed/model.hpp"

namespace wgqed::analytic {

/// Thrown for arguments outside an operation's mathematical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Gamma = |V|^2 / (2 v_g), the coupling-induced amplitude decay rate.
double gamma_rate(cplx V, double v_g);

/// Q = (omega - omega_0) / v_g.
double wavevector(double omega, double omega_0, double v_g);

/// Downstream/upstream amplitude ratio
///   t = (w - w_c + i/tau - i Gamma) / (w - w_c + i/tau + i Gamma).
/// `inv_tau` is 1/tau_c (0 for a lossless cavity).
cplx transmission(double omega, double omega_c, double inv_tau, double gamma);

enum class CouplingRegime { UnderCoupled, CriticallyCoupled, OverCoupled };

const char* to_string(CouplingRegime r);

/// Classifies by the product Gamma * tau_c against 1 with relative tolerance.
/// Gamma = 0 is always UnderCoupled; tau_c = inf with Gamma > 0 is OverCoupled.
CouplingRegime coupling_regime(double gamma, double tau_c, double rel_tol);

struct TransmissionCurve {
  std::vector<double> frequencies;
  std::vector<cplx> values;
  double gamma = 0.0;
  double tau_c = kInfinity;
  double omega_c = 0.0;
};

/// Samples t(omega) on `points` equally spaced frequencies in [lo, hi].
TransmissionCurve transmission_curve(double lo, double hi, std::size_t points, double omega_c, double tau_c,
                                     double gamma);

struct SteadyStateInput {
  double omega = 0.0;
  double omega_c = 0.0;
  double inv_tau = 0.0;
  cplx V{1.0, 0.0};
  double v_g = 1.0;
  double omega_0 = 0.0;
  cplx incident{1.0, 0.0};  // upstream amplitude phi_0
};

struct SteadyStatePoint {
  cplx phi;
  cplx cavity;
};

/// Stationary scattering state with the coupler at x = 0: phi_0 e^{iQx}
/// upstream, t phi_0 e^{iQx} downstream. At x = 0 the field is the mean of the
/// two sides, which is the value the cavity equation samples; the cavity
/// amplitude is V* phi(0) / (w - w_c + i/tau).
SteadyStatePoint steady_state_profile(double x, const SteadyStateInput& in);

struct PvOptions {
  double cutoff = 0.0;  // 0 selects 1e3 * max(1, |Q|)
  double step = 1e-3;
  /// Adds the analytic large-|alpha| tails so the result estimates the
  /// infinite-range principal value instead of the truncated one.
  bool tail_correction = true;
};

/// Principal value of  int dalpha exp(-i alpha x) / (alpha + Q)  over
/// [-cutoff, cutoff] (plus tails when enabled), by trapezoid quadrature on a
/// grid symmetric about the pole. The window |alpha + Q| < 8 * step is
/// integrated in closed form through the sine integral.
cplx pv_kernel_integral(double x, double Q, const PvOptions& opts = {});

/// Closed form of the same integral on the full line: -i pi e^{iQx} for x > 0,
/// +i pi e^{iQx} for x < 0.
cplx pv_kernel_residue(double x, double Q);

/// |U_after/w_after - U_before/w_before| / (U_before/w_before).
double adiabatic_shift_check(double U_before, double omega_before, double U_after, double omega_after);

/// Sine integral Si(z) = int_0^z sin(t)/t dt.
double sine_integral(double z);

}  // namespace wgqed::analytic
