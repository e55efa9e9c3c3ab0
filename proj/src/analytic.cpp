#include "wgqed/analytic.hpp"

#include <cmath>
#include <numbers>

namespace wgqed::analytic {

namespace {

constexpr cplx I{0.0, 1.0};

void require_positive_velocity(double v_g) {
  if (!(v_g > 0.0) || !std::isfinite(v_g)) throw DomainError("group velocity must be positive");
}

// int_B^inf exp(-i beta s) / beta dbeta = E1(i s B), asymptotic series.
// Valid for |s| B >= 20; truncated at the smallest term.
cplx oscillatory_tail(double s, double B) {
  const cplx w = I * (s * B);
  cplx term = 1.0;
  cplx sum = 1.0;
  for (int k = 1; k < 40; ++k) {
    const cplx next = term * (-static_cast<double>(k) / w);
    if (std::abs(next) > std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-18) break;
  }
  return std::exp(-w) / w * sum;
}

}  // namespace

double gamma_rate(cplx V, double v_g) {
  require_positive_velocity(v_g);
  return std::norm(V) / (2.0 * v_g);
}

double wavevector(double omega, double omega_0, double v_g) {
  require_positive_velocity(v_g);
  return (omega - omega_0) / v_g;
}

cplx transmission(double omega, double omega_c, double inv_tau, double gamma) {
  const double detuning = omega - omega_c;
  if (gamma == 0.0 && inv_tau == 0.0 && detuning == 0.0) return 1.0;
  const cplx base{detuning, inv_tau};
  return (base - I * gamma) / (base + I * gamma);
}

const char* to_string(CouplingRegime r) {
  switch (r) {
    case CouplingRegime::UnderCoupled: return "under";
    case CouplingRegime::CriticallyCoupled: return "critical";
    case CouplingRegime::OverCoupled: return "over";
  }
  return "?";
}

CouplingRegime coupling_regime(double gamma, double tau_c, double rel_tol) {
  if (!(gamma > 0.0)) return CouplingRegime::UnderCoupled;
  if (std::isinf(tau_c)) return CouplingRegime::OverCoupled;
  const double product = gamma * tau_c;
  if (std::abs(product - 1.0) <= rel_tol) return CouplingRegime::CriticallyCoupled;
  return product < 1.0 - rel_tol ? CouplingRegime::UnderCoupled : CouplingRegime::OverCoupled;
}

TransmissionCurve transmission_curve(double lo, double hi, std::size_t points, double omega_c, double tau_c,
                                     double gamma) {
  TransmissionCurve curve;
  curve.gamma = gamma;
  curve.tau_c = tau_c;
  curve.omega_c = omega_c;
  const double inv_tau = std::isinf(tau_c) ? 0.0 : 1.0 / tau_c;
  for (std::size_t i = 0; i < points; ++i) {
    const double w = points == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    curve.frequencies.push_back(w);
    curve.values.push_back(transmission(w, omega_c, inv_tau, gamma));
  }
  return curve;
}

SteadyStatePoint steady_state_profile(double x, const SteadyStateInput& in) {
  const double gamma = gamma_rate(in.V, in.v_g);
  const double Q = wavevector(in.omega, in.omega_0, in.v_g);
  const cplx t = transmission(in.omega, in.omega_c, in.inv_tau, gamma);
  const cplx wave = std::exp(I * (Q * x));
  const cplx at_coupler = 0.5 * (1.0 + t) * in.incident;

  SteadyStatePoint out;
  if (x < 0.0) out.phi = in.incident * wave;
  else if (x > 0.0) out.phi = t * in.incident * wave;
  else out.phi = at_coupler;

  const cplx D{in.omega - in.omega_c, in.inv_tau};
  if (std::abs(D) > 0.0) {
    out.cavity = std::conj(in.V) * at_coupler / D;
  } else {
    // Lossless and on resonance: phi(0) = 0 but the cavity carries the
    // finite limit V* phi_0 / (D + i Gamma).
    out.cavity = std::conj(in.V) * in.incident / (D + I * gamma);
  }
  return out;
}

double sine_integral(double z) {
  if (z < 0.0) return -sine_integral(-z);
  if (z <= 20.0) {
    long double sum = 0.0L;
    long double power = z;  // z^(2k+1) / (2k+1)!
    const long double z2 = static_cast<long double>(z) * z;
    for (int k = 0; k < 200; ++k) {
      const long double term = power / (2 * k + 1);
      sum += (k % 2 == 0) ? term : -term;
      power *= z2 / ((2.0L * k + 2.0L) * (2.0L * k + 3.0L));
      if (power < 1e-30L) break;
    }
    return static_cast<double>(sum);
  }
  // Si(z) = pi/2 + Im E1(i z)
  return std::numbers::pi / 2.0 + oscillatory_tail(1.0, z).imag();
}

cplx pv_kernel_integral(double x, double Q, const PvOptions& opts) {
  if (x == 0.0 || !std::isfinite(x)) throw DomainError("pv_kernel_integral requires x != 0");
  if (!(opts.step > 0.0)) throw DomainError("quadrature step must be positive");
  const double cutoff = opts.cutoff > 0.0 ? opts.cutoff : 1e3 * std::max(1.0, std::abs(Q));
  const double h = opts.step;
  const double eta = 8.0 * h;
  const double reach = cutoff - std::abs(Q);  // symmetric half-width about the pole
  if (!(reach > eta)) throw DomainError("cutoff must exceed |Q| by more than the exclusion window");

  auto integrand = [x, Q](double alpha) { return std::exp(-I * (alpha * x)) / (alpha + Q); };
  const double pole = -Q;

  // Symmetric pairs u in [eta, reach]: the odd 1/u part cancels node by node.
  const auto n_sym = static_cast<long>(std::ceil((reach - eta) / h));
  const double hs = (reach - eta) / static_cast<double>(n_sym);
  cplx sym = 0.0;
  for (long j = 0; j <= n_sym; ++j) {
    const double u = eta + hs * static_cast<double>(j);
    const cplx pair = integrand(pole + u) + integrand(pole - u);
    sym += (j == 0 || j == n_sym) ? 0.5 * pair : pair;
  }
  sym *= hs;

  // One-sided remainder between the far end of the symmetric band and the cutoff.
  cplx side = 0.0;
  const double gap = std::abs(Q) * 2.0;
  if (gap > 0.0) {
    const double lo = Q > 0.0 ? pole + reach : -cutoff;
    const double hi = Q > 0.0 ? cutoff : pole - reach;
    const auto n_side = std::max<long>(1, static_cast<long>(std::ceil((hi - lo) / h)));
    const double hh = (hi - lo) / static_cast<double>(n_side);
    for (long j = 0; j <= n_side; ++j) {
      const cplx f = integrand(lo + hh * static_cast<double>(j));
      side += (j == 0 || j == n_side) ? 0.5 * f : f;
    }
    side *= hh;
  }

  // Exclusion window |alpha - pole| < eta: P int e^{-iux}/u du = -2i Si(eta x).
  const cplx window = std::exp(I * (Q * x)) * (-2.0 * I * sine_integral(eta * x));

  cplx total = sym + side + window;
  if (opts.tail_correction) {
    const cplx phase = std::exp(I * (Q * x));
    total += phase * oscillatory_tail(x, cutoff + Q);
    total -= phase * oscillatory_tail(-x, cutoff - Q);
  }
  return total;
}

cplx pv_kernel_residue(double x, double Q) {
  if (x == 0.0) throw DomainError("pv_kernel_residue requires x != 0");
  const cplx phase = std::exp(I * (Q * x));
  return (x > 0.0 ? -I : I) * std::numbers::pi * phase;
}

double adiabatic_shift_check(double U_before, double omega_before, double U_after, double omega_after) {
  if (!(omega_before > 0.0) || !(omega_after > 0.0)) throw DomainError("frequencies must be positive");
  if (!(U_before > 0.0)) throw DomainError("initial energy must be positive");
  const double before = U_before / omega_before;
  const double after = U_after / omega_after;
  return std::abs(after - before) / before;
}

}  // namespace wgqed::analytic
