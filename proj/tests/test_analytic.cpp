#include <cmath>
#include <numbers>

#include "doctest.h"
#include "wgqed/analytic.hpp"

using namespace wgqed;
using namespace wgqed::analytic;
using doctest::Approx;

TEST_CASE("gamma_rate") {
  CHECK(gamma_rate(1.0, 1.0) == 0.5);
  CHECK(gamma_rate(0.0, 3.0) == 0.0);
  CHECK(gamma_rate(cplx(1, 1), 2.0) == Approx(0.5));
}

TEST_CASE("wavevector") {
  CHECK(wavevector(1.0, 1.0, 1.0) == 0.0);
  CHECK(wavevector(3.0, 1.0, 2.0) == 1.0);
  CHECK(wavevector(0.0, 1.0, 1.0) == -1.0);
}

TEST_CASE("transmission examples") {
  CHECK(std::abs(transmission(0.0, 0.0, 0.0, 0.5) - cplx(-1.0)) < 1e-15);
  CHECK(std::abs(transmission(0.0, 0.0, 0.5, 0.5)) < 1e-15);
  const cplx under = transmission(0.0, 0.0, 1.0, 0.5);
  CHECK(under.real() == Approx(1.0 / 3.0));
  CHECK(std::norm(under) == Approx(0.1111).epsilon(1e-3));
  CHECK(std::abs(transmission(1e9, 0.0, 0.3, 0.5) - 1.0) < 1e-8);
  CHECK(transmission(0.0, 0.0, 0.0, 0.0) == cplx(1.0));  // uncoupled lossless resonance
}

TEST_CASE("transmission properties") {
  for (double inv_tau : {0.0, 0.05, 0.5, 2.0})
    for (double gamma : {0.01, 0.5, 3.0}) {
      const cplx at_res = transmission(1.5, 1.5, inv_tau, gamma);
      CHECK(at_res.imag() == Approx(0.0));
      CHECK(at_res.real() == Approx((inv_tau - gamma) / (inv_tau + gamma)));
      for (double w = -3.0; w <= 3.0; w += 0.37) {
        const double mag = std::abs(transmission(w, 0.2, inv_tau, gamma));
        CHECK(mag <= 1.0 + 1e-15);
        if (inv_tau == 0.0) CHECK(mag == Approx(1.0));
        else CHECK(mag < 1.0);
        CHECK(std::abs(transmission(w + 7.5, 7.7, inv_tau, gamma) - transmission(w, 0.2, inv_tau, gamma)) < 1e-12);
      }
    }
}

TEST_CASE("coupling regime") {
  CHECK(coupling_regime(0.5, 2.0, 1e-9) == CouplingRegime::CriticallyCoupled);
  CHECK(coupling_regime(0.5, 1.0, 1e-9) == CouplingRegime::UnderCoupled);
  CHECK(coupling_regime(0.5, kInfinity, 1e-9) == CouplingRegime::OverCoupled);
  // perturbations inside the tolerance stay critical
  CHECK(coupling_regime(0.5 * (1 + 5e-10), 2.0, 1e-9) == CouplingRegime::CriticallyCoupled);
  CHECK(coupling_regime(0.5 * (1 - 5e-10), 2.0, 1e-9) == CouplingRegime::CriticallyCoupled);
}

TEST_CASE("transmission curve samples the band") {
  const auto c = transmission_curve(-1.0, 1.0, 5, 0.0, 2.0, 0.5);
  REQUIRE(c.frequencies.size() == 5);
  CHECK(c.frequencies.front() == -1.0);
  CHECK(c.frequencies.back() == 1.0);
  CHECK(std::abs(c.values[2]) < 1e-15);
}

TEST_CASE("steady-state profile") {
  SteadyStateInput in;
  in.omega = 0.0;
  in.omega_c = 0.0;
  in.V = 1.0;  // gamma = 0.5
  CHECK(std::abs(steady_state_profile(-1.0, in).phi - cplx(1.0)) < 1e-15);
  CHECK(std::abs(steady_state_profile(1.0, in).phi - cplx(-1.0)) < 1e-15);
  in.inv_tau = 0.5;
  CHECK(std::norm(steady_state_profile(0.0, in).cavity) == Approx(1.0));
  // downstream / upstream ratio is t
  in.omega = 0.3;
  in.omega_0 = 0.1;
  const cplx up = steady_state_profile(-2.0, in).phi, down = steady_state_profile(2.0, in).phi;
  const double Q = wavevector(in.omega, in.omega_0, in.v_g);
  const cplx ratio = (down * std::exp(cplx(0, -2.0 * Q))) / (up * std::exp(cplx(0, 2.0 * Q)));
  CHECK(std::abs(ratio - transmission(0.3, 0.0, 0.5, 0.5)) < 1e-14);
}

TEST_CASE("principal-value kernel") {
  const double pi = std::numbers::pi;
  const cplx a = pv_kernel_integral(1.0, 1.0);
  CHECK(a.real() == Approx(pi * std::sin(1.0)).epsilon(1e-4));
  CHECK(a.imag() == Approx(-pi * std::cos(1.0)).epsilon(1e-4));
  const cplx b = pv_kernel_integral(-1.0, 1.0);
  CHECK(std::abs(b - std::conj(a)) < 1e-6);
  CHECK(std::abs(pv_kernel_integral(1.0, 0.0) - cplx(0, -pi)) < 1e-4);
  CHECK(std::abs(pv_kernel_residue(2.0, 0.5) - cplx(0, -pi) * std::exp(cplx(0, 1.0))) < 1e-15);
}

TEST_CASE("adiabatic shift check") {
  CHECK(adiabatic_shift_check(1.0, 1.0, 2.0, 2.0) == 0.0);
  CHECK(adiabatic_shift_check(1.0, 1.0, 1.0, 2.0) == 0.5);
}
