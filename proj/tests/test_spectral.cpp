#include <cmath>
#include <numbers>

#include "doctest.h"
#include "wgqed/spectral.hpp"

using namespace wgqed;
using doctest::Approx;

namespace {
ProbeSeries sampled(double dt, std::size_t n, cplx (*f)(double)) {
  ProbeSeries s;
  s.id = "x";
  for (std::size_t i = 0; i < n; ++i) {
    s.t.push_back(i * dt);
    s.values.push_back(f(i * dt));
  }
  return s;
}
}  // namespace

TEST_CASE("instantaneous frequency of a pure tone") {
  const auto s = sampled(0.01, 500, [](double t) { return std::exp(cplx(0, -2.0 * t)); });
  const auto tr = instantaneous_frequency(s);
  CHECK_FALSE(tr.valid.front());
  CHECK_FALSE(tr.valid.back());
  for (std::size_t i = 1; i + 1 < tr.t.size(); ++i) {
    REQUIRE(tr.valid[i]);
    CHECK(tr.omega[i] == Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("instantaneous frequency of a linear chirp") {
  const auto s = sampled(0.01, 2000, [](double t) { return std::exp(cplx(0, -(t + 0.05 * t * t))); });
  const auto tr = instantaneous_frequency(s);
  for (std::size_t i = 1; i + 1 < tr.t.size(); ++i) CHECK(tr.omega[i] == Approx(1.0 + 0.1 * tr.t[i]).epsilon(1e-9));
}

TEST_CASE("low-amplitude samples are masked") {
  const auto s = sampled(0.01, 1000, [](double t) { return std::exp(-t * t) * std::exp(cplx(0, -t)); });
  const auto tr = instantaneous_frequency(s, 1e-6);
  // masked once the leading stencil sample t + dt drops below the floor
  for (std::size_t i = 1; i + 1 < tr.t.size(); ++i) CHECK(tr.valid[i] == (std::exp(-std::pow(tr.t[i] + 0.01, 2)) >= 1e-6));
}

TEST_CASE("spectrum of a gaussian pulse") {
  // exp(-t^2/2) exp(-i t) -> sqrt(2 pi) exp(-(w - 1)^2 / 2)
  ProbeSeries s;
  for (int i = -2000; i <= 2000; ++i) {
    const double t = i * 0.005;
    s.t.push_back(t);
    s.values.push_back(std::exp(-t * t / 2) * std::exp(cplx(0, -t)));
  }
  SpectrumWindow w;
  w.omega_min = -2.0;
  w.omega_max = 4.0;
  w.points = 61;
  const auto sp = probe_spectrum(s, w);
  CHECK(sp.bin_width == Approx(2 * std::numbers::pi / 20.0).epsilon(1e-3));
  for (std::size_t i = 0; i < sp.omega.size(); ++i) {
    const double exact = std::sqrt(2 * std::numbers::pi) * std::exp(-std::pow(sp.omega[i] - 1.0, 2) / 2);
    CHECK(std::abs(sp.values[i] - exact) < 1e-10);
  }
  CHECK(peak_frequency(sp) == Approx(1.0));
  const auto m = spectral_moments(sp);
  CHECK(m.mean == Approx(1.0).epsilon(1e-6));
  CHECK(m.stddev == Approx(std::sqrt(0.5)).epsilon(1e-3));
  CHECK(power_at(sp, 1.0) == Approx(2 * std::numbers::pi));
}

TEST_CASE("truncated series is rejected") {
  const auto s = sampled(0.01, 100, [](double t) { return cplx(std::exp(-t)); });
  CHECK_THROWS_WITH_AS(probe_spectrum(s, {}), doctest::Contains("series not compactly supported"), SpectralError);
  SpectrumWindow w;
  w.require_compact = false;
  CHECK_NOTHROW(probe_spectrum(s, w));
}

TEST_CASE("transmission estimate needs matching grids") {
  Spectrum a{{0.0, 1.0}, {1.0, 1.0}, 1.0};
  Spectrum b{{0.0, 2.0}, {1.0, 1.0}, 1.0};
  CHECK_THROWS_AS(transmission_estimate(a, b), SpectralError);
  Spectrum c{{0.0, 1.0, 2.0}, {1.0, 0.001, 2.0}, 1.0};
  Spectrum d{{0.0, 1.0, 2.0}, {0.5, 0.0, -2.0}, 1.0};
  const auto e = transmission_estimate(c, d, 0.0, 0.0, 0.01);
  REQUIRE(e.omega.size() == 2);  // middle bin below 1% of peak power
  CHECK(e.t[0] == cplx(0.5));
  CHECK(e.t[1] == cplx(-1.0));
}
