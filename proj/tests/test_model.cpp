#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "lwr/errors.hpp"
#include "lwr/model.hpp"
#include "oracles.hpp"

using namespace lwr;

namespace {

GridState sampled(const ModelParams& p, double (*f)(double, double)) {
  std::vector<double> u(p.n_cells);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = f((i + 0.5) * p.dx(), p.domain_length);
  return GridState(std::move(u), p.dx());
}

double sine_field(double x, double L) { return 0.5 * (1.0 + std::sin(2.0 * std::numbers::pi * x / L)); }

}  // namespace

TEST_CASE("model parameters reject invalid geometry") {
  ModelParams p;
  CHECK_NOTHROW(p.validate());
  p.domain_length = 4.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = ModelParams{};
  p.gamma = 0.5;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = ModelParams{};
  p.n_cells = 8;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = ModelParams{};
  p.k_behind = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("grid state enforces the density range") {
  CHECK_THROWS_AS(GridState({0.2, 1.2}, 0.1), DomainError);
  CHECK_THROWS_AS(GridState({0.2, NAN}, 0.1), DomainError);
  CHECK_THROWS_AS(GridState({0.2, 0.3}, 0.0), DomainError);
  GridState s({0.25, 0.75}, 0.5);
  CHECK(s.mass() == doctest::Approx(0.5));
  CHECK(s.length() == doctest::Approx(1.0));
}

TEST_CASE("flux closed values") {
  CHECK(flux(0.0, 0.3, 0.4, 2.0) == 0.0);
  CHECK(flux(1.0, 0.3, 0.4, 2.0) == 0.0);
  CHECK(flux(1.0 / 3.0, 0.0, 1.0, 2.0) == doctest::Approx(4.0 * oracle::e / 27.0).epsilon(1e-14));
  CHECK(flux(0.5, 0.3, 0.7, 2.0) == doctest::Approx(0.125 * std::exp(0.4)).epsilon(1e-14));
  CHECK(flux(0.5, 0.3, 0.7, 3.0) == doctest::Approx(0.0625 * std::exp(0.4)).epsilon(1e-14));
}

TEST_CASE("flux rejects out-of-range density and echoes it") {
  try {
    flux(1.5, 0.0, 0.0, 2.0);
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("1.5") != std::string::npos);
  }
}

TEST_CASE("derivative table") {
  CHECK(flux_derivatives(0.0, 0.0, 0.0).f11 == doctest::Approx(-4.0));
  for (double a : {0.0, 0.3, 1.0}) CHECK(std::abs(flux_derivatives(2.0 / 3.0, a, a).f11) < 1e-15);
  CHECK_THROWS_AS(flux_derivatives(0.4, 0.2, 0.9, 3.0), UnsupportedConfiguration);

  const auto d = flux_derivatives(0.4, 0.2, 0.9);
  const auto o = oracle::finite_difference_partials(0.4, 0.2, 0.9);
  const double got[] = {d.f1, d.f2, d.f3, d.f11, d.f22, d.f33, d.f12, d.f13, d.f23};
  const double want[] = {o.f1, o.f2, o.f3, o.f11, o.f22, o.f33, o.f12, o.f13, o.f23};
  for (int k = 0; k < 9; ++k) CHECK(std::abs(got[k] - want[k]) <= 1e-6 * std::abs(want[k]));
}

TEST_CASE("derivative identities on random inputs") {
  oracle::Rng rng(7);
  for (int k = 0; k < 1000; ++k) {
    const double u = rng(0, 1), a = rng(0, 1), b = rng(0, 1), v = rng(-1, 1), w = rng(-1, 1);
    const auto d = flux_derivatives(u, a, b);
    CHECK(std::abs(d.f2 + d.f3) <= 1e-15);
    CHECK(d.f22 == d.f33);
    CHECK(std::abs(d.f22 + d.f23) <= 1e-15);
    const double quad = 2.0 * d.f23 * v * w + d.f22 * v * v + d.f33 * w * w;
    const double closed = u * (1 - u) * (1 - u) * (v - w) * (v - w) * std::exp(b - a);
    CHECK(quad >= -1e-15);
    CHECK(quad == doctest::Approx(closed).epsilon(1e-12));
  }
}

TEST_CASE("window averages of constant fields") {
  ModelParams p;
  p.n_cells = 64;
  p.k_ahead = 0.7;
  p.look_ahead = 1.3;
  p.look_behind = 0.45;
  for (double c : {0.0, 0.35, 1.0}) {
    GridState s(std::vector<double>(p.n_cells, c), p.dx());
    for (double v : nonlocal_ahead(s, p)) CHECK(v == doctest::Approx(p.k_ahead * c).epsilon(1e-13));
    for (double v : nonlocal_behind(s, p)) CHECK(v == doctest::Approx(p.k_behind * c).epsilon(1e-13));
  }
}

TEST_CASE("window averages match a fine Riemann sum") {
  ModelParams p;
  p.n_cells = 256;
  const auto s = sampled(p, sine_field);
  const auto ubar = nonlocal_ahead(s, p);
  const auto utilde = nonlocal_behind(s, p);
  const double tol = 10.0 * p.dx() * p.dx();
  auto f = [&](double x) { return sine_field(x, p.domain_length); };
  for (std::size_t i = 0; i < p.n_cells; i += 17) {
    const double x = s.cell_center(i);
    CHECK(std::abs(ubar[i] - oracle::riemann(f, x, x + 1.0)) <= tol);
    CHECK(std::abs(utilde[i] - oracle::riemann(f, x - 1.0, x)) <= tol);
  }
}

TEST_CASE("window averages converge at second order") {
  auto error_at = [](std::size_t n) {
    ModelParams p;
    p.n_cells = n;
    p.look_ahead = 0.77;
    const auto s = sampled(p, sine_field);
    const auto ubar = nonlocal_ahead(s, p);
    auto f = [&](double x) { return sine_field(x, p.domain_length); };
    double err = 0.0;
    for (std::size_t i = 0; i < n; i += n / 16) {
      const double x = s.cell_center(i);
      err = std::max(err, std::abs(ubar[i] - oracle::riemann(f, x, x + 0.77, 200'000) / 0.77));
    }
    return err;
  };
  const double e1 = error_at(64), e2 = error_at(128), e3 = error_at(256);
  CHECK(std::log2(e1 / e2) > 1.8);
  CHECK(std::log2(e2 / e3) > 1.8);
}

TEST_CASE("behind window mirrors ahead window for symmetric data") {
  ModelParams p;
  p.n_cells = 128;
  std::vector<double> u(p.n_cells);
  const std::size_t c = 40;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const long d = static_cast<long>(i) - static_cast<long>(c);
    const long n = static_cast<long>(p.n_cells);
    const long m = ((d % n) + n) % n;
    const long dist = std::min(m, n - m);
    u[i] = 0.2 + 0.5 * std::exp(-0.01 * dist * dist);
  }
  GridState s(u, p.dx());
  const auto ubar = nonlocal_ahead(s, p);
  const auto utilde = nonlocal_behind(s, p);
  for (std::size_t k = 0; k < p.n_cells; ++k) {
    const std::size_t right = (c + k) % p.n_cells;
    const std::size_t left = (c + p.n_cells - k) % p.n_cells;
    CHECK(utilde[left] == doctest::Approx(ubar[right]).epsilon(1e-12));
  }
}

TEST_CASE("window derivatives use the difference identities") {
  ModelParams p;
  p.n_cells = 256;
  p.k_ahead = 1.4;
  p.look_ahead = 0.8;
  const auto s = sampled(p, sine_field);
  const auto fields = nonlocal_fields(s, p);
  PeriodicProfile prof(s.values(), s.dx());
  for (std::size_t i = 0; i < p.n_cells; i += 13) {
    const double x = s.cell_center(i);
    CHECK(fields.ubar_x[i] ==
          doctest::Approx(1.4 / 0.8 * (prof.value_at(x + 0.8) - prof.value_at(x))).epsilon(1e-12));
    CHECK(fields.utilde_x[i] ==
          doctest::Approx(prof.value_at(x) - prof.value_at(x - 1.0)).epsilon(1e-12));
    CHECK(std::abs(fields.ubar_x[i]) <= 1.4 / 0.8 + 1e-12);
    CHECK(std::abs(fields.utilde_x[i]) <= 1.0 + 1e-12);
  }
}

TEST_CASE("sum of both windows covers the two-sided integral") {
  ModelParams p;
  p.n_cells = 256;
  const auto s = sampled(p, sine_field);
  const auto ubar = nonlocal_ahead(s, p);
  const auto utilde = nonlocal_behind(s, p);
  auto f = [&](double x) { return sine_field(x, p.domain_length); };
  for (std::size_t i = 0; i < p.n_cells; i += 31) {
    const double x = s.cell_center(i);
    CHECK(std::abs(ubar[i] + utilde[i] - oracle::riemann(f, x - 1.0, x + 1.0)) <=
          20.0 * p.dx() * p.dx());
  }
}

TEST_CASE("periodic profile integrates across the wrap") {
  const std::vector<double> v{0.1, 0.4, 0.9, 0.3};
  PeriodicProfile prof(v, 0.25);
  CHECK(prof.period() == doctest::Approx(1.0));
  CHECK(prof.integral(0.0, 1.0) == doctest::Approx(0.425));
  CHECK(prof.integral(0.8, 1.3) == doctest::Approx(prof.integral(-0.2, 0.3)));
  CHECK(prof.integral(0.0, 3.0) == doctest::Approx(3.0 * 0.425));
  CHECK(prof.value_at(0.125) == doctest::Approx(0.1));
  CHECK(prof.value_at(1.125) == doctest::Approx(0.1));
}
