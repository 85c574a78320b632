#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "afd/engine.hpp"
#include "afd/simd.hpp"
#include "afd/solver.hpp"

using namespace afd;

namespace {

ExponentSet aniso() { return compute_exponents(ModelParams{2, {0.6, 0.8}, false}); }

Field bump(const Grid& g, double mass = 1.0, double radius = 1.5, std::vector<double> center = {}) {
  DataParams p;
  p.mass = mass;
  p.radius = radius;
  p.center = std::move(center);
  return init_data(DataKind::bump, p, g);
}

}  // namespace

TEST_CASE("data generators hit the requested mass") {
  const Grid g = Grid::cube(2, 6.0, 61);
  CHECK(bump(g, 2.5).mass() == doctest::Approx(2.5).epsilon(1e-12));
  DataParams p;
  p.semi_axes = {2.0, 1.0};
  CHECK(init_data(DataKind::ellipse_bump, p, g).mass() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(init_data(DataKind::mollified_box, p, g).mass() == doctest::Approx(1.0).epsilon(1e-12));
  p.seed = 9;
  p.radius = 2.0;
  const Field a = init_data(DataKind::random_bumps, p, g);
  const Field b = init_data(DataKind::random_bumps, p, g);
  CHECK(max_distance(a, b) == 0.0);
  p.seed = 10;
  CHECK(max_distance(a, init_data(DataKind::random_bumps, p, g)) > 0.0);
  p.radius = 10.0;
  CHECK_THROWS(init_data(DataKind::bump, p, g));
}

TEST_CASE("regularization floor") {
  const Grid g = Grid::cube(2, 4.0, 21);
  const Field u = bump(g);
  SolverConfig c;
  c.eps_rel = 1e-6;
  CHECK(resolve_eps(u, c) == doctest::Approx(1e-6 * u.max()));
  c.eps = 3e-4;
  CHECK(resolve_eps(u, c) == 3e-4);
}

TEST_CASE("mass balance: interior change equals boundary outflow") {
  const Grid g = Grid::cube(2, 4.0, 41);
  SolverConfig c;
  c.t_end = 0.5;
  c.record_every = 50;
  const RunResult r = run(bump(g), c, aniso());
  const auto& recs = r.diagnostics.records;
  REQUIRE(recs.size() >= 2);
  for (const auto& rec : recs) {
    CHECK(rec.mass + rec.outflow == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rec.min >= 0.0);
  }
  CHECK(r.diagnostics.max_balance_error < 1e-14);
  CHECK(recs.back().outflow > 0.0);
}

TEST_CASE("comparison principle: ordered data stay ordered") {
  const Grid g = Grid::cube(2, 5.0, 51);
  const Field lo = bump(g, 1.0);
  Field hi = lo;
  for (std::size_t k = 0; k < hi.size(); ++k) hi[k] *= 1.3;
  SolverConfig c;
  c.t_end = 0.3;
  c.eps = 1e-9;
  const RunResult a = run(lo, c, aniso());
  const RunResult b = run(hi, c, aniso());
  CHECK(positive_part_distance(a.final, b.final) == 0.0);
}

TEST_CASE("reflection symmetry is exact") {
  const Grid g = Grid::cube(2, 5.0, 41);
  SolverConfig c;
  c.t_end = 0.2;
  const RunResult r = run(bump(g), c, aniso());
  const Grid& gg = r.final.grid();
  double worst = 0.0;
  gg.for_each_node([&](std::size_t k, std::span<const std::size_t> idx) {
    const std::size_t m0[2] = {gg.points(0) - 1 - idx[0], idx[1]};
    const std::size_t m1[2] = {idx[0], gg.points(1) - 1 - idx[1]};
    worst = std::max(worst, std::abs(r.final[k] - r.final[gg.flatten(m0)]));
    worst = std::max(worst, std::abs(r.final[k] - r.final[gg.flatten(m1)]));
  });
  CHECK(worst == 0.0);
}

TEST_CASE("norms are nonincreasing and the energy inequality holds") {
  const Grid g = Grid::cube(2, 5.0, 51);
  SolverConfig c;
  c.t_end = 0.5;
  c.record_every = 20;
  c.norms_p = {2.0, 3.0};
  const RunResult r = run(bump(g), c, aniso());
  const auto& recs = r.diagnostics.records;
  for (std::size_t k = 1; k < recs.size(); ++k) {
    CHECK(recs[k].linf <= recs[k - 1].linf * (1 + 1e-12));
    CHECK(recs[k].lp[0] <= recs[k - 1].lp[0] * (1 + 1e-12));
    CHECK(recs[k].lp[1] <= recs[k - 1].lp[1] * (1 + 1e-12));
  }
  const auto e = energy_check(r.diagnostics, 1e-3);
  REQUIRE(e.size() == 2);
  for (const auto& a : e) {
    CHECK(a.ok);
    CHECK(a.lhs > 0.0);
    CHECK(a.lhs <= a.rhs * (1.0 + 1e-3));
  }
}

TEST_CASE("CFL step is monotone; an oversized fixed step is rejected") {
  const Grid g = Grid::cube(2, 3.0, 31);
  const Field u = bump(g);
  SolverConfig c;
  Solver s(u, c, aniso());
  const double dt = s.stable_dt();
  CHECK(dt > 0.0);
  CHECK(s.cap_dt() <= dt);
  c.dt_policy = DtPolicy::fixed;
  c.dt_fixed = 200.0 * dt;
  c.t_end = 100.0 * c.dt_fixed;
  CHECK_THROWS_AS(run(u, c, aniso()), InstabilityError);
  c.dt_fixed = 0.0;
  CHECK_THROWS_AS(Solver(u, c, aniso()), std::invalid_argument);
}

TEST_CASE("scalar and AVX2 kernels give the same trajectory") {
  if (simd::avx2_kernels() == nullptr) return;
  const Grid g = Grid::cube(2, 4.0, 37);
  SolverConfig c;
  c.t_end = 0.2;
  c.record_every = 0;
  REQUIRE(simd::select("scalar"));
  const RunResult a = run(bump(g), c, aniso());
  REQUIRE(simd::select("avx2"));
  const RunResult b = run(bump(g), c, aniso());
  CHECK(a.diagnostics.records.back().step == b.diagnostics.records.back().step);
  CHECK(max_distance(a.final, b.final) <= 1e-12 * a.final.max());
}

TEST_CASE("linear axis reproduces the one-dimensional heat kernel variance") {
  // m = 1 everywhere in one dimension is the heat equation: variance grows by 2t.
  const Grid g = Grid::cube(1, 20.0, 801);
  DataParams p;
  p.radius = 1.0;
  const Field u0 = init_data(DataKind::bump, p, g);
  SolverConfig c;
  c.eps = 0.0;
  c.t_end = 2.0;
  c.record_every = 0;
  Solver s(u0, c, std::vector<double>{1.0});
  s.advance_to(2.0);
  auto var = [&](const Field& f) {
    double m2 = 0.0;
    g.for_each_node([&](std::size_t k, std::span<const std::size_t> i) {
      m2 += f[k] * g.coord(0, i[0]) * g.coord(0, i[0]);
    });
    return m2 * g.cell_volume() / f.mass();
  };
  CHECK(var(s.state()) - var(u0) == doctest::Approx(4.0).epsilon(2e-3));
}
