#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "gen.hpp"
#include "landau/checkpoint.hpp"
#include "landau/kinetic_sim.hpp"

using namespace landau;
using namespace landau::kinetic;

namespace {

const equilibria::Equilibrium& gauss() {
  static const auto eq = equilibria::gaussian_equilibrium(1);
  return eq;
}

SimConfig small(double amp = 1e-3) {
  SimConfig c;
  c.n_x = 16;
  c.n_v = 256;
  c.dt = 0.05;
  c.amp = amp;
  return c;
}

SeedSpec cos_seed(double amp, Species s = Species::plus, Mode k = {1, 0}) { return {{k, amp, 0.0, s, {}}}; }

std::size_t index_of(const Lattice& L, const Mode& k) {
  return std::find(L.modes().begin(), L.modes().end(), k) - L.modes().begin();
}

std::vector<cplx> run_charge(const SimConfig& cfg, double amp, double t_end, Species sp = Species::plus) {
  Solver s(cfg, gauss());
  auto st = s.init_state(cos_seed(amp, sp), {}).state;
  const auto steps = std::lround(t_end / cfg.dt);
  for (long n = 0; n < steps; ++n) s.step(st);
  return s.charge(st);
}

}  // namespace

TEST(Lattice, Bookkeeping) {
  Lattice L(1, 32, 256, 8.0);
  EXPECT_EQ(L.k_cut(), 10);
  EXPECT_EQ(L.modes().size(), 21u);
  EXPECT_DOUBLE_EQ(L.dv(), 16.0 / 256);
  EXPECT_DOUBLE_EQ(L.eta_nyquist(), kPi * 16.0);
  EXPECT_EQ(L.slot({11, 0}), L.slot({11, 0}));
  EXPECT_FALSE(L.retained(L.slot({11, 0})));
  EXPECT_EQ(L.mode(L.slot({-3, 0})), (Mode{-3, 0}));
  EXPECT_EQ(L.slot({40, 0}), Lattice::npos);
  Lattice P(2, 8, 16, 8.0);
  EXPECT_EQ(P.modes().size(), 25u);
  EXPECT_EQ(P.size(), 64u * 256u);
}

TEST(SimConfig, Violations) {
  EXPECT_TRUE(SimConfig{}.violations().empty());
  SimConfig c;
  c.n_x = 31;
  c.epsilon = -1.0;
  EXPECT_EQ(c.violations().size(), 2u);
  c = {};
  c.dim = 2;
  c.n_v = 128;
  EXPECT_FALSE(c.violations().empty());
  c = {};
  c.dim = 3;
  EXPECT_FALSE(c.violations().empty());
  c = {};
  c.dt = 10.0;
  EXPECT_FALSE(c.violations().empty());
  EXPECT_THROW(Solver(c, gauss()), DomainError);
}

TEST(Field, Examples) {
  const std::vector<Mode> modes{{0, 0}, {1, 0}, {-1, 0}};
  auto e = field_from_density(modes, {0.0, 1.0, 1.0});
  EXPECT_EQ(e[0][0], cplx(0.0));
  EXPECT_NEAR(std::abs(e[1][0] - cplx(0.0, -1.0)), 0.0, 1e-16);
  EXPECT_NEAR(std::abs(e[2][0] - cplx(0.0, 1.0)), 0.0, 1e-16);

  auto e2 = field_from_density({{1, 1}}, {2.0});
  EXPECT_NEAR(std::abs(e2[0][0] - cplx(0.0, -1.0)), 0.0, 1e-16);
  EXPECT_NEAR(std::abs(e2[0][1] - cplx(0.0, -1.0)), 0.0, 1e-16);

  auto z = field_from_density(modes, {0.0, 0.0, 0.0});
  for (const auto& v : z) EXPECT_EQ(std::abs(v[0]), 0.0);
  EXPECT_THROW(field_from_density(modes, {1e-6, 0.0, 0.0}), InvariantBreach);
}

TEST(Init, CosineSeedDensity) {
  Solver s(small(), gauss());
  const auto rep = s.init_state(cos_seed(1e-3), {});
  const auto rho = s.density(rep.state, Species::plus);
  const auto& L = s.lattice();
  for (std::size_t i = 0; i < L.modes().size(); ++i) {
    const Mode& k = L.modes()[i];
    const double want = std::abs(k[0]) == 1 ? 1e-3 * kPi : 0.0;
    EXPECT_NEAR(std::abs(rho[i] - want), 0.0, 1e-15) << k[0];
  }
  EXPECT_LE(std::abs(rep.net_charge), 1e-18);
  EXPECT_GT(rep.g_initial, 0.0);
}

TEST(Init, EmptySeed) {
  Solver s(small(), gauss());
  const auto rep = s.init_state({}, {});
  for (const auto& v : rep.state.f_plus) EXPECT_EQ(v, cplx(0.0));
  EXPECT_EQ(rep.g_initial, 0.0);
}

TEST(Init, RejectsChargedOrUnresolvedSeeds) {
  Solver s(small(), gauss());
  EXPECT_THROW(s.init_state(cos_seed(1e-3, Species::plus, {0, 0}), {}), DomainError);
  EXPECT_THROW(s.init_state(cos_seed(1e-3, Species::plus, {6, 0}), {}), DomainError);
  EXPECT_NO_THROW(s.init_state(cos_seed(1e-3, Species::minus, {5, 0}), {}));
}

TEST(Step, EquilibriumIsFixedPoint) {
  Solver s(small(), gauss());
  auto st = s.init_state({}, {}).state;
  for (int n = 0; n < 10; ++n) s.step(st);
  for (const auto& v : st.f_plus) EXPECT_EQ(v, cplx(0.0));
  for (const auto& v : st.f_minus) EXPECT_EQ(v, cplx(0.0));
  EXPECT_NEAR(st.t, 0.5, 1e-15);
}

TEST(Step, FreeStreamingOracle) {
  auto cfg = small();
  cfg.zero_field = true;
  const double amp = 1e-3;
  Solver s(cfg, gauss());
  auto st = s.init_state(cos_seed(amp), {}).state;
  const std::size_t i1 = index_of(s.lattice(), {1, 0});
  double worst = 0.0;
  for (int n = 1; n <= 400; ++n) {
    s.step(st);
    const cplx want = amp * kPi * std::exp(-0.5 * st.t * st.t);
    worst = std::max(worst, std::abs(s.density(st, Species::plus)[i1] - want) / (amp * kPi));
  }
  EXPECT_LE(worst, 1e-8);
}

TEST(Step, BoundaryBreach) {
  auto cfg = small();
  cfg.boundary_tol = 1e-30;
  Solver s(cfg, gauss());
  auto st = s.init_state(cos_seed(1e-3), {}).state;
  EXPECT_THROW(s.step(st), InvariantBreach);
}

TEST(Step, SplittingSecondOrder) {
  const double amp = 0.05, t_end = 2.0;
  auto at = [&](double dt) {
    auto c = small(amp);
    c.dt = dt;
    return run_charge(c, amp, t_end);
  };
  const auto ref = at(0.1 / 8);
  auto err = [&](const std::vector<cplx>& r) {
    double e = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) e = std::max(e, std::abs(r[i] - ref[i]));
    return e;
  };
  const double ratio = err(at(0.1)) / err(at(0.05));
  EXPECT_GT(ratio, 3.5);
  EXPECT_LT(ratio, 4.6);
}

TEST(Step, QuadraticNonlinearity) {
  auto cfg = small();
  const Lattice L(1, cfg.n_x, cfg.n_v, cfg.v_max);
  const std::size_t i2 = index_of(L, {2, 0});
  auto second = [&](double a) {
    const auto full = run_charge(cfg, a, 5.0, Species::minus);
    const auto half = run_charge(cfg, a / 2, 5.0, Species::minus);
    return std::abs(full[i2] - 2.0 * half[i2]);
  };
  const double ratio = second(2e-2) / second(4e-2);
  EXPECT_NEAR(ratio, 0.25, 0.025);
}

TEST(Frame, IdentityAtStart) {
  Solver s(small(), gauss());
  const auto st = s.init_state(cos_seed(1e-3), {}).state;
  const auto fr = s.gliding_frame(st);
  const auto rho = s.density(st, Species::plus);
  for (std::size_t i = 0; i < s.lattice().modes().size(); ++i)
    EXPECT_NEAR(std::abs(interpolate(fr.plus, i, {0.0, 0.0}, 8.0) - rho[i]), 0.0, 1e-15);
}

TEST(Frame, DensityIdentityDuringRun) {
  Solver s(small(), gauss());
  auto st = s.init_state(cos_seed(1e-3), {}).state;
  const auto& L = s.lattice();
  double worst = 0.0, top = 0.0;
  for (int n = 0; n <= 200; ++n) {
    if (n % 20 == 0) {
      const auto fr = s.gliding_frame(st);
      for (auto sp : {Species::plus, Species::minus}) {
        const auto rho = s.density(st, sp);
        const auto& g = sp == Species::plus ? fr.plus : fr.minus;
        for (std::size_t i = 0; i < L.modes().size(); ++i) {
          top = std::max(top, std::abs(rho[i]));
          worst = std::max(worst, std::abs(interpolate(g, i, scale(L.modes()[i], st.t), 8.0) - rho[i]));
        }
      }
    }
    s.step(st);
  }
  EXPECT_LE(worst / top, 1e-10);
}

TEST(Frame, RealitySymmetry) {
  Solver s(small(), gauss());
  auto st = s.init_state({{{1, 0}, 1e-3, 0.4, Species::plus, {}}, {{2, 0}, 5e-4, 1.0, Species::minus, {}}}, {}).state;
  for (int n = 0; n < 40; ++n) s.step(st);
  const auto fr = s.gliding_frame(st);
  const auto& L = s.lattice();
  prop::Gen gen(41);
  for (int trial = 0; trial < 50; ++trial) {
    const Mode k = gen.mode(L.k_cut(), 1, false);
    const double eta = gen.uniform(-10.0, 10.0);
    const cplx a = interpolate(fr.plus, index_of(L, k), {eta, 0.0}, 8.0);
    const cplx b = interpolate(fr.plus, index_of(L, {-k[0], 0}), {-eta, 0.0}, 8.0);
    EXPECT_LE(std::abs(a - std::conj(b)), 1e-15);
  }
}

TEST(Frame, AliasingFailsClosed) {
  auto cfg = small(1e-2);
  cfg.n_v = 64;
  cfg.boundary_tol = 1e-3;
  Solver s(cfg, gauss());
  auto st = s.init_state(cos_seed(1e-2), {}).state;
  for (int n = 0; n < 300; ++n) s.step(st);
  EXPECT_THROW(s.gliding_frame(st), InvariantBreach);
}

TEST(KineticProperty, ConservationAndReality) {
  prop::Gen gen(42);
  for (int trial = 0; trial < 3; ++trial) {
    auto cfg = small();
    cfg.epsilon = gen.uniform(0.0, 0.05);
    Solver s(cfg, gauss());
    SeedSpec seed;
    for (int j = 0; j < 3; ++j)
      seed.push_back({{gen.integer(1, 5), 0}, gen.uniform(1e-4, 2e-3), gen.uniform(0.0, 6.28),
                      j % 2 ? Species::minus : Species::plus, {}});
    auto st = s.init_state(seed, {}).state;
    const auto d0 = s.diagnostics(st);
    for (int n = 0; n < 100; ++n) s.step(st);
    const auto d = s.diagnostics(st);
    EXPECT_LE(std::abs(d.mass_plus - d0.mass_plus) / st.t, 1e-10);
    EXPECT_LE(std::abs(d.mass_minus - d0.mass_minus) / st.t, 1e-10);
    EXPECT_LE(d.neutrality, 1e-12);
    EXPECT_LE(d.reality_defect, 1e-12);
  }
}

TEST(TwoDim, FreeStreaming) {
  SimConfig cfg;
  cfg.dim = 2;
  cfg.n_x = 8;
  cfg.n_v = 32;
  cfg.v_max = 8.0;
  cfg.dt = 0.1;
  cfg.zero_field = true;
  cfg.boundary_tol = 1e-6;
  Solver s(cfg, equilibria::gaussian_equilibrium(2));
  const double amp = 1e-3;
  auto st = s.init_state(cos_seed(amp, Species::plus, {1, 1}), {}).state;
  const std::size_t i = index_of(s.lattice(), {1, 1});
  for (int n = 0; n < 20; ++n) s.step(st);
  const double box = 4.0 * kPi * kPi;
  const cplx want = 0.5 * amp * box * std::exp(-0.5 * 2.0 * st.t * st.t);
  EXPECT_LE(std::abs(s.density(st, Species::plus)[i] - want) / std::abs(want), 1e-8);
}

TEST(Checkpoint, RoundTrip) {
  auto cfg = small();
  Solver s(cfg, gauss());
  auto st = s.init_state(cos_seed(1e-3), {}).state;
  for (int n = 0; n < 7; ++n) s.step(st);
  const auto path = std::filesystem::temp_directory_path() / "landau_ckpt_roundtrip.bin";
  write_checkpoint(path, cfg, st);
  EXPECT_EQ(std::filesystem::file_size(path), 8 + 4 * 4 + 3 * 8 + 8 + 2 * st.f_plus.size() * 8);
  const auto back = read_checkpoint(path);
  EXPECT_EQ(back.header.version, 1u);
  EXPECT_EQ(back.header.n_x, 16u);
  EXPECT_EQ(back.header.n_v, 256u);
  EXPECT_DOUBLE_EQ(back.header.t, st.t);
  EXPECT_DOUBLE_EQ(back.header.epsilon, cfg.epsilon);
  ASSERT_EQ(back.state.f_plus.size(), st.f_plus.size());
  for (std::size_t i = 0; i < st.f_plus.size(); ++i) {
    ASSERT_EQ(back.state.f_plus[i].real(), static_cast<double>(static_cast<float>(st.f_plus[i].real()))) << i;
    ASSERT_EQ(back.state.f_plus[i].imag(), static_cast<double>(static_cast<float>(st.f_plus[i].imag()))) << i;
  }

  std::filesystem::resize_file(path, std::filesystem::file_size(path) - 3);
  EXPECT_THROW(read_checkpoint(path), Error);
  {
    std::ofstream bad(path, std::ios::binary | std::ios::trunc);
    bad << "NOTACKPT and some more bytes to pass the size test.................";
  }
  EXPECT_THROW(read_checkpoint(path), Error);
  std::filesystem::remove(path);
}
