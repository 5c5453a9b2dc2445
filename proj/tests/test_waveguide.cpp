#include <doctest.h>

#include <cmath>
#include <sstream>

#include "spintime/rng.hpp"
#include "spintime/state_table.hpp"
#include "spintime/wavestate.hpp"
#include "support/stats.hpp"

using namespace spintime;

namespace {

PhysicalParams default_params() {
  PhysicalParams p;
  p.omega = 1.0;
  p.detector_plane_L = 5.0;
  return p;
}

}  // namespace

TEST_CASE("initial packet vanishes at the wall and is normalized") {
  const LongitudinalGrid grid{16.0, 2048};
  const PacketConfig cfg{2.0, 0.5, 0.0};
  const WaveState s = WaveState::init_packet(cfg, grid, default_params());

  CHECK(s.f_nodes()[0] == cd(0.0, 0.0));
  CHECK(s.f_at(0.0) == cd(0.0, 0.0));
  CHECK(std::abs(s.norm() - 1.0) < 1e-12);
}

TEST_CASE("initial packet mean momentum matches p0") {
  const LongitudinalGrid grid{16.0, 2048};
  const PacketConfig cfg{2.0, 0.5, 3.0};
  const PhysicalParams params = default_params();
  const WaveState s = WaveState::init_packet(cfg, grid, params);

  // oracle: discrete expectation of -i hbar d_z via central differences
  const auto f = s.f_nodes();
  const double dz = grid.dz();
  double p_mean = 0.0;
  for (int j = 1; j <= grid.n_points; ++j) {
    const cd dfd = (f[j + 1] - f[j - 1]) / (2.0 * dz);
    p_mean += params.hbar * (std::conj(f[j]) * dfd).imag() * dz;
  }
  CHECK(p_mean == doctest::Approx(cfg.p0).epsilon(0.02));
}

TEST_CASE("packet with no surviving mass is rejected") {
  const LongitudinalGrid grid{8.0, 512};
  PacketConfig cfg;
  cfg.z0 = 1e-8;
  cfg.width_d = 0.01;
  cfg.p0 = 0.0;
  CHECK_THROWS_AS(WaveState::init_packet(cfg, grid, default_params()),
                  NonNormalizable);
}

TEST_CASE("single sine mode is stationary in modulus") {
  const LongitudinalGrid grid{8.0, 4096};
  std::vector<cd> modes(grid.n_points, cd(0.0, 0.0));
  modes[1] = std::sqrt(2.0 / grid.domain_length());  // unit norm
  const WaveState s0 = WaveState::from_modes(modes, grid, default_params());
  CHECK(std::abs(s0.norm() - 1.0) < 1e-12);

  for (double t : {0.3, 1.7, 6.4}) {
    const WaveState st = s0.evolved_to(t);
    double worst = 0.0;
    for (int j = 0; j < grid.n_points + 2; ++j)
      worst = std::max(worst,
                       std::abs(std::abs(st.f_nodes()[j]) - std::abs(s0.f_nodes()[j])));
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("norm is conserved by evolution") {
  const LongitudinalGrid grid{16.0, 1024};
  const PacketConfig cfg{2.0, 0.5, 1.0};
  const WaveState s0 = WaveState::init_packet(cfg, grid, default_params());
  for (double t : {0.1, 0.5, 1.0, 1.8}) {
    CHECK(std::abs(s0.evolved_to(t).norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("free Gaussian dispersion against the closed form") {
  // packet far from both walls; the image term is ~exp(-400)
  const LongitudinalGrid grid{40.0, 2048};
  PacketConfig cfg;
  cfg.z0 = 10.0;
  cfg.width_d = 0.5;
  cfg.p0 = 3.0;
  const PhysicalParams params = default_params();
  const WaveState s0 = WaveState::init_packet(cfg, grid, params);

  for (double t : {0.2, 0.5, 1.0}) {
    const WaveState st = s0.evolved_to(t);
    double worst = 0.0;
    for (int j = 1; j <= grid.n_points; ++j) {
      const double z = grid.node(j);
      const double model = testsupport::free_gaussian_density(
          z, t, cfg.z0, cfg.width_d, cfg.p0, params.hbar, params.mass);
      worst = std::max(worst, std::abs(std::norm(st.f_nodes()[j]) - model));
    }
    CHECK(worst < 1e-4);
  }
}

TEST_CASE("far-wall guard raises DomainTooSmall") {
  const LongitudinalGrid grid{8.0, 512};
  PacketConfig cfg;
  cfg.z0 = 2.0;
  cfg.width_d = 0.5;
  cfg.p0 = 5.0;
  const WaveState s0 = WaveState::init_packet(cfg, grid, default_params());
  CHECK_THROWS_AS(s0.evolved_to(1.6), DomainTooSmall);
}

TEST_CASE("wall condition holds at all sampled times") {
  const LongitudinalGrid grid{32.0, 2048};
  const PacketConfig cfg{2.0, 0.4, 1.5};
  const WaveState s0 = WaveState::init_packet(cfg, grid, default_params());
  for (double t : {0.0, 0.5, 1.5, 3.0}) {
    const WaveState st = s0.evolved_to(t);
    double peak = 0.0;
    for (const cd& v : st.f_nodes()) peak = std::max(peak, std::abs(v));
    CHECK(std::abs(st.f_nodes()[0]) < 1e-8 * peak);
    CHECK(std::abs(st.f_nodes()[grid.n_points + 1]) < 1e-8 * peak);
  }
}

TEST_CASE("density, gradient and convective velocity") {
  const LongitudinalGrid grid{16.0, 2048};
  const PhysicalParams params = default_params();

  SUBCASE("real wave gives zero convective velocity") {
    const PacketConfig cfg{2.0, 0.5, 0.0};
    const WaveState s = WaveState::init_packet(cfg, grid, params);
    const Density d = s.rho_and_grad(0.0, 0.0, 2.0);
    CHECK(d.conv_velocity_z == 0.0);
  }

  SUBCASE("transverse log-derivative is the trap Gaussian") {
    const PacketConfig cfg{2.0, 0.5, 1.0};
    const WaveState s = WaveState::init_packet(cfg, grid, params);
    for (double x : {-0.7, 0.2, 1.1}) {
      const Density d = s.rho_and_grad(x, 0.0, 2.0);
      const double expect = -2.0 * params.mass * params.omega * x / params.hbar;
      CHECK(d.grad_rho.x() / d.rho == doctest::Approx(expect).epsilon(1e-12));
    }
  }

  SUBCASE("gradient matches central finite differences") {
    const PacketConfig cfg{2.0, 0.5, 2.0};
    const WaveState s = WaveState::init_packet(cfg, grid, params).evolved_to(0.4);
    Rng rng(314159);
    const double h = 1e-5;
    for (int i = 0; i < 100; ++i) {
      const double x = rng.uniform(-0.8, 0.8);
      const double y = rng.uniform(-0.8, 0.8);
      const double z = rng.uniform(1.2, 3.6);
      const Density d = s.rho_and_grad(x, y, z);
      const Eigen::Vector3d fd{
          (s.rho_and_grad(x + h, y, z).rho - s.rho_and_grad(x - h, y, z).rho) / (2 * h),
          (s.rho_and_grad(x, y + h, z).rho - s.rho_and_grad(x, y - h, z).rho) / (2 * h),
          (s.rho_and_grad(x, y, z + h).rho - s.rho_and_grad(x, y, z - h).rho) / (2 * h)};
      CHECK((d.grad_rho - fd).norm() < 1e-5 * d.grad_rho.norm() + 1e-12);
    }
  }

  SUBCASE("separability of the density") {
    const PacketConfig cfg{2.0, 0.5, 1.0};
    const WaveState s = WaveState::init_packet(cfg, grid, params);
    const double x = 0.3, y = -0.2, z = 2.4;
    const Density d = s.rho_and_grad(x, y, z);
    const double product = s.transverse_density(x, y) * std::norm(s.f_at(z));
    CHECK(d.rho == doctest::Approx(product).epsilon(1e-12));
  }

  SUBCASE("node floor raises NodeSingularity") {
    const PacketConfig cfg{2.0, 0.5, 0.0};
    const WaveState s = WaveState::init_packet(cfg, grid, params);
    CHECK_THROWS_AS(s.rho_and_grad(12.0, 0.0, 2.0), NodeSingularity);
  }
}

TEST_CASE("flux on the detector plane") {
  const LongitudinalGrid grid{16.0, 1024};
  const PhysicalParams params = default_params();

  SUBCASE("real wave, lambda = 0: flux vanishes identically") {
    const PacketConfig cfg{2.0, 0.5, 0.0};
    const WaveState s = WaveState::init_packet(cfg, grid, params);
    const double ts[] = {0.0};
    const Eigen::Vector2d xys[] = {{0.0, 0.0}, {0.4, -0.3}, {-1.0, 0.2}};
    const FluxReport rep =
        flux_on_plane(s, SpinDirection::plus_z(), 0.0, ts, xys);
    CHECK(rep.min_flux == 0.0);
    CHECK(rep.negative_fraction == 0.0);
  }

  SUBCASE("spin term flips sign across y = 0 for n = x") {
    const PacketConfig cfg{2.0, 0.5, 0.0};
    // L inside the packet so |f(L)| is appreciable
    PhysicalParams p = params;
    p.detector_plane_L = 2.0;
    const WaveState s = WaveState::init_packet(cfg, grid, p);
    const double ts[] = {0.0};
    const Eigen::Vector2d up[] = {{0.0, 0.5}};
    const Eigen::Vector2d dn[] = {{0.0, -0.5}};
    const double j_up =
        flux_on_plane(s, SpinDirection::plus_x(), 1.0, ts, up).min_flux;
    const double j_dn =
        flux_on_plane(s, SpinDirection::plus_x(), 1.0, ts, dn).min_flux;
    CHECK(j_up > 0.0);
    CHECK(j_dn < 0.0);
    CHECK(j_up == doctest::Approx(-j_dn).epsilon(1e-12));
  }

  SUBCASE("forward-peaked packet has nonnegative flux before reflection") {
    PacketConfig cfg;
    cfg.z0 = 2.0;
    cfg.width_d = 0.5;
    cfg.p0 = 8.0;
    const WaveState s = WaveState::init_packet(cfg, grid, params);
    std::vector<double> ts;
    for (int i = 0; i <= 20; ++i) ts.push_back(0.3 * i / 20.0);
    std::vector<Eigen::Vector2d> xys;
    for (int i = -4; i <= 4; ++i) xys.push_back({0.3 * i, 0.2 * i});
    const FluxReport rep = flux_on_plane(s, SpinDirection::plus_z(), 0.0, ts, xys);
    CHECK(rep.min_flux >= -1e-8);
  }
}

TEST_CASE("snapshot csv round trip") {
  const LongitudinalGrid grid{8.0, 64};
  const PacketConfig cfg{2.0, 0.5, 1.0};
  const WaveState s = WaveState::init_packet(cfg, grid, default_params());
  std::ostringstream os;
  write_snapshot_csv(os, s);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "t,z,re_f,im_f");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == grid.n_points + 2);
}

TEST_CASE("state table matches exact propagation") {
  const LongitudinalGrid grid{32.0, 2048};
  const PacketConfig cfg{2.0, 0.5, 1.5};
  const WaveState s0 = WaveState::init_packet(cfg, grid, default_params());
  StateTable::Options opt;
  opt.initial_snapshots = 65;
  const StateTable table(s0, 4.0, opt);
  CHECK(table.validated_error() <= 1e-6);

  Rng rng(2718);
  double worst_f = 0.0, worst_df = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double t = rng.uniform(0.0, 4.0);
    const double z = rng.uniform(0.5, 6.0);
    const WaveState exact = s0.evolved_to(t);
    const StateTable::Field fld = table.field(t, z);
    worst_f = std::max(worst_f, std::abs(fld.f - exact.f_at(z)));
    worst_df = std::max(worst_df, std::abs(fld.df - exact.df_at(z)));
  }
  CHECK(worst_f < 5e-6);
  CHECK(worst_df < 5e-5);
}

TEST_CASE("state table refines itself to tolerance") {
  const LongitudinalGrid grid{24.0, 1024};
  const PacketConfig cfg{2.0, 0.5, 2.0};
  const WaveState s0 = WaveState::init_packet(cfg, grid, default_params());
  StateTable::Options opt;
  opt.initial_snapshots = 3;  // deliberately too coarse
  const StateTable table(s0, 3.0, opt);
  CHECK(table.n_snapshots() > 3);
  CHECK(table.validated_error() <= 1e-6);
}
