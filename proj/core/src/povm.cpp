#include "spintime/povm.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "spintime/textio.hpp"

namespace spintime {

void SpinPOVM::validate(double tol, double slack) const {
  binning.validate();
  if (static_cast<int>(e0.size()) != n_outcomes() ||
      static_cast<int>(e_vec.size()) != n_outcomes())
    throw ConfigError("POVM component sizes do not match the binning");
  double sum0 = 0.0;
  Eigen::Vector3d sumv = Eigen::Vector3d::Zero();
  for (int k = 0; k < n_outcomes(); ++k) {
    if (!(e0[k] >= -slack - tol))
      throw ConfigError("POVM effect has negative weight in bin " + std::to_string(k));
    if (e_vec[k].norm() > e0[k] + slack + tol)
      throw ConfigError("POVM effect not positive semidefinite in bin " +
                        std::to_string(k));
    sum0 += e0[k];
    sumv += e_vec[k];
  }
  if (std::abs(sum0 - 1.0) > tol)
    throw ConfigError("POVM weights do not sum to the identity");
  if (sumv.norm() > tol)
    throw ConfigError("POVM vector parts do not cancel");
}

std::pair<double, double> SpinPOVM::time_moments() const {
  double tau0 = 0.0, tau_z = 0.0;
  for (int k = 0; k < binning.n_bins; ++k) {
    tau0 += binning.midpoint(k) * e0[k];
    tau_z += binning.midpoint(k) * e_vec[k].z();
  }
  return {tau0, tau_z};
}

ArrivalDistribution predict(const SpinPOVM& povm, const SpinDirection& n_dir) {
  ArrivalDistribution d;
  d.binning = povm.binning;
  d.mass.resize(povm.n_outcomes());
  d.stderrs.assign(povm.n_outcomes(), 0.0);
  d.n_samples = 0;
  d.label.n_dir = n_dir;
  d.label.text = "model";
  for (int k = 0; k < povm.n_outcomes(); ++k)
    d.mass[k] = povm.e0[k] + povm.e_vec[k].dot(n_dir.n);
  return d;
}

double tv_distance(const ArrivalDistribution& p, const ArrivalDistribution& q) {
  require_same_binning(p, q);
  double s = 0.0;
  for (std::size_t k = 0; k < p.mass.size(); ++k) s += std::abs(p.mass[k] - q.mass[k]);
  return 0.5 * s;
}

double trace_pair_residual(const ArrivalDistribution& p_plus,
                           const ArrivalDistribution& p_minus,
                           const ArrivalDistribution& q_plus,
                           const ArrivalDistribution& q_minus) {
  require_same_binning(p_plus, p_minus);
  require_same_binning(p_plus, q_plus);
  require_same_binning(p_plus, q_minus);
  double s = 0.0;
  for (std::size_t k = 0; k < p_plus.mass.size(); ++k) {
    const double a = 0.5 * (p_plus.mass[k] + p_minus.mass[k]);
    const double b = 0.5 * (q_plus.mass[k] + q_minus.mass[k]);
    s += std::abs(a - b);
  }
  return 0.5 * s;
}

namespace {

double rss_noise(std::span<const ArrivalDistribution> dists) {
  double s = 0.0;
  for (const auto& d : dists)
    for (double e : d.stderrs) s += e * e;
  return std::sqrt(s);
}

/// Radial shrinkage onto {e0 >= 0, |e| <= e0}, then uniform renormalization
/// of the totals to (1, 0).
void project_and_renormalize(SpinPOVM& povm) {
  const int K = povm.n_outcomes();
  for (int k = 0; k < K; ++k) {
    povm.e0[k] = std::max(povm.e0[k], 0.0);
    const double len = povm.e_vec[k].norm();
    if (len > povm.e0[k])
      povm.e_vec[k] *= (len > 0.0 ? povm.e0[k] / len : 0.0);
  }
  double sum0 = 0.0;
  Eigen::Vector3d sumv = Eigen::Vector3d::Zero();
  for (int k = 0; k < K; ++k) {
    sum0 += povm.e0[k];
    sumv += povm.e_vec[k];
  }
  const double shift0 = (sum0 - 1.0) / K;
  const Eigen::Vector3d shiftv = sumv / K;
  for (int k = 0; k < K; ++k) {
    povm.e0[k] -= shift0;
    povm.e_vec[k] -= shiftv;
  }
}

double model_residual(const SpinPOVM& povm, std::span<const SpinDirection> directions,
                      std::span<const ArrivalDistribution> dists) {
  double ss = 0.0;
  for (std::size_t j = 0; j < directions.size(); ++j) {
    for (int k = 0; k < povm.n_outcomes(); ++k) {
      const double model = povm.e0[k] + povm.e_vec[k].dot(directions[j].n);
      const double r = dists[j].mass[k] - model;
      ss += r * r;
    }
  }
  return std::sqrt(ss);
}

}  // namespace

FitReport fit_axial(const ArrivalDistribution& p_x, const ArrivalDistribution& p_z) {
  require_same_binning(p_x, p_z);
  const int K = p_x.binning.n_outcomes();

  SpinPOVM povm;
  povm.binning = p_x.binning;
  povm.e0.resize(K);
  povm.e_vec.resize(K);
  FitReport rep;
  rep.per_bin_violation.resize(K);
  for (int k = 0; k < K; ++k) {
    // E_k = P_x (I - sigma_z) + P_z sigma_z, eigenvalues {P_z, 2 P_x - P_z}
    povm.e0[k] = p_x.mass[k];
    povm.e_vec[k] = {0.0, 0.0, p_z.mass[k] - p_x.mass[k]};
    rep.per_bin_violation[k] = std::max(0.0, p_z.mass[k] - 2.0 * p_x.mass[k]);
  }

  const SpinDirection dirs[2] = {SpinDirection::plus_x(), SpinDirection::plus_z()};
  const ArrivalDistribution data[2] = {p_x, p_z};
  rep.residual_unconstrained = model_residual(povm, dirs, data);  // exact interpolation
  project_and_renormalize(povm);
  rep.residual_projected = model_residual(povm, dirs, data);
  rep.povm = std::move(povm);
  rep.noise_floor = rss_noise(data);
  return rep;
}

FitReport fit_spin_povm(std::span<const SpinDirection> directions,
                        std::span<const ArrivalDistribution> dists) {
  if (directions.size() != dists.size())
    throw ConfigError("directions and distributions must pair up");
  std::size_t distinct = 0;
  for (std::size_t i = 0; i < directions.size(); ++i) {
    bool seen = false;
    for (std::size_t j = 0; j < i; ++j)
      if ((directions[i].n - directions[j].n).norm() < 1e-12) seen = true;
    if (!seen) ++distinct;
  }
  if (distinct < 2)
    throw DegenerateDesign("fit_spin_povm needs at least two distinct directions");
  for (std::size_t j = 1; j < dists.size(); ++j) require_same_binning(dists[0], dists[j]);

  const int J = static_cast<int>(directions.size());
  const int K = dists[0].binning.n_outcomes();

  Eigen::MatrixXd design(J, 4);
  for (int j = 0; j < J; ++j) {
    design(j, 0) = 1.0;
    design.row(j).tail<3>() = directions[j].n.transpose();
  }
  // minimum-norm least squares; tolerates rank-deficient direction sets
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(design);

  SpinPOVM povm;
  povm.binning = dists[0].binning;
  povm.e0.resize(K);
  povm.e_vec.resize(K);
  FitReport rep;
  rep.per_bin_violation.resize(K);

  Eigen::VectorXd rhs(J);
  for (int k = 0; k < K; ++k) {
    for (int j = 0; j < J; ++j) rhs(j) = dists[j].mass[k];
    const Eigen::Vector4d beta = cod.solve(rhs);
    povm.e0[k] = beta(0);
    povm.e_vec[k] = beta.tail<3>();
    rep.per_bin_violation[k] = std::max(0.0, povm.e_vec[k].norm() - povm.e0[k]);
  }

  rep.residual_unconstrained = model_residual(povm, directions, dists);
  project_and_renormalize(povm);
  rep.residual_projected = model_residual(povm, directions, dists);
  rep.povm = std::move(povm);
  rep.noise_floor = rss_noise(dists);
  return rep;
}

std::pair<double, double> deviation_lower_bound(const DistributionFamily& family,
                                                const SpinPOVM& fitted) {
  const SpinDirection four[4] = {SpinDirection::plus_z(), SpinDirection::minus_z(),
                                 SpinDirection::plus_x(), SpinDirection::minus_x()};
  double max_dev = 0.0;
  for (const auto& d : four)
    max_dev = std::max(max_dev, tv_distance(family.at(d), predict(fitted, d)));
  const double bound =
      0.5 * tv_distance(family.at(SpinDirection::plus_x()), family.at(SpinDirection::plus_z()));
  return {max_dev, bound};
}

SinusoidFit fit_sinusoidal_mean(std::span<const double> alphas,
                                std::span<const double> means,
                                std::span<const double> errors) {
  const std::size_t n = alphas.size();
  if (means.size() != n || errors.size() != n)
    throw ConfigError("alphas, means, errors must have equal length");
  if (n < 3) throw DegenerateDesign("need at least three alpha values");

  double sw = 0.0, swc = 0.0, swc2 = 0.0, swy = 0.0, swcy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(errors[i] > 0.0)) throw ConfigError("errors must be positive");
    const double w = 1.0 / (errors[i] * errors[i]);
    const double c = std::cos(alphas[i]);
    sw += w;
    swc += w * c;
    swc2 += w * c * c;
    swy += w * means[i];
    swcy += w * c * means[i];
  }
  const double det = sw * swc2 - swc * swc;
  if (std::abs(det) < 1e-14 * sw * std::max(swc2, 1e-300))
    throw DegenerateDesign("all cos(alpha) coincide; sinusoid fit is degenerate");

  SinusoidFit fit;
  fit.tau0 = (swc2 * swy - swc * swcy) / det;
  fit.tau_z = (sw * swcy - swc * swy) / det;
  fit.dof = static_cast<int>(n) - 2;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (means[i] - fit.tau0 - fit.tau_z * std::cos(alphas[i])) / errors[i];
    fit.chi2 += r * r;
  }
  return fit;
}

void write_povm_csv(std::ostream& os, const SpinPOVM& povm, bool header) {
  if (header) os << "bin,t_lo,t_hi,e0,ex,ey,ez\n";
  for (int k = 0; k < povm.n_outcomes(); ++k) {
    const bool censored = k == povm.binning.censored_index();
    os << k << ',' << fmt_g(censored ? povm.binning.t_max : povm.binning.lower_edge(k))
       << ',';
    if (!censored) os << fmt_g(povm.binning.upper_edge(k));
    os << ',' << fmt_g(povm.e0[k]) << ',' << fmt_g(povm.e_vec[k].x()) << ','
       << fmt_g(povm.e_vec[k].y()) << ',' << fmt_g(povm.e_vec[k].z()) << '\n';
  }
}

SpinPOVM read_povm_csv(std::istream& is) {
  SpinPOVM povm;
  std::string line;
  bool first = true;
  std::vector<std::array<double, 4>> rows;
  double t_max = 0.0;
  while (std::getline(is, line)) {
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (first && t.rfind("bin,", 0) == 0) {
      first = false;
      continue;
    }
    first = false;
    const auto cells = split(t, ',');
    if (cells.size() != 7) throw ConfigError("POVM CSV row needs 7 cells: " + t);
    if (cells[2].empty()) {
      t_max = parse_double(cells[1]);  // censored row
    }
    rows.push_back({parse_double(cells[3]), parse_double(cells[4]),
                    parse_double(cells[5]), parse_double(cells[6])});
  }
  if (rows.size() < 2) throw ConfigError("POVM CSV needs at least two outcome rows");
  povm.binning = TimeBinning{t_max, static_cast<int>(rows.size()) - 1};
  for (const auto& r : rows) {
    povm.e0.push_back(r[0]);
    povm.e_vec.emplace_back(r[1], r[2], r[3]);
  }
  return povm;
}

void write_fit_report(std::ostream& os, const FitReport& rep, const std::string& title) {
  os << "[fit]\n";
  os << "title = " << title << '\n';
  os << "outcomes = " << rep.povm.n_outcomes() << '\n';
  os << "residual_unconstrained = " << fmt_g(rep.residual_unconstrained) << '\n';
  os << "residual_projected = " << fmt_g(rep.residual_projected) << '\n';
  os << "noise_floor = " << fmt_g(rep.noise_floor) << '\n';
  double max_v = 0.0;
  int worst = -1;
  for (std::size_t k = 0; k < rep.per_bin_violation.size(); ++k) {
    if (rep.per_bin_violation[k] > max_v) {
      max_v = rep.per_bin_violation[k];
      worst = static_cast<int>(k);
    }
  }
  os << "max_violation = " << fmt_g(max_v) << '\n';
  os << "max_violation_bin = " << worst << '\n';
  os << "[violations]\n";
  for (std::size_t k = 0; k < rep.per_bin_violation.size(); ++k) {
    if (rep.per_bin_violation[k] > 0.0)
      os << k << ' ' << fmt_g(rep.per_bin_violation[k]) << '\n';
  }
}

}  // namespace spintime
