#include "spintime/toymeasure.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "spintime/textio.hpp"

namespace spintime {

int FiniteExperiment::n_outcomes() const {
  int m = -1;
  for (int label : calibration) m = std::max(m, label);
  return m + 1;
}

void FiniteExperiment::validate(double tol) const {
  if (d_sys < 1 || d_app < 1) throw ConfigError("experiment dimensions must be >= 1");
  if (unitary.rows() != dim() || unitary.cols() != dim())
    throw ConfigError("unitary size does not match d_sys * d_app");
  if (ready_state.size() != d_app)
    throw ConfigError("ready state size does not match d_app");
  if (static_cast<int>(calibration.size()) != dim())
    throw ConfigError("calibration must label every composite basis index");
  const double unit_defect =
      (unitary.adjoint() * unitary - Eigen::MatrixXcd::Identity(dim(), dim()))
          .cwiseAbs()
          .maxCoeff();
  if (unit_defect > tol) throw NonUnitary("experiment matrix is not unitary");
  if (std::abs(ready_state.norm() - 1.0) > 1e-12)
    throw ConfigError("ready state is not normalized");
  for (int label : calibration)
    if (label < 0) throw ConfigError("calibration labels must be >= 0");
}

double ExtractedPOVM::min_eigenvalue() const {
  double m = 0.0;
  bool first = true;
  for (const auto& e : effects) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(e, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    m = first ? lo : std::min(m, lo);
    first = false;
  }
  return m;
}

double ExtractedPOVM::completeness_defect() const {
  if (effects.empty()) return 1.0;
  Eigen::MatrixXcd sum =
      Eigen::MatrixXcd::Zero(effects[0].rows(), effects[0].cols());
  for (const auto& e : effects) sum += e;
  return (sum - Eigen::MatrixXcd::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff();
}

void ExtractedPOVM::validate(double tol) const {
  if (effects.empty()) throw ConfigError("extracted POVM has no outcomes");
  for (const auto& e : effects) {
    if ((e - e.adjoint()).cwiseAbs().maxCoeff() > tol)
      throw ConfigError("POVM effect is not Hermitian");
  }
  if (min_eigenvalue() < -tol) throw ConfigError("POVM effect has a negative eigenvalue");
  if (completeness_defect() > tol) throw ConfigError("POVM effects do not sum to identity");
}

ExtractedPOVM extract_povm(const FiniteExperiment& exp) {
  exp.validate();
  const int ds = exp.d_sys, da = exp.d_app, D = exp.dim();
  const int n_out = exp.n_outcomes();

  // V = U (I_sys x Phi_0): column s holds U |s, Phi_0>.
  Eigen::MatrixXcd V = Eigen::MatrixXcd::Zero(D, ds);
  for (int s = 0; s < ds; ++s) {
    for (int q = 0; q < D; ++q) {
      std::complex<double> acc = 0.0;
      for (int a = 0; a < da; ++a) acc += exp.unitary(q, s * da + a) * exp.ready_state(a);
      V(q, s) = acc;
    }
  }

  // E(label) = sum over q of F(q)=label of (row q of V)^dag (row q of V)
  ExtractedPOVM out;
  out.effects.assign(n_out, Eigen::MatrixXcd::Zero(ds, ds));
  for (int q = 0; q < D; ++q) {
    const int label = exp.calibration[q];
    out.effects[label].noalias() += V.row(q).adjoint() * V.row(q);
  }
  return out;
}

std::vector<double> born_outcome_dist(const FiniteExperiment& exp,
                                      const Eigen::VectorXcd& psi) {
  exp.validate();
  if (psi.size() != exp.d_sys) throw ConfigError("psi size does not match d_sys");
  if (std::abs(psi.norm() - 1.0) > 1e-10)
    throw ConfigError("psi must be normalized");

  Eigen::VectorXcd initial(exp.dim());
  for (int s = 0; s < exp.d_sys; ++s)
    for (int a = 0; a < exp.d_app; ++a)
      initial(s * exp.d_app + a) = psi(s) * exp.ready_state(a);

  const Eigen::VectorXcd final_state = exp.unitary * initial;
  std::vector<double> dist(exp.n_outcomes(), 0.0);
  for (int q = 0; q < exp.dim(); ++q)
    dist[exp.calibration[q]] += std::norm(final_state(q));
  return dist;
}

namespace {

Eigen::Matrix2cd pauli(int a) {
  Eigen::Matrix2cd m;
  const std::complex<double> i(0.0, 1.0);
  switch (a) {
    case 0: m << 0, 1, 1, 0; break;           // sigma_x
    case 1: m << 0, -i, i, 0; break;          // sigma_y
    default: m << 1, 0, 0, -1; break;         // sigma_z
  }
  return m;
}

}  // namespace

double decoupling_check(const FiniteExperiment& exp, std::span<const SpinDirection> n_list,
                        const Eigen::VectorXcd& phi_rest) {
  exp.validate();
  if (exp.d_sys % 2 != 0)
    throw NotDecoupled("system dimension must factor as 2 * d_rest");
  const int d_rest = exp.d_sys / 2;
  if (phi_rest.size() != d_rest) throw ConfigError("phi_rest size must be d_rest");
  const int tail = d_rest * exp.d_app;  // dimensions acted on trivially

  // U must commute with sigma_a x I_(rest x app) for a = x, y, z
  for (int a = 0; a < 3; ++a) {
    const Eigen::Matrix2cd s = pauli(a);
    Eigen::MatrixXcd big = Eigen::MatrixXcd::Zero(exp.dim(), exp.dim());
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        big.block(r * tail, c * tail, tail, tail) =
            s(r, c) * Eigen::MatrixXcd::Identity(tail, tail);
    const double defect =
        (exp.unitary * big - big * exp.unitary).cwiseAbs().maxCoeff();
    if (defect > 1e-10)
      throw NotDecoupled("unitary does not commute with the spin operators");
  }

  const Eigen::VectorXcd phi = phi_rest / phi_rest.norm();
  std::vector<std::vector<double>> dists;
  dists.reserve(n_list.size());
  for (const SpinDirection& n : n_list) {
    const Spinor sp = spinor_from_direction(n);
    Eigen::VectorXcd psi(exp.d_sys);
    for (int r = 0; r < d_rest; ++r) {
      psi(r) = sp.up * phi(r);
      psi(d_rest + r) = sp.down * phi(r);
    }
    dists.push_back(born_outcome_dist(exp, psi));
  }

  double max_tv = 0.0;
  for (std::size_t i = 0; i < dists.size(); ++i) {
    for (std::size_t j = i + 1; j < dists.size(); ++j) {
      double tv = 0.0;
      for (std::size_t k = 0; k < dists[i].size(); ++k)
        tv += std::abs(dists[i][k] - dists[j][k]);
      max_tv = std::max(max_tv, 0.5 * tv);
    }
  }
  return max_tv;
}

FiniteExperiment read_experiment(std::istream& is) {
  const KeyFile kf = KeyFile::parse(is);
  FiniteExperiment exp;
  exp.d_sys = static_cast<int>(kf.get_int("experiment", "d_sys"));
  exp.d_app = static_cast<int>(kf.get_int("experiment", "d_app"));
  const int D = exp.d_sys * exp.d_app;

  const auto& urows = kf.body("unitary");
  if (static_cast<int>(urows.size()) != D)
    throw ConfigError("unitary section must have d_sys*d_app rows");
  exp.unitary.resize(D, D);
  for (int r = 0; r < D; ++r) {
    std::istringstream ss(urows[r]);
    for (int c = 0; c < D; ++c) {
      double re = 0.0, im = 0.0;
      if (!(ss >> re >> im)) throw ConfigError("unitary row has too few numbers");
      exp.unitary(r, c) = std::complex<double>(re, im);
    }
  }

  const auto& srows = kf.body("ready_state");
  if (static_cast<int>(srows.size()) != exp.d_app)
    throw ConfigError("ready_state section must have d_app rows");
  exp.ready_state.resize(exp.d_app);
  for (int a = 0; a < exp.d_app; ++a) {
    std::istringstream ss(srows[a]);
    double re = 0.0, im = 0.0;
    if (!(ss >> re >> im)) throw ConfigError("ready_state row needs re and im");
    exp.ready_state(a) = std::complex<double>(re, im);
  }

  exp.calibration.assign(D, -1);
  for (const std::string& row : kf.body("calibration")) {
    std::istringstream ss(row);
    int index = -1, label = -1;
    if (!(ss >> index >> label)) throw ConfigError("calibration row needs index and label");
    if (index < 0 || index >= D) throw ConfigError("calibration index out of range");
    exp.calibration[index] = label;
  }
  for (int q = 0; q < D; ++q)
    if (exp.calibration[q] < 0)
      throw ConfigError("calibration misses composite index " + std::to_string(q));

  exp.validate();
  return exp;
}

FiniteExperiment read_experiment_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open experiment file: " + path);
  return read_experiment(f);
}

void write_experiment(std::ostream& os, const FiniteExperiment& exp) {
  os << "[experiment]\n";
  os << "d_sys = " << exp.d_sys << '\n';
  os << "d_app = " << exp.d_app << '\n';
  os << "[unitary]\n";
  for (int r = 0; r < exp.dim(); ++r) {
    for (int c = 0; c < exp.dim(); ++c) {
      if (c) os << ' ';
      os << fmt_g(exp.unitary(r, c).real()) << ' ' << fmt_g(exp.unitary(r, c).imag());
    }
    os << '\n';
  }
  os << "[ready_state]\n";
  for (int a = 0; a < exp.d_app; ++a)
    os << fmt_g(exp.ready_state(a).real()) << ' ' << fmt_g(exp.ready_state(a).imag())
       << '\n';
  os << "[calibration]\n";
  for (int q = 0; q < exp.dim(); ++q) os << q << ' ' << exp.calibration[q] << '\n';
}

}  // namespace spintime
