#pragma once

// Quasi-adiabatic time evolution under a piecewise-linear drive schedule.
//
// Closed system: commutator-free 4th-order Magnus stepper. Each step combines
// the Hamiltonian at the two Gauss-Legendre nodes into two exponentials, each
// applied through a short Lanczos recurrence. Since H(omega, delta) is linear
// in the drive, a weighted combination of H at two drives is again a Rydberg
// Hamiltonian with a rescaled interaction part.
//
// Open system: quantum-jump trajectories, first order in dt, with per-atom
// decay (sigma-) and dephasing (sigma_z) channels. A dense density-matrix
// integrator backs the trajectories for small systems.
//
// Times in us, rates nu in MHz.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "rydsat/common.hpp"
#include "rydsat/hamiltonian.hpp"

namespace rydsat {

struct ScheduleSegment {
  double duration = 0.0;  // us
  double omega0 = 0.0, omega1 = 0.0;  // MHz
  double delta0 = 0.0, delta1 = 0.0;  // MHz
};

struct Schedule {
  std::vector<ScheduleSegment> segments;

  double total_time() const {
    double t = 0.0;
    for (const auto& s : segments) t += s.duration;
    return t;
  }

  DriveParams at(double t) const {
    if (segments.empty()) throw std::logic_error("Schedule::at: empty schedule");
    double acc = 0.0;
    for (const auto& s : segments) {
      if (t <= acc + s.duration || &s == &segments.back()) {
        const double f = s.duration > 0 ? std::clamp((t - acc) / s.duration, 0.0, 1.0) : 0.0;
        return {s.omega0 + f * (s.omega1 - s.omega0), s.delta0 + f * (s.delta1 - s.delta0)};
      }
      acc += s.duration;
    }
    const auto& s = segments.back();
    return {s.omega1, s.delta1};
  }
};

// Three-segment sweep: switch the drive on at fixed negative detuning, ramp
// the detuning through zero at full drive, switch the drive off.
inline Schedule default_schedule(double omega_max = 1.0, double delta_final = 2.0,
                                 double total_time = 4.0) {
  if (total_time <= 0) throw std::invalid_argument("default_schedule: nonpositive time");
  const double delta_start = -0.7 * delta_final;
  Schedule s;
  s.segments.push_back({total_time / 4, 0.0, omega_max, delta_start, delta_start});
  s.segments.push_back({total_time / 2, omega_max, omega_max, delta_start, delta_final});
  s.segments.push_back({total_time / 4, omega_max, 0.0, delta_final, delta_final});
  return s;
}

struct NoiseRates {
  double decay = 0.03;    // nu, MHz
  double dephase = 0.03;  // nu, MHz
};

struct EvolveOptions {
  double dt = 1e-3;   // us
  int krylov_dim = 10;
};

using StateVector = std::vector<std::complex<double>>;

namespace detail {

// state <- exp(-i dt H(omega, delta, uscale)) state via a Lanczos subspace.
inline void krylov_exp_step(const RydbergSystem& sys, StateVector& state, double dt,
                            double omega_rad, double delta_rad, double uscale, int m_max) {
  using Complex = std::complex<double>;
  const std::uint64_t d = state.size();
  const int m_cap = static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(m_max), d));

  std::vector<StateVector> v;
  std::vector<double> alpha, beta;
  double norm0 = 0.0;
  for (const auto& x : state) norm0 += std::norm(x);
  norm0 = std::sqrt(norm0);
  if (norm0 < 1e-300) return;
  StateVector v0(d);
  for (std::uint64_t i = 0; i < d; ++i) v0[i] = state[i] / norm0;
  v.push_back(std::move(v0));

  StateVector w(d);
  int built = 0;
  for (int j = 0; j < m_cap; ++j) {
    sys.apply(v[static_cast<size_t>(j)].data(), w.data(), omega_rad, delta_rad, uscale);
    if (j > 0)
      for (std::uint64_t i = 0; i < d; ++i)
        w[i] -= beta[static_cast<size_t>(j - 1)] * v[static_cast<size_t>(j - 1)][i];
    double a = 0.0;
    for (std::uint64_t i = 0; i < d; ++i)
      a += (std::conj(v[static_cast<size_t>(j)][i]) * w[i]).real();
    alpha.push_back(a);
    for (std::uint64_t i = 0; i < d; ++i) w[i] -= a * v[static_cast<size_t>(j)][i];
    // one extra orthogonalization pass keeps the short recurrence clean
    for (int p = 0; p <= j; ++p) {
      Complex dot{0, 0};
      for (std::uint64_t i = 0; i < d; ++i) dot += std::conj(v[static_cast<size_t>(p)][i]) * w[i];
      if (std::abs(dot) > 0)
        for (std::uint64_t i = 0; i < d; ++i) w[i] -= dot * v[static_cast<size_t>(p)][i];
    }
    double b = 0.0;
    for (const auto& x : w) b += std::norm(x);
    b = std::sqrt(b);
    built = j + 1;
    if (b < 1e-13 || j == m_cap - 1) break;
    beta.push_back(b);
    StateVector next(d);
    for (std::uint64_t i = 0; i < d; ++i) next[i] = w[i] / b;
    v.push_back(std::move(next));
  }

  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(built, built);
  for (int i = 0; i < built; ++i) {
    t(i, i) = alpha[static_cast<size_t>(i)];
    if (i + 1 < built) {
      t(i, i + 1) = beta[static_cast<size_t>(i)];
      t(i + 1, i) = beta[static_cast<size_t>(i)];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  Eigen::VectorXcd y(built);
  for (int i = 0; i < built; ++i) {
    Complex acc{0, 0};
    for (int p = 0; p < built; ++p)
      acc += es.eigenvectors()(i, p) *
             std::exp(Complex(0, -dt * es.eigenvalues()(p))) * es.eigenvectors()(0, p);
    y(i) = acc;
  }
  for (std::uint64_t i = 0; i < d; ++i) {
    Complex acc{0, 0};
    for (int p = 0; p < built; ++p) acc += y(p) * v[static_cast<size_t>(p)][i];
    state[i] = norm0 * acc;
  }
}

// One 4th-order commutator-free step over [t, t+h].
inline void cf4_step(const RydbergSystem& sys, const Schedule& sched, StateVector& state,
                     double t, double h, int m_max) {
  constexpr double node1 = 0.5 - 0.28867513459481287;  // 1/2 - sqrt(3)/6
  constexpr double node2 = 0.5 + 0.28867513459481287;
  constexpr double a1 = (3.0 - 2.0 * 1.7320508075688772) / 12.0;  // (3 - 2 sqrt 3)/12
  constexpr double a2 = (3.0 + 2.0 * 1.7320508075688772) / 12.0;

  const DriveParams d1 = sched.at(t + node1 * h);
  const DriveParams d2 = sched.at(t + node2 * h);
  const double w1o = d1.omega * two_pi, w1d = d1.delta * two_pi;
  const double w2o = d2.omega * two_pi, w2d = d2.delta * two_pi;

  // exp(-i h (a2 H1 + a1 H2)) first, then exp(-i h (a1 H1 + a2 H2)).
  krylov_exp_step(sys, state, h, a2 * w1o + a1 * w2o, a2 * w1d + a1 * w2d, 0.5, m_max);
  krylov_exp_step(sys, state, h, a1 * w1o + a2 * w2o, a1 * w1d + a2 * w2d, 0.5, m_max);
}

}  // namespace detail

inline StateVector initial_state(const RydbergSystem& sys) {
  StateVector psi(sys.dim(), {0, 0});
  const auto idx = sys.index_of(0);
  if (!idx) throw std::logic_error("initial_state: all-ground config missing from basis");
  psi[*idx] = 1.0;
  return psi;
}

inline StateVector evolve(const RydbergSystem& sys, const Schedule& sched,
                          const EvolveOptions& opt = {}, const StateVector* initial = nullptr) {
  if (opt.dt <= 0) throw std::invalid_argument("evolve: dt must be positive");
  StateVector psi = initial ? *initial : initial_state(sys);
  if (psi.size() != sys.dim()) throw std::invalid_argument("evolve: state dimension mismatch");
  const double T = sched.total_time();
  const auto steps = static_cast<std::int64_t>(std::ceil(T / opt.dt - 1e-12));
  for (std::int64_t k = 0; k < steps; ++k) {
    const double t = k * opt.dt;
    const double h = std::min(opt.dt, T - t);
    detail::cf4_step(sys, sched, psi, t, h, opt.krylov_dim);
  }
  return psi;
}

struct TrajectoryEnsemble {
  std::vector<StateVector> states;  // equal weights
};

// Quantum-jump unraveling, first order in dt. Jump probabilities use the
// pre-step state; the no-jump branch applies the unitary step, then the
// decay-induced norm damping, then renormalizes.
inline TrajectoryEnsemble evolve_open(const RydbergSystem& sys, const Schedule& sched,
                                      const NoiseRates& noise, int trajectories,
                                      std::uint64_t seed, const EvolveOptions& opt = {}) {
  if (trajectories < 1) throw std::invalid_argument("evolve_open: need at least one trajectory");
  if (opt.dt <= 0) throw std::invalid_argument("evolve_open: dt must be positive");
  const int n = sys.num_atoms();
  const std::uint64_t d = sys.dim();
  const double g_decay = noise.decay * two_pi;
  const double g_deph = noise.dephase * two_pi;
  const double T = sched.total_time();
  const auto steps = static_cast<std::int64_t>(std::ceil(T / opt.dt - 1e-12));

  TrajectoryEnsemble ens;
  ens.states.reserve(static_cast<size_t>(trajectories));

  std::vector<double> occ(static_cast<size_t>(n));
  for (int traj = 0; traj < trajectories; ++traj) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(traj));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    StateVector psi = initial_state(sys);

    for (std::int64_t k = 0; k < steps; ++k) {
      const double t = k * opt.dt;
      const double h = std::min(opt.dt, T - t);

      std::fill(occ.begin(), occ.end(), 0.0);
      for (std::uint64_t i = 0; i < d; ++i) {
        const double w = std::norm(psi[i]);
        if (w == 0.0) continue;
        const BasisIndex s = sys.basis_state(i);
        for (int j = 0; j < n; ++j)
          if (bit_of(s, j)) occ[static_cast<size_t>(j)] += w;
      }
      double p_total = 0.0;
      for (int j = 0; j < n; ++j) p_total += h * g_decay * occ[static_cast<size_t>(j)];
      p_total += static_cast<double>(n) * h * g_deph;

      const double r = unif(rng);
      if (r < p_total) {
        double acc = 0.0;
        int channel_atom = -1;
        bool is_decay = false;
        for (int j = 0; j < n && channel_atom < 0; ++j) {
          acc += h * g_decay * occ[static_cast<size_t>(j)];
          if (r < acc) {
            channel_atom = j;
            is_decay = true;
          }
        }
        for (int j = 0; j < n && channel_atom < 0; ++j) {
          acc += h * g_deph;
          if (r < acc) channel_atom = j;
        }
        if (channel_atom < 0) channel_atom = n - 1;
        if (is_decay) {
          StateVector next(d, {0, 0});
          for (std::uint64_t i = 0; i < d; ++i) {
            if (psi[i] == std::complex<double>{0, 0}) continue;
            const BasisIndex s = sys.basis_state(i);
            if (!bit_of(s, channel_atom)) continue;
            const auto ti = sys.index_of(s ^ (1ull << channel_atom));
            next[*ti] = psi[i];
          }
          psi = std::move(next);
        } else {
          for (std::uint64_t i = 0; i < d; ++i)
            if (bit_of(sys.basis_state(i), channel_atom)) psi[i] = -psi[i];
        }
        double n2 = 0.0;
        for (const auto& x : psi) n2 += std::norm(x);
        if (n2 < 1e-300) {
          psi = initial_state(sys);
        } else {
          n2 = std::sqrt(n2);
          for (auto& x : psi) x /= n2;
        }
      } else {
        detail::cf4_step(sys, sched, psi, t, h, opt.krylov_dim);
        for (std::uint64_t i = 0; i < d; ++i)
          psi[i] *= std::exp(-0.5 * h * g_decay * sys.excitations(i));
        double n2 = 0.0;
        for (const auto& x : psi) n2 += std::norm(x);
        n2 = std::sqrt(n2);
        for (auto& x : psi) x /= n2;
      }
    }
    ens.states.push_back(std::move(psi));
  }
  return ens;
}

// Dense density-matrix integrator (RK4 on the full Lindblad generator) for
// cross-checking trajectories on small systems.
inline Eigen::MatrixXcd evolve_lindblad_dense(const RydbergSystem& sys, const Schedule& sched,
                                              const NoiseRates& noise,
                                              const EvolveOptions& opt = {}) {
  const std::uint64_t d = sys.dim();
  if (d > 256)
    throw std::invalid_argument("evolve_lindblad_dense: dimension too large for dense integration");
  const int n = sys.num_atoms();
  const auto dd = static_cast<Eigen::Index>(d);
  const double g_decay = noise.decay * two_pi;
  const double g_deph = noise.dephase * two_pi;

  std::vector<Eigen::MatrixXcd> sm(static_cast<size_t>(n));
  std::vector<Eigen::VectorXcd> nj(static_cast<size_t>(n));
  std::vector<Eigen::VectorXcd> zj(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    sm[static_cast<size_t>(j)] = Eigen::MatrixXcd::Zero(dd, dd);
    nj[static_cast<size_t>(j)] = Eigen::VectorXcd::Zero(dd);
    zj[static_cast<size_t>(j)] = Eigen::VectorXcd::Zero(dd);
    for (std::uint64_t i = 0; i < d; ++i) {
      const BasisIndex s = sys.basis_state(i);
      nj[static_cast<size_t>(j)](static_cast<Eigen::Index>(i)) = bit_of(s, j) ? 1.0 : 0.0;
      zj[static_cast<size_t>(j)](static_cast<Eigen::Index>(i)) = bit_of(s, j) ? -1.0 : 1.0;
      if (bit_of(s, j)) {
        const auto ti = sys.index_of(s ^ (1ull << j));
        sm[static_cast<size_t>(j)](static_cast<Eigen::Index>(*ti), static_cast<Eigen::Index>(i)) = 1.0;
      }
    }
  }

  auto rhs = [&](double t, const Eigen::MatrixXcd& rho) {
    const DriveParams dr = sched.at(t);
    const Eigen::MatrixXcd h =
        sys.dense(dr.omega * two_pi, dr.delta * two_pi).cast<std::complex<double>>();
    Eigen::MatrixXcd out = std::complex<double>(0, -1) * (h * rho - rho * h);
    for (int j = 0; j < n; ++j) {
      const auto& s = sm[static_cast<size_t>(j)];
      const auto& nd = nj[static_cast<size_t>(j)];
      out += g_decay * (s * rho * s.adjoint());
      out -= 0.5 * g_decay * (nd.asDiagonal() * rho + rho * nd.asDiagonal());
      const auto& z = zj[static_cast<size_t>(j)];
      out += g_deph * (z.asDiagonal() * rho * z.asDiagonal()).eval();
      out -= g_deph * rho;
    }
    return out;
  };

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dd, dd);
  const auto i0 = sys.index_of(0);
  rho(static_cast<Eigen::Index>(*i0), static_cast<Eigen::Index>(*i0)) = 1.0;
  const double T = sched.total_time();
  const auto steps = static_cast<std::int64_t>(std::ceil(T / opt.dt - 1e-12));
  for (std::int64_t k = 0; k < steps; ++k) {
    const double t = k * opt.dt;
    const double h = std::min(opt.dt, T - t);
    const Eigen::MatrixXcd k1 = rhs(t, rho);
    const Eigen::MatrixXcd k2 = rhs(t + h / 2, rho + (h / 2) * k1);
    const Eigen::MatrixXcd k3 = rhs(t + h / 2, rho + (h / 2) * k2);
    const Eigen::MatrixXcd k4 = rhs(t + h, rho + h * k3);
    rho += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return rho;
}

inline double fidelity(const StateVector& psi, const StateVector& reference) {
  if (psi.size() != reference.size()) throw std::invalid_argument("fidelity: dimension mismatch");
  std::complex<double> dot{0, 0};
  for (size_t i = 0; i < psi.size(); ++i) dot += std::conj(reference[i]) * psi[i];
  return std::norm(dot);
}

// Mass inside the span of an orthonormal manifold.
inline double fidelity(const StateVector& psi, const std::vector<StateVector>& manifold) {
  double f = 0.0;
  for (const StateVector& m : manifold) f += fidelity(psi, m);
  return f;
}

inline double fidelity(const TrajectoryEnsemble& ens, const std::vector<StateVector>& manifold) {
  if (ens.states.empty()) throw std::invalid_argument("fidelity: empty ensemble");
  double f = 0.0;
  for (const StateVector& s : ens.states) f += fidelity(s, manifold);
  return f / static_cast<double>(ens.states.size());
}

// Probabilities over atom configurations.
inline std::map<BasisIndex, double> state_probabilities(const RydbergSystem& sys,
                                                        const StateVector& psi) {
  std::map<BasisIndex, double> p;
  for (std::uint64_t i = 0; i < sys.dim(); ++i) {
    const double w = std::norm(psi[i]);
    if (w > 0) p[sys.basis_state(i)] += w;
  }
  return p;
}

inline std::map<BasisIndex, double> state_probabilities(const RydbergSystem& sys,
                                                        const TrajectoryEnsemble& ens) {
  std::map<BasisIndex, double> p;
  const double w0 = 1.0 / static_cast<double>(ens.states.size());
  for (const StateVector& psi : ens.states)
    for (std::uint64_t i = 0; i < sys.dim(); ++i) {
      const double w = std::norm(psi[i]);
      if (w > 0) p[sys.basis_state(i)] += w0 * w;
    }
  return p;
}

struct GapPoint {
  double t = 0.0;    // us
  double gap = 0.0;  // MHz
};

struct GapScanResult {
  std::vector<GapPoint> points;
  double min_gap = 0.0;
  double t_min = 0.0;
};

// Instantaneous gap between the (possibly degenerate) ground manifold and the
// first level above it, sampled along the schedule.
inline GapScanResult gap_scan(const RydbergSystem& sys, const Schedule& sched, int num_points) {
  if (sys.num_atoms() > 14)
    throw std::invalid_argument("gap_scan: supported up to 14 atoms");
  if (num_points < 2) throw std::invalid_argument("gap_scan: need at least 2 points");
  GapScanResult res;
  res.min_gap = std::numeric_limits<double>::infinity();
  const double T = sched.total_time();
  for (int i = 0; i < num_points; ++i) {
    const double t = T * i / (num_points - 1);
    const DriveParams dr = sched.at(t);
    int k = static_cast<int>(std::min<std::uint64_t>(24, sys.dim()));
    double gap = 0.0;
    while (true) {
      SpectrumResult sp = ground_state(sys, dr, k);
      auto groups = degeneracy_groups(sp.energies);
      if (groups.size() >= 2) {
        gap = sp.energies[static_cast<size_t>(groups[1].front())] - sp.energies[0];
        break;
      }
      if (static_cast<std::uint64_t>(sp.energies.size()) >= sys.dim()) {
        gap = 0.0;  // fully degenerate space
        break;
      }
      k = static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(k) * 2, sys.dim()));
    }
    res.points.push_back({t, gap});
    if (gap < res.min_gap) {
      res.min_gap = gap;
      res.t_min = t;
    }
  }
  return res;
}

}  // namespace rydsat
