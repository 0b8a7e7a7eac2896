#pragma once

// Rydberg Hamiltonian on a set of atoms:
//
//   H / hbar = sum_{i<j} U_ij n_i n_j - Delta(t) sum_i n_i + (Omega(t)/2) sum_i f_i sigma_x^i
//
// Public interfaces use frequencies nu in MHz (quantity / 2pi); kernels work
// in angular units (rad/us). Basis conventions are in common.hpp.
//
// Interaction models:
//   Ideal  - edges are hard constraints; the state space is restricted to
//            independent sets of the edge set.
//   GraphU - finite repulsion u on edges, nothing elsewhere.
//   VdW    - c6 / r^6 between every pair, from atom positions.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "rydsat/common.hpp"
#include "rydsat/embedding.hpp"
#include "rydsat/reduction.hpp"

namespace rydsat {

struct DriveParams {
  double omega = 0.0;  // Rabi frequency nu, MHz
  double delta = 0.0;  // detuning nu, MHz
};

struct InteractionModel {
  enum class Kind { Ideal, GraphU, VdW };
  Kind kind = Kind::GraphU;
  double u = 8.5;     // GraphU edge coupling nu, MHz
  double c6 = 1.0e6;  // VdW coefficient, MHz um^6

  static InteractionModel ideal() { return {Kind::Ideal, 0.0, 0.0}; }
  static InteractionModel graph_u(double u) { return {Kind::GraphU, u, 0.0}; }
  static InteractionModel vdw(double c6 = 1.0e6) { return {Kind::VdW, 0.0, c6}; }
};

// Pairwise couplings in MHz; hard pairs have no finite value.
struct PairCouplings {
  int num_atoms = 0;
  std::vector<std::tuple<int, int, double>> finite;  // (a, b, u_nu), a < b
  std::vector<std::pair<int, int>> hard;             // Ideal edges
};

inline PairCouplings interactions(const MisGraph& g, const InteractionModel& m) {
  PairCouplings pc;
  pc.num_atoms = g.num_vertices();
  for (const GraphEdge& e : g.edges) {
    if (m.kind == InteractionModel::Kind::Ideal)
      pc.hard.emplace_back(e.a, e.b);
    else if (m.kind == InteractionModel::Kind::GraphU)
      pc.finite.emplace_back(e.a, e.b, m.u);
    else
      throw std::invalid_argument("interactions: VdW needs an embedding, not a graph");
  }
  return pc;
}

inline PairCouplings interactions(const Embedding& e, const InteractionModel& m) {
  PairCouplings pc;
  pc.num_atoms = e.num_sites();
  if (m.kind == InteractionModel::Kind::VdW) {
    for (int a = 0; a < pc.num_atoms; ++a)
      for (int b = a + 1; b < pc.num_atoms; ++b) {
        const double r = distance(e.sites[static_cast<size_t>(a)].position,
                                  e.sites[static_cast<size_t>(b)].position);
        pc.finite.emplace_back(a, b, m.c6 / std::pow(r, 6));
      }
  } else {
    for (auto [a, b] : e.physical_edges) {
      if (m.kind == InteractionModel::Kind::Ideal)
        pc.hard.emplace_back(a, b);
      else
        pc.finite.emplace_back(a, b, m.u);
    }
  }
  return pc;
}

// Matrix-free Hamiltonian structure. Drive terms are supplied per apply call
// so one system serves a whole schedule.
class RydbergSystem {
 public:
  using Complex = std::complex<double>;

  static RydbergSystem from_couplings(const PairCouplings& pc,
                                      std::vector<double> rabi_factors = {}) {
    RydbergSystem sys;
    sys.n_ = pc.num_atoms;
    if (sys.n_ < 1 || sys.n_ > 30)
      throw std::invalid_argument("RydbergSystem: atom count out of range");
    sys.rabi_ = rabi_factors.empty() ? std::vector<double>(static_cast<size_t>(sys.n_), 1.0)
                                     : std::move(rabi_factors);
    if (static_cast<int>(sys.rabi_.size()) != sys.n_)
      throw std::invalid_argument("RydbergSystem: rabi factor count mismatch");

    sys.restricted_ = !pc.hard.empty();
    if (sys.restricted_ && !pc.finite.empty())
      throw std::invalid_argument("RydbergSystem: mixed hard and finite couplings");

    if (sys.restricted_) {
      std::vector<std::uint64_t> adj(static_cast<size_t>(sys.n_), 0);
      for (auto [a, b] : pc.hard) {
        adj[static_cast<size_t>(a)] |= 1ull << b;
        adj[static_cast<size_t>(b)] |= 1ull << a;
      }
      for (BasisIndex s = 0; s < (1ull << sys.n_); ++s) {
        bool ok = true;
        for (int j = 0; j < sys.n_ && ok; ++j)
          if (bit_of(s, j) && (s & adj[static_cast<size_t>(j)])) ok = false;
        if (ok) sys.basis_.push_back(s);
      }
      sys.u_diag_.assign(sys.basis_.size(), 0.0);
      sys.pop_.resize(sys.basis_.size());
      for (size_t i = 0; i < sys.basis_.size(); ++i)
        sys.pop_[i] = popcount64(sys.basis_[i]);
      // Precomputed spin-flip transitions that stay inside the subspace.
      sys.flips_.resize(sys.basis_.size());
      for (size_t i = 0; i < sys.basis_.size(); ++i)
        for (int j = 0; j < sys.n_; ++j) {
          const BasisIndex t = sys.basis_[i] ^ (1ull << j);
          auto it = std::lower_bound(sys.basis_.begin(), sys.basis_.end(), t);
          if (it != sys.basis_.end() && *it == t)
            sys.flips_[i].emplace_back(j, static_cast<std::uint64_t>(it - sys.basis_.begin()));
        }
    } else {
      if (sys.n_ > 16)
        throw std::invalid_argument(
            "RydbergSystem: full-space model limited to 16 atoms; use the Ideal model");
      const std::uint64_t dim = 1ull << sys.n_;
      std::vector<double> u(static_cast<size_t>(sys.n_) * sys.n_, 0.0);
      for (auto [a, b, v] : pc.finite) {
        u[static_cast<size_t>(a) * sys.n_ + b] = v * two_pi;
        u[static_cast<size_t>(b) * sys.n_ + a] = v * two_pi;
      }
      sys.u_diag_.assign(dim, 0.0);
      sys.pop_.resize(dim);
      for (BasisIndex s = 1; s < dim; ++s) {
        const int h = 63 - std::countl_zero(s);
        const BasisIndex rest = s ^ (1ull << h);
        double extra = 0.0;
        for (int j = 0; j < h; ++j)
          if (bit_of(rest, j)) extra += u[static_cast<size_t>(h) * sys.n_ + j];
        sys.u_diag_[s] = sys.u_diag_[rest] + extra;
      }
      for (BasisIndex s = 0; s < dim; ++s) sys.pop_[s] = popcount64(s);
    }
    return sys;
  }

  static RydbergSystem from_graph(const MisGraph& g, const InteractionModel& m,
                                  std::vector<double> rabi_factors = {}) {
    return from_couplings(interactions(g, m), std::move(rabi_factors));
  }

  static RydbergSystem from_embedding(const Embedding& e, const InteractionModel& m,
                                      std::vector<double> rabi_factors = {}) {
    return from_couplings(interactions(e, m), std::move(rabi_factors));
  }

  int num_atoms() const { return n_; }
  bool restricted() const { return restricted_; }
  std::uint64_t dim() const {
    return restricted_ ? basis_.size() : (1ull << n_);
  }
  BasisIndex basis_state(std::uint64_t idx) const {
    return restricted_ ? basis_[idx] : idx;
  }
  std::optional<std::uint64_t> index_of(BasisIndex s) const {
    if (!restricted_) return s < dim() ? std::optional<std::uint64_t>(s) : std::nullopt;
    auto it = std::lower_bound(basis_.begin(), basis_.end(), s);
    if (it != basis_.end() && *it == s)
      return static_cast<std::uint64_t>(it - basis_.begin());
    return std::nullopt;
  }
  int excitations(std::uint64_t idx) const { return pop_[idx]; }
  const std::vector<double>& rabi_factors() const { return rabi_; }

  // Diagonal element in rad/us at the given drive.
  double diag_rad(std::uint64_t idx, double delta_rad, double uscale = 1.0) const {
    return u_diag_[idx] * uscale - delta_rad * pop_[idx];
  }

  // out = H in, drive in rad/us. uscale rescales the interaction part, which
  // lets linear combinations of the Hamiltonian at two drives be applied as a
  // single system (the combination is again of Rydberg form).
  void apply(const Complex* in, Complex* out, double omega_rad, double delta_rad,
             double uscale = 1.0) const {
    const std::uint64_t d = dim();
    const double half_omega = 0.5 * omega_rad;
    if (restricted_) {
      for (std::uint64_t i = 0; i < d; ++i) {
        Complex acc = diag_rad(i, delta_rad, uscale) * in[i];
        for (auto [atom, t] : flips_[i]) acc += half_omega * rabi_[static_cast<size_t>(atom)] * in[t];
        out[i] = acc;
      }
    } else {
      for (std::uint64_t s = 0; s < d; ++s) {
        Complex acc = diag_rad(s, delta_rad, uscale) * in[s];
        for (int j = 0; j < n_; ++j)
          acc += half_omega * rabi_[static_cast<size_t>(j)] * in[s ^ (1ull << j)];
        out[s] = acc;
      }
    }
  }

  void apply(const std::vector<Complex>& in, std::vector<Complex>& out, double omega_rad,
             double delta_rad, double uscale = 1.0) const {
    out.resize(in.size());
    apply(in.data(), out.data(), omega_rad, delta_rad, uscale);
  }

  // Dense matrix in rad/us (real symmetric in the computational basis).
  Eigen::MatrixXd dense(double omega_rad, double delta_rad, double uscale = 1.0) const {
    const auto d = static_cast<Eigen::Index>(dim());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
    std::vector<Complex> in(static_cast<size_t>(d)), out(static_cast<size_t>(d));
    for (Eigen::Index c = 0; c < d; ++c) {
      std::fill(in.begin(), in.end(), Complex{0, 0});
      in[static_cast<size_t>(c)] = 1.0;
      apply(in.data(), out.data(), omega_rad, delta_rad, uscale);
      for (Eigen::Index r = 0; r < d; ++r) h(r, c) = out[static_cast<size_t>(r)].real();
    }
    return h;
  }

 private:
  int n_ = 0;
  bool restricted_ = false;
  std::vector<BasisIndex> basis_;   // restricted only, sorted
  std::vector<double> u_diag_;      // interaction diagonal, rad/us
  std::vector<int> pop_;            // excitation counts
  std::vector<std::vector<std::pair<int, std::uint64_t>>> flips_;  // restricted only
  std::vector<double> rabi_;
};

// Hamiltonian at a fixed drive.
struct Operator {
  const RydbergSystem* system = nullptr;
  DriveParams drive;

  std::uint64_t dim() const { return system->dim(); }
  void apply(const std::vector<std::complex<double>>& in,
             std::vector<std::complex<double>>& out) const {
    system->apply(in, out, drive.omega * two_pi, drive.delta * two_pi);
  }
};

inline Operator build(const MisGraph& g, const InteractionModel& m, DriveParams drive,
                      RydbergSystem& storage) {
  storage = RydbergSystem::from_graph(g, m);
  return Operator{&storage, drive};
}

inline Operator build(const Embedding& e, const InteractionModel& m, DriveParams drive,
                      RydbergSystem& storage) {
  storage = RydbergSystem::from_embedding(e, m);
  return Operator{&storage, drive};
}

struct SpectrumResult {
  std::vector<double> energies;  // nu, MHz, ascending
  std::vector<std::vector<std::complex<double>>> states;
};

// Indices grouped by (near-)degenerate energy, relative threshold.
inline std::vector<std::vector<int>> degeneracy_groups(const std::vector<double>& energies,
                                                       double rel = 1e-9) {
  std::vector<std::vector<int>> groups;
  double scale = 1.0;
  for (double e : energies) scale = std::max(scale, std::abs(e));
  const double tol = rel * scale;
  for (int i = 0; i < static_cast<int>(energies.size()); ++i) {
    if (groups.empty() ||
        energies[static_cast<size_t>(i)] - energies[static_cast<size_t>(groups.back().front())] > tol)
      groups.emplace_back();
    groups.back().push_back(i);
  }
  return groups;
}

namespace detail {

inline SpectrumResult spectrum_diagonal(const RydbergSystem& sys, double delta_rad, int k) {
  const std::uint64_t d = sys.dim();
  std::vector<std::uint64_t> idx(d);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::uint64_t a, std::uint64_t b) {
    return sys.diag_rad(a, delta_rad) < sys.diag_rad(b, delta_rad);
  });
  SpectrumResult res;
  const int kk = std::min<std::uint64_t>(static_cast<std::uint64_t>(k), d);
  for (int i = 0; i < kk; ++i) {
    res.energies.push_back(sys.diag_rad(idx[static_cast<size_t>(i)], delta_rad) / two_pi);
    std::vector<std::complex<double>> v(d, {0, 0});
    v[idx[static_cast<size_t>(i)]] = 1.0;
    res.states.push_back(std::move(v));
  }
  return res;
}

inline SpectrumResult spectrum_dense(const RydbergSystem& sys, double omega_rad,
                                     double delta_rad, int k) {
  Eigen::MatrixXd h = sys.dense(omega_rad, delta_rad);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  SpectrumResult res;
  const auto d = h.rows();
  const int kk = std::min<Eigen::Index>(k, d);
  for (int i = 0; i < kk; ++i) {
    res.energies.push_back(es.eigenvalues()(i) / two_pi);
    std::vector<std::complex<double>> v(static_cast<size_t>(d));
    for (Eigen::Index r = 0; r < d; ++r) v[static_cast<size_t>(r)] = es.eigenvectors()(r, i);
    res.states.push_back(std::move(v));
  }
  return res;
}

// Lanczos with full reorthogonalization for the low end of the spectrum.
inline SpectrumResult spectrum_lanczos(const RydbergSystem& sys, double omega_rad,
                                       double delta_rad, int k, std::uint64_t seed = 7) {
  using Complex = std::complex<double>;
  const std::uint64_t d = sys.dim();
  const int m = static_cast<int>(std::min<std::uint64_t>(d, static_cast<std::uint64_t>(
      std::max(2 * k + 30, 120))));
  std::vector<std::vector<Complex>> v;
  std::vector<double> alpha, beta;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Complex> v0(d);
  double nrm = 0.0;
  for (auto& x : v0) {
    x = {gauss(rng), 0.0};
    nrm += std::norm(x);
  }
  nrm = std::sqrt(nrm);
  for (auto& x : v0) x /= nrm;
  v.push_back(std::move(v0));

  std::vector<Complex> w(d);
  int built = 0;
  for (int j = 0; j < m; ++j) {
    sys.apply(v[static_cast<size_t>(j)].data(), w.data(), omega_rad, delta_rad);
    if (j > 0)
      for (std::uint64_t i = 0; i < d; ++i)
        w[i] -= beta[static_cast<size_t>(j - 1)] * v[static_cast<size_t>(j - 1)][i];
    double a = 0.0;
    for (std::uint64_t i = 0; i < d; ++i)
      a += (std::conj(v[static_cast<size_t>(j)][i]) * w[i]).real();
    alpha.push_back(a);
    for (std::uint64_t i = 0; i < d; ++i) w[i] -= a * v[static_cast<size_t>(j)][i];
    for (int pass = 0; pass < 2; ++pass)
      for (int p = 0; p <= j; ++p) {
        Complex dot{0, 0};
        for (std::uint64_t i = 0; i < d; ++i) dot += std::conj(v[static_cast<size_t>(p)][i]) * w[i];
        for (std::uint64_t i = 0; i < d; ++i) w[i] -= dot * v[static_cast<size_t>(p)][i];
      }
    double b = 0.0;
    for (const auto& x : w) b += std::norm(x);
    b = std::sqrt(b);
    built = j + 1;
    if (b < 1e-12 || j == m - 1) break;
    beta.push_back(b);
    std::vector<Complex> next(d);
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
  SpectrumResult res;
  const int kk = std::min(k, built);
  for (int i = 0; i < kk; ++i) {
    res.energies.push_back(es.eigenvalues()(i) / two_pi);
    std::vector<Complex> state(d, {0, 0});
    for (int p = 0; p < built; ++p) {
      const double c = es.eigenvectors()(p, i);
      for (std::uint64_t q = 0; q < d; ++q) state[q] += c * v[static_cast<size_t>(p)][q];
    }
    double n2 = 0.0;
    for (const auto& x : state) n2 += std::norm(x);
    n2 = std::sqrt(n2);
    for (auto& x : state) x /= n2;
    res.states.push_back(std::move(state));
  }
  return res;
}

}  // namespace detail

// Lowest k eigenpairs. Diagonal drives are solved exactly, small systems
// densely, large ones iteratively.
inline SpectrumResult ground_state(const RydbergSystem& sys, DriveParams drive, int k = 1) {
  if (k < 1) throw std::invalid_argument("ground_state: k must be positive");
  const double omega_rad = drive.omega * two_pi;
  const double delta_rad = drive.delta * two_pi;
  if (omega_rad == 0.0) return detail::spectrum_diagonal(sys, delta_rad, k);
  if (sys.dim() <= 1024) return detail::spectrum_dense(sys, omega_rad, delta_rad, k);
  return detail::spectrum_lanczos(sys, omega_rad, delta_rad, k);
}

// All states of the (near-)degenerate ground manifold.
inline SpectrumResult ground_manifold(const RydbergSystem& sys, DriveParams drive,
                                      int k_hint = 32) {
  SpectrumResult full = ground_state(sys, drive, k_hint);
  while (true) {
    auto groups = degeneracy_groups(full.energies);
    if (groups.empty()) return full;
    if (groups.size() > 1 || full.energies.size() >= sys.dim()) {
      SpectrumResult res;
      for (int i : groups.front()) {
        res.energies.push_back(full.energies[static_cast<size_t>(i)]);
        res.states.push_back(full.states[static_cast<size_t>(i)]);
      }
      return res;
    }
    k_hint *= 2;
    full = ground_state(sys, drive, k_hint);
  }
}

}  // namespace rydsat
