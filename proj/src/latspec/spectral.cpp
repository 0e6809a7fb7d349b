// Copyright (c) 2026 The latspec authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spectral.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <map>

namespace latspec {

namespace {

constexpr double kEdgeTol = 1e-8;

Eigen::SparseMatrix<double> assemble(int d, long radius, Boundary bc, const Potential& v,
                                     double lambda, const Potential& w) {
  LatticeBox box(d, radius, bc);
  const long n = box.site_count();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(n * (2 * d + 1));
  std::vector<long> x(d), y(d);
  for (long i = 0; i < n; ++i) {
    box.coords_of(i, x.data());
    double diag = 2.0 * d + lambda * v.eval(x.data(), d) + w.eval(x.data(), d);
    trips.emplace_back(i, i, diag);
    for (int j = 0; j < d; ++j) {
      for (long s : {-1L, 1L}) {
        y = x;
        y[j] += s;
        if (!box.contains(y.data())) {
          if (bc == Boundary::dirichlet) continue;
          y[j] -= s * (2 * radius + 1);
        }
        trips.emplace_back(i, box.index_of(y.data()), -1.0);
      }
    }
  }
  Eigen::SparseMatrix<double> m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  m.makeCompressed();
  return m;
}

}  // namespace

BoxHamiltonian build_hamiltonian(int d, long radius, Boundary bc, const Potential& v,
                                 double lambda, const Potential& w) {
  if (radius < 1) throw error(errc::invalid_argument, "box radius must be positive");
  if (!w.finite_support())
    throw error(errc::invalid_argument, "W must be finitely supported");
  if (2 * w.support_radius() > radius)
    throw error(errc::invalid_argument,
                "W support must keep a margin of at least R/2 to the boundary");
  BoxHamiltonian h;
  h.d = d;
  h.radius = radius;
  h.bc = bc;
  h.lambda = lambda;
  h.v = v;
  h.w = w;
  h.mat = assemble(d, radius, bc, v, lambda, w);
  return h;
}

std::vector<EigRecord> eig_outside(const BoxHamiltonian& h) {
  const long n = h.mat.rows();
  Eigen::MatrixXd dense(h.mat);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw error(errc::convergence, "dense eigensolver failed");
  const auto& ev = solver.eigenvalues();
  const double band_top = 4.0 * h.d;

  std::vector<EigRecord> out;
  for (long i = 0; i < n; ++i) {
    const double e = ev[i];
    const bool near_edge = std::abs(e) < kEdgeTol || std::abs(e - band_top) < kEdgeTol;
    if (!near_edge && e > 0.0 && e < band_top) continue;
    const double cluster_tol = 1e-10 * std::max(1.0, std::abs(e));
    if (!out.empty() && !out.back().edge_flagged && !near_edge &&
        std::abs(e - out.back().value) <= cluster_tol) {
      out.back().multiplicity += 1;
      continue;
    }
    out.push_back({e, 1, near_edge});
  }
  return out;
}

KernelDimResult kernel_dim(const BoxHamiltonian& h, double mu, double tol) {
  Eigen::MatrixXd dense(h.mat);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw error(errc::convergence, "dense eigensolver failed");
  const auto& ev = solver.eigenvalues();
  const double scale = std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
  if (tol <= 0.0) tol = 1e-8 * std::max(1.0, scale);

  KernelDimResult r;
  long inner = 0, outer = 0;
  for (long i = 0; i < ev.size(); ++i) {
    const double gap = std::abs(ev[i] - mu);
    if (gap <= 0.9 * tol) ++inner;
    if (gap <= 1.1 * tol) ++outer;
  }
  r.low = inner;
  r.high = outer;
  r.ambiguous = inner != outer;
  return r;
}

struct SparseCountingEngine::Impl {
  Eigen::SparseMatrix<double> h0;
  LatticeBox box;
  // Factor of (h0 - e) for e < 0, or (e - h0) for e > 4d, keyed by e.
  mutable std::map<double, std::unique_ptr<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>>>
      factors;

  explicit Impl(int d, long radius)
      : h0(assemble(d, radius, Boundary::dirichlet, Potential::Table({}), 0.0,
                    Potential::Table({}))),
        box(d, radius, Boundary::dirichlet) {}

  const Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>& factor(double e) const {
    auto it = factors.find(e);
    if (it == factors.end()) {
      Eigen::SparseMatrix<double> shifted(h0.rows(), h0.cols());
      shifted.setIdentity();
      if (e < 0.0)
        shifted = h0 - e * shifted;
      else
        shifted = e * shifted - h0;
      auto llt = std::make_unique<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>>();
      llt->compute(shifted);
      if (llt->info() != Eigen::Success)
        throw error(errc::domain, "shifted box operator is not definite at this energy");
      it = factors.emplace(e, std::move(llt)).first;
    }
    return *it->second;
  }

  // Symmetric reduced matrix C^{-1} + [(h0 - e)^{-1}]_SS (sign-adjusted for
  // energies above the band) for the support of w.
  Eigen::MatrixXd reduced(int d, const Potential& w, double e,
                          std::vector<double>* weights) const {
    const auto sites = w.support_sites();
    const long k = static_cast<long>(sites.size());
    weights->resize(k);
    std::vector<long> idx(k);
    for (long i = 0; i < k; ++i) {
      (*weights)[i] = w.eval(sites[i].data(), d);
      idx[i] = box.index_of(sites[i].data());
    }
    const auto& llt = factor(e);
    const double sign = e < 0.0 ? 1.0 : -1.0;  // (h0-e)^{-1} = -(e-h0)^{-1}
    Eigen::MatrixXd g(k, k);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(h0.rows());
    for (long j = 0; j < k; ++j) {
      rhs[idx[j]] = 1.0;
      Eigen::VectorXd col = llt.solve(rhs);
      rhs[idx[j]] = 0.0;
      for (long i = 0; i < k; ++i) g(i, j) = sign * col[idx[i]];
    }
    g = 0.5 * (g + g.transpose()).eval();
    Eigen::MatrixXd red = g;
    for (long i = 0; i < k; ++i) red(i, i) += 1.0 / (*weights)[i];
    return red;
  }
};

SparseCountingEngine::SparseCountingEngine(int d, long radius)
    : d_(d), radius_(radius), impl_(std::make_unique<Impl>(d, radius)) {
  if (radius < 1) throw error(errc::invalid_argument, "box radius must be positive");
}

SparseCountingEngine::~SparseCountingEngine() = default;

namespace {

// Eigenvalue counts of a small symmetric matrix.
void small_eig_counts(const Eigen::MatrixXd& m, double tol, long* pos, long* neg, long* zero) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  *pos = *neg = *zero = 0;
  for (long i = 0; i < solver.eigenvalues().size(); ++i) {
    const double e = solver.eigenvalues()[i];
    if (std::abs(e) <= tol)
      ++*zero;
    else if (e > 0.0)
      ++*pos;
    else
      ++*neg;
  }
}

void validate_w(const Potential& w, long radius) {
  if (!w.finite_support())
    throw error(errc::invalid_argument, "counting engine needs finitely supported W");
  if (2 * w.support_radius() > radius)
    throw error(errc::invalid_argument,
                "W support must keep a margin of at least R/2 to the boundary");
}

}  // namespace

long SparseCountingEngine::count_below(const Potential& w, double e) const {
  validate_w(w, radius_);
  if (e >= 0.0) throw error(errc::domain, "count_below requires e < 0");
  if (w.support_sites().empty()) return 0;
  std::vector<double> weights;
  const Eigen::MatrixXd red = impl_->reduced(d_, w, e, &weights);
  long pos, neg, zero;
  small_eig_counts(red, 0.0, &pos, &neg, &zero);
  long positive_weights = 0;
  for (double x : weights)
    if (x > 0.0) ++positive_weights;
  return pos - positive_weights;
}

long SparseCountingEngine::count_above(const Potential& w, double e) const {
  validate_w(w, radius_);
  if (e <= 4.0 * d_) throw error(errc::domain, "count_above requires e > 4d");
  if (w.support_sites().empty()) return 0;
  // Mirror through e - H: counting above e for H0+W is counting below -e
  // for -(H0+W), handled by the same reduction with flipped weights.
  std::vector<double> weights;
  const auto sites = w.support_sites();
  const long k = static_cast<long>(sites.size());
  Eigen::MatrixXd red = impl_->reduced(d_, w, e, &weights);
  // reduced() built C^{-1} + G with G = [(h0-e)^{-1}]_SS (negative definite
  // side). For counts above we need #pos of (-C)^{-1} + [(e-h0)^{-1}]_SS,
  // which is -(C^{-1} + G): flip the sign of the whole reduced matrix.
  red = (-red).eval();
  long pos, neg, zero;
  small_eig_counts(red, 0.0, &pos, &neg, &zero);
  long negative_weights = 0;
  for (long i = 0; i < k; ++i)
    if (weights[i] < 0.0) ++negative_weights;
  return pos - negative_weights;
}

long SparseCountingEngine::kernel_dim(const Potential& w, double mu, double tol) const {
  validate_w(w, radius_);
  if (mu > 0.0 && mu < 4.0 * d_)
    throw error(errc::domain, "kernel_dim certificate requires mu outside [0, 4d]");
  if (mu == 0.0 || mu == 4.0 * d_)
    throw error(errc::domain, "kernel_dim certificate requires mu strictly outside the band");
  if (w.support_sites().empty()) return 0;
  std::vector<double> weights;
  const Eigen::MatrixXd red = impl_->reduced(d_, w, mu, &weights);
  long pos, neg, zero;
  small_eig_counts(red, tol, &pos, &neg, &zero);
  return zero;
}

std::vector<CountingCertificate> SparseCountingEngine::certificates(
    const Potential& w, const std::vector<double>& mu_samples) const {
  validate_w(w, radius_);
  const auto sites = w.support_sites();
  long n_pos = 0, n_neg = 0;
  for (const auto& s : sites) {
    const double x = w.eval(s.data(), d_);
    if (x > 0.0) ++n_pos;
    if (x < 0.0) ++n_neg;
  }
  const long n_supp = static_cast<long>(sites.size());
  const double band_top = 4.0 * d_;

  std::vector<CountingCertificate> certs;

  {
    CountingCertificate c;
    c.check = "below_band";
    c.mu = 0.0;
    const long at_minus = count_below(w, -kEdgeTol);
    const long at_plus = n_supp == 0 ? 0 : count_below(w, -1e-12);
    c.multiplicity = at_plus;
    c.bound = n_neg;
    c.flagged = at_minus != at_plus;
    c.pass = c.multiplicity <= c.bound;
    certs.push_back(c);
  }
  {
    CountingCertificate c;
    c.check = "above_band";
    c.mu = band_top;
    const long at_plus = count_above(w, band_top + kEdgeTol);
    const long at_minus = n_supp == 0 ? 0 : count_above(w, band_top + 1e-12);
    c.multiplicity = at_minus;
    c.bound = n_pos;
    c.flagged = at_minus != at_plus;
    c.pass = c.multiplicity <= c.bound;
    certs.push_back(c);
  }
  for (double mu : mu_samples) {
    CountingCertificate c;
    c.check = "kernel";
    c.mu = mu;
    c.multiplicity = kernel_dim(w, mu);
    c.bound = n_supp;
    c.pass = c.multiplicity <= c.bound;
    certs.push_back(c);
  }
  return certs;
}

}  // namespace latspec
