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

#pragma once

#include <Eigen/Sparse>
#include <memory>
#include <string>
#include <vector>

#include "box.hpp"
#include "potential.hpp"

namespace latspec {

/// H = H0 + lambda*V + W truncated to a box. W must be finitely supported
/// with Chebyshev margin >= R/2 to the boundary, so bound states it creates
/// are not boundary artifacts.
struct BoxHamiltonian {
  int d = 0;
  long radius = 0;
  Boundary bc = Boundary::dirichlet;
  double lambda = 0.0;
  Potential v = Potential::Table({});
  Potential w = Potential::Table({});
  Eigen::SparseMatrix<double> mat;
};

BoxHamiltonian build_hamiltonian(int d, long radius, Boundary bc, const Potential& v,
                                 double lambda, const Potential& w);

struct EigRecord {
  double value = 0.0;
  int multiplicity = 1;
  bool edge_flagged = false;  ///< within 1e-8 of a band edge, not classified
};

/// All eigenvalues outside [0, 4d] with multiplicities (cluster tolerance
/// 1e-10 relative). Dense solve; intended for boxes up to a few thousand
/// sites. Larger certificate runs go through SparseCountingEngine.
std::vector<EigRecord> eig_outside(const BoxHamiltonian& h);

struct KernelDimResult {
  long low = 0;
  long high = 0;
  bool ambiguous = false;  ///< eigenvalues sit within 10% of the tol boundary
};

/// Count of eigenvalues within tol of mu (dense solve).
KernelDimResult kernel_dim(const BoxHamiltonian& h, double mu, double tol = -1.0);

struct CountingCertificate {
  std::string check;       ///< "kernel" | "below_band" | "above_band"
  double mu = 0.0;         ///< sample energy (kernel checks)
  long multiplicity = 0;   ///< computed count
  long bound = 0;          ///< support-size bound it must respect
  bool pass = false;       ///< multiplicity <= bound
  bool flagged = false;    ///< an eigenvalue hugs the test energy
};

/// Eigenvalue counting for H0 + W on a Dirichlet box at coupling zero,
/// scalable to boxes far beyond dense diagonalization. The box spectrum of
/// H0 lies strictly inside (0, 4d), so for E below 0 (or above 4d) the
/// shifted operator is definite and counts reduce by congruence to a
/// support-sized eigenproblem:
///   #eig(H0+W) < E  =  #pos eig( C^{-1} + G_SS(E) ) - #{w_s > 0}
/// with W = sum w_s e_s e_s^T, C = diag(w_s), G_SS(E) = [(H0-E)^{-1}]_SS.
/// One sparse Cholesky per distinct E, cached and shared across trials.
class SparseCountingEngine {
 public:
  SparseCountingEngine(int d, long radius);
  ~SparseCountingEngine();

  SparseCountingEngine(const SparseCountingEngine&) = delete;
  SparseCountingEngine& operator=(const SparseCountingEngine&) = delete;

  long count_below(const Potential& w, double e) const;
  long count_above(const Potential& w, double e) const;
  /// dim Ker(H0 + W - mu) for mu outside [0, 4d] (nullity of the reduced
  /// support matrix within tol).
  long kernel_dim(const Potential& w, double mu, double tol = 1e-8) const;

  /// The three certificate families for one W: eigenvalues below 0 vs
  /// #{w<0}, above 4d vs #{w>0}, and kernel dimension at each sampled mu
  /// vs #{w != 0}.
  std::vector<CountingCertificate> certificates(const Potential& w,
                                                const std::vector<double>& mu_samples) const;

  int dim() const { return d_; }
  long radius() const { return radius_; }

 private:
  struct Impl;
  int d_;
  long radius_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace latspec
