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

#include "surface.hpp"

#include <cmath>
#include <numbers>

namespace latspec {

namespace {

constexpr double kPi = std::numbers::pi;

double axis_symbol_1d(double xi) {
  const double s = std::sin(kPi * xi);
  return 4.0 * s * s;
}

double axis_grad_1d(double xi) { return 4.0 * kPi * std::sin(2.0 * kPi * xi); }

// Lowest axis attaining the gradient maximum, with a relative tolerance so
// exact analytic ties (flat directions) are not split by rounding.
int dominant_axis(const double* grad_abs, int d) {
  double top = 0.0;
  for (int j = 0; j < d; ++j) top = std::max(top, grad_abs[j]);
  const double cut = top * (1.0 - 1e-9);
  for (int j = 0; j < d; ++j)
    if (grad_abs[j] >= cut) return j;
  return 0;
}

void finish_point(SurfacePoint& pt, int d, double cell, int graph_axis) {
  double g2 = 0.0;
  double tau = 0.0;
  for (int j = 0; j < d; ++j) {
    const double g = axis_grad_1d(pt.xi[j]);
    g2 += g * g;
    tau += pt.xi[j] - 0.25;
  }
  pt.grad = std::sqrt(g2);
  pt.tau = tau;
  pt.weight = cell / std::abs(axis_grad_1d(pt.xi[graph_axis]));
}

// Appends the surface points above one parameter assignment for the given
// graph axis. Returns the two roots of 4 sin^2(pi xi_axis) = mu - rest, or
// nothing when the slice misses the level set or hits it critically.
template <typename Keep>
void emit_roots(int d, double mu, int graph_axis, const double* params, double cell,
                const Keep& keep, std::vector<SurfacePoint>& out) {
  double rest = 0.0;
  for (int j = 0, q = 0; j < d; ++j) {
    if (j == graph_axis) continue;
    rest += axis_symbol_1d(params[q++]);
  }
  const double s = (mu - rest) / 4.0;
  if (!(s > 0.0 && s < 1.0)) return;
  const double root = std::asin(std::sqrt(s)) / kPi;
  for (double xi_a : {root, 1.0 - root}) {
    SurfacePoint pt{};
    for (int j = 0, q = 0; j < d; ++j) pt.xi[j] = (j == graph_axis) ? xi_a : params[q++];
    double grad_abs[kMaxSurfaceDim];
    for (int j = 0; j < d; ++j) grad_abs[j] = std::abs(axis_grad_1d(pt.xi[j]));
    if (!keep(pt, grad_abs)) continue;
    finish_point(pt, d, cell, graph_axis);
    out.push_back(pt);
  }
}

// Critical points of h0 on {h0 = mu}: coordinates in {0, 1/2}, with
// 4 * (number of 1/2 entries) = mu. Empty unless mu is a threshold energy.
std::vector<std::array<double, kMaxSurfaceDim>> critical_on_surface(int d, double mu) {
  std::vector<std::array<double, kMaxSurfaceDim>> out;
  for (unsigned mask = 0; mask < (1u << d); ++mask) {
    int halves = 0;
    for (int j = 0; j < d; ++j) halves += (mask >> j) & 1u;
    if (std::abs(4.0 * halves - mu) > 1e-9) continue;
    std::array<double, kMaxSurfaceDim> xi{};
    for (int j = 0; j < d; ++j) xi[static_cast<size_t>(j)] = ((mask >> j) & 1u) ? 0.5 : 0.0;
    out.push_back(xi);
  }
  return out;
}

}  // namespace

SurfaceMesh SurfaceMesh::global(int d, double mu, long n_per_axis) {
  if (d < 1 || d > kMaxSurfaceDim)
    throw error(errc::invalid_argument, "surface dimension out of range");
  if (!(mu > 0.0 && mu < 4.0 * d))
    throw error(errc::domain, "level set empty outside (0, 4d)");
  SurfaceMesh m;
  m.d_ = d;
  m.mu_ = mu;
  m.crit_ = critical_on_surface(d, mu);

  if (d == 1) {
    const double s = mu / 4.0;
    const double root = std::asin(std::sqrt(s)) / kPi;
    for (double xi : {root, 1.0 - root}) {
      SurfacePoint pt{};
      pt.xi[0] = xi;
      finish_point(pt, 1, 1.0, 0);
      m.pts_.push_back(pt);
    }
    return m;
  }

  if (n_per_axis < 4) throw error(errc::invalid_argument, "surface mesh too coarse");
  const double step = 1.0 / static_cast<double>(n_per_axis);
  const double cell = std::pow(step, d - 1);
  long slices = 1;
  for (int j = 0; j < d - 1; ++j) slices *= n_per_axis;

  for (int axis = 0; axis < d; ++axis) {
    std::vector<long> k(d - 1, 0);
    for (long s = 0; s < slices; ++s) {
      double params[kMaxSurfaceDim];
      for (int q = 0; q < d - 1; ++q) params[q] = (k[q] + 0.5) * step;
      emit_roots(d, mu, axis, params, cell,
                 [&](const SurfacePoint&, const double* grad_abs) {
                   return dominant_axis(grad_abs, d) == axis;
                 },
                 m.pts_);
      for (int q = d - 2; q >= 0; --q) {
        if (++k[q] < n_per_axis) break;
        k[q] = 0;
      }
    }
  }
  return m;
}

SurfaceMesh SurfaceMesh::patch(int d, double mu, int graph_axis, const std::vector<double>& lo,
                               const std::vector<double>& hi, long n_per_axis) {
  if (d < 2 || d > kMaxSurfaceDim)
    throw error(errc::invalid_argument, "surface patch needs d >= 2");
  if (graph_axis < 0 || graph_axis >= d)
    throw error(errc::invalid_argument, "graph axis out of range");
  if (static_cast<int>(lo.size()) != d - 1 || static_cast<int>(hi.size()) != d - 1)
    throw error(errc::invalid_argument, "patch window must have d-1 intervals");
  if (n_per_axis < 2) throw error(errc::invalid_argument, "surface mesh too coarse");
  for (int q = 0; q < d - 1; ++q)
    if (!(lo[q] < hi[q])) throw error(errc::invalid_argument, "empty patch window");

  SurfaceMesh m;
  m.d_ = d;
  m.mu_ = mu;
  // A patch only covers the part of the surface whose parameters lie in the
  // window, so only critical points projecting into it are its concern.
  for (const auto& xi : critical_on_surface(d, mu)) {
    bool inside = true;
    for (int j = 0, q = 0; j < d; ++j) {
      if (j == graph_axis) continue;
      const double c = xi[static_cast<size_t>(j)];
      if (c < lo[static_cast<size_t>(q)] || c > hi[static_cast<size_t>(q)]) inside = false;
      ++q;
    }
    if (inside) m.crit_.push_back(xi);
  }
  double cell = 1.0;
  for (int q = 0; q < d - 1; ++q) cell *= (hi[q] - lo[q]) / static_cast<double>(n_per_axis);

  long slices = 1;
  for (int j = 0; j < d - 1; ++j) slices *= n_per_axis;
  std::vector<long> k(d - 1, 0);
  for (long s = 0; s < slices; ++s) {
    double params[kMaxSurfaceDim];
    for (int q = 0; q < d - 1; ++q)
      params[q] = lo[q] + (k[q] + 0.5) * (hi[q] - lo[q]) / static_cast<double>(n_per_axis);
    emit_roots(d, mu, graph_axis, params, cell,
               [](const SurfacePoint&, const double*) { return true; }, m.pts_);
    for (int q = d - 2; q >= 0; --q) {
      if (++k[q] < n_per_axis) break;
      k[q] = 0;
    }
  }
  return m;
}

cplx SurfaceMesh::integrate(const std::function<cplx(const SurfacePoint&)>& f) const {
  cplx acc(0.0, 0.0);
  for (const auto& pt : pts_) acc += f(pt) * pt.weight;
  return acc;
}

void SurfaceMesh::require_clear_of_critical(const FrequencyCutoff& cutoff, double floor) const {
  for (const auto& xi : crit_)
    if (cutoff(xi.data()) != 0.0)
      throw error(errc::domain, "cutoff must vanish at the critical points of the level set");
  for (const auto& pt : pts_)
    if (cutoff(pt.xi) != 0.0 && pt.grad <= floor)
      throw error(errc::domain, "cutoff violates grad h0 != 0 on the level set");
}

namespace {

std::vector<cplx> eval_on_box(int d, const SurfaceMesh& mesh, const FiniteFunction& f,
                              const FrequencyCutoff& chi, const LatticeBox& out_box) {
  // fhat * cutoff * weight per node, then one phase sum per output site.
  struct Node {
    double xi[kMaxSurfaceDim];
    cplx amp;
  };
  std::vector<Node> nodes;
  nodes.reserve(mesh.points().size());
  for (const auto& pt : mesh.points()) {
    const double c = chi(pt.xi);
    if (c == 0.0) continue;
    cplx fhat(0.0, 0.0);
    for (const auto& [site, val] : f) {
      double phase = 0.0;
      for (int j = 0; j < d; ++j) phase -= 2.0 * kPi * site[j] * pt.xi[j];
      fhat += val * cplx(std::cos(phase), std::sin(phase));
    }
    Node nd;
    for (int j = 0; j < d; ++j) nd.xi[j] = pt.xi[j];
    nd.amp = fhat * c * pt.weight;
    nodes.push_back(nd);
  }

  std::vector<cplx> out(out_box.site_count(), cplx(0.0, 0.0));
  std::vector<long> x(d);
  for (long i = 0; i < out_box.site_count(); ++i) {
    out_box.coords_of(i, x.data());
    cplx acc(0.0, 0.0);
    for (const auto& nd : nodes) {
      double phase = 0.0;
      for (int j = 0; j < d; ++j) phase += 2.0 * kPi * x[j] * nd.xi[j];
      acc += nd.amp * cplx(std::cos(phase), std::sin(phase));
    }
    out[i] = acc;
  }
  return out;
}

}  // namespace

DeltaSurfaceResult delta_surface(int d, double mu, const FiniteFunction& f,
                                 const FrequencyCutoff& chi, const LatticeBox& out_box,
                                 long n_per_axis) {
  if (out_box.dim() != d) throw error(errc::invalid_argument, "output box dimension mismatch");
  for (const auto& [site, val] : f)
    if (static_cast<int>(site.size()) != d)
      throw error(errc::invalid_argument, "site dimension mismatch");

  DeltaSurfaceResult res;
  if (d == 1) {
    const SurfaceMesh mesh = SurfaceMesh::global(1, mu);
    mesh.require_clear_of_critical(chi);
    res.values = eval_on_box(d, mesh, f, chi, out_box);
    res.err = 0.0;  // two-point counting measure, no quadrature error
    res.mesh_points = static_cast<long>(mesh.points().size());
    return res;
  }

  const SurfaceMesh fine = SurfaceMesh::global(d, mu, n_per_axis);
  const SurfaceMesh coarse = SurfaceMesh::global(d, mu, n_per_axis / 2);
  fine.require_clear_of_critical(chi);
  coarse.require_clear_of_critical(chi);
  res.values = eval_on_box(d, fine, f, chi, out_box);
  const auto half = eval_on_box(d, coarse, f, chi, out_box);
  double err = 0.0;
  for (size_t i = 0; i < res.values.size(); ++i)
    err = std::max(err, std::abs(res.values[i] - half[i]));
  res.err = err;
  res.mesh_points = static_cast<long>(fine.points().size());
  return res;
}

}  // namespace latspec
