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

#include "bvalue.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "errors.hpp"
#include "fit.hpp"
#include "gridop.hpp"
#include "opnorm.hpp"

namespace latspec {

BoundaryValueReport boundary_value_continuity(int d, double s, double mu, long box_radius,
                                              std::vector<double> eps_ladder, long embed_n,
                                              double rel_tol) {
  if (d < 1) throw error(errc::invalid_argument, "boundary_value_continuity: dimension >= 1");
  if (!(s >= 0.0)) throw error(errc::invalid_argument, "boundary_value_continuity: s must be >= 0");
  if (box_radius < 1)
    throw error(errc::invalid_argument, "boundary_value_continuity: radius must be >= 1");
  if (eps_ladder.empty())
    for (int k = 0; k <= 6; ++k) eps_ladder.push_back(std::pow(10.0, -0.5 * k));
  for (double e : eps_ladder)
    if (!(e > 0.0))
      throw error(errc::invalid_argument, "boundary_value_continuity: eps must be > 0");
  std::sort(eps_ladder.begin(), eps_ladder.end(), std::greater<double>());
  if (eps_ladder.size() < 3)
    throw error(errc::invalid_argument,
                "boundary_value_continuity: need at least 3 ladder values");

  const std::vector<double> w = bracket_weights(d, box_radius, s);
  BoxMultiplierOp op(d, box_radius, w, w,
                     resolvent_diff_multiplier(d, cplx(mu, eps_ladder[0]),
                                               cplx(mu, eps_ladder[1])),
                     embed_n);

  BoundaryValueReport rep;
  rep.d = d;
  rep.s = s;
  rep.mu = mu;
  rep.box_radius = box_radius;
  rep.embed_n = op.embed_n();

  NormOptions nopt;
  nopt.rel_tol = rel_tol;
  std::vector<cplx> warm;
  nopt.warm_start = &warm;

  for (size_t k = 0; k + 1 < eps_ladder.size(); ++k) {
    const cplx z1(mu, eps_ladder[k]);
    const cplx z2(mu, eps_ladder[k + 1]);
    op.set_multiplier(resolvent_diff_multiplier(d, z1, z2));
    rep.eps_pairs.emplace_back(eps_ladder[k], eps_ladder[k + 1]);
    rep.m_values.push_back(top_singular_value(op, nopt, &warm));
  }

  std::vector<double> xs, ys;
  for (size_t k = 0; k < rep.m_values.size(); ++k) {
    xs.push_back(rep.eps_pairs[k].first);
    ys.push_back(rep.m_values[k]);
  }
  const LineFit lf = fit_loglog(xs, ys);
  rep.fitted_exponent = lf.slope;
  rep.residual = lf.residual;

  bool monotone = true;
  for (size_t k = 0; k + 1 < rep.m_values.size(); ++k)
    if (rep.m_values[k + 1] > 1.1 * rep.m_values[k]) monotone = false;

  const double first = rep.m_values.front();
  const double last = rep.m_values.back();
  if (rep.fitted_exponent <= -0.05 || last > 2.0 * first)
    rep.verdict = "divergent";
  else if (monotone && rep.fitted_exponent >= 0.05)
    rep.verdict = "cauchy";
  else
    rep.verdict = "inconclusive";
  return rep;
}

}  // namespace latspec
