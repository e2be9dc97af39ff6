#include "porosplit/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "porosplit/assembly.hpp"
#include "porosplit/eigen_power.hpp"
#include "porosplit/splitters.hpp"

namespace porosplit {

namespace {

double quad(const CsrMatrix& a, const Vector& x) { return dot(x, a * x); }

std::vector<std::size_t> free_dofs(std::size_t n, const DofSet& fixed) {
  std::vector<std::size_t> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    if (!fixed.contains(i)) out.push_back(i);
  return out;
}

// (Bu^T du + dt Bv^T dv) or the full mass-balance defect, weighted by Mp^{-1}.
double pressure_term(const Problem& pb, const Vector& q) {
  return 0.5 * dot(q, pb.solve_pressure_mass(q));
}

}  // namespace

double energy(const Problem& pb, const StepRhs& rhs, const Vector& u, const Vector& v) {
  const double dt = pb.params().dt;
  Vector q(pb.n_p());
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = dt * rhs.bp[i];
  pb.BuT().multiply_add(-1.0, u, q);
  pb.BvT().multiply_add(-dt, v, q);
  return 0.5 * quad(pb.A_uu(), u) + 0.5 * dt * quad(pb.A_vv(), v) - dot(v, pb.Dfs() * u) +
         pressure_term(pb, q) - dot(rhs.bs, u) - dt * dot(rhs.bf, v);
}

double error_norm_squared(const Problem& pb, const Vector& du, const Vector& dv) {
  const double dt = pb.params().dt;
  Vector q = pb.BuT() * du;
  pb.BvT().multiply_add(dt, dv, q);
  return quad(pb.A_uu(), du) + dt * quad(pb.A_vv(), dv) - 2.0 * dot(dv, pb.Dfs() * du) +
         2.0 * pressure_term(pb, q);
}

double error_norm(const Problem& pb, const Vector& du, const Vector& dv) {
  return std::sqrt(std::max(0.0, error_norm_squared(pb, du, dv)));
}

KornConstants korn_constants(const Problem& pb) {
  const std::vector<std::size_t> free = free_dofs(pb.n_u(), pb.dofs().u);
  const CsrMatrix ks = submatrix(pb.raw().Ks, free, free);
  KornConstants out;
  out.c_korn2 = generalized_symmetric_eig_max(submatrix(pb.raw().Dss, free, free), ks).value;
  const ScalarField phi = pb.params().porosity();
  if (!phi.is_constant()) {
    const CsrMatrix g = assemble_tensor_mass(pb.U(), [phi](const Point& x) {
      const Point d = phi.gradient(x);
      return std::array<double, 4>{d.x * d.x, d.x * d.y, d.y * d.x, d.y * d.y};
    });
    out.c_korn1 = generalized_symmetric_eig_max(submatrix(g, free, free), ks).value;
  }
  return out;
}

GammaTerms gamma_terms(const Problem& pb, const KornConstants& korn, double zeta) {
  const double dt = pb.params().dt;
  const double n = pb.max_N();
  GammaTerms t{};
  t.a = (1.0 + 1.0 / zeta) * n * dt * dt * pb.max_grad_term();
  t.b = dt * pb.max_drag_term();
  t.c = (1.0 + zeta) * n * pb.inv_bulk_phi0();
  t.d = (1.0 + 1.0 / zeta) * n * korn.c_korn1;
  t.e = korn.c_korn2 / dt;
  return t;
}

GammaBreakdown minimize_gamma_box(const GammaTerms& t) {
  auto g1 = [&](double eta, double th) { return t.a * eta + t.b * th; };
  auto g2 = [&](double eta, double th) { return t.c + t.d * (1.0 - eta) + t.e * (1.0 - th); };
  std::vector<std::array<double, 2>> candidates{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  // g1 - g2 = (a + d) eta + (b + e) th - (c + d + e) vanishes on each edge at most once.
  const double ce = t.a + t.d, ct = t.b + t.e, c0 = t.c + t.d + t.e;
  for (double eta : {0.0, 1.0})
    if (ct > 0.0) {
      const double th = (c0 - ce * eta) / ct;
      if (th >= 0.0 && th <= 1.0) candidates.push_back({eta, th});
    }
  for (double th : {0.0, 1.0})
    if (ce > 0.0) {
      const double eta = (c0 - ct * th) / ce;
      if (eta >= 0.0 && eta <= 1.0) candidates.push_back({eta, th});
    }
  GammaBreakdown best;
  best.gamma = std::numeric_limits<double>::infinity();
  for (const auto& [eta, th] : candidates) {
    const double v = std::max(g1(eta, th), g2(eta, th));
    if (v < best.gamma) {
      best.gamma = v;
      best.eta = eta;
      best.theta = th;
      best.gamma1 = g1(eta, th);
      best.gamma2 = g2(eta, th);
    }
  }
  return best;
}

GammaBreakdown gamma(const Problem& pb) { return gamma(pb, korn_constants(pb)); }

GammaBreakdown gamma(const Problem& pb, const KornConstants& korn) {
  auto eval = [&](double log_zeta) {
    const double zeta = std::exp(log_zeta);
    GammaBreakdown g = minimize_gamma_box(gamma_terms(pb, korn, zeta));
    g.zeta = zeta;
    return g;
  };
  const double lo = std::log(1e-6), hi = std::log(1e6);
  const int grid = 240;
  int best_i = 0;
  double best_v = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= grid; ++i) {
    const double v = eval(lo + (hi - lo) * i / grid).gamma;
    if (v < best_v) {
      best_v = v;
      best_i = i;
    }
  }
  // Golden section on the bracketing cells of the grid minimum.
  double a = lo + (hi - lo) * std::max(0, best_i - 1) / grid;
  double b = lo + (hi - lo) * std::min(grid, best_i + 1) / grid;
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = eval(x1).gamma, f2 = eval(x2).gamma;
  for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = eval(x1).gamma;
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = eval(x2).gamma;
    }
  }
  GammaBreakdown out = eval(0.5 * (a + b));
  const GammaBreakdown grid_best = eval(lo + (hi - lo) * best_i / grid);
  if (grid_best.gamma < out.gamma) out = grid_best;
  out.c_korn1 = korn.c_korn1;
  out.c_korn2 = korn.c_korn2;
  out.inv_bulk_phi0 = pb.inv_bulk_phi0();
  out.kappa_m = pb.params().kappa_f;
  out.n_max = pb.max_N();
  return out;
}

StabilityLedger stability_check(const Problem& pb, const SplitConfig& config,
                                const std::vector<Vector>& iterates, double delta1, double delta2) {
  StabilityLedger led;
  led.delta1 = delta1;
  led.delta2 = delta2;
  if (iterates.size() < 2) return led;
  const double dt = pb.params().dt;
  const BlockSystem& sys = pb.system();
  const double kdr = pb.params().drained_bulk_modulus();
  KornConstants korn;
  if (!pb.params().porosity().is_constant()) korn = korn_constants(pb);
  const double aug = std::pow(std::sqrt(korn.c_korn1) + std::sqrt(pb.inv_bulk_phi0()), 2) / (delta1 * dt);
  // Augmented weights: beta_s + phi0^2/(2 kappa_f dt) and beta_p + aug.
  const CsrMatrix bs_hat = sys.Dss.scaled((config.beta_s + 0.5) / dt);
  const CsrMatrix bf = sys.Dff.scaled(config.beta_f);
  const CsrMatrix bp_hat = add(pb.pressure_mass_porous(), pb.pressure_mass_plain(),
                               config.beta_p / (dt * kdr), aug);

  const std::size_t m_total = iterates.size() - 1;
  led.lhs_terms.resize(m_total);
  led.rhs_terms.resize(m_total);
  Vector u0, v0, p0, u1, v1, p1;
  u0.resize(pb.n_u()); v0.resize(pb.n_v()); p0.resize(pb.n_p());
  u1 = u0; v1 = v0; p1 = p0;
  for (std::size_t k = 1; k <= m_total; ++k) {
    split(iterates[k - 1], u0, v0, p0);
    split(iterates[k], u1, v1, p1);
    Vector du(u1.size()), dv(v1.size()), dp(p1.size());
    for (std::size_t i = 0; i < du.size(); ++i) du[i] = u1[i] - u0[i];
    for (std::size_t i = 0; i < dv.size(); ++i) dv[i] = v1[i] - v0[i];
    for (std::size_t i = 0; i < dp.size(); ++i) dp[i] = p1[i] - p0[i];
    const double ks = quad(sys.Ks, du);
    led.lhs_terms[k - 1] = quad(sys.Ms, du) / (dt * dt) + (1.0 - 0.5 * delta2) * ks + quad(sys.Mf, dv) +
                           dt * quad(sys.Kf, dv) + quad(sys.Mp, dp);
    led.rhs_terms[k - 1] = 0.5 * quad(bs_hat, du) + 0.5 * (delta1 + delta2) * ks +
                           0.5 * dt * quad(bf, dv) + 0.5 * dt * quad(bp_hat, dp);
  }
  // Anchors m = 1 .. M-1 (index m-1); tail over k = m+1 .. M.
  led.tail_sums.assign(m_total, 0.0);
  double tail = 0.0;
  for (std::size_t m = m_total; m-- > 0;) {
    led.tail_sums[m] = tail;
    tail += led.lhs_terms[m];
  }
  led.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m + 1 < m_total; ++m) {
    const double scale = std::max({led.rhs_terms[m], led.tail_sums[m], 1e-300});
    const double margin = (led.rhs_terms[m] - led.tail_sums[m]) / scale;
    led.worst_margin = std::min(led.worst_margin, margin);
    // Round-off allowance relative to the anchor scale.
    if (led.tail_sums[m] > led.rhs_terms[m] * (1.0 + 1e-10) + 1e-14 * led.rhs_terms[0]) led.holds = false;
  }
  if (!std::isfinite(led.worst_margin)) led.worst_margin = 0.0;
  return led;
}

RLinearCertificate rlinear_subsequence(const std::vector<double>& x) {
  double c = std::numeric_limits<double>::infinity();
  double tail = 0.0;
  for (std::size_t k = x.size(); k-- > 0;) {
    if (tail > 0.0) c = std::min(c, x[k] / tail);
    tail += x[k];
  }
  return rlinear_subsequence(x, c);
}

RLinearCertificate rlinear_subsequence(const std::vector<double>& x, double c) {
  RLinearCertificate out;
  out.c = c;
  const bool all_zero = std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
  if (x.empty() || all_zero || std::isinf(c)) {
    out.certified = true;
    out.rate = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) out.indices.push_back(i);
    out.message = "trivial: no non-zero tail";
    return out;
  }
  // Among any m consecutive successors of x_k one is <= x_k / (c m).
  double best = 1.0;
  std::size_t best_m = 0;
  for (std::size_t m = 1; m <= x.size(); ++m) {
    const double cm = c * static_cast<double>(m);
    if (cm <= 1.0) continue;
    const double rate = std::pow(1.0 / cm, 1.0 / static_cast<double>(m));
    if (rate < best) {
      best = rate;
      best_m = m;
    }
  }
  if (best_m == 0) {
    out.message = "no certificate";
    return out;
  }
  out.certified = true;
  out.m = best_m;
  out.rate = best;
  const double eps = 1.0 / (c * static_cast<double>(best_m));
  std::size_t anchor = 0;
  out.indices.push_back(anchor);
  while (true) {
    std::size_t next = anchor;
    for (std::size_t j = anchor + 1; j < x.size() && j <= anchor + best_m; ++j)
      if (x[j] <= eps * x[anchor]) {
        next = j;
        break;
      }
    if (next == anchor) break;
    out.indices.push_back(next);
    anchor = next;
    if (x[anchor] == 0.0) break;
  }
  return out;
}

}  // namespace porosplit
