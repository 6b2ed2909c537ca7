#include "barygap/fpq.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <map>
#include <numeric>

#include "barygap/errors.hpp"
#include "barygap/lp.hpp"

namespace barygap {

std::string method_name(FpqMethod m) {
  switch (m) {
    case FpqMethod::kAuto:
      return "auto";
    case FpqMethod::kTrivial:
      return "trivial";
    case FpqMethod::kClosedForm22:
      return "closed-form-22";
    case FpqMethod::kCoordinateQ1:
      return "coordinate-q1";
    case FpqMethod::kWeiszfeld:
      return "weiszfeld";
    case FpqMethod::kQuasiNewton:
      return "quasi-newton";
    case FpqMethod::kSimplicialQ1:
      return "simplicial-q1";
    case FpqMethod::kPairwiseQInf:
      return "pairwise-qinf";
    case FpqMethod::kSubgradient:
      return "subgradient";
  }
  return "?";
}

FpqMethod parse_method(const std::string& name) {
  for (auto m : {FpqMethod::kAuto, FpqMethod::kTrivial, FpqMethod::kClosedForm22, FpqMethod::kCoordinateQ1,
                 FpqMethod::kWeiszfeld, FpqMethod::kQuasiNewton, FpqMethod::kSimplicialQ1, FpqMethod::kPairwiseQInf,
                 FpqMethod::kSubgradient}) {
    if (method_name(m) == name) return m;
  }
  throw InputError("unknown fpq method '" + name + "'");
}

namespace {

constexpr double kRelFloor = 1e-12;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Scaled column form: row i holds the k-th point restricted to distinct columns,
// each multiplied by multiplicity^{1/q}, so plain norms apply.
struct Core {
  int k = 0;
  int m = 0;
  double p = 2;
  double q = 2;
  std::vector<double> lambda;
  std::vector<double> x;  // k x m, row-major
  std::vector<double> lo, hi;

  const double* row(int i) const { return x.data() + static_cast<std::size_t>(i) * m; }
  double at(int i, int j) const { return x[static_cast<std::size_t>(i) * m + j]; }
};

double pow_p(double r, double p) {
  if (p == 1) return r;
  if (p == 2) return r * r;
  return std::pow(r, p);
}

double norm_q(const double* z, int m, double q) {
  if (std::isinf(q)) {
    double mx = 0;
    for (int j = 0; j < m; ++j) mx = std::max(mx, std::abs(z[j]));
    return mx;
  }
  if (q == 1) {
    double s = 0;
    for (int j = 0; j < m; ++j) s += std::abs(z[j]);
    return s;
  }
  if (q == 2) {
    double s = 0;
    for (int j = 0; j < m; ++j) s += z[j] * z[j];
    return std::sqrt(s);
  }
  double mx = 0;
  for (int j = 0; j < m; ++j) mx = std::max(mx, std::abs(z[j]));
  if (mx == 0) return 0;
  double s = 0;
  for (int j = 0; j < m; ++j) s += std::pow(std::abs(z[j]) / mx, q);
  return mx * std::pow(s, 1.0 / q);
}

double dual_exponent(double q) {
  if (q == 1) return std::numeric_limits<double>::infinity();
  if (std::isinf(q)) return 1;
  return q / (q - 1);
}

// Distances r_i = ||x_i - y||_q and the weighted objective.
double core_objective(const Core& c, const double* y, std::vector<double>* radii = nullptr) {
  thread_local std::vector<double> z;
  z.resize(c.m);
  if (radii) radii->resize(c.k);
  double total = 0;
  for (int i = 0; i < c.k; ++i) {
    const double* xi = c.row(i);
    for (int j = 0; j < c.m; ++j) z[j] = xi[j] - y[j];
    double r = norm_q(z.data(), c.m, c.q);
    if (radii) (*radii)[i] = r;
    total += c.lambda[i] * pow_p(r, c.p);
  }
  return total;
}

// Gradient of y -> sum lambda_i ||x_i - y||^p; points with r_i = 0 contribute nothing.
void core_gradient(const Core& c, const double* y, std::vector<double>& g) {
  g.assign(c.m, 0.0);
  std::vector<double> z(c.m);
  for (int i = 0; i < c.k; ++i) {
    const double* xi = c.row(i);
    for (int j = 0; j < c.m; ++j) z[j] = xi[j] - y[j];
    double r = norm_q(z.data(), c.m, c.q);
    if (r == 0 || c.lambda[i] == 0) continue;
    double outer = c.lambda[i] * c.p * pow_p(r, c.p - 1);
    if (std::isinf(c.q)) {
      int arg = 0;
      for (int j = 1; j < c.m; ++j) {
        if (std::abs(z[j]) > std::abs(z[arg])) arg = j;
      }
      g[arg] -= outer * (z[arg] > 0 ? 1 : -1);
    } else if (c.q == 1) {
      for (int j = 0; j < c.m; ++j) {
        if (z[j] != 0) g[j] -= outer * (z[j] > 0 ? 1 : -1);
      }
    } else {
      for (int j = 0; j < c.m; ++j) {
        if (z[j] == 0) continue;
        double a = std::abs(z[j]) / r;
        double dir = c.q == 2 ? a : std::pow(a, c.q - 1);
        g[j] -= outer * (z[j] > 0 ? dir : -dir);
      }
    }
  }
}

// Largest value of c*W - c^{p'} B over c > 0, i.e. the dual bound after optimal scaling.
double scaled_dual(double w, double b, double p) {
  if (w <= 0) return 0;
  if (b <= 0) return std::numeric_limits<double>::infinity();
  double pp = p / (p - 1);
  double cstar = std::pow(w / (pp * b), 1.0 / (pp - 1));
  return cstar * w / p;
}

// sum lambda_i h*(t_i / lambda_i) with h(r) = r^p, p > 1.
double conjugate_sum(const Core& c, const std::vector<double>& t) {
  double pp = c.p / (c.p - 1);
  double b = 0;
  for (int i = 0; i < c.k; ++i) {
    if (c.lambda[i] == 0) continue;
    b += c.lambda[i] * (c.p - 1) * std::pow(t[i] / (c.lambda[i] * c.p), pp);
  }
  return b;
}

double weighted_median(const double* values, const double* weights, int k, int stride) {
  thread_local std::vector<int> order;
  order.resize(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return values[a * stride] < values[b * stride]; });
  double total = 0;
  for (int i = 0; i < k; ++i) total += weights[i];
  double acc = 0;
  for (int idx : order) {
    acc += weights[idx];
    if (acc >= 0.5 * total) return values[idx * stride];
  }
  return values[order.back() * stride];
}

struct Atom {
  std::vector<double> y;
  std::vector<double> r;
};

// q = 1: minimizes sum_i t_i ||x_i - y||_1 exactly, one coordinate at a time.
Atom median_oracle(const Core& c, const std::vector<double>& t, double* w_value) {
  Atom a;
  a.y.resize(c.m);
  for (int j = 0; j < c.m; ++j) a.y[j] = weighted_median(&c.x[j], t.data(), c.k, c.m);
  core_objective(c, a.y.data(), &a.r);
  double w = 0;
  for (int i = 0; i < c.k; ++i) w += t[i] * a.r[i];
  *w_value = w;
  return a;
}

// q = inf: minimizes sum_i t_i r_i over r >= 0 with r_a + r_b >= ||x_a - x_b||_inf, by
// solving the dual packing LP. *w_value is a certified lower bound on that minimum.
Atom pairwise_oracle(const Core& c, const std::vector<double>& t, double* w_value) {
  const int k = c.k;
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> dist;
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      double d = 0;
      for (int j = 0; j < c.m; ++j) d = std::max(d, std::abs(c.at(a, j) - c.at(b, j)));
      if (d > 0) {
        pairs.emplace_back(a, b);
        dist.push_back(d);
      }
    }
  }
  Atom atom;
  atom.r.assign(k, 0.0);
  std::vector<double> pi(pairs.size(), 0.0);
  if (!pairs.empty()) {
    Simplex<double> lp(t);
    for (std::size_t e = 0; e < pairs.size(); ++e) {
      lp.add_column(-dist[e], {{pairs[e].first, 1.0}, {pairs[e].second, 1.0}});
    }
    for (int i = 0; i < k; ++i) lp.add_column(0.0, {{i, 1.0}});
    auto sol = lp.solve();
    if (sol.status != LpStatus::kOptimal) {
      throw SolverError("pairwise radius LP failed: " + std::string(lp_status_name(sol.status)), kNegInf,
                        std::numeric_limits<double>::infinity());
    }
    for (std::size_t e = 0; e < pairs.size(); ++e) pi[e] = std::max(0.0, sol.x[e]);
    for (int i = 0; i < k; ++i) atom.r[i] = std::max(0.0, -sol.duals[i]);
  }
  // Repair packing feasibility so that weak duality gives a true lower bound.
  std::vector<double> load(k, 0.0);
  for (std::size_t e = 0; e < pairs.size(); ++e) {
    load[pairs[e].first] += pi[e];
    load[pairs[e].second] += pi[e];
  }
  double w = 0;
  for (std::size_t e = 0; e < pairs.size(); ++e) {
    double f = 1.0;
    for (int v : {pairs[e].first, pairs[e].second}) {
      if (load[v] > t[v]) f = std::min(f, load[v] > 0 ? t[v] / load[v] : 0.0);
    }
    w += dist[e] * pi[e] * f;
  }
  *w_value = w;
  // Any r meeting the pairwise constraints admits a common point: 1-D interval Helly.
  atom.y.resize(c.m);
  for (int j = 0; j < c.m; ++j) {
    double low = -std::numeric_limits<double>::infinity();
    double high = std::numeric_limits<double>::infinity();
    for (int i = 0; i < k; ++i) {
      low = std::max(low, c.at(i, j) - atom.r[i]);
      high = std::min(high, c.at(i, j) + atom.r[i]);
    }
    atom.y[j] = std::clamp(0.5 * (low + high), c.lo[j], c.hi[j]);
  }
  core_objective(c, atom.y.data(), &atom.r);
  return atom;
}

double radius_dual_bound(const Core& c, const std::vector<double>& radii) {
  std::vector<double> t(c.k);
  for (int i = 0; i < c.k; ++i) t[i] = c.lambda[i] * c.p * pow_p(radii[i], c.p - 1);
  if (c.p == 1) t = c.lambda;
  double w = 0;
  if (c.q == 1) {
    median_oracle(c, t, &w);
  } else {
    pairwise_oracle(c, t, &w);
  }
  if (c.p == 1) return std::max(0.0, w);
  return scaled_dual(w, conjugate_sum(c, t), c.p);
}

// Solves sum_i P_i mu = rhs by conjugate gradients, P_i = I - u_i u_i^T with unit u_i.
// False when the u_i are (nearly) parallel and the system is singular.
bool solve_projected_sum(const std::vector<std::vector<double>>& u, const std::vector<double>& rhs,
                         std::vector<double>& mu) {
  const int k = static_cast<int>(u.size());
  const int m = static_cast<int>(rhs.size());
  auto apply = [&](const std::vector<double>& v, std::vector<double>& out) {
    out.assign(m, 0.0);
    for (int j = 0; j < m; ++j) out[j] = k * v[j];
    for (const auto& ui : u) {
      double d = 0;
      for (int j = 0; j < m; ++j) d += ui[j] * v[j];
      for (int j = 0; j < m; ++j) out[j] -= d * ui[j];
    }
  };
  mu.assign(m, 0.0);
  std::vector<double> res = rhs, dir = rhs, adir;
  double rr = 0, rhs_norm = 0;
  for (int j = 0; j < m; ++j) rr += res[j] * res[j];
  rhs_norm = std::sqrt(rr);
  if (rhs_norm == 0) return true;
  for (int it = 0; it < 4 * m + 20; ++it) {
    apply(dir, adir);
    double da = 0;
    for (int j = 0; j < m; ++j) da += dir[j] * adir[j];
    if (!(da > 1e-14 * rr)) return false;
    const double step = rr / da;
    double rr_new = 0;
    for (int j = 0; j < m; ++j) {
      mu[j] += step * dir[j];
      res[j] -= step * adir[j];
      rr_new += res[j] * res[j];
    }
    if (std::sqrt(rr_new) <= 1e-13 * rhs_norm) return true;
    for (int j = 0; j < m; ++j) dir[j] = res[j] + rr_new / rr * dir[j];
    rr = rr_new;
  }
  return false;
}

// Fenchel bound for q in (1, inf): dual vectors from the gradients at y, rebalanced to sum to zero.
double fenchel_bound(const Core& c, const double* y) {
  const int k = c.k, m = c.m;
  std::vector<std::vector<double>> w(k, std::vector<double>(m, 0.0));
  std::vector<std::vector<double>> z(k, std::vector<double>(m));
  std::vector<double> r(k);
  double scale = 0;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < m; ++j) z[i][j] = c.at(i, j) - y[j];
    r[i] = norm_q(z[i].data(), m, c.q);
    scale = std::max(scale, r[i]);
  }
  std::vector<int> at_point;
  for (int i = 0; i < k; ++i) {
    if (c.lambda[i] == 0) continue;
    if (r[i] <= 1e-14 * std::max(1.0, scale)) {
      at_point.push_back(i);
      continue;
    }
    double outer = c.lambda[i] * c.p * pow_p(r[i], c.p - 1);
    for (int j = 0; j < m; ++j) {
      if (z[i][j] == 0) continue;
      double a = std::abs(z[i][j]) / r[i];
      double dir = c.q == 2 ? a : std::pow(a, c.q - 1);
      w[i][j] = outer * (z[i][j] > 0 ? dir : -dir);
    }
  }
  std::vector<double> total(m, 0.0);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < m; ++j) total[j] += w[i][j];
  }

  const double qs = dual_exponent(c.q);
  auto bound_of = [&](const std::vector<std::vector<double>>& v) {
    double a = 0;
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < m; ++j) a += v[i][j] * z[i][j];
    }
    if (c.p == 1) {
      double cmax = std::numeric_limits<double>::infinity();
      for (int i = 0; i < k; ++i) {
        double nw = norm_q(v[i].data(), m, qs);
        if (nw > 0) cmax = std::min(cmax, c.lambda[i] / nw);
      }
      if (a <= 0 || std::isinf(cmax)) return 0.0;
      return cmax * a;
    }
    double pp = c.p / (c.p - 1);
    double b = 0;
    for (int i = 0; i < k; ++i) {
      if (c.lambda[i] == 0) continue;
      double nw = norm_q(v[i].data(), m, qs);
      b += c.lambda[i] * (c.p - 1) * std::pow(nw / (c.lambda[i] * c.p), pp);
    }
    return scaled_dual(a, b, c.p);
  };

  // Absorb the imbalance into the points at the iterate if any, else spread by weight.
  std::vector<int> sink = at_point;
  if (sink.empty()) {
    for (int i = 0; i < k; ++i) {
      if (c.lambda[i] > 0) sink.push_back(i);
    }
  }
  double sink_weight = 0;
  for (int i : sink) sink_weight += c.lambda[i];
  auto shifted = w;
  for (int i : sink) {
    double share = c.lambda[i] / sink_weight;
    for (int j = 0; j < m; ++j) shifted[i][j] -= share * total[j];
  }
  double best = bound_of(shifted);
  if (!at_point.empty()) return best;

  // Shifts orthogonal to each z_i leave every dual norm unchanged to first order.
  std::vector<std::vector<double>> u;
  std::vector<int> idx;
  for (int i = 0; i < k; ++i) {
    if (c.lambda[i] == 0) continue;
    std::vector<double> ui(m);
    double nz = norm_q(z[i].data(), m, 2);
    for (int j = 0; j < m; ++j) ui[j] = z[i][j] / nz;
    u.push_back(std::move(ui));
    idx.push_back(i);
  }
  std::vector<double> rhs(m), mu;
  for (int j = 0; j < m; ++j) rhs[j] = -total[j];
  if (solve_projected_sum(u, rhs, mu)) {
    auto proj = w;
    for (std::size_t t = 0; t < u.size(); ++t) {
      double d = 0;
      for (int j = 0; j < m; ++j) d += u[t][j] * mu[j];
      for (int j = 0; j < m; ++j) proj[idx[t]][j] += mu[j] - d * u[t][j];
    }
    best = std::max(best, bound_of(proj));
  }
  return best;
}

double core_lower_bound(const Core& c, const double* y) {
  if (c.q == 1 || std::isinf(c.q)) {
    std::vector<double> radii;
    core_objective(c, y, &radii);
    return radius_dual_bound(c, radii);
  }
  return fenchel_bound(c, y);
}

struct CoreResult {
  std::vector<double> y;
  double upper = 0;
  double lower = 0;
  long iterations = 0;
  FpqMethod method = FpqMethod::kAuto;
};

double gap_target(double tol, double upper) { return std::max(tol, kRelFloor * std::abs(upper)); }

void clip_to_box(const Core& c, std::vector<double>& y) {
  for (int j = 0; j < c.m; ++j) y[j] = std::clamp(y[j], c.lo[j], c.hi[j]);
}

std::vector<double> weighted_mean(const Core& c) {
  std::vector<double> y(c.m, 0.0);
  double total = 0;
  for (int i = 0; i < c.k; ++i) total += c.lambda[i];
  for (int i = 0; i < c.k; ++i) {
    for (int j = 0; j < c.m; ++j) y[j] += c.lambda[i] * c.at(i, j) / total;
  }
  clip_to_box(c, y);
  return y;
}

void consider(const Core& c, CoreResult& res, const std::vector<double>& y) {
  double f = core_objective(c, y.data());
  if (f < res.upper) {
    res.upper = f;
    res.y = y;
  }
}

CoreResult solve_closed_form(const Core& c) {
  CoreResult res;
  res.method = FpqMethod::kClosedForm22;
  res.y = weighted_mean(c);
  res.upper = core_objective(c, res.y.data());
  res.lower = res.upper;
  return res;
}

CoreResult solve_coordinate_q1(const Core& c) {
  CoreResult res;
  res.method = FpqMethod::kCoordinateQ1;
  double w = 0;
  Atom a = median_oracle(c, c.lambda, &w);
  res.y = a.y;
  res.upper = core_objective(c, res.y.data());
  res.lower = w;
  return res;
}

// Away-step Frank-Wolfe on H(rho) = sum lambda_i rho_i^p over radius vectors realizable
// by some y. Atoms carry their y, so the mixed y certifies the upper bound.
template <class Oracle>
CoreResult solve_radius_fw(const Core& c, Oracle oracle, double tol, long max_iter, FpqMethod tag) {
  CoreResult res;
  res.method = tag;
  res.upper = std::numeric_limits<double>::infinity();
  res.lower = 0;
  const int k = c.k;
  double w = 0;
  std::vector<Atom> atoms{oracle(c, c.lambda, &w)};
  std::vector<double> alpha{1.0};
  if (c.p == 1) {
    res.lower = std::max(0.0, w);
    consider(c, res, atoms[0].y);
    res.iterations = 1;
    return res;
  }
  std::vector<double> rho(k), t(k), dir(k), ymix(c.m);
  for (long it = 1; it <= max_iter; ++it) {
    res.iterations = it;
    std::fill(rho.begin(), rho.end(), 0.0);
    std::fill(ymix.begin(), ymix.end(), 0.0);
    for (std::size_t l = 0; l < atoms.size(); ++l) {
      for (int i = 0; i < k; ++i) rho[i] += alpha[l] * atoms[l].r[i];
      for (int j = 0; j < c.m; ++j) ymix[j] += alpha[l] * atoms[l].y[j];
    }
    consider(c, res, ymix);
    for (int i = 0; i < k; ++i) t[i] = c.lambda[i] * c.p * pow_p(rho[i], c.p - 1);
    Atom fw = oracle(c, t, &w);
    consider(c, res, fw.y);
    res.lower = std::max(res.lower, scaled_dual(w, conjugate_sum(c, t), c.p));
    if (res.upper - res.lower <= gap_target(tol, res.upper)) break;

    double g_fw = 0;
    for (int i = 0; i < k; ++i) g_fw += t[i] * (rho[i] - fw.r[i]);
    int away = -1;
    double g_away = 0;
    for (std::size_t l = 0; l < atoms.size(); ++l) {
      if (alpha[l] >= 1.0) continue;
      double g = 0;
      for (int i = 0; i < k; ++i) g += t[i] * (atoms[l].r[i] - rho[i]);
      if (away < 0 || g > g_away) {
        away = static_cast<int>(l);
        g_away = g;
      }
    }
    bool fw_step = away < 0 || g_fw >= g_away;
    double gamma_max;
    if (fw_step) {
      for (int i = 0; i < k; ++i) dir[i] = fw.r[i] - rho[i];
      gamma_max = 1.0;
    } else {
      for (int i = 0; i < k; ++i) dir[i] = rho[i] - atoms[away].r[i];
      gamma_max = alpha[away] / (1.0 - alpha[away]);
    }
    auto slope = [&](double gamma) {
      double s = 0;
      for (int i = 0; i < k; ++i) {
        double v = std::max(0.0, rho[i] + gamma * dir[i]);
        s += c.lambda[i] * c.p * pow_p(v, c.p - 1) * dir[i];
      }
      return s;
    };
    if (slope(0) >= 0) break;  // no descent left at working precision
    double gamma;
    if (slope(gamma_max) <= 0) {
      gamma = gamma_max;
    } else {
      double a = 0, b = gamma_max;
      for (int s = 0; s < 100 && b - a > 1e-16 * gamma_max; ++s) {
        double mid = 0.5 * (a + b);
        (slope(mid) < 0 ? a : b) = mid;
      }
      gamma = 0.5 * (a + b);
    }
    if (fw_step) {
      for (auto& v : alpha) v *= (1 - gamma);
      auto same =
          std::find_if(atoms.begin(), atoms.end(), [&](const Atom& at) { return at.r == fw.r && at.y == fw.y; });
      if (same != atoms.end()) {
        alpha[same - atoms.begin()] += gamma;
      } else {
        atoms.push_back(std::move(fw));
        alpha.push_back(gamma);
      }
    } else {
      for (auto& v : alpha) v *= (1 + gamma);
      alpha[away] -= gamma;
      if (gamma >= gamma_max || alpha[away] <= 1e-15) {
        atoms.erase(atoms.begin() + away);
        alpha.erase(alpha.begin() + away);
      }
    }
    double sum = std::accumulate(alpha.begin(), alpha.end(), 0.0);
    for (auto& v : alpha) v /= sum;
  }
  return res;
}

// L-BFGS on the smooth part; for p = 1 every data point is tested for optimality first.
CoreResult solve_quasi_newton(const Core& c, double tol, long max_iter, std::vector<double> y0, long used = 0) {
  CoreResult res;
  res.method = FpqMethod::kQuasiNewton;
  res.upper = std::numeric_limits<double>::infinity();
  res.lower = 0;
  res.iterations = used;
  if (c.p == 1) {
    for (int i = 0; i < c.k; ++i) {
      std::vector<double> xi(c.row(i), c.row(i) + c.m);
      consider(c, res, xi);
      res.lower = std::max(res.lower, fenchel_bound(c, xi.data()));
    }
    if (res.upper - res.lower <= gap_target(tol, res.upper)) return res;
  }
  std::vector<double> y = std::move(y0);
  std::vector<double> g, g_new, d(c.m), y_new(c.m);
  double f = core_objective(c, y.data());
  consider(c, res, y);
  core_gradient(c, y.data(), g);
  constexpr int kMemory = 10;
  std::deque<std::vector<double>> s_hist, y_hist;
  std::deque<double> rho_hist;
  int failures = 0;
  for (long it = used; it < max_iter; ++it) {
    res.iterations = it + 1;
    res.lower = std::max(res.lower, fenchel_bound(c, y.data()));
    if (res.upper - res.lower <= gap_target(tol, res.upper)) break;

    d = g;
    std::vector<double> a(s_hist.size());
    for (int h = static_cast<int>(s_hist.size()) - 1; h >= 0; --h) {
      double dot = 0;
      for (int j = 0; j < c.m; ++j) dot += s_hist[h][j] * d[j];
      a[h] = rho_hist[h] * dot;
      for (int j = 0; j < c.m; ++j) d[j] -= a[h] * y_hist[h][j];
    }
    if (!s_hist.empty()) {
      double sy = 0, yy = 0;
      for (int j = 0; j < c.m; ++j) {
        sy += s_hist.back()[j] * y_hist.back()[j];
        yy += y_hist.back()[j] * y_hist.back()[j];
      }
      double gamma = sy / yy;
      for (auto& v : d) v *= gamma;
    }
    for (std::size_t h = 0; h < s_hist.size(); ++h) {
      double dot = 0;
      for (int j = 0; j < c.m; ++j) dot += y_hist[h][j] * d[j];
      double beta = rho_hist[h] * dot;
      for (int j = 0; j < c.m; ++j) d[j] += s_hist[h][j] * (a[h] - beta);
    }
    for (auto& v : d) v = -v;
    double gd = 0, gg = 0;
    for (int j = 0; j < c.m; ++j) {
      gd += g[j] * d[j];
      gg += g[j] * g[j];
    }
    if (gg == 0) break;
    if (!(gd < 0)) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      for (int j = 0; j < c.m; ++j) d[j] = -g[j];
      gd = -gg;
    }
    double step = s_hist.empty() ? std::min(1.0, 1.0 / std::sqrt(gg)) : 1.0;
    bool accepted = false;
    double f_new = f;
    for (int bt = 0; bt < 60; ++bt) {
      for (int j = 0; j < c.m; ++j) y_new[j] = y[j] + step * d[j];
      f_new = core_objective(c, y_new.data());
      if (f_new <= f + 1e-4 * step * gd) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (++failures >= 2 || s_hist.empty()) break;
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      continue;
    }
    failures = 0;
    core_gradient(c, y_new.data(), g_new);
    std::vector<double> s(c.m), yv(c.m);
    double sy = 0;
    for (int j = 0; j < c.m; ++j) {
      s[j] = y_new[j] - y[j];
      yv[j] = g_new[j] - g[j];
      sy += s[j] * yv[j];
    }
    if (sy > 1e-300) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(yv));
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > kMemory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    y.swap(y_new);
    g.swap(g_new);
    f = f_new;
    consider(c, res, y);
  }
  return res;
}

// Weighted Weiszfeld with the Vardi-Zhang modification at data points; hands
// over to quasi-Newton if the fixed-point iteration is slow to certify.
CoreResult solve_weiszfeld(const Core& c, double tol, long max_iter) {
  CoreResult res;
  res.method = FpqMethod::kWeiszfeld;
  res.upper = std::numeric_limits<double>::infinity();
  res.lower = 0;
  std::vector<double> y = weighted_mean(c);
  std::vector<double> r(c.k), num(c.m), rvec(c.m);
  const long budget = std::min<long>(max_iter, 5000);
  double scale = 0;
  for (int j = 0; j < c.m; ++j) scale = std::max(scale, c.hi[j] - c.lo[j]);
  for (long it = 0; it < budget; ++it) {
    res.iterations = it + 1;
    consider(c, res, y);
    if (it % 10 == 0) {
      res.lower = std::max(res.lower, fenchel_bound(c, y.data()));
      if (res.upper - res.lower <= gap_target(tol, res.upper)) return res;
    }
    core_objective(c, y.data(), &r);
    int at = -1;
    for (int i = 0; i < c.k; ++i) {
      if (r[i] <= 1e-14 * std::max(1.0, scale)) at = i;
    }
    std::fill(num.begin(), num.end(), 0.0);
    std::fill(rvec.begin(), rvec.end(), 0.0);
    double den = 0;
    for (int i = 0; i < c.k; ++i) {
      if (i == at || c.lambda[i] == 0) continue;
      double wgt = c.lambda[i] / r[i];
      den += wgt;
      for (int j = 0; j < c.m; ++j) {
        num[j] += wgt * c.at(i, j);
        rvec[j] += wgt * (c.at(i, j) - y[j]);
      }
    }
    if (den == 0) break;
    std::vector<double> next(c.m);
    for (int j = 0; j < c.m; ++j) next[j] = num[j] / den;
    if (at >= 0) {
      double rn = norm_q(rvec.data(), c.m, 2);
      if (rn <= c.lambda[at]) {
        res.lower = std::max(res.lower, fenchel_bound(c, y.data()));
        if (res.upper - res.lower <= gap_target(tol, res.upper)) return res;
      }
      double share = std::min(1.0, c.lambda[at] / std::max(rn, 1e-300));
      for (int j = 0; j < c.m; ++j) next[j] = (1 - share) * next[j] + share * y[j];
    }
    if (next == y) break;
    y.swap(next);
  }
  CoreResult qn = solve_quasi_newton(c, tol, max_iter, res.y, res.iterations);
  if (qn.upper < res.upper) {
    res.upper = qn.upper;
    res.y = qn.y;
  }
  res.lower = std::max(res.lower, qn.lower);
  res.iterations = qn.iterations;
  return res;
}

// Projected subgradient on the bounding box with a Polyak step aimed at the midpoint
// between the best value and the best certified lower bound.
CoreResult solve_subgradient(const Core& c, double tol, long max_iter) {
  CoreResult res;
  res.method = FpqMethod::kSubgradient;
  std::vector<double> y = weighted_mean(c);
  res.y = y;
  res.upper = core_objective(c, y.data());
  res.lower = core_lower_bound(c, y.data());
  std::vector<double> g;
  for (long it = 1; it <= max_iter; ++it) {
    res.iterations = it;
    if (res.upper - res.lower <= gap_target(tol, res.upper)) break;
    double f = core_objective(c, y.data());
    core_gradient(c, y.data(), g);
    double gg = 0;
    for (double v : g) gg += v * v;
    if (gg == 0) {
      res.lower = std::max(res.lower, core_lower_bound(c, y.data()));
      break;
    }
    double level = res.lower + 0.5 * (res.upper - res.lower);
    double step = std::max(f - level, 0.5 * (f - res.lower)) / gg;
    for (int j = 0; j < c.m; ++j) y[j] = std::clamp(y[j] - step * g[j], c.lo[j], c.hi[j]);
    double f_new = core_objective(c, y.data());
    if (f_new < res.upper) {
      res.upper = f_new;
      res.y = y;
    }
    if (it % 25 == 0) res.lower = std::max(res.lower, core_lower_bound(c, res.y.data()));
  }
  return res;
}

Core make_core(const ColumnProblem& prob, std::vector<int>& kept, std::vector<double>& fixed) {
  Core c;
  c.k = prob.k;
  c.p = prob.p;
  c.q = prob.q;
  c.lambda = prob.weights.empty() ? std::vector<double>(prob.k, 1.0) : prob.weights;
  const int total = prob.num_columns();
  fixed.assign(total, 0.0);
  for (int col = 0; col < total; ++col) {
    const double* v = &prob.values[static_cast<std::size_t>(col) * prob.k];
    bool constant = std::all_of(v, v + prob.k, [&](double a) { return a == v[0]; });
    if (constant || prob.multiplicity[col] == 0) {
      fixed[col] = v[0];
    } else {
      kept.push_back(col);
    }
  }
  c.m = static_cast<int>(kept.size());
  c.x.resize(static_cast<std::size_t>(c.k) * c.m);
  c.lo.assign(c.m, std::numeric_limits<double>::infinity());
  c.hi.assign(c.m, -std::numeric_limits<double>::infinity());
  for (int j = 0; j < c.m; ++j) {
    int col = kept[j];
    double s = std::isinf(c.q) ? 1.0 : std::pow(prob.multiplicity[col], 1.0 / c.q);
    for (int i = 0; i < c.k; ++i) {
      double v = prob.values[static_cast<std::size_t>(col) * prob.k + i] * s;
      c.x[static_cast<std::size_t>(i) * c.m + j] = v;
      c.lo[j] = std::min(c.lo[j], v);
      c.hi[j] = std::max(c.hi[j], v);
    }
  }
  return c;
}

void validate(int k, double p, double q, const std::vector<double>& weights, double tol) {
  if (k < 1) throw InputError("fpq: need at least one point");
  if (!(p >= 1) || std::isinf(p)) throw InputError("fpq: need finite p >= 1");
  if (std::isnan(q) || q < 1) throw InputError("fpq: need q in [1, inf]");
  if (!(tol > 0)) throw InputError("fpq: tolerance must be positive");
  if (!weights.empty()) {
    if (static_cast<int>(weights.size()) != k) throw InputError("fpq: one weight per point");
    double total = 0;
    for (double w : weights) {
      if (!(w >= 0) || std::isinf(w)) throw InputError("fpq: weights must be finite and >= 0");
      total += w;
    }
    if (total <= 0) throw InputError("fpq: weights must not all be zero");
  }
}

}  // namespace

FpqSolution solve_fpq_columns(const ColumnProblem& prob, const FpqOptions& opts) {
  validate(prob.k, prob.p, prob.q, prob.weights, opts.tol);
  if (prob.values.size() != static_cast<std::size_t>(prob.k) * prob.multiplicity.size()) {
    throw InputError("fpq: column data does not match k");
  }
  for (double v : prob.values) {
    if (!std::isfinite(v)) throw InputError("fpq: non-finite coordinate");
  }
  std::vector<int> kept;
  std::vector<double> fixed;
  Core c = make_core(prob, kept, fixed);

  CoreResult res;
  FpqMethod method = opts.method;
  if (c.m == 0 || c.k == 1) {
    res.method = FpqMethod::kTrivial;
    res.y.assign(c.m, 0.0);
    for (int j = 0; j < c.m; ++j) res.y[j] = c.at(0, j);
    res.upper = core_objective(c, res.y.data());
    res.lower = 0;
  } else {
    if (method == FpqMethod::kAuto) {
      if (c.p == 2 && c.q == 2)
        method = FpqMethod::kClosedForm22;
      else if (c.q == 1 && c.p == 1)
        method = FpqMethod::kCoordinateQ1;
      else if (c.q == 1)
        method = FpqMethod::kSimplicialQ1;
      else if (std::isinf(c.q))
        method = FpqMethod::kPairwiseQInf;
      else if (c.p == 1 && c.q == 2)
        method = FpqMethod::kWeiszfeld;
      else
        method = FpqMethod::kQuasiNewton;
    }
    auto reject = [&] {
      throw InputError("fpq: method " + method_name(method) + " does not apply to p=" + std::to_string(c.p) +
                       ", q=" + std::to_string(c.q));
    };
    switch (method) {
      case FpqMethod::kClosedForm22:
        if (!(c.p == 2 && c.q == 2)) reject();
        res = solve_closed_form(c);
        break;
      case FpqMethod::kCoordinateQ1:
        if (!(c.p == 1 && c.q == 1)) reject();
        res = solve_coordinate_q1(c);
        break;
      case FpqMethod::kSimplicialQ1:
        if (c.q != 1) reject();
        res = solve_radius_fw(c, median_oracle, opts.tol, opts.max_iterations, method);
        break;
      case FpqMethod::kPairwiseQInf:
        if (!std::isinf(c.q)) reject();
        res = solve_radius_fw(c, pairwise_oracle, opts.tol, opts.max_iterations, method);
        break;
      case FpqMethod::kWeiszfeld:
        if (!(c.p == 1 && c.q == 2)) reject();
        res = solve_weiszfeld(c, opts.tol, opts.max_iterations);
        break;
      case FpqMethod::kQuasiNewton:
        if (c.q == 1 || std::isinf(c.q)) reject();
        res = solve_quasi_newton(c, opts.tol, opts.max_iterations, weighted_mean(c));
        break;
      case FpqMethod::kSubgradient:
        res = solve_subgradient(c, opts.tol, opts.max_iterations);
        break;
      default:
        reject();
    }
    clip_to_box(c, res.y);
    res.upper = std::min(res.upper, core_objective(c, res.y.data()));
  }

  FpqSolution sol;
  sol.method = res.method;
  sol.iterations = res.iterations;
  sol.value = res.upper;
  sol.lower_bound = std::min(res.lower, res.upper);
  sol.tolerance = sol.value - sol.lower_bound;
  sol.certified = sol.tolerance <= gap_target(opts.tol, sol.value);
  sol.minimizer = fixed;
  for (int j = 0; j < c.m; ++j) {
    int col = kept[j];
    double s = std::isinf(c.q) ? 1.0 : std::pow(prob.multiplicity[col], 1.0 / c.q);
    sol.minimizer[col] = res.y[j] / s;
  }
  if (!sol.certified && opts.require_certificate) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "fpq: %s did not certify tolerance %.3g (gap %.3g, value %.12g)",
                  method_name(sol.method).c_str(), opts.tol, sol.tolerance, sol.value);
    throw SolverError(buf, sol.lower_bound, sol.value);
  }
  return sol;
}

namespace {

struct Compressed {
  ColumnProblem columns;
  std::vector<int> column_of;  // per original coordinate
};

Compressed compress(const FpqProblem& prob) {
  const int k = static_cast<int>(prob.points.size());
  validate(k, prob.p, prob.q, prob.weights, 1.0);
  const std::size_t d = prob.points[0].size();
  if (d == 0) throw InputError("fpq: dimension must be >= 1");
  for (const auto& pt : prob.points) {
    if (pt.size() != d) throw InputError("fpq: points differ in dimension");
    for (double v : pt) {
      if (!std::isfinite(v)) throw InputError("fpq: non-finite coordinate");
    }
  }
  Compressed out;
  out.columns.k = k;
  out.columns.p = prob.p;
  out.columns.q = prob.q;
  out.columns.weights = prob.weights;
  out.column_of.resize(d);
  std::map<std::vector<double>, int> index;
  std::vector<double> col(k);
  for (std::size_t j = 0; j < d; ++j) {
    for (int i = 0; i < k; ++i) col[i] = prob.points[i][j];
    auto [it, inserted] = index.emplace(col, out.columns.num_columns());
    if (inserted) {
      out.columns.values.insert(out.columns.values.end(), col.begin(), col.end());
      out.columns.multiplicity.push_back(0);
    }
    out.columns.multiplicity[it->second] += 1;
    out.column_of[j] = it->second;
  }
  return out;
}

Core dense_core(const FpqProblem& prob) {
  ColumnProblem cp;
  cp.k = static_cast<int>(prob.points.size());
  cp.p = prob.p;
  cp.q = prob.q;
  cp.weights = prob.weights;
  const std::size_t d = prob.points.at(0).size();
  Core c;
  c.k = cp.k;
  c.m = static_cast<int>(d);
  c.p = cp.p;
  c.q = cp.q;
  c.lambda = cp.weights.empty() ? std::vector<double>(cp.k, 1.0) : cp.weights;
  c.x.resize(static_cast<std::size_t>(c.k) * c.m);
  c.lo.assign(c.m, std::numeric_limits<double>::infinity());
  c.hi.assign(c.m, -std::numeric_limits<double>::infinity());
  for (int i = 0; i < c.k; ++i) {
    for (int j = 0; j < c.m; ++j) {
      double v = prob.points[i][j];
      c.x[static_cast<std::size_t>(i) * c.m + j] = v;
      c.lo[j] = std::min(c.lo[j], v);
      c.hi[j] = std::max(c.hi[j], v);
    }
  }
  return c;
}

}  // namespace

ColumnProblem compress_columns(const FpqProblem& prob) { return compress(prob).columns; }

FpqSolution solve_fpq(const FpqProblem& prob, const FpqOptions& opts) {
  if (prob.points.empty()) throw InputError("fpq: need at least one point");
  Compressed cp = compress(prob);
  FpqSolution sol = solve_fpq_columns(cp.columns, opts);
  std::vector<double> y(cp.column_of.size());
  for (std::size_t j = 0; j < y.size(); ++j) y[j] = sol.minimizer[cp.column_of[j]];
  sol.minimizer = std::move(y);
  return sol;
}

double fpq_objective(const FpqProblem& prob, std::span<const double> y) {
  Core c = dense_core(prob);
  if (y.size() != static_cast<std::size_t>(c.m)) throw InputError("fpq: dimension mismatch");
  return core_objective(c, y.data());
}

std::vector<double> fpq_gradient(const FpqProblem& prob, std::span<const double> y) {
  Core c = dense_core(prob);
  if (y.size() != static_cast<std::size_t>(c.m)) throw InputError("fpq: dimension mismatch");
  std::vector<double> g;
  core_gradient(c, y.data(), g);
  return g;
}

double fpq_lower_bound(const FpqProblem& prob, std::span<const double> y) {
  Core c = dense_core(prob);
  if (y.size() != static_cast<std::size_t>(c.m)) throw InputError("fpq: dimension mismatch");
  if (c.k == 1) return 0;
  if (c.p == 2 && c.q == 2) return fenchel_bound(c, y.data());
  return core_lower_bound(c, y.data());
}

ClosedForm22 fpq_closed_form_22(const std::vector<std::vector<double>>& points) {
  if (points.empty()) throw InputError("closed form: need at least one point");
  const int k = static_cast<int>(points.size());
  const std::size_t d = points[0].size();
  ClosedForm22 out;
  FpqSolution& sol = out.solution;
  sol.method = FpqMethod::kClosedForm22;
  sol.minimizer.assign(d, 0.0);
  bool integral = true;
  for (const auto& pt : points) {
    if (pt.size() != d) throw InputError("closed form: points differ in dimension");
    for (std::size_t j = 0; j < d; ++j) {
      sol.minimizer[j] += pt[j] / k;
      integral = integral && std::isfinite(pt[j]) && pt[j] == std::round(pt[j]) && std::abs(pt[j]) < 1e15;
    }
  }
  double value = 0;
  for (const auto& pt : points) {
    for (std::size_t j = 0; j < d; ++j) {
      double z = pt[j] - sol.minimizer[j];
      value += z * z;
    }
  }
  sol.value = value;
  sol.lower_bound = value;
  sol.certified = true;
  if (integral) {
    // k * value = (k-1) sum ||x_i||^2 - 2 sum_{i<i'} <x_i, x_i'>, an integer.
    Rational acc = 0;
    for (std::size_t j = 0; j < d; ++j) {
      Rational sum = 0, sq = 0;
      for (const auto& pt : points) {
        Rational v = static_cast<long long>(pt[j]);
        sum += v;
        sq += v * v;
      }
      acc += Rational(k) * sq - sum * sum;
    }
    out.exact_value = acc / Rational(k);
    sol.value = to_double(*out.exact_value);
    sol.lower_bound = sol.value;
  }
  return out;
}

Rational closed_form_22_exact(std::span<const SparsePoint* const> points) {
  const long long k = static_cast<long long>(points.size());
  if (k == 0) throw InputError("closed form: need at least one point");
  long long norms = 0, cross = 0;
  for (std::size_t a = 0; a < points.size(); ++a) {
    for (const auto& e : *points[a]) norms += e.value * e.value;
    for (std::size_t b = a + 1; b < points.size(); ++b) {
      const auto& x = *points[a];
      const auto& y = *points[b];
      std::size_t ia = 0, ib = 0;
      while (ia < x.size() && ib < y.size()) {
        if (x[ia].coord < y[ib].coord)
          ++ia;
        else if (y[ib].coord < x[ia].coord)
          ++ib;
        else
          cross += x[ia++].value * y[ib++].value;
      }
    }
  }
  return Rational((k - 1) * norms - 2 * cross) / Rational(k);
}

double q1_value_formula(int n, int k, int t, double p) {
  if (k < 2 || k % 2 != 0) throw InputError("q1_value_formula: k must be even and >= 2");
  double base = static_cast<double>(n) * k * (k - 1) * (static_cast<double>(n) * k - 2.0 * n + 2) - 4.0 * t;
  if (base < 0) throw InputError("q1_value_formula: negative base");
  return std::pow(static_cast<double>(k), 1 - p) * std::pow(base, p);
}

std::vector<int> q1_clique_witness(const PointConfig& config, std::span<const int> tuple) {
  if (static_cast<int>(tuple.size()) != config.k) throw InputError("witness: tuple length != k");
  std::vector<int> y(config.d, 0);
  for (int l = 0; l < config.k; ++l) {
    for (int l2 = l + 1; l2 < config.k; ++l2) {
      std::size_t base = 2 * pair_coordinate(config.k, config.n, l, tuple[l], l2, tuple[l2]);
      y.at(base) = 1;
      y.at(base + 1) = -1;
    }
  }
  return y;
}

std::vector<double> qinf_clique_witness(const PointConfig& config, std::span<const int> tuple) {
  if (static_cast<int>(tuple.size()) != config.k) throw InputError("witness: tuple length != k");
  std::vector<double> y(config.d, 0.5);
  for (int i = 0; i < config.k; ++i) {
    for (const auto& e : config.point(i, tuple[i])) {
      if (e.value == -1) y[e.coord] = -0.5;
    }
  }
  return y;
}

std::vector<std::vector<double>> tuple_points(const PointConfig& config, std::span<const int> tuple) {
  if (static_cast<int>(tuple.size()) != config.k) throw InputError("tuple length != k");
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < config.k; ++i) {
    if (tuple[i] < 0 || tuple[i] >= config.n) throw InputError("tuple entry out of range");
    pts.push_back(config.dense(i, tuple[i]));
  }
  return pts;
}

}  // namespace barygap
