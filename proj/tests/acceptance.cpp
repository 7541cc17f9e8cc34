// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "rfsi/greedy.hpp"
#include "rfsi/metrics.hpp"
#include "rfsi/pod.hpp"
#include "rfsi/rom.hpp"
#include "support.hpp"

using namespace rfsi;

namespace
{

struct Outcome
{
  bool pass = false;
  std::string detail;
};

std::string fmt(const char *f, double a)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

std::string sci(double a) { return fmt("%.3e", a); }

// Desk channel benchmark: default configuration, truth at alpha = 0 and 0.2.
struct Desk
{
  RunConfig config;
  std::shared_ptr<const HifiModel> h;
  SnapshotSet s0, s2;

  Desk()
  {
    h = make_hifi(config);
    s0 = run(*h, config.protocol(), 0.0);
    s2 = run(*h, config.protocol(), config.greedy.alpha_train);
  }
};

Desk &desk()
{
  static Desk d;
  return d;
}

struct Evaluation
{
  ErrorReport report;
  ReducedTrajectory trajectory;
};

Evaluation evaluate(const ReducedModel &rom, const SnapshotSet &truth)
{
  const HifiModel &h = rom.hifi();
  Evaluation e;
  e.trajectory = run_reduced(rom, initial_state(rom, truth), truth.n_steps, truth.alpha, true);
  Mat U(h.space.n_u(), truth.count()), P(h.space.n_p(), truth.count());
  for (int k = 0; k < truth.count(); ++k)
  {
    const ReducedState &s = e.trajectory.states[truth.steps[k] - truth.warmup_steps - 1];
    U.col(k) = rom.velocity(s.c);
    P.col(k) = rom.pressure(s.c);
  }
  e.report = space_time_errors(truth.u, truth.p, U, P, truth.times, e.trajectory.dual_norms, h.ops.X_u, h.ops.X_p);
  return e;
}

Vec wall_mask(const HifiModel &h, const Vec &v)
{
  Vec d = Vec::Zero(v.size());
  for (int dof : h.space.wall_dofs())
    d[dof] = v[dof];
  return d;
}

ReducedBasis without_supremizers(const ReducedBasis &b)
{
  ReducedBasis nb;
  nb.n_u = b.n_u;
  nb.n_p = b.n_p;
  for (int j = 0; j < b.size(); ++j)
    if (b.kinds[j] != BasisKind::Supremizer)
      nb.append(b.columns.col(j), b.kinds[j]);
  return nb;
}

// Block basis spanning the given truth states exactly.
ReducedBasis truth_basis(const HifiModel &h, const std::vector<State> &states)
{
  ReducedBasis b;
  b.n_u = h.space.n_u();
  b.n_p = h.space.n_p();
  b.columns.resize(h.space.n_total(), 0);
  Mat V(b.n_u, 0), P(b.n_p, 0);
  auto push = [](Mat &Q, const Vec &v)
  {
    Q.conservativeResize(Eigen::NoChange, Q.cols() + 1);
    Q.col(Q.cols() - 1) = v;
  };
  for (const State &s : states)
  {
    Vec v = s.u_tilde, q = s.p;
    if (gram_schmidt(v, V, h.ops.X_u) > 1e-10)
      push(V, v);
    if (gram_schmidt(q, P, h.ops.X_p) > 1e-10)
      push(P, q);
  }
  const Mat S = compute_supremizers(h.space, h.ops, P);
  for (int j = 0; j < V.cols(); ++j)
    b.append(join(V.col(j), Vec::Zero(b.n_p)), BasisKind::Velocity);
  for (int j = 0; j < P.cols(); ++j)
    b.append(join(Vec::Zero(b.n_u), P.col(j)), BasisKind::Pressure);
  for (int j = 0; j < S.cols(); ++j)
  {
    Vec v = S.col(j);
    if (gram_schmidt(v, V, h.ops.X_u) > 1e-10)
    {
      push(V, v);
      b.append(join(v, Vec::Zero(b.n_p)), BasisKind::Supremizer);
    }
  }
  return b;
}

Outcome basis_bookkeeping()
{
  const bool a = basis_count(28, 2) == 32, b = basis_count(48, 3) == 54;
  return {a && b, "(28,2)->" + std::to_string(basis_count(28, 2)) + ", (48,3)->" + std::to_string(basis_count(48, 3))};
}

Outcome energy_criterion()
{
  std::mt19937_64 rng(31337);
  std::uniform_int_distribution<int> len(1, 80);
  std::uniform_real_distribution<double> decay(0.05, 0.95), jitter(0.5, 1.0), ltol(-9.0, -0.5);
  int mismatches = 0, not_minimal = 0;
  for (int trial = 0; trial < 1000; ++trial)
  {
    const int n = len(rng);
    std::vector<double> l(n);
    double v = 1.0, r = decay(rng);
    for (int k = 0; k < n; ++k)
    {
      l[k] = v;
      v *= r * jitter(rng);
    }
    const double tol = std::pow(10.0, ltol(rng));
    const int N = select_modes(Eigen::Map<const Vec>(l.data(), n), tol);
    // Direct search over N by explicit tail sums.
    double total = 0.0;
    for (double x : l)
      total += x;
    int oracle = n;
    for (int m = 0; m <= n; ++m)
    {
      double tail = 0.0;
      for (int k = m; k < n; ++k)
        tail += l[k];
      if (tail <= tol * total)
      {
        oracle = m;
        break;
      }
    }
    mismatches += N != oracle;
    if (N > 0)
    {
      double tail = 0.0;
      for (int k = N - 1; k < n; ++k)
        tail += l[k];
      not_minimal += !(tail > tol * total);
    }
  }
  return {mismatches == 0 && not_minimal == 0,
          "1000 spectra, " + std::to_string(mismatches) + " mismatches, " + std::to_string(not_minimal) +
              " non-minimal"};
}

Outcome affine_exactness()
{
  const auto h = testing::small_model(6, 3);
  std::mt19937_64 rng(4242);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k)
  {
    const ParameterVector mu = testing::random_parameter(rng);
    const Vec u = testing::random_homogeneous_velocity(h->space, rng, 5.0);
    const Vec d = testing::random_wall_field(h->space, rng, 1e-3);
    const LinearSystem a = evaluate_system(h->space, h->sys, mu, u, d);
    const testing::DirectSystem b = testing::direct_lifted(*h, mu, u, d);
    worst = std::max(worst, testing::frobenius(SpMat(a.matrix - b.matrix)) / testing::frobenius(b.matrix));
    worst = std::max(worst, (a.load - b.load).norm() / b.load.norm());
  }
  return {worst <= 1e-12, "100 draws, worst relative difference " + sci(worst)};
}

Outcome residual_oracle()
{
  const auto h = testing::small_model(6, 3);
  const SnapshotSet s = run(*h, RunProtocol{100, 40, 2}, 0.0);
  const PodResult pod = build_basis(s, h->space, h->ops, 1e-5);
  const ReducedModel rom(h, pod.basis);
  std::mt19937_64 rng(99);
  std::normal_distribution<double> n(0.0, 1.0);
  const Vec d0 = testing::random_wall_field(h->space, rng, 1e-3);
  const auto offset = rom.make_offset(d0);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k)
  {
    const ParameterVector mu = testing::random_parameter(rng);
    Vec c_prev(rom.size()), D_prev(rom.size()), c_new(rom.size());
    for (int i = 0; i < rom.size(); ++i)
    {
      c_prev[i] = 10.0 * n(rng);
      D_prev[i] = 0.01 * n(rng);
      c_new[i] = 10.0 * n(rng);
    }
    const bool with_offset = k % 2 == 1;
    const double online = rom.residual_dual_norm(mu, c_prev, D_prev, c_new, with_offset ? offset.get() : nullptr);
    const Vec d_prev = wall_mask(*h, rom.velocity(D_prev) + (with_offset ? d0 : Vec::Zero(h->space.n_u())));
    const double dense = testing::dense_dual_norm(
        *h, testing::full_residual(*h, mu, rom.velocity(c_prev), d_prev, rom.expand(c_new)));
    worst = std::max(worst, std::abs(online - dense) / dense);
  }

  // Residual of the truth itself, in a space that contains it.
  std::vector<State> states;
  State st = zero_state(*h);
  for (int k = 0; k < 10; ++k)
  {
    st = step(*h, st, make_parameter(k, h->data, h->params.dt, 0.1));
    states.push_back(st);
  }
  const ReducedModel exact(h, truth_basis(*h, states));
  const ReducedTrajectory t = run_reduced(exact, exact.zero_state(), 10, 0.1, true);
  const double truth = *std::max_element(t.dual_norms.begin(), t.dual_norms.end());
  return {worst <= 1e-8 && truth <= 1e-8,
          "50 states, worst relative " + sci(worst) + ", truth residual " + sci(truth)};
}

Outcome galerkin_orthogonality()
{
  Desk &d = desk();
  const HifiModel &h = *d.h;
  const PodResult pod = build_basis(d.s0, h.space, h.ops, d.config.pod.tol);
  const ReducedModel rom(d.h, pod.basis);
  const Mat &W = rom.basis().columns;
  ReducedState st = initial_state(rom, d.s0);
  double worst = 0.0;
  for (int n = 0; n < 100; ++n)
  {
    const ParameterVector mu = make_parameter(st.n, h.data, h.params.dt, 0.0);
    const State full = step_intermediate(rom, st, mu);
    const ReducedState next = step_reduced(rom, st, mu);
    const Vec d_prev = wall_mask(h, rom.velocity(st.D) + (st.offset ? st.offset->d : Vec::Zero(h.space.n_u())));
    const LinearSystem ls = evaluate_system(h.space, h.sys, mu, rom.velocity(st.c), d_prev);
    const Vec g = W.transpose() * (ls.matrix * (join(full.u_tilde, full.p) - rom.expand(next.c)));
    worst = std::max(worst, g.cwiseAbs().maxCoeff());
    st = next;
  }
  return {worst <= 1e-8, "100 steps, N = " + std::to_string(rom.size()) + ", max |a(U - U_N, psi_j)| " + sci(worst)};
}

Outcome supremizer_stability()
{
  Desk &d = desk();
  const HifiModel &h = *d.h;
  const PodResult pod = build_basis(d.s0, h.space, h.ops, d.config.pod.tol);
  if (pod.n_pressure_modes < 2)
    return {false, "fewer than two pressure modes"};
  const ReducedModel with(d.h, pod.basis), bare(d.h, without_supremizers(pod.basis));
  const ReducedState z = initial_state(with, d.s0);
  const ParameterVector mu = make_parameter(z.n, h.data, h.params.dt, 0.0);
  Eigen::JacobiSVD<Mat> a(bare.matrix(mu, bare.project(with.expand(z.c)))), b(with.matrix(mu, z.c));
  const Vec sa = a.singularValues(), sb = b.singularValues();
  const double ratio = sa[sa.size() - 1] / sa[0], cond = sb[0] / sb[sb.size() - 1];
  return {ratio <= 1e-12 && cond <= 1e10, "N_p = " + std::to_string(pod.n_pressure_modes) +
                                              ", ratio without " + sci(ratio) + ", condition with " + sci(cond)};
}

Outcome tolerance_trend()
{
  Desk &d = desk();
  const HifiModel &h = *d.h;
  std::string detail;
  bool pass = true;
  double prev_u = INFINITY, prev_p = INFINITY;
  for (double tol : {1e-2, 1e-3, 1e-4, 1e-5})
  {
    const PodResult pod = build_basis(d.s0, h.space, h.ops, tol);
    const ReducedModel rom(d.h, pod.basis);
    const ErrorReport r = evaluate(rom, d.s0).report;
    pass = pass && r.E_u <= prev_u && r.E_p <= prev_p && r.E_u <= 10.0 * std::sqrt(tol);
    prev_u = r.E_u;
    prev_p = r.E_p;
    detail += fmt("tol %.0e", tol) + ": N " + std::to_string(rom.size()) + " E_u " + sci(r.E_u) + " E_p " +
              sci(r.E_p) + "; ";
  }
  detail.resize(detail.size() - 2);
  return {pass, detail};
}

Outcome residual_indicator()
{
  Desk &d = desk();
  const HifiModel &h = *d.h;
  const PodResult pod = build_basis(d.s0, h.space, h.ops, 1e-4);
  const ReducedModel rom(d.h, pod.basis);
  const Evaluation e = evaluate(rom, d.s0);
  std::vector<double> dual, err;
  for (int k = 0; k < d.s0.count(); ++k)
  {
    dual.push_back(e.trajectory.dual_norms[d.s0.steps[k] - d.s0.warmup_steps - 1]);
    err.push_back(std::hypot(e.report.err_u[k], e.report.err_p[k]));
  }
  const double rho = spearman(dual, err);
  return {rho >= 0.8, "N = " + std::to_string(rom.size()) + ", " + std::to_string(dual.size()) +
                          " instants, Spearman " + fmt("%.4f", rho)};
}

Outcome greedy_efficacy()
{
  Desk &d = desk();
  const HifiModel &h = *d.h;
  const PodResult pod = build_basis(d.s0, h.space, h.ops, d.config.pod.tol);
  ReducedModel rom(d.h, pod.basis);
  const ErrorReport before = evaluate(rom, d.s2).report;
  const int n0 = rom.size();
  const GreedyTrace t = enrich(rom, d.config.enrichment(&d.s0));
  const ErrorReport after = evaluate(rom, d.s2).report;
  const bool pass = t.accepted() == 4 && after.R_N < before.R_N && after.E_p <= before.E_p;
  return {pass, "N " + std::to_string(n0) + " -> " + std::to_string(rom.size()) + ", R_N " + sci(before.R_N) +
                    " -> " + sci(after.R_N) + ", E_p " + sci(before.E_p) + " -> " + sci(after.E_p) + ", E_u " +
                    sci(before.E_u) + " -> " + sci(after.E_u)};
}

Outcome online_speed()
{
  Desk &d = desk();
  const HifiModel &h = *d.h;
  const PodResult pod = build_basis(d.s0, h.space, h.ops, 1e-5);
  ReducedModel rom(d.h, pod.basis);
  enrich(rom, d.config.enrichment(&d.s0));
  if (rom.size() > 100)
    return {false, "basis larger than 100"};
  const ReducedState init = initial_state(rom, d.s0);
  const auto t0 = std::chrono::steady_clock::now();
  const ReducedTrajectory t = run_reduced(rom, init, 800, 0.0, true);
  const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool finite = std::all_of(t.dual_norms.begin(), t.dual_norms.end(), [](double x) { return std::isfinite(x); });
  return {sec <= 5.0 && finite && t.states.size() == 800,
          "800 steps with residuals at N = " + std::to_string(rom.size()) + " in " + fmt("%.3f", sec) + " s"};
}

Outcome output_functionals()
{
  double flux = 0.0, wss = 0.0;
  const double U = 8.0, H = 0.5, mu = 0.035, gamma = 12.0;
  for (int n : {8, 16, 32})
  {
    const FunctionSpace s(build_channel(2.5, H, 2 * n, n));
    const Vec pois = interpolate_velocity(s, poiseuille_profile(U, H));
    flux = std::max(flux, std::abs(outlet_flow_rate(s, pois) - 2.0 / 3.0 * U * H) / (2.0 / 3.0 * U * H));
    const Vec shear = interpolate_velocity(s, [gamma](const Point &x) { return Point{gamma * x.y, 0.0}; });
    const Vec p = interpolate_pressure(s, [](const Point &x) { return 30.0 - 4.0 * x.x; });
    for (WallSide side : {WallSide::Bottom, WallSide::Top})
      wss = std::max(wss, std::abs(wall_shear_stress(s, mu, shear, p, WallArea{side, 0.8, 1.7}) - mu * gamma) /
                              (mu * gamma));
  }

  // ROM against truth at tol 1e-5 on the desk benchmark.
  Desk &d = desk();
  const HifiModel &h = *d.h;
  const PodResult pod = build_basis(d.s0, h.space, h.ops, 1e-5);
  const ReducedModel rom(d.h, pod.basis);
  const Evaluation e = evaluate(rom, d.s0);
  double worst_ratio = 0.0;
  std::string areas;
  for (const WallArea &area : {d.config.outputs.wss_area1, d.config.outputs.wss_area2})
  {
    double num = 0.0, den = 0.0;
    for (int k = 0; k < d.s0.count(); ++k)
    {
      const ReducedState &st = e.trajectory.states[d.s0.steps[k] - d.s0.warmup_steps - 1];
      const double lc = d.s0.lift_coefficients[k];
      const double wf = wall_shear_stress(h.space, h.params.mu, d.s0.u.col(k) + lc * h.ops.lift, d.s0.p.col(k), area);
      const double wr = wall_shear_stress(h.space, h.params.mu, rom.velocity(st.c) + lc * h.ops.lift,
                                          rom.pressure(st.c), area);
      num += (wf - wr) * (wf - wr);
      den += wf * wf;
    }
    const double disc = std::sqrt(num / den);
    worst_ratio = std::max(worst_ratio, disc / e.report.E_u);
    areas += " " + sci(disc);
  }
  return {flux <= 1e-10 && wss <= 1e-10 && worst_ratio <= 10.0,
          "flux " + sci(flux) + ", Couette " + sci(wss) + ", ROM WSS discrepancy" + areas + " vs E_u " +
              sci(e.report.E_u)};
}

Outcome manufactured_convergence()
{
  std::vector<ErrorNorms> e;
  const std::vector<int> meshes{4, 8, 16};
  for (int n : meshes)
    e.push_back(testing::mms_stokes_errors(n));
  auto rate = [&](double ErrorNorms::*f)
  { return std::log((e[0].*f) / (e[2].*f)) / std::log(double(meshes[2]) / meshes[0]); };
  const double h1 = rate(&ErrorNorms::velocity_h1_semi), l2 = rate(&ErrorNorms::velocity_l2),
               p = rate(&ErrorNorms::pressure_l2);
  const bool pass = std::abs(h1 - 2.0) <= 0.2 && std::abs(l2 - 3.0) <= 0.2 && std::abs(p - 2.0) <= 0.2;
  return {pass, "meshes 4/8/16, slopes H1 " + fmt("%.3f", h1) + ", L2 " + fmt("%.3f", l2) + ", p " + fmt("%.3f", p)};
}

}  // namespace

int main()
{
  struct Criterion
  {
    int id;
    const char *name;
    double budget;  // seconds
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "basis bookkeeping", 1e-3, basis_bookkeeping},
      {2, "energy criterion", 1.0, energy_criterion},
      {3, "affine exactness", 30.0, affine_exactness},
      {4, "residual oracle", 60.0, residual_oracle},
      {5, "Galerkin orthogonality", 120.0, galerkin_orthogonality},
      {6, "singularity without supremizers", 60.0, supremizer_stability},
      {7, "error-tolerance trend", 900.0, tolerance_trend},
      {8, "residual as indicator", 300.0, residual_indicator},
      {9, "greedy efficacy", 1200.0, greedy_efficacy},
      {10, "online speed", 60.0, online_speed},
      {11, "output functionals", 300.0, output_functionals},
      {12, "manufactured-solution convergence", 600.0, manufactured_convergence},
  };
  int failed = 0;
  for (const Criterion &c : criteria)
  {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try
    {
      o = c.run();
    }
    catch (const std::exception &ex)
    {
      o = {false, std::string("exception: ") + ex.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && sec <= c.budget;
    failed += !pass;
    std::printf("criterion %2d %s: %s (%s; %.3f s of %.3g s)\n", c.id, pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str(), sec, c.budget);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
