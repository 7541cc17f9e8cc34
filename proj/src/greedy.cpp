#include "rfsi/greedy.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <numeric>
#include <ostream>

namespace rfsi
{

namespace
{

struct Candidate
{
  int n_T;
  int n_S;
  double dual_norm;
  ReducedState prev;
};

std::vector<Candidate> collect_candidates(const ReducedModel &model, const EnrichmentConfig &cfg)
{
  std::vector<Candidate> out;
  const HifiModel &h = model.hifi();
  if (cfg.index_mode == IndexMode::SingleRun)
  {
    ReducedState s = cfg.snapshots ? initial_state(model, *cfg.snapshots) : model.zero_state();
    for (int i = 0; i < cfg.n_steps; ++i)
    {
      const ParameterVector mu = make_parameter(s.n, h.data, h.params.dt, cfg.alpha_train);
      ReducedState next = step_reduced(model, s, mu);
      out.push_back({next.n, -1, model.residual_dual_norm(mu, s.c, s.D, next.c, s.offset.get()), s});
      s = std::move(next);
    }
    return out;
  }
  const SnapshotSet &snaps = *cfg.snapshots;
  for (int col = 0; col < snaps.count(); ++col)
  {
    ReducedState s = model.project_state(snaps.u.col(col), snaps.p.col(col), snaps.d.col(col),
                                         snaps.times[col], snaps.steps[col]);
    for (int i = 0; i < cfg.n_period; ++i)
    {
      const ParameterVector mu = make_parameter(s.n, h.data, h.params.dt, cfg.alpha_train);
      ReducedState next = step_reduced(model, s, mu);
      out.push_back({next.n, col, model.residual_dual_norm(mu, s.c, s.D, next.c, s.offset.get()), s});
      s = std::move(next);
    }
  }
  return out;
}

ReducedState extend(const ReducedModel &model, const ReducedState &s, int size)
{
  ReducedState out = s;
  if (s.offset)
    out.offset = model.make_offset(s.offset->d);
  const auto old = s.c.size();
  out.c.conservativeResize(size);
  out.D.conservativeResize(size);
  out.c.tail(size - old).setZero();
  out.D.tail(size - old).setZero();
  return out;
}

}  // namespace

IndexMode index_mode_from_string(const std::string &s)
{
  if (s == "single_run")
    return IndexMode::SingleRun;
  if (s == "cyclic_vector")
    return IndexMode::CyclicVector;
  throw InvalidArgument("unknown index mode '" + s + "' (expected single_run or cyclic_vector)");
}

std::string to_string(IndexMode m)
{
  return m == IndexMode::SingleRun ? "single_run" : "cyclic_vector";
}

void EnrichmentConfig::validate() const
{
  if (n_max_triplets < 0)
    throw InvalidArgument("enrich: n_max_triplets must be non-negative");
  if (!(alpha_train >= 0.0 && alpha_train <= kMaxAlpha))
    throw InvalidArgument("enrich: alpha_train must lie in [0, 0.2]");
  if (index_mode == IndexMode::SingleRun && n_steps < 1)
    throw InvalidArgument("enrich: invalid candidate window");
  if (index_mode == IndexMode::CyclicVector && (snapshots == nullptr || snapshots->count() == 0 || n_period < 1))
    throw InvalidArgument("enrich: cyclic mode needs snapshots and n_period >= 1");
}

std::vector<CyclicIndex> cyclic_indices(const SnapshotSet &snapshots, int n_period)
{
  if (snapshots.count() == 0)
    throw InvalidArgument("cyclic_indices: empty snapshot set");
  if (n_period < 1)
    throw InvalidArgument("cyclic_indices: n_period must be >= 1");
  std::vector<CyclicIndex> out;
  out.reserve(static_cast<std::size_t>(snapshots.count()) * n_period);
  for (int s = 0; s < snapshots.count(); ++s)
    for (int n = 1; n <= n_period; ++n)
      out.push_back({snapshots.steps[s] + n, s});
  return out;
}

int GreedyTrace::accepted() const
{
  return static_cast<int>(std::count_if(records.begin(), records.end(), [](const GreedyRecord &r) { return !r.skipped; }));
}

GreedyTrace enrich(ReducedModel &model, const EnrichmentConfig &cfg)
{
  cfg.validate();
  GreedyTrace trace;
  const HifiModel &h = model.hifi();
  const SupremizerSolver supremizer(h.space, h.ops);

  for (int it = 1; it <= cfg.n_max_triplets; ++it)
  {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<Candidate> cand = collect_candidates(model, cfg);
    std::vector<int> order(cand.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return cand[a].dual_norm > cand[b].dual_norm; });
    const double max_dn = cand.empty() ? 0.0 : cand[order[0]].dual_norm;
    if (cand.empty() || max_dn < cfg.dual_norm_floor)
    {
      trace.stop_reason = "max dual norm below floor";
      break;
    }

    bool accepted = false;
    for (int idx : order)
    {
      const Candidate &c = cand[idx];
      const ParameterVector mu = make_parameter(c.prev.n, h.data, h.params.dt, cfg.alpha_train);
      const State full = step_intermediate(model, c.prev, mu);

      const ReducedBasis &B = model.basis();
      Vec v = full.u_tilde, q = full.p;
      const double rv = gram_schmidt(v, B.velocity_block(), h.ops.X_u, cfg.reject_ratio);
      const double rq = gram_schmidt(q, B.pressure_block(), h.ops.X_p, cfg.reject_ratio);
      bool ok = rv > cfg.reject_ratio && rq > cfg.reject_ratio;
      Vec s;
      if (ok)
      {
        s = supremizer.solve(q);
        Mat Vb(B.n_u, B.velocity_block().cols() + 1);
        Vb << B.velocity_block(), v;
        ok = gram_schmidt(s, Vb, h.ops.X_u, cfg.reject_ratio) > cfg.reject_ratio;
      }
      GreedyRecord rec;
      rec.iteration = it;
      rec.n_T = c.n_T;
      rec.n_S = c.n_S;
      rec.max_dual_norm = c.dual_norm;
      if (!ok)
      {
        rec.skipped = true;
        rec.basis_size = model.size();
        rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        trace.records.push_back(rec);
        continue;
      }
      // Velocity and pressure first, then the supremizer.
      model.append(join(v, Vec::Zero(B.n_p)), BasisKind::Velocity);
      model.append(join(Vec::Zero(model.basis().n_u), q), BasisKind::Pressure);
      model.append(join(s, Vec::Zero(model.basis().n_p)), BasisKind::Supremizer);

      const ReducedState prev = extend(model, c.prev, model.size());
      const ReducedState next = step_reduced(model, prev, mu);
      rec.post_dual_norm = model.residual_dual_norm(mu, prev.c, prev.D, next.c, prev.offset.get());
      rec.basis_size = model.size();
      rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      trace.records.push_back(rec);
      accepted = true;
      break;
    }
    if (!accepted)
    {
      trace.stop_reason = "every candidate was rejected as linearly dependent";
      break;
    }
  }
  if (trace.stop_reason.empty())
    trace.stop_reason = "reached n_max_triplets";
  return trace;
}

void write_trace_csv(std::ostream &os, const GreedyTrace &trace)
{
  os << "iteration,n_T,n_S,max_dual_norm,basis_size,skipped\n";
  char buf[160];
  for (const auto &r : trace.records)
  {
    std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.17g,%d,%d\n", r.iteration, r.n_T, r.n_S,
                  r.max_dual_norm, r.basis_size, r.skipped ? 1 : 0);
    os << buf;
  }
}

}  // namespace rfsi
