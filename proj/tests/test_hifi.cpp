#include "doctest.h"

#include <cmath>

#include "rfsi/hifi.hpp"
#include "support.hpp"

using namespace rfsi;

namespace
{

// Full-unknown step with the inlet values imposed directly.
Vec direct_constrained_step(const HifiModel &h, const ParameterVector &mu, const Vec &u_tilde_prev,
                            const Vec &d_prev)
{
  testing::DirectSystem s = testing::direct_assembly(h, mu, u_tilde_prev, d_prev);
  const int nt = h.space.n_total();
  std::vector<char> fixed(nt, 0);
  for (int d : h.space.dirichlet_dofs())
    fixed[d] = 1;
  std::vector<Triplet> t;
  for (int k = 0; k < s.matrix.outerSize(); ++k)
    for (SpMat::InnerIterator it(s.matrix, k); it; ++it)
      if (!fixed[it.row()])
        t.emplace_back(it.row(), it.col(), it.value());
  for (int d : h.space.dirichlet_dofs())
  {
    t.emplace_back(d, d, 1.0);
    s.load[d] = mu.e0() * h.ops.lift[d];
  }
  SpMat A(nt, nt);
  A.setFromTriplets(t.begin(), t.end());
  Eigen::SparseLU<SpMat> lu(A);
  return lu.solve(s.load);
}

}  // namespace

TEST_CASE("homogeneous data keeps the zero state")
{
  RunConfig c = testing::small_config();
  c.signals.sigma1 = SignalSpec{Waveform::Constant, 0.0, 0.0, 0.0, 0.8};
  c.signals.sigma2 = SignalSpec{Waveform::Constant, 0.0, 0.0, 0.0, 0.8};
  const auto h = make_hifi(c);
  State s = zero_state(*h);
  for (int n = 0; n < 5; ++n)
    s = step(*h, s, make_parameter(n, h->data, h->params.dt, 0.1));
  CHECK(s.u.norm() == 0.0);
  CHECK(s.p.norm() == 0.0);
  CHECK(s.d.norm() == 0.0);
  CHECK(s.n == 5);
}

TEST_CASE("inlet values, displacement running sum and lifting equivalence")
{
  const auto h = testing::small_model();
  State s = zero_state(*h);
  Vec sum = Vec::Zero(h->space.n_u());
  for (int n = 0; n < 30; ++n)
  {
    const ParameterVector mu = make_parameter(n, h->data, h->params.dt, 0.2);
    const Vec direct = direct_constrained_step(*h, mu, s.u_tilde, s.d);
    const State next = step(*h, s, mu);
    CHECK((next.u - direct.head(h->space.n_u())).norm() <= 1e-9 * direct.norm());
    CHECK((next.p - direct.tail(h->space.n_p())).norm() <= 1e-9 * direct.norm());

    const double g = h->data.sigma1((n + 1) * h->params.dt) * theta(0.2, n * h->params.dt);
    for (int d : h->space.dirichlet_dofs())
      CHECK(std::abs(next.u[d] - g * h->ops.lift[d]) <= 1e-10);

    sum += next.u_tilde;
    for (int i = 0; i < h->space.n_u(); ++i)
    {
      if (h->space.is_wall(i))
        CHECK(std::abs(next.d[i] - h->params.dt * sum[i]) <= 1e-12 * (std::abs(next.d[i]) + 1e-300) + 1e-300);
      else
        CHECK(next.d[i] == 0.0);
    }
    s = next;
  }
  CHECK(s.t == doctest::Approx(30 * h->params.dt));
}

TEST_CASE("the high-fidelity solution has a negligible residual")
{
  const auto h = testing::small_model();
  State s = zero_state(*h);
  for (int n = 0; n < 20; ++n)
  {
    const ParameterVector mu = make_parameter(n, h->data, h->params.dt, 0.0);
    const State next = step(*h, s, mu);
    const Vec r = testing::full_residual(*h, mu, s.u_tilde, s.d, join(next.u_tilde, next.p));
    CHECK(testing::dense_dual_norm(*h, r) <= 1e-8);
    s = next;
  }
}

TEST_CASE("steady data approaches a fixed point")
{
  RunConfig c = testing::small_config();
  c.signals.sigma1 = SignalSpec{Waveform::Constant, 1.0, 0.0, 0.0, 0.8};
  c.signals.sigma2 = SignalSpec{Waveform::Constant, 1.0, 0.0, 0.0, 0.8};
  const auto h = make_hifi(c);
  State s = zero_state(*h);
  // The wall relaxes through a lightly damped mode, so compare window maxima.
  std::vector<double> window(4, 0.0);
  for (int n = 0; n < 2000; ++n)
  {
    const State next = step(*h, s, make_parameter(n, h->data, h->params.dt, 0.0));
    window[n / 500] = std::max(window[n / 500], velocity_norm(h->ops.X_u, next.u - s.u));
    s = next;
  }
  for (int k = 1; k < 4; ++k)
    CHECK(window[k] < 0.1 * window[k - 1]);
}

TEST_CASE("snapshot protocol")
{
  const auto h = testing::small_model();
  const SnapshotSet s = run(*h, RunProtocol{10, 40, 5}, 0.0);
  CHECK(s.count() == 8);
  CHECK(s.u.cols() == 8);
  CHECK(s.p.cols() == 8);
  CHECK(s.steps.front() == 15);
  CHECK(s.steps.back() == 50);
  for (int k = 1; k < s.count(); ++k)
    CHECK(s.times[k] > s.times[k - 1]);
  const SnapshotSet all = run(*h, RunProtocol{0, 12, 1}, 0.0);
  CHECK(all.count() == 12);
  CHECK_THROWS_AS(run(*h, RunProtocol{0, 12, 5}, 0.0), InvalidArgument);
  CHECK_THROWS_AS(run(*h, RunProtocol{0, 4, 8}, 0.0), InvalidArgument);

  // The initial state is the state at the end of the warm-up.
  State st = zero_state(*h);
  int calls = 0;
  for (int n = 0; n < 10; ++n)
    st = step(*h, st, make_parameter(n, h->data, h->params.dt, 0.0));
  const SnapshotSet w = run(*h, RunProtocol{10, 5, 5}, 0.0, [&](const State &) { ++calls; });
  CHECK(calls == 15);
  CHECK((w.initial_u - st.u_tilde).norm() == 0.0);
  CHECK((w.initial_d - st.d).norm() == 0.0);
}

TEST_CASE("period and Reynolds helpers")
{
  CHECK(steps_per_periods(1.0, 0.8, 0.001) == 800);
  CHECK(steps_per_periods(1.0, 0.8, 0.002) == 400);
  CHECK(steps_per_periods(0.0, 0.8, 0.002) == 0);
  CHECK_THROWS_AS(steps_per_periods(1.0, 0.8, 0.003), InvalidArgument);
  PhysicalParams p;
  CHECK(reynolds(p, 5.0, 0.5) == doctest::Approx(4.0 * 1.06 * 5.0 / (3.14159265358979323846 * 0.5 * 0.035)));
  CHECK(reynolds(p, 5.0, 0.5) == doctest::Approx(385.6).epsilon(1e-3));
  CHECK(reynolds(p, 0.0, 0.5) == 0.0);
  CHECK_THROWS_AS(reynolds(p, 1.0, 0.0), InvalidArgument);
}

TEST_CASE("periodic data: the period-to-period change decays on the desk benchmark")
{
  const RunConfig c;
  const auto h = make_hifi(c);
  const int per = steps_per_periods(1.0, c.time.period, c.time.dt);
  // Space-time X norm of u(t + period) - u(t) over each period, relative to u.
  std::vector<Vec> u;
  State s = zero_state(*h);
  for (int n = 0; n < 4 * per; ++n)
  {
    s = step(*h, s, make_parameter(n, h->data, h->params.dt, 0.0));
    u.push_back(s.u);
  }
  double prev = 1e300;
  for (int k = 0; k + 1 < 4; ++k)
  {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < per; ++i)
    {
      const Vec d = u[(k + 1) * per + i] - u[k * per + i];
      num += d.dot(h->ops.X_u * d);
      den += u[k * per + i].dot(h->ops.X_u * u[k * per + i]);
    }
    const double r = std::sqrt(num / den);
    MESSAGE("period " << k << " relative change " << r);
    CHECK(r < prev);
    prev = r;
  }
  CHECK(prev < 1e-6);
}
