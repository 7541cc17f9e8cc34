#include "rfsi/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace rfsi
{

namespace
{

using nlohmann::json;

// Reads the members of one JSON object, rejecting keys nobody asked for.
class Block
{
public:
  Block(const json &j, std::string path) : j_(j), path_(std::move(path))
  {
    if (!j_.is_object())
      throw ConfigError(path_ + ": expected an object");
  }

  ~Block() noexcept(false)
  {
    if (std::uncaught_exceptions() > 0)
      return;
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key()))
        throw ConfigError(path_ + "." + it.key() + ": unknown key");
  }

  void num(const char *key, double &out)
  {
    if (const json *v = find(key))
    {
      if (!v->is_number())
        throw ConfigError(where(key) + ": expected a number");
      out = v->get<double>();
    }
  }

  void integer(const char *key, int &out)
  {
    if (const json *v = find(key))
    {
      if (!v->is_number_integer())
        throw ConfigError(where(key) + ": expected an integer");
      out = v->get<int>();
    }
  }

  void str(const char *key, std::string &out)
  {
    if (const json *v = find(key))
    {
      if (!v->is_string())
        throw ConfigError(where(key) + ": expected a string");
      out = v->get<std::string>();
    }
  }

  const json *object(const char *key) { return find(key); }
  std::string where(const char *key) const { return path_ + "." + key; }

private:
  const json *find(const char *key)
  {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  const json &j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_signal(const json &j, const std::string &path, SignalSpec &s)
{
  Block b(j, path);
  std::string kind = to_string(s.kind);
  b.str("waveform", kind);
  try
  {
    s.kind = waveform_from_string(kind);
  }
  catch (const InvalidArgument &e)
  {
    throw ConfigError(path + ".waveform: " + e.what());
  }
  b.num("mean", s.mean);
  b.num("amplitude", s.amplitude);
  b.num("phase", s.phase);
  b.num("period", s.period);
}

void read_area(const json &j, const std::string &path, WallArea &a)
{
  Block b(j, path);
  std::string side = to_string(a.side);
  b.str("side", side);
  try
  {
    a.side = wall_side_from_string(side);
  }
  catch (const InvalidArgument &e)
  {
    throw ConfigError(path + ".side: " + e.what());
  }
  b.num("x_min", a.x_min);
  b.num("x_max", a.x_max);
}

json signal_json(const SignalSpec &s)
{
  return {{"waveform", to_string(s.kind)},
          {"mean", s.mean},
          {"amplitude", s.amplitude},
          {"phase", s.phase},
          {"period", s.period}};
}

json area_json(const WallArea &a)
{
  return {{"side", to_string(a.side)}, {"x_min", a.x_min}, {"x_max", a.x_max}};
}

void require(bool ok, const std::string &msg)
{
  if (!ok)
    throw ConfigError(msg);
}

}  // namespace

WallSide wall_side_from_string(const std::string &s)
{
  if (s == "bottom")
    return WallSide::Bottom;
  if (s == "top")
    return WallSide::Top;
  if (s == "both")
    return WallSide::Both;
  throw InvalidArgument("unknown wall side '" + s + "'");
}

std::string to_string(WallSide s)
{
  switch (s)
  {
    case WallSide::Bottom:
      return "bottom";
    case WallSide::Top:
      return "top";
    case WallSide::Both:
      return "both";
  }
  return "both";
}

void RunConfig::validate() const
{
  require(mesh.length > 0.0 && mesh.height > 0.0, "mesh: length and height must be positive");
  require(mesh.nx >= 2 && mesh.ny >= 2, "mesh: nx and ny must be at least 2");
  try
  {
    physical_params().validate();
  }
  catch (const InvalidArgument &e)
  {
    throw ConfigError(std::string("physics: ") + e.what());
  }
  require(time.dt > 0.0, "time.dt must be positive");
  require(time.period > 0.0, "time.period must be positive");
  require(time.n_steps >= 1, "time.n_steps must be at least 1");
  require(time.stride >= 1 && time.n_steps % time.stride == 0,
          "time.stride must be positive and divide time.n_steps");
  require(time.warmup_periods >= 0.0, "time.warmup_periods must be non-negative");
  const double w = time.warmup_periods * time.period / time.dt;
  require(std::abs(w - std::round(w)) < 1e-9 * std::max(1.0, w),
          "time.warmup_periods * time.period must be a whole number of steps");
  for (const SignalSpec *s : {&signals.sigma1, &signals.sigma2})
    require(s->period > 0.0, "signals: period must be positive");
  require(pod.tol > 0.0 && pod.tol < 1.0, "pod.tol must lie in (0, 1)");
  require(pod.alpha >= 0.0 && pod.alpha <= kMaxAlpha, "pod.alpha out of range");
  require(greedy.n_max_triplets >= 0, "greedy.n_max_triplets must be non-negative");
  require(greedy.alpha_train >= 0.0 && greedy.alpha_train <= kMaxAlpha,
          "greedy.alpha_train out of range");
  require(greedy.n_period >= 1, "greedy.n_period must be at least 1");
  require(greedy.dual_norm_floor >= 0.0, "greedy.dual_norm_floor must be non-negative");
  require(greedy.reject_ratio >= 0.0 && greedy.reject_ratio < 1.0,
          "greedy.reject_ratio must lie in [0, 1)");
  for (const WallArea *a : {&outputs.wss_area1, &outputs.wss_area2})
    require(a->x_min <= a->x_max, "outputs: x_min must not exceed x_max");
  require(!workspace.empty(), "paths.workspace must not be empty");
}

PhysicalParams RunConfig::physical_params() const
{
  PhysicalParams p = physics;
  p.dt = time.dt;
  return p;
}

Mesh RunConfig::make_mesh() const
{
  return build_channel(mesh.length, mesh.height, mesh.nx, mesh.ny);
}

BoundaryData RunConfig::boundary_data() const
{
  const double P = signals.outlet_pressure;
  return BoundaryData{poiseuille_profile(signals.inlet_peak_velocity, mesh.height), signals.sigma1,
                      [P](const Point &) { return Point{-P, 0.0}; }, signals.sigma2, time.period};
}

RunProtocol RunConfig::protocol() const
{
  return RunProtocol{steps_per_periods(time.warmup_periods, time.period, time.dt), time.n_steps,
                     time.stride};
}

EnrichmentConfig RunConfig::enrichment(const SnapshotSet *snapshots) const
{
  EnrichmentConfig c;
  c.n_max_triplets = greedy.n_max_triplets;
  c.alpha_train = greedy.alpha_train;
  c.index_mode = greedy.index_mode;
  c.n_steps = time.n_steps;
  c.n_period = greedy.n_period;
  c.dual_norm_floor = greedy.dual_norm_floor;
  c.reject_ratio = greedy.reject_ratio;
  c.snapshots = snapshots;
  return c;
}

RunConfig parse_config(const std::string &json_text)
{
  json root;
  try
  {
    root = json::parse(json_text);
  }
  catch (const json::parse_error &e)
  {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }

  RunConfig c;
  {
    Block top(root, "config");
    if (const json *j = top.object("mesh"))
    {
      Block b(*j, "mesh");
      b.num("length", c.mesh.length);
      b.num("height", c.mesh.height);
      b.integer("nx", c.mesh.nx);
      b.integer("ny", c.mesh.ny);
    }
    if (const json *j = top.object("physics"))
    {
      Block b(*j, "physics");
      b.num("rho_f", c.physics.rho_f);
      b.num("rho_s", c.physics.rho_s);
      b.num("mu", c.physics.mu);
      b.num("h_s", c.physics.h_s);
      b.num("lambda_s", c.physics.lambda_s);
      b.num("mu_s", c.physics.mu_s);
    }
    if (const json *j = top.object("signals"))
    {
      Block b(*j, "signals");
      b.num("inlet_peak_velocity", c.signals.inlet_peak_velocity);
      b.num("outlet_pressure", c.signals.outlet_pressure);
      if (const json *s = b.object("sigma1"))
        read_signal(*s, "signals.sigma1", c.signals.sigma1);
      if (const json *s = b.object("sigma2"))
        read_signal(*s, "signals.sigma2", c.signals.sigma2);
    }
    if (const json *j = top.object("time"))
    {
      Block b(*j, "time");
      b.num("dt", c.time.dt);
      b.integer("n_steps", c.time.n_steps);
      b.integer("stride", c.time.stride);
      b.num("warmup_periods", c.time.warmup_periods);
      b.num("period", c.time.period);
    }
    if (const json *j = top.object("pod"))
    {
      Block b(*j, "pod");
      b.num("tol", c.pod.tol);
      b.num("alpha", c.pod.alpha);
    }
    if (const json *j = top.object("greedy"))
    {
      Block b(*j, "greedy");
      b.integer("n_max_triplets", c.greedy.n_max_triplets);
      b.num("alpha_train", c.greedy.alpha_train);
      std::string mode = to_string(c.greedy.index_mode);
      b.str("index_mode", mode);
      try
      {
        c.greedy.index_mode = index_mode_from_string(mode);
      }
      catch (const InvalidArgument &e)
      {
        throw ConfigError(std::string("greedy.index_mode: ") + e.what());
      }
      b.integer("n_period", c.greedy.n_period);
      b.num("dual_norm_floor", c.greedy.dual_norm_floor);
      b.num("reject_ratio", c.greedy.reject_ratio);
    }
    if (const json *j = top.object("outputs"))
    {
      Block b(*j, "outputs");
      if (const json *a = b.object("wss_area1"))
        read_area(*a, "outputs.wss_area1", c.outputs.wss_area1);
      if (const json *a = b.object("wss_area2"))
        read_area(*a, "outputs.wss_area2", c.outputs.wss_area2);
    }
    if (const json *j = top.object("paths"))
    {
      Block b(*j, "paths");
      b.str("workspace", c.workspace);
    }
  }
  c.physics.dt = c.time.dt;
  c.validate();
  return c;
}

RunConfig load_config(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const RunConfig &c)
{
  json j;
  j["mesh"] = {{"length", c.mesh.length}, {"height", c.mesh.height}, {"nx", c.mesh.nx}, {"ny", c.mesh.ny}};
  j["physics"] = {{"rho_f", c.physics.rho_f},   {"rho_s", c.physics.rho_s},
                  {"mu", c.physics.mu},         {"h_s", c.physics.h_s},
                  {"lambda_s", c.physics.lambda_s}, {"mu_s", c.physics.mu_s}};
  j["signals"] = {{"inlet_peak_velocity", c.signals.inlet_peak_velocity},
                  {"outlet_pressure", c.signals.outlet_pressure},
                  {"sigma1", signal_json(c.signals.sigma1)},
                  {"sigma2", signal_json(c.signals.sigma2)}};
  j["time"] = {{"dt", c.time.dt},
               {"n_steps", c.time.n_steps},
               {"stride", c.time.stride},
               {"warmup_periods", c.time.warmup_periods},
               {"period", c.time.period}};
  j["pod"] = {{"tol", c.pod.tol}, {"alpha", c.pod.alpha}};
  j["greedy"] = {{"n_max_triplets", c.greedy.n_max_triplets},
                 {"alpha_train", c.greedy.alpha_train},
                 {"index_mode", to_string(c.greedy.index_mode)},
                 {"n_period", c.greedy.n_period},
                 {"dual_norm_floor", c.greedy.dual_norm_floor},
                 {"reject_ratio", c.greedy.reject_ratio}};
  j["outputs"] = {{"wss_area1", area_json(c.outputs.wss_area1)},
                  {"wss_area2", area_json(c.outputs.wss_area2)}};
  j["paths"] = {{"workspace", c.workspace}};
  return j.dump(2);
}

}  // namespace rfsi
