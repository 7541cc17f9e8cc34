#ifndef RFSI_CONFIG_HPP
#define RFSI_CONFIG_HPP

#include <string>

#include "rfsi/fem.hpp"
#include "rfsi/greedy.hpp"
#include "rfsi/hifi.hpp"
#include "rfsi/mesh.hpp"
#include "rfsi/metrics.hpp"
#include "rfsi/signals.hpp"

namespace rfsi
{

struct MeshConfig
{
  double length = 2.5;  // cm
  double height = 0.5;  // cm
  int nx = 20;
  int ny = 6;
};

struct SignalsConfig
{
  double inlet_peak_velocity = 8.0;  // cm/s, Poiseuille peak
  double outlet_pressure = 30.0;     // dyn/cm^2, traction -P n on the outlet
  SignalSpec sigma1{Waveform::Cardiac, 1.0, 0.7, 0.0, 0.8};
  SignalSpec sigma2{Waveform::Cardiac, 1.0, 0.5, 0.0, 0.8};
};

struct TimeConfig
{
  double dt = 0.002;
  int n_steps = 400;
  int stride = 5;
  double warmup_periods = 1.0;
  double period = 0.8;
};

struct PodConfig
{
  double tol = 1e-4;
  double alpha = 0.0;  // snapshot set used for the basis
};

struct GreedyConfig
{
  int n_max_triplets = 4;
  double alpha_train = 0.2;
  IndexMode index_mode = IndexMode::SingleRun;
  int n_period = 5;
  double dual_norm_floor = 0.0;
  double reject_ratio = 1e-10;
};

struct OutputsConfig
{
  WallArea wss_area1{WallSide::Bottom, 0.8, 1.7};
  WallArea wss_area2{WallSide::Top, 0.8, 1.7};
};

struct RunConfig
{
  MeshConfig mesh;
  PhysicalParams physics;
  SignalsConfig signals;
  TimeConfig time;
  PodConfig pod;
  GreedyConfig greedy;
  OutputsConfig outputs;
  std::string workspace = "workspace";

  void validate() const;

  // Physics block with the time step taken from the time block.
  PhysicalParams physical_params() const;
  Mesh make_mesh() const;
  BoundaryData boundary_data() const;
  RunProtocol protocol() const;
  EnrichmentConfig enrichment(const SnapshotSet *snapshots) const;
};

// Parse and validate; unknown keys and wrong types raise ConfigError.
RunConfig parse_config(const std::string &json_text);
RunConfig load_config(const std::string &path);

// Canonical JSON of every field (defaults included), stable across runs.
std::string config_to_json(const RunConfig &config);

WallSide wall_side_from_string(const std::string &s);
std::string to_string(WallSide s);

}  // namespace rfsi

#endif  // RFSI_CONFIG_HPP
