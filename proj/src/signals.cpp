#include "rfsi/signals.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "rfsi/types.hpp"

namespace rfsi
{

namespace
{

// Truncated Fourier series of a systolic peak followed by a dicrotic notch.
constexpr std::array<double, 4> kSin = {0.62, 0.21, -0.06, -0.04};
constexpr std::array<double, 4> kCos = {0.30, -0.22, -0.11, 0.03};

double raw_cardiac(double s)
{
  double v = 0.0;
  for (std::size_t k = 0; k < kSin.size(); ++k)
  {
    const double w = 2.0 * std::numbers::pi * static_cast<double>(k + 1) * s;
    v += kSin[k] * std::sin(w) + kCos[k] * std::cos(w);
  }
  return v;
}

double cardiac_peak()
{
  static const double peak = []
  {
    double m = 0.0;
    for (int i = 0; i < 4096; ++i)
      m = std::max(m, std::abs(raw_cardiac(i / 4096.0)));
    return m;
  }();
  return peak;
}

}  // namespace

Waveform waveform_from_string(const std::string &name)
{
  if (name == "constant")
    return Waveform::Constant;
  if (name == "sine")
    return Waveform::Sine;
  if (name == "cardiac")
    return Waveform::Cardiac;
  throw InvalidArgument("unknown waveform '" + name + "' (expected constant, sine or cardiac)");
}

std::string to_string(Waveform w)
{
  switch (w)
  {
    case Waveform::Constant:
      return "constant";
    case Waveform::Sine:
      return "sine";
    case Waveform::Cardiac:
      return "cardiac";
  }
  return "constant";
}

double cardiac_shape(double s) { return raw_cardiac(s) / cardiac_peak(); }

double SignalSpec::operator()(double t) const
{
  const double s = t / period + phase;
  switch (kind)
  {
    case Waveform::Constant:
      return mean;
    case Waveform::Sine:
      return mean + amplitude * std::sin(2.0 * std::numbers::pi * s);
    case Waveform::Cardiac:
      return mean + amplitude * cardiac_shape(s - std::floor(s));
  }
  return mean;
}

}  // namespace rfsi
