#ifndef RFSI_SIGNALS_HPP
#define RFSI_SIGNALS_HPP

#include <string>

namespace rfsi
{

enum class Waveform
{
  Constant,
  Sine,
  Cardiac,
};

Waveform waveform_from_string(const std::string &name);
std::string to_string(Waveform w);

// Periodic scalar time signal: mean + amplitude * shape((t / period) + phase).
// shape is 0 for Constant, sin(2 pi s) for Sine, and a zero-mean,
// unit-peak smooth pulse for Cardiac.
struct SignalSpec
{
  Waveform kind = Waveform::Constant;
  double mean = 1.0;
  double amplitude = 0.0;
  double phase = 0.0;  // fraction of a period
  double period = 0.8;

  double operator()(double t) const;
};

// Normalised cardiac-like pulse on one period, s in [0, 1).
double cardiac_shape(double s);

}  // namespace rfsi

#endif  // RFSI_SIGNALS_HPP
