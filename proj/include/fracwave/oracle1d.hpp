#pragma once

#include <functional>

namespace fracwave {

// Scalar pressure profile p(t), nonnegative and compactly supported in
// [0, duration]; the bar is loaded at the left end with sigma(0, t) = -p(t),
// so a positive amplitude is a compressive pulse.
struct PulseProfile {
  std::function<double(double)> value;
  double duration = 0.0;
};

PulseProfile rectangular_pulse(double amplitude, double duration);
// Sharp front at full amplitude, then linear decay to zero.
PulseProfile decaying_triangle_pulse(double amplitude, double duration);
// Linear rise from zero to full amplitude, then sharp cutoff.
PulseProfile rising_triangle_pulse(double amplitude, double duration);
// Smooth bump amplitude * exp(-1/(width^2 - s^2)) with s = speed*t - shift,
// supported on |s| < width; matches the boundary pulse of the 2D solver.
PulseProfile bump_pulse(double amplitude, double width, double speed, double shift);

// Homogeneous bar of unit cross section: x in [0, length], left end loaded by
// the pulse, right end traction-free. After the pulse has been emitted the
// left end is traction-free as well, so the image sum below reflects at both
// ends with inverted stress.
struct Bar1DProblem {
  double length = 1.0;
  double c = 1.0;  // wave speed
  double Z = 1.0;  // impedance rho * c
  PulseProfile pulse;
};

struct State1D {
  double v = 0.0;
  double sigma = 0.0;
};

// d'Alembert image-sum solution; satisfies sigma(0,t) = -p(t) and
// sigma(length,t) = 0 exactly for every t.
State1D analytic_state(const Bar1DProblem& problem, double x, double t);

// 1/2 int rho v^2 + sigma^2/E dx with rho = Z/c and E = Z*c, by composite
// Gauss quadrature with the given number of panels.
double analytic_energy(const Bar1DProblem& problem, double t, int panels = 2048);

struct SpallResult {
  bool found = false;
  double position = 0.0;           // x coordinate of the first exceedance
  double distance_from_end = 0.0;  // length - position
  double time = 0.0;
};

// First point (in time) where the tensile stress exceeds sigma_c, located by a
// chronological space-time scan with nested window refinement. The scan
// resolution bounds the class of detectable exceedances: features briefer than
// roughly 1e-3 of the scan horizon are not sought.
SpallResult spall_location(const Bar1DProblem& problem, double sigma_c);

}  // namespace fracwave
