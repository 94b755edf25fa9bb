#pragma once

#include <vector>

#include "fracwave/config.hpp"
#include "fracwave/oracle1d.hpp"

namespace fracwave {

// Verification of the 2D solver against the analytic 1D bar: the strip
// configuration (rectangle, lambda = 0, left end loaded, right end free)
// propagates an exact 1D state, so errors measure the discretization alone.

struct ConvergenceRow {
  int level = 0;
  double h = 0.0;
  double dt = 0.0;
  long steps = 0;
  double error_l2 = 0.0;       // space-time L2 error of the stress tensor
  double free_end_max = 0.0;   // max |sigma_xx| on the free end face over the run
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  std::vector<double> observed_orders;  // log2 error ratios between levels
  double pulse_peak = 0.0;              // max |p| of the driving pressure
};

// Runs the strip configuration on each level with dt scaled proportionally to
// h and compares against the image-sum solution. Requires a rectangle
// geometry, lambda = 0, a left-end pulse and no phase field.
ConvergenceStudy convergence_study(const RunConfig& base, const std::vector<int>& levels);

// The analytic problem matching a strip configuration.
Bar1DProblem strip_problem(const RunConfig& config);

struct SpallComparison {
  SpallResult oracle;
  bool simulated_found = false;
  double simulated_position = 0.0;  // mean x1 of the first cracked vertices
  double simulated_distance_from_end = 0.0;
  double simulated_time = 0.0;
  double position_error = 0.0;
};

// Runs the strip with the phase field enabled until the first node cracks and
// compares the crack location and time with the analytic spall scan.
SpallComparison spall_comparison(const RunConfig& config);

struct SpeedEstimate {
  double speed = 0.0;
  double lag = 0.0;  // seconds between the two stations
  double station_a = 0.0;
  double station_b = 0.0;
  double arrival_a = 0.0;  // threshold crossing times of the pulse front
  double arrival_b = 0.0;
};

// Front speed of the pulse measured between two stations: each station
// records |sigma_xx| mid-height over time, normalized by its own peak; the
// onset is the threshold crossing of the normalized signal, and the lag is the
// normalized cross-correlation alignment of the leading flank [onset,
// onset+window], refined by parabolic interpolation. Restricting the template
// to the leading flank tracks the fastest (compressional) characteristic
// rather than the slower dispersive guided mode, so on a strip tall enough to
// keep the early flank free of lateral-surface corrections the estimate
// recovers the plane-strain P speed.
SpeedEstimate estimate_front_speed(const RunConfig& config, double station_a, double station_b,
                                   double threshold = 0.02, double window = 0.03);

}  // namespace fracwave
