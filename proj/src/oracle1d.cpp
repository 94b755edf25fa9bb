#include "fracwave/oracle1d.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fracwave/geometry.hpp"

namespace fracwave {

PulseProfile rectangular_pulse(double amplitude, double duration) {
  if (!(duration > 0.0)) throw std::invalid_argument("pulse duration must be positive");
  return {[amplitude, duration](double t) {
            return (t >= 0.0 && t <= duration) ? amplitude : 0.0;
          },
          duration};
}

PulseProfile decaying_triangle_pulse(double amplitude, double duration) {
  if (!(duration > 0.0)) throw std::invalid_argument("pulse duration must be positive");
  return {[amplitude, duration](double t) {
            return (t >= 0.0 && t <= duration) ? amplitude * (1.0 - t / duration) : 0.0;
          },
          duration};
}

PulseProfile rising_triangle_pulse(double amplitude, double duration) {
  if (!(duration > 0.0)) throw std::invalid_argument("pulse duration must be positive");
  return {[amplitude, duration](double t) {
            return (t >= 0.0 && t <= duration) ? amplitude * (t / duration) : 0.0;
          },
          duration};
}

PulseProfile bump_pulse(double amplitude, double width, double speed, double shift) {
  if (!(width > 0.0) || !(speed > 0.0)) throw std::invalid_argument("bump pulse: width and speed must be positive");
  const double duration = (shift + width) / speed;
  return {[amplitude, width, speed, shift](double t) {
            const double s = speed * t - shift;
            const double d = width * width - s * s;
            if (d <= 0.0 || t < 0.0) return 0.0;
            return amplitude * std::exp(-1.0 / d);
          },
          duration};
}

State1D analytic_state(const Bar1DProblem& problem, double x, double t) {
  State1D st;
  if (t <= 0.0) return st;
  const double L = problem.length;
  const double c = problem.c;
  const auto& p = problem.pulse.value;
  const double dur = problem.pulse.duration;
  for (int m = 0;; ++m) {
    const double t_right = t - (2.0 * m * L + x) / c;        // m-th right-going image
    const double t_left = t - (2.0 * (m + 1) * L - x) / c;   // its free-end reflection
    if (t_right < 0.0) break;  // later images lie even further in the future
    const double pr = (t_right <= dur) ? p(t_right) : 0.0;
    const double pl = (t_left >= 0.0 && t_left <= dur) ? p(t_left) : 0.0;
    st.sigma += -pr + pl;
    st.v += (pr + pl) / problem.Z;
  }
  return st;
}

double analytic_energy(const Bar1DProblem& problem, double t, int panels) {
  if (panels < 1) throw std::invalid_argument("analytic_energy: panels must be >= 1");
  const QuadRule1D rule = gauss_legendre(4);
  const double rho = problem.Z / problem.c;
  const double emod = problem.Z * problem.c;
  const double h = problem.length / panels;
  double e = 0.0;
  for (int i = 0; i < panels; ++i) {
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double x = (i + rule.points[q]) * h;
      const State1D st = analytic_state(problem, x, t);
      e += rule.weights[q] * h * (rho * st.v * st.v + st.sigma * st.sigma / emod);
    }
  }
  return 0.5 * e;
}

namespace {

// Largest tensile stress over an x grid; also reports the argmax.
double max_tension(const Bar1DProblem& pb, double t, double x_lo, double x_hi, int n,
                   double* argmax) {
  double best = -1e300;
  double best_x = x_lo;
  for (int i = 0; i <= n; ++i) {
    const double x = x_lo + (x_hi - x_lo) * i / n;
    const double s = analytic_state(pb, x, t).sigma;
    if (s > best) {
      best = s;
      best_x = x;
    }
  }
  if (argmax) *argmax = best_x;
  return best;
}

}  // namespace

SpallResult spall_location(const Bar1DProblem& problem, double sigma_c) {
  SpallResult res;
  const double L = problem.length;
  const double t_max = 3.0 * L / problem.c + problem.pulse.duration;
  // Chronological coarse scan, then two nested refinements of the first-hit
  // time window at increasing spatial resolution.
  const int nt0 = 2000;
  double t_lo = 0.0, t_hit = -1.0;
  for (int k = 1; k <= nt0; ++k) {
    const double t = t_max * k / nt0;
    if (max_tension(problem, t, 0.0, L, 1200, nullptr) > sigma_c) {
      t_lo = t_max * (k - 1) / nt0;
      t_hit = t;
      break;
    }
  }
  if (t_hit < 0.0) return res;  // never exceeded: no spall
  for (int round = 0; round < 2; ++round) {
    const int nt = 160;
    const int nx = 4000;
    double new_lo = t_lo, new_hit = t_hit;
    for (int k = 1; k <= nt; ++k) {
      const double t = t_lo + (t_hit - t_lo) * k / nt;
      if (max_tension(problem, t, 0.0, L, nx, nullptr) > sigma_c) {
        new_lo = t_lo + (t_hit - t_lo) * (k - 1) / nt;
        new_hit = t;
        break;
      }
    }
    t_lo = new_lo;
    t_hit = new_hit;
  }
  double x_coarse = 0.0;
  max_tension(problem, t_hit, 0.0, L, 8000, &x_coarse);
  const double dx = L / 8000.0;
  double x_best = x_coarse;
  max_tension(problem, t_hit, std::max(0.0, x_coarse - 2.0 * dx),
              std::min(L, x_coarse + 2.0 * dx), 4000, &x_best);
  res.found = true;
  res.position = x_best;
  res.distance_from_end = L - x_best;
  res.time = t_hit;
  return res;
}

}  // namespace fracwave
