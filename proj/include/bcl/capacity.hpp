#pragma once

// Closed-form minimum output entropies and energy-constrained classical capacities of the four
// channel families, the phase-space evaluation of the capacity bound, and plot-data tables.

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "bcl/channel.hpp"
#include "bcl/gaussian.hpp"
#include "bcl/thermal.hpp"

namespace bcl {

/// Bits per channel use at mean input photon number energy_E.
struct CapacityResult {
  ChannelFamily family;
  double energy_E = 0.0;
  double capacity_bits = 0.0;
  double min_output_entropy_bits = 0.0;
  /// Output entropy for the thermal input of mean photon number energy_E.
  double max_output_entropy_bits = 0.0;
};

/// Mean photon number of the (thermal) output for vacuum input.
inline double vacuum_output_photons(const ChannelFamily& family) {
  return std::visit(
      [](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ThermalLoss>) return (1.0 - f.eta) * f.N;
        else if constexpr (std::is_same_v<T, AdditiveNoise>) return f.n;
        else if constexpr (std::is_same_v<T, Amplifier>) return (f.kappa - 1.0) * (f.N + 1.0);
        else return f.kappa * (f.N + 1.0) - 1.0;
      },
      family.variant());
}

/// Mean photon number of the output for a thermal input of mean photon number E.
inline double thermal_output_photons(const ChannelFamily& family, double E) {
  return std::visit(
      [E](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ThermalLoss>) return f.eta * E + (1.0 - f.eta) * f.N;
        else if constexpr (std::is_same_v<T, AdditiveNoise>) return E + f.n;
        else if constexpr (std::is_same_v<T, Amplifier>) return f.kappa * E + (f.kappa - 1.0) * (f.N + 1.0);
        else return f.kappa * f.N + (f.kappa - 1.0) * (E + 1.0);
      },
      family.variant());
}

/// Minimum output entropy in bits (attained by the vacuum).
inline double min_output_entropy(const ChannelFamily& family) {
  return thermal_entropy(vacuum_output_photons(family));
}

inline CapacityResult classical_capacity(const ChannelFamily& family, double E) {
  if (!(E >= 0.0)) throw InvalidParameter("classical_capacity: energy must be >= 0");
  CapacityResult r{family, E, 0.0, min_output_entropy(family), 0.0};
  r.max_output_entropy_bits = thermal_entropy(thermal_output_photons(family, E));
  r.capacity_bits = r.max_output_entropy_bits - r.min_output_entropy_bits;
  return r;
}

/// S(Phi(thermal(E))) - S(Phi(vacuum)) evaluated through the covariance-matrix action.
inline double capacity_bound(const ChannelParams& params, double E) {
  require_physical(params, "capacity_bound");
  if (!(E >= 0.0)) throw InvalidParameter("capacity_bound: energy must be >= 0");
  return gaussian_entropy(apply_channel(params, thermal_state(E))) -
         gaussian_entropy(apply_channel(params, vacuum_state(1)));
}

// ---------------------------------------------------------------------------------------------
// Plot data

enum class PlotPanel { fig2a, fig2b, fig2c, fig2d };

inline std::string to_string(PlotPanel p) {
  switch (p) {
    case PlotPanel::fig2a: return "fig2a";
    case PlotPanel::fig2b: return "fig2b";
    case PlotPanel::fig2c: return "fig2c";
    case PlotPanel::fig2d: return "fig2d";
  }
  return "unknown";
}

inline PlotPanel plot_panel_from_string(const std::string& s) {
  if (s == "fig2a") return PlotPanel::fig2a;
  if (s == "fig2b") return PlotPanel::fig2b;
  if (s == "fig2c") return PlotPanel::fig2c;
  if (s == "fig2d") return PlotPanel::fig2d;
  throw InvalidGrid("unknown panel: " + s);
}

struct PlotGrid {
  /// Samples along the eta axis ([0, 1]) and the kappa axis ([1, kappa_max]). With the defaults
  /// every integer gain is a grid point.
  int points = 201;
  double kappa_max = 11.0;
  /// Energy constraint for panels a-c.
  double energy = 10.0;
  /// Panel d: noise axis [0, noise_max] with noise_points samples, and the energies drawn.
  int noise_points = 101;
  double noise_max = 10.0;
  std::vector<double> energies{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20};
};

struct PlotRow {
  std::string panel;
  std::string series;
  double x = 0.0;
  double value = 0.0;
};

namespace detail {

inline std::vector<double> linspace(double lo, double hi, int points) {
  std::vector<double> xs(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
  return xs;
}

inline std::string series_label(const std::string& prefix, const char* key, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s:%s=%g", prefix.c_str(), key, value);
  return buf;
}

}  // namespace detail

inline void validate(const PlotGrid& grid) {
  if (grid.points < 2 || grid.noise_points < 2) throw InvalidGrid("plot grid needs at least 2 points per axis");
  if (!(grid.kappa_max > 1.0)) throw InvalidGrid("plot grid kappa_max must exceed 1");
  if (!(grid.energy >= 0.0) || !(grid.noise_max > 0.0)) throw InvalidGrid("plot grid ranges must be positive");
  for (double e : grid.energies) {
    if (!(e >= 0.0)) throw InvalidGrid("plot grid energies must be >= 0");
  }
}

/// Rows of one panel, sorted by (series, x).
inline std::vector<PlotRow> plot_data(PlotPanel panel, const PlotGrid& grid = {}) {
  validate(grid);
  const std::string name = to_string(panel);
  const auto etas = detail::linspace(0.0, 1.0, grid.points);
  const auto kappas = detail::linspace(1.0, grid.kappa_max, grid.points);
  std::vector<PlotRow> rows;
  auto add = [&](const std::string& series, double x, double v) { rows.push_back({name, series, x, v}); };

  switch (panel) {
    case PlotPanel::fig2a:
      for (double N : {0.0, 1.0, 5.0, 10.0, 20.0, 40.0, 100.0, 200.0}) {
        for (double eta : etas) {
          add(detail::series_label("thermal", "N", N), eta,
              classical_capacity(ChannelFamily::thermal(eta, N), grid.energy).capacity_bits);
        }
        for (double kappa : kappas) {
          add(detail::series_label("amp", "N", N), kappa,
              classical_capacity(ChannelFamily::amplifier(kappa, N), grid.energy).capacity_bits);
        }
      }
      break;
    case PlotPanel::fig2b:
      for (double N : {0.0, 1.0, 5.0, 10.0}) {
        for (double kappa : kappas) {
          add(detail::series_label("amp", "N", N), kappa,
              classical_capacity(ChannelFamily::amplifier(kappa, N), grid.energy).capacity_bits);
          add(detail::series_label("contra-amp", "N", N), kappa,
              classical_capacity(ChannelFamily::contra_amplifier(kappa, N), grid.energy).capacity_bits);
        }
      }
      break;
    case PlotPanel::fig2c:
      for (double N : {0.0, 2.0, 5.0, 10.0, 20.0, 40.0}) {
        for (double eta : etas) {
          add(detail::series_label("smin-thermal", "N", N), eta, min_output_entropy(ChannelFamily::thermal(eta, N)));
        }
        for (double kappa : kappas) {
          add(detail::series_label("smin-amp", "N", N), kappa, min_output_entropy(ChannelFamily::amplifier(kappa, N)));
          add(detail::series_label("smin-contra-amp", "N", N), kappa,
              min_output_entropy(ChannelFamily::contra_amplifier(kappa, N)));
        }
      }
      break;
    case PlotPanel::fig2d: {
      const auto noises = detail::linspace(0.0, grid.noise_max, grid.noise_points);
      for (double E : grid.energies) {
        for (double n : noises) {
          add(detail::series_label("addnoise", "E", E), n,
              classical_capacity(ChannelFamily::additive_noise(n), E).capacity_bits);
        }
      }
      for (double n : noises) add("smin-addnoise", n, min_output_entropy(ChannelFamily::additive_noise(n)));
      break;
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const PlotRow& a, const PlotRow& b) {
    return std::tie(a.series, a.x) < std::tie(b.series, b.x);
  });
  return rows;
}

/// 17 significant digits, enough to round-trip an IEEE-754 double.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// CSV with header `panel,series,x,value`, LF line endings.
inline void write_csv(std::ostream& os, const std::vector<PlotRow>& rows) {
  os << "panel,series,x,value\n";
  for (const auto& r : rows) {
    os << r.panel << ',' << r.series << ',' << format_double(r.x) << ',' << format_double(r.value) << '\n';
  }
}

}  // namespace bcl
