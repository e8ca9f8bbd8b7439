#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lapnet/field.hpp"
#include "lapnet/heisenberg.hpp"

namespace lapnet {

struct DefectOptions {
  double tail_fraction = 0.1;    // tail = last 10% of the unknowns
  double tail_threshold = 0.05;  // a direction counts when its tail mass is below this
  double near_null = 1e-8;       // sigma_min / sigma_max gate of the rectangular system
  int shoot_steps = 64;
};

struct DefectCandidate {
  double tail_mass = 0.0;       // share of the unit-norm direction on the tail
  double decay_exponent = 0.0;  // p in |v(n)| ~ n^-p, from the block norms on [N/4,N/2) and [N/2,N]
  bool square_summable = false;
};

struct DefectWindow {
  std::size_t n_max = 0;
  std::size_t rows = 0;        // equations 0..n_max - b
  std::size_t kernel_dim = 0;  // unknowns minus rows
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  bool gate_ok = false;
  int count = 0;
  std::vector<DefectCandidate> candidates;  // ascending tail mass
};

/// Forward recursion v_0 = 1 for tridiagonal operators.
struct ShootingReport {
  std::vector<Complex> values;
  double growth_rate = 0.0;  // |v_last / v_prev|
  std::vector<double> truncated_energies;  // Re Σ_{n<N} conj(v_n) (M v)(n), N = 1, 2, ...
  bool monotone_growth = false;  // |v_n| never decreases
};

struct DefectReport {
  std::string model;
  Complex shift;
  std::string status;  // "ok" or "inconclusive"
  std::optional<int> estimated_count;
  std::vector<DefectWindow> windows;
  std::optional<ShootingReport> shooting;
  std::vector<std::string> notes;
  DefectOptions options;
};

/// Heuristic count of ℓ² solutions of (M* - shift) v = 0 on ℕ₀.
///
/// Rows 0..N-b of (M - shift I) act on unknowns 0..N; the b-dimensional
/// kernel is found by a banded LQ factorization of the row-equilibrated
/// system and classified by how much of each direction sits on the tail.
/// Runs at N = n_max and 2 n_max and reports "inconclusive" unless the two
/// counts agree and both systems pass the singular-value gate.
DefectReport defect_probe(const HalfLineBandedOperator& m, Complex shift,
                          const DefectOptions& options = {});

/// Probe of one window size only.
DefectWindow defect_window(const HalfLineBandedOperator& m, Complex shift, std::size_t n_max,
                           const DefectOptions& options = {});

ShootingReport shoot(const HalfLineBandedOperator& m, Complex shift, int steps);

struct DeficiencyIndices {
  DefectReport plus;   // shift +i
  DefectReport minus;  // shift -i
  std::optional<std::pair<int, int>> indices;
  std::string status;
};

DeficiencyIndices deficiency_probe_banded(const HalfLineBandedOperator& m,
                                          const DefectOptions& options = {});

}  // namespace lapnet
