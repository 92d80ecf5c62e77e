#pragma once

// Spectra of compact self-adjoint operators and their regularized traces.
//
// An operator is described by its nonzero spectrum split into a positive and
// a negative part, each sorted by decreasing magnitude:
//
//   -n_1 <= -n_2 <= ... < 0 < ... <= p_2 <= p_1
//
// The regularized trace pairs the two sequences index by index,
//   Tr_r = sum_i (p_i - n_i),
// and the zeta trace is the limit s -> 1+ of sum_i (p_i^s - n_i^s).
// Only a finite truncation is ever stored; an optional geometric tail model
// bounds the magnitudes of the eigenvalues that were not stored.

#include <optional>
#include <span>
#include <vector>

#include "focalis/tolerances.hpp"

namespace focalis::spectral {

struct Eigenvalue {
  double value = 0.0;  // magnitude, > 0
  int mult = 1;
};

/// Eigenvalues beyond the truncation satisfy |lambda_i| <= scale * ratio^i
/// (1-based index with multiplicity). scale == 0 declares the operator to be
/// of finite rank: nothing beyond the stored entries.
struct TailModel {
  double ratio = 0.5;
  double scale = 0.0;

  double bound(long index) const;
  /// sum_{i > count} (scale * ratio^i)^power
  double remainder(long count, double power = 1.0) const;
};

class SpectralData {
 public:
  SpectralData() = default;
  /// Validates ordering and positivity; entries with value exactly 0 are dropped.
  SpectralData(std::vector<Eigenvalue> positives, std::vector<Eigenvalue> negatives,
               std::optional<TailModel> tail = std::nullopt);

  /// Builds a finite-rank spectrum (tail scale 0) from signed eigenvalues in
  /// any order; equal values are merged.
  static SpectralData finite(std::span<const double> eigenvalues);
  static SpectralData finite(std::span<const double> eigenvalues, std::span<const int> mults);

  const std::vector<Eigenvalue>& positives() const { return positives_; }
  const std::vector<Eigenvalue>& negatives() const { return negatives_; }
  const std::optional<TailModel>& tail() const { return tail_; }

  long positive_count() const;  // with multiplicity
  long negative_count() const;
  bool empty() const { return positives_.empty() && negatives_.empty(); }
  bool finite_rank() const { return tail_ && tail_->scale == 0.0; }

  /// Spectrum of -A.
  SpectralData negated() const;

 private:
  std::vector<Eigenvalue> positives_;
  std::vector<Eigenvalue> negatives_;
  std::optional<TailModel> tail_;
};

/// A trace value, or the verdict that the truncated data does not support one.
struct TraceResult {
  std::optional<double> value;  // nullopt: divergent
  double error = 0.0;           // estimate (or bound, with a tail model)

  bool divergent() const { return !value.has_value(); }
};

struct TraceOptions {
  double cauchy_window = Tolerances{}.cauchy_window;
  double cauchy_threshold = Tolerances{}.cauchy_threshold;
  /// Replace the plain partial sum by repeated Richardson extrapolation of the
  /// partial sums (only used when no tail model is present).
  bool accelerate = false;
};

TraceResult reg_trace(const SpectralData& spec, const TraceOptions& opts = {});

struct ZetaConfig {
  std::vector<double> exponents;  // strictly decreasing, all > 1, approaching 1
  int order = -1;                 // points used by the extrapolation; -1 = all
  double tolerance = Tolerances{}.zeta_tolerance;
  double cauchy_window = Tolerances{}.cauchy_window;
  double cauchy_threshold = Tolerances{}.cauchy_threshold;

  /// s_k = 1 + 2^-k, k = 1..levels.
  static ZetaConfig standard(int levels = 12);
};

TraceResult zeta_trace(const SpectralData& spec, const ZetaConfig& cfg = ZetaConfig::standard());

TraceResult trace_square(const SpectralData& spec, const TraceOptions& opts = {});

/// Both the regularized trace and the trace of the square exist.
bool is_regularizable(const SpectralData& spec, const TraceOptions& opts = {});

}  // namespace focalis::spectral
