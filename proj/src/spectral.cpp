#include "focalis/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "focalis/errors.hpp"

namespace focalis::spectral {
namespace {

// Neumaier summation; symmetric under negation of every input.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

void validate_side(std::vector<Eigenvalue>& side, const std::optional<TailModel>& tail, const char* name) {
  std::erase_if(side, [](const Eigenvalue& e) { return e.value == 0.0; });
  long index = 1;
  for (std::size_t i = 0; i < side.size(); ++i) {
    const auto& e = side[i];
    if (!std::isfinite(e.value) || e.value < 0.0) {
      throw ValidationError(std::string(name) + ": eigenvalue magnitudes must be finite and > 0");
    }
    if (e.mult < 1) throw ValidationError(std::string(name) + ": multiplicities must be >= 1");
    if (i > 0 && e.value > side[i - 1].value) {
      throw ValidationError(std::string(name) + ": eigenvalues must be sorted non-increasing");
    }
    if (tail && e.value < tail->bound(index)) {
      throw ValidationError(std::string(name) + ": stored eigenvalue below the tail bound at index " +
                            std::to_string(index));
    }
    index += e.mult;
  }
}

long count_of(const std::vector<Eigenvalue>& side) {
  long n = 0;
  for (const auto& e : side) n += e.mult;
  return n;
}

// The index-paired sequence t_i = f(p_i) + g(n_i), stored run-length encoded.
// Missing entries contribute f(0) = g(0) = 0.
class PairedSeries {
 public:
  template <class F, class G>
  PairedSeries(const SpectralData& spec, F f, G g) {
    const auto& pos = spec.positives();
    const auto& neg = spec.negatives();
    std::size_t ip = 0, in = 0;
    int used_p = 0, used_n = 0;
    long start = 0;
    CompensatedSum acc;
    while (ip < pos.size() || in < neg.size()) {
      const long left_p = ip < pos.size() ? pos[ip].mult - used_p : 0;
      const long left_n = in < neg.size() ? neg[in].mult - used_n : 0;
      long len;
      if (left_p > 0 && left_n > 0) {
        len = std::min(left_p, left_n);
      } else {
        len = std::max(left_p, left_n);
      }
      const double term = (left_p > 0 ? f(pos[ip].value) : 0.0) + (left_n > 0 ? g(neg[in].value) : 0.0);
      segments_.push_back({start, len, term, acc.value()});
      for (long k = 0; k < len; ++k) acc.add(term);
      start += len;
      if (left_p > 0) {
        used_p += static_cast<int>(len);
        if (used_p == pos[ip].mult) {
          ++ip;
          used_p = 0;
        }
      }
      if (left_n > 0) {
        used_n += static_cast<int>(len);
        if (used_n == neg[in].mult) {
          ++in;
          used_n = 0;
        }
      }
    }
    length_ = start;
    total_ = acc.value();
  }

  long length() const { return length_; }
  double total() const { return total_; }

  /// Partial sum of the first k terms.
  double partial(long k) const {
    if (k <= 0) return 0.0;
    if (k >= length_) return total_;
    auto it = std::upper_bound(segments_.begin(), segments_.end(), k,
                               [](long v, const Segment& s) { return v < s.start; });
    --it;
    return it->prefix + static_cast<double>(k - it->start) * it->term;
  }

  /// max - min of the partial sums S_k for k in [from, length].
  double spread(long from) const {
    double lo = partial(from), hi = lo;
    for (const auto& s : segments_) {
      for (long k : {s.start, s.start + s.length}) {
        if (k < from) continue;
        const double v = partial(k);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    const double last = partial(length_);
    return std::max(hi, last) - std::min(lo, last);
  }

 private:
  struct Segment {
    long start;
    long length;
    double term;
    double prefix;
  };
  std::vector<Segment> segments_;
  long length_ = 0;
  double total_ = 0.0;
};

bool passes_cauchy(const PairedSeries& series, double window, double threshold) {
  const long n = series.length();
  if (n == 0) return true;
  const long w = std::max<long>(1, static_cast<long>(std::ceil(window * static_cast<double>(n))));
  const double spread = series.spread(std::max<long>(0, n - w));
  return spread <= threshold * std::max(1.0, std::abs(series.total()));
}

// Polynomial extrapolation to x = 0 through (x_i, y_i); returns the value and
// the last increment of the tableau diagonal.
std::pair<double, double> neville_at_zero(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> p = y;
  double previous = y.back();
  double increment = std::abs(y.back() - (n > 1 ? y[n - 2] : y.back()));
  for (std::size_t m = 1; m < n; ++m) {
    for (std::size_t i = n - 1; i >= m; --i) {
      p[i] = (x[i] * p[i - 1] - x[i - m] * p[i]) / (x[i] - x[i - m]);
      if (i == m) break;
    }
    increment = std::abs(p[n - 1] - previous);
    previous = p[n - 1];
  }
  return {p[n - 1], increment};
}

// Richardson-style extrapolation of S_k in 1/k through k = N, N/2, N/4, ...
std::pair<double, double> extrapolate_partial_sums(const PairedSeries& series) {
  const long n = series.length();
  std::vector<double> x, y;
  for (long k = n, level = 0; k >= 8 && level < 5; k /= 2, ++level) {
    x.insert(x.begin(), 1.0 / static_cast<double>(k));
    y.insert(y.begin(), series.partial(k));
  }
  if (x.size() < 2) return {series.total(), 0.0};
  return neville_at_zero(x, y);
}

// Forward-error bound of recursive summation, n * eps * sum |terms|.
double rounding_bound(const SpectralData& spec, double power) {
  double abs_sum = 0.0;
  for (const auto* side : {&spec.positives(), &spec.negatives()})
    for (const auto& e : *side) abs_sum += e.mult * std::pow(e.value, power);
  const auto n = static_cast<double>(spec.positive_count() + spec.negative_count());
  return n * std::numeric_limits<double>::epsilon() * abs_sum;
}

TraceResult sum_with_policy(const SpectralData& spec, const PairedSeries& series, double power,
                            const TraceOptions& opts) {
  if (const auto& tail = spec.tail()) {
    const double bound = tail->remainder(spec.positive_count(), power) + tail->remainder(spec.negative_count(), power);
    return {series.total(), bound + rounding_bound(spec, power)};
  }
  if (!passes_cauchy(series, opts.cauchy_window, opts.cauchy_threshold)) return {std::nullopt, 0.0};
  const auto [extrapolated, increment] = extrapolate_partial_sums(series);
  const double estimate = std::abs(extrapolated - series.total());
  if (opts.accelerate) return {extrapolated, increment};
  return {series.total(), estimate};
}

}  // namespace

double TailModel::bound(long index) const { return scale * std::pow(ratio, static_cast<double>(index)); }

double TailModel::remainder(long count, double power) const {
  if (scale == 0.0) return 0.0;
  const double rp = std::pow(ratio, power);
  return std::pow(scale, power) * std::pow(rp, static_cast<double>(count + 1)) / (1.0 - rp);
}

SpectralData::SpectralData(std::vector<Eigenvalue> positives, std::vector<Eigenvalue> negatives,
                           std::optional<TailModel> tail)
    : positives_(std::move(positives)), negatives_(std::move(negatives)), tail_(tail) {
  if (tail_) {
    if (!(tail_->ratio > 0.0 && tail_->ratio < 1.0)) throw ValidationError("tail ratio must lie in (0,1)");
    if (!(tail_->scale >= 0.0) || !std::isfinite(tail_->scale)) throw ValidationError("tail scale must be >= 0");
  }
  validate_side(positives_, tail_, "positives");
  validate_side(negatives_, tail_, "negatives");
}

SpectralData SpectralData::finite(std::span<const double> eigenvalues) {
  std::vector<int> ones(eigenvalues.size(), 1);
  return finite(eigenvalues, ones);
}

SpectralData SpectralData::finite(std::span<const double> eigenvalues, std::span<const int> mults) {
  if (eigenvalues.size() != mults.size()) throw ValidationError("eigenvalue/multiplicity length mismatch");
  std::map<double, int, std::greater<>> pos, neg;
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    const double v = eigenvalues[i];
    if (!std::isfinite(v)) throw ValidationError("eigenvalues must be finite");
    if (mults[i] < 1) throw ValidationError("multiplicities must be >= 1");
    if (v > 0.0) pos[v] += mults[i];
    if (v < 0.0) neg[-v] += mults[i];
  }
  std::vector<Eigenvalue> p, n;
  for (const auto& [v, m] : pos) p.push_back({v, m});
  for (const auto& [v, m] : neg) n.push_back({v, m});
  return SpectralData(std::move(p), std::move(n), TailModel{0.5, 0.0});
}

long SpectralData::positive_count() const { return count_of(positives_); }
long SpectralData::negative_count() const { return count_of(negatives_); }

SpectralData SpectralData::negated() const { return SpectralData(negatives_, positives_, tail_); }

TraceResult reg_trace(const SpectralData& spec, const TraceOptions& opts) {
  const PairedSeries series(spec, [](double p) { return p; }, [](double n) { return -n; });
  return sum_with_policy(spec, series, 1.0, opts);
}

TraceResult trace_square(const SpectralData& spec, const TraceOptions& opts) {
  const PairedSeries series(spec, [](double p) { return p * p; }, [](double n) { return n * n; });
  return sum_with_policy(spec, series, 2.0, opts);
}

bool is_regularizable(const SpectralData& spec, const TraceOptions& opts) {
  return !reg_trace(spec, opts).divergent() && !trace_square(spec, opts).divergent();
}

ZetaConfig ZetaConfig::standard(int levels) {
  ZetaConfig cfg;
  for (int k = 1; k <= levels; ++k) cfg.exponents.push_back(1.0 + std::ldexp(1.0, -k));
  return cfg;
}

TraceResult zeta_trace(const SpectralData& spec, const ZetaConfig& cfg) {
  const auto& s = cfg.exponents;
  if (s.size() < 2) throw ConfigError("zeta exponent grid needs at least two points");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!std::isfinite(s[i]) || s[i] <= 1.0) throw ConfigError("zeta exponents must be finite and > 1");
    if (i > 0 && s[i] >= s[i - 1]) throw ConfigError("zeta exponents must be strictly decreasing");
  }
  if (s.back() - 1.0 > 0.1) throw ConfigError("zeta exponent grid must approach 1 (last s - 1 <= 0.1)");
  const int used = cfg.order < 0 ? static_cast<int>(s.size()) : cfg.order;
  if (used < 2 || used > static_cast<int>(s.size())) throw ConfigError("zeta extrapolation order out of range");
  if (spec.empty()) return {0.0, 0.0};

  const auto power_sum = [&](double exponent) {
    CompensatedSum acc;
    for (const auto& e : spec.positives()) acc.add(e.mult * std::pow(e.value, exponent));
    for (const auto& e : spec.negatives()) acc.add(-e.mult * std::pow(e.value, exponent));
    return acc.value();
  };

  if (!spec.tail()) {
    const double s_min = s.back();
    const PairedSeries series(
        spec, [s_min](double p) { return std::pow(p, s_min); }, [s_min](double n) { return -std::pow(n, s_min); });
    if (!passes_cauchy(series, cfg.cauchy_window, cfg.cauchy_threshold)) return {std::nullopt, 0.0};
  }

  std::vector<double> x, y;
  double tail_bound = 0.0;
  for (std::size_t i = s.size() - used; i < s.size(); ++i) {
    x.push_back(s[i] - 1.0);
    y.push_back(power_sum(s[i]));
  }
  if (const auto& tail = spec.tail()) {
    tail_bound = tail->remainder(spec.positive_count(), 1.0) + tail->remainder(spec.negative_count(), 1.0);
  }
  const auto [value, increment] = neville_at_zero(x, y);
  if (!std::isfinite(value) || increment > cfg.tolerance * std::max(1.0, std::abs(value))) {
    return {std::nullopt, increment};
  }
  return {value, increment + tail_bound + rounding_bound(spec, 1.0)};
}

}  // namespace focalis::spectral
