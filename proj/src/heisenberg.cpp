#include "lapnet/heisenberg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace lapnet {

HalfLineBandedOperator::HalfLineBandedOperator(std::string name, RowRule rule, int bandwidth,
                                               bool hermitian, std::size_t n_max,
                                               LogScale log_scale)
    : name_(std::move(name)),
      rule_(std::move(rule)),
      bandwidth_(bandwidth),
      hermitian_(hermitian),
      n_max_(n_max),
      log_scale_(std::move(log_scale)) {
  if (bandwidth_ < 0) throw std::invalid_argument("negative bandwidth");
}

HalfLineBandedOperator HalfLineBandedOperator::with_n_max(std::size_t n_max) const {
  auto out = *this;
  out.n_max_ = n_max;
  return out;
}

HalfLineBandedOperator HalfLineBandedOperator::with_name(std::string name) const {
  auto out = *this;
  out.name_ = std::move(name);
  return out;
}

HalfLineBandedOperator HalfLineBandedOperator::with_hermitian(bool hermitian) const {
  auto out = *this;
  out.hermitian_ = hermitian;
  return out;
}

double HalfLineBandedOperator::log_row_scale(std::int64_t n) const {
  return log_scale_ ? log_scale_(n) : 0.0;
}

std::vector<BandEntry> HalfLineBandedOperator::scaled_row(std::int64_t n) const {
  std::vector<BandEntry> raw = rule_(n);
  std::map<std::int64_t, Complex> merged;
  for (const auto& e : raw) {
    if (std::abs(e.offset) > bandwidth_) {
      throw std::logic_error(name_ + ": row rule exceeds its bandwidth");
    }
    if (n + e.offset >= 0) merged[e.offset] += e.value;
  }
  std::vector<BandEntry> out;
  for (const auto& [o, v] : merged) {
    if (v != Complex{}) out.push_back({o, v});
  }
  return out;
}

std::vector<BandEntry> HalfLineBandedOperator::row(std::int64_t n) const {
  auto out = scaled_row(n);
  const double ls = log_row_scale(n);
  if (ls != 0.0) {
    const double s = std::exp(ls);
    for (auto& e : out) e.value *= s;
  }
  return out;
}

Complex HalfLineBandedOperator::entry(std::int64_t n, std::int64_t m) const {
  for (const auto& e : row(n)) {
    if (n + e.offset == m) return e.value;
  }
  return {};
}

ComplexMatrix HalfLineBandedOperator::section() const {
  const std::size_t size = n_max_ + 1;
  ComplexMatrix m(size, size);
  for (std::size_t n = 0; n < size; ++n) {
    for (const auto& e : row(static_cast<std::int64_t>(n))) {
      const std::int64_t c = static_cast<std::int64_t>(n) + e.offset;
      if (c <= static_cast<std::int64_t>(n_max_)) m(n, static_cast<std::size_t>(c)) = e.value;
    }
  }
  return m;
}

int HalfLineBandedOperator::measured_bandwidth() const {
  int b = 0;
  for (std::size_t n = 0; n <= n_max_; ++n) {
    auto r = row(static_cast<std::int64_t>(n));
    double top = 0.0;
    for (const auto& e : r) top = std::max(top, std::abs(e.value));
    for (const auto& e : r) {
      const std::int64_t c = static_cast<std::int64_t>(n) + e.offset;
      if (c > static_cast<std::int64_t>(n_max_)) continue;
      if (std::abs(e.value) > 1e-14 * top) b = std::max(b, static_cast<int>(std::abs(e.offset)));
    }
  }
  return b;
}

std::size_t HalfLineBandedOperator::first_truncated_row() const {
  const auto b = static_cast<std::size_t>(bandwidth_);
  return n_max_ + 1 > b ? n_max_ + 1 - b : 0;
}

double HalfLineBandedOperator::interior_hermitian_deviation() const {
  double dev = 0.0;
  const std::size_t stop = first_truncated_row();
  for (std::size_t n = 0; n < stop; ++n) {
    const auto nn = static_cast<std::int64_t>(n);
    for (const auto& e : row(nn)) {
      dev = std::max(dev, std::abs(e.value - std::conj(entry(nn + e.offset, nn))));
    }
  }
  return dev;
}

std::vector<Complex> HalfLineBandedOperator::apply(std::span<const Complex> v) const {
  std::vector<Complex> out(n_max_ + 1);
  for (std::size_t n = 0; n <= n_max_; ++n) {
    Complex s{};
    for (const auto& e : row(static_cast<std::int64_t>(n))) {
      const std::int64_t c = static_cast<std::int64_t>(n) + e.offset;
      if (c < static_cast<std::int64_t>(v.size())) s += e.value * v[static_cast<std::size_t>(c)];
    }
    out[n] = s;
  }
  return out;
}

HalfLineBandedOperator HalfLineBandedOperator::adjoint() const {
  auto self = *this;
  auto rule = [self](std::int64_t n) {
    std::vector<BandEntry> out;
    for (std::int64_t o = -self.bandwidth_; o <= self.bandwidth_; ++o) {
      if (n + o < 0) continue;
      Complex v = std::conj(self.entry(n + o, n));
      if (v != Complex{}) out.push_back({o, v});
    }
    return out;
  };
  return HalfLineBandedOperator(name_ + "*", rule, bandwidth_, hermitian_, n_max_);
}

HalfLineBandedOperator banded_multiply(const HalfLineBandedOperator& a,
                                       const HalfLineBandedOperator& b) {
  auto rule = [a, b](std::int64_t n) {
    std::map<std::int64_t, Complex> acc;
    for (const auto& ea : a.row(n)) {
      for (const auto& eb : b.row(n + ea.offset)) acc[ea.offset + eb.offset] += ea.value * eb.value;
    }
    std::vector<BandEntry> out;
    for (const auto& [o, v] : acc) out.push_back({o, v});
    return out;
  };
  return HalfLineBandedOperator("(" + a.name() + ")(" + b.name() + ")", rule,
                                a.bandwidth() + b.bandwidth(), false,
                                std::min(a.n_max(), b.n_max()));
}

HalfLineBandedOperator banded_add(const HalfLineBandedOperator& a, const HalfLineBandedOperator& b,
                                  Complex scale_b) {
  auto rule = [a, b, scale_b](std::int64_t n) {
    std::vector<BandEntry> out = a.row(n);
    for (auto e : b.row(n)) {
      e.value *= scale_b;
      out.push_back(e);
    }
    return out;
  };
  return HalfLineBandedOperator(a.name() + (scale_b == Complex(-1.0) ? " - " : " + ") + b.name(),
                                rule, std::max(a.bandwidth(), b.bandwidth()),
                                a.hermitian() && b.hermitian() && scale_b.imag() == 0.0,
                                std::min(a.n_max(), b.n_max()));
}

HalfLineBandedOperator build_P(std::size_t n_max) {
  if (n_max < 2) throw std::invalid_argument("P needs n_max >= 2");
  auto rule = [](std::int64_t n) {
    std::vector<BandEntry> out;
    if (n > 0) out.push_back({-1, std::sqrt(static_cast<double>(n)) / 2.0});
    out.push_back({1, std::sqrt(static_cast<double>(n + 1)) / 2.0});
    return out;
  };
  return HalfLineBandedOperator("P", rule, 1, true, n_max);
}

HalfLineBandedOperator build_Q(std::size_t n_max) {
  if (n_max < 2) throw std::invalid_argument("Q needs n_max >= 2");
  auto rule = [](std::int64_t n) {
    std::vector<BandEntry> out;
    if (n > 0) out.push_back({-1, Complex(0.0, -std::sqrt(static_cast<double>(n)) / 2.0)});
    out.push_back({1, Complex(0.0, std::sqrt(static_cast<double>(n + 1)) / 2.0)});
    return out;
  };
  return HalfLineBandedOperator("Q", rule, 1, true, n_max);
}

HalfLineBandedOperator build_QPQ(std::size_t n_max) {
  auto q = build_Q(n_max);
  return banded_multiply(q, banded_multiply(build_P(n_max), q)).with_name("QPQ").with_hermitian(true);
}

HalfLineBandedOperator build_hamiltonian(std::size_t n_max) {
  auto p = build_P(n_max);
  auto q = build_Q(n_max);
  auto q2 = banded_multiply(q, q);
  return banded_add(banded_multiply(p, p), banded_multiply(q2, q2), -1.0)
      .with_name("P^2 - Q^4")
      .with_hermitian(true);
}

HalfLineBandedOperator chain_laplacian_operator(const GraphSystem& g, std::size_t n_max) {
  if (g.kind() != GraphKind::half_line) {
    throw std::invalid_argument("chain operator needs a half-line chain");
  }
  const WeightRule rule = g.weight_rule();
  const double lambda = g.lambda();
  // c(n-1, n) / c(n, n+1), exact for every rule
  auto ratio = [rule, lambda](std::int64_t n) {
    const double k = static_cast<double>(n);
    switch (rule) {
      case WeightRule::constant: return 1.0;
      case WeightRule::linear: return k / (k + 1.0);
      case WeightRule::square: return (k / (k + 1.0)) * (k / (k + 1.0));
      case WeightRule::geometric: return 1.0 / lambda;
    }
    return 1.0;
  };
  auto log_scale = [rule, lambda](std::int64_t n) {
    const double k = static_cast<double>(n) + 1.0;
    switch (rule) {
      case WeightRule::constant: return 0.0;
      case WeightRule::linear: return std::log(k);
      case WeightRule::square: return 2.0 * std::log(k);
      case WeightRule::geometric: return k * std::log(lambda);
    }
    return 0.0;
  };
  auto row = [ratio](std::int64_t n) {
    std::vector<BandEntry> out;
    if (n > 0) {
      const double r = ratio(n);
      out.push_back({-1, -r});
      out.push_back({0, 1.0 + r});
    } else {
      out.push_back({0, 1.0});
    }
    out.push_back({1, -1.0});
    return out;
  };
  return HalfLineBandedOperator("chain:" + to_string(rule), row, 1, true, n_max, log_scale);
}

}  // namespace lapnet
