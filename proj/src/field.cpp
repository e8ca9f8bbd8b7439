#include "lapnet/field.hpp"

#include <algorithm>
#include <cmath>

namespace lapnet {

VertexField::VertexField(Window w) : window_(std::move(w)), values_(window_.size()) {}

VertexField::VertexField(Window w, std::vector<Complex> values)
    : window_(std::move(w)), values_(std::move(values)) {
  if (values_.size() != window_.size()) {
    throw GraphError("field has " + std::to_string(values_.size()) + " values for a window of " +
                     std::to_string(window_.size()) + " vertices");
  }
}

VertexField VertexField::real(Window w, std::span<const double> values) {
  std::vector<Complex> v(values.begin(), values.end());
  return VertexField(std::move(w), std::move(v));
}

VertexField VertexField::dirac(Window w, Vertex x) {
  auto i = w.index_of(x);
  if (!i) throw GraphError("Dirac mass at " + std::to_string(x) + " outside the window");
  VertexField f(std::move(w));
  f.values_[*i] = 1.0;
  return f;
}

VertexField VertexField::constant(Window w, Complex value) {
  std::vector<Complex> v(w.size(), value);
  return VertexField(std::move(w), std::move(v));
}

Complex VertexField::operator()(Vertex x) const {
  auto i = window_.index_of(x);
  return i ? values_[*i] : Complex{};
}

std::vector<double> VertexField::real_part() const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), [](Complex z) { return z.real(); });
  return out;
}

bool VertexField::is_real(double tol) const {
  return std::all_of(values_.begin(), values_.end(),
                     [tol](Complex z) { return std::abs(z.imag()) <= tol; });
}

std::vector<Vertex> VertexField::support(double tol) const {
  std::vector<Vertex> out;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (std::abs(values_[i]) > tol) out.push_back(window_[i]);
  }
  return out;
}

double VertexField::norm() const {
  double s = 0.0;
  for (Complex z : values_) s += std::norm(z);
  return std::sqrt(s);
}

double VertexField::max_abs() const {
  double m = 0.0;
  for (Complex z : values_) m = std::max(m, std::abs(z));
  return m;
}

VertexField VertexField::on(const Window& w) const {
  VertexField out(w);
  for (std::size_t i = 0; i < w.size(); ++i) out.values_[i] = (*this)(w[i]);
  return out;
}

VertexField VertexField::conj() const {
  VertexField out(window_);
  for (std::size_t i = 0; i < values_.size(); ++i) out.values_[i] = std::conj(values_[i]);
  return out;
}

namespace {

void require_same_window(const VertexField& a, const VertexField& b) {
  if (!(a.window() == b.window())) throw GraphError("fields live on different windows");
}

}  // namespace

VertexField operator+(const VertexField& a, const VertexField& b) {
  require_same_window(a, b);
  VertexField out(a.window_);
  for (std::size_t i = 0; i < a.size(); ++i) out.values_[i] = a.values_[i] + b.values_[i];
  return out;
}

VertexField operator-(const VertexField& a, const VertexField& b) {
  require_same_window(a, b);
  VertexField out(a.window_);
  for (std::size_t i = 0; i < a.size(); ++i) out.values_[i] = a.values_[i] - b.values_[i];
  return out;
}

VertexField operator*(Complex s, const VertexField& a) {
  VertexField out(a.window_);
  for (std::size_t i = 0; i < a.size(); ++i) out.values_[i] = s * a.values_[i];
  return out;
}

Complex inner(const VertexField& u, const VertexField& v) {
  require_same_window(u, v);
  Complex s{};
  auto uv = u.values();
  auto vv = v.values();
  for (std::size_t i = 0; i < uv.size(); ++i) s += std::conj(uv[i]) * vv[i];
  return s;
}

}  // namespace lapnet
