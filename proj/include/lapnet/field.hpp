#pragma once

#include <complex>
#include <span>
#include <vector>

#include "lapnet/graph.hpp"

namespace lapnet {

using Complex = std::complex<double>;

/// A complex-valued function on the vertices of a window. Values outside the
/// window read as zero (finite support).
class VertexField {
 public:
  explicit VertexField(Window w);
  VertexField(Window w, std::vector<Complex> values);

  static VertexField real(Window w, std::span<const double> values);
  static VertexField dirac(Window w, Vertex x);
  static VertexField constant(Window w, Complex value);

  const Window& window() const { return window_; }
  std::span<const Complex> values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  /// Value at a window vertex; zero for vertices outside the window.
  Complex operator()(Vertex x) const;
  Complex at_index(std::size_t i) const { return values_[i]; }

  std::vector<double> real_part() const;
  bool is_real(double tol = 0.0) const;
  std::vector<Vertex> support(double tol = 0.0) const;

  double norm() const;
  double max_abs() const;

  /// Zero-extension (or restriction) onto another window.
  VertexField on(const Window& w) const;

  VertexField conj() const;

  friend VertexField operator+(const VertexField& a, const VertexField& b);
  friend VertexField operator-(const VertexField& a, const VertexField& b);
  friend VertexField operator*(Complex s, const VertexField& a);

 private:
  Window window_;
  std::vector<Complex> values_;
};

/// <u, v> = sum conj(u(x)) v(x); conjugate-linear in the first slot.
Complex inner(const VertexField& u, const VertexField& v);

}  // namespace lapnet
