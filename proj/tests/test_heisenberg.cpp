#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lapnet/heisenberg.hpp"
#include "lapnet/laplacian.hpp"

using namespace lapnet;

namespace {

const Complex kI{0.0, 1.0};

double abs_diff(Complex a, Complex b) { return std::abs(a - b); }

std::vector<Complex> random_vector(std::size_t n, std::mt19937& rng) {
  std::normal_distribution<double> d;
  std::vector<Complex> v(n);
  for (auto& x : v) x = {d(rng), d(rng)};
  return v;
}

Complex dot(std::span<const Complex> a, std::span<const Complex> b) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

std::vector<HalfLineBandedOperator> models(std::size_t n) {
  return {build_P(n), build_Q(n), banded_multiply(build_P(n), build_Q(n)), build_QPQ(n),
          build_hamiltonian(n)};
}

}  // namespace

TEST(Heisenberg, PEntries) {
  auto p = build_P(16);
  EXPECT_NEAR(p.entry(0, 1).real(), 0.5, 1e-15);
  EXPECT_NEAR(p.entry(1, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(p.entry(1, 2).real(), std::sqrt(2.0) / 2, 1e-15);
  EXPECT_EQ(p.entry(0, 0), Complex(0.0));
  EXPECT_EQ(p.entry(0, 2), Complex(0.0));
  EXPECT_EQ(p.measured_bandwidth(), 1);
  EXPECT_TRUE(p.hermitian());
}

TEST(Heisenberg, QEntries) {
  auto q = build_Q(16);
  EXPECT_LT(abs_diff(q.entry(0, 1), 0.5 * kI), 1e-15);
  EXPECT_LT(abs_diff(q.entry(1, 0), -0.5 * kI), 1e-15);
  EXPECT_LT(abs_diff(q.entry(3, 4), kI), 1e-15);
  EXPECT_EQ(q.measured_bandwidth(), 1);
  EXPECT_LE(q.interior_hermitian_deviation(), 1e-15);
}

TEST(Heisenberg, ProductBandwidths) {
  auto pq = banded_multiply(build_P(64), build_Q(64));
  EXPECT_LE(pq.measured_bandwidth(), 2);
  auto qpq = build_QPQ(64);
  EXPECT_LE(qpq.measured_bandwidth(), 3);
  EXPECT_LE(qpq.row(0).size(), 4u);
  EXPECT_LE(qpq.interior_hermitian_deviation(), 1e-12);
  auto h = build_hamiltonian(64);
  EXPECT_LE(h.measured_bandwidth(), 4);
  EXPECT_LE(h.interior_hermitian_deviation(), 1e-12);
}

TEST(Heisenberg, HamiltonianIsUnbounded) {
  auto h = build_hamiltonian(128);
  JacobiOptions opts;
  opts.vectors = false;
  auto e = jacobi_eigh(h.section(), opts);
  EXPECT_LT(e.values.front(), 0.0);
}

TEST(Heisenberg, CommutatorIsScalarOnInteriorRows) {
  const std::size_t n = 64;
  auto p = build_P(n), q = build_Q(n);
  auto pq = multiply(p.section(), q.section());
  auto qp = multiply(q.section(), p.section());
  Complex scalar = pq(4, 4) - qp(4, 4);
  EXPECT_NEAR(std::abs(scalar), 0.5, 1e-12);
  EXPECT_NEAR(scalar.real(), 0.0, 1e-12);
  for (std::size_t r = 4; r < n - 4; ++r) {
    for (std::size_t c = 0; c <= n; ++c) {
      Complex want = r == c ? scalar : Complex(0.0);
      EXPECT_LT(abs_diff(pq(r, c) - qp(r, c), want), 1e-12) << r << "," << c;
    }
  }
  auto comm = banded_add(banded_multiply(p, q), banded_multiply(q, p), -1.0);
  for (std::int64_t r = 0; r < 60; ++r) {
    EXPECT_LT(abs_diff(comm.entry(r, r), scalar), 1e-12);
    EXPECT_LT(std::abs(comm.entry(r, r + 1)), 1e-12);
  }
}

TEST(Heisenberg, ProductMatchesDenseProduct) {
  const std::size_t n = 40;
  auto p = build_P(n), q = build_Q(n);
  auto banded = banded_multiply(q, banded_multiply(p, q));
  auto dense = multiply(q.section(), multiply(p.section(), q.section()));
  // away from the cut the dense section product is exact
  for (std::size_t r = 0; r + 3 < n; ++r) {
    for (std::size_t c = 0; c + 3 < n; ++c) {
      EXPECT_LT(abs_diff(banded.entry(r, c), dense(r, c)), 1e-12);
    }
  }
  auto qpq = build_QPQ(n);
  for (std::int64_t r = 0; r < 30; ++r) {
    for (std::int64_t c = 0; c < 30; ++c) EXPECT_LT(abs_diff(qpq.entry(r, c), banded.entry(r, c)), 1e-12);
  }
}

TEST(Heisenberg, RowsRespectBandwidth) {
  for (const auto& m : models(80)) {
    const int b = m.bandwidth();
    for (std::int64_t r = 0; r < 80; ++r) {
      auto row = m.row(r);
      EXPECT_LE(row.size(), std::size_t(2 * b + 1)) << m.name();
      for (const auto& e : row) {
        EXPECT_LE(std::abs(e.offset), b);
        EXPECT_GE(r + e.offset, 0);
      }
    }
  }
}

TEST(Heisenberg, ColumnParseval) {
  // Σ_x |m(x,y)|² against ‖M e_y‖² for interior columns
  for (const auto& m : models(80)) {
    const int b = m.bandwidth();
    for (std::int64_t y = 0; y + b < 80; ++y) {
      std::vector<Complex> e(81, 0.0);
      e[y] = 1.0;
      double applied = 0.0, entries = 0.0;
      for (auto x : m.apply(e)) applied += std::norm(x);
      for (std::int64_t x = std::max<std::int64_t>(0, y - b); x <= y + b; ++x) entries += std::norm(m.entry(x, y));
      EXPECT_LE(std::abs(applied - entries), 1e-12 * std::max(1.0, entries)) << m.name() << " " << y;
      if (m.hermitian()) {
        double row = 0.0;
        for (const auto& x : m.row(y)) row += std::norm(x.value);
        EXPECT_LE(std::abs(row - entries), 1e-12 * std::max(1.0, entries)) << m.name() << " " << y;
      }
    }
  }
}

TEST(Heisenberg, AdjointIdentity) {
  std::mt19937 rng(11);
  for (const auto& m : models(60)) {
    auto adj = m.adjoint();
    for (int rep = 0; rep < 5; ++rep) {
      // supports kept clear of the cut so both sides see whole rows
      auto u = random_vector(50, rng), v = random_vector(50, rng);
      u.resize(61, 0.0);
      v.resize(61, 0.0);
      auto mu = m.apply(u), av = adj.apply(v);
      auto lhs = dot(mu, v), rhs = dot(u, av);
      EXPECT_LT(std::abs(lhs - rhs), 1e-9 * (1 + std::abs(lhs))) << m.name();
    }
  }
}

TEST(Heisenberg, SectionMatchesApply) {
  std::mt19937 rng(12);
  auto m = build_hamiltonian(30);
  auto s = m.section();
  auto v = random_vector(31, rng);
  auto got = m.apply(v);
  for (std::size_t r = 0; r < 31; ++r) {
    Complex want = 0.0;
    for (std::size_t c = 0; c < 31; ++c) want += s(r, c) * v[c];
    EXPECT_LT(abs_diff(got[r], want), 1e-10);
  }
}

TEST(Heisenberg, ChainOperatorMatchesGraphLaplacian) {
  for (auto rule : {WeightRule::constant, WeightRule::linear, WeightRule::square, WeightRule::geometric}) {
    auto g = GraphSystem::chain(rule, IndexSpace::half_line, 2.0);
    auto op = chain_laplacian_operator(g, 40);
    auto w = Window::range(0, 41);
    auto m = assemble_matrix(g, w, Boundary::compressed);
    for (std::int64_t r = 0; r < 40; ++r) {
      for (std::int64_t c = std::max<std::int64_t>(0, r - 2); c <= r + 2; ++c) {
        const double want = m.entry(r, c);
        EXPECT_NEAR(op.entry(r, c).real(), want, 1e-12 * (1 + std::abs(want))) << to_string(rule);
        EXPECT_EQ(op.entry(r, c).imag(), 0.0);
      }
    }
  }
}

TEST(Heisenberg, Errors) {
  EXPECT_THROW(build_P(1), std::invalid_argument);
  EXPECT_THROW(build_Q(0), std::invalid_argument);
  EXPECT_THROW(chain_laplacian_operator(GraphSystem::chain(WeightRule::constant, IndexSpace::full_line), 10),
               std::invalid_argument);
}
