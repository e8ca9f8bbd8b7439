#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lapnet/defect.hpp"
#include "lapnet/graph.hpp"
#include "lapnet/graph_io.hpp"
#include "lapnet/heisenberg.hpp"
#include "lapnet/json_out.hpp"
#include "lapnet/laplacian.hpp"
#include "lapnet/potential.hpp"
#include "lapnet/semigroup.hpp"
#include "lapnet/spectral.hpp"
#include "lapnet/threads.hpp"

using namespace lapnet;
using json = nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kFailed = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const char* kGraphHelp =
    "graph source: a lapnet-graph-v1 file, or a builder spec\n"
    "  cyclic:N                 cycle on 0..N-1\n"
    "  lattice:DxN              periodic lattice (Z_N)^D\n"
    "  chain:RULE[:LAMBDA]      half-line chain, RULE in constant|linear|square|geometric\n"
    "  line[:RULE[:LAMBDA]]     integer line (default c = 1)";

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

template <class T>
T parse_number(const std::string& s, const std::string& what) {
  T value{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw UsageError("bad " + what + " \"" + s + "\"");
  }
  return value;
}

WeightRule parse_rule(const std::string& s) {
  if (s == "constant") return WeightRule::constant;
  if (s == "linear") return WeightRule::linear;
  if (s == "square") return WeightRule::square;
  if (s == "geometric") return WeightRule::geometric;
  throw UsageError("unknown weight rule \"" + s + "\"");
}

GraphSystem chain_from(const std::vector<std::string>& parts, IndexSpace space) {
  WeightRule rule = parts.size() > 1 ? parse_rule(parts[1]) : WeightRule::constant;
  double lambda = 2.0;
  if (parts.size() > 2) {
    if (rule != WeightRule::geometric) throw UsageError("only geometric chains take a lambda");
    lambda = parse_number<double>(parts[2], "lambda");
  }
  if (parts.size() > 3) throw UsageError("trailing text in graph spec");
  return GraphSystem::chain(rule, space, lambda);
}

GraphSystem parse_graph(const std::string& spec, LoadMode mode) {
  auto parts = split(spec, ':');
  const std::string& name = parts[0];
  if (name == "cyclic") {
    if (parts.size() != 2) throw UsageError("expected cyclic:N");
    return GraphSystem::cyclic(parse_number<int>(parts[1], "cycle length"));
  }
  if (name == "lattice") {
    if (parts.size() != 2) throw UsageError("expected lattice:DxN");
    auto dn = split(parts[1], 'x');
    if (dn.size() != 2) throw UsageError("expected lattice:DxN");
    return GraphSystem::lattice(parse_number<int>(dn[0], "dimension"),
                                parse_number<int>(dn[1], "extent"));
  }
  if (name == "chain") {
    if (parts.size() < 2) throw UsageError("expected chain:RULE");
    return chain_from(parts, IndexSpace::half_line);
  }
  if (name == "line") return chain_from(parts, IndexSpace::full_line);
  return load_graph_file(spec, mode);
}

Window parse_window(const GraphSystem& g, const std::optional<std::string>& spec) {
  if (!spec) {
    if (!g.is_finite()) throw UsageError("an infinite graph needs --window lo:hi");
    return Window::whole(g);
  }
  auto parts = split(*spec, ':');
  if (parts.size() != 2) throw UsageError("expected --window lo:hi");
  auto w = Window::range(parse_number<Vertex>(parts[0], "window bound"),
                         parse_number<Vertex>(parts[1], "window bound"));
  require_window(g, w);
  return w;
}

// "x=v,x=v", "const:c" or "dipole:k" (c = 1 line dipole for (0, k))
VertexField parse_field(const Window& w, const std::string& spec) {
  if (spec.rfind("const:", 0) == 0) {
    return VertexField::constant(w, parse_number<double>(spec.substr(6), "constant"));
  }
  if (spec.rfind("dipole:", 0) == 0) {
    return reference_dipole_line(parse_number<int>(spec.substr(7), "dipole k"), w).field;
  }
  VertexField f(w);
  std::vector<Complex> values(w.size());
  for (const auto& item : split(spec, ',')) {
    auto kv = split(item, '=');
    if (kv.size() != 2) throw UsageError("expected field entries vertex=value");
    auto x = parse_number<Vertex>(kv[0], "vertex");
    auto i = w.index_of(x);
    if (!i) throw UsageError("field vertex " + kv[0] + " outside the window");
    values[*i] += parse_number<double>(kv[1], "field value");
  }
  return VertexField(w, std::move(values));
}

// "u>v=I,..." with I flowing from u to v
CurrentFunction parse_current(const std::string& spec) {
  CurrentFunction I;
  for (const auto& item : split(spec, ',')) {
    auto kv = split(item, '=');
    auto uv = kv.size() == 2 ? split(kv[0], '>') : std::vector<std::string>{};
    if (uv.size() != 2) throw UsageError("expected current entries u>v=I");
    I.set(parse_number<Vertex>(uv[0], "vertex"), parse_number<Vertex>(uv[1], "vertex"),
          parse_number<double>(kv[1], "current"));
  }
  return I;
}

double parse_angle(const std::string& s) {
  std::string t = s;
  double sign = 1.0;
  if (!t.empty() && t[0] == '-') {
    sign = -1.0;
    t = t.substr(1);
  }
  if (t == "pi") return sign * std::numbers::pi;
  return sign * parse_number<double>(t, "coordinate");
}

Complex parse_shift(const std::string& s) {
  if (s == "i" || s == "+i") return {0.0, 1.0};
  if (s == "-i") return {0.0, -1.0};
  return parse_number<double>(s, "shift");
}

json complex_json(Complex z) { return json{{"im", z.imag()}, {"re", z.real()}}; }

json field_json(const VertexField& v) {
  json rows = json::array();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Complex z = v.at_index(i);
    if (z.imag() == 0.0) rows.push_back({v.window()[i], z.real()});
    else rows.push_back({v.window()[i], z.real(), z.imag()});
  }
  return rows;
}

std::string field_csv(const VertexField& v) {
  std::ostringstream os;
  os << "vertex,value\n";
  for (std::size_t i = 0; i < v.size(); ++i) {
    os << v.window()[i] << "," << format_double(v.at_index(i).real()) << "\n";
  }
  return os.str();
}

json defect_json(const DefectReport& r) {
  json windows = json::array();
  for (const auto& w : r.windows) {
    json cands = json::array();
    for (const auto& c : w.candidates) {
      cands.push_back({{"decay_exponent", c.decay_exponent},
                       {"square_summable", c.square_summable},
                       {"tail_mass", c.tail_mass}});
    }
    windows.push_back({{"candidates", cands},
                       {"count", w.count},
                       {"gate_ok", w.gate_ok},
                       {"kernel_dim", w.kernel_dim},
                       {"n_max", w.n_max},
                       {"rows", w.rows},
                       {"sigma_max", w.sigma_max},
                       {"sigma_min", w.sigma_min}});
  }
  json out{{"model", r.model},
           {"shift", complex_json(r.shift)},
           {"status", r.status},
           {"estimated_count", r.estimated_count ? json(*r.estimated_count) : json(nullptr)},
           {"windows", windows},
           {"notes", r.notes},
           {"thresholds",
            {{"near_null", r.options.near_null},
             {"tail_fraction", r.options.tail_fraction},
             {"tail_threshold", r.options.tail_threshold}}}};
  if (r.shooting) {
    json values = json::array();
    for (const auto& z : r.shooting->values) values.push_back(z.imag() == 0.0 ? json(z.real()) : complex_json(z));
    out["shooting"] = {{"growth_rate", r.shooting->growth_rate},
                       {"monotone_growth", r.shooting->monotone_growth},
                       {"truncated_energies", r.shooting->truncated_energies},
                       {"values", values}};
  }
  return out;
}

HalfLineBandedOperator parse_model(const std::string& model, std::size_t n_max) {
  if (model == "p") return build_P(n_max);
  if (model == "q") return build_Q(n_max);
  if (model == "qpq") return build_QPQ(n_max);
  if (model == "hamiltonian") return build_hamiltonian(n_max);
  if (model == "pq") return banded_multiply(build_P(n_max), build_Q(n_max)).with_name("PQ");
  if (model == "pq-qp") {
    auto p = build_P(n_max);
    auto q = build_Q(n_max);
    return banded_add(banded_multiply(p, q), banded_multiply(q, p), -1.0).with_name("PQ - QP");
  }
  if (model.rfind("chain:", 0) == 0) {
    return chain_laplacian_operator(chain_from(split(model, ':'), IndexSpace::half_line), n_max);
  }
  throw UsageError("unknown model \"" + model + "\" (p, q, pq, qpq, hamiltonian, pq-qp, chain:RULE)");
}

struct Options {
  std::string graph;
  std::optional<std::string> window;
  std::optional<std::string> ref_window;
  std::optional<Vertex> alpha;
  std::optional<Vertex> beta;
  double t = 1.0;
  double s = 0.5;
  int k = 1;
  std::size_t nmax = 256;
  std::string solver = "cg";
  SolverOptions solver_opts;
  std::string boundary;
  std::string format;
  std::string out;
  std::string model;
  std::optional<std::string> shift;
  std::optional<std::string> field;
  std::optional<std::string> field2;
  std::optional<std::string> current;
  std::string method = "dense";
  std::string x;
  int rows = 3;
  std::optional<double> compose;
  std::string fn = "identity";
};

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw UsageError("cannot write " + o.out);
  f << text;
}

std::string format_or(const Options& o, const std::string& dflt,
                      std::initializer_list<const char*> allowed) {
  const std::string f = o.format.empty() ? dflt : o.format;
  for (const char* a : allowed) {
    if (f == a) return f;
  }
  throw UsageError("unsupported --format " + f);
}

Vertex need(const std::optional<Vertex>& v, const char* flag) {
  if (!v) throw UsageError(std::string("missing ") + flag);
  return *v;
}

int run_validate(const Options& o) {
  auto g = parse_graph(o.graph, LoadMode::lenient);
  std::optional<Window> w;
  if (o.window || !g.is_finite()) w = parse_window(g, o.window);
  auto rep = validate(g, w);
  json violations = json::array();
  for (const auto& v : rep.violations) violations.push_back({{"detail", v.detail}, {"kind", to_string(v.kind)}});
  format_or(o, "json", {"json"});
  emit(o, to_deterministic_json({{"components", rep.components},
                                 {"ok", rep.ok()},
                                 {"vertices_checked", rep.vertices_checked},
                                 {"violations", violations}}));
  return rep.ok() ? kOk : kFailed;
}

Boundary boundary_or_default(const Options& o) {
  return o.boundary.empty() ? Boundary::induced : parse_boundary(o.boundary);
}

int run_laplacian(const Options& o) {
  auto g = parse_graph(o.graph, LoadMode::strict);
  auto w = parse_window(g, o.window);
  format_or(o, "csv", {"csv"});
  emit(o, assemble_matrix(g, w, boundary_or_default(o)).dump_csv());
  return kOk;
}

int run_potential(const Options& o) {
  auto g = parse_graph(o.graph, LoadMode::strict);
  auto w = parse_window(g, o.window);
  auto sol = solve_dipole(g, w, need(o.alpha, "--alpha"), need(o.beta, "--beta"),
                          parse_solver(o.solver), o.solver_opts);
  if (format_or(o, "json", {"json", "csv"}) == "csv") {
    emit(o, field_csv(sol.field));
  } else {
    emit(o, to_deterministic_json({{"alpha", sol.alpha},
                                   {"beta", sol.beta},
                                   {"energy", sol.energy},
                                   {"residual", sol.residual_norm},
                                   {"solver", to_string(sol.solver)},
                                   {"values", field_json(sol.field)}}));
  }
  return kOk;
}

int run_resistance(const Options& o) {
  auto g = parse_graph(o.graph, LoadMode::strict);
  auto w = parse_window(g, o.window);
  ResistanceMetric metric(g, w);
  std::vector<std::pair<Vertex, Vertex>> pairs;
  if (o.alpha || o.beta) {
    pairs.emplace_back(need(o.alpha, "--alpha"), need(o.beta, "--beta"));
  } else {
    if (w.size() > 64) throw UsageError("all-pairs output needs a window of at most 64 vertices");
    for (std::size_t i = 0; i < w.size(); ++i) {
      for (std::size_t j = i + 1; j < w.size(); ++j) pairs.emplace_back(w[i], w[j]);
    }
  }
  std::ostringstream os;
  os << "x,y,dist\n";
  for (auto [x, y] : pairs) os << x << "," << y << "," << format_double(metric.distance(x, y)) << "\n";
  format_or(o, "csv", {"csv"});
  emit(o, os.str());
  return kOk;
}

int run_spectrum(const Options& o) {
  std::vector<double> values;
  if (o.method == "closed-form") {
    auto g = parse_graph(o.graph, LoadMode::strict);
    if (g.kind() != GraphKind::cyclic) throw UsageError("closed-form spectrum needs cyclic:N");
    values = cyclic_spectrum(g.extent());
  } else if (o.method == "dense") {
    auto g = parse_graph(o.graph, LoadMode::strict);
    auto w = parse_window(g, o.window);
    auto dec = truncated_spectrum(assemble_matrix(g, w, boundary_or_default(o)));
    values = dec.eigenvalues;
  } else {
    throw UsageError("unknown --method " + o.method + " (dense, closed-form)");
  }
  std::ostringstream os;
  os << "index,eigenvalue\n";
  for (std::size_t i = 0; i < values.size(); ++i) os << i << "," << format_double(values[i]) << "\n";
  format_or(o, "csv", {"csv"});
  emit(o, os.str());
  return kOk;
}

Window default_reference(const GraphSystem& g, const Window& w) {
  if (g.is_finite()) return Window::whole(g);
  const Vertex ext = 5 * static_cast<Vertex>(w.size());
  Vertex lo = w.lo() - ext;
  if (!g.contains(lo)) lo = 0;
  return Window::range(lo, w.hi() + ext);
}

int run_heat(const Options& o) {
  auto g = parse_graph(o.graph, LoadMode::strict);
  auto w = parse_window(g, o.window);
  const Vertex source = o.alpha ? *o.alpha : (w.contains(0) ? 0 : w.lo());
  auto v = VertexField::dirac(w, source);
  if (o.compose) {
    auto m = assemble_matrix(g, w, Boundary::compressed);
    auto two_step = heat_apply(m, *o.compose, heat_apply(m, o.t, v));
    auto one_step = heat_apply(m, *o.compose + o.t, v);
    format_or(o, "json", {"json"});
    emit(o, to_deterministic_json({{"max_difference", (two_step - one_step).max_abs()},
                                   {"s", *o.compose},
                                   {"t", o.t}}));
    return kOk;
  }
  if (format_or(o, "json", {"json", "csv"}) == "csv") {
    emit(o, field_csv(heat_apply(assemble_matrix(g, w, Boundary::compressed), o.t, v)));
    return kOk;
  }
  Window ref = o.ref_window ? parse_window(g, o.ref_window) : default_reference(g, w);
  auto chk = truncation_error_check(g, w, ref, o.t, v);
  emit(o, to_deterministic_json({{"bound", chk.bound},
                                 {"lambda_pf", chk.lambda_pf},
                                 {"lhs", chk.lhs},
                                 {"pass", chk.pass},
                                 {"t", chk.t}}));
  return chk.pass ? kOk : kFailed;
}

int run_hs(const Options& o) {
  auto h = hs_membership_line(o.k, o.s);
  format_or(o, "json", {"json"});
  emit(o, to_deterministic_json({{"analytic_exponent", h.analytic_exponent},
                                 {"analytic_member", h.analytic_member},
                                 {"boundary_case", h.boundary_case},
                                 {"integral_sequence", h.integral_sequence},
                                 {"k", h.k},
                                 {"member", h.member},
                                 {"s", h.s},
                                 {"verdict", h.verdict}}));
  return kOk;
}

int run_defect(const Options& o) {
  if (o.model.empty()) throw UsageError("missing --model");
  auto m = parse_model(o.model, o.nmax);
  format_or(o, "json", {"json"});
  if (o.shift) {
    auto rep = defect_probe(m, parse_shift(*o.shift));
    emit(o, to_deterministic_json(defect_json(rep)));
    return rep.status == "ok" ? kOk : kFailed;
  }
  auto pair = deficiency_probe_banded(m);
  json indices = pair.indices ? json{pair.indices->first, pair.indices->second} : json(nullptr);
  emit(o, to_deterministic_json({{"indices", indices},
                                 {"minus", defect_json(pair.minus)},
                                 {"model", m.name()},
                                 {"n_max", o.nmax},
                                 {"plus", defect_json(pair.plus)},
                                 {"status", pair.status}}));
  return pair.status == "ok" ? kOk : kFailed;
}

int run_graph(const Options& o) {
  auto g = parse_graph(o.graph, LoadMode::strict);
  auto w = parse_window(g, o.window);
  json edges = json::array();
  for (const auto& e : window_edges(g, w)) edges.push_back({e.u, e.v, e.c});
  json degrees = json::array();
  for (Vertex x : w.vertices()) {
    degrees.push_back({x, weighted_degree(g, x), g.neighbors(x).size()});
  }
  auto rep = validate(g, w);
  format_or(o, "json", {"json"});
  emit(o, to_deterministic_json({{"connected", is_connected(g, w)},
                                 {"degrees", degrees},
                                 {"edge_count", edges.size()},
                                 {"edges", edges},
                                 {"kind", to_string(g.kind())},
                                 {"violations", rep.violations.size()},
                                 {"window", w.describe()}}));
  return kOk;
}

int run_apply(const Options& o) {
  auto g = parse_graph(o.graph, LoadMode::strict);
  auto w = parse_window(g, o.window);
  if (!o.field) throw UsageError("missing --field");
  auto v = parse_field(w, *o.field);
  auto boundary = o.boundary.empty() ? Boundary::compressed : parse_boundary(o.boundary);
  auto lap = apply_laplacian(g, v, boundary);
  TruncationReport etr;
  const double e = energy(g, v, &etr);
  json out{{"boundary", to_string(boundary)},
           {"energy", e},
           {"energy_crossing_edges", etr.crossing_edges},
           {"laplacian", field_json(lap.field)},
           {"row_sum", row_sum(g, v)},
           {"truncation", lap.truncation.message()},
           {"two_inner", 2.0 * inner(v, lap.field).real()}};
  if (o.field2) {
    auto u = parse_field(w, *o.field2);
    out["bilinear"] = complex_json(energy_bilinear(g, u, v));
  }
  format_or(o, "json", {"json"});
  emit(o, to_deterministic_json(out));
  return kOk;
}

int run_currents(const Options& o) {
  auto g = parse_graph(o.graph, LoadMode::strict);
  auto w = parse_window(g, o.window);
  json out;
  CurrentFunction I;
  std::optional<std::pair<Vertex, Vertex>> dipole;
  if (o.alpha && o.beta) dipole = std::pair(*o.alpha, *o.beta);
  if (o.current) {
    if (*o.current != "none") I = parse_current(*o.current);
  } else if (o.field) {
    I = currents_from_field(g, parse_field(w, *o.field));
  } else {
    if (!dipole) throw UsageError("need --alpha and --beta, --field or --current");
    auto sol = solve_dipole(g, w, dipole->first, dipole->second, parse_solver(o.solver), o.solver_opts);
    I = currents_from_potential(g, sol);
    out["energy"] = sol.energy;
    out["path_bound"] = path_resistance_bound(g, w, dipole->first, dipole->second);
  }
  auto rep = verify_kirchhoff(g, w, I, dipole);
  json cur = json::array();
  for (const auto& [e, value] : I.values()) cur.push_back({e.first, e.second, value});
  out["currents"] = cur;
  out["dissipation"] = dissipation(g, I);
  out["loop_law_max_violation"] = rep.loop_law_max_violation;
  out["loops_checked"] = rep.loops_checked;
  out["node_law_max_violation"] = rep.node_law_max_violation;
  format_or(o, "json", {"json"});
  emit(o, to_deterministic_json(out));
  return kOk;
}

int run_coupling(const Options& o) {
  auto g = parse_graph(o.graph, LoadMode::strict);
  auto w = parse_window(g, o.window);
  auto bc = boundary_coupling(g, w);
  json edges = json::array();
  for (const auto& e : bc.crossing_edges) edges.push_back({e.inside, e.outside, e.conductance});
  json out{{"crossing_edges", edges}, {"lambda_pf", bc.lambda_pf}};
  if (o.field) {
    auto diff = truncation_difference(g, w, parse_field(w, *o.field));
    json nonzero = json::array();
    for (std::size_t i = 0; i < diff.size(); ++i) {
      if (diff.at_index(i) != Complex{}) nonzero.push_back({diff.window()[i], diff.at_index(i).real()});
    }
    out["truncation_difference"] = nonzero;
  }
  format_or(o, "json", {"json"});
  emit(o, to_deterministic_json(out));
  return kOk;
}

int run_symbol(const Options& o) {
  std::vector<double> x;
  for (const auto& item : split(o.x, ',')) x.push_back(parse_angle(item));
  format_or(o, "json", {"json"});
  emit(o, to_deterministic_json({{"dim", x.size()}, {"value", lattice_symbol(x)}}));
  return kOk;
}

int run_banded(const Options& o) {
  if (o.model.empty()) throw UsageError("missing --model");
  auto m = parse_model(o.model, o.nmax);
  json rows = json::array();
  for (int n = 0; n < o.rows; ++n) {
    json row = json::array();
    for (const auto& e : m.row(n)) row.push_back({n + e.offset, e.value.real(), e.value.imag()});
    rows.push_back(row);
  }
  json out{{"bandwidth", m.bandwidth()},
           {"hermitian", m.hermitian()},
           {"interior_hermitian_deviation", m.interior_hermitian_deviation()},
           {"measured_bandwidth", m.measured_bandwidth()},
           {"model", m.name()},
           {"n_max", m.n_max()},
           {"row0_nonzeros", m.row(0).size()},
           {"rows", rows}};
  if (m.hermitian() && m.n_max() < 512) {
    auto eig = jacobi_eigh(m.section(), {.vectors = false});
    out["min_eigenvalue"] = eig.values.front();
  }
  format_or(o, "json", {"json"});
  emit(o, to_deterministic_json(out));
  return kOk;
}

int run_funcalc(const Options& o) {
  auto g = parse_graph(o.graph, LoadMode::strict);
  auto w = parse_window(g, o.window);
  if (!o.field) throw UsageError("missing --field");
  auto v = parse_field(w, *o.field);
  auto m = assemble_matrix(g, w, boundary_or_default(o));
  auto dec = truncated_spectrum(m);
  VertexField result(w);
  VertexField expected(w);
  if (o.fn == "identity") {
    result = apply_spectral_function([](double l) { return l; }, dec, v);
    expected = m.apply(v);
  } else if (o.fn == "sqrt-twice") {
    auto root = [](double l) { return std::sqrt(std::max(l, 0.0)); };
    result = apply_spectral_function(root, dec, apply_spectral_function(root, dec, v));
    expected = m.apply(v);
  } else if (o.fn == "heat") {
    const double t = o.t;
    result = apply_spectral_function([t](double l) { return std::exp(-t * l); }, dec, v);
    expected = heat_apply(m, t, v);
  } else {
    throw UsageError("unknown --fn " + o.fn + " (identity, sqrt-twice, heat)");
  }
  format_or(o, "json", {"json"});
  emit(o, to_deterministic_json({{"fn", o.fn},
                                 {"max_difference", (result - expected).max_abs()},
                                 {"values", field_json(result)}}));
  return kOk;
}

int run_hsnorm(const Options& o) {
  auto g = parse_graph(o.graph, LoadMode::strict);
  auto w = parse_window(g, o.window);
  if (!o.field) throw UsageError("missing --field");
  auto v = parse_field(w, *o.field);
  auto dec = truncated_spectrum(assemble_matrix(g, w, boundary_or_default(o)));
  const double norm = hs_norm(dec, v, o.s);
  format_or(o, "json", {"json"});
  emit(o, to_deterministic_json({{"norm", norm}, {"norm_squared", norm * norm}, {"s", o.s}}));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  configure_threads();
  CLI::App app{"lapnet: weighted-graph Laplacian toolkit"};
  app.require_subcommand(1);
  Options o;

  auto add_graph = [&](CLI::App* sub, bool required = true) {
    auto* opt = sub->add_option("--graph", o.graph, kGraphHelp);
    if (required) opt->required();
    sub->add_option("--window", o.window, "vertex window lo:hi (use --window=lo:hi for negative lo)");
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "write output to a file instead of stdout");
    sub->add_option("--format", o.format, "json or csv");
  };
  auto add_dipole = [&](CLI::App* sub) {
    sub->add_option("--alpha", o.alpha, "source vertex");
    sub->add_option("--beta", o.beta, "sink vertex");
  };

  auto* validate_cmd = app.add_subcommand("validate", "check the graph axioms; exit 2 on violations");
  add_graph(validate_cmd);
  add_output(validate_cmd);

  auto* laplacian_cmd = app.add_subcommand("laplacian", "dump the Laplacian matrix as CSV");
  add_graph(laplacian_cmd);
  add_output(laplacian_cmd);
  laplacian_cmd->add_option("--boundary", o.boundary, "induced (default) or compressed");

  auto* potential_cmd = app.add_subcommand("potential", "solve the dipole equation");
  add_graph(potential_cmd);
  add_output(potential_cmd);
  add_dipole(potential_cmd);
  potential_cmd->add_option("--solver", o.solver, "cg, dft or closed-form");
  potential_cmd->add_option("--tol", o.solver_opts.relative_tolerance, "cg relative residual tolerance");
  potential_cmd->add_option("--max-iter", o.solver_opts.max_iterations, "cg iteration cap (0: 20 |w|)");

  auto* resistance_cmd = app.add_subcommand("resistance", "resistance metric as CSV x,y,dist");
  add_graph(resistance_cmd);
  add_output(resistance_cmd);
  add_dipole(resistance_cmd);

  auto* spectrum_cmd = app.add_subcommand("spectrum", "eigenvalues as CSV index,eigenvalue");
  add_graph(spectrum_cmd);
  add_output(spectrum_cmd);
  spectrum_cmd->add_option("--boundary", o.boundary, "induced (default) or compressed");
  spectrum_cmd->add_option("--method", o.method, "dense (default) or closed-form");

  auto* heat_cmd = app.add_subcommand("heat", "heat semigroup truncation bound");
  add_graph(heat_cmd);
  add_output(heat_cmd);
  heat_cmd->add_option("--t", o.t, "time");
  heat_cmd->add_option("--alpha", o.alpha, "vertex carrying the initial Dirac mass");
  heat_cmd->add_option("--ref-window", o.ref_window, "reference window lo:hi");
  heat_cmd->add_option("--compose", o.compose, "compare S(s)S(t) with S(s+t) for this s");

  auto* hs_cmd = app.add_subcommand("hs", "H(s) membership of the line dipole");
  add_output(hs_cmd);
  hs_cmd->add_option("--k", o.k, "dipole separation");
  hs_cmd->add_option("--s", o.s, "Sobolev exponent");

  auto* defect_cmd = app.add_subcommand("defect", "deficiency probe of a banded half-line operator");
  add_output(defect_cmd);
  defect_cmd->add_option("--model", o.model, "qpq, hamiltonian, p, q, pq-qp or chain:RULE[:LAMBDA]");
  defect_cmd->add_option("--nmax", o.nmax, "first window size; the second is twice this");
  defect_cmd->add_option("--shift", o.shift, "single shift (-1, i, -i); default probes +i and -i");

  auto* graph_cmd = app.add_subcommand("graph", "edges and weighted degrees of a window");
  add_graph(graph_cmd);
  add_output(graph_cmd);

  auto* apply_cmd = app.add_subcommand("apply", "apply the Laplacian and energy forms to a field");
  add_graph(apply_cmd);
  add_output(apply_cmd);
  apply_cmd->add_option("--field", o.field, "x=v,x=v | const:c | dipole:k");
  apply_cmd->add_option("--field2", o.field2, "first argument of the bilinear energy");
  apply_cmd->add_option("--boundary", o.boundary, "compressed (default) or induced");

  auto* currents_cmd = app.add_subcommand("currents", "dipole currents and Kirchhoff checks");
  add_graph(currents_cmd);
  add_output(currents_cmd);
  add_dipole(currents_cmd);
  currents_cmd->add_option("--solver", o.solver, "cg, dft or closed-form");
  currents_cmd->add_option("--current", o.current, "explicit currents u>v=I,... (or none) instead of a dipole");
  currents_cmd->add_option("--field", o.field, "potential field whose currents are checked");

  auto* coupling_cmd = app.add_subcommand("coupling", "boundary coupling of a window");
  add_graph(coupling_cmd);
  add_output(coupling_cmd);
  coupling_cmd->add_option("--field", o.field, "field for the boundary difference");

  auto* symbol_cmd = app.add_subcommand("symbol", "lattice Fourier symbol");
  add_output(symbol_cmd);
  symbol_cmd->add_option("--x", o.x, "comma-separated point, entries may be pi or -pi")->required();

  auto* banded_cmd = app.add_subcommand("banded", "inspect a banded half-line operator");
  add_output(banded_cmd);
  banded_cmd->add_option("--model", o.model, "p, q, pq, qpq, hamiltonian, pq-qp or chain:RULE");
  banded_cmd->add_option("--nmax", o.nmax, "section size");
  banded_cmd->add_option("--rows", o.rows, "leading rows to print");

  auto* funcalc_cmd = app.add_subcommand("funcalc", "apply f(Laplacian) through the eigendecomposition");
  add_graph(funcalc_cmd);
  add_output(funcalc_cmd);
  funcalc_cmd->add_option("--field", o.field, "x=v,x=v | const:c | dipole:k")->required();
  funcalc_cmd->add_option("--fn", o.fn, "identity, sqrt-twice or heat");
  funcalc_cmd->add_option("--t", o.t, "time for heat");
  funcalc_cmd->add_option("--boundary", o.boundary, "induced (default) or compressed");

  auto* hsnorm_cmd = app.add_subcommand("hsnorm", "norm of Laplacian^s applied to a field");
  add_graph(hsnorm_cmd);
  add_output(hsnorm_cmd);
  hsnorm_cmd->add_option("--field", o.field, "x=v,x=v | const:c | dipole:k")->required();
  hsnorm_cmd->add_option("--s", o.s, "exponent");
  hsnorm_cmd->add_option("--boundary", o.boundary, "induced (default) or compressed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "validate") return run_validate(o);
    if (name == "laplacian") return run_laplacian(o);
    if (name == "potential") return run_potential(o);
    if (name == "resistance") return run_resistance(o);
    if (name == "spectrum") return run_spectrum(o);
    if (name == "heat") return run_heat(o);
    if (name == "hs") return run_hs(o);
    if (name == "defect") return run_defect(o);
    if (name == "graph") return run_graph(o);
    if (name == "apply") return run_apply(o);
    if (name == "currents") return run_currents(o);
    if (name == "coupling") return run_coupling(o);
    if (name == "symbol") return run_symbol(o);
    if (name == "banded") return run_banded(o);
    if (name == "funcalc") return run_funcalc(o);
    if (name == "hsnorm") return run_hsnorm(o);
  } catch (const ConvergenceError& e) {
    std::cerr << "lapnet: " << e.what() << " (residual " << format_double(e.residual()) << ")\n";
    return kFailed;
  } catch (const NoSolutionError& e) {
    std::cerr << "lapnet: " << e.what() << "\n";
    return kFailed;
  } catch (const std::exception& e) {
    std::cerr << "lapnet: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
