#include "cli/commands.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>

#include <Eigen/SVD>

#include "dqlin/errors.hpp"
#include "dqlin/evolution.hpp"
#include "dqlin/io.hpp"
#include "dqlin/kernels.hpp"
#include "dqlin/linsys.hpp"
#include "dqlin/models.hpp"
#include "dqlin/star.hpp"
#include "dqlin/states.hpp"
#include "dqlin/symplectic.hpp"

namespace dqlin::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

ModelDefinition make_model(const RunConfig& c) {
  const auto& p = c.parameters;
  const double hbar = c.hbar();
  if (c.model == "damped_oscillator")
    return build_damped_oscillator(p.at("omega"), p.at("alpha"), hbar, OscillatorVariant::Attractor);
  if (c.model == "damped_oscillator_canonical")
    return build_damped_oscillator(p.at("omega"), p.at("alpha"), hbar, OscillatorVariant::Canonical);
  if (c.model == "magnetic_charge") {
    if (p.count("A")) return build_magnetic_charge_coefficients(p.at("A"), p.at("B"), hbar);
    return build_magnetic_charge(p.at("e"), p.at("H_field"), hbar);
  }
  const Vec J = c.generic_J ? *c.generic_J : Vec::Zero(c.generic_A->rows());
  return build_generic(*c.generic_A, J, canonical_omega0(static_cast<int>(c.generic_A->rows())), hbar);
}

std::vector<std::string> coordinate_names(const ModelDefinition& m) {
  if (m.kind == ModelKind::DampedOscillator) return {"x", "p"};
  if (m.kind == ModelKind::MagneticCharge) return {"x", "p", "y", "q"};
  std::vector<std::string> names;
  for (int k = 0; k < m.system->dim(); ++k) names.push_back("x" + std::to_string(k + 1));
  return names;
}

Mat seed_form(const RunConfig& c, const ModelDefinition& m) {
  Mat w = c.omega0 ? *c.omega0 : m.omega0;
  if (w.rows() != m.omega0.rows() || w.cols() != m.omega0.cols())
    throw ConfigError("config field 'omega0.matrix': must be " + std::to_string(m.omega0.rows()) + "x" +
                      std::to_string(m.omega0.rows()));
  return c.omega0_scale * w;
}

struct InitialState {
  GaussPolySymbol rho{2};
  double energy = std::nan("");
  double angular_momentum = std::nan("");
  bool eigenstate = false;
};

// Eigenstate for the oscillator and magnetic models; for generic systems the
// n-th oscillator level in the first pair times ground states in the rest.
InitialState make_state(const RunConfig& c, const ModelDefinition& m) {
  InitialState s;
  const double hbar = c.hbar();
  if (m.kind == ModelKind::DampedOscillator) {
    const OscillatorState st = oscillator_state({c.parameters.at("omega"), hbar, c.n});
    s.rho = st.rho;
    s.energy = st.energy;
    s.eigenstate = true;
  } else if (m.kind == ModelKind::MagneticCharge) {
    const MagneticState st = magnetic_state({m.parameters.at("B"), hbar, c.n, c.l});
    s.rho = st.rho;
    s.energy = st.energy;
    s.angular_momentum = st.angular_momentum;
    s.eigenstate = true;
  } else {
    const int d = m.system->dim();
    GaussPolySymbol rho = make_constant(d, 1.0);
    for (int k = 0; k < d / 2; ++k) {
      Mat S = Mat::Zero(2, d);
      S(0, 2 * k) = 1.0;
      S(1, 2 * k + 1) = 1.0;
      const GaussPolySymbol pair = oscillator_eigenstate({1.0, hbar, k == 0 ? c.n : 0});
      rho = pointwise_product(rho, linear_substitution(pair, S));
    }
    s.rho = rho;
  }
  return s;
}

// Unit trace with respect to the seed form.
GaussPolySymbol normalized(const GaussPolySymbol& rho, const Mat& omega0, double hbar) {
  const Complex tr = trace_at(rho, std::sqrt(std::abs(omega0.determinant())), hbar);
  if (std::abs(tr) == 0.0 || !std::isfinite(std::abs(tr))) throw DivergentIntegral("state has no finite trace");
  return scale(rho, 1.0 / tr);
}

FlowOptions flow_options(const RunConfig& c, const std::vector<double>& grid) {
  FlowOptions o;
  o.tolerance = c.flow_tolerance;
  o.fixed_step = c.fixed_step;
  o.output_times = grid;
  if (c.flow_method == "matrix_exponential") o.method = FlowMethod::MatrixExponential;
  else if (c.flow_method == "adaptive") o.method = FlowMethod::Adaptive;
  else if (c.flow_method == "fixed_step") o.method = FlowMethod::FixedStep;
  return o;
}

ExpectationRoute route_of(const RunConfig& c) {
  if (c.route == "direct") return ExpectationRoute::Direct;
  if (c.route == "pointwise") return ExpectationRoute::Pointwise;
  return ExpectationRoute::Transported;
}

struct Pipeline {
  ModelDefinition model;
  InitialState initial;
  Mat omega0;
  std::shared_ptr<const FlowSolution> flow;
  std::unique_ptr<SymplecticStructure> ss;
  std::unique_ptr<EvolvedState> state;
  std::vector<double> grid;
};

std::unique_ptr<Pipeline> build_pipeline(const RunConfig& c, const Mat* omega0_override = nullptr) {
  auto p = std::make_unique<Pipeline>();
  p->model = make_model(c);
  p->omega0 = omega0_override ? *omega0_override : seed_form(c, p->model);
  p->initial = make_state(c, p->model);
  p->grid = c.time_grid();
  p->flow = std::make_shared<FlowSolution>(fundamental_matrix(*p->model.system, c.t_max, flow_options(c, p->grid)));
  p->ss = std::make_unique<SymplecticStructure>(p->model.system, p->flow, p->omega0);
  p->state = std::make_unique<EvolvedState>(normalized(p->initial.rho, p->omega0, c.hbar()), p->flow);
  return p;
}

const GaussPolySymbol& observable(const ModelDefinition& m, const std::string& name) {
  const auto it = m.observables.find(name);
  if (it == m.observables.end()) {
    std::string known;
    for (const auto& [k, v] : m.observables) known += (known.empty() ? "" : ", ") + k;
    throw ConfigError("config field 'observables': '" + name + "' is not defined for model '" + m.name +
                      "' (available: " + known + ")");
  }
  return it->second;
}

json parameters_json(const ModelDefinition& m) {
  json j = json::object();
  for (const auto& [k, v] : m.parameters) j[k] = v;
  return j;
}

json manifest(const RunConfig& c, const std::string& command, const ModelDefinition* m, const json& artifacts) {
  json j;
  j["version"] = kVersion;
  j["command"] = command;
  j["config"] = c.resolved;
  j["tolerances"] = c.resolved.at("tolerances");
  if (m) {
    j["model"] = m->name;
    j["parameters"] = parameters_json(*m);
  }
  j["artifacts"] = artifacts;
  return j;
}

void write_manifest(const RunConfig& c, const std::string& command, const ModelDefinition* m, const json& artifacts,
                    const json& extra = json::object()) {
  json j = manifest(c, command, m, artifacts);
  for (const auto& [k, v] : extra.items()) j[k] = v;
  const std::string name = command == "simulate" ? "manifest.json" : "manifest_" + command + ".json";
  write_file_atomic(fs::path(c.out_dir) / name, j.dump(2) + "\n");
}

std::string wigner_csv(const Pipeline& p, const RunConfig& c, double t) {
  const int d = p.model.system->dim();
  for (int a : c.wigner_axes)
    if (a < 0 || a >= d) throw ConfigError("config field 'wigner.axes': index out of range for dimension " + std::to_string(d));
  const GaussPolySymbol rho = p.state->at(t);
  const int n = c.wigner_points;
  std::vector<double> pts(static_cast<std::size_t>(n) * n * d, 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      double* x = &pts[(static_cast<std::size_t>(i) * n + k) * d];
      x[c.wigner_axes[0]] = -c.wigner_extent + 2.0 * c.wigner_extent * i / (n - 1);
      x[c.wigner_axes[1]] = -c.wigner_extent + 2.0 * c.wigner_extent * k / (n - 1);
    }
  std::vector<Complex> vals(static_cast<std::size_t>(n) * n);
  kernels::evaluate_batch(rho, pts, vals);
  std::ostringstream os;
  const auto names = coordinate_names(p.model);
  for (const auto& nm : names) os << nm << ',';
  os << "re,im\n";
  for (std::size_t r = 0; r < vals.size(); ++r) {
    for (int q = 0; q < d; ++q) os << format_double(pts[r * d + q]) << ',';
    os << format_double(vals[r].real()) << ',' << format_double(vals[r].imag()) << '\n';
  }
  return os.str();
}

json write_wigner(const Pipeline& p, const RunConfig& c, const std::vector<double>& times) {
  json artifacts = json::array();
  for (std::size_t k = 0; k < times.size(); ++k) {
    const std::string name = "wigner_" + std::to_string(k) + ".csv";
    write_file_atomic(fs::path(c.out_dir) / name, wigner_csv(p, c, times[k]));
    artifacts.push_back({{"path", name}, {"kind", "wigner"}, {"t", times[k]}});
  }
  return artifacts;
}

json state_json(const InitialState& s, const RunConfig& c) {
  json j = {{"n", c.n}, {"l", c.l}, {"eigenstate", s.eigenstate}};
  if (std::isfinite(s.energy)) j["energy"] = s.energy;
  if (std::isfinite(s.angular_momentum)) j["angular_momentum"] = s.angular_momentum;
  return j;
}

// ---- verify ---------------------------------------------------------------

struct Check {
  std::string name;
  double residual;
  double threshold;
  std::string note;
  bool passed() const { return std::isfinite(residual) && residual <= threshold; }
};

Polynomial random_polynomial(int d, int max_degree, int terms, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> var(0, d - 1), deg(0, max_degree);
  Polynomial P(d);
  for (int t = 0; t < terms; ++t) {
    MultiIndex m;
    const int total = deg(rng);
    for (int k = 0; k < total; ++k) m = m + MultiIndex::unit(var(rng));
    P.add_term(m, {u(rng), u(rng)});
  }
  return P;
}

GaussPolySymbol random_gaussian(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat R(d, d), Q(d, d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      R(i, k) = u(rng);
      Q(i, k) = u(rng);
    }
  CMat M = (R * R.transpose() / d + 0.5 * Mat::Identity(d, d)).cast<Complex>();
  M += Complex(0.0, 0.2) * (Q + Q.transpose()).cast<Complex>();
  CVec b(d);
  for (int i = 0; i < d; ++i) b(i) = {0.5 * u(rng), 0.2 * u(rng)};
  return GaussPolySymbol(M, b, 0.0, random_polynomial(d, 2, 3, rng));
}

double rel(const GaussPolySymbol& a, const GaussPolySymbol& b) { return relative_distance(a, b); }

// Expanding rho0(Lambda x) in monomials loses about cond(Gamma)^deg in
// relative accuracy. Checks that need the explicit symbol stop where that
// factor passes 1e6.
double explicit_symbol_horizon(const Pipeline& p) {
  const int deg = std::max(1, p.initial.rho.polynomial().degree());
  double horizon = 0.0;
  for (double t : p.grid) {
    const Mat G = p.flow->at(t).Gamma;
    Eigen::JacobiSVD<Mat> svd(G);
    const double cond = svd.singularValues()(0) / svd.singularValues()(svd.singularValues().size() - 1);
    if (std::pow(cond, deg) > 1e6) break;
    horizon = t;
  }
  return horizon;
}

std::vector<Check> run_checks(const RunConfig& c, const Pipeline& p) {
  std::vector<Check> out;
  const ModelDefinition& m = p.model;
  const int d = m.system->dim();
  const double hbar = c.hbar();
  const double hbar_star = hbar * c.star_hbar_scale;
  const Mat pi0 = p.omega0.inverse();
  const Mat canon_pi = canonical_omega0(d).inverse();
  std::mt19937_64 rng(c.seed);

  if (p.initial.eigenstate) {
    const GaussPolySymbol& rho = p.initial.rho;
    const double nr = coefficient_norm(rho);
    const ResidualParts rh = eigenstate_residual_parts(rho, m.observables.at("H"), p.initial.energy, canon_pi, hbar_star);
    out.push_back({"eigenstate_energy", (rh.left + rh.right + rh.idempotency) / nr + rh.trace, c.residual_tolerance,
                   "H * rho = E rho, rho * rho = rho and unit trace in the canonical structure"});
    if (m.kind == ModelKind::MagneticCharge) {
      const ResidualParts rl = eigenstate_residual_parts(rho, m.observables.at("L"), p.initial.angular_momentum,
                                                         canon_pi, hbar_star, false);
      out.push_back({"eigenstate_angular_momentum", (rl.left + rl.right) / nr, c.residual_tolerance,
                     "L * rho = M rho"});
    }
  }

  {
    const double tr = std::abs(trace_at(p.state->initial(), std::sqrt(std::abs(p.omega0.determinant())), hbar) - 1.0);
    out.push_back({"initial_trace", tr, 1e-10, "Tr rho0 = 1 for the seed form"});
  }

  {
    double worst = 0.0;
    const int dd = std::min(d, 4);
    for (int s = 0; s < c.verify_samples; ++s) {
      const auto F = make_polynomial(random_polynomial(dd, 3, 4, rng));
      const auto G = make_polynomial(random_polynomial(dd, 3, 4, rng));
      const auto H = make_polynomial(random_polynomial(dd, 3, 4, rng));
      const Mat pi = pi0.topLeftCorner(dd, dd);
      const auto lhs = moyal_star(moyal_star(F, G, pi, hbar_star), H, pi, hbar_star);
      const auto rhs = moyal_star(F, moyal_star(G, H, pi, hbar_star), pi, hbar_star);
      worst = std::max(worst, rel(lhs, rhs));
    }
    out.push_back({"star_associativity", worst, 1e-10, std::to_string(c.verify_samples) + " random polynomial triples"});
  }

  {
    double worst_strategy = 0.0, worst_trace = 0.0;
    const double delta0 = std::sqrt(std::abs(p.omega0.determinant()));
    for (int s = 0; s < c.verify_samples; ++s) {
      const auto F = random_gaussian(d, rng);
      const auto G = make_polynomial(random_polynomial(d, 3, 4, rng));
      const auto a = moyal_star(F, G, pi0, hbar_star, StarStrategy::Series);
      const auto b = moyal_star(F, G, pi0, hbar_star, StarStrategy::GaussianLaw);
      worst_strategy = std::max(worst_strategy, rel(a, b));
      const Complex t1 = trace_at(a, delta0, hbar_star), t2 = trace_at(pointwise_product(F, G), delta0, hbar_star);
      worst_trace = std::max(worst_trace, std::abs(t1 - t2) / std::max(1.0, std::abs(t2)));
    }
    out.push_back({"star_strategy_agreement", worst_strategy, 1e-8, "series vs Gaussian-law product"});
    out.push_back({"trace_of_product", worst_trace, 1e-9, "Tr(F * G) = Tr(F G)"});
  }

  const double horizon = explicit_symbol_horizon(p);
  const std::string cut = horizon < c.t_max ? " (explicit symbol checked up to t = " + format_double(horizon) + ")" : "";
  if (c.t_max > 0.0) {
    double worst_liouville = 0.0, worst_structure = 0.0;
    const SymbolFamily fam = [&](double t) { return p.state->at(t); };
    for (double frac : {0.25, 0.5, 0.75}) {
      const double t = frac * c.t_max;
      if (frac * horizon > 0.0)
        worst_liouville = std::max(worst_liouville, quantum_liouville_residual(fam, frac * horizon, *p.ss, hbar_star));
      const double h = 1e-3 * std::min(c.t_max / 4, std::max(1.0, t));
      const Mat fd = (p.ss->omega(t + h) - p.ss->omega(t - h)) / (2 * h);
      const Mat od = p.ss->omega_dot(t);
      worst_structure = std::max(worst_structure, (fd - od).norm() / std::max(1.0, od.norm() + p.ss->omega(t).norm()));
    }
    out.push_back({"quantum_liouville", worst_liouville, 1e-6, "i hbar D_t rho + [rho, H] at 1/4, 1/2, 3/4 of the range" + cut});
    out.push_back({"structure_equation", worst_structure, 1e-5, "dOmega/dt = -(Omega A + A^T Omega)"});
  }

  {
    double worst = 0.0;
    for (double t : p.grid)
      if (t <= horizon) worst = std::max(worst, std::abs(trace_at(p.state->at(t), p.ss->delta(t), hbar) - 1.0));
    out.push_back({"trace_conservation", worst, 1e-9, "Tr_t rho(t) = 1 on the time grid" + cut});
  }

  {
    // same physics under a rescaled seed form
    const Mat base = p.omega0;
    const bool is_canonical = (base - canonical_omega0(d)).norm() == 0.0;
    const Mat partner = is_canonical ? Mat(3.0 * base) : canonical_omega0(d);
    const auto q = build_pipeline(c, &partner);
    double worst = 0.0;
    const auto route = route_of(c);
    for (const auto& [name, F] : m.observables) {
      if (m.kind == ModelKind::Generic && name != "x1" && name != "x2") continue;
      for (double t : p.grid) {
        const Complex a = expectation_value(F, *p.state, t, *p.ss, hbar, route);
        const Complex b = expectation_value(F, *q->state, t, *q->ss, hbar, route);
        worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
      }
    }
    out.push_back({"omega0_independence", worst, 1e-9,
                   is_canonical ? "paired run with 3x the seed form" : "paired run against the canonical seed form"});
  }

  if (m.name == "damped_oscillator" || m.kind == ModelKind::MagneticCharge) {
    const double rate = m.kind == ModelKind::MagneticCharge ? 2.0 * m.parameters.at("A") : -2.0 * m.parameters.at("alpha");
    double worst = 0.0;
    for (double t : p.grid) {
      const Complex v = expectation_value(m.observables.at("H"), *p.state, t, *p.ss, hbar, route_of(c));
      const double expect = p.initial.energy * std::exp(rate * t);
      worst = std::max(worst, std::abs(v - expect) / std::abs(expect));
    }
    out.push_back({"energy_decay_law", worst, 1e-8, "<H>(t) = E exp(rate t) with rate " + format_double(rate)});
  }
  return out;
}

}  // namespace

int cmd_simulate(const RunConfig& c, const CommandContext& ctx) {
  const auto p = build_pipeline(c);
  for (const auto& name : c.observables) observable(p->model, name);
  json artifacts = json::array();
  const auto route = route_of(c);
  for (const auto& name : c.observables) {
    ExpectationSeries s = expectation_series(observable(p->model, name), name, *p->state, p->grid, *p->ss, c.hbar(), route);
    const std::string file = name + (c.format == "csv" ? ".csv" : ".json");
    write_file_atomic(fs::path(c.out_dir) / file, c.format == "csv" ? series_to_csv(s) : series_to_json(s).dump(2) + "\n");
    artifacts.push_back({{"path", file}, {"kind", "expectation_series"}, {"observable", name}, {"rows", s.times.size()}});
  }
  for (auto& a : write_wigner(*p, c, c.wigner_times)) artifacts.push_back(a);
  write_manifest(c, "simulate", &p->model, artifacts,
                 {{"state", state_json(p->initial, c)},
                  {"flow", {{"closed_form", p->flow->closed_form()}, {"interp_order", p->flow->interp_order()},
                            {"stored_samples", p->flow->samples().size()}}},
                  {"expectation_route", c.route}});
  *ctx.out << "wrote " << artifacts.size() << " artifact(s) to " << c.out_dir << "\n";
  return kOk;
}

int cmd_verify(const RunConfig& c, const CommandContext& ctx) {
  const auto p = build_pipeline(c);
  const auto checks = run_checks(c, *p);
  json list = json::array();
  bool all = true;
  for (const auto& ch : checks) {
    all = all && ch.passed();
    list.push_back({{"name", ch.name},
                    {"passed", ch.passed()},
                    {"residual", std::isfinite(ch.residual) ? json(ch.residual) : json(nullptr)},
                    {"threshold", ch.threshold},
                    {"note", ch.note}});
  }
  json report = {{"version", kVersion},  {"model", p->model.name}, {"parameters", parameters_json(p->model)},
                 {"all_passed", all},     {"invariants", list},     {"star_hbar_scale", c.star_hbar_scale},
                 {"config", c.resolved}};
  write_file_atomic(fs::path(c.out_dir) / "verify_report.json", report.dump(2) + "\n");
  for (const auto& ch : checks)
    *ctx.out << (ch.passed() ? "PASS " : "FAIL ") << ch.name << " residual=" << format_double(ch.residual)
             << " threshold=" << ch.threshold << "\n";
  if (!all) {
    *ctx.err << "invariant failure: see " << (fs::path(c.out_dir) / "verify_report.json").string() << "\n";
    return kInvariantFailure;
  }
  return kOk;
}

int cmd_spectrum(const RunConfig& c, const CommandContext& ctx) {
  const ModelDefinition m = make_model(c);
  const double hbar = c.hbar();
  std::ostringstream csv;
  json rows = json::array();
  if (m.kind == ModelKind::DampedOscillator) {
    csv << "n,E\n";
    for (int n = c.spectrum_n_min; n <= c.spectrum_n_max; ++n) {
      const OscillatorState st = oscillator_state({c.parameters.at("omega"), hbar, n});
      csv << n << ',' << format_double(st.energy) << '\n';
      rows.push_back({{"n", n}, {"E", st.energy}, {"residual", st.residual}});
    }
  } else if (m.kind == ModelKind::MagneticCharge) {
    csv << "n,l,E,M\n";
    const double B = m.parameters.at("B");
    for (int n = c.spectrum_n_min; n <= c.spectrum_n_max; ++n)
      for (int l = c.spectrum_l_min; l <= c.spectrum_l_max; ++l) {
        const MagneticState st = magnetic_state({B, hbar, n, l});
        csv << n << ',' << l << ',' << format_double(st.energy) << ',' << format_double(st.angular_momentum) << '\n';
        rows.push_back({{"n", n}, {"l", l}, {"E", st.energy}, {"M", st.angular_momentum}, {"residual", st.residual}});
      }
  } else {
    throw ConfigError("config field 'model.name': spectrum is defined for the oscillator and magnetic models");
  }
  const std::string text = c.format == "csv" ? csv.str() : json{{"model", m.name}, {"levels", rows}}.dump(2) + "\n";
  const std::string file = std::string("spectrum.") + c.format;
  write_file_atomic(fs::path(c.out_dir) / file, text);
  write_manifest(c, "spectrum", &m, json::array({{{"path", file}, {"kind", "spectrum"}}}));
  *ctx.out << text;
  return kOk;
}

int cmd_models(const RunConfig& c, const CommandContext& ctx) {
  const auto cat = model_catalogue();
  if (c.format == "json") {
    json j = json::array();
    for (const auto& m : cat) {
      json params = json::array();
      for (const auto& p : m.parameters)
        params.push_back({{"name", p.name}, {"meaning", p.meaning}, {"default", p.default_value}});
      j.push_back({{"name", m.name}, {"summary", m.summary}, {"parameters", params}, {"observables", m.observables}});
    }
    *ctx.out << j.dump(2) << "\n";
    return kOk;
  }
  for (const auto& m : cat) {
    *ctx.out << m.name << "\n  " << m.summary << "\n  parameters:\n";
    for (const auto& p : m.parameters)
      *ctx.out << "    " << p.name << " (default " << p.default_value << "): " << p.meaning << "\n";
    *ctx.out << "  observables:";
    for (const auto& o : m.observables) *ctx.out << ' ' << o;
    *ctx.out << "\n";
  }
  return kOk;
}

int cmd_action_data(const RunConfig& c, const CommandContext& ctx) {
  const auto p = build_pipeline(c);
  json t = json::array(), om = json::array(), B = json::array(), C = json::array(), D = json::array();
  for (double s : p->grid) {
    const HamiltonianSample h = hamiltonian_coefficients(*p->ss, s);
    t.push_back(s);
    om.push_back(matrix_to_json(p->ss->omega(s)));
    B.push_back(matrix_to_json(h.B));
    json cv = json::array();
    for (int i = 0; i < h.C.size(); ++i) cv.push_back(h.C(i));
    C.push_back(cv);
    D.push_back(h.delta);
  }
  json out = {{"model", p->model.name}, {"t", t}, {"Omega", om}, {"B", B}, {"C", C}, {"Delta", D}};
  write_file_atomic(fs::path(c.out_dir) / "action_data.json", out.dump(2) + "\n");
  write_manifest(c, "action-data", &p->model, json::array({{{"path", "action_data.json"}, {"kind", "action_data"}}}));
  *ctx.out << "wrote action_data.json to " << c.out_dir << "\n";
  return kOk;
}

int cmd_wigner_grid(const RunConfig& c, const CommandContext& ctx) {
  const auto p = build_pipeline(c);
  const std::vector<double> times = c.wigner_times.empty() ? std::vector<double>{0.0} : c.wigner_times;
  const json artifacts = write_wigner(*p, c, times);
  write_manifest(c, "wigner-grid", &p->model, artifacts,
                 {{"state", state_json(p->initial, c)},
                  {"kernel", kernels::active_isa() == kernels::Isa::Avx2 ? "avx2" : "scalar"}});
  *ctx.out << "wrote " << artifacts.size() << " grid(s) to " << c.out_dir << "\n";
  return kOk;
}

int run_command(const std::string& name, const RunConfig& c, const CommandContext& ctx) {
  try {
    if (name == "simulate") return cmd_simulate(c, ctx);
    if (name == "verify") return cmd_verify(c, ctx);
    if (name == "spectrum") return cmd_spectrum(c, ctx);
    if (name == "models") return cmd_models(c, ctx);
    if (name == "action-data") return cmd_action_data(c, ctx);
    if (name == "wigner-grid") return cmd_wigner_grid(c, ctx);
    *ctx.err << "error: unknown command '" << name << "'\n";
    return kConfigError;
  } catch (const InputError& e) {
    *ctx.err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const IntegrationError& e) {
    *ctx.err << "numerical failure [linsys]: " << e.what() << " (t = " << format_double(e.time()) << ")\n";
    return kNumericalFailure;
  } catch (const ConstructionError& e) {
    *ctx.err << "numerical failure [states]: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const Error& e) {
    *ctx.err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const std::exception& e) {
    *ctx.err << "failure: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

}  // namespace dqlin::cli
