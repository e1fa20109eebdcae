#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "steklov/bounds.hpp"
#include "steklov/cli.hpp"
#include "steklov/error.hpp"
#include "steklov/exact_spectra.hpp"
#include "steklov/identity_checks.hpp"
#include "steklov/report_format.hpp"

namespace steklov::cli {

using bounds::BoundReport;
using fem::BoundaryCurve;
using fem::ConformalMetric;
using spaceform::CaseId;
using spaceform::CurvatureCase;

namespace {

constexpr double drift_limit = 0.05;
constexpr double weyl_band = 0.10;
constexpr double cross_report_margin = 1.10;
constexpr double pohozaev_position_tolerance = 1e-3;
constexpr double pohozaev_min_order = 1.0;
constexpr std::size_t fem_identity_j_max = 10;

// Input problems found while setting up the domain; mapped to exit code 2.
struct SetupError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Domain {
  int n = 1;
  double boundary_area = 0.0;
  std::optional<exact::BallDomain> ball;
  std::optional<BoundaryCurve> curve;
  std::optional<ConformalMetric> metric;
  std::unique_ptr<fem::SteklovProblem> problem;
  bounds::DomainDescriptor descriptor{};
};

Domain build_domain(const RunConfig& cfg) {
  Domain d;
  try {
    if (cfg.geometry == GeometryKind::Ball) {
      d.ball.emplace(spaceform::SpaceForm(cfg.curvature, cfg.dim), cfg.radius);
      d.n = d.ball->n();
      d.boundary_area = exact::boundary_area(*d.ball);
      d.descriptor = bounds::DomainDescriptor::ball(cfg.curvature, d.n, cfg.radius);
      return d;
    }
    d.metric = ConformalMetric::for_curvature(cfg.curvature);
    d.curve = make_curve(cfg.curve, *d.metric);
    d.n = 1;
    if (d.curve->smooth()) {
      const auto kr = fem::metric_curvature_range(*d.curve, *d.metric);
      d.descriptor = bounds::DomainDescriptor::curve(d.metric->curvature(), kr.min, kr.max);
    } else {
      const auto& o = cfg.case_params;
      d.descriptor = bounds::DomainDescriptor::curve(d.metric->curvature(), *o.kappa_minus, *o.kappa_plus);
    }
    d.problem = std::make_unique<fem::SteklovProblem>(fem::build_mesh(*d.curve, cfg.refinement), *d.metric, cfg.mass);
    d.boundary_area = fem::g_length(*d.curve, *d.metric);
    if (cfg.count > d.problem->mesh.boundary().size())
      throw SetupError("count " + std::to_string(cfg.count) + " exceeds the " +
                       std::to_string(d.problem->mesh.boundary().size()) + " boundary vertices of the mesh");
  } catch (const DomainError& e) {
    throw SetupError(e.what());
  } catch (const MeshError& e) {
    throw SetupError(e.what());
  }
  return d;
}

CurvatureCase build_case(const RunConfig& cfg, const Domain& d, double kappa_scale) {
  const CaseOverrides& o = cfg.case_params;
  try {
    std::optional<CurvatureCase> base;
    if (o.id && o.a && o.kappa_minus && o.kappa_plus) {
      base.emplace(*o.id, *o.a, *o.kappa_minus, *o.kappa_plus, d.n);
    } else {
      base = bounds::auto_case(d.descriptor);
      if (o.id || o.a || o.kappa_minus)
        base.emplace(o.id.value_or(base->id()), o.a.value_or(base->a()), o.kappa_minus.value_or(base->kappa_minus()),
                     base->kappa_plus(), d.n);
      if (o.kappa_plus) base = base->with_kappa_plus_unchecked(*o.kappa_plus);
    }
    if (kappa_scale != 1.0) base = base->with_kappa_plus_unchecked(kappa_scale * base->kappa_plus());
    return *base;
  } catch (const DomainError& e) {
    throw SetupError(e.what());
  }
}

std::string spectrum_csv(const SpectrumTable& t, std::size_t count) {
  std::ostringstream out;
  out << "j,value,multiplicity,mode\n";
  for (std::size_t j = 0; j < count; ++j) {
    const SpectrumEntry& e = t.entry_for(j);
    out << j << ',' << sci(t.at(j)) << ',' << e.multiplicity << ',' << e.mode << '\n';
  }
  return out.str();
}

linalg::EigenPairs leading_pairs(const linalg::EigenPairs& all, std::size_t m) {
  m = std::min(m, all.values.size());
  linalg::EigenPairs out;
  out.values.assign(all.values.begin(), all.values.begin() + static_cast<std::ptrdiff_t>(m));
  out.vectors = linalg::Matrix(all.vectors.rows(), m);
  for (std::size_t j = 0; j < m; ++j) std::copy_n(all.vectors.col(j).begin(), all.vectors.rows(), out.vectors.col(j).begin());
  return out;
}

std::vector<double> boundary_values(const fem::Mesh& mesh, double (*f)(fem::Point)) {
  std::vector<double> b(mesh.boundary().size());
  for (std::size_t k = 0; k < b.size(); ++k) b[k] = f(mesh.vertices()[mesh.boundary()[k]]);
  return b;
}

double re_z(fem::Point p) { return p.x; }
double re_z2(fem::Point p) { return p.x * p.x - p.y * p.y; }

struct Runner {
  const RunConfig& cfg;
  const RunOptions& opts;
  RunResult& result;
  Domain dom;
  std::optional<CurvatureCase> cs;
  double kt = 0.0;
  double tolerance = 0.0;
  std::optional<SpectrumTable> sigma, lambda;
  linalg::EigenPairs pairs;
  BoundReport bounds_report;
  std::ostringstream identities;
  bool identities_used = false;

  void add(std::string name, bool pass, std::string detail) {
    result.checks.push_back({std::move(name), pass, std::move(detail)});
  }

  void identity_rows(int refinement, const std::vector<identity::IdentityRow>& rows) {
    identity::write_identity_csv(identities, cfg.name, refinement, rows, !identities_used);
    identities_used = true;
  }

  void setup() {
    dom = build_domain(cfg);
    cs = build_case(cfg, dom, opts.kappa_scale);
    kt = bounds::effective_kappa(*cs).kappa_tilde;
    tolerance = opts.tolerance.value_or(cfg.method == Method::Exact ? bounds::exact_tolerance
                                                                     : bounds::fem_slack_fraction * kt);
    bounds_report = BoundReport(tolerance);
  }

  void spectra() {
    const std::size_t J = cfg.count;
    if (dom.ball) {
      sigma = exact::steklov_ball_spectrum(*dom.ball, J).truncated(J);
      lambda = exact::boundary_laplacian_spectrum(*dom.ball, J).truncated(J);
    } else {
      pairs = fem::steklov_eigenpairs(*dom.problem, J);
      sigma = fem::to_spectrum_table(pairs.values);
      lambda = fem::boundary_laplacian_spectrum_curve(dom.boundary_area, J);
    }
    result.files["spectrum_steklov.csv"] = spectrum_csv(*sigma, J);
    result.files["spectrum_laplacian.csv"] = spectrum_csv(*lambda, J);
    std::ostringstream weyl;
    for (const auto& [j, r] : bounds::weyl_series(*sigma, dom.boundary_area, dom.n, J - 1)) weyl << j << ' ' << sci(r) << '\n';
    result.files["weyl_ratio.dat"] = weyl.str();
  }

  void hypotheses() {
    const auto list = bounds::validate_hypotheses(*cs, dom.descriptor);
    std::string detail = list.ok() ? "all clauses hold" : "failed: " + list.first_failure();
    add("hypotheses", list.ok(), detail);
  }

  void theorem1() {
    const auto r = bounds::check_theorem1(*cs, *sigma, *lambda, cfg.count - 1, tolerance);
    bounds_report.append(r);
    std::string detail = "violations=" + std::to_string(r.violations()) + " worst_slack=" + fmt(r.worst_slack()) +
                         " tolerance=" + fmt(tolerance);
    if (const auto v = r.first_violation())
      detail += " first=" + r.records()[*v].ineq_id + "@j" + std::to_string(r.records()[*v].j);
    add("theorem1", r.passed(), detail);
  }

  void corollary1() {
    const auto fit = bounds::check_corollary1(*cs, *sigma, dom.boundary_area, cfg.count - 1);
    const auto buser = bounds::check_buser(*lambda, dom.boundary_area, dom.n, cfg.count - 1);
    bounds_report.append(fit.report);
    const double root_c = std::sqrt(buser.fitted);
    const bool cross = fit.fitted <= cross_report_margin * root_c;
    const bool pass = std::isfinite(fit.fitted) && fit.drift < drift_limit && cross;
    add("corollary1", pass,
        "fitted_C=" + fmt(fit.fitted) + " argmax=" + std::to_string(fit.argmax) + " drift=" + fmt(fit.drift) +
            " sqrt_fitted_c=" + fmt(root_c) + (cross ? "" : " cross_report_exceeded"));
  }

  void buser() {
    const auto fit = bounds::check_buser(*lambda, dom.boundary_area, dom.n, cfg.count - 1);
    bounds_report.append(fit.report);
    add("buser", std::isfinite(fit.fitted) && fit.drift < drift_limit,
        "fitted_c=" + fmt(fit.fitted) + " argmax=" + std::to_string(fit.argmax) + " drift=" + fmt(fit.drift));
  }

  void weyl() {
    const std::size_t j_max = cfg.count - 1;
    const std::size_t j_lo = 3 * j_max / 4 + 1;
    const double dev = bounds::weyl_band_deviation(*sigma, dom.boundary_area, dom.n, j_lo, j_max);
    add("weyl", dev <= weyl_band,
        "top_quartile=[" + std::to_string(j_lo) + "," + std::to_string(j_max) + "] max_deviation=" + fmt(dev));
  }

  void pohozaev() {
    const double hbar = spaceform::max_tube_width(*cs);
    std::vector<double> res, hm;
    double position_ratio = 0.0;
    double h_used = 0.0;
    const int first = std::max(0, cfg.refinement - 2);
    for (int ref = first; ref <= cfg.refinement; ++ref) {
      const fem::Mesh mesh = fem::build_mesh(*dom.curve, ref);
      const auto K = fem::assemble_stiffness(mesh);
      const auto u1 = fem::harmonic_extension(mesh, K, boundary_values(mesh, re_z));
      const auto u2 = fem::harmonic_extension(mesh, K, boundary_values(mesh, re_z2));
      const auto d0 = identity::distance_to_boundary(mesh, *dom.curve, *dom.metric);
      const double inradius = *std::max_element(d0.begin(), d0.end());
      h_used = std::min(0.5 * hbar, 0.5 * inradius);
      const auto pos = identity::pohozaev_residual(mesh, *dom.metric, K, u1, identity::position_field(mesh));
      const auto tr = identity::pohozaev_residual(mesh, *dom.metric, K, u2,
                                                  identity::build_F_field(mesh, *dom.metric, *cs, h_used, d0));
      position_ratio = std::abs(pos.residual) / std::abs(pos.i4);
      res.push_back(std::abs(tr.residual));
      hm.push_back(tr.h_mesh);
      const double pb = pohozaev_position_tolerance * std::abs(pos.i4);
      identity_rows(ref, {{"pohozaev_position", 0.0, 0, pos.i4, -pb, pb, pos.residual, std::abs(pos.residual) <= pb},
                          {"pohozaev_truncated", h_used, 0, tr.i4, 0.0, 0.0, tr.residual, true}});
    }
    bool decreasing = true;
    for (std::size_t k = 1; k < res.size(); ++k) decreasing = decreasing && res[k] < res[k - 1];
    const double order = res.size() > 1 ? std::log(res.front() / res.back()) / std::log(hm.front() / hm.back()) : 0.0;
    const bool order_ok = res.size() < 2 || (decreasing && order >= pohozaev_min_order);
    const bool pass = position_ratio <= pohozaev_position_tolerance && order_ok;
    add("pohozaev", pass,
        "position_residual/I4=" + fmt(position_ratio) + " truncated_h=" + fmt(h_used) + " truncated_order=" +
            fmt(order) + " refinements=" + std::to_string(first) + ".." + std::to_string(cfg.refinement));
  }

  void proposition1() {
    const auto sub = leading_pairs(pairs, fem_identity_j_max + 1);
    const auto r = identity::proposition1_check(*dom.problem, *cs, sub, tolerance);
    bounds_report.append(r.report);
    std::vector<identity::IdentityRow> rows;
    for (const auto& row : r.rows)
      rows.push_back({"flux_consistency", 0.0, row.j, row.flux_direct, row.flux * (1 - identity::flux_consistency_tolerance),
                      row.flux * (1 + identity::flux_consistency_tolerance), row.flux_rel_error,
                      row.flux_rel_error <= identity::flux_consistency_tolerance});
    identity_rows(cfg.refinement, rows);
    const bool pass = r.report.passed() && r.max_flux_rel_error <= identity::flux_consistency_tolerance;
    add("proposition1", pass,
        "violations=" + std::to_string(r.report.violations()) + " worst_slack=" + fmt(r.report.worst_slack()) +
            " max_flux_rel_error=" + fmt(r.max_flux_rel_error) + " j_max=" + std::to_string(sub.values.size() - 1));
  }

  void q_bounds() {
    const auto& mesh = dom.problem->mesh;
    const auto u = dom.problem->elimination.extend(pairs.vectors.col(1));
    const auto d0 = identity::distance_to_boundary(mesh, *dom.curve, *dom.metric);
    const auto sweep = identity::q_integral_sweep(mesh, *dom.metric, *cs, u, d0);
    std::vector<identity::IdentityRow> rows;
    bool pass = !sweep.empty();
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& q : sweep) {
      rows.push_back({"q_integral", q.h, 1, q.value, q.lo, q.hi, q.slack, q.pass});
      pass = pass && q.pass;
      worst = std::min(worst, q.slack / q.dirichlet);
    }
    identity_rows(cfg.refinement, rows);
    add("q_bounds", pass, "h_values=" + std::to_string(sweep.size()) + " worst_slack/energy=" + fmt(worst));
  }

  void checks() {
    for (Check c : cfg.checks) {
      switch (c) {
        case Check::Theorem1: theorem1(); break;
        case Check::Corollary1: corollary1(); break;
        case Check::Weyl: weyl(); break;
        case Check::Buser: buser(); break;
        case Check::Pohozaev: pohozaev(); break;
        case Check::Proposition1: proposition1(); break;
        case Check::QBounds: q_bounds(); break;
      }
    }
  }

  void collect() {
    std::ostringstream b;
    bounds_report.write_csv(b);
    result.files["bounds_report.csv"] = b.str();
    if (identities_used) result.files["identities_report.csv"] = identities.str();
  }
};

std::string summary_json(const RunConfig& cfg, const RunResult& r, const std::optional<CurvatureCase>& cs, double kt) {
  nlohmann::ordered_json j;
  j["domain"] = cfg.name;
  j["method"] = cfg.method == Method::Exact ? "exact" : "fem";
  j["count"] = cfg.count;
  if (cs) {
    j["case"] = {{"id", cs->id() == CaseId::Case1 ? "case1" : "case2"},
                 {"a", cs->a()},
                 {"kappa_minus", cs->kappa_minus()},
                 {"kappa_plus", cs->kappa_plus()},
                 {"kappa_tilde", kt},
                 {"n", cs->n()}};
  }
  std::size_t passed = 0;
  auto& list = j["checks"] = nlohmann::ordered_json::array();
  for (const CheckSummary& c : r.checks) {
    list.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    passed += c.pass ? 1 : 0;
  }
  j["passed"] = passed;
  j["failed"] = r.checks.size() - passed;
  j["exit_code"] = r.exit_code;
  j["status"] = !r.error.empty() ? "FAILED" : r.exit_code == 0 ? "PASS" : "FAIL";
  if (!r.error.empty()) j["error"] = r.error;
  return j.dump(2) + "\n";
}

}  // namespace

BoundaryCurve make_curve(const CurveSpec& spec, const ConformalMetric& metric) {
  const auto& p = spec.params;
  switch (spec.kind) {
    case CurveKind::Circle: return BoundaryCurve::circle(p.at(0));
    case CurveKind::GeodesicCircle: return BoundaryCurve::circle(metric.planar_radius(p.at(0)));
    case CurveKind::Ellipse: return BoundaryCurve::ellipse(p.at(0), p.at(1));
    case CurveKind::Star: return BoundaryCurve::star_shaped(p);
    case CurveKind::Polygon: {
      std::vector<fem::Point> v;
      for (std::size_t i = 0; i + 1 < p.size(); i += 2) v.push_back({p[i], p[i + 1]});
      return BoundaryCurve::polyline(std::move(v));
    }
  }
  throw DomainError("unknown curve kind");
}

RunResult run(const RunConfig& cfg, const RunOptions& opts) {
  RunResult result;
  Runner r{cfg, opts, result, {}, {}, 0.0, 0.0, {}, {}, {}, BoundReport(), {}, false};
  try {
    r.setup();
  } catch (const std::exception& e) {
    result.exit_code = 2;
    result.error = e.what();
    result.files["summary.json"] = summary_json(cfg, result, r.cs, r.kt);
    return result;
  }
  try {
    r.spectra();
    r.hypotheses();
    r.checks();
    r.collect();
    const bool all = std::all_of(result.checks.begin(), result.checks.end(), [](const CheckSummary& c) { return c.pass; });
    result.exit_code = all ? 0 : 1;
  } catch (const std::exception& e) {
    result.exit_code = 1;
    result.error = e.what();
    r.collect();
    for (auto& [name, content] : result.files)
      if (name.ends_with(".csv") || name.ends_with(".dat")) content += "FAILED " + result.error + "\n";
  }
  result.files["summary.json"] = summary_json(cfg, result, r.cs, r.kt);
  return result;
}

void write_outputs(const RunResult& result, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, content] : result.files) {
    std::ofstream out(std::filesystem::path(dir) / name, std::ios::binary);
    out << content;
    if (!out) throw std::runtime_error("cannot write " + (std::filesystem::path(dir) / name).string());
  }
}

void mesh_dump(const RunConfig& cfg, std::ostream& out) {
  if (cfg.geometry != GeometryKind::Planar) throw ConfigError(0, "mesh-dump requires planar geometry");
  try {
    const auto metric = ConformalMetric::for_curvature(cfg.curvature);
    fem::write_mesh(out, fem::build_mesh(make_curve(cfg.curve, metric), cfg.refinement));
  } catch (const DomainError& e) {
    throw ConfigError(0, e.what());
  } catch (const MeshError& e) {
    throw ConfigError(0, e.what());
  }
}

}  // namespace steklov::cli
