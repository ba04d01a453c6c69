#include "experiment.hpp"

#include <openssl/evp.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "builtin_specs.hpp"
#include "errors.hpp"
#include "flow_lab.hpp"
#include "good_functions.hpp"
#include "km_engine.hpp"
#include "rng.hpp"

namespace uniflow::runner {

using nlohmann::json;

std::string sha1_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha1(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

namespace {

std::string fmt_double(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_header() {
  return "schema_version,experiment,kind,index,param_delta,param_eps,param_T,param_word_radius,"
         "param_extra,measured,bound,k,C_k,alpha_k,l_M,r0,c_eps_log10,pass,wall_ms";
}

std::string row_csv(const ReportRow& r, const std::string& experiment, const km::KMConstants& c) {
  std::ostringstream os;
  os << csv_schema_version() << ',' << experiment << ',' << r.kind << ',' << r.index << ','
     << fmt_double(r.delta) << ',' << fmt_double(r.eps) << ',' << fmt_double(r.horizon) << ','
     << (r.word_radius >= 0 ? std::to_string(r.word_radius) : std::string()) << ',' << r.extra
     << ',' << fmt_double(r.measured) << ',' << fmt_double(r.bound) << ',' << c.k << ','
     << fmt_double(c.c_k) << ',' << fmt_double(c.alpha_k) << ',' << c.l_m << ','
     << fmt_double(c.r0) << ',' << fmt_double(r.c_eps_log10) << ',' << (r.pass ? 1 : 0) << ','
     << fmt_double(r.wall_ms);
  return os.str();
}

exact::Rational parse_rational(const json& v) {
  if (v.is_number_integer()) return exact::Rational(v.get<long>());
  if (v.is_string()) {
    exact::Rational q;
    if (q.set_str(v.get<std::string>(), 10) != 0)
      fail(Errc::invalid_config, "bad rational literal '" + v.get<std::string>() + "'");
    q.canonicalize();
    return q;
  }
  fail(Errc::invalid_config, "rational entries must be integers or 'p/q' strings");
}

exact::GaussRational parse_entry(const json& v) {
  if (v.is_array()) {
    if (v.size() != 2) fail(Errc::invalid_config, "complex entry must be [re, im]");
    return exact::GaussRational(parse_rational(v[0]), parse_rational(v[1]));
  }
  return exact::GaussRational(parse_rational(v));
}

exact::ExactMat2 parse_block(const json& v) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_array() || v[0].size() != 2 || !v[1].is_array() ||
      v[1].size() != 2)
    fail(Errc::invalid_config, "a generator block must be a 2x2 array");
  exact::ExactMat2 m;
  m.a = parse_entry(v[0][0]);
  m.b = parse_entry(v[0][1]);
  m.c = parse_entry(v[1][0]);
  m.d = parse_entry(v[1][1]);
  return m;
}

flow::DiscreteGroupSpec parse_group(const json& cfg) {
  if (!cfg.contains("group")) fail(Errc::invalid_config, "missing field 'group'");
  const json& g = cfg.at("group");
  if (g.is_string()) return builtin_group(g.get<std::string>());
  flow::DiscreteGroupSpec s;
  s.algebra = algebra_by_name(g.value("algebra", std::string("sl2r")));
  s.name = g.value("name", std::string("inline"));
  s.word_radius = g.value("word_radius", 6);
  if (!g.contains("generators") || !g.at("generators").is_array())
    fail(Errc::invalid_config, "inline group needs a 'generators' array");
  for (const json& gen : g.at("generators")) {
    lie::ExactGroupElement e;
    if (gen.is_array() && !gen.empty() && gen[0].is_array() && !gen[0].empty() &&
        gen[0][0].is_array()) {
      // list of blocks (product group)
      for (const json& b : gen) e.blocks.push_back(parse_block(b));
    } else {
      e.blocks.push_back(parse_block(gen));
    }
    if (static_cast<int>(e.blocks.size()) != s.algebra->n_factors())
      fail(Errc::invalid_config, "generator block count does not match the algebra");
    if (!e.unimodular()) fail(Errc::invalid_config, "generator determinant must be exactly 1");
    s.generators.push_back(std::move(e));
  }
  s.torsion_free = g.value("torsion_free", false);
  s.is_lattice = g.value("lattice", false);
  s.satisfies_star = g.value("satisfies_star", false);
  return s;
}

lie::AlgebraVector parse_direction(const json& cfg, const lie::SpecPtr& spec) {
  if (!cfg.contains("u") || (cfg.at("u").is_string() && cfg.at("u") == "upper"))
    return upper_direction(spec);
  const json& u = cfg.at("u");
  if (!u.is_array() || static_cast<int>(u.size()) != spec->dim())
    fail(Errc::invalid_config, "'u' must be 'upper' or a coordinate array of length dim");
  Eigen::VectorXd c(spec->dim());
  for (int i = 0; i < spec->dim(); ++i) c(i) = u[static_cast<size_t>(i)].get<double>();
  return lie::AlgebraVector(spec, std::move(c));
}

lie::FloatGroupElement parse_basepoint(const json& cfg, const lie::SpecPtr& spec) {
  if (!cfg.contains("basepoint") ||
      (cfg.at("basepoint").is_string() && cfg.at("basepoint") == "identity"))
    return lie::FloatGroupElement::identity(static_cast<size_t>(spec->n_factors()));
  const json& b = cfg.at("basepoint");
  auto read_vec = [&](const json& arr) {
    if (!arr.is_array() || static_cast<int>(arr.size()) != spec->dim())
      fail(Errc::invalid_config, "basepoint exponents must have length dim");
    Eigen::VectorXd c(spec->dim());
    for (int i = 0; i < spec->dim(); ++i) c(i) = arr[static_cast<size_t>(i)].get<double>();
    return lie::AlgebraVector(spec, std::move(c));
  };
  if (b.is_object() && b.contains("exp")) {
    auto g = lie::exp_map(read_vec(b.at("exp")));
    if (b.contains("exp2")) g = g * lie::exp_map(read_vec(b.at("exp2")));
    return g;
  }
  fail(Errc::invalid_config, "'basepoint' must be 'identity' or {\"exp\": [...], \"exp2\": [...]}");
}

std::vector<double> parse_grid(const json& cfg, const std::string& key,
                               std::vector<double> fallback = {}) {
  if (!cfg.contains(key)) {
    if (fallback.empty()) fail(Errc::invalid_config, "missing grid '" + key + "'");
    return fallback;
  }
  const json& v = cfg.at(key);
  std::vector<double> out;
  if (v.is_number()) {
    out.push_back(v.get<double>());
  } else if (v.is_array()) {
    for (auto& x : v) out.push_back(x.get<double>());
  }
  if (out.empty()) fail(Errc::invalid_config, "grid '" + key + "' must be non-empty");
  return out;
}

struct Plan {
  km::KMConstants constants;
  std::vector<std::function<ReportRow()>> points;
};

// ---------------------------------------------------------------------------
// Experiment kinds
// ---------------------------------------------------------------------------

Plan plan_goodness(const json& cfg, std::uint64_t seed, const Budget&) {
  Plan plan;
  plan.constants = km::KMConstants::for_dim(3, 2);
  double a = -1, b = 1;
  if (cfg.contains("interval")) {
    a = cfg.at("interval").at(0).get<double>();
    b = cfg.at("interval").at(1).get<double>();
  }
  if (!(a < b)) fail(Errc::invalid_config, "interval must satisfy a < b");
  good::SamplingPlan sampling;
  if (cfg.contains("plan")) {
    sampling.subintervals = cfg.at("plan").value("subintervals", 50);
    sampling.eps_count = cfg.at("plan").value("eps_count", 20);
  }

  std::vector<num::Poly> polys;
  if (cfg.contains("polynomials")) {
    for (auto& p : cfg.at("polynomials")) {
      std::vector<double> c;
      for (auto& x : p) c.push_back(x.get<double>());
      polys.emplace_back(std::move(c));
    }
  }
  if (cfg.contains("random_polynomials")) {
    const json& rp = cfg.at("random_polynomials");
    int count = rp.value("count", 10);
    int max_degree = rp.value("max_degree", 6);
    double range = rp.value("coeff_range", 5.0);
    if (max_degree < 1) fail(Errc::invalid_config, "max_degree must be >= 1");
    Rng rng(seed);
    for (int i = 0; i < count; ++i) {
      int deg = static_cast<int>(rng.int_in(1, max_degree));
      std::vector<double> c(static_cast<size_t>(deg) + 1);
      for (auto& x : c) x = rng.real_in(-range, range);
      if (std::fabs(c.back()) < 0.1) c.back() = c.back() < 0 ? -0.1 : 0.1;
      polys.emplace_back(std::move(c));
    }
  }
  if (polys.empty()) fail(Errc::invalid_config, "goodness experiment has no polynomials");

  for (size_t i = 0; i < polys.size(); ++i) {
    num::Poly p = polys[i];
    int idx = static_cast<int>(i);
    std::uint64_t sub_seed = seed + 1000 + i;
    plan.points.push_back([p, idx, a, b, sampling, sub_seed]() {
      ReportRow row;
      row.index = idx;
      row.kind = "goodness";
      int deg = std::max(1, p.degree());
      row.extra = "deg=" + std::to_string(deg);
      auto gc = good::polynomial_goodness_constants(deg);
      good::SamplingPlan sp = sampling;
      sp.seed = sub_seed;
      auto cert = good::verify_goodness(good::PolyFunction::poly(p), gc.c, gc.alpha, a, b, sp);
      row.measured = cert.worst_ratio;
      row.bound = 1.0;
      row.pass = cert.pass;
      return row;
    });
  }
  return plan;
}

Plan plan_km_bound(const json& cfg, std::uint64_t seed, const Budget& budget) {
  Plan plan;
  int dim = cfg.value("dim", 3);
  if (dim < 2 || dim > 6) fail(Errc::invalid_config, "km_bound dim must be in [2,6]");
  plan.constants = km::KMConstants::for_dim(dim, cfg.value("l_M", 1));
  int count = cfg.value("count", 20);
  auto eps_fracs = parse_grid(cfg, "eps_fraction", {0.5});
  double scale_lo = 1.0, scale_hi = 1.0;
  if (cfg.contains("scale")) {
    scale_lo = cfg.at("scale").at(0).get<double>();
    scale_hi = cfg.at("scale").at(1).get<double>();
  }
  auto constants = plan.constants;
  int idx = 0;
  for (int i = 0; i < count; ++i) {
    for (double frac : eps_fracs) {
      if (!(frac > 0) || !(frac < 1))
        fail(Errc::invalid_config, "eps_fraction values must lie in (0,1)");
      std::uint64_t point_seed = seed;
      int point_index = idx++;
      int instance = i;
      plan.points.push_back([constants, budget, point_seed, point_index, instance, frac, dim,
                             scale_lo, scale_hi]() {
        Rng rng = Rng::derive(point_seed, static_cast<std::uint64_t>(instance));
        auto lam = random_lattice(rng, dim, dim, scale_lo, scale_hi);
        auto n = random_nilpotent_matrix(rng, dim);
        double b_lo = rng.real_in(-1.0, 1.0);
        double b_hi = b_lo + rng.real_in(0.5, 2.0);
        ReportRow row;
        row.index = point_index;
        row.kind = "km_bound";
        auto r = km::rho(lam, n, b_lo, b_hi, constants, budget);
        double eps = frac * r.rho;
        row.eps = eps;
        row.extra = "rho=" + fmt_double(r.rho);
        auto rep = km::check_km_bound(lam, n, b_lo, b_hi, eps, constants, budget);
        row.measured = rep.measured;
        row.bound = rep.bound;
        row.pass = rep.pass;
        return row;
      });
    }
  }
  return plan;
}

Plan plan_bad_set(const json& cfg, std::uint64_t, const Budget& budget) {
  Plan plan;
  auto group = parse_group(cfg);
  if (cfg.contains("word_radius")) group.word_radius = cfg.at("word_radius").get<int>();
  auto u = parse_direction(cfg, group.algebra);
  auto basepoint = parse_basepoint(cfg, group.algebra);
  auto deltas = parse_grid(cfg, "delta");
  auto horizons = parse_grid(cfg, "T");
  plan.constants = km::KMConstants::for_dim(group.algebra->dim(), default_l_m(group.algebra),
                                            cfg.contains("constants")
                                                ? cfg.at("constants").value("r0", -1.0)
                                                : -1.0);
  int idx = 0;
  for (double t_end : horizons) {
    for (double delta : deltas) {
      if (!(t_end > 0)) fail(Errc::invalid_config, "field 'T' must be positive");
      if (!(delta > 0)) fail(Errc::invalid_config, "field 'delta' must be positive");
      int point_index = idx++;
      plan.points.push_back([group, u, basepoint, delta, t_end, budget, point_index]() {
        flow::TrajectorySpec traj{u, basepoint, t_end, delta};
        auto res = flow::bad_set(group, traj, budget);
        ReportRow row;
        row.index = point_index;
        row.kind = "bad_set";
        row.delta = delta;
        row.horizon = t_end;
        row.word_radius = group.word_radius;
        row.extra = "components=" + std::to_string(res.components);
        row.measured = res.measure;
        row.bound = t_end;  // trivial container bound
        row.pass = res.measure <= t_end * (1.0 + 1e-9);
        return row;
      });
    }
  }
  return plan;
}

Plan plan_theorem11(const json& cfg, std::uint64_t seed, const Budget& budget) {
  Plan plan;
  auto group = parse_group(cfg);
  if (cfg.contains("word_radius")) group.word_radius = cfg.at("word_radius").get<int>();
  auto u = parse_direction(cfg, group.algebra);
  auto deltas = parse_grid(cfg, "delta");
  auto epss = parse_grid(cfg, "eps");
  double t_end = cfg.value("T", 50.0);
  double r0 = cfg.contains("constants") ? cfg.at("constants").value("r0", -1.0) : -1.0;
  int l_m = cfg.contains("constants") ? cfg.at("constants").value("l_M", default_l_m(group.algebra))
                                      : default_l_m(group.algebra);
  plan.constants = km::KMConstants::for_dim(group.algebra->dim(), l_m, r0);
  auto constants = plan.constants;

  std::vector<lie::FloatGroupElement> basepoints;
  if (cfg.contains("random_basepoints")) {
    int count = cfg.at("random_basepoints").get<int>();
    double delta_max = *std::max_element(deltas.begin(), deltas.end());
    for (int i = 0; i < count; ++i) {
      Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(i) + 7777);
      bool placed = false;
      for (int tries = 0; tries < 60 && !placed; ++tries) {
        auto g = random_basepoint(rng, group.algebra);
        if (flow::in_injectivity_set(group, g, delta_max, budget)) {
          basepoints.push_back(g);
          placed = true;
        }
      }
      if (!placed) fail(Errc::precondition, "could not place a basepoint inside X_delta");
    }
  } else {
    basepoints.push_back(parse_basepoint(cfg, group.algebra));
  }

  int idx = 0;
  for (size_t bi = 0; bi < basepoints.size(); ++bi)
    for (double delta : deltas)
      for (double eps : epss) {
        int point_index = idx++;
        auto basepoint = basepoints[bi];
        plan.points.push_back(
            [group, u, basepoint, delta, eps, t_end, constants, budget, point_index, bi]() {
              flow::TrajectorySpec traj{u, basepoint, t_end, delta};
              auto rep = flow::verify_theorem_1_1(group, traj, eps, constants, budget);
              ReportRow row;
              row.index = point_index;
              row.kind = "theorem11";
              row.delta = delta;
              row.eps = eps;
              row.horizon = t_end;
              row.word_radius = group.word_radius;
              row.extra = "basepoint=" + std::to_string(bi);
              row.measured = rep.measured_proportion;
              row.bound = eps;
              row.c_eps_log10 = rep.c_eps_log10;
              row.pass = rep.pass;
              return row;
            });
      }
  return plan;
}

Plan plan_dichotomy(const json& cfg, std::uint64_t, const Budget& budget) {
  Plan plan;
  auto spec = algebra_by_name(cfg.value("algebra", std::string("sl2r")));
  plan.constants = km::KMConstants::for_dim(spec->dim(), default_l_m(spec));
  auto u = parse_direction(cfg, spec);
  if (!cfg.contains("lattice") || !cfg.at("lattice").is_array())
    fail(Errc::invalid_config, "dichotomy experiment needs 'lattice' rows in algebra coordinates");
  std::vector<std::vector<double>> rows;
  for (auto& r : cfg.at("lattice")) {
    std::vector<double> v;
    for (auto& x : r) v.push_back(x.get<double>());
    if (static_cast<int>(v.size()) != spec->dim())
      fail(Errc::invalid_config, "lattice row length must equal the algebra dimension");
    rows.push_back(std::move(v));
  }
  auto thresholds = parse_grid(cfg, "threshold");

  // Euclideanize: vectors and flow in the Killing-orthonormal frame.
  lattice::LatticeBasis lam;
  lam.ambient_dim = spec->dim();
  for (auto& r : rows) {
    Eigen::VectorXd c(spec->dim());
    for (int i = 0; i < spec->dim(); ++i) c(i) = r[static_cast<size_t>(i)];
    lam.vectors.push_back(spec->to_euclidean(c));
  }
  Eigen::MatrixXd t = spec->euclidean_factor();
  Eigen::MatrixXd n = t * spec->ad(u.coords) *
                      t.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(
                          spec->dim(), spec->dim()));

  int idx = 0;
  for (double threshold : thresholds) {
    int point_index = idx++;
    plan.points.push_back([lam, n, threshold, budget, point_index]() {
      auto res = km::detect_invariant_sublattice(lam, n, threshold, budget);
      ReportRow row;
      row.index = point_index;
      row.kind = "dichotomy";
      row.extra = res.found ? "found_rank=" + std::to_string(res.sublattice.rank()) : "not_found";
      row.measured = res.found ? res.covolume : 0.0;
      row.bound = res.found ? std::pow(threshold, res.sublattice.rank()) : 0.0;
      row.pass = !res.found || res.covolume < row.bound;
      return row;
    });
  }
  return plan;
}

Plan plan_product(const json& cfg, std::uint64_t, const Budget& budget) {
  Plan plan;
  auto group = parse_group(cfg);
  if (group.algebra->n_factors() < 2)
    fail(Errc::invalid_config, "product experiment needs a multi-factor group");
  if (cfg.contains("word_radius")) group.word_radius = cfg.at("word_radius").get<int>();
  auto u = parse_direction(cfg, group.algebra);
  auto basepoint = parse_basepoint(cfg, group.algebra);
  auto deltas = parse_grid(cfg, "delta");
  auto epss = parse_grid(cfg, "eps", {0.3, 0.5});
  double t_end = cfg.value("T", 20.0);
  int l_m = default_l_m(group.algebra);
  double r0 = cfg.contains("constants") ? cfg.at("constants").value("r0", -1.0) : -1.0;
  plan.constants = km::KMConstants::for_dim(group.algebra->dim(), l_m, r0);
  auto constants = plan.constants;

  // Per-factor projections of the group, flow, and basepoint.
  std::vector<flow::DiscreteGroupSpec> factor_specs;
  std::vector<flow::TrajectorySpec> factor_trajs;
  for (int f = 0; f < group.algebra->n_factors(); ++f) {
    flow::DiscreteGroupSpec fs;
    fs.algebra = lie::LieAlgebraSpec::make({group.algebra->factor(f)});
    fs.word_radius = group.word_radius;
    fs.name = group.name + "_factor" + std::to_string(f);
    for (auto& g : group.generators) {
      lie::ExactGroupElement e;
      e.blocks.push_back(g.blocks[static_cast<size_t>(f)]);
      if (!e.is_identity()) fs.generators.push_back(std::move(e));
    }
    factor_specs.push_back(fs);
    const int off = group.algebra->factor_offset(f);
    const int d = group.algebra->factor_dim_of(f);
    lie::AlgebraVector fu(fs.algebra, u.coords.segment(off, d));
    lie::FloatGroupElement fb;
    fb.blocks.push_back(basepoint.blocks[static_cast<size_t>(f)]);
    factor_trajs.push_back({fu, fb, t_end, deltas.front()});
  }

  int idx = 0;
  for (double delta : deltas) {
    int point_index = idx++;
    plan.points.push_back([group, u, basepoint, factor_specs, factor_trajs, delta, t_end, budget,
                           point_index]() {
      flow::TrajectorySpec traj{u, basepoint, t_end, delta};
      auto paired = flow::bad_set(group, traj, budget);
      auto inter = flow::product_bad_set(factor_specs, factor_trajs, delta, budget);
      ReportRow row;
      row.index = point_index;
      row.kind = "product";
      row.extra = "consistency";
      row.delta = delta;
      row.horizon = t_end;
      row.word_radius = group.word_radius;
      row.measured = std::fabs(paired.measure - inter.measure);
      row.bound = 1e-6;
      row.pass = row.measured <= row.bound;
      return row;
    });
    for (double eps : epss) {
      int point_index2 = idx++;
      plan.points.push_back([group, u, basepoint, delta, eps, t_end, constants, budget,
                             point_index2]() {
        flow::TrajectorySpec traj{u, basepoint, t_end, delta};
        auto rep = flow::verify_theorem_1_1(group, traj, eps, constants, budget);
        ReportRow row;
        row.index = point_index2;
        row.kind = "product";
        row.extra = "theorem";
        row.delta = delta;
        row.eps = eps;
        row.horizon = t_end;
        row.word_radius = group.word_radius;
        row.measured = rep.measured_proportion;
        row.bound = eps;
        row.c_eps_log10 = rep.c_eps_log10;
        row.pass = rep.pass;
        return row;
      });
    }
  }
  return plan;
}

}  // namespace

RunResult run_config_text(const std::string& json_text, const std::string& name,
                          const RunOptions& options) {
  RunResult result;
  json cfg;
  try {
    cfg = json::parse(json_text);
  } catch (const std::exception& e) {
    result.exit_code = 2;
    result.error = std::string("config parse error: ") + e.what();
    return result;
  }

  Budget budget;
  if (options.budget > 0) {
    budget.candidates = options.budget;
    budget.ball_size = options.budget;
  }

  Plan plan;
  std::uint64_t seed = options.seed ? *options.seed : cfg.value("seed", 1ULL);
  std::string experiment = cfg.value("name", name);
  try {
    std::string kind = cfg.value("kind", std::string());
    if (kind == "goodness")
      plan = plan_goodness(cfg, seed, budget);
    else if (kind == "km_bound")
      plan = plan_km_bound(cfg, seed, budget);
    else if (kind == "bad_set")
      plan = plan_bad_set(cfg, seed, budget);
    else if (kind == "theorem11")
      plan = plan_theorem11(cfg, seed, budget);
    else if (kind == "dichotomy")
      plan = plan_dichotomy(cfg, seed, budget);
    else if (kind == "product")
      plan = plan_product(cfg, seed, budget);
    else
      fail(Errc::invalid_config, "unknown experiment kind '" + kind + "'");
  } catch (const Error& e) {
    result.exit_code = e.code() == Errc::budget_exceeded ? 3 : 2;
    result.error = e.what();
    return result;
  } catch (const std::exception& e) {
    result.exit_code = 2;
    result.error = e.what();
    return result;
  }

  // Worker pool over sweep points; rows land at their sweep index.
  result.rows.assign(plan.points.size(), ReportRow{});
  std::vector<char> done(plan.points.size(), 0);
  std::atomic<size_t> next{0};
  std::atomic<bool> budget_hit{false};
  std::mutex error_mutex;
  std::string first_error;
  int nthreads = std::max(1, options.threads);
  auto worker = [&]() {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= plan.points.size()) return;
      auto start = std::chrono::steady_clock::now();
      try {
        result.rows[i] = plan.points[i]();
        done[i] = 1;
      } catch (const Error& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (e.code() == Errc::budget_exceeded) budget_hit = true;
        if (first_error.empty()) first_error = e.what();
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (first_error.empty()) first_error = e.what();
      }
      auto end = std::chrono::steady_clock::now();
      result.rows[i].wall_ms = std::chrono::duration<double, std::milli>(end - start).count();
    }
  };
  std::vector<std::thread> threads;
  for (int i = 1; i < nthreads; ++i) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();

  int failures = 0;
  int completed = 0;
  for (size_t i = 0; i < result.rows.size(); ++i) {
    if (!done[i]) continue;
    ++completed;
    if (!result.rows[i].pass) ++failures;
  }
  result.partial = completed != static_cast<int>(result.rows.size());

  std::ostringstream csv;
  csv << csv_header() << '\n';
  for (size_t i = 0; i < result.rows.size(); ++i)
    if (done[i]) csv << row_csv(result.rows[i], experiment, plan.constants) << '\n';
  result.csv = csv.str();

  if (result.partial)
    result.exit_code = budget_hit ? 3 : 2;
  else
    result.exit_code = failures == 0 ? 0 : 1;
  if (!first_error.empty()) result.error = first_error;

  json summary;
  summary["experiment"] = experiment;
  summary["config"] = cfg;
  summary["config_sha1"] = sha1_hex(json_text);
  summary["schema_version"] = csv_schema_version();
  summary["seed"] = seed;
  summary["rows"] = completed;
  summary["failures"] = failures;
  summary["partial"] = result.partial;
  summary["exit_code"] = result.exit_code;
  if (!result.error.empty()) summary["error"] = result.error;
  summary["constants"] = {{"k", plan.constants.k},       {"C_k", plan.constants.c_k},
                          {"alpha_k", plan.constants.alpha_k}, {"l_M", plan.constants.l_m},
                          {"r0", plan.constants.r0}};
  summary["r0_certified"] = false;  // r0 is configured, results are conditional on it
  result.summary_json = summary.dump(2) + "\n";

  if (!options.out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(options.out_dir, ec);
    std::ofstream csv_out(std::filesystem::path(options.out_dir) / "report.csv");
    std::ofstream sum_out(std::filesystem::path(options.out_dir) / "summary.json");
    if (!csv_out || !sum_out) {
      result.exit_code = 2;
      result.error = "cannot write into output directory " + options.out_dir;
      return result;
    }
    csv_out << result.csv;
    sum_out << result.summary_json;
  }
  return result;
}

RunResult run_config_file(const std::string& path, const RunOptions& options) {
  std::ifstream in(path);
  if (!in) {
    RunResult r;
    r.exit_code = 2;
    r.error = "cannot open config file " + path;
    return r;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string stem = std::filesystem::path(path).stem().string();
  return run_config_text(ss.str(), stem, options);
}

std::string list_specs_json() {
  json out;
  out["version"] = version();
  out["algebras"] = json::array();
  for (auto& name : algebra_names()) {
    auto spec = algebra_by_name(name);
    out["algebras"].push_back({{"name", name},
                               {"dim", spec->dim()},
                               {"factors", spec->n_factors()},
                               {"default_l_M", default_l_m(spec)},
                               {"default_r0", 0.1 / spec->dim()}});
  }
  out["groups"] = json::array();
  for (auto& e : builtin_groups()) {
    out["groups"].push_back({{"name", e.spec.name},
                             {"algebra", e.spec.algebra->name()},
                             {"generators", e.spec.generators.size()},
                             {"word_radius", e.spec.word_radius},
                             {"torsion_free", e.spec.torsion_free},
                             {"lattice", e.spec.is_lattice},
                             {"satisfies_star", e.spec.satisfies_star},
                             {"description", e.description}});
  }
  return out.dump(2) + "\n";
}

}  // namespace uniflow::runner
