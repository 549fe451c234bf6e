#include "vortexdom/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vortexdom/domain.hpp"
#include "vortexdom/errors.hpp"

namespace vortexdom {

namespace {

double env_or(const char* name, double fallback) {
  const char* v = std::getenv(name);
  return v ? std::atof(v) : fallback;
}

class stage_timer {
 public:
  explicit stage_timer(nlohmann::ordered_json& block) : block_(block) {}

  template <typename F>
  auto run(const std::string& name, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    auto finish = [&] {
      const auto t1 = std::chrono::steady_clock::now();
      block_[name + "_ms"] =
          std::chrono::duration<double, std::milli>(t1 - t0).count();
    };
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      finish();
    } else {
      auto r = f();
      finish();
      return r;
    }
  }

 private:
  nlohmann::ordered_json& block_;
};

void write_json_file(const nlohmann::ordered_json& j,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return cfg.output_dir + "/" + name;
}

void prepare_output_dir(const RunConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec || !std::filesystem::is_directory(cfg.output_dir))
    throw io_error("output directory is not writable: " + cfg.output_dir);
}

nlohmann::ordered_json report_header(const RunConfig& cfg,
                                     const std::string& command) {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["tool_version"] = kToolVersion;
  j["command"] = command;
  j["config"] = cfg.echo();
  return j;
}

// Runs a pipeline stage; on failure the error is recorded in the report,
// the partial report is persisted, and the error propagates.
template <typename F>
auto stage(nlohmann::ordered_json& rep, const RunConfig& cfg,
           const std::string& report_file, const std::string& name, F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    rep["error"] = {{"stage", name}, {"message", e.what()}};
    write_json_file(rep, out_path(cfg, report_file));
    throw;
  }
}

double resolve_speed(const RunConfig& cfg, const VorticitySpec& spec,
                     bool& calibrated) {
  if (cfg.speed) {
    calibrated = false;
    return *cfg.speed;
  }
  if (!spec.smooth_profile())
    throw precondition_error(
        "speed calibration requires a smooth vorticity profile; set an "
        "explicit speed for patch-type profiles");
  calibrated = true;
  return calibrate_speed(spec, cfg.tolerances);
}

// Cached field large enough for escape detection at the default radius.
CachedField make_cached_field(const StreamSolver& solver) {
  const double L = 5.5 * solver.scale();
  const bool ring =
      solver.vortex().vorticity.geometry() == GeometryKind::Ring3D;
  const Box box{-L, L, 0.0, L};
  (void)ring;
  return CachedField(solver, box, 221, 111);
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot read config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw precondition_error("config parse error: " + std::string(e.what()));
  }
  const std::string dir =
      std::filesystem::path(path).parent_path().string();
  return from_json(j, dir);
}

RunConfig RunConfig::from_json(const nlohmann::json& j,
                               const std::string& base_dir) {
  RunConfig cfg;
  cfg.base_dir = base_dir;
  try {
    cfg.vortex = j.at("vortex");
    if (j.contains("speed")) {
      if (j["speed"].is_string()) {
        if (j["speed"] != "calibrate")
          throw precondition_error(
              "speed must be a number or \"calibrate\"");
      } else {
        cfg.speed = j["speed"].get<double>();
      }
    }
    if (j.contains("tolerances")) {
      const auto& t = j["tolerances"];
      if (t.contains("quadrature"))
        cfg.tolerances.quadrature = t["quadrature"].get<double>();
      if (t.contains("root")) cfg.tolerances.root = t["root"].get<double>();
      if (t.contains("ode")) cfg.tolerances.ode = t["ode"].get<double>();
    }
    cfg.tolerances.quadrature =
        env_or("VORTEXDOM_TOL_QUADRATURE", cfg.tolerances.quadrature);
    cfg.tolerances.root = env_or("VORTEXDOM_TOL_ROOT", cfg.tolerances.root);
    cfg.tolerances.ode = env_or("VORTEXDOM_TOL_ODE", cfg.tolerances.ode);
    if (!(cfg.tolerances.quadrature > 0.0) || !(cfg.tolerances.root > 0.0) ||
        !(cfg.tolerances.ode > 0.0))
      throw precondition_error("tolerances must be positive");

    if (j.contains("sweep")) {
      Sweep s;
      s.parameter = j["sweep"].at("parameter").get<std::string>();
      const auto& r = j["sweep"].at("range");
      s.lo = r.at(0).get<double>();
      s.hi = r.at(1).get<double>();
      s.steps = j["sweep"].at("steps").get<int>();
      if (!(s.hi > s.lo) || s.steps < 2)
        throw precondition_error(
            "sweep range must be nonempty with at least 2 steps");
      cfg.sweep = s;
    }
    if (j.contains("output_dir"))
      cfg.output_dir = j["output_dir"].get<std::string>();
    if (!cfg.output_dir.empty() && cfg.output_dir[0] != '/' &&
        !base_dir.empty())
      cfg.output_dir = base_dir + "/" + cfg.output_dir;
    if (j.contains("seeds")) {
      for (const auto& s : j["seeds"])
        cfg.seeds.push_back({s.at(0).get<double>(), s.at(1).get<double>()});
    }
    if (j.contains("n_boundary")) cfg.n_boundary = j["n_boundary"].get<int>();
    if (cfg.n_boundary < 3)
      throw precondition_error("n_boundary must be at least 3");
    if (j.contains("invariance")) {
      Invariance inv;
      const auto& b = j["invariance"];
      if (b.contains("particles")) inv.particles = b["particles"].get<int>();
      if (b.contains("horizon")) inv.horizon = b["horizon"].get<double>();
      if (b.contains("rng_seed"))
        inv.rng_seed = b["rng_seed"].get<unsigned>();
      cfg.invariance = inv;
    }
  } catch (const nlohmann::json::exception& e) {
    throw precondition_error("config schema error: " + std::string(e.what()));
  }
  return cfg;
}

VorticitySpec RunConfig::make_spec() const {
  return VorticitySpec::from_json(vortex, base_dir);
}

nlohmann::ordered_json RunConfig::echo() const {
  nlohmann::ordered_json j;
  j["vortex"] = vortex;
  if (speed)
    j["speed"] = *speed;
  else
    j["speed"] = "calibrate";
  j["tolerances"] = {{"quadrature", tolerances.quadrature},
                     {"root", tolerances.root},
                     {"ode", tolerances.ode}};
  if (sweep)
    j["sweep"] = {{"parameter", sweep->parameter},
                  {"range", {sweep->lo, sweep->hi}},
                  {"steps", sweep->steps}};
  j["output_dir"] = output_dir;
  if (!seeds.empty()) {
    nlohmann::ordered_json s = nlohmann::ordered_json::array();
    for (const auto& p : seeds) s.push_back({p.x, p.y});
    j["seeds"] = s;
  }
  j["n_boundary"] = n_boundary;
  if (invariance)
    j["invariance"] = {{"particles", invariance->particles},
                       {"horizon", invariance->horizon},
                       {"rng_seed", invariance->rng_seed}};
  return j;
}

// ---------------------------------------------------------------------------
// analyze

nlohmann::ordered_json run_analyze(const RunConfig& cfg) {
  prepare_output_dir(cfg);
  nlohmann::ordered_json rep = report_header(cfg, "analyze");
  nlohmann::ordered_json timing;
  stage_timer timer(timing);
  const std::string rf = "report.json";

  const VorticitySpec spec =
      stage(rep, cfg, rf, "config", [&] { return cfg.make_spec(); });

  const SteinerReport steiner = stage(rep, cfg, rf, "steiner", [&] {
    const SteinerReport r = timer.run("steiner", [&] {
      return check_steiner(spec);
    });
    if (!r.is_symmetric) {
      std::ostringstream msg;
      msg << "vorticity is not Steiner symmetric (max violation "
          << r.max_violation << ")";
      throw precondition_error(msg.str());
    }
    return r;
  });
  rep["steiner"] = {{"is_symmetric", steiner.is_symmetric},
                    {"max_violation", steiner.max_violation}};

  bool calibrated = false;
  const double W = stage(rep, cfg, rf, "speed", [&] {
    return timer.run("speed",
                     [&] { return resolve_speed(cfg, spec, calibrated); });
  });
  rep["speed"] = {{"value", W}, {"calibrated", calibrated}};

  const StreamSolver solver(TravelingVortex(spec, W), cfg.tolerances);
  const double steadiness = stage(rep, cfg, rf, "steadiness", [&] {
    return timer.run("steadiness", [&] { return solver.steadiness_residual(); });
  });
  rep["steadiness_residual"] = steadiness;

  const DomainExtractor extractor(solver);
  const DomainResult dom = stage(rep, cfg, rf, "extract", [&] {
    return timer.run("extract", [&] { return extractor.extract(cfg.n_boundary); });
  });
  rep["classification"] = {{"topology", to_string(dom.topology)},
                           {"case", to_string(dom.case_tag)},
                           {"center_speed", dom.center_speed},
                           {"center_speed_over_W", dom.center_speed / W}};
  rep["domain"] = dom.to_json();

  stage(rep, cfg, rf, "export", [&] {
    timer.run("export", [&] {
      export_boundary_csv(dom, out_path(cfg, "boundary.csv"));
      Box box = spec.support_box().inflated(2.0);
      if (spec.geometry() == GeometryKind::Ring3D) box.y0 = 0.0;
      export_field_csv(solver, box, 61, 31, out_path(cfg, "field.csv"));
    });
  });

  if (!cfg.seeds.empty() || cfg.invariance) {
    const CachedField field = stage(rep, cfg, rf, "cache", [&] {
      return timer.run("cache", [&] { return make_cached_field(solver); });
    });
    if (!cfg.seeds.empty()) {
      nlohmann::ordered_json traces = nlohmann::ordered_json::array();
      stage(rep, cfg, rf, "trace", [&] {
        timer.run("trace", [&] {
          TraceOptions opt;
          opt.tol = cfg.tolerances.ode;
          for (size_t i = 0; i < cfg.seeds.size(); ++i) {
            const StreamlineTrace tr = trace(field, cfg.seeds[i], opt);
            export_trace_csv(
                tr, out_path(cfg, "trace_" + std::to_string(i) + ".csv"));
            traces.push_back(tr.to_json());
          }
        });
      });
      rep["traces"] = traces;
    }
    if (cfg.invariance) {
      const InvarianceReport inv = stage(rep, cfg, rf, "invariance", [&] {
        return timer.run("invariance", [&] {
          return verify_domain_invariance(field, dom, cfg.invariance->particles,
                                          cfg.invariance->horizon,
                                          cfg.invariance->rng_seed,
                                          cfg.tolerances.ode);
        });
      });
      rep["invariance"] = inv.to_json();
    }
  }

  rep["provenance"] = {
      {"steiner", "check_steiner"},
      {"speed", calibrated ? "calibrate_speed" : "config"},
      {"steadiness_residual", "StreamSolver::steadiness_residual"},
      {"classification", "DomainExtractor::classify"},
      {"domain", "DomainExtractor::extract"},
      {"boundary.csv", "export_boundary_csv"},
      {"field.csv", "export_field_csv"},
      {"traces", "trace (CachedField)"},
      {"invariance", "verify_domain_invariance"}};
  rep["timing"] = timing;
  write_json_file(rep, out_path(cfg, rf));
  return rep;
}

// ---------------------------------------------------------------------------
// sweep

namespace {

struct SweepPoint {
  double value = 0.0;
  double W = 0.0;
  double center_speed = 0.0;
  Topology topology = Topology::Spheroid;
  CaseTag case_tag = CaseTag::CaseI;
};

SweepPoint eval_sweep_point(const RunConfig& cfg, double value) {
  nlohmann::json doc = cfg.vortex;
  if (!doc.contains(cfg.sweep->parameter) ||
      !doc[cfg.sweep->parameter].is_number())
    throw precondition_error("sweep parameter '" + cfg.sweep->parameter +
                             "' is not a numeric vortex field");
  doc[cfg.sweep->parameter] = value;
  const VorticitySpec spec = VorticitySpec::from_json(doc, cfg.base_dir);

  SweepPoint pt;
  pt.value = value;
  bool calibrated = false;
  pt.W = resolve_speed(cfg, spec, calibrated);
  const StreamSolver solver(TravelingVortex(spec, pt.W), cfg.tolerances);
  pt.center_speed = solver.center_speed();
  const auto cls = DomainExtractor(solver).classify(pt.center_speed);
  pt.case_tag = cls.first;
  pt.topology = cls.second;
  return pt;
}

}  // namespace

nlohmann::ordered_json run_sweep(const RunConfig& cfg) {
  if (!cfg.sweep) throw precondition_error("sweep block missing from config");
  prepare_output_dir(cfg);
  nlohmann::ordered_json rep = report_header(cfg, "sweep");
  const std::string rf = "sweep.json";

  const int n = cfg.sweep->steps;
  std::vector<SweepPoint> pts(n);
  stage(rep, cfg, rf, "sweep", [&] {
    for (int i = 0; i < n; ++i) {
      const double v =
          cfg.sweep->lo + (cfg.sweep->hi - cfg.sweep->lo) * i / (n - 1);
      pts[i] = eval_sweep_point(cfg, v);
    }
  });

  nlohmann::ordered_json table = nlohmann::ordered_json::array();
  for (const auto& p : pts)
    table.push_back({{"value", p.value},
                     {"speed", p.W},
                     {"center_speed", p.center_speed},
                     {"ratio", p.center_speed / p.W},
                     {"topology", to_string(p.topology)},
                     {"case", to_string(p.case_tag)}});
  rep["points"] = table;

  // Transition detection on the sign of center_speed - W; a single flip is
  // refined by bisection, anything non-monotone is reported verbatim.
  auto sign_of = [](const SweepPoint& p) {
    return p.center_speed >= p.W ? 1 : -1;
  };
  int flips = 0, flip_at = -1;
  for (int i = 1; i < n; ++i)
    if (sign_of(pts[i]) != sign_of(pts[i - 1])) {
      ++flips;
      flip_at = i;
    }
  if (flips == 1) {
    double lo = pts[flip_at - 1].value, hi = pts[flip_at].value;
    int slo = sign_of(pts[flip_at - 1]);
    stage(rep, cfg, rf, "bisection", [&] {
      while (hi - lo > 1e-3) {
        const double mid = 0.5 * (lo + hi);
        const SweepPoint pm = eval_sweep_point(cfg, mid);
        if (sign_of(pm) == slo)
          lo = mid;
        else
          hi = mid;
      }
    });
    rep["transition"] = {{"parameter", cfg.sweep->parameter},
                         {"bracket", {lo, hi}},
                         {"width", hi - lo}};
  } else if (flips == 0) {
    rep["transition"] = {{"parameter", cfg.sweep->parameter},
                         {"note", "no class flip in the sweep range"}};
  } else {
    rep["transition"] = {
        {"parameter", cfg.sweep->parameter},
        {"note", "non-monotone class sequence; no bisection performed"},
        {"flips", flips}};
  }

  std::ofstream csv(out_path(cfg, "regime.csv"));
  if (!csv) throw io_error("cannot write regime.csv");
  csv.precision(12);
  csv << "value,speed,center_speed,ratio,topology,case\n";
  for (const auto& p : pts)
    csv << p.value << ',' << p.W << ',' << p.center_speed << ','
        << p.center_speed / p.W << ',' << to_string(p.topology) << ','
        << to_string(p.case_tag) << '\n';

  write_json_file(rep, out_path(cfg, rf));
  return rep;
}

// ---------------------------------------------------------------------------
// trace

nlohmann::ordered_json run_trace(const RunConfig& cfg) {
  if (cfg.seeds.empty())
    throw precondition_error("trace command requires seeds");
  prepare_output_dir(cfg);
  nlohmann::ordered_json rep = report_header(cfg, "trace");
  const std::string rf = "traces.json";

  const VorticitySpec spec =
      stage(rep, cfg, rf, "config", [&] { return cfg.make_spec(); });
  bool calibrated = false;
  const double W = stage(rep, cfg, rf, "speed",
                         [&] { return resolve_speed(cfg, spec, calibrated); });
  rep["speed"] = {{"value", W}, {"calibrated", calibrated}};
  const StreamSolver solver(TravelingVortex(spec, W), cfg.tolerances);
  const CachedField field = stage(rep, cfg, rf, "cache",
                                  [&] { return make_cached_field(solver); });

  TraceOptions opt;
  opt.tol = cfg.tolerances.ode;
  nlohmann::ordered_json traces = nlohmann::ordered_json::array();
  stage(rep, cfg, rf, "trace", [&] {
    for (size_t i = 0; i < cfg.seeds.size(); ++i) {
      const StreamlineTrace tr = trace(field, cfg.seeds[i], opt);
      export_trace_csv(tr,
                       out_path(cfg, "trace_" + std::to_string(i) + ".csv"));
      traces.push_back(tr.to_json());
    }
  });
  rep["traces"] = traces;
  write_json_file(rep, out_path(cfg, rf));
  return rep;
}

// ---------------------------------------------------------------------------
// validate

nlohmann::ordered_json run_validate(const RunConfig& cfg) {
  prepare_output_dir(cfg);
  nlohmann::ordered_json rep = report_header(cfg, "validate");
  const std::string rf = "validate.json";
  nlohmann::ordered_json props = nlohmann::ordered_json::array();
  bool all_pass = true;
  auto record = [&](const std::string& name, bool pass, double margin,
                    const std::string& note) {
    props.push_back({{"property", name},
                     {"pass", pass},
                     {"margin", margin},
                     {"note", note}});
    all_pass = all_pass && pass;
  };

  const VorticitySpec spec =
      stage(rep, cfg, rf, "config", [&] { return cfg.make_spec(); });
  const bool ring = spec.geometry() == GeometryKind::Ring3D;

  stage(rep, cfg, rf, "validate", [&] {
    const SteinerReport st = check_steiner(spec);
    record("steiner_symmetry", st.is_symmetric, -st.max_violation,
           "max profile violation under reflection/monotone scan");
    if (!st.is_symmetric)
      return;  // downstream properties assume the symmetric setting

    bool calibrated = false;
    const double W = resolve_speed(cfg, spec, calibrated);
    const StreamSolver solver(TravelingVortex(spec, W), cfg.tolerances);

    // Strict Steiner monotonicity of the stream function: the axial
    // derivative must be negative at axial > 0, i.e. the transverse
    // velocity component points away from the symmetry line there.
    {
      double worst = 1e300;
      const double S = solver.scale();
      for (int i = 0; i < 10 && worst > 0.0; ++i)
        for (int j = 0; j < 10; ++j) {
          const Vec2 p{S * (0.05 + 2.0 * i / 9.0),
                       S * (0.05 + 1.95 * j / 9.0)};
          // d(axial) stream = -(r or 1) * transverse velocity.
          const Vec2 v = solver.velocity(p);
          const double mono = ring ? p.y * v.y : v.y;
          worst = std::min(worst, mono);
        }
      record("strict_stream_monotonicity", worst > 0.0, worst,
             "min transverse flux at axial > 0 over a 10x10 grid");
    }

    // Far-field decay of stream / transverse weight.
    {
      const double S = solver.scale();
      const std::vector<double> radii{5.0 * S, 10.0 * S, 20.0 * S, 50.0 * S};
      const std::vector<double> sup = solver.decay_probe(radii, 16);
      bool decreasing = true;
      for (size_t i = 1; i < sup.size(); ++i)
        decreasing = decreasing && sup[i] < sup[i - 1];
      const double slope = std::log(sup.back() / sup.front()) /
                           std::log(radii.back() / radii.front());
      const double bound = ring ? -2.5 : -1.5;
      record("far_field_decay", decreasing && slope <= bound, bound - slope,
             "log-log slope of the sup probe over R in [5, 50] scales");
    }

    // Steadiness of the configured (or calibrated) pair.
    {
      const double res = solver.steadiness_residual();
      record("steadiness", res < 0.05, 0.05 - res,
             "normalized advection residual in the moving frame");
    }

    // Conservation of the relative stream along traced orbits.
    {
      const double S = solver.scale();
      const CachedField field(solver, {-2.5 * S, 2.5 * S, 0.0, 2.5 * S}, 101,
                              51);
      const Box b = spec.support_box();
      TraceOptions opt;
      opt.tol = cfg.tolerances.ode;
      opt.horizon = 20.0;
      opt.record_stride = 0;
      double drift = 0.0;
      for (int i = 0; i < 8; ++i) {
        const Vec2 p{b.x0 + b.width() * (0.5 + 0.04 * i),
                     b.y0 + b.height() * (0.3 + 0.05 * i)};
        if (p.y <= 0.0) continue;
        drift = std::max(drift, trace(field, p, opt).max_phi_drift);
      }
      record("conservation", drift <= 1e-6, 1e-6 - drift,
             "max relative drift of the relative stream over 8 traces");
    }
  });

  rep["properties"] = props;
  rep["all_pass"] = all_pass;
  write_json_file(rep, out_path(cfg, rf));
  return rep;
}

// ---------------------------------------------------------------------------

std::vector<Vec2> load_seed_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot read seed CSV: " + path);
  std::vector<Vec2> seeds;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double a, b;
    if (row >> a >> b) seeds.push_back({a, b});
  }
  if (seeds.empty()) throw precondition_error("seed CSV contains no points");
  return seeds;
}

}  // namespace vortexdom
