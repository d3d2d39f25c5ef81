#include "parset/bounds.hpp"
#include "parset/core.hpp"
#include "parset/entropy.hpp"
#include "parset/exact2d.hpp"
#include "parset/harness.hpp"
#include "parset/mc_measure.hpp"
#include "parset/pointset_io.hpp"
#include "parset/robust_risk.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

using namespace parset;
using nlohmann::ordered_json;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  std::string out;
  std::string format = "csv";
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw harness::ConfigError("cannot write " + path);
  f << text;
}

std::string csv_value(const ordered_json& v) {
  if (v.is_number_float()) return io::format_double(v.get<double>());
  if (v.is_string()) return harness::csv_field(v.get<std::string>());
  return harness::csv_field(v.dump());
}

// Arrays of flat objects become one row per element; a flat object becomes
// key,value rows.
std::string to_csv(const ordered_json& doc) {
  std::ostringstream out;
  if (doc.is_array()) {
    if (doc.empty()) return "";
    bool first = true;
    for (const auto& [k, _] : doc.front().items()) {
      out << (first ? "" : ",") << harness::csv_field(k);
      first = false;
    }
    out << "\r\n";
    for (const auto& row : doc) {
      first = true;
      for (const auto& [_, v] : row.items()) {
        out << (first ? "" : ",") << csv_value(v);
        first = false;
      }
      out << "\r\n";
    }
  } else {
    out << "key,value\r\n";
    for (const auto& [k, v] : doc.items()) out << harness::csv_field(k) << ',' << csv_value(v) << "\r\n";
  }
  return out.str();
}

void emit(const Globals& g, const ordered_json& doc) {
  write_text(g.out, g.format == "json" ? doc.dump(2) + "\n" : to_csv(doc));
}

ordered_json report_object(const BoundReport& r) {
  return {{"check", r.bound_name}, {"bound", r.bound_value},   {"measured", r.measured},
          {"std_error", r.std_error}, {"allowance", r.allowance}, {"slack", r.slack},
          {"verdict", to_string(r.verdict)}};
}

std::uint64_t seed_or(const Globals& g, std::uint64_t fallback) { return g.seed.value_or(fallback); }

Eigen::VectorXd read_weights(const std::string& path, Eigen::Index count) {
  if (path.empty()) return Eigen::VectorXd::Constant(count, 1.0 / static_cast<double>(count));
  const auto w = nlohmann::json::parse(harness::read_file(path)).get<std::vector<double>>();
  if (static_cast<Eigen::Index>(w.size()) != count) throw std::invalid_argument(path + ": need one weight per point");
  return Eigen::Map<const Eigen::VectorXd>(w.data(), count);
}

int finish(const harness::RunManifest& m, const Globals& g) {
  if (g.format == "json") {
    write_text(g.out, harness::reports_json(m.checks).dump(2) + "\n");
  } else {
    write_text(g.out, harness::reports_csv(m.checks));
  }
  if (!g.out.empty()) write_text(g.out + ".manifest.json", harness::manifest_json(m).dump(2) + "\n");
  int failed = 0;
  for (const auto& c : m.checks) failed += c.report.verdict == Verdict::Fail;
  std::cerr << m.suite << ": " << m.checks.size() << " checks, " << failed << " failed, "
            << std::setprecision(3) << m.wall_seconds << " s\n";
  return m.all_pass() ? 0 : 1;
}

rr::DistributionSpec parse_generator(const nlohmann::json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "gaussian-mixture") {
    const auto atoms = PointSet::from_rows(j.at("atoms").get<std::vector<std::vector<double>>>());
    Eigen::VectorXd w = Eigen::VectorXd::Constant(atoms.size(), 1.0 / static_cast<double>(atoms.size()));
    if (j.contains("weights")) {
      const auto v = j.at("weights").get<std::vector<double>>();
      w = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
    }
    return rr::GaussianMixtureGen{atoms.coords(), w, j.value("sigma", 0.0)};
  }
  if (type == "uniform-ball") {
    const auto c = j.at("center").get<std::vector<double>>();
    return rr::UniformBallGen{Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size())),
                              j.value("radius", 1.0)};
  }
  throw harness::ConfigError("unknown generator type \"" + type + "\"");
}

rr::ConvergenceConfig parse_convergence(const std::string& path) {
  rr::ConvergenceConfig cc;
  cc.gen0 = rr::GaussianMixtureGen{Eigen::MatrixXd::Zero(2, 1), Eigen::VectorXd::Ones(1), 0.0};
  cc.gen1 = rr::GaussianMixtureGen{Eigen::Vector2d(1.0, 0.0), Eigen::VectorXd::Ones(1), 0.0};
  if (path.empty()) return cc;
  const std::string text = harness::read_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw harness::ConfigError(path + ": invalid JSON: " + e.what());
  }
  static const std::set<std::string> allowed{"gen0", "gen1", "r", "sigma", "n_grid", "trials", "seed", "ref_multiplier"};
  for (const auto& [k, _] : j.items()) {
    if (!allowed.count(k)) throw harness::ConfigError(path + ": unknown key \"" + k + "\"");
  }
  try {
    if (j.contains("gen0")) cc.gen0 = parse_generator(j.at("gen0"));
    if (j.contains("gen1")) cc.gen1 = parse_generator(j.at("gen1"));
    cc.r = j.value("r", cc.r);
    cc.sigma = j.value("sigma", cc.sigma);
    cc.n_grid = j.value("n_grid", cc.n_grid);
    cc.trials = j.value("trials", cc.trials);
    cc.seed = j.value("seed", cc.seed);
    cc.ref_multiplier = j.value("ref_multiplier", cc.ref_multiplier);
  } catch (const nlohmann::json::exception& e) {
    throw harness::ConfigError(path + ": " + e.what());
  }
  return cc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measures and inequality checks for r-parallel sets"};
  app.set_version_flag("--version", harness::tool_version());
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--workers", g.workers, "Worker threads")->envname("PARSET_WORKERS")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output file (default stdout)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  // exact2d
  auto* ex = app.add_subcommand("exact2d", "Exact boundary of a union of disks or squares");
  std::string shape = "disk", centers_path, boundary_out;
  double radius = 1.0;
  bool want_area = false;
  ex->add_option("--shape", shape)->check(CLI::IsMember({"disk", "square"}));
  ex->add_option("--centers", centers_path, "Centers file (CSV or JSON)")->required();
  ex->add_option("--radius", radius)->required();
  ex->add_flag("--area", want_area, "Also report the enclosed area");
  ex->add_option("--boundary-out", boundary_out, "Write the exposed arcs or segments as CSV");

  // mc
  auto* mcc = app.add_subcommand("mc", "Monte Carlo measures");
  std::string op = "volume", norm_name = "l2";
  std::uint64_t samples = 1'000'000;
  std::optional<double> delta;
  double sigma = 1.0, t_scale = 2.0, inner = 0.5, outer = 1.0, half_angle = M_PI / 3.0;
  int dim = 3, trials = 100;
  std::uint64_t directions = 100'000;
  mcc->add_option("--op", op)->check(CLI::IsMember({"volume", "shell", "gshell", "kneser", "angle"}));
  mcc->add_option("--centers", centers_path, "Centers file (volume, shell, gshell, kneser)");
  mcc->add_option("--radius", radius);
  mcc->add_option("--norm", norm_name)->check(CLI::IsMember({"l2", "linf"}));
  mcc->add_option("--samples", samples);
  mcc->add_option("--delta", delta, "Shell width (default radius/1000)");
  mcc->add_option("--sigma", sigma, "Gaussian scale for gshell");
  mcc->add_option("--t", t_scale, "Kneser scale factor");
  mcc->add_option("--inner", inner, "Kneser inner radius");
  mcc->add_option("--outer", outer, "Kneser outer radius");
  mcc->add_option("--dim", dim, "Dimension for the inscribed-angle check");
  mcc->add_option("--half-angle", half_angle, "Cap half angle (radians)");
  mcc->add_option("--trials", trials, "Apex draws for the inscribed-angle check");
  mcc->add_option("--directions", directions, "Directions per solid-angle estimate");

  // bounds
  auto* bo = app.add_subcommand("bounds", "Evaluate closed-form bounds");
  bool list = false;
  std::string eval_name, params_text;
  bo->add_flag("--list", list);
  bo->add_option("--eval", eval_name);
  bo->add_option("--params", params_text, "k=v,k=v");

  // verify
  auto* ve = app.add_subcommand("verify", "Run one check described by a JSON experiment file");
  std::string experiment_path;
  ve->add_option("--experiment", experiment_path)->required();

  // dr
  auto* dr = app.add_subcommand("dr", "Thresholded transport cost D_r between two point clouds");
  std::string mu0_path, mu1_path, w0_path, w1_path, certificate_path;
  bool weighted = false;
  dr->add_option("--mu0", mu0_path)->required();
  dr->add_option("--mu1", mu1_path)->required();
  dr->add_option("--radius", radius)->required();
  dr->add_flag("--weighted", weighted, "Use max-flow (accepts --w0/--w1 weight files)");
  dr->add_option("--w0", w0_path, "JSON array of weights for mu0");
  dr->add_option("--w1", w1_path, "JSON array of weights for mu1");
  dr->add_option("--certificate", certificate_path, "Write the matching as CSV");

  // dr-converge
  auto* dc = app.add_subcommand("dr-converge", "Convergence of empirical D_r in the sample size");
  std::string converge_path;
  dc->add_option("--config", converge_path, "JSON experiment description");

  // epi
  auto* ep = app.add_subcommand("epi", "Reverse entropy power inequality for smoothed discrete laws");
  std::string x_path, y_path, xw_path, yw_path;
  double smoothing = 1.0;
  std::uint64_t entropy_samples = 1'000'000;
  ep->add_option("--x", x_path)->required();
  ep->add_option("--y", y_path)->required();
  ep->add_option("--x-weights", xw_path);
  ep->add_option("--y-weights", yw_path);
  ep->add_option("--smoothing", smoothing)->required();
  ep->add_option("--samples", entropy_samples);

  // suite
  auto* su = app.add_subcommand("suite", "Run a verification suite");
  std::string suite_name, suite_config;
  su->add_option("name", suite_name)->required()->check(CLI::IsMember(harness::suite_names()));
  su->add_option("--config", suite_config, "JSON suite configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*ex) {
      const auto centers = io::load_points(centers_path);
      ordered_json doc{{"shape", shape}, {"radius", radius}, {"points", centers.size()}};
      std::ostringstream pieces;
      if (shape == "disk") {
        const auto b = exact2d::disk_union_boundary(centers, radius);
        doc["perimeter"] = exact2d::disk_union_perimeter(b);
        if (want_area) doc["area"] = exact2d::disk_union_area(b);
        doc["pieces"] = b.arcs.size();
        pieces << "center_index,theta_start,theta_end\r\n";
        for (const auto& a : b.arcs) {
          pieces << a.center_index << ',' << io::format_double(a.theta_start) << ','
                 << io::format_double(a.theta_end) << "\r\n";
        }
      } else {
        const auto b = exact2d::square_union_boundary(centers, radius);
        doc["perimeter"] = exact2d::square_union_perimeter(b);
        if (want_area) doc["area"] = exact2d::square_union_area(b);
        doc["pieces"] = b.segments.size();
        pieces << "center_index,orientation,fixed_coord,span_start,span_end,outward_sign\r\n";
        for (const auto& s : b.segments) {
          pieces << s.center_index << ',' << (s.orientation == exact2d::Orientation::Horizontal ? "h" : "v") << ','
                 << io::format_double(s.fixed_coord) << ',' << io::format_double(s.span_start) << ','
                 << io::format_double(s.span_end) << ',' << s.outward_sign << "\r\n";
        }
      }
      if (!boundary_out.empty()) write_text(boundary_out, pieces.str());
      emit(g, doc);
      return 0;
    }

    if (*mcc) {
      mc::McConfig cfg;
      cfg.samples = samples;
      cfg.seed = seed_or(g, 0);
      cfg.workers = g.workers;
      cfg.shell_delta = delta;
      const NormKind norm = norm_from_string(norm_name);
      ordered_json doc{{"op", op}, {"seed", cfg.seed}, {"samples", samples}};
      auto put = [&](const mc::MeasureEstimate& e) {
        doc["value"] = e.value;
        doc["std_error"] = e.std_error;
      };
      if (op == "angle") {
        const auto res = mc::inscribed_angle_check(dim, half_angle, trials, cfg.seed, directions, g.workers);
        doc["dim"] = dim;
        doc["half_angle"] = half_angle;
        doc.update(report_object(res.summary));
        emit(g, doc);
        return res.summary.verdict == Verdict::Fail ? 1 : 0;
      }
      if (centers_path.empty()) throw harness::ConfigError("mc --op " + op + " needs --centers");
      const auto centers = io::load_points(centers_path);
      if (op == "volume") {
        put(mc::mc_volume(ParallelSetSpec(centers, norm, radius), cfg));
      } else if (op == "shell") {
        put(mc::mc_shell_lebesgue(ParallelSetSpec(centers, norm, radius), cfg));
      } else if (op == "gshell") {
        put(mc::mc_gaussian_shell(ParallelSetSpec(centers, norm, radius), cfg, sigma));
      } else {
        const auto rep = mc::kneser_shell_check(centers, norm, inner, outer, t_scale, cfg);
        doc.update(report_object(rep));
        emit(g, doc);
        return rep.verdict == Verdict::Fail ? 1 : 0;
      }
      emit(g, doc);
      return 0;
    }

    if (*bo) {
      if (list) {
        ordered_json arr = ordered_json::array();
        for (const auto& b : bounds::bound_catalog()) {
          std::string ps;
          for (const auto& p : b.params) ps += (ps.empty() ? "" : " ") + p;
          arr.push_back({{"name", b.name}, {"params", ps}, {"formula", b.formula}});
        }
        emit(g, arr);
        return 0;
      }
      if (eval_name.empty()) throw harness::ConfigError("bounds: pass --list or --eval NAME");
      std::map<std::string, double> params;
      std::stringstream ss(params_text);
      std::string item;
      while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw harness::ConfigError("bounds: malformed parameter \"" + item + "\"");
        std::size_t used = 0;
        const std::string value = item.substr(eq + 1);
        double v = 0.0;
        try {
          v = std::stod(value, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != value.size() || value.empty()) throw harness::ConfigError("bounds: bad number in \"" + item + "\"");
        params[item.substr(0, eq)] = v;
      }
      ordered_json doc{{"bound", eval_name}};
      for (const auto& [k, v] : bounds::evaluate_named(eval_name, params)) doc[k] = v;
      emit(g, doc);
      return 0;
    }

    if (*ve) {
      auto cfg = harness::parse_experiment_config(harness::read_file(experiment_path), experiment_path);
      if (g.seed) cfg.seed = g.seed;
      Globals local = g;
      if (local.out.empty()) local.out = cfg.output_path;
      return finish(harness::run_experiment(cfg, g.workers), local);
    }

    if (*dr) {
      const auto x = io::load_points(mu0_path);
      const auto y = io::load_points(mu1_path);
      rr::TransportResult res;
      if (weighted || !w0_path.empty() || !w1_path.empty()) {
        res = rr::d_r_weighted(rr::EmpiricalMeasure(x, read_weights(w0_path, x.size())),
                               rr::EmpiricalMeasure(y, read_weights(w1_path, y.size())), radius);
      } else {
        res = rr::d_r_uniform(x, y, radius);
      }
      if (!certificate_path.empty()) {
        std::ostringstream c;
        c << "source,target,mass\r\n";
        for (const auto& e : res.certificate) c << e.source << ',' << e.target << ',' << io::format_double(e.mass) << "\r\n";
        write_text(certificate_path, c.str());
      }
      emit(g, ordered_json{{"radius", radius},
                           {"d_r", res.value},
                           {"robust_risk", rr::robust_risk(res.value)},
                           {"matched_pairs", res.certificate.size()}});
      return 0;
    }

    if (*dc) {
      auto cc = parse_convergence(converge_path);
      if (g.seed) cc.seed = *g.seed;
      cc.workers = g.workers;
      const auto res = rr::convergence_experiment(cc);
      ordered_json rows = ordered_json::array();
      for (const auto& r : res.rows) {
        rows.push_back({{"n", r.n}, {"trial", r.trial}, {"d_r", r.d_r}, {"abs_dev", r.abs_dev}});
      }
      ordered_json summary = ordered_json::array();
      for (const auto& s : res.summary) {
        summary.push_back({{"n", s.n}, {"q10", s.q10}, {"median", s.median}, {"q90", s.q90}});
      }
      if (g.format == "json") {
        write_text(g.out, ordered_json{{"reference_n", res.reference_n},
                                       {"reference_d_r", res.reference_d_r},
                                       {"median_inversions", rr::median_inversions(res)},
                                       {"summary", summary},
                                       {"rows", rows}}
                                  .dump(2) +
                              "\n");
      } else {
        write_text(g.out, to_csv(rows));
        if (!g.out.empty()) write_text(g.out + ".summary.csv", to_csv(summary));
        std::cerr << "reference n=" << res.reference_n << " D_r=" << io::format_double(res.reference_d_r)
                  << " median inversions=" << rr::median_inversions(res) << '\n';
        for (const auto& s : res.summary) {
          std::cerr << "n=" << s.n << " median |dev|=" << io::format_double(s.median) << '\n';
        }
      }
      return 0;
    }

    if (*ep) {
      const auto x = io::load_points(x_path);
      const auto y = io::load_points(y_path);
      const auto res = entropy::reverse_epi_check({x.coords(), read_weights(xw_path, x.size())},
                                                  {y.coords(), read_weights(yw_path, y.size())}, smoothing,
                                                  entropy_samples, seed_or(g, 0), g.workers);
      emit(g, ordered_json{{"h_x", res.h_x.value},
                           {"h_y", res.h_y.value},
                           {"h_sum", res.h_sum.value},
                           {"bound", res.report.bound_value},
                           {"slack", res.report.slack},
                           {"verdict", to_string(res.report.verdict)}});
      return res.report.verdict == Verdict::Fail ? 1 : 0;
    }

    if (*su) {
      harness::SuiteConfig cfg;
      if (!suite_config.empty()) cfg = harness::parse_suite_config(harness::read_file(suite_config), suite_config);
      if (g.seed) cfg.seed = *g.seed;
      if (app.get_option("--workers")->count() > 0 || std::getenv("PARSET_WORKERS")) cfg.workers = g.workers;
      return finish(harness::run_suite(suite_name, cfg), g);
    }
  } catch (const harness::ConfigError& e) {
    std::cerr << "parset: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "parset: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "parset: error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
