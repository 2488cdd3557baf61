#include "wingcrack/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wingcrack/adaptivity.hpp"
#include "wingcrack/mesh_io.hpp"

namespace wingcrack {

const char* to_string(Termination t) {
  switch (t) {
    case Termination::Converged: return "converged";
    case Termination::StepCap: return "cap";
    case Termination::Error: return "error";
  }
  return "?";
}

namespace {

namespace fs = std::filesystem;

void write_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

double to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

nlohmann::json residual_json(const KktResiduals& r) {
  return {{"penetration", r.max_penetration},       {"negative_pressure", r.max_negative_pressure},
          {"complementarity", r.max_complementarity}, {"friction", r.max_friction_violation},
          {"stick_slip", r.max_stick_slip},          {"slip_law", r.max_slip_law},
          {"open_multiplier", r.max_open_multiplier}};
}

nlohmann::json record_json(const StepRecord& r, const Geometry& g) {
  nlohmann::json tips = nlohmann::json::array();
  for (std::size_t i = 0; i < r.sifs.size(); ++i) {
    const SifResult& s = r.sifs[i];
    tips.push_back({{"fracture", g.fractures[static_cast<std::size_t>(s.tip.fracture)].name},
                    {"tip", s.tip.end == TipEnd::A ? "A" : "B"},
                    {"x", s.position.x},
                    {"y", s.position.y},
                    {"K_I", s.K_I},
                    {"K_II", s.K_II},
                    {"theta0", s.theta0},
                    {"K_eq", s.K_eq},
                    {"propagates", s.propagates},
                    {"da", r.da[i]},
                    {"growth_angle", r.growth_angle[i]},
                    {"status", r.tip_status[i]}});
  }
  return {{"step", r.step},
          {"load_step", r.load_step},
          {"load_fraction", r.load_fraction},
          {"propagation", r.propagation},
          {"tips", tips},
          {"contact",
           {{"open", r.contact.open},
            {"stick", r.contact.stick},
            {"slip", r.contact.slip},
            {"iterations", r.contact.iterations},
            {"cycling_fallback", r.contact.cycling_fallback},
            {"residuals", residual_json(r.contact.residuals)}}},
          {"mesh", {{"nodes", r.mesh.nodes}, {"elements", r.mesh.elements}, {"min_quality_deg", r.mesh.min_quality_deg}}},
          {"relative_error", r.relative_error},
          {"refinement_passes", r.refinement_passes},
          {"direction_trials", r.direction_trials},
          {"wall_time", r.wall_time}};
}

class Outputs {
 public:
  Outputs(const Scenario& s, const RunOptions& o)
      : enabled_(o.write_files),
        dir_(o.output_dir.value_or(s.output.directory)),
        vtk_every_(o.vtk_every.value_or(s.output.vtk_every)) {
    if (!enabled_) return;
    fs::create_directories(dir_);
    tips_ << "step,load_fraction,fracture,tip,x,y,K_I,K_II,theta0_deg,K_eq,da,growth_deg,status\n";
    contact_ << "step,fracture,arc,status,lambda_n,lambda_t,gap,slip\n";
    for (const FracturePolyline& f : s.geometry.fractures) paths_[f.name] << "step,vertex,x,y\n";
  }

  void step(const StepRecord& r, const Geometry& before, const Mesh& mesh, const DisplacementField& u,
            std::span<const ContactPair> pairs, const ContactState& cs, const ErrorField& err) {
    if (!enabled_) return;
    for (std::size_t i = 0; i < r.sifs.size(); ++i) {
      const SifResult& s = r.sifs[i];
      tips_ << r.step << ',' << num(r.load_fraction) << ',' << before.fractures[static_cast<std::size_t>(s.tip.fracture)].name
            << ',' << (s.tip.end == TipEnd::A ? 'A' : 'B') << ',' << num(s.position.x) << ',' << num(s.position.y) << ','
            << num(s.K_I) << ',' << num(s.K_II) << ',' << num(to_deg(s.theta0)) << ',' << num(s.K_eq) << ','
            << num(r.da[i]) << ',' << num(to_deg(r.growth_angle[i])) << ',' << r.tip_status[i] << '\n';
    }
    for (const FracturePolyline& f : before.fractures)
      for (std::size_t v = 0; v < f.vertices.size(); ++v)
        paths_[f.name] << r.step << ',' << v << ',' << num(f.vertices[v].x) << ',' << num(f.vertices[v].y) << '\n';
    for (std::size_t i = 0; i < pairs.size(); ++i)
      contact_ << r.step << ',' << before.fractures[static_cast<std::size_t>(pairs[i].fracture)].name << ','
               << num(pairs[i].arc) << ',' << to_string(cs.status[i]) << ',' << num(cs.lambda_n[i]) << ','
               << num(cs.lambda_t[i]) << ',' << num(cs.gap[i]) << ',' << num(cs.slip[i]) << '\n';
    jsonl_ << record_json(r, before).dump() << '\n';
    flush();
    if (vtk_every_ > 0 && r.step % vtk_every_ == 0) {
      VtkFields fields;
      std::vector<Vec2> disp(mesh.nodes.size());
      for (std::size_t n = 0; n < disp.size(); ++n) disp[n] = u.at(static_cast<int>(n));
      fields.point_vectors.emplace_back("displacement", std::move(disp));
      std::vector<double> status(mesh.nodes.size(), -1.0);
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        status[static_cast<std::size_t>(pairs[i].plus_node)] = static_cast<double>(cs.status[i]);
        status[static_cast<std::size_t>(pairs[i].minus_node)] = static_cast<double>(cs.status[i]);
      }
      fields.point_scalars.emplace_back("contact_status", std::move(status));
      fields.cell_scalars.emplace_back("error", err.eta_e);
      std::vector<double> quality(mesh.elements.size(), 0.0);
      for (const ElementQuality& q : mesh_quality(mesh)) quality[static_cast<std::size_t>(q.element)] = q.min_angle_deg;
      fields.cell_scalars.emplace_back("quality", std::move(quality));
      std::ostringstream os;
      write_vtk(os, mesh, fields);
      std::ostringstream name;
      name << "step_" << std::setw(4) << std::setfill('0') << r.step << ".vtk";
      write_atomic(dir_ / name.str(), os.str());
    }
  }

  void finish(Termination t, const std::string& message, int growth_steps) {
    if (!enabled_) return;
    jsonl_ << nlohmann::json{{"termination", to_string(t)}, {"message", message}, {"growth_steps", growth_steps}}.dump()
           << '\n';
    flush();
  }

 private:
  void flush() {
    write_atomic(dir_ / "tips.csv", tips_.str());
    write_atomic(dir_ / "contact.csv", contact_.str());
    write_atomic(dir_ / "steps.jsonl", jsonl_.str());
    for (const auto& [name, os] : paths_) write_atomic(dir_ / ("path_" + name + ".csv"), os.str());
  }

  bool enabled_;
  fs::path dir_;
  int vtk_every_;
  std::ostringstream tips_, contact_, jsonl_;
  std::map<std::string, std::ostringstream> paths_;
};

struct Solved {
  LinearSystem system;
  std::vector<ContactPair> pairs;
  ContactSolution solution;
};

Solved solve_state(const Mesh& mesh, const Scenario& s, double fraction, const ActiveSetConfig& cfg) {
  AssemblyOptions ao;
  ao.load_scale = fraction;
  ao.body_force = fraction * s.body_force;
  Solved out{assemble(mesh, s.material, s.boundary_conditions, ao), build_contact_pairs(mesh), {}};
  const FactorizedSystem factor(out.system, s.solver);
  out.solution = solve_contact(factor, out.pairs, cfg);
  return out;
}

ErrorField estimate(const Mesh& mesh, const Scenario& s, const DisplacementField& u) {
  const GaussStresses sh = stress_at_gauss_points(mesh, s.material, u);
  return zz_error(mesh, s.material, sh, recover_stress(mesh, sh));
}

struct Trial {
  Geometry geometry;
  /// Empty for a tip deactivated earlier in the same step.
  std::vector<std::optional<GrowthResult>> results;
  std::vector<GrownTip> grown;
};

Trial grow_all(const Geometry& start, std::span<const SifResult> sifs, std::span<const std::size_t> which,
               std::span<const double> angles, std::span<const double> da, double snap) {
  Trial t{start, {}, {}};
  for (std::size_t j = 0; j < which.size(); ++j) {
    const SifResult& s = sifs[which[j]];
    if (!t.geometry.fractures[static_cast<std::size_t>(s.tip.fracture)].tip_active(s.tip.end)) {
      t.results.emplace_back();
      continue;
    }
    GrowthResult g = grow_tip(t.geometry, s.tip, angles[j], da[which[j]], snap);
    t.geometry = g.geometry;
    t.grown.push_back({s.tip, s.position, g.new_tip});
    t.results.push_back(std::move(g));
  }
  return t;
}

/// MTS angle at a trial tip; a closed or unreadable tip returns nothing.
std::optional<double> trial_angle(const Mesh& mesh, const Material& m, const DisplacementField& u, TipRef tip) {
  try {
    const auto [k1, k2] = extract_sif(mesh, m, u, tip);
    if (!(k1 > 0.0)) return std::nullopt;
    return kink_angle(k1, k2);
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

RunResult run(const Scenario& scenario, const RunOptions& options) {
  validate_scenario(scenario);
  RunResult result;
  Outputs outputs(scenario, options);
  const int max_growth = options.max_steps.value_or(scenario.caps.max_total_steps);
  ActiveSetConfig cfg = scenario.contact;
  if (cfg.c_n <= 0.0) cfg.c_n = scenario.material.youngs_E / scenario.mesh.size.h_tip;
  if (cfg.c_t <= 0.0) cfg.c_t = scenario.material.youngs_E / scenario.mesh.size.h_tip;

  Geometry geometry = scenario.geometry;
  int step = 0;
  bool pending = false;
  std::set<TipRef> grown_before;
  std::optional<Solved> cached;
  Trial geometry_next;
  try {
    Mesh mesh = triangulate(geometry, scenario.mesh);
    for (std::size_t ls = 0; ls < scenario.load_steps.size(); ++ls) {
      const double fraction = scenario.load_steps[ls];
      for (int prop = 0;; ++prop) {
        const auto t0 = std::chrono::steady_clock::now();
        Solved st = cached ? std::move(*cached) : solve_state(mesh, scenario, fraction, cfg);
        cached.reset();
        ErrorField err = estimate(mesh, scenario, st.solution.u);
        int passes = 0;
        if (scenario.adaptivity.enabled) {
          while (passes < scenario.adaptivity.max_passes &&
                 err.relative() > scenario.adaptivity.target_relative_error) {
            const std::vector<int> marked = mark_elements(err, scenario.adaptivity.theta);
            try {
              mesh = refine(mesh, marked);
            } catch (const MeshError&) {
              break;
            }
            ++passes;
            st = solve_state(mesh, scenario, fraction, cfg);
            err = estimate(mesh, scenario, st.solution.u);
          }
        }

        StepRecord rec;
        rec.step = step;
        rec.load_step = static_cast<int>(ls);
        rec.load_fraction = fraction;
        rec.propagation = prop;
        rec.refinement_passes = passes;
        rec.relative_error = err.relative();
        const ContactState& cs = st.solution.state;
        rec.contact = {cs.count(ContactStatus::Open), cs.count(ContactStatus::Stick), cs.count(ContactStatus::Slip),
                       cs.iterations, cs.cycling_fallback, cs.residuals};
        rec.mesh = {mesh.nodes.size(), mesh.elements.size(), min_quality_angle(mesh)};
        for (TipRef t : geometry.active_tips())
          rec.sifs.push_back(evaluate_tip(mesh, scenario.material, st.solution.u, t));
        rec.da.assign(rec.sifs.size(), 0.0);
        rec.tip_status.assign(rec.sifs.size(), "subcritical");

        pending = std::any_of(rec.sifs.begin(), rec.sifs.end(), [](const SifResult& s) { return s.propagates; });
        const bool may_grow =
            pending && prop < scenario.caps.max_propagation_per_load && result.growth_steps < max_growth;
        const Geometry before = geometry;
        rec.growth_angle.assign(rec.sifs.size(), 0.0);
        std::vector<GrownTip> grown;
        std::optional<Mesh> next_mesh;
        if (may_grow) {
          const std::vector<double> da = multi_tip_increments(rec.sifs, scenario.growth);
          std::vector<std::size_t> which;
          std::vector<double> angle;
          for (std::size_t i = 0; i < rec.sifs.size(); ++i) {
            if (da[i] <= 0.0) continue;
            which.push_back(i);
            angle.push_back(rec.sifs[i].theta0);
          }
          const double snap = scenario.growth.snap_factor;
          Trial trial = grow_all(geometry, rec.sifs, which, angle, da, snap);
          for (std::size_t j = 0; j < which.size(); ++j) rec.growth_angle[which[j]] = angle[j];

          std::vector<bool> correct(which.size());
          for (std::size_t j = 0; j < which.size(); ++j)
            correct[j] = scenario.growth.direction_iterations > 0 && grown_before.contains(rec.sifs[which[j]].tip);
          if (std::find(correct.begin(), correct.end(), true) != correct.end()) {
            const double tol = scenario.growth.direction_tolerance_deg * std::numbers::pi / 180.0;
            struct Sample {
              double angle, g;
            };
            std::vector<std::vector<Sample>> seen(which.size());
            double best_err = std::numeric_limits<double>::infinity();
            for (int it = 0;; ++it) {
              Mesh m = remesh_after_growth(mesh, trial.geometry, trial.grown, scenario.mesh.size,
                                           scenario.adaptivity.cavity_factor);
              ++rec.direction_trials;
              std::optional<Solved> solved;
              try {
                solved = solve_state(m, scenario, fraction, cfg);
              } catch (const FloatingStructureError&) {
                // the trial cuts a block loose; keep it and let the next solve report it
                for (std::size_t j = 0; j < which.size(); ++j) rec.growth_angle[which[j]] = angle[j];
                geometry_next = trial;
                next_mesh = std::move(m);
                cached.reset();
                break;
              }
              Solved& ts = *solved;
              std::vector<std::optional<double>> g(which.size());
              double err_max = 0.0;
              for (std::size_t j = 0; j < which.size(); ++j) {
                if (!correct[j]) continue;
                const TipRef tip = rec.sifs[which[j]].tip;
                if (!trial.geometry.fractures[static_cast<std::size_t>(tip.fracture)].tip_active(tip.end)) {
                  correct[j] = false;
                  continue;
                }
                g[j] = trial_angle(m, scenario.material, ts.solution.u, tip);
                err_max = g[j] ? std::max(err_max, std::abs(*g[j])) : std::numeric_limits<double>::infinity();
              }
              if (err_max < best_err || !next_mesh) {
                best_err = err_max;
                for (std::size_t j = 0; j < which.size(); ++j) rec.growth_angle[which[j]] = angle[j];
                geometry_next = trial;
                next_mesh = std::move(m);
                cached = std::move(ts);
              }
              if (err_max <= tol || it + 1 >= scenario.growth.direction_iterations) break;
              for (std::size_t j = 0; j < which.size(); ++j) {
                if (!correct[j]) continue;
                std::vector<Sample>& h = seen[j];
                double next = angle[j];
                if (!g[j]) {
                  if (h.empty()) {
                    correct[j] = false;
                    continue;
                  }
                  next = 0.5 * (angle[j] + h.back().angle);
                } else {
                  h.push_back({angle[j], *g[j]});
                  const std::size_t n = h.size();
                  if (n >= 2 && h[n - 1].g != h[n - 2].g)
                    next = h[n - 1].angle - h[n - 1].g * (h[n - 1].angle - h[n - 2].angle) / (h[n - 1].g - h[n - 2].g);
                  else
                    next = angle[j] + 0.5 * *g[j];
                }
                angle[j] = std::clamp(next, -kMaxKinkAngle, kMaxKinkAngle);
              }
              trial = grow_all(geometry, rec.sifs, which, angle, da, snap);
            }
            trial = std::move(geometry_next);
          }

          geometry = trial.geometry;
          for (std::size_t j = 0; j < which.size(); ++j) {
            const std::size_t i = which[j];
            if (!trial.results[j]) {
              rec.tip_status[i] = "coalesced";
              continue;
            }
            const GrowthResult& g = *trial.results[j];
            rec.da[i] = g.da;
            rec.tip_status[i] = g.hit_fracture ? "coalesced" : g.hit_boundary ? "boundary" : "grew";
            grown_before.insert(rec.sifs[i].tip);
          }
          grown = trial.grown;
        } else if (pending) {
          for (std::size_t i = 0; i < rec.sifs.size(); ++i)
            if (rec.sifs[i].propagates) rec.tip_status[i] = "capped";
        }
        rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        result.records.push_back(rec);
        outputs.step(rec, before, mesh, st.solution.u, st.pairs, cs, err);
        if (options.on_step) options.on_step(StepView{rec, mesh, st.solution.u, st.pairs, cs, geometry});
        if (options.log) {
          *options.log << "step " << step << " load " << fraction << " elements " << mesh.elements.size()
                       << " contact it " << cs.iterations;
          for (std::size_t i = 0; i < rec.sifs.size(); ++i)
            *options.log << " | " << to_string(rec.sifs[i].tip) << " K_eq " << rec.sifs[i].K_eq << ' '
                         << rec.tip_status[i];
          *options.log << '\n';
        }
        ++step;
        if (!may_grow) break;
        ++result.growth_steps;
        mesh = next_mesh ? std::move(*next_mesh)
                         : remesh_after_growth(mesh, geometry, grown, scenario.mesh.size,
                                               scenario.adaptivity.cavity_factor);
      }
      if (pending) break;
    }
    result.termination = pending ? Termination::StepCap : Termination::Converged;
    result.message = pending ? "step cap reached with supercritical tips" : "no supercritical tip at the final load";
  } catch (const ScenarioError&) {
    throw;
  } catch (const FloatingStructureError& e) {
    result.termination = Termination::Error;
    result.message = result.growth_steps > 0
                         ? std::string("fracture network isolates a block held only by contact: ") + e.what()
                         : e.what();
  } catch (const Error& e) {
    result.termination = Termination::Error;
    result.message = e.what();
  }
  result.final_geometry = geometry;
  outputs.finish(result.termination, result.message, result.growth_steps);
  return result;
}

}  // namespace wingcrack
