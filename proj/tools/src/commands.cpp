#include "commands.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include <json.hpp>

#include "gsearch/analysis.hpp"
#include "gsearch/dynamics.hpp"
#include "gsearch/errors.hpp"
#include "gsearch/spectral.hpp"
#include "gsearch_cli/cli.hpp"
#include "output.hpp"
#include "svg.hpp"

namespace gsearch::cli {

namespace {

using Json = nlohmann::ordered_json;

SiteId checked_mark(const LatticeSpec& spec, const std::string& text) {
  const SiteId site = parse_mark(text);
  if (!spec.contains(site)) {
    throw InvalidArgument("mark " + text + " lies outside the " + std::to_string(spec.m()) + "x" +
                          std::to_string(spec.n()) + " torus");
  }
  return site;
}

Json site_json(const SiteId& s) {
  return Json{{"alpha", s.alpha}, {"beta", s.beta}, {"sublattice", std::string(1, to_char(s.sublattice))}};
}

Json fit_json(const ScalingFit& fit) {
  Json j{{"model", std::string(model_name(fit.model))}, {"c", fit.c}};
  if (fit.model == ScalingModel::LogLinear) j["b"] = fit.b;
  j["rss"] = fit.rss;
  j["r_squared"] = fit.r_squared;
  j["points"] = fit.points;
  return j;
}

void finish(RunManifest& manifest, const std::filesystem::path& csv, std::ostream& out, std::string& stage) {
  stage = "write manifest";
  const auto path = sibling(csv, ".manifest.json");
  manifest.finish(path);
  for (const auto& p : manifest.outputs()) out << "wrote " << p.string() << '\n';
  out << "wrote " << path.string() << '\n';
}

}  // namespace

void cmd_spectrum(const SpectrumArgs& args, std::ostream& out, std::string& stage) {
  stage = "parse arguments";
  const LatticeSpec spec = parse_cells(args.cells);
  const GridSpec grid = parse_grid(args.gamma);
  const SiteId marked = checked_mark(spec, args.mark);
  const int points = grid_points(grid.from, grid.to, grid.step);
  RunManifest manifest("spectrum", Json{{"cells", args.cells}, {"gamma", args.gamma}, {"mark", args.mark},
                                        {"gamma_points", points}});

  stage = "gamma sweep";
  const GammaSweep sweep = gamma_sweep(spec, marked, grid.from, grid.to, points);
  const CrossingLocation crossing = locate_crossing(sweep);
  double asymmetry = 0.0;
  int broken = 0;
  for (std::size_t g = 0; g < sweep.gammas.size(); ++g) {
    asymmetry = std::max(asymmetry, spectral_asymmetry(sweep.spectra[g]));
    broken += sweep.broken[g] ? 1 : 0;
  }

  stage = "write spectrum csv";
  CsvWriter csv({"gamma", "index", "eigenvalue"});
  for (std::size_t g = 0; g < sweep.gammas.size(); ++g) {
    for (Eigen::Index i = 0; i < sweep.spectra[g].size(); ++i) {
      csv.add(sweep.gammas[g]).add(static_cast<long long>(i)).add(sweep.spectra[g][i]);
      csv.end_row();
    }
  }
  const std::filesystem::path csv_path = args.out;
  manifest.emit(csv_path, csv.text());

  CsvWriter branches({"gamma", "upper", "lower", "upper_index", "lower_index", "perturber_weight", "continuity", "broken"});
  for (std::size_t g = 0; g < sweep.gammas.size(); ++g) {
    branches.add(sweep.gammas[g]).add(sweep.branch_energy[g][0]).add(sweep.branch_energy[g][1]);
    branches.add(static_cast<long long>(sweep.branch_index[g][0])).add(static_cast<long long>(sweep.branch_index[g][1]));
    branches.add(sweep.branch_weight[g]).add(sweep.continuity[g]).add(static_cast<long long>(sweep.broken[g]));
    branches.end_row();
  }
  manifest.emit(sibling(csv_path, ".branches.csv"), branches.text());

  stage = "write summary";
  Json summary{{"cells", {spec.m(), spec.n()}},
               {"sites", spec.sites()},
               {"marked", site_json(marked)},
               {"gamma_points", points},
               {"crossing", {{"gamma", crossing.gamma}, {"upper", crossing.upper}, {"lower", crossing.lower}}},
               {"max_spectral_asymmetry", asymmetry},
               {"broken_tracking_steps", broken}};
  manifest.emit(sibling(csv_path, ".summary.json"), summary.dump(2) + "\n");

  if (!args.svg.empty()) {
    stage = "write svg";
    std::vector<Series> series;
    for (Eigen::Index i = 0; i < spec.sites(); ++i) {
      Series s;
      s.x = sweep.gammas;
      for (const auto& values : sweep.spectra) s.y.push_back(values[i]);
      s.color = "#9a9a9a";
      s.stroke_width = 0.6;
      series.push_back(std::move(s));
    }
    for (int b = 0; b < 2; ++b) {
      Series s;
      s.x = sweep.gammas;
      for (const auto& e : sweep.branch_energy) s.y.push_back(e[b]);
      s.color = "#d62728";
      s.stroke_width = 1.8;
      s.label = b == 0 ? "perturber states" : "";
      series.push_back(std::move(s));
    }
    const std::vector<Marker> markers{{crossing.gamma, 0.0, "#1f77b4", "closest approach"}};
    PlotSpec plot{"Spectrum of H_gamma, " + std::to_string(spec.m()) + "x" + std::to_string(spec.n()) + " cells",
                  "gamma", "E"};
    manifest.emit(args.svg, render_line_plot(plot, series, markers));
  }
  out << "closest approach of perturber branches at gamma = " << crossing.gamma << " (E = +-" << crossing.upper
      << ")\n";
  finish(manifest, csv_path, out, stage);
}

void cmd_search(const SearchArgs& args, std::ostream& out, std::string& stage) {
  stage = "parse arguments";
  const LatticeSpec spec = parse_cells(args.cells);
  const SiteId marked = checked_mark(spec, args.mark);
  SearchOptions options;
  options.start = args.start == "uniform-dirac" ? StartKind::UniformDirac : StartKind::Optimal;
  options.dt = args.dt;
  options.t_max = args.tmax;
  RunManifest manifest("search", Json{{"cells", args.cells}, {"mark", args.mark}, {"start", args.start},
                                      {"dt", args.dt}, {"tmax", args.tmax}});

  stage = "search run";
  const SearchRun run = run_search(spec, marked, options);

  stage = "write search csv";
  CsvWriter csv({"t", "P_total", "P_site1", "P_site2", "P_site3", "P_marked"});
  for (std::size_t j = 0; j < run.times.size(); ++j) {
    csv.add(run.times[j]).add(run.p_total[j]);
    for (int i = 0; i < 3; ++i) csv.add(run.p_site[i][j]);
    csv.add(run.p_marked[j]);
    csv.end_row();
  }
  const std::filesystem::path csv_path = args.out;
  manifest.emit(csv_path, csv.text());

  stage = "write summary";
  Json neighbors = Json::array();
  for (const auto& s : run.neighbors) neighbors.push_back(site_json(s));
  Json summary{{"cells", {spec.m(), spec.n()}},
               {"sites", spec.sites()},
               {"marked", site_json(marked)},
               {"neighbors", neighbors},
               {"start", args.start},
               {"dt", run.dt},
               {"t_max", run.t_max},
               {"T_peak", run.t_peak},
               {"P_peak", run.p_peak},
               {"ell_amplitude_at_peak", std::abs(run.ell_amplitude_at_peak)},
               {"mean_site_probability", run.mean_site_probability},
               {"E_plus", run.e_plus},
               {"T_reduced", run.t_reduced},
               {"T_gap", run.t_gap},
               {"T_peak_times_E_plus", run.t_peak * run.e_plus},
               {"max_norm_error", run.max_norm_error}};
  manifest.emit(sibling(csv_path, ".summary.json"), summary.dump(2) + "\n");

  if (!args.svg.empty()) {
    stage = "write svg";
    std::vector<Series> series{{run.times, run.p_total, "#1f77b4", 1.6, "three neighbours"},
                               {run.times, run.p_site[0], "#2ca02c", 1.2, "one neighbour"},
                               {run.times, run.p_marked, "#7f7f7f", 1.0, "marked site"}};
    const std::vector<Marker> markers{{run.t_peak, run.p_peak, "#d62728", "peak"}};
    PlotSpec plot{"Search on " + std::to_string(spec.m()) + "x" + std::to_string(spec.n()) + " cells", "t",
                  "probability"};
    manifest.emit(args.svg, render_line_plot(plot, series, markers));
  }
  out << "T_peak = " << run.t_peak << ", P_peak = " << run.p_peak << ", pi/(2E+) = " << run.t_gap
      << ", (pi/4)sqrt(N/3) = " << run.t_reduced << '\n';
  finish(manifest, csv_path, out, stage);
}

void cmd_scaling(const ScalingArgs& args, std::ostream& out, std::string& stage) {
  stage = "parse arguments";
  const std::vector<int> sizes = parse_sizes(args.sizes);
  if (sizes.size() < 4) throw InvalidArgument("scaling studies need at least 4 sizes");
  const SiteId marked = parse_mark(args.mark);
  RunManifest manifest("scaling", Json{{"study", args.study}, {"sizes", sizes}, {"mark", args.mark}});
  const std::filesystem::path csv_path = args.out;
  Json report{{"study", args.study}, {"sizes", sizes}};

  if (args.study == "gap") {
    stage = "gap study";
    const GapStudy study = gap_scaling_study(sizes, marked);
    stage = "write scaling csv";
    CsvWriter csv({"m", "n", "N", "E_plus", "E_minus", "gap", "resolvent_E_plus", "gap_sqrt_N", "gap_sqrt_N_lnN"});
    for (const auto& r : study.records) {
      const double n = r.sites;
      csv.add(static_cast<long long>(r.m)).add(static_cast<long long>(r.n)).add(static_cast<long long>(r.sites));
      csv.add(r.e_plus).add(r.e_minus).add(r.gap).add(r.resolvent_e_plus);
      csv.add(r.gap * std::sqrt(n)).add(r.gap * std::sqrt(n * std::log(n)));
      csv.end_row();
    }
    manifest.emit(csv_path, csv.text());
    report["fits"] = Json::array({fit_json(study.inv_sqrt), fit_json(study.inv_sqrt_log)});
    report["verdict"] = std::string(model_name(study.verdict));
    report["c2_without_smallest"] = study.c2_without_smallest;
    report["gap_monotone_decreasing"] = study.monotone_decreasing;
    out << "verdict: " << model_name(study.verdict) << '\n';
  } else if (args.study == "time") {
    stage = "time study";
    const TimeStudy study = search_time_study(sizes, marked);
    stage = "write scaling csv";
    CsvWriter csv({"m", "n", "N", "E_plus", "T_peak", "T_gap", "T_reduced", "T_peak_E_plus", "P_peak",
                   "P_peak_lnN", "T_peak_lnN"});
    for (const auto& r : study.records) {
      const double ln = std::log(static_cast<double>(r.sites));
      csv.add(static_cast<long long>(r.m)).add(static_cast<long long>(r.n)).add(static_cast<long long>(r.sites));
      csv.add(r.e_plus).add(r.t_peak).add(r.t_gap).add(r.t_reduced).add(r.t_peak * r.e_plus);
      csv.add(r.p_peak).add(r.p_peak * ln).add(r.t_peak * ln);
      csv.end_row();
    }
    manifest.emit(csv_path, csv.text());
    report["fits"] = Json::array({fit_json(study.sqrt), fit_json(study.sqrt_log)});
    report["verdict"] = std::string(model_name(study.verdict));
    report["P_peak_lnN_relative_drift"] = study.p_peak_log_drift;
    out << "verdict: " << model_name(study.verdict) << '\n';
  } else if (args.study == "amplitude") {
    stage = "amplitude study";
    const AmplitudeStudy study = amplitude_envelope_study(sizes, marked);
    stage = "write scaling csv";
    CsvWriter csv({"m", "n", "N", "I2", "measured", "predicted", "ratio"});
    for (std::size_t i = 0; i < study.records.size(); ++i) {
      const auto& r = study.records[i];
      csv.add(static_cast<long long>(r.m)).add(static_cast<long long>(r.n)).add(static_cast<long long>(r.sites));
      csv.add(r.i2).add(r.amplitude).add(r.predicted_amplitude).add(study.ratio[i]);
      csv.end_row();
    }
    manifest.emit(csv_path, csv.text());
    report["ratio"] = study.ratio;
    out << "measured/predicted amplitude at largest size: " << study.ratio.back() << '\n';
  } else {
    stage = "moment study";
    const MomentStudy study = moment_study(sizes);
    stage = "write scaling csv";
    CsvWriter csv({"m", "n", "N", "ln_N", "I2", "I4", "I4_over_N"});
    for (const auto& r : study.records) {
      csv.add(static_cast<long long>(r.m)).add(static_cast<long long>(r.n)).add(static_cast<long long>(r.sites));
      csv.add(std::log(static_cast<double>(r.sites))).add(r.i2).add(r.i4).add(r.i4 / r.sites);
      csv.end_row();
    }
    manifest.emit(csv_path, csv.text());
    const auto& lim = study.limit;
    report["fits"] = Json::array({fit_json(study.i2_log)});
    report["moment_limit"] = {{"k", lim.k},
                              {"zeta_S_K", lim.zeta},
                              {"limit_4sqrt3", lim.limit_4sqrt3},
                              {"limit_2sqrt3", lim.limit_2sqrt3},
                              {"last_ratio", lim.rows.back().ratio},
                              {"favoured_prefactor",
                               lim.favoured_prefactor > 3.0 * std::numbers::sqrt3 ? "4sqrt3" : "2sqrt3"},
                              {"monotone", lim.monotone},
                              {"converging", lim.converging}};
    out << "I2 = c ln N + b: R^2 = " << study.i2_log.r_squared << '\n';
  }

  stage = "write summary";
  manifest.emit(sibling(csv_path, ".summary.json"), report.dump(2) + "\n");
  finish(manifest, csv_path, out, stage);
}

void cmd_transfer(const TransferArgs& args, std::ostream& out, std::string& stage) {
  stage = "parse arguments";
  const LatticeSpec spec = parse_cells(args.cells);
  const SiteId first = checked_mark(spec, args.mark1);
  const SiteId second = checked_mark(spec, args.mark2);
  RunManifest manifest("transfer", Json{{"cells", args.cells}, {"mark1", args.mark1}, {"mark2", args.mark2},
                                        {"dt", args.dt}, {"tmax", args.tmax}});
  manifest.note("initial_state", "|l1> projected onto the eigenvectors with |E| < eps_min/2, renormalised");

  stage = "transfer run";
  const TransferRun run = run_transfer(spec, first, second, args.dt, args.tmax);

  stage = "write transfer csv";
  CsvWriter csv({"t", "P_ell1", "P_ell2"});
  for (std::size_t j = 0; j < run.times.size(); ++j) {
    csv.add(run.times[j]).add(run.p_ell1[j]).add(run.p_ell2[j]);
    csv.end_row();
  }
  const std::filesystem::path csv_path = args.out;
  manifest.emit(csv_path, csv.text());

  stage = "write summary";
  Json summary{{"cells", {spec.m(), spec.n()}},
               {"sites", spec.sites()},
               {"mark1", site_json(first)},
               {"mark2", site_json(second)},
               {"sublattice_pair", run.pairing == SublatticePair::Same ? "same" : "cross"},
               {"dt", run.dt},
               {"t_max", run.t_max},
               {"window", run.window},
               {"window_states", run.window_states},
               {"initial_localization", run.initial_localization},
               {"P_ell2_max", run.p2_max},
               {"period", run.period ? Json(*run.period) : Json(nullptr)},
               {"P_ell2_at_period", run.p2_at_period},
               {"max_norm_error", run.max_norm_error}};
  manifest.emit(sibling(csv_path, ".summary.json"), summary.dump(2) + "\n");

  if (!args.svg.empty()) {
    stage = "write svg";
    std::vector<Series> series{{run.times, run.p_ell1, "#1f77b4", 1.2, "|<l1|psi>|^2"},
                               {run.times, run.p_ell2, "#d62728", 1.2, "|<l2|psi>|^2"}};
    PlotSpec plot{"Transfer on " + std::to_string(spec.m()) + "x" + std::to_string(spec.n()) + " cells", "t",
                  "probability"};
    manifest.emit(args.svg, render_line_plot(plot, series));
  }
  out << "sublattice pair: " << (run.pairing == SublatticePair::Same ? "same" : "cross") << ", period = ";
  if (run.period) {
    out << *run.period << '\n';
  } else {
    out << "none within t_max\n";
  }
  finish(manifest, csv_path, out, stage);
}

}  // namespace gsearch::cli
