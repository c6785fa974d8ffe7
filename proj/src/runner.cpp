#include "uq/runner.hpp"

#include "uq/metrics.hpp"
#include "uq/models/beam.hpp"
#include "uq/models/eole.hpp"
#include "uq/models/truss.hpp"
#include "uq/reliability.hpp"
#include "uq/rng.hpp"
#include "uq/sobol.hpp"
#include "uq/stdnormal.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>

namespace uq {

namespace fs = std::filesystem;

namespace {

// ---- strict config parsing ----

void reject_unknown(const Json& obj, std::initializer_list<const char*> known,
                    const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw ConfigError("config: unknown key '" + it.key() + "' in " + where);
  }
}

Marginal config_marginal(const Json& j) {
  reject_unknown(j, {"kind", "mean", "cov", "std", "lower", "upper", "a", "b"}, "marginal");
  const std::string kind = j.at("kind").get<std::string>();
  const bool native = j.contains("a") || j.contains("b");
  if (kind == "lognormal") {
    if (native) return Marginal::lognormal(j.at("a").get<double>(), j.at("b").get<double>());
    return Marginal::lognormal_moments(j.at("mean").get<double>(), j.at("cov").get<double>());
  }
  if (kind == "gumbel") {
    if (native) return Marginal::gumbel(j.at("a").get<double>(), j.at("b").get<double>());
    if (j.contains("cov"))
      return Marginal::gumbel_moments(j.at("mean").get<double>(), j.at("cov").get<double>());
    const double mean = j.at("mean").get<double>();
    return Marginal::gumbel_moments(mean, j.at("std").get<double>() / mean);
  }
  if (kind == "truncated-gaussian")
    return Marginal::truncated_gaussian(j.at("mean").get<double>(), j.at("std").get<double>());
  if (kind == "uniform")
    return Marginal::uniform(j.at("lower").get<double>(), j.at("upper").get<double>());
  if (kind == "gaussian")
    return Marginal::gaussian(j.at("mean").get<double>(), j.at("std").get<double>());
  throw ConfigError("config: unknown marginal kind '" + kind + "'");
}

std::shared_ptr<const InputModel> config_input_model(const Json& j) {
  reject_unknown(j, {"marginals", "correlation"}, "input_model");
  std::vector<Marginal> marginals;
  for (const auto& mj : j.at("marginals")) marginals.push_back(config_marginal(mj));
  Matrix corr;
  if (j.contains("correlation")) {
    const auto& rows = j.at("correlation");
    corr.resize(static_cast<Index>(rows.size()), static_cast<Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t c = 0; c < rows[r].size(); ++c)
        corr(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c].get<double>();
  }
  return std::make_shared<InputModel>(std::move(marginals), std::move(corr));
}

}  // namespace

ExperimentConfig parse_config(const Json& j) {
  try {
    reject_unknown(j,
                   {"model", "output_dir", "threads", "seeds", "ed", "validation", "lra", "pce",
                    "reliability", "kde", "eole", "table", "input_model", "truss_geometry"},
                   "top level");
    ExperimentConfig cfg;
    cfg.model = j.at("model").get<std::string>();
    if (cfg.model != "beam" && cfg.model != "truss" && cfg.model != "eole-demo" &&
        cfg.model != "external-table")
      throw ConfigError("config: model must be beam | truss | eole-demo | external-table");
    cfg.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("threads")) cfg.threads = j.at("threads").get<unsigned>();

    if (j.contains("seeds")) {
      reject_unknown(j.at("seeds"), {"ed", "analysis"}, "seeds");
      cfg.ed_seed = j.at("seeds").value("ed", cfg.ed_seed);
      cfg.analysis_seed = j.at("seeds").value("analysis", cfg.analysis_seed);
    }

    const bool wants_ed = cfg.model == "beam" || cfg.model == "truss";
    if (j.contains("ed")) {
      if (!wants_ed)
        throw ConfigError("config: 'ed' section applies only to beam/truss models");
      reject_unknown(j.at("ed"), {"sampler", "size"}, "ed");
      cfg.ed_sampler = j.at("ed").value("sampler", cfg.ed_sampler);
      if (cfg.ed_sampler != "sobol" && cfg.ed_sampler != "mcs")
        throw ConfigError("config: ed.sampler must be sobol | mcs");
      cfg.ed_size = j.at("ed").at("size").get<Index>();
      if (cfg.ed_size < 1) throw ConfigError("config: ed.size must be >= 1");
    } else if (wants_ed) {
      throw ConfigError("config: 'ed' section is required for beam/truss models");
    }

    if (j.contains("validation")) {
      reject_unknown(j.at("validation"), {"size"}, "validation");
      cfg.validation_size = j.at("validation").at("size").get<Index>();
      if (cfg.validation_size < 2) throw ConfigError("config: validation.size must be >= 2");
    }

    if (j.contains("lra")) {
      const Json& l = j.at("lra");
      reject_unknown(l, {"enabled", "rank_max", "degree_grid", "max_sweeps", "min_decrease",
                         "cv_folds"},
                     "lra");
      cfg.lra_enabled = l.value("enabled", true);
      cfg.lra.rank_max = l.value("rank_max", cfg.lra.rank_max);
      if (l.contains("degree_grid")) cfg.lra.degree_grid = l.at("degree_grid").get<std::vector<int>>();
      cfg.lra.max_sweeps = l.value("max_sweeps", cfg.lra.max_sweeps);
      cfg.lra.min_decrease = l.value("min_decrease", cfg.lra.min_decrease);
      cfg.lra.cv_folds = l.value("cv_folds", cfg.lra.cv_folds);
      if (cfg.lra.rank_max < 1 || cfg.lra.max_sweeps < 1 || !(cfg.lra.min_decrease > 0.0) ||
          cfg.lra.cv_folds < 2 || cfg.lra.degree_grid.empty())
        throw ConfigError("config: invalid lra settings");
    }

    if (j.contains("pce")) {
      const Json& p = j.at("pce");
      reject_unknown(p, {"enabled", "degree_grid", "q_grid", "max_candidate_basis"}, "pce");
      cfg.pce_enabled = p.value("enabled", true);
      if (p.contains("degree_grid")) cfg.pce.degree_grid = p.at("degree_grid").get<std::vector<int>>();
      if (p.contains("q_grid")) cfg.pce.q_grid = p.at("q_grid").get<std::vector<double>>();
      cfg.pce.max_candidate_basis = p.value("max_candidate_basis", cfg.pce.max_candidate_basis);
      if (cfg.pce.degree_grid.empty() || cfg.pce.q_grid.empty())
        throw ConfigError("config: pce grids must be nonempty");
      for (double q : cfg.pce.q_grid)
        if (!(q > 0.0) || q > 1.0) throw ConfigError("config: pce q values must be in (0,1]");
    }

    if (j.contains("reliability")) {
      const Json& r = j.at("reliability");
      reject_unknown(r, {"thresholds", "sample_size", "reference", "target_cov", "is_batch",
                         "max_batches"},
                     "reliability");
      if (r.contains("thresholds"))
        cfg.reliability.thresholds = r.at("thresholds").get<std::vector<double>>();
      if (!std::is_sorted(cfg.reliability.thresholds.begin(), cfg.reliability.thresholds.end()))
        throw ConfigError("config: reliability.thresholds must be sorted ascending");
      cfg.reliability.sample_size = r.value("sample_size", cfg.reliability.sample_size);
      cfg.reliability.reference = r.value("reference", cfg.reliability.reference);
      cfg.reliability.target_cov = r.value("target_cov", cfg.reliability.target_cov);
      cfg.reliability.is_batch = r.value("is_batch", cfg.reliability.is_batch);
      cfg.reliability.max_batches = r.value("max_batches", cfg.reliability.max_batches);
      if (cfg.reliability.sample_size < 1 || cfg.reliability.is_batch < 1 ||
          cfg.reliability.max_batches < 1 || !(cfg.reliability.target_cov > 0.0))
        throw ConfigError("config: invalid reliability settings");
      const std::string& ref = cfg.reliability.reference;
      if (ref != "auto" && ref != "analytical" && ref != "is" && ref != "none")
        throw ConfigError("config: reliability.reference must be auto | analytical | is | none");
      if (ref == "analytical" && cfg.model != "beam")
        throw ConfigError("config: analytical reference exists only for the beam model");
    }

    if (j.contains("kde")) {
      reject_unknown(j.at("kde"), {"points", "samples"}, "kde");
      cfg.kde.points = j.at("kde").value("points", cfg.kde.points);
      cfg.kde.samples = j.at("kde").value("samples", cfg.kde.samples);
      if (cfg.kde.points < 2 || cfg.kde.samples < 2) throw ConfigError("config: invalid kde settings");
    }

    if (j.contains("eole")) {
      if (cfg.model != "eole-demo")
        throw ConfigError("config: 'eole' section applies only to the eole-demo model");
      const Json& e = j.at("eole");
      reject_unknown(e, {"nx", "ny", "spacing", "corr_length", "variance_fraction", "mean_kappa",
                         "std_kappa"},
                     "eole");
      cfg.eole.nx = e.value("nx", cfg.eole.nx);
      cfg.eole.ny = e.value("ny", cfg.eole.ny);
      cfg.eole.spacing = e.value("spacing", cfg.eole.spacing);
      cfg.eole.corr_length = e.value("corr_length", cfg.eole.corr_length);
      cfg.eole.variance_fraction = e.value("variance_fraction", cfg.eole.variance_fraction);
      cfg.eole.mean_kappa = e.value("mean_kappa", cfg.eole.mean_kappa);
      cfg.eole.std_kappa = e.value("std_kappa", cfg.eole.std_kappa);
      if (cfg.eole.nx < 1 || cfg.eole.ny < 1 || !(cfg.eole.spacing > 0.0) ||
          !(cfg.eole.corr_length > 0.0))
        throw ConfigError("config: invalid eole settings");
    }

    if (cfg.model == "external-table") {
      if (!j.contains("table")) throw ConfigError("config: external-table mode needs 'table'");
      cfg.table_path = j.at("table").get<std::string>();
      if (!j.contains("input_model"))
        throw ConfigError("config: external-table mode needs 'input_model'");
      cfg.input_model = j.at("input_model");
      config_input_model(*cfg.input_model);  // validate eagerly
    } else {
      if (j.contains("table")) throw ConfigError("config: 'table' applies only to external-table");
      if (j.contains("input_model"))
        throw ConfigError("config: 'input_model' applies only to external-table");
    }

    if (j.contains("truss_geometry")) {
      if (cfg.model != "truss")
        throw ConfigError("config: 'truss_geometry' applies only to the truss model");
      cfg.truss_geometry_path = j.at("truss_geometry").get<std::string>();
    }

    return cfg;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::string& path) {
  Json j;
  try {
    j = read_json_file(path);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return parse_config(j);
}

namespace {

double nan_to_null_guard(double v) { return v; }

Json reliability_to_json(const ReliabilityResult& r) {
  Json j;
  j["method"] = r.method;
  j["pf"] = r.pf;
  if (r.pf > 0.0 && std::isfinite(r.beta))
    j["beta"] = r.beta;
  else
    j["beta"] = nullptr;
  if (std::isfinite(r.cov))
    j["cov"] = nan_to_null_guard(r.cov);
  else
    j["cov"] = nullptr;
  if (r.method == "mcs") {
    // the exact binomial form next to the 1/sqrt(n pf) approximation
    if (std::isfinite(r.cov_exact))
      j["cov_exact"] = r.cov_exact;
    else
      j["cov_exact"] = nullptr;
  }
  j["n_evals"] = r.n_evals;
  j["zero_failures"] = r.zero_failures;
  return j;
}

Json error_report_to_json(const ErrorReport& e) {
  Json j;
  j["absolute"] = e.absolute;
  if (e.relative_defined)
    j["relative"] = e.relative;
  else
    j["relative"] = nullptr;
  j["n_points"] = e.n_points;
  j["mean_signed_residual"] = e.mean_signed_residual;
  if (!e.condition.empty()) j["condition"] = e.condition;
  return j;
}

struct RunContext {
  ExperimentConfig cfg;
  std::shared_ptr<const InputModel> input;
  std::function<double(const Vector&)> response;  // physical space; empty when absent
  bool has_model = false;
  std::string reference;  // analytical | is | none

  Matrix ed_u, ed_x;
  Vector ed_y;
  std::optional<LraSelection> lra;
  std::optional<PceSelection> pce;
  Json summary;
  std::vector<std::string> artifacts;
};

void note_artifact(RunContext& ctx, const std::string& path) { ctx.artifacts.push_back(path); }

std::string out_path(const RunContext& ctx, const std::string& name) {
  return (fs::path(ctx.cfg.output_dir) / name).string();
}

void stage_setup(RunContext& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  if (cfg.model == "beam") {
    ctx.input = beam_input_model();
    ctx.response = [](const Vector& x) { return beam_deflection(x); };
    ctx.has_model = true;
    ctx.reference = cfg.reliability.reference == "auto" ? "analytical" : cfg.reliability.reference;
  } else if (cfg.model == "truss") {
    TrussGeometry geometry = cfg.truss_geometry_path.empty()
                                 ? default_truss_geometry()
                                 : truss_geometry_from_json(read_json_file(cfg.truss_geometry_path));
    auto truss = std::make_shared<TrussModel>(std::move(geometry));
    ctx.input = truss_input_model();
    if (truss->input_dimension() != ctx.input->dimension())
      throw std::invalid_argument("truss geometry load count does not match the bundled marginals");
    ctx.response = [truss](const Vector& x) { return truss->deflection(x); };
    ctx.has_model = true;
    ctx.reference = cfg.reliability.reference == "auto" ? "is" : cfg.reliability.reference;
  } else if (cfg.model == "external-table") {
    ctx.input = config_input_model(*cfg.input_model);
    ctx.has_model = false;
    ctx.reference = cfg.reliability.reference == "auto" ? "none" : cfg.reliability.reference;
  }
}

void stage_ed(RunContext& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const Index m = ctx.input->dimension();
  if (cfg.model == "external-table") {
    const CsvTable table = read_csv(cfg.table_path);
    if (table.data.cols() != m + 1)
      throw std::invalid_argument("external table must have M input columns plus one response");
    if (table.data.rows() < 2) throw std::invalid_argument("external table has too few rows");
    ctx.ed_x = table.data.leftCols(m);
    ctx.ed_y = table.data.col(m);
    TransformFlags flags;
    ctx.ed_u = ctx.input->to_standard_rows(ctx.ed_x, &flags);
    if (flags.clipped) ctx.summary["warnings"].push_back("table points clipped in standard space");
  } else {
    const Index n = cfg.ed_size;
    if (cfg.ed_sampler == "sobol") {
      Matrix s = sobol_design(m, n);
      ctx.ed_u.resize(n, m);
      for (Index i = 0; i < n; ++i)
        for (Index j2 = 0; j2 < m; ++j2) ctx.ed_u(i, j2) = norm_ppf(s(i, j2));
    } else {
      ctx.ed_u = normal_matrix(cfg.ed_seed, n, m);
    }
    ctx.ed_x = ctx.input->to_physical_rows(ctx.ed_u);
    ctx.ed_y.resize(n);
    for (Index i = 0; i < n; ++i) ctx.ed_y[i] = ctx.response(ctx.ed_x.row(i));
  }

  std::vector<std::string> header;
  for (Index c = 0; c < m; ++c) header.push_back("x" + std::to_string(c + 1));
  header.push_back("y");
  Matrix out(ctx.ed_x.rows(), m + 1);
  out.leftCols(m) = ctx.ed_x;
  out.col(m) = ctx.ed_y;
  write_csv(out_path(ctx, "ed.csv"), header, out);
  note_artifact(ctx, out_path(ctx, "ed.csv"));
}

std::vector<PolyFamily> hermite_families(Index m) {
  return std::vector<PolyFamily>(static_cast<std::size_t>(m), PolyFamily::HermiteProbabilist);
}

void stage_surrogates(RunContext& ctx) {
  const Index m = ctx.input->dimension();
  if (ctx.cfg.lra_enabled) {
    LraConfig lcfg = ctx.cfg.lra;
    lcfg.seed = rng::derive(ctx.cfg.analysis_seed, "cv");
    LraSelection sel = select_lra(ctx.ed_u, ctx.ed_y, hermite_families(m), lcfg);
    sel.model.input = ctx.input;
    ctx.lra = std::move(sel);
    write_json_file(out_path(ctx, "lra_model.json"), to_json(ctx.lra->model));
    note_artifact(ctx, out_path(ctx, "lra_model.json"));
  }
  if (ctx.cfg.pce_enabled) {
    PceSelection sel = select_pce(ctx.ed_u, ctx.ed_y, hermite_families(m), ctx.cfg.pce);
    sel.model.input = ctx.input;
    ctx.pce = std::move(sel);
    write_json_file(out_path(ctx, "pce_model.json"), to_json(ctx.pce->model));
    note_artifact(ctx, out_path(ctx, "pce_model.json"));
  }
}

void stage_errors(RunContext& ctx) {
  Json errors;
  errors["ed_size"] = ctx.ed_u.rows();

  Matrix val_u;
  Vector val_y;
  if (ctx.has_model) {
    const Index nv = ctx.cfg.validation_size;
    val_u = normal_matrix(rng::derive(ctx.cfg.analysis_seed, "validation"), nv,
                          ctx.input->dimension());
    const Matrix val_x = ctx.input->to_physical_rows(val_u);
    val_y.resize(nv);
    for (Index i = 0; i < nv; ++i) val_y[i] = ctx.response(val_x.row(i));
    errors["validation_size"] = nv;
  }

  auto surrogate_block = [&](const Vector& ed_pred, const std::function<Vector(const Matrix&)>& pred)
      -> Json {
    Json block;
    block["empirical"] = error_report_to_json(generalization_error(ctx.ed_y, ed_pred));
    if (ctx.has_model) {
      const Vector val_pred = pred(val_u);
      block["generalization"] = error_report_to_json(generalization_error(val_y, val_pred));
      Json conditional = Json::array();
      for (double t : ctx.cfg.reliability.thresholds) {
        Json entry;
        entry["threshold"] = t;
        try {
          entry["error"] = error_report_to_json(conditional_generalization_error(val_y, val_pred, t));
        } catch (const std::exception& e) {
          entry["error"] = nullptr;
          entry["reason"] = e.what();
        }
        conditional.push_back(std::move(entry));
      }
      block["conditional"] = std::move(conditional);
    }
    return block;
  };

  if (ctx.lra) {
    const LraModel& model = ctx.lra->model;
    Json block = surrogate_block(predict_standard(model, ctx.ed_u),
                                 [&model](const Matrix& u) { return predict_standard(model, u); });
    block["cv"] = ctx.lra->cv_error;
    errors["lra"] = std::move(block);
  }
  if (ctx.pce) {
    const PceModel& model = ctx.pce->model;
    Json block = surrogate_block(predict_standard(model, ctx.ed_u),
                                 [&model](const Matrix& u) { return predict_standard(model, u); });
    block["loo_corrected"] = ctx.pce->model.loo.relative_corrected;
    errors["pce"] = std::move(block);
  }

  write_json_file(out_path(ctx, "errors.json"), errors);
  note_artifact(ctx, out_path(ctx, "errors.json"));
  ctx.summary["errors"] = std::move(errors);
}

void stage_kde(RunContext& ctx) {
  const Index m = ctx.input->dimension();
  const Matrix u = normal_matrix(rng::derive(ctx.cfg.analysis_seed, "kde"), ctx.cfg.kde.samples, m);

  Vector model_y;
  if (ctx.has_model) {
    const Matrix x = ctx.input->to_physical_rows(u);
    model_y.resize(u.rows());
    for (Index i = 0; i < u.rows(); ++i) model_y[i] = ctx.response(x.row(i));
  }

  // one common grid so the curves overlay directly
  Vector anchor;
  if (ctx.has_model)
    anchor = model_y;
  else if (ctx.lra)
    anchor = predict_standard(ctx.lra->model, u);
  else if (ctx.pce)
    anchor = predict_standard(ctx.pce->model, u);
  else
    return;
  const Vector grid = kde_grid(anchor, ctx.cfg.kde.points);

  auto write_curve = [&](const std::string& name, const Vector& samples) {
    Matrix out(grid.size(), 2);
    out.col(0) = grid;
    out.col(1) = kde(samples, grid);
    write_csv(out_path(ctx, name), {"grid", "density"}, out);
    note_artifact(ctx, out_path(ctx, name));
  };

  if (ctx.has_model) write_curve("kde_model.csv", model_y);
  if (ctx.lra) write_curve("kde_lra.csv", predict_standard(ctx.lra->model, u));
  if (ctx.pce) write_curve("kde_pce.csv", predict_standard(ctx.pce->model, u));
}

void write_pf_csv(RunContext& ctx, const std::string& name, const std::vector<PfCurvePoint>& curve) {
  const std::string path = out_path(ctx, name);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << "threshold,pf,cov,beta,n_evals,method\r\n";
  os.precision(17);
  for (const auto& pt : curve) {
    if (pt.failed) {
      os << pt.threshold << ",,,,," << pt.result.method << "\r\n";
      continue;
    }
    os << pt.threshold << "," << pt.result.pf << "," << pt.result.cov << "," << pt.result.beta
       << "," << pt.result.n_evals << "," << pt.result.method << "\r\n";
  }
  if (!os) throw std::runtime_error("write failed for " + path);
  note_artifact(ctx, path);
}

void stage_reliability(RunContext& ctx) {
  const auto& thresholds = ctx.cfg.reliability.thresholds;
  if (thresholds.empty()) return;
  const Index m = ctx.input->dimension();
  const std::uint64_t mcs_seed = rng::derive(ctx.cfg.analysis_seed, "mcs");

  Json rows = Json::array();
  for (double t : thresholds) rows.push_back(Json{{"threshold", t}});

  auto fold_curve = [&rows](const char* key, const std::vector<PfCurvePoint>& curve) {
    for (std::size_t k = 0; k < curve.size(); ++k) {
      if (curve[k].failed)
        rows[k][key] = Json{{"failed", true}, {"error", curve[k].error}};
      else
        rows[k][key] = reliability_to_json(curve[k].result);
    }
  };

  if (ctx.lra) {
    const LraModel& model = ctx.lra->model;
    const auto curve = mcs_exceedance_curve(
        [&model](const Matrix& u) { return predict_standard(model, u); }, m, thresholds,
        ctx.cfg.reliability.sample_size, mcs_seed, ctx.cfg.threads);
    write_pf_csv(ctx, "pf_curve_lra.csv", curve);
    fold_curve("lra", curve);
  }
  if (ctx.pce) {
    const PceModel& model = ctx.pce->model;
    const auto curve = mcs_exceedance_curve(
        [&model](const Matrix& u) { return predict_standard(model, u); }, m, thresholds,
        ctx.cfg.reliability.sample_size, mcs_seed, ctx.cfg.threads);
    write_pf_csv(ctx, "pf_curve_pce.csv", curve);
    fold_curve("pce", curve);
  }

  if (ctx.reference == "analytical") {
    const auto curve = analytical_curve([](double t) { return beam_analytical_pf(t); }, thresholds);
    write_pf_csv(ctx, "pf_curve_reference.csv", curve);
    fold_curve("reference", curve);
  } else if (ctx.reference == "is") {
    ImportanceSamplingConfig iscfg;
    iscfg.batch = ctx.cfg.reliability.is_batch;
    iscfg.target_cov = ctx.cfg.reliability.target_cov;
    iscfg.max_batches = ctx.cfg.reliability.max_batches;
    iscfg.seed = rng::derive(ctx.cfg.analysis_seed, "is");
    const auto curve = is_curve(ctx.response, *ctx.input, thresholds, iscfg);
    write_pf_csv(ctx, "pf_curve_reference.csv", curve);
    fold_curve("reference", curve);
  }

  Json rel;
  rel["sample_size"] = ctx.cfg.reliability.sample_size;
  rel["reference_method"] = ctx.reference;
  rel["rows"] = std::move(rows);
  ctx.summary["reliability"] = std::move(rel);
}

void stage_eole(RunContext& ctx) {
  const auto& e = ctx.cfg.eole;
  const Matrix grid = centered_grid(e.nx, e.ny, e.spacing);
  const EoleField field =
      eole_build(grid, e.corr_length, e.variance_fraction, e.mean_kappa, e.std_kappa);
  write_json_file(out_path(ctx, "eole_field.json"), to_json(field));
  note_artifact(ctx, out_path(ctx, "eole_field.json"));

  const Vector var = eole_variance(field, grid);
  Matrix out(grid.rows(), 3);
  out.leftCols(2) = grid;
  out.col(2) = var;
  write_csv(out_path(ctx, "eole_variance.csv"), {"z1", "z2", "variance"}, out);
  note_artifact(ctx, out_path(ctx, "eole_variance.csv"));

  Json ej;
  ej["modes"] = field.modes;
  ej["grid_points"] = grid.rows();
  ej["variance_fraction"] = field.variance_fraction;
  ej["captured_fraction"] = field.eigenvalues.head(field.modes).sum() / field.eigenvalues.sum();
  ej["mean_reconstruction_variance"] = var.mean();
  ej["max_reconstruction_variance"] = var.maxCoeff();
  ej["a_kappa"] = field.a_kappa;
  ej["b_kappa"] = field.b_kappa;
  ctx.summary["eole"] = std::move(ej);
}

void stage_summary(RunContext& ctx) {
  Json& s = ctx.summary;
  s["model"] = ctx.cfg.model;
  s["seeds"] = {{"ed", ctx.cfg.ed_seed}, {"analysis", ctx.cfg.analysis_seed}};
  if (ctx.cfg.model != "eole-demo") {
    s["ed"] = {{"sampler", ctx.cfg.model == "external-table" ? "table" : ctx.cfg.ed_sampler},
               {"size", ctx.ed_u.rows()}};
    if (ctx.lra) {
      s["lra"] = {{"rank", ctx.lra->rank},
                  {"degree", ctx.lra->degree},
                  {"cv_error", ctx.lra->cv_error},
                  {"variance_fallback", ctx.lra->variance_fallback}};
    }
    if (ctx.pce) {
      s["pce"] = {{"q", ctx.pce->q},
                  {"degree", ctx.pce->degree},
                  {"cardinality", ctx.pce->model.cardinality()},
                  {"loo_corrected", ctx.pce->model.loo.relative_corrected}};
    }
  }
  validate_against_schema(s, summary_schema());
  write_json_file(out_path(ctx, "summary.json"), s);
  note_artifact(ctx, out_path(ctx, "summary.json"));
}

}  // namespace

Json summary_schema() {
  // structural contract for summary.json; nested blocks stay open for
  // model-specific extensions
  return Json::parse(R"({
    "type": "object",
    "required": ["model", "seeds"],
    "properties": {
      "model": {"type": "string", "enum": ["beam", "truss", "eole-demo", "external-table"]},
      "seeds": {
        "type": "object",
        "required": ["ed", "analysis"],
        "properties": {"ed": {"type": "integer"}, "analysis": {"type": "integer"}},
        "additionalProperties": false
      },
      "ed": {
        "type": "object",
        "required": ["sampler", "size"],
        "properties": {"sampler": {"type": "string"}, "size": {"type": "integer"}},
        "additionalProperties": false
      },
      "lra": {
        "type": "object",
        "required": ["rank", "degree", "cv_error"],
        "properties": {
          "rank": {"type": "integer"},
          "degree": {"type": "integer"},
          "cv_error": {"type": "number"},
          "variance_fallback": {"type": "boolean"}
        },
        "additionalProperties": false
      },
      "pce": {
        "type": "object",
        "required": ["q", "degree", "cardinality", "loo_corrected"],
        "properties": {
          "q": {"type": "number"},
          "degree": {"type": "integer"},
          "cardinality": {"type": "integer"},
          "loo_corrected": {"type": "number"}
        },
        "additionalProperties": false
      },
      "errors": {"type": "object"},
      "reliability": {
        "type": "object",
        "required": ["rows", "reference_method", "sample_size"],
        "properties": {
          "rows": {"type": "array", "items": {"type": "object", "required": ["threshold"]}},
          "reference_method": {"type": "string"},
          "sample_size": {"type": "integer"}
        },
        "additionalProperties": false
      },
      "eole": {"type": "object"},
      "warnings": {"type": "array"}
    }
  })");
}

RunOutcome run_experiment(const std::string& config_path) {
  RunOutcome outcome;
  RunContext ctx;
  std::string stage = "config";
  try {
    ctx.cfg = load_config(config_path);
    fs::create_directories(ctx.cfg.output_dir);

    stage = "setup";
    stage_setup(ctx);
    if (ctx.cfg.model == "eole-demo") {
      stage = "eole";
      stage_eole(ctx);
    } else {
      stage = "ed";
      stage_ed(ctx);
      stage = "surrogates";
      stage_surrogates(ctx);
      stage = "errors";
      stage_errors(ctx);
      stage = "kde";
      stage_kde(ctx);
      stage = "reliability";
      stage_reliability(ctx);
    }
    stage = "summary";
    stage_summary(ctx);
    outcome.artifacts = ctx.artifacts;
    return outcome;
  } catch (const std::exception& e) {
    outcome.exit_code = dynamic_cast<const ConfigError*>(&e) ? 2 : 1;
    outcome.error = e.what();
    outcome.stage = stage;
    // keep whatever was produced, marked as partial
    for (const std::string& path : ctx.artifacts) {
      const fs::path p(path);
      fs::path renamed = p.parent_path() / (p.stem().string() + "_partial" + p.extension().string());
      std::error_code ec;
      fs::rename(p, renamed, ec);
    }
    if (!ctx.cfg.output_dir.empty()) {
      std::error_code ec;
      fs::create_directories(ctx.cfg.output_dir, ec);
      if (!ec) {
        Json err;
        err["stage"] = stage;
        err["error"] = outcome.error;
        err["exit_code"] = outcome.exit_code;
        try {
          write_json_file((fs::path(ctx.cfg.output_dir) / "error.json").string(), err);
        } catch (...) {
        }
      }
    }
    return outcome;
  }
}

namespace {

std::string fmt_pf(const Json& cell) {
  if (cell.is_null() || !cell.is_object() || cell.contains("failed")) return "-";
  const double pf = cell.at("pf").get<double>();
  if (!(pf > 0.0)) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", pf);
  return buf;
}

std::string fmt_beta(const Json& cell) {
  if (cell.is_null() || !cell.is_object() || cell.contains("failed") || cell.at("beta").is_null())
    return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", cell.at("beta").get<double>());
  return buf;
}

double beta_or_nan(const Json& cell) {
  if (cell.is_null() || !cell.is_object() || cell.contains("failed") || !cell.contains("beta") ||
      cell.at("beta").is_null())
    return std::numeric_limits<double>::quiet_NaN();
  return cell.at("beta").get<double>();
}

std::string fmt_ratio(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b) || b == 0.0) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", a / b);
  return buf;
}

}  // namespace

void compare_report(const std::string& summary_a, const std::string& summary_b,
                    const std::string& output_dir) {
  const Json a = read_json_file(summary_a);
  const Json b = read_json_file(summary_b);
  if (!a.contains("reliability") || !b.contains("reliability"))
    throw ConfigError("compare: both summaries need a reliability section");
  const Json& rows_a = a.at("reliability").at("rows");
  const Json& rows_b = b.at("reliability").at("rows");
  if (rows_a.size() != rows_b.size()) throw ConfigError("compare: threshold counts differ");
  for (std::size_t k = 0; k < rows_a.size(); ++k)
    if (rows_a[k].at("threshold") != rows_b[k].at("threshold"))
      throw ConfigError("compare: thresholds differ between runs");

  fs::create_directories(output_dir);
  std::ofstream md((fs::path(output_dir) / "compare.md").string(), std::ios::binary);
  std::ofstream csv((fs::path(output_dir) / "compare.csv").string(), std::ios::binary);
  if (!md || !csv) throw std::runtime_error("compare: cannot open output files");

  md << "# Run comparison\n\n";
  md << "- A: " << summary_a << "\n- B: " << summary_b << "\n\n";
  md << "## Failure probabilities\n\n";
  md << "| threshold | ref A | LRA A | PCE A | ref B | LRA B | PCE B |\n";
  md << "|---|---|---|---|---|---|---|\n";
  csv << "threshold,pf_ref_a,pf_lra_a,pf_pce_a,pf_ref_b,pf_lra_b,pf_pce_b,"
      << "beta_ref_a,beta_lra_a,beta_pce_a,beta_ref_b,beta_lra_b,beta_pce_b,"
      << "beta_ratio_lra_ab,beta_ratio_pce_ab,beta_lra_over_ref_a,beta_pce_over_ref_a,"
      << "beta_lra_over_ref_b,beta_pce_over_ref_b\r\n";

  auto cell = [](const Json& row, const char* key) -> Json {
    return row.contains(key) ? row.at(key) : Json();
  };

  std::ostringstream beta_md;
  beta_md << "## Reliability indices\n\n";
  beta_md << "| threshold | ref A | LRA A | PCE A | ref B | LRA B | PCE B | LRA A/B | PCE A/B |\n";
  beta_md << "|---|---|---|---|---|---|---|---|---|\n";

  for (std::size_t k = 0; k < rows_a.size(); ++k) {
    const Json& ra = rows_a[k];
    const Json& rb = rows_b[k];
    const double t = ra.at("threshold").get<double>();
    const Json ref_a = cell(ra, "reference"), lra_a = cell(ra, "lra"), pce_a = cell(ra, "pce");
    const Json ref_b = cell(rb, "reference"), lra_b = cell(rb, "lra"), pce_b = cell(rb, "pce");

    md << "| " << t << " | " << fmt_pf(ref_a) << " | " << fmt_pf(lra_a) << " | " << fmt_pf(pce_a)
       << " | " << fmt_pf(ref_b) << " | " << fmt_pf(lra_b) << " | " << fmt_pf(pce_b) << " |\n";

    beta_md << "| " << t << " | " << fmt_beta(ref_a) << " | " << fmt_beta(lra_a) << " | "
            << fmt_beta(pce_a) << " | " << fmt_beta(ref_b) << " | " << fmt_beta(lra_b) << " | "
            << fmt_beta(pce_b) << " | " << fmt_ratio(beta_or_nan(lra_a), beta_or_nan(lra_b))
            << " | " << fmt_ratio(beta_or_nan(pce_a), beta_or_nan(pce_b)) << " |\n";

    auto num = [](const Json& c, const char* key) -> std::string {
      if (c.is_null() || !c.is_object() || c.contains("failed") || !c.contains(key) ||
          c.at(key).is_null())
        return "";
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", c.at(key).get<double>());
      return buf;
    };
    csv << t << "," << num(ref_a, "pf") << "," << num(lra_a, "pf") << "," << num(pce_a, "pf") << ","
        << num(ref_b, "pf") << "," << num(lra_b, "pf") << "," << num(pce_b, "pf") << ","
        << num(ref_a, "beta") << "," << num(lra_a, "beta") << "," << num(pce_a, "beta") << ","
        << num(ref_b, "beta") << "," << num(lra_b, "beta") << "," << num(pce_b, "beta") << ","
        << fmt_ratio(beta_or_nan(lra_a), beta_or_nan(lra_b)) << ","
        << fmt_ratio(beta_or_nan(pce_a), beta_or_nan(pce_b)) << ","
        << fmt_ratio(beta_or_nan(lra_a), beta_or_nan(ref_a)) << ","
        << fmt_ratio(beta_or_nan(pce_a), beta_or_nan(ref_a)) << ","
        << fmt_ratio(beta_or_nan(lra_b), beta_or_nan(ref_b)) << ","
        << fmt_ratio(beta_or_nan(pce_b), beta_or_nan(ref_b)) << "\r\n";
  }

  md << "\n" << beta_md.str();
  if (!md || !csv) throw std::runtime_error("compare: write failed");
}

}  // namespace uq
