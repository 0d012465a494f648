#include "ergolim/experiment.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include "ergolim/errors.hpp"
#include "ergolim/gram.hpp"
#include "ergolim/iteration.hpp"
#include "ergolim/spectral.hpp"

namespace ergolim {

namespace {

const std::vector<std::string> kAnalysisOrder = {
    "gram", "project", "iterate", "cesaro", "oracle", "cyclic", "diagnose"};

Json complex_to_json(Complex z) {
  if (std::abs(z.imag()) <= tol::real_report) return Json(z.real());
  return Json::array({z.real(), z.imag()});
}

Json matrix_to_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json entries_to_json(const std::vector<std::pair<int, double>>& entries) {
  Json out = Json::array();
  for (const auto& [m, dev] : entries) out.push_back(Json::array({m, dev}));
  return out;
}

std::string iso_timestamp() {
  std::time_t t;
  if (const char* sde = std::getenv("SOURCE_DATE_EPOCH")) {
    t = static_cast<std::time_t>(std::strtoll(sde, nullptr, 10));
  } else {
    t = std::time(nullptr);
  }
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

GallerySpec::Kind kind_from_string(const std::string& s) {
  for (auto kind : {GallerySpec::Kind::intro_hat, GallerySpec::Kind::bernstein,
                    GallerySpec::Kind::schoenberg, GallerySpec::Kind::stochastic_random,
                    GallerySpec::Kind::periodic_permutation, GallerySpec::Kind::mixed_chain}) {
    if (s == to_string(kind)) return kind;
  }
  throw InvalidInput("unknown gallery kind: " + s);
}

GallerySpec parse_gallery(const Json& j, bool& seed_explicit) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw InvalidInput("gallery operator needs a string field 'kind'");
  }
  GallerySpec spec;
  spec.kind = kind_from_string(j["kind"].get<std::string>());
  if (j.contains("n")) spec.n = j["n"].get<int>();
  if (j.contains("degree")) spec.degree = j["degree"].get<int>();
  if (j.contains("segments")) spec.segments = j["segments"].get<int>();
  if (j.contains("alpha")) spec.alpha = j["alpha"].get<double>();
  if (j.contains("grid_points")) spec.grid_points = j["grid_points"].get<int>();
  seed_explicit = j.contains("seed");
  if (seed_explicit) spec.seed = j["seed"].get<std::uint64_t>();

  switch (spec.kind) {
    case GallerySpec::Kind::bernstein:
    case GallerySpec::Kind::stochastic_random:
    case GallerySpec::Kind::periodic_permutation:
      if (spec.n <= 0) throw InvalidInput("this gallery kind needs a positive 'n'");
      break;
    case GallerySpec::Kind::schoenberg:
      if (spec.degree <= 0 || spec.segments <= 0) {
        throw InvalidInput("schoenberg needs positive 'degree' and 'segments'");
      }
      break;
    default:
      break;
  }
  return spec;
}

Mat parse_inline(const Json& rows) {
  if (!rows.is_array() || rows.empty()) {
    throw InvalidInput("inline operator must be a nonempty array of rows");
  }
  const size_t n = rows.size();
  Mat m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array() || rows[i].size() != n) {
      throw InvalidInput("inline operator must be a square matrix");
    }
    for (size_t j = 0; j < n; ++j) {
      if (!rows[i][j].is_number()) {
        throw InvalidInput("inline matrix entries must be numbers");
      }
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j].get<double>();
    }
  }
  return m;
}

std::optional<std::uint64_t> env_seed() {
  if (const char* raw = std::getenv("ERGOLIM_SEED")) {
    char* end = nullptr;
    const std::uint64_t v = std::strtoull(raw, &end, 10);
    if (end && *end == '\0') return v;
    throw InvalidInput("ERGOLIM_SEED is not a valid unsigned integer");
  }
  return std::nullopt;
}

struct Pipeline {
  explicit Pipeline(OperatorHandle h) : op(std::move(h)) {}

  OperatorHandle op;
  std::optional<EigenSystemInput> sys;
  std::optional<GramSystem> gram;
  std::optional<ProjectionOperator> projection;
  std::optional<OperatorHandle> known_limit;

  const EigenSystemInput& ensure_system() {
    if (!sys) sys = fixed_point_spaces(op, Complex{1.0, 0.0});
    return *sys;
  }
  const GramSystem& ensure_gram() {
    if (!gram) gram = build_gram(ensure_system());
    return *gram;
  }
  const ProjectionOperator& ensure_projection() {
    if (!projection) projection = build_projection(ensure_system(), ensure_gram());
    return *projection;
  }
};

struct AnalysisOutcome {
  Json section;
  bool pass = false;
};

AnalysisOutcome run_gram(Pipeline& p) {
  const GramSystem& g = p.ensure_gram();
  AnalysisOutcome out;
  out.section["G"] = matrix_to_json(g.G);
  out.section["column_rank"] = g.column_rank;
  if (std::isfinite(g.condition_estimate)) {
    out.section["condition_estimate"] = g.condition_estimate;
  }
  switch (g.mode) {
    case GramSystem::Mode::inverse: out.section["mode"] = "inverse"; break;
    case GramSystem::Mode::moore_penrose: out.section["mode"] = "moore-penrose"; break;
    case GramSystem::Mode::singular: out.section["mode"] = "singular"; break;
  }
  if (g.ill_conditioned) out.section["warning"] = "condition estimate beyond 1e12";
  if (g.mode != GramSystem::Mode::singular) {
    out.section["A"] = matrix_to_json(g.A);
    out.section["solve_residual"] = g.solve_residual;
  }
  out.pass = g.mode != GramSystem::Mode::singular;
  return out;
}

AnalysisOutcome run_project(Pipeline& p) {
  AnalysisOutcome out;
  if (p.ensure_gram().mode == GramSystem::Mode::singular) {
    out.section["error"] = "gram system is singular";
    out.pass = false;
    return out;
  }
  const ProjectionOperator& proj = p.ensure_projection();
  out.section["idempotency_residual"] = proj.idempotency_residual;
  out.section["basis_residual"] = proj.basis_residual;
  out.section["coefficient_bound"] = proj.coefficient_bound;
  out.section["operator_norm"] = operator_norm(proj.realized);
  out.section["realized_rank"] = proj.realized_rank;
  out.pass = proj.idempotency_residual <= 1e-10 && proj.basis_residual <= 1e-10 &&
             proj.realized_rank == static_cast<int>(proj.basis.size());
  return out;
}

Json convergence_to_json(const ConvergenceReport& report) {
  Json section;
  section["entries"] = entries_to_json(report.entries);
  section["fitted_rate"] = report.fitted_rate;
  section["fitted_C"] = report.fitted_C;
  section["gamma_spectral"] = report.gamma_spectral;
  section["verdict"] = to_string(report.verdict);
  section["stop_reason"] = to_string(report.stop_reason);
  return section;
}

AnalysisOutcome run_iterate(Pipeline& p, const ExperimentConfig& config) {
  AnalysisOutcome out;
  if (p.ensure_gram().mode == GramSystem::Mode::singular) {
    out.section["error"] = "gram system is singular";
    return out;
  }
  const ConvergenceReport report = iterate_deviation(p.op, p.ensure_projection(),
                                                     config.max_iterations,
                                                     config.tolerance);
  out.section = convergence_to_json(report);
  out.pass = report.verdict == Verdict::converged;
  return out;
}

AnalysisOutcome run_cesaro(Pipeline& p, const ExperimentConfig& config) {
  AnalysisOutcome out;
  if (p.ensure_gram().mode == GramSystem::Mode::singular) {
    out.section["error"] = "gram system is singular";
    return out;
  }
  const CesaroReport report = cesaro_deviation(p.op, p.ensure_projection(),
                                               config.max_iterations,
                                               config.cesaro_tolerance);
  out.section["entries"] = entries_to_json(report.entries);
  out.section["verdict"] = to_string(report.verdict);
  out.section["stop_reason"] = to_string(report.stop_reason);
  out.pass = report.verdict == Verdict::converged;
  return out;
}

AnalysisOutcome run_oracle(Pipeline& p) {
  if (!p.op.is_dense()) {
    throw InvalidInput("oracle comparison requires a dense operator");
  }
  AnalysisOutcome out;
  if (p.ensure_gram().mode == GramSystem::Mode::singular) {
    out.section["error"] = "gram system is singular";
    return out;
  }
  const DenseOperator& op = p.op.dense();
  const SpectrumReport report = spectrum(op);
  double gap = 0.5;
  for (const Complex& z : report.eigenvalues) {
    const double d = std::abs(z - Complex{1.0, 0.0});
    if (d > 1e-8) gap = std::min(gap, d);
  }
  const double radius = std::max(1e-3, 0.5 * gap);

  try {
    const ContourProjection contour = contour_projection(op, Complex{1.0, 0.0}, radius, 96);
    const double diff = operator_norm(
        subtract(OperatorHandle(contour.P), p.ensure_projection().realized));
    out.section["radius"] = radius;
    out.section["quadrature_points"] = contour.quadrature_points;
    out.section["idempotency_residual"] = contour.idempotency_residual;
    out.section["gram_vs_contour"] = diff;
    out.pass = diff <= 1e-8;
  } catch (const ContourTooTight& e) {
    out.section["error"] = e.what();
  } catch (const ContourFailed& e) {
    out.section["error"] = e.what();
  }
  return out;
}

AnalysisOutcome run_cyclic(Pipeline& p, const ExperimentConfig& config) {
  if (!p.op.is_dense()) {
    throw InvalidInput("cyclic analysis requires a dense operator");
  }
  AnalysisOutcome out;
  try {
    const CyclicIterateResult result =
        cyclic_iterate(p.op.dense(), config.tolerance, config.max_iterations);
    out.section["k_used"] = result.k_used;
    out.section["report"] = convergence_to_json(result.report);
    if (result.plain_oscillates) {
      out.section["plain_oscillates"] = *result.plain_oscillates;
    }
    out.pass = result.report.verdict == Verdict::converged &&
               result.plain_oscillates.value_or(true);
  } catch (const NotCyclic& e) {
    out.section["error"] = e.what();
  }
  return out;
}

AnalysisOutcome run_diagnose(Pipeline& p, const ExperimentConfig& config) {
  AnalysisOutcome out;
  const bool dense = p.op.is_dense();
  const Mat& matrix =
      dense ? p.op.dense().matrix() : p.op.finite_rank().node_matrix();
  const DenseOperator probe(matrix);

  const SpectrumReport report = spectrum(probe);
  Json spec_section;
  Json values = Json::array();
  for (const Complex& z : report.eigenvalues) values.push_back(complex_to_json(z));
  spec_section["eigenvalues"] = std::move(values);
  spec_section["spectral_radius"] = report.spectral_radius;
  Json peripheral = Json::array();
  for (const Complex& z : report.peripheral) peripheral.push_back(complex_to_json(z));
  spec_section["peripheral"] = std::move(peripheral);
  spec_section["peripheral_are_roots_of_unity"] = report.peripheral_are_roots_of_unity;
  if (report.cyclic_order_l) spec_section["cyclic_order_l"] = *report.cyclic_order_l;
  out.section[dense ? "spectrum" : "node_matrix_spectrum"] = std::move(spec_section);

  const AscentDiagnostic ascent = ascent_diagnostic(OperatorHandle(probe), Complex{1.0, 0.0});
  out.section["ascent_at_1"] = Json{{"dim_ker_1", ascent.dim_ker_1},
                                    {"dim_ker_2", ascent.dim_ker_2},
                                    {"ascent_le_one", ascent.ascent_le_one}};

  const EssentialRadiusNote note = essential_radius_note(p.op);
  out.section["essential_radius_note"] =
      Json{{"rank", note.rank}, {"essential_radius", note.essential_radius}};

  out.pass = true;
  if (p.op.markov()) {
    const MarkovChecks checks = verify_markov(p.op, /*expect_linear_reproduction=*/!dense);
    Json mk;
    mk["positive"] = checks.positive;
    mk["partition_of_unity"] = checks.partition_of_unity;
    if (checks.reproduces_linear) mk["reproduces_linear"] = *checks.reproduces_linear;
    if (checks.endpoint_interpolation) {
      mk["endpoint_interpolation"] = *checks.endpoint_interpolation;
    }
    mk["passed"] = checks.passed();
    out.section["markov_checks"] = std::move(mk);
    out.pass = checks.passed();
  }

  if (operator_norm(p.op) <= 1.0 + 1e-12) {
    const DifferenceDecay decay =
        difference_decay(p.op, std::min(config.max_iterations, 50));
    out.section["difference_decay"] = Json{
        {"entries", entries_to_json(decay.entries)},
        {"tail_monotone", decay.tail_monotone}};
  }
  return out;
}

Json echo_config(const ExperimentConfig& config, std::uint64_t resolved_seed,
                 const std::optional<GallerySpec>& effective_gallery) {
  Json echo;
  if (effective_gallery) {
    const GallerySpec& spec = *effective_gallery;
    Json g;
    g["kind"] = to_string(spec.kind);
    if (spec.n > 0) g["n"] = spec.n;
    if (spec.degree > 0) g["degree"] = spec.degree;
    if (spec.segments > 0) g["segments"] = spec.segments;
    if (spec.kind == GallerySpec::Kind::stochastic_random) g["seed"] = spec.seed;
    if (spec.kind == GallerySpec::Kind::mixed_chain) g["alpha"] = spec.alpha;
    if (spec.grid_points > 0) g["grid_points"] = spec.grid_points;
    echo["operator"] = Json{{"gallery", std::move(g)}};
  } else {
    echo["operator"] = Json{{"inline", matrix_to_json(*config.inline_matrix)},
                            {"markov", config.inline_markov}};
  }
  Json analyses = Json::array();
  for (const std::string& a : config.analyses) analyses.push_back(a);
  echo["analysis"] = std::move(analyses);
  echo["tolerance"] = config.tolerance;
  echo["max_iterations"] = config.max_iterations;
  echo["output_path"] = config.output_path;
  echo["output_format"] = config.format == ExperimentConfig::Format::csv ? "csv" : "json";
  echo["seed"] = resolved_seed;
  return echo;
}

}  // namespace

const std::vector<std::string>& ExperimentConfig::known_analyses() {
  return kAnalysisOrder;
}

ExperimentConfig parse_config(const Json& j) {
  if (!j.is_object()) throw InvalidInput("config must be a JSON object");
  if (j.contains("schema_version") && j["schema_version"].get<int>() != kSchemaVersion) {
    throw InvalidInput("unsupported schema_version");
  }
  if (!j.contains("operator") || !j["operator"].is_object()) {
    throw InvalidInput("config needs an 'operator' object");
  }

  ExperimentConfig config;
  const Json& op = j["operator"];
  const bool has_gallery = op.contains("gallery");
  const bool has_inline = op.contains("inline");
  if (has_gallery == has_inline) {
    throw InvalidInput("operator must contain exactly one of 'gallery' or 'inline'");
  }
  if (has_gallery) {
    config.gallery = parse_gallery(op["gallery"], config.gallery_seed_explicit);
  } else {
    config.inline_matrix = parse_inline(op["inline"]);
    if (op.contains("markov")) config.inline_markov = op["markov"].get<bool>();
  }

  if (j.contains("analysis")) {
    if (!j["analysis"].is_array()) throw InvalidInput("'analysis' must be an array");
    std::vector<std::string> requested;
    for (const auto& item : j["analysis"]) {
      if (!item.is_string()) throw InvalidInput("analysis names must be strings");
      requested.push_back(item.get<std::string>());
    }
    for (const std::string& name : requested) {
      if (std::find(kAnalysisOrder.begin(), kAnalysisOrder.end(), name) ==
          kAnalysisOrder.end()) {
        throw InvalidInput("unknown analysis: " + name);
      }
    }
    // Dependency order: gram before project before iterate, etc.
    for (const std::string& name : kAnalysisOrder) {
      if (std::find(requested.begin(), requested.end(), name) != requested.end()) {
        config.analyses.push_back(name);
      }
    }
  }

  if (j.contains("tolerance")) config.tolerance = j["tolerance"].get<double>();
  if (!(config.tolerance > 0.0)) throw InvalidInput("tolerance must be positive");
  if (j.contains("cesaro_tolerance")) {
    config.cesaro_tolerance = j["cesaro_tolerance"].get<double>();
  }
  if (!(config.cesaro_tolerance > 0.0)) {
    throw InvalidInput("cesaro_tolerance must be positive");
  }
  if (j.contains("max_iterations")) config.max_iterations = j["max_iterations"].get<int>();
  if (config.max_iterations < 1) throw InvalidInput("max_iterations must be >= 1");
  if (j.contains("output_path")) config.output_path = j["output_path"].get<std::string>();
  if (j.contains("output_format")) {
    const std::string f = j["output_format"].get<std::string>();
    if (f == "csv") {
      config.format = ExperimentConfig::Format::csv;
    } else if (f == "json") {
      config.format = ExperimentConfig::Format::json;
    } else {
      throw InvalidInput("output_format must be 'csv' or 'json'");
    }
  }
  if (j.contains("seed")) config.seed = j["seed"].get<std::uint64_t>();
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw InvalidInput(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

RunArtifact run(const ExperimentConfig& config) {
  const std::uint64_t resolved_seed =
      config.seed ? *config.seed : env_seed().value_or(12345);

  std::optional<GallerySpec> effective_gallery = config.gallery;
  if (effective_gallery &&
      effective_gallery->kind == GallerySpec::Kind::stochastic_random &&
      !config.gallery_seed_explicit) {
    effective_gallery->seed = resolved_seed;
  }

  std::optional<std::uint64_t> seed_used;
  Pipeline pipeline = [&] {
    if (effective_gallery) {
      GalleryEntry entry = make(*effective_gallery);
      if (effective_gallery->kind == GallerySpec::Kind::stochastic_random) {
        seed_used = entry.seed_used;  // differs if the draw was regenerated
      }
      Pipeline p(entry.op);
      if (entry.known_eigensystem) p.sys = std::move(entry.known_eigensystem);
      if (entry.known_limit) p.known_limit = std::move(entry.known_limit);
      return p;
    }
    return Pipeline(OperatorHandle(DenseOperator(*config.inline_matrix,
                                                 config.inline_markov)));
  }();

  RunArtifact artifact;
  artifact.document["schema_version"] = kSchemaVersion;
  artifact.document["tool_version"] = kToolVersion;
  artifact.document["timestamp"] = iso_timestamp();
  artifact.document["config"] = echo_config(config, resolved_seed, effective_gallery);
  if (seed_used) artifact.document["seed_used"] = *seed_used;

  Json results = Json::object();
  Json verdicts = Json::object();
  bool all_passed = true;
  for (const std::string& name : config.analyses) {
    AnalysisOutcome outcome;
    if (name == "gram") {
      outcome = run_gram(pipeline);
    } else if (name == "project") {
      outcome = run_project(pipeline);
    } else if (name == "iterate") {
      outcome = run_iterate(pipeline, config);
    } else if (name == "cesaro") {
      outcome = run_cesaro(pipeline, config);
    } else if (name == "oracle") {
      outcome = run_oracle(pipeline);
    } else if (name == "cyclic") {
      outcome = run_cyclic(pipeline, config);
    } else if (name == "diagnose") {
      outcome = run_diagnose(pipeline, config);
    }
    results[name] = std::move(outcome.section);
    verdicts[name] = outcome.pass ? "pass" : "fail";
    all_passed = all_passed && outcome.pass;
  }
  artifact.document["results"] = std::move(results);
  artifact.document["verdicts"] = std::move(verdicts);
  artifact.all_passed = all_passed;
  artifact.exit_code = all_passed ? 0 : 2;
  return artifact;
}

std::string format_double(double v) {
  if (!std::isfinite(v)) throw Error("attempted to serialize a non-finite number");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

bool is_scalar_array(const Json& j) {
  for (const auto& item : j) {
    if (item.is_object() || (item.is_array() && !is_scalar_array(item))) return false;
    if (item.is_array()) {
      for (const auto& inner : item) {
        if (inner.is_structured()) return false;
      }
    }
  }
  return true;
}

void write_json(const Json& j, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<size_t>(indent * depth), ' ');
  const std::string pad_in(static_cast<size_t>(indent * (depth + 1)), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        out += Json(it.key()).dump();
        out += ": ";
        write_json(it.value(), out, indent, depth + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      if (is_scalar_array(j)) {
        out += "[";
        bool first = true;
        for (const auto& item : j) {
          if (!first) out += ", ";
          first = false;
          write_json(item, out, indent, depth);
        }
        out += "]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& item : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        write_json(item, out, indent, depth + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    case Json::value_t::number_integer:
      out += std::to_string(j.get<std::int64_t>());
      return;
    case Json::value_t::number_unsigned:
      out += std::to_string(j.get<std::uint64_t>());
      return;
    case Json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      return;
    case Json::value_t::string:
      out += j.dump();
      return;
    default:
      out += "null";
      return;
  }
}

std::string with_extension(const std::string& path, const std::string& ext) {
  if (path.size() >= ext.size() &&
      path.compare(path.size() - ext.size(), ext.size(), ext) == 0) {
    return path;
  }
  return path + ext;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + path);
  out << content;
  if (!out) throw Error("failed writing output file: " + path);
}

}  // namespace

std::string dump_deterministic(const Json& j, int indent) {
  std::string out;
  write_json(j, out, indent, 0);
  out += "\n";
  return out;
}

std::vector<std::string> emit(const RunArtifact& artifact, const ExperimentConfig& config) {
  std::vector<std::string> written;
  if (config.output_path.empty()) return written;

  if (config.format == ExperimentConfig::Format::json) {
    const std::string path = with_extension(config.output_path, ".json");
    write_file(path, dump_deterministic(artifact.document));
    written.push_back(path);
    return written;
  }

  // CSV: the deviations table of the first analysis producing one.
  const Json& results = artifact.document["results"];
  const Json* table = nullptr;
  double fitted_rate = 0.0;
  if (results.contains("iterate") && results["iterate"].contains("entries")) {
    table = &results["iterate"]["entries"];
    fitted_rate = results["iterate"]["fitted_rate"].get<double>();
  } else if (results.contains("cyclic") && results["cyclic"].contains("report")) {
    table = &results["cyclic"]["report"]["entries"];
    fitted_rate = results["cyclic"]["report"]["fitted_rate"].get<double>();
  } else if (results.contains("cesaro") && results["cesaro"].contains("entries")) {
    table = &results["cesaro"]["entries"];
  }
  if (table == nullptr) {
    throw InvalidInput("csv output requested but no analysis produced a deviations table");
  }

  std::ostringstream csv;
  csv << "m,deviation,fitted_rate\n";
  for (const auto& row : *table) {
    csv << row[0].get<std::int64_t>() << "," << format_double(row[1].get<double>()) << ","
        << format_double(fitted_rate) << "\n";
  }
  const std::string path = with_extension(config.output_path, ".csv");
  write_file(path, csv.str());
  written.push_back(path);
  return written;
}

}  // namespace ergolim
