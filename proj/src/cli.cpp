#include "cohere/cli.hpp"

#include <cmath>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cohere/decide.hpp"
#include "cohere/io.hpp"
#include "cohere/matcore.hpp"
#include "cohere/measures.hpp"
#include "cohere/roof.hpp"
#include "cohere/sampling.hpp"

namespace cohere {

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitStrict = 3;
constexpr int kExitBoundary = 4;

struct CommandContext {
  RunConfig config;
  std::string command;
  std::string input_path;
  std::string input_digest;
  std::ostream* out;
};

double config_tol(const RunConfig& c, const std::string& name, double fallback) {
  const auto it = c.tolerances.find(name);
  return it == c.tolerances.end() ? fallback : it->second;
}

json config_json(const RunConfig& c) {
  json tols = json::object();
  tols["herm"] = config_tol(c, "herm", tol::hermitian);
  tols["trace"] = config_tol(c, "trace", tol::trace);
  tols["psd"] = config_tol(c, "psd", tol::psd);
  tols["roof"] = config_tol(c, "roof", 1e-10);
  return json{{"seed", c.seed},
              {"restarts", c.restarts},
              {"ensemble_size", c.ensemble_size},
              {"format", c.format},
              {"tolerances", std::move(tols)}};
}

json envelope(const CommandContext& ctx, json result) {
  json input = nullptr;
  if (!ctx.input_path.empty()) {
    input = json{{"path", ctx.input_path}, {"digest", ctx.input_digest}};
  }
  return json{{"command", ctx.command},
              {"input", std::move(input)},
              {"config", config_json(ctx.config)},
              {"result", std::move(result)}};
}

void emit(const CommandContext& ctx, const std::string& payload) {
  if (ctx.config.output.empty()) {
    *ctx.out << payload;
    if (payload.empty() || payload.back() != '\n') *ctx.out << '\n';
  } else {
    write_file(ctx.config.output, payload);
  }
}

json complex_json(const Complex& v) { return json::array({v.real(), v.imag()}); }

json ensemble_json(const PureEnsemble& e) {
  json weights = json::array();
  json states = json::array();
  for (int l = 0; l < e.size(); ++l) {
    weights.push_back(e.weights(l));
    json state = json::array();
    for (Eigen::Index j = 0; j < e.dim(); ++j) state.push_back(complex_json(e.states(j, l)));
    states.push_back(std::move(state));
  }
  return json{{"weights", std::move(weights)}, {"states", std::move(states)}};
}

DensityMatrix load_density(CommandContext& ctx) {
  const std::string bytes = read_file(ctx.input_path);
  ctx.input_digest = fnv1a_digest(bytes);
  const MatrixFile file = parse_matrix_json(bytes);
  Matrix m = file.entries;
  if (ctx.config.rescale_trace) {
    const double tr = m.trace().real();
    if (tr <= 0.0) {
      throw ParseError("parse error: trace " + std::to_string(tr) + " cannot be rescaled");
    }
    m /= tr;
  }
  ValidationTolerances tols;
  tols.hermitian = config_tol(ctx.config, "herm", tol::hermitian);
  tols.trace = config_tol(ctx.config, "trace", tol::trace);
  tols.psd = config_tol(ctx.config, "psd", tol::psd);
  try {
    return DensityMatrix(m, tols);
  } catch (const std::invalid_argument& ex) {
    throw ParseError(std::string("parse error: ") + ex.what());
  }
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  return line + "\n";
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string num6(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

int cmd_measure(CommandContext& ctx) {
  const DensityMatrix rho = load_density(ctx);
  const double l1 = c_l1(rho);
  const double rel = c_r(rho);
  const Spectrum s = eigh(rho.mat());
  if (ctx.config.format == "json") {
    json eigenvalues = json::array();
    for (Eigen::Index j = 0; j < s.eigenvalues.size(); ++j) {
      eigenvalues.push_back(s.eigenvalues(j));
    }
    emit(ctx, envelope(ctx, json{{"dim", static_cast<int>(rho.dim())},
                                 {"c_l1", l1},
                                 {"c_r", rel},
                                 {"eigenvalues", std::move(eigenvalues)}})
                  .dump(2));
  } else if (ctx.config.format == "csv") {
    std::string payload = csv_line({"dim", "c_l1", "c_r"});
    payload += csv_line({std::to_string(rho.dim()), num(l1), num(rel)});
    emit(ctx, payload);
  } else {
    std::ostringstream os;
    os << "dim          " << rho.dim() << "\n";
    os << "c_l1         " << num(l1) << "\n";
    os << "c_r          " << num(rel) << "\n";
    os << "eigenvalues ";
    for (Eigen::Index j = 0; j < s.eigenvalues.size(); ++j) os << ' ' << num6(s.eigenvalues(j));
    os << "\n";
    emit(ctx, os.str());
  }
  return kExitOk;
}

json decision_json(const DecisionReport& rep, double l1) {
  json result{{"verdict", verdict_name(rep.verdict)},
              {"situation", situation_label(rep.situation, rep.verdict)},
              {"c_l1", l1}};
  if (rep.witness) result["witness"] = ensemble_json(*rep.witness);
  if (rep.certificate) {
    result["certificate"] = json{{"x1_star", rep.certificate->x1_star},
                                 {"max_det", rep.certificate->max_det},
                                 {"failing_minor", rep.certificate->failing_minor}};
  }
  result["trace"] = rep.trace;
  return result;
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::Equal: return kExitOk;
    case Verdict::Strict: return kExitStrict;
    case Verdict::Boundary: return kExitBoundary;
  }
  return kExitOk;
}

int cmd_decide(CommandContext& ctx) {
  const DensityMatrix rho = load_density(ctx);
  const double l1 = c_l1(rho);
  DecisionReport rep;
  if (rho.dim() > 3) {
    throw ParseError("parse error: decide supports dimension up to 3; "
                     "use the roof command for upper bounds in higher dimension");
  }
  if (rho.dim() == 3) {
    rep = decide_equality_d3(rho);
  } else {
    // One- and two-dimensional states always achieve equality.
    rep.verdict = Verdict::Equal;
    rep.situation = Situation::ZeroDiagonal;
    PureEnsemble witness;
    if (rho.dim() == 1) {
      witness.weights = RealVector::Ones(1);
      witness.states = Matrix::Ones(1, 1);
    } else {
      witness = qubit_decomposition(bloch_from_density(rho.mat()));
    }
    rep.witness = std::move(witness);
    rep.trace = {"dimension below 3; qubit construction applies directly"};
  }

  const std::string situation =
      rho.dim() == 3 ? situation_label(rep.situation, rep.verdict) : "d" + std::to_string(rho.dim());
  if (ctx.config.format == "json") {
    json result = decision_json(rep, l1);
    result["situation"] = situation;
    emit(ctx, envelope(ctx, std::move(result)).dump(2));
  } else if (ctx.config.format == "csv") {
    std::string payload = csv_line({"verdict", "situation", "c_l1", "x1_star", "max_det"});
    payload += csv_line({verdict_name(rep.verdict), situation, num(l1),
                         rep.certificate ? num(rep.certificate->x1_star) : "",
                         rep.certificate ? num(rep.certificate->max_det) : ""});
    emit(ctx, payload);
  } else {
    std::ostringstream os;
    os << "verdict    " << verdict_name(rep.verdict) << "\n";
    os << "situation  " << situation << "\n";
    os << "c_l1       " << num(l1) << "\n";
    if (rep.certificate) {
      os << "x1_star    " << num(rep.certificate->x1_star) << "\n";
      os << "max_det    " << num(rep.certificate->max_det) << "\n";
    }
    if (rep.witness) {
      os << "witness    " << rep.witness->size() << " pure states\n";
      for (int l = 0; l < rep.witness->size(); ++l) {
        os << "  p=" << num6(rep.witness->weights(l)) << "  [";
        for (Eigen::Index j = 0; j < rep.witness->dim(); ++j) {
          const Complex v = rep.witness->states(j, l);
          os << (j ? ", " : "") << num6(v.real()) << (v.imag() < 0 ? "-" : "+")
             << num6(std::abs(v.imag())) << "i";
        }
        os << "]\n";
      }
    }
    for (const std::string& step : rep.trace) os << "trace      " << step << "\n";
    emit(ctx, os.str());
  }
  return verdict_exit(rep.verdict);
}

int cmd_roof(CommandContext& ctx, const std::string& functional_name) {
  const DensityMatrix rho = load_density(ctx);
  PureStateFunctional f;
  double measure = 0.0;
  if (functional_name == "l1") {
    f = pure_l1_functional();
    measure = c_l1(rho);
  } else if (functional_name == "rel-entropy") {
    f = pure_relent_functional();
    measure = c_r(rho);
  } else {
    throw ParseError("parse error: unknown functional " + functional_name);
  }
  RoofOptions opts;
  opts.ensemble_size = ctx.config.ensemble_size;
  opts.restarts = ctx.config.restarts;
  opts.seed = ctx.config.seed;
  opts.tol = config_tol(ctx.config, "roof", 1e-10);
  const RoofResult res = roof_upper(rho, f, opts);
  const double gap = res.value - measure;

  if (ctx.config.format == "json") {
    json converged = json::array();
    for (const char c : res.converged) converged.push_back(c != 0);
    emit(ctx, envelope(ctx, json{{"functional", f.name},
                                 {"value", res.value},
                                 {"measure", measure},
                                 {"gap", gap},
                                 {"restarts_used", res.restarts_used},
                                 {"converged", std::move(converged)},
                                 {"ensemble", ensemble_json(res.ensemble)}})
                  .dump(2));
  } else if (ctx.config.format == "csv") {
    std::string payload = csv_line({"functional", "value", "measure", "gap"});
    payload += csv_line({f.name, num(res.value), num(measure), num(gap)});
    emit(ctx, payload);
  } else {
    std::ostringstream os;
    os << "functional  " << f.name << "\n";
    os << "value       " << num(res.value) << "\n";
    os << "measure     " << num(measure) << "\n";
    os << "gap         " << num(gap) << "\n";
    os << "ensemble    " << res.ensemble.size() << " pure states, restarts "
       << res.restarts_used << "\n";
    emit(ctx, os.str());
  }
  return kExitOk;
}

int cmd_figure1(CommandContext& ctx, int grid) {
  if (grid < 2) throw ParseError("parse error: grid must be at least 2");
  std::vector<std::array<double, 5>> rows;
  for (int i = 0; i < grid; ++i) {
    const double r = static_cast<double>(i) / (grid - 1);
    for (int j = 0; j <= i; ++j) {
      const double z = static_cast<double>(j) / (grid - 1);
      const double x = std::sqrt(std::max(r * r - z * z, 0.0));
      const BlochVector b{x, 0.0, z};
      const double cr = qubit_cr(b);
      const double roof = qubit_cr_roof(b);
      rows.push_back({r, z, cr, roof, roof - cr});
    }
  }
  if (ctx.config.format == "json") {
    json out_rows = json::array();
    for (const auto& row : rows) out_rows.push_back({row[0], row[1], row[2], row[3], row[4]});
    emit(ctx, envelope(ctx, json{{"columns", {"r", "z", "cr", "cr_roof", "diff"}},
                                 {"rows", std::move(out_rows)}})
                  .dump(2));
  } else {
    std::string payload = csv_line({"r", "z", "cr", "cr_roof", "diff"});
    for (const auto& row : rows) {
      payload += csv_line({num(row[0]), num(row[1]), num(row[2]), num(row[3]), num(row[4])});
    }
    emit(ctx, payload);
  }
  return kExitOk;
}

int cmd_sample(CommandContext& ctx, int count, int dim) {
  if (dim != 3) {
    throw ParseError("parse error: sample decides 3-dimensional states only");
  }
  if (count < 0) throw ParseError("parse error: count must be nonnegative");
  Rng rng(ctx.config.seed);
  std::vector<std::array<std::string, 5>> rows;
  std::map<std::string, int> tally{{"EQUAL", 0}, {"STRICT", 0}, {"BOUNDARY", 0}};
  for (int i = 0; i < count; ++i) {
    const DensityMatrix rho = hs_random_density(dim, rng);
    const DecisionReport rep = decide_equality_d3(rho);
    tally[verdict_name(rep.verdict)] += 1;
    // Spot-check the reported evidence on every hundredth state.
    if (i % 100 == 0) {
      if (rep.verdict == Verdict::Equal) {
        if (!rep.witness || !theorem1_check(rho, *rep.witness)) {
          throw std::runtime_error("sample: witness failed validation at row " +
                                   std::to_string(i));
        }
      } else if (!rep.certificate) {
        throw std::runtime_error("sample: certificate missing at row " + std::to_string(i));
      }
    }
    rows.push_back({std::to_string(i), situation_label(rep.situation, rep.verdict),
                    verdict_name(rep.verdict), num(c_l1(rho)),
                    rep.certificate ? num(rep.certificate->max_det) : ""});
  }
  if (ctx.config.format == "json") {
    json out_rows = json::array();
    for (const auto& row : rows) {
      out_rows.push_back({std::stoi(row[0]), row[1], row[2], std::stod(row[3]),
                          row[4].empty() ? json(nullptr) : json(std::stod(row[4]))});
    }
    emit(ctx, envelope(ctx, json{{"columns", {"index", "situation", "verdict", "c_l1", "max_det"}},
                                 {"rows", std::move(out_rows)},
                                 {"tally", tally}})
                  .dump(2));
  } else {
    std::string payload = csv_line({"index", "situation", "verdict", "c_l1", "max_det"});
    for (const auto& row : rows) {
      payload += csv_line({row[0], row[1], row[2], row[3], row[4]});
    }
    payload += "# tally EQUAL=" + std::to_string(tally["EQUAL"]) +
               " STRICT=" + std::to_string(tally["STRICT"]) +
               " BOUNDARY=" + std::to_string(tally["BOUNDARY"]) + "\n";
    emit(ctx, payload);
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"coherence measures, convex-roof bounds, and the d=3 equality decision"};
  app.require_subcommand(1);
  app.fallthrough();

  CommandContext ctx;
  ctx.out = &out;

  app.add_option("--seed", ctx.config.seed, "random seed for roof restarts and sampling");
  app.add_option("--restarts", ctx.config.restarts, "roof optimizer restarts")
      ->check(CLI::PositiveNumber);
  app.add_option("--ensemble-size", ctx.config.ensemble_size,
                 "roof ensemble size (0 means dim^2)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--format", ctx.config.format, "output format")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--output", ctx.config.output, "write the payload to a file");
  app.add_flag("--rescale-trace", ctx.config.rescale_trace,
               "rescale the input so its trace is exactly 1");
  for (const std::string name : {"herm", "trace", "psd", "roof"}) {
    app.add_option_function<double>(
           "--tol." + name,
           [&ctx, name](double v) {
             if (v <= 0.0) throw CLI::ValidationError("--tol." + name, "must be positive");
             ctx.config.tolerances[name] = v;
           },
           "override the " + name + " tolerance");
  }

  std::string functional = "l1";
  int grid = 101;
  int count = 100;
  int dim = 3;

  CLI::App* measure = app.add_subcommand("measure", "l1 and relative-entropy coherence");
  measure->add_option("file", ctx.input_path, "matrix JSON file")->required();

  CLI::App* decide = app.add_subcommand("decide", "does the l1 roof meet the l1 coherence");
  decide->add_option("file", ctx.input_path, "matrix JSON file")->required();

  CLI::App* roof = app.add_subcommand("roof", "convex-roof upper bound");
  roof->add_option("file", ctx.input_path, "matrix JSON file")->required();
  roof->add_option("--functional", functional, "pure-state functional")
      ->check(CLI::IsMember({"l1", "rel-entropy"}));

  CLI::App* figure1 = app.add_subcommand("figure1", "qubit coherence and roof over the Bloch ball");
  figure1->add_option("--grid", grid, "points per axis");

  CLI::App* sample = app.add_subcommand("sample", "decide random 3-dimensional states");
  sample->add_option("--count", count, "number of states");
  sample->add_option("--dim", dim, "state dimension");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp& ex) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& ex) {
    err << "parse error: " << ex.what() << "\n";
    return kExitUsage;
  }

  try {
    if (measure->parsed()) {
      ctx.command = "measure";
      return cmd_measure(ctx);
    }
    if (decide->parsed()) {
      ctx.command = "decide";
      return cmd_decide(ctx);
    }
    if (roof->parsed()) {
      ctx.command = "roof";
      return cmd_roof(ctx, functional);
    }
    if (figure1->parsed()) {
      ctx.command = "figure1";
      return cmd_figure1(ctx, grid);
    }
    ctx.command = "sample";
    return cmd_sample(ctx, count, dim);
  } catch (const ParseError& ex) {
    err << ex.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& ex) {
    err << "parse error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace cohere
