#include "hnpoly/cli_dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "hnpoly/arvol.hpp"
#include "hnpoly/enumeration.hpp"
#include "hnpoly/graded.hpp"
#include "hnpoly/json_io.hpp"
#include "hnpoly/lattice.hpp"

namespace hnpoly::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitTolerance = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

struct GlobalOpts {
  std::uint64_t seed = 0;
  std::uint64_t budget_vectors = 50'000'000;
  double tolerance = 1e-6;
  std::string out_path;
  std::string format;  // "", "json", "csv"
};

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool wants_csv(const GlobalOpts& g) {
  if (g.format == "csv") return true;
  if (g.format == "json") return false;
  return ends_with(g.out_path, ".csv");
}

void emit(const io::json& j, const std::string& csv, const GlobalOpts& g, std::ostream& out) {
  std::string payload;
  if (wants_csv(g)) {
    if (csv.empty())
      throw std::invalid_argument("csv output is not available for this command");
    payload = csv;
  } else {
    payload = j.dump(2) + "\n";
  }
  if (g.out_path.empty())
    out << payload;
  else
    io::write_text_atomic(g.out_path, payload);
}

std::vector<double> parse_double_list(const std::string& s, const char* what) {
  std::vector<double> vals;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string(what) + ": bad number '" + tok + "'");
    }
  }
  if (vals.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
  return vals;
}

std::vector<int> parse_int_list(const std::string& s, const char* what) {
  std::vector<int> vals;
  for (double v : parse_double_list(s, what)) {
    int i = static_cast<int>(std::llround(v));
    if (static_cast<double>(i) != v)
      throw std::invalid_argument(std::string(what) + ": expected integers");
    vals.push_back(i);
  }
  return vals;
}

// ---- manifest runner --------------------------------------------------------

const io::json* resolve_path(const io::json& j, const std::string& dotted) {
  const io::json* cur = &j;
  std::stringstream ss(dotted);
  std::string tok;
  while (std::getline(ss, tok, '.')) {
    if (cur->is_array()) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(tok);
      } catch (const std::exception&) {
        return nullptr;
      }
      if (idx >= cur->size()) return nullptr;
      cur = &(*cur)[idx];
    } else if (cur->is_object()) {
      auto it = cur->find(tok);
      if (it == cur->end()) return nullptr;
      cur = &*it;
    } else {
      return nullptr;
    }
  }
  return cur;
}

int run_manifest(const std::string& path, std::ostream& out, std::ostream& err) {
  io::json manifest = io::load_json(path);
  const io::json* runs = nullptr;
  if (manifest.contains("runs") && manifest["runs"].is_array()) runs = &manifest["runs"];
  if (!runs) throw std::invalid_argument("manifest: expected an object with a 'runs' array");

  bool any_usage = false, any_budget = false, any_tolerance = false;
  std::size_t passed = 0;
  for (const io::json& run : *runs) {
    std::string name = run.value("name", std::string("unnamed"));
    std::string fail_detail;
    int fail_class = kExitOk;
    try {
      if (!run.contains("argv") || !run["argv"].is_array() || run["argv"].empty())
        throw std::invalid_argument("run needs a nonempty 'argv' array");
      std::vector<std::string> argv = run["argv"].get<std::vector<std::string>>();
      if (argv.front() == "run")
        throw std::invalid_argument("manifests may not invoke 'run' recursively");
      std::string out_file = run.value("out", std::string());
      if (!out_file.empty()) {
        argv.push_back("--out");
        argv.push_back(out_file);
      }
      std::ostringstream run_out, run_err;
      int code = dispatch(argv, run_out, run_err);
      if (code == kExitUsage)
        throw std::invalid_argument("command failed: " + run_err.str());
      if (code == kExitBudget) {
        fail_class = kExitBudget;
        fail_detail = "budget exceeded: " + run_err.str();
      } else if (code != kExitOk) {
        fail_class = kExitTolerance;
        fail_detail = "command exited with code " + std::to_string(code);
      } else if (run.contains("expect")) {
        io::json produced = out_file.empty() ? io::json::parse(run_out.str())
                                             : io::load_json(out_file);
        for (const io::json& exp : run["expect"]) {
          std::string where = exp.value("path", std::string());
          const io::json* got = resolve_path(produced, where);
          if (!got) throw std::invalid_argument("no value at path '" + where + "'");
          const io::json& want = exp.at("value");
          double tol = exp.value("tolerance", 0.0);
          bool ok;
          std::ostringstream detail;
          if (got->is_number() && want.is_number()) {
            double g = got->get<double>(), w = want.get<double>();
            ok = std::abs(g - w) <= tol;
            if (!ok)
              detail << "|" << g << " - " << w << "| = " << std::abs(g - w) << " > " << tol
                     << " at " << where;
          } else {
            ok = *got == want;
            if (!ok) detail << "value at " << where << " is " << got->dump() << ", expected "
                            << want.dump();
          }
          if (!ok) {
            fail_class = kExitTolerance;
            fail_detail = detail.str();
            break;
          }
        }
      }
    } catch (const BudgetError& e) {
      fail_class = kExitBudget;
      fail_detail = e.what();
    } catch (const std::exception& e) {
      fail_class = kExitUsage;
      fail_detail = e.what();
    }
    if (fail_class == kExitOk) {
      ++passed;
      out << "run " << name << ": pass\n";
    } else {
      out << "run " << name << ": FAIL (" << fail_detail << ")\n";
      any_usage |= fail_class == kExitUsage;
      any_budget |= fail_class == kExitBudget;
      any_tolerance |= fail_class == kExitTolerance;
    }
  }
  out << "manifest: " << passed << "/" << runs->size() << " passed\n";
  (void)err;
  if (any_usage) return kExitUsage;
  if (any_budget) return kExitBudget;
  if (any_tolerance) return kExitTolerance;
  return kExitOk;
}

// ---- subcommand wiring --------------------------------------------------------

struct LatticeArgs {
  std::string in;
  std::optional<double> search_bound;
};

void add_lattice_commands(CLI::App& app, GlobalOpts& g, std::ostream& out) {
  auto lattice = app.add_subcommand("lattice", "Hermitian lattice invariants");
  lattice->require_subcommand(1);
  lattice->fallthrough();
  auto args = std::make_shared<LatticeArgs>();

  auto add_common = [&](CLI::App* sub, bool with_bound) {
    sub->add_option("--in", args->in, "lattice JSON file")->required();
    if (with_bound)
      sub->add_option("--search-bound", args->search_bound,
                      "squared-length cap for the flag search");
    sub->fallthrough();
  };

  auto load = [args]() { return io::lattice_from_json(io::load_json(args->in)); };
  auto search_opts = [args, &g]() {
    SearchOptions s;
    s.search_bound = args->search_bound;
    s.enum_budget.max_nodes = g.budget_vectors;
    return s;
  };

  add_common(lattice->add_subcommand("degree", "Arakelov degree and slope"), false);
  lattice->get_subcommand("degree")->callback([&, load]() {
    HermitianLattice e = load();
    emit(io::json{{"rank", e.rank()}, {"degree", e.degree()}, {"slope", e.slope()}}, "", g, out);
  });

  add_common(lattice->add_subcommand("h0", "log count of norm <= 1 vectors"), false);
  lattice->get_subcommand("h0")->callback([&, load]() {
    HermitianLattice e = load();
    EnumBudget budget;
    budget.max_nodes = g.budget_vectors;
    emit(io::json{{"h0", h0(e, budget)}}, "", g, out);
  });

  add_common(lattice->add_subcommand("hn", "Harder-Narasimhan polygon and flag"), true);
  lattice->get_subcommand("hn")->callback([&, load, search_opts]() {
    HnPolygonResult r = hn_polygon(load(), search_opts());
    emit(io::to_json(r), io::to_csv(r.normalized_polygon()), g, out);
  });

  add_common(lattice->add_subcommand("degplus", "positive degree and h0 gap"), true);
  lattice->get_subcommand("degplus")->callback([&, load, search_opts]() {
    H0DegPlusReport rep = h0_vs_degplus(load(), search_opts());
    emit(io::to_json(rep), "", g, out);
  });

  add_common(lattice->add_subcommand("minimum", "squared first minimum"), false);
  lattice->get_subcommand("minimum")->callback([&, load]() {
    HermitianLattice e = load();
    EnumBudget budget;
    budget.max_nodes = g.budget_vectors;
    double m = first_minimum(e, budget);
    emit(io::json{{"first_minimum_sq", m}, {"half_log", 0.5 * std::log(m)}}, "", g, out);
  });
}

struct GradedArgs {
  std::string model;
  long long n = 0;
  long long nmax = 0;
  int resolution = 0;
  int q = 2;
  double alpha = 1.0;
  double beta = 1.0;
  double threshold = 0.0;
  std::uint64_t samples = 200'000;
  std::uint64_t dim_budget = 1'000'000;
};

void add_graded_commands(CLI::App& app, GlobalOpts& g, std::ostream& out) {
  auto graded = app.add_subcommand("graded", "quasi-filtered graded algebra models");
  graded->require_subcommand(1);
  graded->fallthrough();
  auto a = std::make_shared<GradedArgs>();

  auto model = [a]() { return io::graded_model_from_json(io::load_json(a->model)); };

  auto measure = graded->add_subcommand("measure", "scaled jump measure of B_n");
  measure->add_option("--model", a->model)->required();
  measure->add_option("--n", a->n)->required();
  measure->add_option("--resolution", a->resolution, "also emit the limit measure");
  measure->add_option("--dim-budget", a->dim_budget);
  measure->fallthrough();
  measure->callback([&, a, model]() {
    io::json j{{"n", a->n}, {"measure", io::to_json(graded_measure(model(), a->n, a->dim_budget))}};
    if (a->resolution > 0) j["limit"] = io::to_json(limit_measure(model(), a->resolution));
    emit(j, "", g, out);
  });

  auto lambda = graded->add_subcommand("lambda", "lambda_max and lambda_plus sequences");
  lambda->add_option("--model", a->model)->required();
  lambda->add_option("--nmax", a->nmax)->required();
  lambda->add_option("--dim-budget", a->dim_budget);
  lambda->fallthrough();
  lambda->callback([&, a, model]() {
    auto rows = lambda_sequences(model(), a->nmax, a->dim_budget);
    emit(io::to_json(rows), io::to_csv(rows), g, out);
  });

  auto bigness = graded->add_subcommand("bigness", "positivity of the scaled limits");
  bigness->add_option("--model", a->model)->required();
  bigness->add_option("--nmax", a->nmax)->required();
  bigness->add_option("--threshold", a->threshold);
  bigness->add_option("--dim-budget", a->dim_budget);
  bigness->fallthrough();
  bigness->callback([&, a, model]() {
    emit(io::to_json(bigness_check(model(), a->nmax, a->threshold, a->dim_budget)), "", g, out);
  });

  auto count = graded->add_subcommand("count", "Noether-normalization counting bound");
  count->add_option("--q", a->q)->required();
  count->add_option("--alpha", a->alpha)->required();
  count->add_option("--beta", a->beta)->required();
  count->add_option("--n", a->n)->required();
  count->fallthrough();
  count->callback([&, a]() {
    emit(io::to_json(counting_bound(a->q, a->alpha, a->beta, a->n)), "", g, out);
  });

  auto audit = graded->add_subcommand("audit", "superadditivity audit of the filtration");
  audit->add_option("--model", a->model)->required();
  audit->add_option("--nmax", a->nmax)->required();
  audit->add_option("--samples", a->samples);
  audit->fallthrough();
  audit->callback([&, a, model]() {
    emit(io::to_json(quasi_filtration_audit(model(), a->nmax, a->samples, g.seed)), "", g, out);
  });
}

struct ArvolArgs {
  std::string family;
  std::string perturb;
  long long nmax = 0;
  double alpha = 0.0;
  std::string p_list = "2,4,8";
  std::string a_grid;
  std::uint64_t exact_budget = 2'000'000;
};

void add_arvol_commands(CLI::App& app, GlobalOpts& g, std::ostream& out) {
  auto arvol = app.add_subcommand("arvol", "arithmetic volume laboratory");
  arvol->require_subcommand(1);
  arvol->fallthrough();
  auto a = std::make_shared<ArvolArgs>();

  auto family = [a]() { return io::family_from_json(io::load_json(a->family)); };
  auto count_opts = [a, &g]() {
    DiagonalCountOptions o;
    o.node_budget = g.budget_vectors;
    o.exact_budget = a->exact_budget;
    return o;
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--family", a->family)->required();
    sub->add_option("--nmax", a->nmax)->required();
    sub->add_option("--exact-budget", a->exact_budget);
    sub->fallthrough();
  };

  auto volume = arvol->add_subcommand("volume", "volume-as-limit report");
  add_common(volume);
  volume->callback([&, a, family, count_opts]() {
    VolumeReport rep = volume_experiment(family(), a->nmax, count_opts());
    emit(io::to_json(rep), io::to_csv(rep), g, out);
  });

  auto polygon = arvol->add_subcommand("polygon", "truncated asymptotic polygon");
  add_common(polygon);
  polygon->add_option("--alpha", a->alpha, "truncation level");
  polygon->callback([&, a, family]() {
    PolygonEstimate est = asymptotic_polygon(family(), a->nmax, a->alpha);
    emit(io::to_json(est), io::to_csv(est.polygon), g, out);
  });

  auto via = arvol->add_subcommand("via-volumes", "polygon recovered from twisted volumes");
  add_common(via);
  via->add_option("--a-grid", a->a_grid, "comma-separated twist grid")->required();
  via->callback([&, a, family, count_opts]() {
    ViaVolumesResult res = polygon_via_volumes(
        family(), parse_double_list(a->a_grid, "--a-grid"), a->nmax, count_opts());
    emit(io::to_json(res), io::to_csv(res.polygon), g, out);
  });

  auto bigness = arvol->add_subcommand("bigness", "bigness criterion and slope bound");
  add_common(bigness);
  bigness->callback([&, a, family, count_opts]() {
    emit(io::to_json(bigness_criterion(family(), a->nmax, g.tolerance, count_opts())), "", g, out);
  });

  auto continuity = arvol->add_subcommand("continuity", "truncated polygon continuity in p");
  add_common(continuity);
  continuity->add_option("--alpha", a->alpha, "truncation level");
  continuity->add_option("--p-list", a->p_list, "comma-separated powers");
  continuity->add_option("--perturb", a->perturb, "perturbation JSON file");
  continuity->callback([&, a, family]() {
    Perturbation pert;
    if (!a->perturb.empty()) pert = io::perturbation_from_json(io::load_json(a->perturb));
    auto rows = continuity_experiment(family(), pert, a->alpha,
                                      parse_int_list(a->p_list, "--p-list"), a->nmax);
    emit(io::to_json(rows), io::to_csv(rows), g, out);
  });
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Harder-Narasimhan measures, polygons, and arithmetic volume experiments"};
  app.name("hnpoly");
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "seed for sampled checks")->capture_default_str();
  app.add_option("--budget-vectors", g.budget_vectors, "enumeration node budget")
      ->capture_default_str();
  app.add_option("--tolerance", g.tolerance, "tolerance for asserted bounds")
      ->capture_default_str();
  app.add_option("--out", g.out_path, "output file (atomic write); stdout when absent");
  app.add_option("--format", g.format, "json|csv (default: by --out extension, else json)")
      ->check(CLI::IsMember({"json", "csv"}));

  add_lattice_commands(app, g, out);
  add_graded_commands(app, g, out);
  add_arvol_commands(app, g, out);

  std::string manifest_path;
  int manifest_code = kExitOk;
  auto run = app.add_subcommand("run", "execute an experiment manifest");
  run->add_option("manifest", manifest_path, "manifest JSON file")->required();
  run->fallthrough();
  run->callback([&]() { manifest_code = run_manifest(manifest_path, out, err); });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  } catch (const BudgetError& e) {
    err << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return manifest_code;
}

}  // namespace hnpoly::cli
