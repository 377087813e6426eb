#include "hnpoly/json_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hnpoly::io {

namespace {

double parse_position(const json& v) {
  if (v.is_string()) {
    const std::string& s = v.get_ref<const std::string&>();
    char* end = nullptr;
    double x = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
      throw std::invalid_argument("measure: bad position string '" + s + "'");
    return x;
  }
  return v.get<double>();
}

const json& require(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end())
    throw std::invalid_argument(std::string("missing required field '") + key + "'");
  return *it;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::yes:
      return "yes";
    case Verdict::no:
      return "no";
    default:
      return "undetermined";
  }
}

const char* trend_name(Trend t) {
  switch (t) {
    case Trend::positive:
      return "positive";
    case Trend::nonpositive:
      return "nonpositive";
    default:
      return "undetermined";
  }
}

json limit_json(const LimitEstimate& e) { return json{{"value", e.value}, {"error", e.error}}; }

}  // namespace

std::string double_repr(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ---- core types ------------------------------------------------------------

json to_json(const AtomicMeasure& nu) {
  json atoms = json::array();
  for (const Atom& a : nu.atoms())
    atoms.push_back(json::array({double_repr(a.position), a.mass.num(), a.mass.den()}));
  return json{{"atoms", std::move(atoms)}};
}

AtomicMeasure measure_from_json(const json& j) {
  std::vector<Atom> atoms;
  for (const json& row : require(j, "atoms")) {
    if (!row.is_array() || row.size() != 3)
      throw std::invalid_argument("measure: each atom must be [position, mass_num, mass_den]");
    atoms.push_back(
        Atom{parse_position(row[0]), Rational(row[1].get<long long>(), row[2].get<long long>())});
  }
  return AtomicMeasure::from_atoms(std::move(atoms));
}

json to_json(const Polygon& p) {
  json pts = json::array();
  for (const PolygonPoint& pt : p.points())
    pts.push_back(json::array({pt.t.num(), pt.t.den(), pt.value}));
  return json{{"breakpoints", std::move(pts)}};
}

Polygon polygon_from_json(const json& j) {
  std::vector<PolygonPoint> pts;
  for (const json& row : require(j, "breakpoints")) {
    if (!row.is_array() || row.size() != 3)
      throw std::invalid_argument("polygon: each breakpoint must be [t_num, t_den, value]");
    pts.push_back(
        PolygonPoint{Rational(row[0].get<long long>(), row[1].get<long long>()),
                     row[2].get<double>()});
  }
  return Polygon::from_points(std::move(pts));
}

std::string to_csv(const Polygon& p) {
  std::ostringstream os;
  os << "t,value\n";
  for (const PolygonPoint& pt : p.points())
    os << double_repr(pt.t.to_double()) << ',' << double_repr(pt.value) << '\n';
  return os.str();
}

json to_json(const FilteredSpace& v) {
  json steps = json::array();
  for (const FiltrationStep& s : v.steps()) steps.push_back(json::array({s.jump, s.drop}));
  return json{{"dim", v.dim()}, {"steps", std::move(steps)}};
}

FilteredSpace filtered_from_json(const json& j) {
  std::vector<FiltrationStep> steps;
  for (const json& row : require(j, "steps")) {
    if (!row.is_array() || row.size() != 2)
      throw std::invalid_argument("filtered: each step must be [jump, drop]");
    steps.push_back(FiltrationStep{row[0].get<double>(), row[1].get<int>()});
  }
  return FilteredSpace(require(j, "dim").get<int>(), std::move(steps));
}

json to_json(const HermitianLattice& e) {
  json gram = json::array();
  for (int i = 0; i < e.rank(); ++i) {
    json row = json::array();
    for (int k = 0; k < e.rank(); ++k) row.push_back(e.gram()(i, k));
    gram.push_back(std::move(row));
  }
  return json{{"rank", e.rank()}, {"gram", std::move(gram)}, {"log_index", e.log_index()}};
}

HermitianLattice lattice_from_json(const json& j) {
  const json& gram = require(j, "gram");
  const int r = require(j, "rank").get<int>();
  if (!gram.is_array() || static_cast<int>(gram.size()) != r)
    throw std::invalid_argument("lattice: gram must be a rank x rank array");
  Eigen::MatrixXd g(r, r);
  for (int i = 0; i < r; ++i) {
    if (!gram[i].is_array() || static_cast<int>(gram[i].size()) != r)
      throw std::invalid_argument("lattice: gram must be a rank x rank array");
    for (int k = 0; k < r; ++k) g(i, k) = gram[i][k].get<double>();
  }
  double log_index = j.value("log_index", 0.0);
  return HermitianLattice(std::move(g), log_index);
}

json to_json(const ConcaveProfile& phi) {
  json pts = json::array();
  for (const auto& [t, v] : phi.points()) pts.push_back(json::array({t, v}));
  return pts;
}

namespace {

std::vector<std::pair<double, double>> profile_points_from_json(const json& j) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument("profile: expected a nonempty [[t, value], ...] array");
  std::vector<std::pair<double, double>> pts;
  for (const json& row : j) {
    if (!row.is_array() || row.size() != 2)
      throw std::invalid_argument("profile: each entry must be [t, value]");
    pts.emplace_back(row[0].get<double>(), row[1].get<double>());
  }
  return pts;
}

}  // namespace

ConcaveProfile profile_from_json(const json& j) {
  return ConcaveProfile::from_points(profile_points_from_json(j));
}

json to_json(const GradedModel& m) {
  if (const MonomialModel* mm = std::get_if<MonomialModel>(&m)) {
    json f{{"kind", mm->f.kind == Penalty::Kind::zero
                        ? "zero"
                        : (mm->f.kind == Penalty::Kind::log ? "log" : "sqrt")},
           {"c", mm->f.c}};
    return json{{"kind", "monomial"}, {"weights", mm->weights}, {"f", std::move(f)}};
  }
  const ToricModel& t = std::get<ToricModel>(m);
  return json{{"kind", "toric"}, {"phi", to_json(t.phi)}};
}

GradedModel graded_model_from_json(const json& j) {
  const std::string kind = require(j, "kind").get<std::string>();
  if (kind == "monomial") {
    MonomialModel m;
    m.weights = require(j, "weights").get<std::vector<double>>();
    if (j.contains("f") && !j["f"].is_null()) {
      const json& f = j["f"];
      const std::string fk = require(f, "kind").get<std::string>();
      if (fk == "zero")
        m.f.kind = Penalty::Kind::zero;
      else if (fk == "log")
        m.f.kind = Penalty::Kind::log;
      else if (fk == "sqrt")
        m.f.kind = Penalty::Kind::sqrt;
      else
        throw std::invalid_argument("graded model: penalty kind must be zero|log|sqrt");
      m.f.c = f.value("c", 0.0);
    }
    return m;
  }
  if (kind == "toric") {
    // allow_nonconcave skips the shape check, for negative-control audits.
    if (j.value("allow_nonconcave", false))
      return ToricModel{ConcaveProfile::unchecked(profile_points_from_json(require(j, "phi")))};
    return ToricModel{profile_from_json(require(j, "phi"))};
  }
  throw std::invalid_argument("graded model: kind must be monomial|toric");
}

json to_json(const SectionFamily& f) {
  json j;
  switch (f.kind) {
    case SectionFamily::Kind::diagonal_toric:
      j["kind"] = "diagonal_toric";
      j["phi"] = to_json(f.phi);
      break;
    case SectionFamily::Kind::constant_twist:
      j["kind"] = "constant_twist";
      break;
    case SectionFamily::Kind::custom:
      j["kind"] = "custom";
      j["levels"] = f.slopes_by_level;
      break;
  }
  j["twist"] = f.twist;
  j["power"] = f.power;
  return j;
}

SectionFamily family_from_json(const json& j) {
  const std::string kind = require(j, "kind").get<std::string>();
  const double twist = j.value("twist", 0.0);
  SectionFamily f;
  if (kind == "diagonal_toric")
    f = SectionFamily::diagonal_toric(profile_from_json(require(j, "phi")), twist);
  else if (kind == "constant_twist")
    f = SectionFamily::constant_twist(twist);
  else if (kind == "custom")
    f = SectionFamily::custom(require(j, "levels").get<std::vector<std::vector<double>>>(), twist);
  else
    throw std::invalid_argument(
        "family: kind must be diagonal_toric|constant_twist|custom");
  int power = j.value("power", 1);
  if (power < 1) throw std::invalid_argument("family: power must be >= 1");
  f.power = power;
  return f;
}

Perturbation perturbation_from_json(const json& j) {
  Perturbation p;
  p.b = j.value("b", 0.0);
  if (j.contains("psi") && !j["psi"].is_null()) p.psi = profile_from_json(j["psi"]);
  return p;
}

// ---- reports ----------------------------------------------------------------

json to_json(const HnPolygonResult& r) {
  json vertices = json::array();
  for (const HnVertex& v : r.vertices) vertices.push_back(json::array({v.rank, v.degree}));
  json flag = json::array();
  for (const HnVertex& v : r.flag) flag.push_back(json::array({v.rank, v.degree}));
  return json{{"vertices", std::move(vertices)},
              {"flag", std::move(flag)},
              {"mu_max", r.mu_max()},
              {"positive_degree", r.positive_degree()},
              {"certified", r.certified},
              {"search_bound", r.search_bound},
              {"subspaces_explored", r.subspaces_explored},
              {"polygon", to_json(r.normalized_polygon())},
              {"slope_measure", to_json(r.slope_measure())}};
}

json to_json(const H0DegPlusReport& r) {
  return json{{"h0", r.h0}, {"deg_plus", r.deg_plus}, {"gap", r.gap}};
}

namespace {

json row_json(const VolumeRow& r) {
  return json{{"n", r.n},
              {"h0", r.h0},
              {"h0_lo", r.h0_lo},
              {"h0_hi", r.h0_hi},
              {"h0_exact", r.h0_exact},
              {"deg_plus", r.deg_plus},
              {"col_h0", r.col_h0},
              {"col_deg_plus", r.col_deg_plus},
              {"mu_plus_scaled", r.mu_plus_scaled},
              {"mu_max_over_n", r.mu_max_over_n}};
}

}  // namespace

json to_json(const VolumeReport& r) {
  json rows = json::array();
  for (const VolumeRow& row : r.rows) rows.push_back(row_json(row));
  return json{{"rows", std::move(rows)},
              {"volume", limit_json(r.volume)},
              {"deg_plus_limit", limit_json(r.deg_plus_limit)},
              {"mu_max_limit", limit_json(r.mu_max_limit)},
              {"vol_generic", r.vol_generic},
              {"max_bracket_gap", r.max_bracket_gap}};
}

std::string to_csv(const VolumeReport& r) {
  std::ostringstream os;
  os << "n,h0,h0_lo,h0_hi,h0_exact,deg_plus,col_h0,col_deg_plus,mu_plus_scaled,mu_max_over_n\n";
  for (const VolumeRow& row : r.rows)
    os << row.n << ',' << double_repr(row.h0) << ',' << double_repr(row.h0_lo) << ','
       << double_repr(row.h0_hi) << ',' << (row.h0_exact ? 1 : 0) << ','
       << double_repr(row.deg_plus) << ',' << double_repr(row.col_h0) << ','
       << double_repr(row.col_deg_plus) << ',' << double_repr(row.mu_plus_scaled) << ','
       << double_repr(row.mu_max_over_n) << '\n';
  return os.str();
}

json to_json(const PolygonEstimate& r) {
  return json{{"polygon", to_json(r.polygon)},
              {"error", r.error},
              {"measure", to_json(r.measure)}};
}

json to_json(const ViaVolumesResult& r) {
  json samples = json::array();
  for (const auto& [a, g] : r.dual_samples) samples.push_back(json::array({a, g}));
  return json{{"polygon", to_json(r.polygon)}, {"dual_samples", std::move(samples)}};
}

json to_json(const BignessCriterion& r) {
  return json{{"is_big", verdict_name(r.is_big)},
              {"volume", limit_json(r.volume)},
              {"mu_max_over_n", limit_json(r.mu_max_over_n)},
              {"lower_bound_check", r.lower_bound_check},
              {"has_effective_section", r.has_effective_section},
              {"first_effective_n", r.first_effective_n}};
}

json to_json(const BignessReport& r) {
  return json{{"lambda_max_positive", trend_name(r.lambda_max_positive)},
              {"lambda_plus_positive", trend_name(r.lambda_plus_positive)},
              {"lambda_max_estimate", r.lambda_max_estimate},
              {"lambda_plus_estimate", r.lambda_plus_estimate},
              {"lambda_max_error", r.lambda_max_error},
              {"lambda_plus_error", r.lambda_plus_error},
              {"consistent", r.consistent}};
}

json to_json(const CountingBound& r) {
  return json{{"u_n", r.u_n}, {"v_n", r.v_n}, {"ratio", r.ratio}, {"limit", r.limit}};
}

json to_json(const AuditReport& r) {
  return json{{"pairs_checked", r.pairs_checked},
              {"violations", r.violations},
              {"worst_margin", r.worst_margin},
              {"exhaustive", r.exhaustive}};
}

json to_json(const std::vector<LambdaRow>& rows) {
  json out = json::array();
  for (const LambdaRow& r : rows)
    out.push_back(json{{"n", r.n},
                       {"lambda_max_over_n", r.lambda_max_over_n},
                       {"lambda_plus_over_n", r.lambda_plus_over_n}});
  return json{{"rows", std::move(out)}};
}

std::string to_csv(const std::vector<LambdaRow>& rows) {
  std::ostringstream os;
  os << "n,lambda_max_over_n,lambda_plus_over_n\n";
  for (const LambdaRow& r : rows)
    os << r.n << ',' << double_repr(r.lambda_max_over_n) << ','
       << double_repr(r.lambda_plus_over_n) << '\n';
  return os.str();
}

json to_json(const std::vector<ContinuityRow>& rows) {
  json out = json::array();
  for (const ContinuityRow& r : rows)
    out.push_back(json{{"p", r.p}, {"distance", r.distance}});
  return json{{"rows", std::move(out)}};
}

std::string to_csv(const std::vector<ContinuityRow>& rows) {
  std::ostringstream os;
  os << "p,distance\n";
  for (const ContinuityRow& r : rows) os << r.p << ',' << double_repr(r.distance) << '\n';
  return os.str();
}

// ---- files ------------------------------------------------------------------

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("cannot parse '" + path + "': " + e.what());
  }
}

void write_text_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::invalid_argument("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out) throw std::invalid_argument("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

}  // namespace hnpoly::io
