#pragma once

#include <string>

#include <json.hpp>

#include "hnpoly/arvol.hpp"
#include "hnpoly/filtered.hpp"
#include "hnpoly/graded.hpp"
#include "hnpoly/lattice.hpp"
#include "hnpoly/measure.hpp"
#include "hnpoly/polygon.hpp"

namespace hnpoly::io {

// Insertion-ordered documents keep output byte-stable across runs.
using json = nlohmann::ordered_json;

// ---- core types ----------------------------------------------------------
json to_json(const AtomicMeasure& nu);
AtomicMeasure measure_from_json(const json& j);

json to_json(const Polygon& p);
Polygon polygon_from_json(const json& j);
std::string to_csv(const Polygon& p);

json to_json(const FilteredSpace& v);
FilteredSpace filtered_from_json(const json& j);

json to_json(const HermitianLattice& e);
HermitianLattice lattice_from_json(const json& j);

json to_json(const ConcaveProfile& phi);
ConcaveProfile profile_from_json(const json& j);

json to_json(const GradedModel& m);
GradedModel graded_model_from_json(const json& j);

json to_json(const SectionFamily& f);
SectionFamily family_from_json(const json& j);
Perturbation perturbation_from_json(const json& j);

// ---- reports --------------------------------------------------------------
json to_json(const HnPolygonResult& r);
json to_json(const H0DegPlusReport& r);
json to_json(const VolumeReport& r);
std::string to_csv(const VolumeReport& r);
json to_json(const PolygonEstimate& r);
json to_json(const ViaVolumesResult& r);
json to_json(const BignessCriterion& r);
json to_json(const BignessReport& r);
json to_json(const CountingBound& r);
json to_json(const AuditReport& r);
json to_json(const std::vector<LambdaRow>& rows);
std::string to_csv(const std::vector<LambdaRow>& rows);
json to_json(const std::vector<ContinuityRow>& rows);
std::string to_csv(const std::vector<ContinuityRow>& rows);

// ---- files ----------------------------------------------------------------
/// Full-precision decimal string for a double; round-trips exactly.
std::string double_repr(double x);

json load_json(const std::string& path);  // invalid_argument on any problem
/// Writes via a temp file in the same directory plus rename, so readers never
/// observe partial content.
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace hnpoly::io
