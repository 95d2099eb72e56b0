#pragma once

#include <iosfwd>

#include <nlohmann/json.hpp>

#include "tropic/enumeration.hpp"
#include "tropic/kuranishi.hpp"

namespace tropic {

using Json = nlohmann::ordered_json;

class ParseError : public std::runtime_error {
  public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

RawCurve parse_curve_document(const Json& doc);
RawCurve load_curve_document(const std::string& path);
TropicalCurve load_curve(const std::string& path);

ConstraintSet parse_constraint_document(const Json& doc, size_t ambient_rank);
ConstraintSet load_constraints(const std::string& path, size_t ambient_rank);

// {"configs": [{"vertex": ..., "direction": [...],
//   "nodes": [{"k":..,"l":..,"m":..} | {"a":..,"b":..}],
//   "edges": [{"length":..,"weight":..}]}], "tau": [..]}
struct PreLogDocument {
    std::map<std::string, PreLogPathConfig> configs;
    std::vector<double> taus;
};
PreLogDocument parse_prelog_document(const Json& doc);
PreLogDocument load_prelog(const std::string& path);

Json curve_to_json(const TropicalCurve& curve);

// Full analysis report; every number exact, deterministic key order.
Json analyze_report(const CurveAnalysis& analysis, unsigned seed);
Json validate_report(const CurveAnalysis& analysis);
Json obstruction_report(const CurveAnalysis& analysis);
Json wellspaced_report(const CurveAnalysis& analysis, unsigned seed);
Json kuranishi_report(const PreLogDocument& doc,
                      const CurveAnalysis* analysis, unsigned seed);
Json multiplicity_report(const CurveAnalysis& analysis,
                         const ConstraintSet& cs, unsigned seed);
Json count_report(const CountReport& rep);

std::string emit_report(const Json& report);

// CLI surface. Exit codes: 0 success, 1 domain rejection, 2 usage/parse.
int run_command(int argc, const char* const* argv, std::ostream& out,
                std::ostream& err);

}  // namespace tropic
