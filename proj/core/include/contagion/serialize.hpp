#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "contagion/analytic.hpp"
#include "contagion/degree_model.hpp"
#include "contagion/diffusion.hpp"

namespace contagion {

using json = nlohmann::json;

/// A model description that failed validation. `path` is a JSON pointer to
/// the offending field (empty when the problem is not tied to one field).
class FieldError : public ConfigurationError {
public:
    FieldError(std::string path, const std::string& message)
        : ConfigurationError(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

// Degree laws:  {"kind":"poisson","lambda":5.0,"support_max":64}
//               {"kind":"explicit","mass":[0, 0, 0, 0.888, 0.111]}
//               {"kind":"power_law","gamma":2.5,"support_max":10000}
//               {"kind":"regular","r":3}
json to_json(const DegreeDistribution& p);
DegreeDistribution degree_from_json(const json& j, const std::string& path = "");

// Threshold laws: {"kind":"proportional","q":0.15}, {"kind":"constant","k":1},
//                 {"kind":"zero"}, {"kind":"table","rows":[[1],[0.5,0.5],...]}
json to_json(const ThresholdLaw& t);
ThresholdLaw threshold_from_json(const json& j, const std::string& path = "");

// Activation laws: {"kind":"none"}, {"kind":"uniform","alpha":0.01},
//   {"kind":"degree_based","alpha":{"3":0.1}}, {"kind":"single_vertex","vertex":0},
//   {"kind":"vertex_set","vertices":[0,4]}, {"kind":"pivotal_pair"},
//   {"kind":"random_count","count":46}
json to_json(const ActivationLaw& a);
ActivationLaw activation_from_json(const json& j, const std::string& path = "");

/// Counts only; the active bitmap is included when `with_bitmap` is set.
json to_json(const DiffusionOutcome& out, bool with_bitmap = false);
json to_json(const FixedPointReport& rep);
json to_json(const CascadeReport& rep);

/// Reads a JSON file. Syntax errors become FieldError with a "line L,
/// column C" message.
json read_json_file(const std::string& path);

}  // namespace contagion
