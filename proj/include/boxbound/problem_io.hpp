#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "boxbound/geometry.hpp"
#include "boxbound/measure.hpp"
#include "boxbound/screening.hpp"

namespace boxbound {

inline constexpr int kFormatVersion = 1;

// Geometry input document:
//   { "dimension": n,
//     "measure": {"type": "uniform", "lower": [...], "upper": [...]}
//              | {"type": "independent", "marginals": [
//                   {"type": "uniform", "a": ., "b": .}
//                 | {"type": "piecewise", "knots": [...], "values": [...]} ]},
//     "boxes": [ {"id": "A1", "lower": [...], "upper": [...]}, ... ],
//     "mode": "closed" | "positive-measure"   (optional) }
struct ProblemFile {
    std::size_t dimension = 0;
    ProductMeasure measure;
    std::vector<Box> boxes;
    std::optional<EmptinessMode> mode;

    EmptinessMode effective_mode() const { return mode.value_or(default_mode(measure)); }
};

EmptinessMode parse_mode(const std::string& text);

ProblemFile parse_problem(const nlohmann::json& doc);
nlohmann::json to_json(const ProblemFile& problem);

// Reads a JSON document from a path, or from stdin when path is "-".
nlohmann::json read_json(const std::string& path);

// Moment document, as written by the `moments` subcommand:
//   { "format_version": 1, "kind": "moments", "n_events": N, "m": m,
//     "S": [S_1, ..., S_m], "Q": q (optional) }
bool is_moment_document(const nlohmann::json& doc);
MomentVector parse_moments(const nlohmann::json& doc);
nlohmann::json to_json(const MomentVector& moments);

}  // namespace boxbound
