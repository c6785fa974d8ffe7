#pragma once

#include "uq/input_model.hpp"
#include "uq/lra.hpp"
#include "uq/models/eole.hpp"
#include "uq/models/truss.hpp"
#include "uq/pce.hpp"
#include "uq/types.hpp"

#include <nlohmann/json.hpp>

#include <memory>
#include <string>
#include <vector>

namespace uq {

using Json = nlohmann::json;

// ---- CSV (RFC 4180: CRLF records, numeric fields at full precision) ----

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Matrix& data);

struct CsvTable {
  std::vector<std::string> header;
  Matrix data;
};
CsvTable read_csv(const std::string& path);

// ---- JSON serialization (doubles keep their shortest round-trip form) ----

Json to_json(const InputModel& model);
std::shared_ptr<const InputModel> input_model_from_json(const Json& j);

Json to_json(const LraModel& model);
LraModel lra_from_json(const Json& j);

Json to_json(const PceModel& model);
PceModel pce_from_json(const Json& j);

Json to_json(const EoleField& field);
EoleField eole_from_json(const Json& j);

TrussGeometry truss_geometry_from_json(const Json& j);
Json to_json(const TrussGeometry& geometry);

void write_json_file(const std::string& path, const Json& j);
Json read_json_file(const std::string& path);

/// Minimal structural JSON-schema check (type / required / properties /
/// items / additionalProperties / enum). Throws with a path-qualified
/// message on the first violation.
void validate_against_schema(const Json& value, const Json& schema);

}  // namespace uq
