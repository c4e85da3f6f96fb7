#ifndef APQ_JSON_IO_HPP
#define APQ_JSON_IO_HPP

#include <string>
#include <string_view>

#include <json.hpp>

#include "apq/model.hpp"

namespace apq {

// JSON wire formats. Validation errors carry the offending field path
// ("classes[0].input.components[1].rate: ..."). Unknown fields are rejected;
// "drift" (default 0) and "service_rate" (default 1) may be omitted.
nlohmann::json to_json(const SubordinatorSpec& spec);
nlohmann::json to_json(const ApModel& model);

SubordinatorSpec subordinator_from_json(const nlohmann::json& j, const std::string& path = "");
ApModel model_from_json(const nlohmann::json& j);

// FNV-1a 64-bit over the canonical serialization (sorted keys, shortest
// number round-trip) -- whitespace-insensitive and stable across runs.
std::string fnv1a_hex(std::string_view data);
std::string model_hash(const ApModel& model);

struct ModelFile {
  ApModel model;
  std::string hash;
};

ModelFile load_model_file(const std::string& path);

}  // namespace apq

#endif  // APQ_JSON_IO_HPP
