#include "apq/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>

#include "apq/errors.hpp"

namespace apq {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw validation_error(path.empty() ? msg : path + ": " + msg);
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path, "expected a JSON object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) fail(path.empty() ? item.key() : path + "." + item.key(), "unknown field");
  }
}

double get_number(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) fail(path + "." + key, "missing required field");
  const json& v = j.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

int get_int(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) fail(path + "." + key, "missing required field");
  const json& v = j.at(key);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<int>();
}

std::string get_string(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) fail(path + "." + key, "missing required field");
  const json& v = j.at(key);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

std::vector<double> get_number_array(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) fail(path + "." + key, "missing required field");
  const json& v = j.at(key);
  if (!v.is_array()) fail(path + "." + key, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) fail(path + "." + key, "expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

json jump_to_json(const JumpDist& jumps) {
  return std::visit(
      [](const auto& d) -> json {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, JumpDist::Exponential>) {
          return {{"type", "exponential"}, {"mean", d.mean}};
        } else if constexpr (std::is_same_v<T, JumpDist::Deterministic>) {
          return {{"type", "deterministic"}, {"size", d.size}};
        } else if constexpr (std::is_same_v<T, JumpDist::Erlang>) {
          return {{"type", "erlang"}, {"shape", d.shape}, {"mean", d.mean}};
        } else {
          return {{"type", "hyperexponential"}, {"weights", d.weights}, {"means", d.means}};
        }
      },
      jumps.variant());
}

JumpDist jump_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected a JSON object");
  const std::string type = get_string(j, path, "type");
  try {
    if (type == "exponential") {
      check_keys(j, path, {"type", "mean"});
      return JumpDist::exponential(get_number(j, path, "mean"));
    }
    if (type == "deterministic") {
      check_keys(j, path, {"type", "size"});
      return JumpDist::deterministic(get_number(j, path, "size"));
    }
    if (type == "erlang") {
      check_keys(j, path, {"type", "shape", "mean"});
      return JumpDist::erlang(get_int(j, path, "shape"), get_number(j, path, "mean"));
    }
    if (type == "hyperexponential") {
      check_keys(j, path, {"type", "weights", "means"});
      return JumpDist::hyperexponential(get_number_array(j, path, "weights"),
                                        get_number_array(j, path, "means"));
    }
  } catch (const validation_error& e) {
    fail(path, e.what());
  }
  fail(path + ".type", "unknown jump distribution '" + type + "'");
}

}  // namespace

json to_json(const SubordinatorSpec& spec) {
  json comps = json::array();
  for (const auto& comp : spec.components()) {
    comps.push_back(std::visit(
        [](const auto& c) -> json {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, CompoundPoisson>) {
            return {{"type", "compound_poisson"}, {"rate", c.rate}, {"jumps", jump_to_json(c.jumps)}};
          } else if constexpr (std::is_same_v<T, GammaProcess>) {
            return {{"type", "gamma"}, {"shape_rate", c.shape_rate}, {"scale_rate", c.scale_rate}};
          } else {
            return {{"type", "inverse_gaussian"}, {"delta", c.delta}, {"gamma", c.gamma}};
          }
        },
        comp));
  }
  return {{"drift", spec.drift()}, {"components", comps}};
}

SubordinatorSpec subordinator_from_json(const json& j, const std::string& path) {
  check_keys(j, path, {"drift", "components"});
  double drift = 0.0;
  if (j.contains("drift")) {
    if (!j.at("drift").is_number()) fail(path + ".drift", "expected a number");
    drift = j.at("drift").get<double>();
  }
  if (!j.contains("components")) fail(path + ".components", "missing required field");
  if (!j.at("components").is_array()) fail(path + ".components", "expected an array");

  std::vector<Component> comps;
  std::size_t idx = 0;
  for (const auto& cj : j.at("components")) {
    const std::string cpath = path + ".components[" + std::to_string(idx++) + "]";
    const std::string type = get_string(cj, cpath, "type");
    if (type == "compound_poisson") {
      check_keys(cj, cpath, {"type", "rate", "jumps"});
      if (!cj.contains("jumps")) fail(cpath + ".jumps", "missing required field");
      comps.push_back(CompoundPoisson{get_number(cj, cpath, "rate"),
                                      jump_from_json(cj.at("jumps"), cpath + ".jumps")});
    } else if (type == "gamma") {
      check_keys(cj, cpath, {"type", "shape_rate", "scale_rate"});
      comps.push_back(
          GammaProcess{get_number(cj, cpath, "shape_rate"), get_number(cj, cpath, "scale_rate")});
    } else if (type == "inverse_gaussian") {
      check_keys(cj, cpath, {"type", "delta", "gamma"});
      comps.push_back(
          InverseGaussianProcess{get_number(cj, cpath, "delta"), get_number(cj, cpath, "gamma")});
    } else {
      fail(cpath + ".type", "unknown component '" + type + "'");
    }
  }
  try {
    return SubordinatorSpec(drift, std::move(comps));
  } catch (const validation_error& e) {
    fail(path, e.what());
  }
}

json to_json(const ApModel& model) {
  json classes = json::array();
  for (const auto& cls : model.given_classes()) {
    classes.push_back({{"b", cls.b}, {"input", to_json(cls.input)}});
  }
  return {{"service_rate", model.service_rate()}, {"classes", classes}};
}

ApModel model_from_json(const json& j) {
  check_keys(j, "", {"service_rate", "classes"});
  double service_rate = 1.0;
  if (j.contains("service_rate")) {
    if (!j.at("service_rate").is_number()) fail("service_rate", "expected a number");
    service_rate = j.at("service_rate").get<double>();
  }
  if (!j.contains("classes")) fail("classes", "missing required field");
  if (!j.at("classes").is_array()) fail("classes", "expected an array");

  std::vector<ClassSpec> classes;
  std::size_t idx = 0;
  for (const auto& cj : j.at("classes")) {
    const std::string cpath = "classes[" + std::to_string(idx++) + "]";
    check_keys(cj, cpath, {"b", "input"});
    if (!cj.contains("input")) fail(cpath + ".input", "missing required field");
    classes.push_back(
        {subordinator_from_json(cj.at("input"), cpath + ".input"), get_number(cj, cpath, "b")});
  }
  return ApModel(std::move(classes), service_rate);
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001B3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string model_hash(const ApModel& model) { return fnv1a_hex(to_json(model).dump()); }

ModelFile load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open model file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw validation_error("model file '" + path + "' is not valid JSON: " + e.what());
  }
  ApModel model = model_from_json(j);
  return {model, model_hash(model)};
}

}  // namespace apq
