#include "json.hpp"

#include "estraus/triple.hpp"

namespace estraus {

std::string to_json_line(const Decomposition& d) {
  nlohmann::ordered_json j;
  j["n"] = d.n;
  j["x"] = d.triple.x;
  j["y"] = d.triple.y;
  j["z"] = d.triple.z;
  j["method"] = to_string(d.method);
  nlohmann::ordered_json params(nlohmann::json::value_t::object);
  for (const auto& [k, v] : d.params) params[k] = v;  // std::map: keys already sorted
  j["params"] = std::move(params);
  return j.dump();
}

Decomposition decomposition_from_json(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("bad decomposition record: ") + e.what());
  }
  try {
    const u64 n = j.at("n").get<u64>();
    UnitTriple t{j.at("x").get<u64>(), j.at("y").get<u64>(), j.at("z").get<u64>()};
    const auto method = method_from_string(j.at("method").get<std::string>());
    if (!method) {
      throw std::runtime_error("bad decomposition record: unknown method \"" +
                               j.at("method").get<std::string>() + "\"");
    }
    std::map<std::string, u64> params;
    if (j.contains("params")) {
      for (const auto& [k, v] : j.at("params").items()) params[k] = v.get<u64>();
    }
    return Decomposition::make(n, t, *method, std::move(params));
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("bad decomposition record: ") + e.what());
  }
}

}  // namespace estraus
