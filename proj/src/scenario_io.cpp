#include "qkdenum/scenario_io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>

namespace qkdenum {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const char* where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) {
    throw ScenarioParseError(std::string(where) + " must be a JSON object");
  }
  for (const char* key : keys) {
    if (!obj.contains(key)) {
      throw ScenarioParseError(std::string(where) + ": missing key \"" + key + "\"");
    }
  }
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (const char* k : keys) known |= (key == k);
    if (!known) {
      throw ScenarioParseError(std::string(where) + ": unknown key \"" + key + "\"");
    }
  }
}

double get_number(const json& obj, const char* where, const char* key) {
  const auto& v = obj.at(key);
  if (!v.is_number()) {
    throw ScenarioParseError(std::string(where) + "." + key + " must be a number");
  }
  return v.get<double>();
}

std::int64_t get_integer(const json& obj, const char* where, const char* key) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) {
    throw ScenarioParseError(std::string(where) + "." + key + " must be an integer");
  }
  return v.get<std::int64_t>();
}

}  // namespace

Scenario scenario_from_json(const json& doc) {
  require_keys(doc, "scenario", {"source", "link", "receiver", "truncation_order"});

  const json& source = doc.at("source");
  require_keys(source, "source", {"lambda_s", "lambda_d", "m_s", "m_d", "m_v"});
  const json& link = doc.at("link");
  require_keys(link, "link", {"alpha", "l_total", "eve_fraction"});
  const json& receiver = doc.at("receiver");
  require_keys(receiver, "receiver", {"p_pl", "eta_pd", "alpha_sift", "alpha_err"});

  Scenario s;
  s.source.lambda_s = get_number(source, "source", "lambda_s");
  s.source.lambda_d = get_number(source, "source", "lambda_d");
  s.source.m_s = get_integer(source, "source", "m_s");
  s.source.m_d = get_integer(source, "source", "m_d");
  s.source.m_v = get_integer(source, "source", "m_v");
  s.link.alpha = get_number(link, "link", "alpha");
  s.link.l_total = get_number(link, "link", "l_total");
  s.link.eve_fraction = get_number(link, "link", "eve_fraction");
  s.receiver.p_pl = get_number(receiver, "receiver", "p_pl");
  s.receiver.eta_pd = get_number(receiver, "receiver", "eta_pd");
  s.receiver.alpha_sift = get_number(receiver, "receiver", "alpha_sift");
  s.receiver.alpha_err = get_number(receiver, "receiver", "alpha_err");
  s.truncation_order = static_cast<int>(get_integer(doc, "scenario", "truncation_order"));
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ScenarioParseError("cannot open scenario file: " + path.string());
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ScenarioParseError("scenario file " + path.string() + ": " + e.what());
  }
  Scenario s = scenario_from_json(doc);
  ensure_valid(s);
  return s;
}

json to_json(const Scenario& s) {
  return json{
      {"source",
       {{"lambda_s", s.source.lambda_s},
        {"lambda_d", s.source.lambda_d},
        {"m_s", s.source.m_s},
        {"m_d", s.source.m_d},
        {"m_v", s.source.m_v}}},
      {"link",
       {{"alpha", s.link.alpha},
        {"l_total", s.link.l_total},
        {"eve_fraction", s.link.eve_fraction}}},
      {"receiver",
       {{"p_pl", s.receiver.p_pl},
        {"eta_pd", s.receiver.eta_pd},
        {"alpha_sift", s.receiver.alpha_sift},
        {"alpha_err", s.receiver.alpha_err}}},
      {"truncation_order", s.truncation_order},
  };
}

std::string scenario_digest(const Scenario& s) {
  // canonical form: nlohmann::json objects iterate key-sorted, so dump() is
  // already order-independent of the source document
  const std::string canonical = to_json(s).dump();
  std::uint64_t hash = 0xCBF29CE484222325ULL;  // FNV-1a 64
  for (unsigned char c : canonical) {
    hash ^= c;
    hash *= 0x100000001B3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return std::string(buf);
}

}  // namespace qkdenum
