#include "tqsearch/config_io.hpp"

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tqsearch/errors.hpp"

namespace tq {

namespace {

using nlohmann::json;

double parse_double(const std::string& text, const std::string& context) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw contract_error("cannot parse number '" + text + "' in " + context);
  }
  if (used != text.size()) {
    throw contract_error("trailing characters in number '" + text + "' in " +
                         context);
  }
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = text.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

void require_keys(const json& doc, const std::set<std::string>& allowed,
                  const char* what) {
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (allowed.count(it.key()) == 0) {
      throw contract_error(std::string("unknown ") + what + " field '" +
                           it.key() + "'");
    }
  }
}

double json_double(const json& j, const char* field) {
  if (!j.is_number()) {
    throw contract_error(std::string("field '") + field + "' must be a number");
  }
  return j.get<double>();
}

std::vector<double> json_double_array(const json& j, const char* field) {
  if (!j.is_array()) {
    throw contract_error(std::string("field '") + field + "' must be an array");
  }
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(json_double(v, field));
  return out;
}

NoiseMap map_from_json(const json& doc, double mu) {
  if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string()) {
    throw contract_error("noise map spec needs a string 'kind'");
  }
  const std::string kind = doc["kind"].get<std::string>();
  if (kind == "constant") {
    require_keys(doc, {"kind", "a"}, "noise map");
    return NoiseMap::constant(json_double(doc.at("a"), "a"), mu);
  }
  if (kind == "affine") {
    require_keys(doc, {"kind", "a", "b"}, "noise map");
    return NoiseMap::affine(json_double(doc.at("a"), "a"),
                            json_double(doc.at("b"), "b"), mu);
  }
  if (kind == "table") {
    require_keys(doc, {"kind", "q", "f"}, "noise map");
    return NoiseMap::table(json_double_array(doc.at("q"), "q"),
                           json_double_array(doc.at("f"), "f"), mu);
  }
  throw contract_error("unknown noise map kind '" + kind + "'");
}

json map_to_json(const NoiseMap& map) {
  switch (map.kind()) {
    case NoiseMap::Kind::Constant:
      return {{"kind", "constant"}, {"a", map.a()}};
    case NoiseMap::Kind::Affine:
      return {{"kind", "affine"}, {"a", map.a()}, {"b", map.b()}};
    case NoiseMap::Kind::Table:
      return {{"kind", "table"}, {"q", map.table_q()}, {"f", map.table_f()}};
  }
  throw contract_error("unreachable noise map kind");
}

}  // namespace

NoiseMap noise_map_from_shorthand(const std::string& text) {
  std::size_t colon = text.find(':');
  if (colon == std::string::npos) {
    throw contract_error("noise map shorthand '" + text +
                         "' lacks a kind prefix like 'const:'");
  }
  const std::string kind = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);
  if (kind == "const") {
    return NoiseMap::constant(parse_double(rest, "'" + text + "'"));
  }
  if (kind == "affine") {
    auto parts = split(rest, ',');
    if (parts.size() != 2) {
      throw contract_error("affine shorthand wants two numbers: '" + text + "'");
    }
    return NoiseMap::affine(parse_double(parts[0], "'" + text + "'"),
                            parse_double(parts[1], "'" + text + "'"));
  }
  if (kind == "table") {
    std::vector<double> qs, fs;
    for (const auto& knot : split(rest, ',')) {
      auto kv = split(knot, '=');
      if (kv.size() != 2) {
        throw contract_error("table knot '" + knot + "' is not q=f in '" +
                             text + "'");
      }
      qs.push_back(parse_double(kv[0], "'" + text + "'"));
      fs.push_back(parse_double(kv[1], "'" + text + "'"));
    }
    return NoiseMap::table(std::move(qs), std::move(fs));
  }
  throw contract_error("unknown noise map shorthand kind '" + kind + "'");
}

NoiseModel noise_from_family(const std::string& family, NoiseMap map) {
  if (family == "bsc") return NoiseModel::bsc(std::move(map));
  if (family == "bec") return NoiseModel::bec(std::move(map));
  if (family == "custom") {
    throw contract_error(
        "custom channels carry transition tables; supply them via a JSON "
        "config");
  }
  throw contract_error("unknown channel family '" + family + "'");
}

NoiseModel noise_from_json(const json& doc) {
  if (!doc.is_object()) throw contract_error("noise spec must be an object");
  if (!doc.contains("family") || !doc["family"].is_string()) {
    throw contract_error("noise spec needs a string 'family'");
  }
  if (!doc.contains("f")) throw contract_error("noise spec needs a map 'f'");
  const std::string family = doc["family"].get<std::string>();
  double mu = -1.0;
  if (doc.contains("mu")) mu = json_double(doc["mu"], "mu");

  if (family == "bsc" || family == "bec") {
    require_keys(doc, {"family", "f", "mu"}, "noise spec");
    NoiseMap map = map_from_json(doc["f"], mu);
    return family == "bsc" ? NoiseModel::bsc(std::move(map))
                           : NoiseModel::bec(std::move(map));
  }
  if (family == "custom") {
    require_keys(doc, {"family", "f", "mu", "levels", "tables", "alphabet"},
                 "noise spec");
    for (const char* field : {"levels", "tables", "alphabet"}) {
      if (!doc.contains(field)) {
        throw contract_error(std::string("custom noise spec needs '") + field +
                             "'");
      }
    }
    std::vector<double> levels = json_double_array(doc["levels"], "levels");
    if (!doc["tables"].is_array()) {
      throw contract_error("field 'tables' must be an array of arrays");
    }
    std::vector<std::vector<double>> tables;
    for (const auto& row : doc["tables"]) {
      tables.push_back(json_double_array(row, "tables"));
    }
    if (!doc["alphabet"].is_array()) {
      throw contract_error("field 'alphabet' must be an array of strings");
    }
    std::vector<std::string> alphabet;
    for (const auto& sym : doc["alphabet"]) {
      if (!sym.is_string()) {
        throw contract_error("field 'alphabet' must be an array of strings");
      }
      alphabet.push_back(sym.get<std::string>());
    }
    return NoiseModel::custom(map_from_json(doc["f"], mu), std::move(levels),
                              std::move(tables), std::move(alphabet));
  }
  throw contract_error("unknown channel family '" + family + "'");
}

json noise_to_json(const NoiseModel& noise) {
  json out;
  switch (noise.family()) {
    case Family::Bsc:
      out["family"] = "bsc";
      break;
    case Family::Bec:
      out["family"] = "bec";
      break;
    case Family::Custom:
      out["family"] = "custom";
      break;
  }
  out["f"] = map_to_json(noise.noise_map());
  out["mu"] = noise.mu();
  if (noise.family() == Family::Custom) {
    out["levels"] = noise.levels();
    out["tables"] = noise.tables();
    out["alphabet"] = noise.alphabet();
  }
  return out;
}

ExperimentConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw contract_error("config must be a JSON object");
  require_keys(doc,
               {"noise", "k", "d", "eps", "n", "runs_per_batch", "batches",
                "seed", "M", "gamma", "p", "budget", "fixed_codebook",
                "threads", "timing"},
               "config");
  if (!doc.contains("noise")) throw contract_error("config needs a 'noise' spec");
  ExperimentConfig cfg(noise_from_json(doc["noise"]));
  try {
    if (doc.contains("k")) cfg.k = doc["k"].get<int>();
    if (doc.contains("d")) cfg.d = doc["d"].get<int>();
    if (doc.contains("eps")) cfg.eps = json_double(doc["eps"], "eps");
    if (doc.contains("n")) {
      if (doc["n"].is_array()) {
        for (const auto& v : doc["n"]) cfg.n_list.push_back(v.get<long long>());
      } else {
        cfg.n_list.push_back(doc["n"].get<long long>());
      }
    }
    if (doc.contains("runs_per_batch")) {
      cfg.runs_per_batch = doc["runs_per_batch"].get<long long>();
    }
    if (doc.contains("batches")) cfg.batches = doc["batches"].get<int>();
    if (doc.contains("seed")) cfg.master_seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("M")) cfg.m_override = doc["M"].get<long long>();
    if (doc.contains("gamma")) cfg.gamma_override = json_double(doc["gamma"], "gamma");
    if (doc.contains("p")) cfg.p_override = json_double(doc["p"], "p");
    if (doc.contains("budget")) cfg.decode_budget = doc["budget"].get<long long>();
    if (doc.contains("fixed_codebook")) {
      cfg.fixed_codebook = doc["fixed_codebook"].get<bool>();
    }
    if (doc.contains("threads")) cfg.threads = doc["threads"].get<int>();
    if (doc.contains("timing")) cfg.timing = doc["timing"].get<bool>();
  } catch (const json::exception& e) {
    throw contract_error(std::string("malformed config: ") + e.what());
  }
  return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
  return {{"noise", noise_to_json(cfg.noise)},
          {"k", cfg.k},
          {"d", cfg.d},
          {"eps", cfg.eps},
          {"n", cfg.n_list},
          {"runs_per_batch", cfg.runs_per_batch},
          {"batches", cfg.batches},
          {"seed", cfg.master_seed},
          {"M", cfg.m_override},
          {"gamma", cfg.gamma_override},
          {"p", cfg.p_override},
          {"budget", cfg.decode_budget},
          {"fixed_codebook", cfg.fixed_codebook},
          {"threads", cfg.threads},
          {"timing", cfg.timing}};
}

json rac_report_to_json(const RacReport& report) {
  return {{"permutation_invariant", report.permutation_invariant},
          {"reducible", report.reducible},
          {"friendly", report.friendly},
          {"interference", report.interference},
          {"permutation_deviation", report.permutation_deviation},
          {"reducibility_deviation", report.reducibility_deviation},
          {"friendliness_margin", report.friendliness_margin},
          {"interference_deviation", report.interference_deviation},
          {"witness", report.witness},
          {"all_hold", report.all_hold()}};
}

}  // namespace tq
